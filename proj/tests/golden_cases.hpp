#pragma once

// Prompts rebuilt from the values shown in the transcribed task boxes, paired
// with the golden file they must reproduce byte for byte.

#include <algorithm>
#include <string>
#include <vector>

#include "test_util.hpp"

namespace testutil {

struct GoldenCase {
    std::string name;
    std::string actual;
    std::string expected;
};

inline std::vector<GoldenCase> golden_cases() {
    using namespace cogbench;
    using namespace cogbench::envs;
    std::vector<GoldenCase> out;
    auto add = [&](const std::string& file, std::string actual) {
        out.push_back({file, std::move(actual), golden(file)});
    };

    add("probabilistic_reasoning.txt",
        render_prompt(urn_query(UrnTaskInstance{UrnCondition::informative_likelihood, 0.6, 0.8, BallColor::red, 1}),
                      PromptMode::base));

    const std::vector<HorizonObservation> hh{{1, 15}, {0, 37}, {0, 28}, {1, 11}};
    add("horizon.txt", render_prompt(letter_query(horizon_prompt(hh, 1), {"F", "J"}, "A: Machine"), PromptMode::base));

    {
        std::vector<RestlessEntry> h{{0, 0.43, 54}, {0, 0.53, 57}, {0, 0.88, 70}};
        for (int t = 4; t <= 16; ++t) h.push_back({t % 2, 0.5, 50});
        for (RestlessEntry e : {RestlessEntry{1, 0.99, 59}, RestlessEntry{1, 0.44, 45}, RestlessEntry{0, 0.06, 61},
                                RestlessEntry{0, 0.51, 64}, RestlessEntry{0, 0.37, 59}, RestlessEntry{0, 0.54, 42}})
            h.push_back(e);
        const ChoiceQuery q{restless_confidence_prompt(h, 1), AnswerKind::confidence_0_1, {},
                            std::string(restless_confidence_prefix)};
        std::string text = render_prompt(q, PromptMode::base);
        // the box elides trials 4..16
        const auto from = text.find("t=4:");
        const auto to = text.find("t=17:");
        if (from != std::string::npos && to != std::string::npos) text.replace(from, to - from, "...\n");
        add("restless_bandit_confidence.txt", text);
    }

    {
        CasinoSet set;
        set.casinos = {Casino{{"B", "X"}, {0.25, 0.75}}, Casino{{"E", "G"}, {0.25, 0.25}},
                       Casino{{"R", "S"}, {0.75, 0.75}}, Casino{{"Q", "D"}, {0.75, 0.25}}};
        set.visit_order = {3, 0, 0, 2, 3};
        for (int c = 0; c < 4; ++c)
            while (std::count(set.visit_order.begin(), set.visit_order.end(), c) < 24) set.visit_order.push_back(c);
        const std::vector<CasinoVisit> h{{3, 0, 0.0}, {0, 0, 1.0}, {0, 0, 0.0}, {2, 0, 0.0}};
        add("instrumental_learning.txt",
            render_prompt(letter_query(casino_prompt(set, h), {"Q", "D"}, "A: Machine"), PromptMode::base));
    }

    const std::vector<TwoStepDay> days{{1, 1, 0, true}, {1, 0, 0, true}, {1, 1, 0, false}, {1, 0, 0, true}};
    add("two_step.txt",
        render_prompt(letter_query(two_step_second_prompt(days, 1, 1), {"J", "K"}, "A: Alien"), PromptMode::base));

    {
        const Choice one{std::string("1")};
        DiscountingEnvironment env;
        add("temporal_discounting_gain_first.txt", render_prompt(env.next()->query, PromptMode::base));
        // finish both gain ladders, then option 1 twice on the loss ladder
        while (env.next()->meta.at("item") != "loss_500") env.resolve(one);
        env.resolve(one);
        env.resolve(one);
        add("temporal_discounting_loss_chain.txt", render_prompt(env.next()->query, PromptMode::base));
        while (env.next()->meta.at("kind") == "baseline") env.resolve(one);
        while (auto p = env.next()) {
            add("temporal_discounting_" + p->meta.at("item").get<std::string>() + ".txt",
                render_prompt(p->query, PromptMode::base));
            env.resolve(one);
        }
    }

    {
        BartInstance inst;
        inst.type_class = {32, 8, 128};
        inst.balloon_types = {0, 2, 0, 2, 0};
        for (int t = 0; t < 3; ++t)
            while (std::count(inst.balloon_types.begin(), inst.balloon_types.end(), t) < 10) inst.balloon_types.push_back(t);
        inst.pop_points.assign(30, 1000);
        inst.pop_points[2] = 7;
        BartEnvironment env(inst);
        const int pumps[] = {1, 4, 7, 5};
        for (int b = 0; b < 4; ++b) {
            for (int k = 0; k < pumps[b]; ++k) env.step(b, BartAction::inflate);
            if (b != 2) env.step(b, BartAction::skip);  // balloon 3 pops on its 7th pump
        }
        add("bart.txt", render_prompt(env.next()->query, PromptMode::base));
    }

    const auto q = letter_query(horizon_prompt({}, 1), {"F", "J"}, "A: Machine");
    out.push_back({"suffix_cot.txt", render_prompt(q, PromptMode::cot), q.prompt_text + "\n\n" + golden("suffix_cot.txt")});
    out.push_back({"suffix_sb.txt", render_prompt(q, PromptMode::sb), q.prompt_text + "\n\n" + golden("suffix_sb.txt")});
    return out;
}

}  // namespace testutil
