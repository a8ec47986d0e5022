// Core types, parsing, episodes, environments and prompt text.

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "golden_cases.hpp"
#include "test_util.hpp"

using namespace cogbench;
using namespace cogbench::envs;

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

ChoiceQuery letters(std::vector<std::string> tokens, std::string prefix = "A: Machine") {
    return ChoiceQuery{"Q: pick", AnswerKind::letter_choice, std::move(tokens), std::move(prefix)};
}

class ThrowingAgent final : public Agent {
public:
    std::string respond(const TrialContext&) override { throw EndpointError("endpoint down"); }
    std::string describe() const override { return "throwing"; }
};

}  // namespace

// ---- random streams ----------------------------------------------------------

TEST(Random, SameSeedAndLabelReplay) {
    SeededStream a(42, "x"), b(42, "x");
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Random, LabelsAndSeedsSeparateStreams) {
    SeededStream a(42, "x"), b(42, "y"), c(43, "x");
    const auto va = a.next_u64();
    EXPECT_NE(va, b.next_u64());
    EXPECT_NE(va, c.next_u64());
}

TEST(Random, KnownSplitmixValue) {
    // Reference output of splitmix64 for state 0.
    std::uint64_t s = 0;
    EXPECT_EQ(splitmix64(s), 0xE220A8397B1DCDAFULL);
}

TEST(Random, UniformIntStaysInRange) {
    SeededStream s(1, "int");
    std::set<std::int64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = s.uniform_int(3, 7);
        ASSERT_GE(v, 3);
        ASSERT_LE(v, 7);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 5u);
}

TEST(Random, NormalMoments) {
    SeededStream s(7, "normal");
    std::vector<double> xs;
    for (int i = 0; i < 20000; ++i) xs.push_back(s.normal(3.0, 2.0));
    EXPECT_NEAR(mean_of(xs), 3.0, 0.05);
    EXPECT_NEAR(sd_of(xs), 2.0, 0.05);
}

// ---- parsing -------------------------------------------------------------------

TEST(Parse, MachineLetterAfterStub) {
    auto c = parse_reply("Machine F.", letters({"F", "J"}));
    ASSERT_TRUE(c);
    EXPECT_EQ(choice_token(*c), "F");
}

TEST(Parse, ConfidenceLiteral) {
    const ChoiceQuery q{"Q", AnswerKind::confidence_0_1, {}, "A: On a scale from 0 to 1, I am confident at 0."};
    auto c = parse_reply("I am confident at 0.73", q);
    ASSERT_TRUE(c);
    EXPECT_DOUBLE_EQ(choice_value(*c), 0.73);
}

TEST(Parse, DigitsContinueZeroPointStub) {
    const ChoiceQuery q{"Q", AnswerKind::probability_0_1, {}, "A: ... to be 0."};
    auto c = parse_reply("86", q);
    ASSERT_TRUE(c);
    EXPECT_DOUBLE_EQ(choice_value(*c), 0.86);
}

TEST(Parse, FinalAnswerMarkerInReasoningModes) {
    const ChoiceQuery q{"Q", AnswerKind::binary_option, {"1", "0"}, "A: Option"};
    auto c = parse_reply("Step 1) consider option 0 ... Final answer: Option 1", q, PromptMode::sb);
    ASSERT_TRUE(c);
    EXPECT_EQ(choice_token(*c), "1");
    EXPECT_FALSE(parse_reply("I would say Option 1", q, PromptMode::cot));
}

TEST(Parse, UnparsableReplies) {
    EXPECT_FALSE(parse_reply("no idea", letters({"F", "J"})));
    const ChoiceQuery q{"Q", AnswerKind::probability_0_1, {}, "A: I estimate"};
    EXPECT_FALSE(parse_reply("about 7", q));
}

TEST(Parse, WholeWordTokensOnly) {
    // "Fine" must not be read as machine F.
    auto c = parse_reply("Fine, Machine J", letters({"F", "J"}));
    ASSERT_TRUE(c);
    EXPECT_EQ(choice_token(*c), "J");
}

// ---- episodes ------------------------------------------------------------------

TEST(Episode, HorizonOneHasFourForcedAndOneFree) {
    for (int sim = 0; sim < 8; ++sim) {
        const auto t = testutil::play(TaskId::horizon, RandomOracle{}, 5, sim);
        if (t.trials.front().meta.at("horizon") != 1) continue;
        ASSERT_EQ(t.trials.size(), 5u);
        for (int i = 0; i < 4; ++i) EXPECT_TRUE(t.trials[static_cast<std::size_t>(i)].forced);
        EXPECT_FALSE(t.trials[4].forced);
        return;
    }
    FAIL() << "no horizon-1 game among the first simulations";
}

TEST(Episode, ZeroTrialInstanceGivesEmptyTranscript) {
    UrnTaskInstance inst;
    inst.n_trials = 0;
    UrnEnvironment env(inst);
    testutil::ConstantAgent agent("0.5");
    const auto t = run_episode(env, agent, EpisodeInfo{});
    EXPECT_TRUE(t.trials.empty());
    EXPECT_EQ(agent.calls, 0);
}

TEST(Episode, ScriptedAgentIsDeterministic) {
    auto once = [] {
        auto env = make_environment(TaskId::two_step, 9, 0);
        OracleAgent agent(ScriptedOracle{{"Planet X", "Alien J", "Alien D"}}, TaskId::two_step,
                          episode_stream(9, TaskId::two_step, 0, "agent"));
        return to_jsonl_line(run_episode(*env, agent, EpisodeInfo{0, 9, PromptMode::base}));
    };
    EXPECT_EQ(once(), once());
}

TEST(Episode, FallbackAfterThreeFailedParses) {
    auto env = make_environment(TaskId::bart, 3, 0);
    testutil::ConstantAgent agent("I refuse");
    const auto t = run_episode(*env, agent, EpisodeInfo{0, 3, PromptMode::base});
    ASSERT_FALSE(t.trials.empty());
    for (const auto& r : t.trials) {
        EXPECT_TRUE(r.invalid);
        EXPECT_EQ(r.attempts, 3);
    }
    EXPECT_EQ(t.invalid_count, static_cast<int>(t.trials.size()));
    EXPECT_EQ(agent.calls, 3 * static_cast<int>(t.trials.size()));
}

TEST(Episode, EndpointFailurePropagates) {
    auto env = make_environment(TaskId::horizon, 3, 0);
    ThrowingAgent agent;
    EXPECT_THROW(run_episode(*env, agent, EpisodeInfo{}), EndpointError);
}

TEST(Episode, JsonlRoundTrip) {
    std::vector<Transcript> ts;
    for (TaskId task : all_tasks) ts.push_back(testutil::play(task, RandomOracle{}, 11));
    std::stringstream ss;
    write_jsonl(ss, ts);
    const auto back = read_jsonl(ss);
    ASSERT_EQ(back.size(), ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_EQ(back[i], ts[i]) << to_string(ts[i].task_id);
}

// ---- probabilistic reasoning -----------------------------------------------------

TEST(Urn, PromptStatesWheelAndUrns) {
    const auto q = urn_query(UrnTaskInstance{UrnCondition::informative_likelihood, 0.6, 0.8, BallColor::red, 1});
    EXPECT_NE(q.prompt_text.find("6 sections labeled F"), std::string::npos);
    EXPECT_NE(q.prompt_text.find("(8, 2)"), std::string::npos);
    const auto half = urn_query(UrnTaskInstance{UrnCondition::informative_likelihood, 0.5, 0.8, BallColor::red, 1});
    EXPECT_NE(half.prompt_text.find("5 sections labeled F and 5 sections labeled J"), std::string::npos);
}

TEST(Urn, RedBallFrequency) {
    SeededStream s(1, "urn-mc");
    int red = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
        red += generate_urn_task(UrnCondition::informative_likelihood, 0.6, 0.8, s).drawn_ball == BallColor::red;
    const double expected = 0.6 * 0.8 + 0.4 * 0.2;
    EXPECT_NEAR(static_cast<double>(red) / n, expected, 0.02);
}

TEST(Urn, BayesPosterior) {
    EXPECT_NEAR(bayes_posterior({UrnCondition::informative_likelihood, 0.6, 0.8, BallColor::red, 1}), 0.48 / 0.56, 1e-12);
    EXPECT_DOUBLE_EQ(bayes_posterior({UrnCondition::informative_likelihood, 0.5, 0.5, BallColor::red, 1}), 0.5);
    EXPECT_DOUBLE_EQ(bayes_posterior({UrnCondition::informative_prior, 1.0, 0.7, BallColor::blue, 1}), 1.0);
    EXPECT_DOUBLE_EQ(bayes_posterior({UrnCondition::informative_prior, 1.0, 0.2, BallColor::red, 1}), 1.0);
}

// ---- horizon -------------------------------------------------------------------

TEST(Horizon, EqualInformationShowsEachMachineTwice) {
    SeededStream s(2, "h");
    for (int i = 0; i < 50; ++i) {
        const auto g = generate_horizon_game(6, InfoCondition::equal_2_2, s);
        EXPECT_EQ(std::count(g.forced_sequence.begin(), g.forced_sequence.end(), 0), 2);
        const auto u = generate_horizon_game(1, InfoCondition::unequal_1_3, s);
        const auto zeros = std::count(u.forced_sequence.begin(), u.forced_sequence.end(), 0);
        EXPECT_TRUE(zeros == 1 || zeros == 3);
    }
}

TEST(Horizon, RewardDistribution) {
    HorizonGame g;
    g.means = {40.0, 60.0};
    g.sd = 8.0;
    g.horizon = 10000;
    g.reward_min = -1000;
    g.reward_max = 1000;
    HorizonEnvironment env(g, SeededStream(3, "rewards"));
    std::vector<double> xs;
    for (int i = 0; i < 10000; ++i) xs.push_back(*env.step(0));
    EXPECT_NEAR(mean_of(xs), 40.0, 0.3);
    EXPECT_NEAR(sd_of(xs), 8.0, 0.3);
}

TEST(Horizon, EpisodeLengths) {
    for (int horizon : {1, 6}) {
        SeededStream s(4, "len");
        HorizonEnvironment env(generate_horizon_game(horizon, InfoCondition::equal_2_2, s), SeededStream(4, "r"));
        testutil::ConstantAgent agent("Machine F");
        const auto t = run_episode(env, agent, EpisodeInfo{});
        int free = 0;
        for (const auto& r : t.trials) free += r.forced ? 0 : 1;
        EXPECT_EQ(free, horizon);
        EXPECT_FALSE(env.next());
        EXPECT_FALSE(env.step(0));
    }
}

TEST(Horizon, SeedReplay) {
    EXPECT_EQ(testutil::play(TaskId::horizon, RandomOracle{}, 8, 3), testutil::play(TaskId::horizon, RandomOracle{}, 8, 3));
}

// ---- restless bandit -------------------------------------------------------------

TEST(Restless, FourBlocksAndFixedLengths) {
    SeededStream s(5, "r");
    const auto inst = generate_restless(s);
    EXPECT_EQ(inst.block_lengths.size(), 4u);
    RestlessConfig cfg;
    cfg.block_min = cfg.block_max = 18;
    const auto fixed = generate_restless(s, cfg);
    EXPECT_EQ(fixed.total_trials(), 72);
}

TEST(Restless, BlockChangesAreNotAnnounced) {
    // The prompt depends only on the history, never on block boundaries.
    SeededStream s(6, "r");
    RestlessConfig a, b;
    a.block_min = a.block_max = 18;
    b.block_min = b.block_max = 22;
    RestlessEnvironment ea(generate_restless(s, a), SeededStream(1, "x"));
    RestlessEnvironment eb(generate_restless(s, b), SeededStream(1, "x"));
    for (int t = 0; t < 30; ++t) {
        ea.step(0, 0.5);
        eb.step(0, 0.5);
    }
    std::vector<RestlessEntry> ha = ea.history(), hb = eb.history();
    for (std::size_t i = 0; i < ha.size(); ++i) hb[i] = ha[i];
    EXPECT_EQ(restless_choice_prompt(ha), restless_choice_prompt(hb));
}

TEST(Restless, GoodArmRewards) {
    RestlessInstance inst;
    inst.block_lengths = {10000};
    inst.reward_min = -1000;
    inst.reward_max = 1000;
    RestlessEnvironment env(inst, SeededStream(7, "g"));
    std::vector<double> xs;
    for (int i = 0; i < 10000; ++i) xs.push_back(*env.step(inst.good_arm_at(i), 0.5));
    EXPECT_NEAR(mean_of(xs), 60.0, 0.3);
}

TEST(Restless, RewardsClippedToRange) {
    SeededStream s(8, "r");
    RestlessEnvironment env(generate_restless(s), SeededStream(8, "env"));
    for (int t = 0; t < env.instance().total_trials(); ++t) {
        const int r = *env.step(env.instance().good_arm_at(t), 0.9);
        EXPECT_GE(r, 20);
        EXPECT_LE(r, 80);
    }
    EXPECT_FALSE(env.step(0, 0.5));
}

TEST(Restless, AlwaysBadArmHasZeroAccuracy) {
    SeededStream s(9, "r");
    auto inst = generate_restless(s);
    RestlessEnvironment env(inst, SeededStream(9, "env"));
    Transcript t;
    t.task_id = TaskId::restless_bandit;
    while (auto p = env.next()) {
        const int bad = 1 - inst.good_arm_at(static_cast<int>(env.history().size()));
        TrialRecord r;
        r.query = p->query;
        r.meta = p->meta;
        r.parsed_choice = p->meta.at("step") == "choice" ? Choice{restless_machines[static_cast<std::size_t>(bad)]} : Choice{0.5};
        r.outcome = env.resolve(r.parsed_choice);
        t.trials.push_back(r);
    }
    EXPECT_DOUBLE_EQ(metrics::restless_accuracy({t}), 0.0);
}

// ---- instrumental learning --------------------------------------------------------

TEST(Casino, VisitsAndLetters) {
    SeededStream s(10, "c");
    const auto set = generate_casino_set(s);
    EXPECT_EQ(set.total_visits(), 96);
    std::set<std::string> letters_seen;
    for (const auto& c : set.casinos)
        for (const auto& m : c.machines) letters_seen.insert(m);
    EXPECT_EQ(letters_seen.size(), 8u);
    int symmetric = 0;
    for (const auto& c : set.casinos) symmetric += c.symmetric();
    EXPECT_EQ(symmetric, 2);
}

namespace {
CasinoSet single_casino(std::array<double, 2> probs, int visits) {
    CasinoSet set;
    set.casinos[0] = Casino{{"A", "B"}, probs};
    for (int c = 1; c < 4; ++c) set.casinos[static_cast<std::size_t>(c)] = Casino{{"C", "D"}, {0.5, 0.5}};
    set.trials_per_casino = visits;
    set.visit_order.assign(static_cast<std::size_t>(visits), 0);
    return set;
}
}  // namespace

TEST(Casino, WinRates) {
    InstrumentalEnvironment high(single_casino({0.75, 0.25}, 10000), SeededStream(11, "w"));
    double wins = 0.0;
    for (int i = 0; i < 10000; ++i) wins += *high.step(0);
    EXPECT_NEAR(wins / 10000, 0.75, 0.01);

    InstrumentalEnvironment low(single_casino({0.25, 0.25}, 10000), SeededStream(12, "w"));
    SeededStream policy(12, "policy");
    double total = 0.0;
    for (int i = 0; i < 10000; ++i) total += *low.step(static_cast<int>(policy.index(2)));
    EXPECT_NEAR(total / 10000, 0.25, 0.02);

    InstrumentalEnvironment sure(single_casino({1.0, 0.0}, 200), SeededStream(13, "w"));
    for (int i = 0; i < 200; ++i) EXPECT_EQ(*sure.step(0), 1.0);
    EXPECT_FALSE(sure.step(0));
}

// ---- two-step ------------------------------------------------------------------

TEST(TwoStep, TwentyDaysOfTwoStages) {
    const auto t = testutil::play(TaskId::two_step, RandomOracle{}, 14);
    ASSERT_EQ(t.trials.size(), 40u);
    for (std::size_t i = 0; i < t.trials.size(); ++i) EXPECT_EQ(t.trials[i].meta.at("stage").get<int>(), i % 2 == 0 ? 1 : 2);
}

TEST(TwoStep, CommonTransitionFrequency) {
    TwoStepInstance inst;
    inst.days = 100000;
    inst.drift_sd = 0.0;
    inst.initial_probs = {{{0.5, 0.5}, {0.5, 0.5}}};
    TwoStepEnvironment env(inst, SeededStream(15, "t"));
    int common = 0;
    for (int d = 0; d < 100000; ++d) {
        common += *env.board(1) == 1;
        env.trade(0);
    }
    EXPECT_NEAR(common / 100000.0, 0.70, 0.005);
}

TEST(TwoStep, DriftDisabledKeepsProbabilities) {
    TwoStepInstance inst;
    inst.drift_sd = 0.0;
    inst.initial_probs = {{{0.3, 0.4}, {0.6, 0.7}}};
    TwoStepEnvironment env(inst, SeededStream(16, "t"));
    for (int d = 0; d < inst.days; ++d) {
        env.board(0);
        env.trade(1);
    }
    EXPECT_EQ(env.current_probs(), inst.initial_probs);
}

TEST(TwoStep, RareTransitionAndTreasureRate) {
    TwoStepInstance inst;
    inst.days = 10000;
    inst.drift_sd = 0.0;
    inst.initial_probs = {{{0.75, 0.75}, {0.75, 0.75}}};
    TwoStepEnvironment env(inst, SeededStream(17, "t"));
    bool saw_rare = false;
    int treasure = 0;
    for (int d = 0; d < 10000; ++d) {
        const int arrived = *env.board(1);
        if (arrived == 0) saw_rare = true;
        treasure += *env.trade(0);
    }
    EXPECT_TRUE(saw_rare);
    EXPECT_NEAR(treasure / 10000.0, 0.75, 0.02);
}

TEST(TwoStep, DayAfterLastIsComplete) {
    SeededStream s(18, "t");
    TwoStepEnvironment env(generate_two_step(s), SeededStream(18, "e"));
    for (int d = 0; d < 20; ++d) {
        ASSERT_TRUE(env.board(0));
        ASSERT_TRUE(env.trade(0));
    }
    EXPECT_TRUE(env.complete());
    EXPECT_FALSE(env.next());
    EXPECT_FALSE(env.board(0));
    EXPECT_THROW(env.resolve(Choice{std::string("X")}), EpisodeStateError);
}

// ---- temporal discounting --------------------------------------------------------

namespace {
Transcript play_discounting(const std::function<std::string(const PendingQuery&)>& answer) {
    DiscountingEnvironment env;
    Transcript t;
    t.task_id = TaskId::temporal_discounting;
    while (auto p = env.next()) {
        TrialRecord r;
        r.query = p->query;
        r.meta = p->meta;
        r.parsed_choice = answer(*p);
        r.outcome = env.resolve(r.parsed_choice);
        t.trials.push_back(r);
    }
    return t;
}

std::string delayed_token(const PendingQuery& p) { return p.meta.at("sooner_token") == "1" ? "2" : "1"; }
}  // namespace

TEST(Discounting, FirstQuestionAndAnomalyItem) {
    DiscountingEnvironment env;
    const auto first = env.next()->query.prompt_text;
    EXPECT_NE(first.find("Option 1: Receive 500 dollars now."), std::string::npos);
    EXPECT_NE(first.find("Option 2: Receive 550 dollars in 12 months."), std::string::npos);

    const auto t = play_discounting([](const PendingQuery& p) { return delayed_token(p); });
    const TrialRecord* anomaly = nullptr;
    for (const auto& r : t.trials)
        if (r.meta.at("kind") == "anomaly") {
            anomaly = &r;
            break;
        }
    ASSERT_NE(anomaly, nullptr);
    EXPECT_NE(anomaly->query.prompt_text.find("Option 1: Receive 500 dollars in 12 months."), std::string::npos);
    EXPECT_NE(anomaly->query.prompt_text.find("Option 2: Receive 600 dollars in 24 months."), std::string::npos);
}

TEST(Discounting, AlwaysDelayedWalksThreeRungsPerBaseline) {
    const auto t = play_discounting([](const PendingQuery& p) { return delayed_token(p); });
    std::map<std::string, int> per_item;
    for (const auto& r : t.trials)
        if (r.meta.at("kind") == "baseline") {
            ++per_item[r.meta.at("item").get<std::string>()];
            if (r.outcome.contains("switch_rank")) EXPECT_EQ(r.outcome.at("switch_rank").get<int>(), 0);
        }
    ASSERT_EQ(per_item.size(), 3u);
    for (const auto& [item, n] : per_item) EXPECT_EQ(n, 3) << item;
    EXPECT_EQ(discounting_score(t), 0);
}

TEST(Discounting, Scores) {
    EXPECT_EQ(discounting_score(play_discounting([](const PendingQuery& p) { return p.meta.at("sooner_token").get<std::string>(); })), 19);
    EXPECT_EQ(discounting_score(play_discounting([](const PendingQuery& p) {
                  return p.meta.at("kind") == "baseline" ? p.meta.at("sooner_token").get<std::string>() : delayed_token(p);
              })),
              15);
}

TEST(Discounting, QuestionCountForEveryAnswerPattern) {
    int patterns = 0;
    std::set<int> counts;
    std::function<void(DiscountingEnvironment)> walk = [&](DiscountingEnvironment env) {
        if (!env.next()) {
            ++patterns;
            counts.insert(env.questions_asked());
            EXPECT_GE(env.questions_asked(), 10);
            EXPECT_LE(env.questions_asked(), 13);
            EXPECT_GE(env.score(), 0);
            EXPECT_LE(env.score(), 19);
            return;
        }
        for (const char* tok : {"1", "2"}) {
            DiscountingEnvironment copy = env;
            copy.resolve(Choice{std::string(tok)});
            walk(copy);
        }
    };
    walk(DiscountingEnvironment{});
    // Six switch ranks per baseline, each reached by exactly one answer path; 16 anomaly patterns.
    EXPECT_EQ(patterns, 6 * 6 * 6 * 16);
    EXPECT_EQ(*counts.begin(), 10);
    EXPECT_EQ(*counts.rbegin(), 13);
}

TEST(Discounting, DataFileMatchesBuiltInBattery) {
    const auto file = load_battery(std::filesystem::path(COGBENCH_DATA_DIR) / "temporal_discounting.json");
    EXPECT_EQ(json(file), json(default_battery()));
}

// ---- BART ----------------------------------------------------------------------

TEST(Bart, FirstPumpExplosionRate) {
    SeededStream s(19, "bart");
    int first_pop = 0, balloons_seen = 0;
    while (balloons_seen < 30000) {
        const auto inst = generate_bart(s);
        for (int b = 0; b < inst.balloons(); ++b)
            if (inst.hazard_of(b) == 8) {
                ++balloons_seen;
                BartEnvironment env(inst);
                for (int k = 0; k < b; ++k) env.step(k, BartAction::skip);
                first_pop += env.step(b, BartAction::inflate) == BartEvent::exploded;
            }
    }
    EXPECT_NEAR(static_cast<double>(first_pop) / balloons_seen, 1.0 / 8.0, 0.01);
}

TEST(Bart, SkipImmediatelyBanksNothing) {
    SeededStream s(20, "bart");
    BartEnvironment env(generate_bart(s));
    EXPECT_EQ(env.step(0, BartAction::skip), BartEvent::banked);
    EXPECT_EQ(env.results().front().points(), 0);
    EXPECT_FALSE(env.results().front().exploded);
    EXPECT_THROW(env.step(0, BartAction::inflate), EpisodeStateError);
}

TEST(Bart, NeverSkipMeanPumps) {
    SeededStream s(21, "bart");
    std::map<int, std::pair<double, int>> by_class;
    for (int e = 0; e < 1000; ++e) {
        const auto inst = generate_bart(s);
        BartEnvironment env(inst);
        for (int b = 0; b < inst.balloons(); ++b) {
            while (env.step(b, BartAction::inflate) != BartEvent::exploded) {}
            auto& [sum, n] = by_class[inst.hazard_of(b)];
            sum += env.results().back().pumps;
            ++n;
            EXPECT_EQ(env.results().back().points(), 0);
        }
    }
    for (const auto& [hazard, acc] : by_class)
        EXPECT_NEAR(acc.first / acc.second, (hazard + 1) / 2.0, 0.05 * (hazard + 1) / 2.0) << "class " << hazard;
}

TEST(Bart, RiskOfSimplePolicies) {
    EXPECT_DOUBLE_EQ(metrics::risk({testutil::play(TaskId::bart, BartFixedPumpsOracle{0}, 22)}), 0.0);
    EXPECT_DOUBLE_EQ(metrics::bart_points({testutil::play(TaskId::bart, BartFixedPumpsOracle{0}, 22)}), 0.0);
    // A balloon popping on its first pump still counts as one attempt.
    EXPECT_DOUBLE_EQ(metrics::risk({testutil::play(TaskId::bart, BartFixedPumpsOracle{1}, 22)}), 1.0);
}

// ---- prompt text against the transcribed boxes --------------------------------------

TEST(Golden, TranscribedBoxes) {
    const auto cases = testutil::golden_cases();
    EXPECT_EQ(cases.size(), 14u);
    for (const auto& c : cases) EXPECT_EQ(c.actual, c.expected) << c.name;
}

TEST(Golden, HorizonEnvironmentUsesTemplate) {
    SeededStream s(23, "g");
    HorizonEnvironment env(generate_horizon_game(6, InfoCondition::unequal_1_3, s), SeededStream(23, "e"));
    for (int i = 0; i < 4; ++i) env.resolve(*env.next()->forced_choice);
    EXPECT_EQ(env.next()->query.prompt_text, horizon_prompt(env.history(), 6));
    EXPECT_NE(env.next()->query.prompt_text.find("within six additional rounds."), std::string::npos);
}

TEST(Golden, SuffixCarriesMarker) {
    EXPECT_NE(testutil::golden("suffix_cot.txt").find("Final answer:"), std::string::npos);
    EXPECT_NE(testutil::golden("suffix_sb.txt").find("Final answer:"), std::string::npos);
}

// ---- oracles -------------------------------------------------------------------

TEST(Oracle, BayesOptimalAnswer) {
    UrnEnvironment env({UrnCondition::informative_likelihood, 0.6, 0.8, BallColor::red, 1});
    OracleAgent agent(BayesOptimalOracle{}, TaskId::probabilistic_reasoning, SeededStream(1, "a"));
    const auto t = run_episode(env, agent, EpisodeInfo{});
    EXPECT_DOUBLE_EQ(choice_value(t.trials[0].parsed_choice), round2(0.48 / 0.56));
    EXPECT_DOUBLE_EQ(choice_value(t.trials[0].parsed_choice), 0.86);
}

TEST(Oracle, RandomBinaryIsUniform) {
    OracleAgent agent(RandomOracle{}, TaskId::bart, SeededStream(2, "a"));
    const ChoiceQuery q{"Q", AnswerKind::binary_option, {"1", "0"}, "A: Option"};
    const json meta = json::object();
    Transcript h;
    int ones = 0;
    for (int i = 0; i < 10000; ++i) ones += choice_token(agent.choose(TrialContext{q, meta, h, PromptMode::base})) == "1";
    EXPECT_NEAR(ones / 10000.0, 0.5, 0.03);
}

TEST(Oracle, GreedyRescorlaWagnerPicksRewardedArm) {
    Transcript h;
    h.task_id = TaskId::instrumental_learning;
    for (auto [arm, reward] : {std::pair{0, 1.0}, std::pair{1, 0.0}}) {
        TrialRecord r;
        r.meta = json{{"casino", 1}};
        r.outcome = json{{"arm", arm}, {"reward", reward}};
        h.trials.push_back(r);
    }
    const double inf = std::numeric_limits<double>::infinity();
    for (int seed = 0; seed < 20; ++seed) {
        OracleAgent agent(RescorlaWagnerOracle{1.0, inf, 0.5}, TaskId::instrumental_learning, SeededStream(seed, "a"));
        const ChoiceQuery q = letters({"A", "B"});
        const json meta{{"casino", 1}};
        EXPECT_EQ(choice_token(agent.choose(TrialContext{q, meta, h, PromptMode::base})), "A");
    }
}

TEST(Oracle, SoftmaxChoiceFrequencies) {
    // Chi-square goodness of fit of a fixed-value softmax (p = sigmoid(1)).
    const double p = 1.0 / (1.0 + std::exp(-1.0));
    SeededStream s(3, "softmax");
    int first = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) first += s.bernoulli(softmax2(0.6, 0.5, 10.0));
    const double e1 = n * p, e2 = n * (1 - p);
    const double chi2 = (first - e1) * (first - e1) / e1 + (n - first - e2) * (n - first - e2) / e2;
    EXPECT_LT(chi2, 10.83);  // 1 dof, p = 0.001
}

TEST(Oracle, ReasoningModeReplyCarriesMarker) {
    UrnEnvironment env({UrnCondition::informative_prior, 0.8, 0.6, BallColor::blue, 1});
    OracleAgent agent(BayesOptimalOracle{}, TaskId::probabilistic_reasoning, SeededStream(4, "a"));
    const auto t = run_episode(env, agent, EpisodeInfo{0, 0, PromptMode::cot});
    EXPECT_EQ(t.trials[0].raw_reply.rfind("Final answer: ", 0), 0u);
    EXPECT_FALSE(t.trials[0].invalid);
}

TEST(Oracle, UnsupportedTaskRejected) {
    EXPECT_THROW(OracleAgent(BayesOptimalOracle{}, TaskId::bart, SeededStream(1, "a")), ConfigError);
    EXPECT_THROW(oracle_from_json(json{{"kind", "rescorla_wagner"}, {"alpha", 1.5}}), ConfigError);
    EXPECT_THROW(oracle_from_json(json{{"kind", "nope"}}), ConfigError);
}

TEST(Oracle, JsonRoundTrip) {
    const std::vector<OracleParams> all{RandomOracle{}, SystemNeglectOracle{0.6, 0.7}, RescorlaWagnerOracle{0.2, 4, 0.5},
                                        AsymmetricRwOracle{0.4, 0.1, 8, 0.5}, HybridTwoStepOracle{0.3, 0.5, 5, 0.7},
                                        ScriptedOracle{{"a", "b"}}, HorizonHeuristicOracle{1, 2, 3, 4},
                                        DiscountingPreferenceOracle{false}, BartFixedPumpsOracle{7}};
    for (const auto& p : all) EXPECT_EQ(oracle_to_json(oracle_from_json(oracle_to_json(p))), oracle_to_json(p));
}
