#pragma once

// Restless two-armed bandit with per-trial confidence reports. The better arm
// flips at every block boundary, unannounced.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cogbench/core/environment.hpp"
#include "cogbench/core/parse.hpp"
#include "cogbench/envs/common.hpp"

namespace cogbench::envs {

struct RestlessConfig {
    double good_mean = 60.0;
    double bad_mean = 40.0;
    double sd = 8.0;
    int n_blocks = 4;
    int block_min = 18;
    int block_max = 22;
    int reward_min = 20;
    int reward_max = 80;
};

inline const std::array<std::string, 2> restless_machines{"J", "F"};

struct RestlessInstance {
    double good_mean = 60.0;
    double bad_mean = 40.0;
    double sd = 8.0;
    std::vector<int> block_lengths;
    int initial_good_arm = 0;
    int reward_min = 20;
    int reward_max = 80;

    int total_trials() const noexcept { return std::accumulate(block_lengths.begin(), block_lengths.end(), 0); }

    /// 0-based block of 0-based trial t.
    int block_at(int t) const noexcept {
        int end = 0;
        for (std::size_t b = 0; b < block_lengths.size(); ++b) {
            end += block_lengths[b];
            if (t < end) return static_cast<int>(b);
        }
        return static_cast<int>(block_lengths.size()) - 1;
    }

    int good_arm_at(int t) const noexcept { return block_at(t) % 2 == 0 ? initial_good_arm : 1 - initial_good_arm; }
};

inline RestlessInstance generate_restless(SeededStream& stream, const RestlessConfig& cfg = {}) {
    RestlessInstance inst;
    inst.good_mean = cfg.good_mean;
    inst.bad_mean = cfg.bad_mean;
    inst.sd = cfg.sd;
    inst.reward_min = cfg.reward_min;
    inst.reward_max = cfg.reward_max;
    for (int b = 0; b < cfg.n_blocks; ++b)
        inst.block_lengths.push_back(static_cast<int>(stream.uniform_int(cfg.block_min, cfg.block_max)));
    inst.initial_good_arm = static_cast<int>(stream.index(2));
    return inst;
}

struct RestlessEntry {
    int arm = 0;
    double confidence = 0.0;
    int reward = 0;
};

inline std::string restless_choice_prompt(const std::vector<RestlessEntry>& history) {
    std::string text =
        "Q: You are going to a casino that owns two slot machines named machine J and F. You earn "
        "dollars $ each time you play on one of these machines with one machine always having a "
        "higher average $ reward. Every 18 to 22 trials a switch of block takes place and the other "
        "slot machine will now give the higher point reward on average. However, you are not told "
        "about the change of block. After each choice, you have to indicate how confident you were "
        "about your choice being the best on a scale from 0 to 1. The casino includes 4 blocks of 18 "
        "to 22 trials, for a total of 80 trials 't'. Your goal is to interact with both machines and "
        "optimize your $ as much as possible by identifying the best machine at a given point in time "
        "which comes in hand with being attentive to a potential change of block. The rewards will "
        "range between 20$ and 80$.\n\n";
    if (!history.empty()) {
        text += "You have received the following amount of $ when playing in the past:\n";
        for (std::size_t i = 0; i < history.size(); ++i)
            text += "t=" + std::to_string(i + 1) + ": You chose " +
                    restless_machines[static_cast<std::size_t>(history[i].arm)] +
                    " with a reported confidence of " + format_two_decimals(history[i].confidence) +
                    ". It rewarded " + std::to_string(history[i].reward) + " $.\n";
        text += "\n";
    }
    text += "Q: You are now in trial t=" + std::to_string(history.size() + 1) +
            ". Which machine do you choose between machine J and F?(Think carefully remembering that "
            "exploration of both machines is required for optimal rewards. Give the answer in the form "
            "'Machine <your choice>'.)";
    return text;
}

inline std::string restless_confidence_prompt(const std::vector<RestlessEntry>& history, int arm) {
    return restless_choice_prompt(history) + "\n\nA: Machine " +
           restless_machines[static_cast<std::size_t>(arm)] +
           ".\n\nQ: How confident are you about your choice being the best on a continuous scale "
           "running from 0 representing 'this was a guess' to 1 representing 'very certain'? (Think "
           "carefully and give your answer to two decimal places)";
}

inline constexpr std::string_view restless_confidence_prefix = "A: On a scale from 0 to 1, I am confident at 0.";

class RestlessEnvironment final : public Environment {
public:
    RestlessEnvironment(RestlessInstance inst, SeededStream stream)
        : inst_(std::move(inst)), stream_(std::move(stream)) {}

    TaskId task() const override { return TaskId::restless_bandit; }
    const RestlessInstance& instance() const noexcept { return inst_; }
    const std::vector<RestlessEntry>& history() const noexcept { return history_; }

    /// Records choice and confidence for the current trial and returns its reward.
    std::optional<int> step(int arm, double confidence) {
        const int t = static_cast<int>(history_.size());
        if (t >= inst_.total_trials()) return std::nullopt;
        const double mean = arm == inst_.good_arm_at(t) ? inst_.good_mean : inst_.bad_mean;
        const int reward = std::clamp(static_cast<int>(std::lround(stream_.normal(mean, inst_.sd))),
                                      inst_.reward_min, inst_.reward_max);
        history_.push_back({arm, confidence, reward});
        return reward;
    }

    std::optional<PendingQuery> next() override {
        const int t = static_cast<int>(history_.size());
        if (t >= inst_.total_trials()) return std::nullopt;
        json m{{"t", t + 1}, {"block", inst_.block_at(t)},
               {"best_machine", restless_machines[static_cast<std::size_t>(inst_.good_arm_at(t))]}};
        if (!pending_arm_) {
            m["step"] = "choice";
            return PendingQuery{letter_query(restless_choice_prompt(history_),
                                             {restless_machines[0], restless_machines[1]}, "A: Machine"),
                                m, std::nullopt};
        }
        m["step"] = "confidence";
        m["machine"] = restless_machines[static_cast<std::size_t>(*pending_arm_)];
        return PendingQuery{ChoiceQuery{restless_confidence_prompt(history_, *pending_arm_),
                                        AnswerKind::confidence_0_1, {},
                                        std::string(restless_confidence_prefix)},
                            m, std::nullopt};
    }

    json resolve(const Choice& choice) override {
        if (!pending_arm_) {
            pending_arm_ = choice_token(choice) == restless_machines[0] ? 0 : 1;
            return json{{"machine", restless_machines[static_cast<std::size_t>(*pending_arm_)]}};
        }
        const int arm = *pending_arm_;
        const int t = static_cast<int>(history_.size());
        const bool correct = arm == inst_.good_arm_at(t);
        const auto reward = step(arm, choice_value(choice));
        pending_arm_.reset();
        if (!reward) throw EpisodeStateError("restless bandit already complete");
        return json{{"machine", restless_machines[static_cast<std::size_t>(arm)]},
                    {"confidence", choice_value(choice)},
                    {"reward", *reward},
                    {"correct", correct}};
    }

private:
    RestlessInstance inst_;
    SeededStream stream_;
    std::vector<RestlessEntry> history_;
    std::optional<int> pending_arm_;
};

}  // namespace cogbench::envs
