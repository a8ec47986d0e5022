#pragma once

// Horizon task: stationary two-armed bandit, four forced choices followed by
// one or six free choices.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cogbench/core/environment.hpp"
#include "cogbench/envs/common.hpp"

namespace cogbench::envs {

enum class InfoCondition { equal_2_2, unequal_1_3 };

inline constexpr std::string_view to_string(InfoCondition c) noexcept {
    return c == InfoCondition::equal_2_2 ? "equal_2_2" : "unequal_1_3";
}

/// Reward distribution settings. The structure is fixed; these numbers are configuration.
struct HorizonConfig {
    std::vector<double> base_means{40.0, 60.0};
    std::vector<double> gaps{4.0, 8.0, 12.0, 20.0, 30.0};
    double sd = 8.0;
    int reward_min = 1;
    int reward_max = 99;
};

inline const std::array<std::string, 2> horizon_machines{"F", "J"};

struct HorizonGame {
    std::array<double, 2> means{};
    double sd = 8.0;
    int horizon = 1;
    InfoCondition info_condition = InfoCondition::equal_2_2;
    /// Arm indices into horizon_machines.
    std::array<int, 4> forced_sequence{};
    int reward_min = 1;
    int reward_max = 99;

    int total_trials() const noexcept { return 4 + horizon; }

    /// Arm observed once in the unequal condition; nullopt when equal.
    std::optional<int> less_observed() const noexcept {
        if (info_condition == InfoCondition::equal_2_2) return std::nullopt;
        const auto zeros = std::count(forced_sequence.begin(), forced_sequence.end(), 0);
        return zeros == 1 ? 0 : 1;
    }
};

inline HorizonGame generate_horizon_game(int horizon, InfoCondition info, SeededStream& stream,
                                         const HorizonConfig& cfg = {}) {
    HorizonGame g;
    g.sd = cfg.sd;
    g.horizon = horizon;
    g.info_condition = info;
    g.reward_min = cfg.reward_min;
    g.reward_max = cfg.reward_max;

    const double base = cfg.base_means[stream.index(cfg.base_means.size())];
    const double gap = cfg.gaps[stream.index(cfg.gaps.size())];
    const double other = stream.bernoulli(0.5) ? base + gap : base - gap;
    const int base_arm = static_cast<int>(stream.index(2));
    g.means[static_cast<std::size_t>(base_arm)] = base;
    g.means[static_cast<std::size_t>(1 - base_arm)] = other;

    if (info == InfoCondition::equal_2_2) {
        g.forced_sequence = {0, 0, 1, 1};
    } else {
        const int rare = static_cast<int>(stream.index(2));
        g.forced_sequence = {rare, 1 - rare, 1 - rare, 1 - rare};
    }
    stream.shuffle(g.forced_sequence);
    return g;
}

/// Horizon and information condition drawn uniformly.
inline HorizonGame generate_horizon_game(SeededStream& stream, const HorizonConfig& cfg = {}) {
    const int horizon = stream.bernoulli(0.5) ? 6 : 1;
    const auto info = stream.bernoulli(0.5) ? InfoCondition::unequal_1_3 : InfoCondition::equal_2_2;
    return generate_horizon_game(horizon, info, stream, cfg);
}

/// Cells 0..3: (horizon 1|6) x (equal|unequal).
inline HorizonGame generate_horizon_cell(int cell, SeededStream& stream, const HorizonConfig& cfg = {}) {
    const int horizon = (cell & 1) ? 6 : 1;
    const auto info = (cell & 2) ? InfoCondition::unequal_1_3 : InfoCondition::equal_2_2;
    return generate_horizon_game(horizon, info, stream, cfg);
}

struct HorizonObservation {
    int arm = 0;
    int reward = 0;
};

inline std::string horizon_prompt(const std::vector<HorizonObservation>& history, int remaining) {
    std::string text =
        "You are going to a casino that owns two slot machines. You earn money each time you play "
        "on one of these machines.\n\n"
        "You have received the following amount of dollars when playing in the past:\n";
    for (const auto& obs : history)
        text += "- Machine " + horizon_machines[static_cast<std::size_t>(obs.arm)] + " delivered " +
                std::to_string(obs.reward) + " dollars.\n";
    text += "\nYour goal is to maximize the sum of received dollars within " + number_word(remaining) +
            (remaining == 1 ? " additional round." : " additional rounds.");
    text += "\n\nQ: Which machine do you choose?";
    return text;
}

class HorizonEnvironment final : public Environment {
public:
    HorizonEnvironment(HorizonGame game, SeededStream stream)
        : game_(std::move(game)), stream_(std::move(stream)) {}

    TaskId task() const override { return TaskId::horizon; }
    const HorizonGame& game() const noexcept { return game_; }
    const std::vector<HorizonObservation>& history() const noexcept { return history_; }
    bool exhausted() const noexcept { return static_cast<int>(history_.size()) >= game_.total_trials(); }

    /// Samples the chosen machine's reward and appends it; nullopt once the game is over.
    std::optional<int> step(int arm) {
        if (exhausted()) return std::nullopt;
        const double draw = stream_.normal(game_.means[static_cast<std::size_t>(arm)], game_.sd);
        const int reward = std::clamp(static_cast<int>(std::lround(draw)), game_.reward_min, game_.reward_max);
        history_.push_back({arm, reward});
        return reward;
    }

    std::optional<PendingQuery> next() override {
        if (exhausted()) return std::nullopt;
        const int t = static_cast<int>(history_.size());
        const bool forced = t < 4;
        const int remaining = game_.total_trials() - t;
        PendingQuery p{letter_query(horizon_prompt(history_, remaining),
                                    {horizon_machines[0], horizon_machines[1]}, "A: Machine"),
                       meta(t), std::nullopt};
        if (forced) p.forced_choice = horizon_machines[static_cast<std::size_t>(game_.forced_sequence[static_cast<std::size_t>(t)])];
        return p;
    }

    json resolve(const Choice& choice) override {
        const int arm = choice_token(choice) == horizon_machines[0] ? 0 : 1;
        const auto reward = step(arm);
        if (!reward) throw EpisodeStateError("horizon game already complete");
        return json{{"machine", horizon_machines[static_cast<std::size_t>(arm)]}, {"reward", *reward}};
    }

private:
    json meta(int t) const {
        json m{{"horizon", game_.horizon},
               {"info_condition", to_string(game_.info_condition)},
               {"means", game_.means},
               {"free_index", t < 4 ? -1 : t - 4}};
        if (auto rare = game_.less_observed())
            m["less_observed"] = horizon_machines[static_cast<std::size_t>(*rare)];
        else
            m["less_observed"] = nullptr;
        return m;
    }

    HorizonGame game_;
    SeededStream stream_;
    std::vector<HorizonObservation> history_;
};

}  // namespace cogbench::envs
