#pragma once

// Two-step task: a spaceship choice with a 70% common transition, then an
// alien choice paying treasure with slowly drifting probabilities.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cogbench/core/environment.hpp"
#include "cogbench/envs/common.hpp"

namespace cogbench::envs {

struct TwoStepConfig {
    double common_prob = 0.7;
    int days = 20;
    double drift_sd = 0.025;
    double prob_min = 0.25;
    double prob_max = 0.75;
};

inline const std::array<std::string, 2> two_step_planets{"X", "Y"};
/// Aliens on planet X, then on planet Y.
inline const std::array<std::array<std::string, 2>, 2> two_step_aliens{{{"D", "F"}, {"J", "K"}}};

struct TwoStepInstance {
    double common_prob = 0.7;
    int days = 20;
    double drift_sd = 0.025;
    double prob_min = 0.25;
    double prob_max = 0.75;
    /// Treasure probability of [planet][alien] on day 1.
    std::array<std::array<double, 2>, 2> initial_probs{};
};

inline TwoStepInstance generate_two_step(SeededStream& stream, const TwoStepConfig& cfg = {}) {
    TwoStepInstance inst{cfg.common_prob, cfg.days, cfg.drift_sd, cfg.prob_min, cfg.prob_max, {}};
    for (auto& planet : inst.initial_probs)
        for (auto& p : planet) p = stream.uniform(cfg.prob_min, cfg.prob_max);
    return inst;
}

/// Reflects x into [lo, hi].
inline double reflect(double x, double lo, double hi) noexcept {
    while (x < lo || x > hi) {
        if (x > hi) x = 2.0 * hi - x;
        if (x < lo) x = 2.0 * lo - x;
    }
    return x;
}

struct TwoStepDay {
    int boarded = 0;
    int arrived = 0;
    int alien = 0;
    bool treasure = false;

    bool common() const noexcept { return boarded == arrived; }
};

inline std::string two_step_first_prompt(const std::vector<TwoStepDay>& history) {
    std::string text =
        "You will travel to foreign planets in search of treasures.\n"
        "When you visit a planet, you can choose an alien to trade with. The chance of getting "
        "treasures from these aliens changes over time. Your goal is to maximize the number of "
        "received treasures.\n\n";
    if (!history.empty()) {
        text += "Your previous space travels went as follows:\n";
        const std::size_t n = history.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& d = history[i];
            const std::size_t ago = n - i;
            text += "- " + std::to_string(ago) + (ago == 1 ? " day ago" : " days ago") +
                    ", you boarded the spaceship to planet " + two_step_planets[static_cast<std::size_t>(d.boarded)] +
                    ", arrived at planet " + two_step_planets[static_cast<std::size_t>(d.arrived)] +
                    ", traded with alien " +
                    two_step_aliens[static_cast<std::size_t>(d.arrived)][static_cast<std::size_t>(d.alien)] +
                    ", and received " + (d.treasure ? "treasures" : "junk") + ".\n";
        }
        text += "\n";
    }
    text += "Q: Do you want to take the spaceship to planet X or planet Y?";
    return text;
}

inline std::string two_step_second_prompt(const std::vector<TwoStepDay>& history, int boarded, int arrived) {
    const auto& aliens = two_step_aliens[static_cast<std::size_t>(arrived)];
    return two_step_first_prompt(history) + "\n\nA: Planet " + two_step_planets[static_cast<std::size_t>(boarded)] +
           ".\nYou arrive at planet " + two_step_planets[static_cast<std::size_t>(arrived)] +
           ".\n\nQ: Do you want to trade with alien " + aliens[0] + " or " + aliens[1] + "?";
}

class TwoStepEnvironment final : public Environment {
public:
    TwoStepEnvironment(TwoStepInstance inst, SeededStream stream)
        : inst_(inst), stream_(std::move(stream)), probs_(inst.initial_probs) {}

    TaskId task() const override { return TaskId::two_step; }
    const TwoStepInstance& instance() const noexcept { return inst_; }
    const std::vector<TwoStepDay>& history() const noexcept { return history_; }
    const std::array<std::array<double, 2>, 2>& current_probs() const noexcept { return probs_; }
    int day() const noexcept { return static_cast<int>(history_.size()); }
    bool complete() const noexcept { return day() >= inst_.days; }

    /// Stage 1: returns the planet reached, or nullopt after the last day.
    std::optional<int> board(int planet) {
        if (complete() || boarded_) return std::nullopt;
        const bool common = stream_.bernoulli(inst_.common_prob);
        boarded_ = planet;
        arrived_ = common ? planet : 1 - planet;
        return arrived_;
    }

    /// Stage 2: Bernoulli treasure from the chosen alien on the arrived planet.
    std::optional<bool> trade(int alien) {
        if (!boarded_) return std::nullopt;
        const bool treasure = stream_.bernoulli(probs_[static_cast<std::size_t>(*arrived_)][static_cast<std::size_t>(alien)]);
        history_.push_back({*boarded_, *arrived_, alien, treasure});
        boarded_.reset();
        arrived_.reset();
        for (auto& planet : probs_)
            for (auto& p : planet)
                if (inst_.drift_sd > 0.0) p = reflect(p + stream_.normal(0.0, inst_.drift_sd), inst_.prob_min, inst_.prob_max);
        return treasure;
    }

    std::optional<PendingQuery> next() override {
        if (complete()) return std::nullopt;
        const int d = day() + 1;
        if (!boarded_) {
            return PendingQuery{letter_query(two_step_first_prompt(history_), {two_step_planets[0], two_step_planets[1]},
                                             "A: Planet"),
                                json{{"day", d}, {"stage", 1}}, std::nullopt};
        }
        const auto& aliens = two_step_aliens[static_cast<std::size_t>(*arrived_)];
        json m{{"day", d},
               {"stage", 2},
               {"boarded", two_step_planets[static_cast<std::size_t>(*boarded_)]},
               {"arrived", two_step_planets[static_cast<std::size_t>(*arrived_)]},
               {"common", *boarded_ == *arrived_},
               {"aliens", aliens},
               {"treasure_probs", probs_[static_cast<std::size_t>(*arrived_)]}};
        return PendingQuery{letter_query(two_step_second_prompt(history_, *boarded_, *arrived_), {aliens[0], aliens[1]},
                                         "A: Alien"),
                            std::move(m), std::nullopt};
    }

    json resolve(const Choice& choice) override {
        if (complete()) throw EpisodeStateError("two-step episode already complete");
        const auto& tok = choice_token(choice);
        if (!boarded_) {
            const int planet = tok == two_step_planets[0] ? 0 : 1;
            const int arrived = *board(planet);
            return json{{"planet", two_step_planets[static_cast<std::size_t>(planet)]},
                        {"arrived", two_step_planets[static_cast<std::size_t>(arrived)]},
                        {"common", planet == arrived}};
        }
        const auto& aliens = two_step_aliens[static_cast<std::size_t>(*arrived_)];
        const int alien = tok == aliens[0] ? 0 : 1;
        const bool treasure = *trade(alien);
        return json{{"alien", aliens[static_cast<std::size_t>(alien)]}, {"treasure", treasure ? 1 : 0}};
    }

private:
    TwoStepInstance inst_;
    SeededStream stream_;
    std::array<std::array<double, 2>, 2> probs_;
    std::vector<TwoStepDay> history_;
    std::optional<int> boarded_;
    std::optional<int> arrived_;
};

}  // namespace cogbench::envs
