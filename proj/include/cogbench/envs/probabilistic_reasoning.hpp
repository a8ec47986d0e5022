#pragma once

// Wheel-of-fortune and two-urns belief updating.

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "cogbench/core/environment.hpp"
#include "cogbench/envs/common.hpp"

namespace cogbench::envs {

enum class UrnCondition { informative_prior, informative_likelihood };
enum class BallColor { red, blue };

inline constexpr std::string_view to_string(UrnCondition c) noexcept {
    return c == UrnCondition::informative_prior ? "informative_prior" : "informative_likelihood";
}
inline constexpr std::string_view to_string(BallColor b) noexcept {
    return b == BallColor::red ? "red" : "blue";
}

struct UrnTaskInstance {
    UrnCondition condition = UrnCondition::informative_likelihood;
    double prior_f = 0.5;
    double likelihood_red_given_f = 0.5;
    BallColor drawn_ball = BallColor::red;
    int n_trials = 1;

    double likelihood_red_given_j() const noexcept { return 1.0 - likelihood_red_given_f; }
    int sections_f() const noexcept { return static_cast<int>(std::lround(prior_f * 10.0)); }
    int sections_j() const noexcept { return 10 - sections_f(); }
    int red_in_f() const noexcept { return static_cast<int>(std::lround(likelihood_red_given_f * 10.0)); }
    int blue_in_f() const noexcept { return 10 - red_in_f(); }
};

/// Informative levels for one side, uninformative for the other.
struct UrnLevels {
    std::array<double, 2> weak{0.5, 0.6};
    std::array<double, 3> strong{0.7, 0.8, 0.9};
};

/// Samples the urn from the prior, then the ball colour from that urn.
inline UrnTaskInstance generate_urn_task(UrnCondition condition, double prior_f,
                                         double likelihood_red_given_f, SeededStream& stream) {
    UrnTaskInstance inst{condition, prior_f, likelihood_red_given_f, BallColor::red, 1};
    const bool urn_f = stream.bernoulli(prior_f);
    const double p_red = urn_f ? likelihood_red_given_f : 1.0 - likelihood_red_given_f;
    inst.drawn_ball = stream.bernoulli(p_red) ? BallColor::red : BallColor::blue;
    return inst;
}

/// Levels drawn uniformly from the condition's sets.
inline UrnTaskInstance generate_urn_task(UrnCondition condition, SeededStream& stream,
                                         const UrnLevels& levels = {}) {
    const double weak = levels.weak[stream.index(levels.weak.size())];
    const double strong = levels.strong[stream.index(levels.strong.size())];
    return condition == UrnCondition::informative_likelihood
               ? generate_urn_task(condition, weak, strong, stream)
               : generate_urn_task(condition, strong, weak, stream);
}

/// Number of design cells: 2 x 3 levels in each of the two conditions.
inline constexpr int urn_design_cells = 12;

inline UrnTaskInstance generate_urn_cell(int cell, SeededStream& stream, const UrnLevels& levels = {}) {
    const auto condition = cell < 6 ? UrnCondition::informative_likelihood : UrnCondition::informative_prior;
    const int within = cell % 6;
    const double weak = levels.weak[static_cast<std::size_t>(within / 3)];
    const double strong = levels.strong[static_cast<std::size_t>(within % 3)];
    return condition == UrnCondition::informative_likelihood
               ? generate_urn_task(condition, weak, strong, stream)
               : generate_urn_task(condition, strong, weak, stream);
}

/// Exact P(urn F | ball).
inline double bayes_posterior(const UrnTaskInstance& inst) noexcept {
    const double l_f = inst.drawn_ball == BallColor::red ? inst.likelihood_red_given_f
                                                         : 1.0 - inst.likelihood_red_given_f;
    const double l_j = inst.drawn_ball == BallColor::red ? inst.likelihood_red_given_j()
                                                         : 1.0 - inst.likelihood_red_given_j();
    const double num = inst.prior_f * l_f;
    return num / (num + (1.0 - inst.prior_f) * l_j);
}

inline ChoiceQuery urn_query(const UrnTaskInstance& inst) {
    const std::string ball{to_string(inst.drawn_ball)};
    std::string text =
        "You are participating in an experiment where you are provided with a wheel of fortune and "
        "two urns. The wheel of fortune contains 10 evenly sized sections labeled either F or J, "
        "corresponding to the urns F and J. Another person will spin the wheel of fortune, select an "
        "urn based on the outcome of the spin, and then randomly pick a ball from the selected urn. "
        "Your goal is to give your best estimate of the probability of the urn being F after observing "
        "the ball drawn from the urn.\n\n";
    text += "Q: The wheel of fortune contains " + std::to_string(inst.sections_f()) +
            " sections labeled F and " + std::to_string(inst.sections_j()) +
            " sections labeled J. The urn F contains (" + std::to_string(inst.red_in_f()) + ", " +
            std::to_string(inst.blue_in_f()) + ") and the urn J contains (" +
            std::to_string(inst.blue_in_f()) + ", " + std::to_string(inst.red_in_f()) +
            ") red/blue balls. A " + ball +
            " ball was drawn. What is the probability that it was drawn from Urn F? (Give your "
            "probability estimate on the scale from 0 to 1 rounded to two decimal places).";
    return ChoiceQuery{std::move(text), AnswerKind::probability_0_1, {},
                       "A: I estimate the probability of the " + ball +
                           " ball to be drawn from the urn F to be 0."};
}

class UrnEnvironment final : public Environment {
public:
    explicit UrnEnvironment(UrnTaskInstance inst) : inst_(inst) {}

    TaskId task() const override { return TaskId::probabilistic_reasoning; }
    const UrnTaskInstance& instance() const noexcept { return inst_; }

    std::optional<PendingQuery> next() override {
        if (asked_ >= inst_.n_trials) return std::nullopt;
        PendingQuery p{urn_query(inst_), meta(), std::nullopt};
        return p;
    }

    json resolve(const Choice&) override {
        ++asked_;
        return json{{"ball", to_string(inst_.drawn_ball)}, {"posterior", bayes_posterior(inst_)}};
    }

private:
    json meta() const {
        return json{{"condition", to_string(inst_.condition)},
                    {"prior_f", inst_.prior_f},
                    {"likelihood_red_given_f", inst_.likelihood_red_given_f},
                    {"ball", to_string(inst_.drawn_ball)},
                    {"posterior", bayes_posterior(inst_)}};
    }

    UrnTaskInstance inst_;
    int asked_ = 0;
};

}  // namespace cogbench::envs
