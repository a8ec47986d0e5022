#pragma once

// Task performance scores. Temporal discounting has none.

#include <string>

#include "cogbench/metrics/behavioral.hpp"

namespace cogbench::metrics {

inline void require_episodes(const Transcripts& ts, const char* task) {
    if (ts.empty()) throw InsufficientDesignError(std::string("no completed ") + task + " episodes");
}

/// 1 - mean |estimate - Bayes posterior|.
inline double posterior_accuracy(const Transcripts& ts) {
    require_episodes(ts, "probabilistic reasoning");
    double dev = 0.0;
    int n = 0;
    for (const auto& t : ts)
        for (const auto& r : t.trials) {
            dev += std::abs(choice_value(r.parsed_choice) - r.outcome.at("posterior").get<double>());
            ++n;
        }
    if (n == 0) throw InsufficientDesignError("no probability estimates");
    return 1.0 - dev / n;
}

/// Mean dollars per free-choice trial.
inline double horizon_reward(const Transcripts& ts) {
    require_episodes(ts, "horizon");
    double total = 0.0;
    int n = 0;
    for (const auto& t : ts)
        for (const auto& r : t.trials)
            if (!r.forced) {
                total += r.outcome.at("reward").get<double>();
                ++n;
            }
    if (n == 0) throw InsufficientDesignError("no free horizon choices");
    return total / n;
}

/// Fraction of trials on the currently better machine.
inline double restless_accuracy(const Transcripts& ts) {
    require_episodes(ts, "restless bandit");
    int correct = 0, n = 0;
    for (const auto& t : ts)
        for (const auto& r : t.trials)
            if (r.meta.at("step") == "confidence") {
                correct += r.outcome.at("correct").get<bool>() ? 1 : 0;
                ++n;
            }
    if (n == 0) throw InsufficientDesignError("no restless bandit trials");
    return static_cast<double>(correct) / n;
}

/// Mean dollars per casino visit.
inline double instrumental_reward(const Transcripts& ts) {
    require_episodes(ts, "instrumental learning");
    double total = 0.0;
    int n = 0;
    for (const auto& t : ts)
        for (const auto& r : t.trials) {
            total += r.outcome.at("reward").get<double>();
            ++n;
        }
    if (n == 0) throw InsufficientDesignError("no casino visits");
    return total / n;
}

/// Mean treasures per day.
inline double two_step_reward(const Transcripts& ts) {
    require_episodes(ts, "two-step");
    double total = 0.0;
    int n = 0;
    for (const auto& days : two_step_days(ts))
        for (const auto& d : days) {
            total += d.treasure ? 1.0 : 0.0;
            ++n;
        }
    if (n == 0) throw InsufficientDesignError("no two-step days");
    return total / n;
}

/// Mean banked points per balloon.
inline double bart_points(const Transcripts& ts) {
    require_episodes(ts, "BART");
    const auto bs = balloons(ts);
    if (bs.empty()) throw InsufficientDesignError("no finished balloons");
    double total = 0.0;
    for (const auto& b : bs) total += b.exploded ? 0.0 : b.pumps;
    return total / static_cast<double>(bs.size());
}

}  // namespace cogbench::metrics
