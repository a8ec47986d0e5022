#pragma once

// Random-agent baselines and the generate -> fit -> compare recovery study.

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cogbench/agents/oracle.hpp"
#include "cogbench/core/episode.hpp"
#include "cogbench/envs/factory.hpp"
#include "cogbench/metrics/report.hpp"

namespace cogbench {

/// Runs `episodes` oracle episodes of a task in memory (simulation indices 0..episodes-1).
inline std::vector<Transcript> simulate(TaskId task, const OracleParams& params, std::uint64_t seed, int episodes,
                                        PromptMode mode = PromptMode::base, const envs::TaskSettings& settings = {}) {
    std::vector<Transcript> out;
    out.reserve(static_cast<std::size_t>(episodes));
    for (int s = 0; s < episodes; ++s) {
        auto env = envs::make_environment(task, seed, s, settings);
        OracleAgent agent(params, task, episode_stream(seed, task, s, "agent"));
        out.push_back(run_episode(*env, agent, EpisodeInfo{s, seed, mode}));
    }
    return out;
}

inline int default_baseline_episodes(TaskId task) noexcept {
    switch (task) {
        case TaskId::restless_bandit:
        case TaskId::instrumental_learning:
        case TaskId::bart: return 100;
        default: return 1000;
    }
}

inline std::map<std::string, metrics::BaselineEntry> random_baseline(TaskId task, std::uint64_t seed, int episodes,
                                                                     const metrics::FitOptions& opt = {}) {
    const auto ts = simulate(task, RandomOracle{}, seed, episodes);
    std::map<std::string, metrics::BaselineEntry> out;
    for (const auto& [name, v] : metrics::compute_task_metrics(task, ts, opt)) {
        if (!v.value) throw Error("random baseline for " + name + " failed: " + v.error);
        out[name] = metrics::BaselineEntry{*v.value, seed, episodes};
    }
    return out;
}

/// (learning rate, optimism bias) pairs; the asymmetric learner uses alpha +/- bias/2.
inline const std::vector<std::pair<double, double>> rw_recovery_sets{{0.1, 0.0}, {0.3, 0.3}, {0.5, -0.2}};
inline constexpr double rw_recovery_temperature = 10.0;

inline const HorizonHeuristicOracle horizon_noisy_oracle{6.0, 60.0, 0.0, 0.0};
inline const HorizonHeuristicOracle horizon_information_oracle{5.0, 5.0, 0.0, 1.5};
inline constexpr int horizon_recovery_episodes = 2000;

struct RecoveryCheck {
    std::string name;
    std::string metric;
    double estimate = 0.0;
    std::string expectation;
    bool passed = false;
};

struct RecoveryProfile {
    /// Multiplies every tolerance.
    double tolerance_scale = 1.0;
    /// Multiplies every episode count.
    int data_scale = 1;

    static RecoveryProfile named(const std::string& name) {
        if (name == "default") return {};
        if (name == "strict") return {0.5, 4};
        throw ConfigError("unknown tolerance profile '" + name + "'");
    }
};

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

/// The full recovery suite. Every check is evaluated even after a failure.
inline std::vector<RecoveryCheck> run_recovery(const RecoveryProfile& profile = {}, std::uint64_t seed = 1,
                                               const metrics::Fitters& fit = {}) {
    std::vector<RecoveryCheck> checks;
    const metrics::FitOptions opt;
    const double k = profile.tolerance_scale;
    const int d = profile.data_scale;

    auto within = [&](std::string name, std::string metric, double est, double target, double tol) {
        tol *= k;
        checks.push_back({std::move(name), std::move(metric), est, fmt(target) + " +/- " + fmt(tol),
                          std::abs(est - target) <= tol});
    };
    auto z_above = [&](std::string name, std::string metric, double z, double bound) {
        checks.push_back({std::move(name), std::move(metric), z, "z > " + fmt(bound), z > bound});
    };
    auto z_below = [&](std::string name, std::string metric, double z, double bound) {
        checks.push_back({std::move(name), std::move(metric), z, "|z| < " + fmt(bound), std::abs(z) < bound});
    };
    auto guarded = [&](const std::string& name, const std::string& metric, const auto& body) {
        try {
            body();
        } catch (const std::exception& e) {
            checks.push_back({name, metric, std::nan(""), std::string("error: ") + e.what(), false});
        }
    };

    const auto pr = TaskId::probabilistic_reasoning;
    guarded("bayes_optimal", "prior_weighting", [&] {
        const auto ts = simulate(pr, BayesOptimalOracle{}, seed, 100 * d);
        const auto f = fit.prior_likelihood(ts, opt);
        within("bayes_optimal", "prior_weighting", f.prior_weight, 1.0, 0.02);
        within("bayes_optimal", "likelihood_weighting", f.likelihood_weight, 1.0, 0.02);
        within("bayes_optimal", "posterior_accuracy", metrics::posterior_accuracy(ts), 1.0, 0.01);
    });
    guarded("system_neglect", "prior_weighting", [&] {
        const auto f = fit.prior_likelihood(simulate(pr, SystemNeglectOracle{0.6, 0.6}, seed, 100 * d), opt);
        within("system_neglect", "prior_weighting", f.prior_weight, 0.6, 0.05);
        within("system_neglect", "likelihood_weighting", f.likelihood_weight, 0.6, 0.05);
    });

    // Learning rate is recovered from a symmetric learner; a single-rate fit of an
    // asymmetric learner does not land on the mean of its two rates.
    for (const auto& [alpha, bias] : rw_recovery_sets) {
        const std::string name = "rw(alpha=" + fmt(alpha) + ",bias=" + fmt(bias) + ")";
        guarded(name, "learning_rate", [&] {
            const auto sym = fit.learning(
                simulate(TaskId::instrumental_learning, RescorlaWagnerOracle{alpha, rw_recovery_temperature, 0.5}, seed, 10 * d), opt);
            within(name, "learning_rate", sym.learning_rate, alpha, 0.10);
            const AsymmetricRwOracle p{alpha + bias / 2.0, alpha - bias / 2.0, rw_recovery_temperature, 0.5};
            const auto asym = fit.learning(simulate(TaskId::instrumental_learning, p, seed, 10 * d), opt);
            within(name, "optimism_bias", asym.optimism_bias, bias, 0.12);
        });
    }

    guarded("two_step_model_based", "model_basedness", [&] {
        const auto f = fit.two_step(simulate(TaskId::two_step, HybridTwoStepOracle{1.0, 0.5, 5.0, 0.7}, seed, 100 * d), opt);
        z_above("two_step_model_based", "model_basedness", f.z, 3.0);
    });
    guarded("two_step_model_free", "model_basedness", [&] {
        const auto f = fit.two_step(simulate(TaskId::two_step, HybridTwoStepOracle{0.0, 0.5, 5.0, 0.7}, seed, 100 * d), opt);
        z_below("two_step_model_free", "model_basedness", f.z, 2.0);
    });

    guarded("horizon_noisy", "random_exploration", [&] {
        const auto f = fit.exploration(simulate(TaskId::horizon, horizon_noisy_oracle, seed, horizon_recovery_episodes * d), opt);
        z_above("horizon_noisy", "random_exploration", f.equal.z("interaction"), 3.0);
        z_below("horizon_noisy", "directed_exploration", f.unequal.z("horizon_6"), 2.0);
    });
    guarded("horizon_information_seeking", "directed_exploration", [&] {
        const auto f = fit.exploration(simulate(TaskId::horizon, horizon_information_oracle, seed, horizon_recovery_episodes * d), opt);
        z_above("horizon_information_seeking", "directed_exploration", f.unequal.z("horizon_6"), 3.0);
        z_below("horizon_information_seeking", "random_exploration", f.equal.z("interaction"), 2.0);
    });

    guarded("discounting_always_sooner", "temporal_discounting", [&] {
        within("discounting_always_sooner", "temporal_discounting",
               metrics::temporal_discounting(simulate(TaskId::temporal_discounting, DiscountingPreferenceOracle{true}, seed, 1)),
               19.0, 0.0);
        within("discounting_always_delayed", "temporal_discounting",
               metrics::temporal_discounting(simulate(TaskId::temporal_discounting, DiscountingPreferenceOracle{false}, seed, 1)),
               0.0, 0.0);
    });
    guarded("bart_never_stop", "risk", [&] {
        within("bart_never_stop", "risk", metrics::risk(simulate(TaskId::bart, BartFixedPumpsOracle{1000}, seed, 1000 * d)),
               28.5, 0.5);
    });
    return checks;
}

inline bool all_passed(const std::vector<RecoveryCheck>& checks) {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

}  // namespace cogbench
