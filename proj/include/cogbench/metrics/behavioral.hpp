#pragma once

// Behavioural metrics fitted on pooled transcripts of one agent.
// Invalid (fallback) trials are included unless include_invalid is false.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cogbench/core/types.hpp"
#include "cogbench/envs/horizon.hpp"
#include "cogbench/envs/temporal_discounting.hpp"
#include "cogbench/envs/two_step.hpp"
#include "cogbench/numopt/optimize.hpp"
#include "cogbench/numopt/regression.hpp"

namespace cogbench::metrics {

using Transcripts = std::vector<Transcript>;

struct FitOptions {
    double clamp_lo = 0.01;
    double clamp_hi = 0.99;
    bool include_invalid = true;
    int min_estimates = 10;
    numopt::LogisticOptions logistic;
    numopt::OptOptions optimizer;
};

inline bool usable(const TrialRecord& r, const FitOptions& opt) { return opt.include_invalid || !r.invalid; }

inline Eigen::MatrixXd to_matrix(const std::vector<std::array<double, 3>>& rows) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), 3);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < 3; ++j) X(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    return X;
}

inline Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// ---- probabilistic reasoning ------------------------------------------------

struct PriorLikelihoodFit {
    double intercept = 0.0;
    double prior_weight = 0.0;
    double likelihood_weight = 0.0;
    numopt::RegressionResult regression;
};

/// OLS of logit(estimate) on logit(prior) and the signed log likelihood ratio.
inline PriorLikelihoodFit fit_prior_likelihood(const Transcripts& ts, const FitOptions& opt = {}) {
    std::vector<std::array<double, 2>> x;
    std::vector<double> y;
    bool interior = false;
    for (const auto& t : ts) {
        for (const auto& r : t.trials) {
            if (!usable(r, opt) || !std::holds_alternative<double>(r.parsed_choice)) continue;
            const double prior = r.meta.at("prior_f").get<double>();
            const double lik = r.meta.at("likelihood_red_given_f").get<double>();
            const double llr = r.meta.at("ball") == "red" ? numopt::logit(lik) : -numopt::logit(lik);
            const double raw = choice_value(r.parsed_choice);
            if (raw > opt.clamp_lo && raw < opt.clamp_hi) interior = true;
            const double est = std::clamp(raw, opt.clamp_lo, opt.clamp_hi);
            x.push_back({numopt::logit(prior), llr});
            y.push_back(numopt::logit(est));
        }
    }
    if (static_cast<int>(y.size()) < opt.min_estimates)
        throw InsufficientDesignError("prior/likelihood fit needs at least " + std::to_string(opt.min_estimates) +
                                      " estimates, got " + std::to_string(y.size()));
    if (!interior) throw DegenerateDataError("every probability estimate lies at the clamp bounds");

    Eigen::MatrixXd X(static_cast<Eigen::Index>(x.size()), 2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        X(static_cast<Eigen::Index>(i), 0) = x[i][0];
        X(static_cast<Eigen::Index>(i), 1) = x[i][1];
    }
    PriorLikelihoodFit fit;
    fit.regression = numopt::ols(X, to_vector(y), {"log_prior_odds", "log_likelihood_ratio"});
    fit.intercept = fit.regression.coef(0);
    fit.prior_weight = fit.regression.coef(1);
    fit.likelihood_weight = fit.regression.coef(2);
    return fit;
}

// ---- horizon ----------------------------------------------------------------

struct FirstChoice {
    int horizon = 1;
    bool equal_info = true;
    /// Observed forced-trial means per arm.
    std::array<double, 2> means{};
    std::optional<int> less_observed;
    int chosen = 0;
};

inline std::vector<FirstChoice> first_free_choices(const Transcripts& ts, const FitOptions& opt = {}) {
    std::vector<FirstChoice> out;
    for (const auto& t : ts) {
        std::array<double, 2> sum{}, count{};
        for (const auto& r : t.trials) {
            const int arm = r.outcome.at("machine") == envs::horizon_machines[0] ? 0 : 1;
            if (r.forced) {
                sum[static_cast<std::size_t>(arm)] += r.outcome.at("reward").get<double>();
                count[static_cast<std::size_t>(arm)] += 1;
                continue;
            }
            if (r.meta.at("free_index").get<int>() != 0) continue;
            if (!usable(r, opt) || count[0] == 0 || count[1] == 0) break;
            FirstChoice c;
            c.horizon = r.meta.at("horizon").get<int>();
            c.equal_info = r.meta.at("info_condition") == "equal_2_2";
            c.means = {sum[0] / count[0], sum[1] / count[1]};
            if (!r.meta.at("less_observed").is_null())
                c.less_observed = r.meta.at("less_observed") == envs::horizon_machines[0] ? 0 : 1;
            c.chosen = arm;
            out.push_back(c);
            break;
        }
    }
    return out;
}

struct ExplorationFit {
    double directed = 0.0;
    double random = 0.0;
    numopt::RegressionResult unequal;
    numopt::RegressionResult equal;
};

/// Logistic regressions on the first free choice of every game.
/// Unequal information: y = chose less-observed arm, x1 = mean(less) - mean(more).
/// Equal information: y = chose lower-mean arm, x1 = |mean difference|; ties dropped.
/// Both use x2 = horizon-6 indicator and x3 = x1*x2; directed = b(x2) of the first, random = b(x3) of the second.
inline ExplorationFit fit_exploration(const Transcripts& ts, const FitOptions& opt = {}) {
    std::vector<std::array<double, 3>> xu, xe;
    std::vector<double> yu, ye;
    std::array<int, 4> cells{};
    for (const auto& c : first_free_choices(ts, opt)) {
        const double h6 = c.horizon == 6 ? 1.0 : 0.0;
        if (c.equal_info) {
            const double diff = c.means[0] - c.means[1];
            if (diff == 0.0) continue;
            const int lower = diff < 0.0 ? 0 : 1;
            const double x1 = std::abs(diff);
            xe.push_back({x1, h6, x1 * h6});
            ye.push_back(c.chosen == lower ? 1.0 : 0.0);
            ++cells[static_cast<std::size_t>(c.horizon == 6 ? 1 : 0)];
        } else {
            const int less = *c.less_observed;
            const double x1 = c.means[static_cast<std::size_t>(less)] - c.means[static_cast<std::size_t>(1 - less)];
            xu.push_back({x1, h6, x1 * h6});
            yu.push_back(c.chosen == less ? 1.0 : 0.0);
            ++cells[static_cast<std::size_t>(c.horizon == 6 ? 3 : 2)];
        }
    }
    static const char* cell_names[] = {"equal/horizon 1", "equal/horizon 6", "unequal/horizon 1", "unequal/horizon 6"};
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] < 2) throw InsufficientDesignError(std::string("exploration fit is missing the ") + cell_names[i] + " cell");

    const std::vector<std::string> names{"mean_difference", "horizon_6", "interaction"};
    ExplorationFit fit;
    fit.unequal = numopt::logistic_fit(to_matrix(xu), to_vector(yu), names, opt.logistic);
    fit.equal = numopt::logistic_fit(to_matrix(xe), to_vector(ye), names, opt.logistic);
    fit.directed = fit.unequal.coef("horizon_6");
    fit.random = fit.equal.coef("interaction");
    return fit;
}

// ---- restless bandit --------------------------------------------------------

struct MetacognitionResult {
    double qsr = 0.0;
    int n_trials = 0;
    /// All confidences equal; scaled confidence was set to 0.5.
    bool constant_confidence = false;
};

/// Mean over trials of 1 - (correct - scaled confidence)^2, with confidences
/// min-max scaled over all pooled reports.
inline MetacognitionResult metacognition(const Transcripts& ts, const FitOptions& opt = {}) {
    std::vector<std::pair<double, double>> rows;
    for (const auto& t : ts)
        for (const auto& r : t.trials)
            if (r.meta.at("step") == "confidence" && usable(r, opt))
                rows.emplace_back(r.outcome.at("correct").get<bool>() ? 1.0 : 0.0, r.outcome.at("confidence").get<double>());
    if (rows.empty()) throw InsufficientDesignError("metacognition needs at least one confidence report");
    double lo = rows.front().second, hi = lo;
    for (const auto& [acc, c] : rows) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    MetacognitionResult res;
    res.n_trials = static_cast<int>(rows.size());
    res.constant_confidence = hi == lo;
    double total = 0.0;
    for (const auto& [acc, c] : rows) {
        const double scaled = res.constant_confidence ? 0.5 : (c - lo) / (hi - lo);
        total += 1.0 - (acc - scaled) * (acc - scaled);
    }
    res.qsr = total / static_cast<double>(rows.size());
    return res;
}

// ---- instrumental learning --------------------------------------------------

struct BanditChoice {
    int context = 0;
    int arm = 0;
    double reward = 0.0;
};

/// Per-episode (casino, arm, reward) sequences.
inline std::vector<std::vector<BanditChoice>> bandit_sequences(const Transcripts& ts, const FitOptions& opt = {}) {
    std::vector<std::vector<BanditChoice>> out;
    for (const auto& t : ts) {
        std::vector<BanditChoice> seq;
        for (const auto& r : t.trials) {
            if (!usable(r, opt)) continue;
            seq.push_back({r.meta.at("casino").get<int>(), r.outcome.at("arm").get<int>(), r.outcome.at("reward").get<double>()});
        }
        out.push_back(std::move(seq));
    }
    return out;
}

/// Negative log-likelihood of softmax choices under Rescorla-Wagner with separate
/// learning rates for positive and negative prediction errors. Values start at
/// `initial` for every machine of every casino; only the chosen machine updates.
inline double rw_nll(const std::vector<std::vector<BanditChoice>>& data, double alpha_pos, double alpha_neg,
                     double inverse_temperature, double initial = 0.5) {
    double nll = 0.0;
    for (const auto& seq : data) {
        std::map<int, std::array<double, 2>> v;
        for (const auto& c : seq) {
            auto it = v.try_emplace(c.context, std::array<double, 2>{initial, initial}).first;
            auto& q = it->second;
            const double d = inverse_temperature * (q[static_cast<std::size_t>(c.arm)] - q[static_cast<std::size_t>(1 - c.arm)]);
            nll -= numopt::log_sigmoid(d);
            const double delta = c.reward - q[static_cast<std::size_t>(c.arm)];
            q[static_cast<std::size_t>(c.arm)] += (delta > 0.0 ? alpha_pos : alpha_neg) * delta;
        }
    }
    return nll;
}

struct LearningFit {
    double learning_rate = 0.0;
    double inverse_temperature = 0.0;
    double alpha_pos = 0.0;
    double alpha_neg = 0.0;
    double inverse_temperature_pm = 0.0;
    double optimism_bias = 0.0;
    numopt::OptResult rw;
    numopt::OptResult rw_pm;
};

inline const std::vector<numopt::Bounds> rw_bounds{{0.0, 1.0}, {0.0, 20.0}};
inline const std::vector<numopt::Bounds> rw_pm_bounds{{0.0, 1.0}, {0.0, 1.0}, {0.0, 20.0}};

inline LearningFit fit_learning(const Transcripts& ts, const FitOptions& opt = {}) {
    const auto data = bandit_sequences(ts, opt);
    std::size_t n = 0;
    for (const auto& s : data) n += s.size();
    if (n == 0) throw InsufficientDesignError("learning fit needs at least one casino visit");

    LearningFit fit;
    fit.rw = numopt::minimize_nll([&](const numopt::Params& p) { return rw_nll(data, p[0], p[0], p[1]); }, rw_bounds,
                                  opt.optimizer);
    fit.rw_pm = numopt::minimize_nll([&](const numopt::Params& p) { return rw_nll(data, p[0], p[1], p[2]); },
                                     rw_pm_bounds, opt.optimizer);
    fit.learning_rate = fit.rw.params[0];
    fit.inverse_temperature = fit.rw.params[1];
    fit.alpha_pos = fit.rw_pm.params[0];
    fit.alpha_neg = fit.rw_pm.params[1];
    fit.inverse_temperature_pm = fit.rw_pm.params[2];
    fit.optimism_bias = fit.alpha_pos - fit.alpha_neg;
    return fit;
}

// ---- two-step ---------------------------------------------------------------

inline std::vector<std::vector<envs::TwoStepDay>> two_step_days(const Transcripts& ts) {
    std::vector<std::vector<envs::TwoStepDay>> out;
    for (const auto& t : ts) {
        std::vector<envs::TwoStepDay> days;
        envs::TwoStepDay d;
        for (const auto& r : t.trials) {
            if (r.meta.at("stage").get<int>() == 1) {
                d.boarded = r.outcome.at("planet") == envs::two_step_planets[0] ? 0 : 1;
                d.arrived = r.outcome.at("arrived") == envs::two_step_planets[0] ? 0 : 1;
            } else {
                const auto& aliens = envs::two_step_aliens[static_cast<std::size_t>(d.arrived)];
                d.alien = r.outcome.at("alien") == aliens[0] ? 0 : 1;
                d.treasure = r.outcome.at("treasure").get<int>() == 1;
                days.push_back(d);
            }
        }
        out.push_back(std::move(days));
    }
    return out;
}

struct ModelBasednessFit {
    double interaction = 0.0;
    double z = 0.0;
    numopt::RegressionResult regression;
};

/// Logistic regression of stay on previous reward, previous common transition and their product.
inline ModelBasednessFit model_basedness(const Transcripts& ts, const FitOptions& opt = {}) {
    std::vector<std::array<double, 3>> x;
    std::vector<double> y;
    for (const auto& days : two_step_days(ts)) {
        for (std::size_t i = 1; i < days.size(); ++i) {
            const double reward = days[i - 1].treasure ? 1.0 : 0.0;
            const double common = days[i - 1].common() ? 1.0 : 0.0;
            x.push_back({reward, common, reward * common});
            y.push_back(days[i].boarded == days[i - 1].boarded ? 1.0 : 0.0);
        }
    }
    if (y.size() < 2) throw InsufficientDesignError("model-basedness needs at least two consecutive-day pairs");
    const double stays = std::accumulate(y.begin(), y.end(), 0.0);
    if (stays == 0.0 || stays == static_cast<double>(y.size()))
        throw DegenerateDataError("stay variable has no variance");
    ModelBasednessFit fit;
    fit.regression = numopt::logistic_fit(to_matrix(x), to_vector(y), {"reward", "common", "interaction"}, opt.logistic);
    fit.interaction = fit.regression.coef("interaction");
    fit.z = fit.regression.z("interaction");
    return fit;
}

// ---- temporal discounting and BART -------------------------------------------

/// Mean battery score over episodes.
inline double temporal_discounting(const Transcripts& ts) {
    if (ts.empty()) throw InsufficientDesignError("temporal discounting needs a completed battery");
    double total = 0.0;
    for (const auto& t : ts) total += envs::discounting_score(t);
    return total / static_cast<double>(ts.size());
}

struct BalloonSummary {
    int pumps = 0;
    bool exploded = false;
};

inline std::vector<BalloonSummary> balloons(const Transcripts& ts) {
    std::vector<BalloonSummary> out;
    for (const auto& t : ts)
        for (const auto& r : t.trials) {
            const auto& ev = r.outcome.at("event");
            if (ev == "banked" || ev == "exploded") out.push_back({r.outcome.at("pumps").get<int>(), ev == "exploded"});
        }
    return out;
}

/// Mean number of inflations per balloon, exploded balloons included.
inline double risk(const Transcripts& ts) {
    const auto bs = balloons(ts);
    if (bs.empty()) throw InsufficientDesignError("risk needs at least one finished balloon");
    double total = 0.0;
    for (const auto& b : bs) total += b.pumps;
    return total / static_cast<double>(bs.size());
}

}  // namespace cogbench::metrics
