#pragma once

// Built-in scripted and model-based agents. They answer in the same text form
// an LLM would, so their replies travel through the ordinary parse path.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cogbench/core/agent.hpp"
#include "cogbench/core/parse.hpp"
#include "cogbench/envs/horizon.hpp"
#include "cogbench/envs/restless_bandit.hpp"
#include "cogbench/envs/two_step.hpp"
#include "cogbench/numopt/math.hpp"

namespace cogbench {

struct RandomOracle {};
struct BayesOptimalOracle {};
struct SystemNeglectOracle {
    double prior_weight = 1.0;
    double likelihood_weight = 1.0;
};
/// Values start at initial_value; rewards above 1 (dollars) are divided by 100.
struct RescorlaWagnerOracle {
    double alpha = 0.3;
    double inverse_temperature = 8.0;
    double initial_value = 0.5;
};
struct AsymmetricRwOracle {
    double alpha_pos = 0.3;
    double alpha_neg = 0.3;
    double inverse_temperature = 8.0;
    double initial_value = 0.5;
};
/// Mixture of model-based (known transition model) and model-free first-stage values.
struct HybridTwoStepOracle {
    double w_model_based = 0.5;
    double alpha = 0.5;
    double inverse_temperature = 5.0;
    double common_prob = 0.7;
};
struct AlwaysFirstOracle {};
struct AlwaysLastOracle {};
/// Returns the listed raw replies in order, repeating the last one.
struct ScriptedOracle {
    std::vector<std::string> replies;
};
/// Logistic choice on the observed-mean difference (dollars) with a horizon-specific
/// temperature, plus a bonus toward the less-observed machine.
struct HorizonHeuristicOracle {
    double temperature_h1 = 5.0;
    double temperature_h6 = 5.0;
    double info_bonus_h1 = 0.0;
    double info_bonus_h6 = 0.0;
};
struct DiscountingPreferenceOracle {
    bool sooner = true;
};
/// Inflates each balloon until `pumps` inflations, then skips.
struct BartFixedPumpsOracle {
    int pumps = 0;
};

using OracleParams =
    std::variant<RandomOracle, BayesOptimalOracle, SystemNeglectOracle, RescorlaWagnerOracle, AsymmetricRwOracle,
                 HybridTwoStepOracle, AlwaysFirstOracle, AlwaysLastOracle, ScriptedOracle, HorizonHeuristicOracle,
                 DiscountingPreferenceOracle, BartFixedPumpsOracle>;

inline std::string oracle_kind(const OracleParams& p) {
    struct Visitor {
        std::string operator()(const RandomOracle&) const { return "random"; }
        std::string operator()(const BayesOptimalOracle&) const { return "bayes_optimal"; }
        std::string operator()(const SystemNeglectOracle&) const { return "system_neglect"; }
        std::string operator()(const RescorlaWagnerOracle&) const { return "rescorla_wagner"; }
        std::string operator()(const AsymmetricRwOracle&) const { return "rw_asymmetric"; }
        std::string operator()(const HybridTwoStepOracle&) const { return "hybrid_two_step"; }
        std::string operator()(const AlwaysFirstOracle&) const { return "always_first"; }
        std::string operator()(const AlwaysLastOracle&) const { return "always_last"; }
        std::string operator()(const ScriptedOracle&) const { return "staircase_scripted"; }
        std::string operator()(const HorizonHeuristicOracle&) const { return "horizon_heuristic"; }
        std::string operator()(const DiscountingPreferenceOracle&) const { return "discounting_preference"; }
        std::string operator()(const BartFixedPumpsOracle&) const { return "bart_fixed_pumps"; }
    };
    return std::visit(Visitor{}, p);
}

inline json oracle_to_json(const OracleParams& p) {
    json j{{"kind", oracle_kind(p)}};
    if (auto* s = std::get_if<SystemNeglectOracle>(&p)) {
        j["prior_weight"] = s->prior_weight;
        j["likelihood_weight"] = s->likelihood_weight;
    } else if (auto* rw = std::get_if<RescorlaWagnerOracle>(&p)) {
        j["alpha"] = rw->alpha;
        j["inverse_temperature"] = rw->inverse_temperature;
        j["initial_value"] = rw->initial_value;
    } else if (auto* a = std::get_if<AsymmetricRwOracle>(&p)) {
        j["alpha_pos"] = a->alpha_pos;
        j["alpha_neg"] = a->alpha_neg;
        j["inverse_temperature"] = a->inverse_temperature;
        j["initial_value"] = a->initial_value;
    } else if (auto* h = std::get_if<HybridTwoStepOracle>(&p)) {
        j["w_model_based"] = h->w_model_based;
        j["alpha"] = h->alpha;
        j["inverse_temperature"] = h->inverse_temperature;
        j["common_prob"] = h->common_prob;
    } else if (auto* sc = std::get_if<ScriptedOracle>(&p)) {
        j["replies"] = sc->replies;
    } else if (auto* hh = std::get_if<HorizonHeuristicOracle>(&p)) {
        j["temperature_h1"] = hh->temperature_h1;
        j["temperature_h6"] = hh->temperature_h6;
        j["info_bonus_h1"] = hh->info_bonus_h1;
        j["info_bonus_h6"] = hh->info_bonus_h6;
    } else if (auto* d = std::get_if<DiscountingPreferenceOracle>(&p)) {
        j["sooner"] = d->sooner;
    } else if (auto* b = std::get_if<BartFixedPumpsOracle>(&p)) {
        j["pumps"] = b->pumps;
    }
    return j;
}

inline void validate(const OracleParams& p) {
    auto unit = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
    };
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0)) throw ConfigError(std::string(name) + " must be >= 0");
    };
    if (auto* rw = std::get_if<RescorlaWagnerOracle>(&p)) {
        unit(rw->alpha, "alpha");
        nonneg(rw->inverse_temperature, "inverse_temperature");
    } else if (auto* a = std::get_if<AsymmetricRwOracle>(&p)) {
        unit(a->alpha_pos, "alpha_pos");
        unit(a->alpha_neg, "alpha_neg");
        nonneg(a->inverse_temperature, "inverse_temperature");
    } else if (auto* h = std::get_if<HybridTwoStepOracle>(&p)) {
        unit(h->w_model_based, "w_model_based");
        unit(h->alpha, "alpha");
        nonneg(h->inverse_temperature, "inverse_temperature");
    } else if (auto* s = std::get_if<SystemNeglectOracle>(&p)) {
        nonneg(s->prior_weight, "prior_weight");
        nonneg(s->likelihood_weight, "likelihood_weight");
    } else if (auto* hh = std::get_if<HorizonHeuristicOracle>(&p)) {
        if (!(hh->temperature_h1 > 0.0 && hh->temperature_h6 > 0.0)) throw ConfigError("horizon temperatures must be > 0");
    } else if (auto* b = std::get_if<BartFixedPumpsOracle>(&p)) {
        if (b->pumps < 0) throw ConfigError("pumps must be >= 0");
    } else if (auto* sc = std::get_if<ScriptedOracle>(&p)) {
        if (sc->replies.empty()) throw ConfigError("scripted oracle needs at least one reply");
    }
}

inline OracleParams oracle_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    OracleParams p;
    if (kind == "random") p = RandomOracle{};
    else if (kind == "bayes_optimal") p = BayesOptimalOracle{};
    else if (kind == "system_neglect")
        p = SystemNeglectOracle{j.value("prior_weight", 1.0), j.value("likelihood_weight", 1.0)};
    else if (kind == "rescorla_wagner")
        p = RescorlaWagnerOracle{j.value("alpha", 0.3), j.value("inverse_temperature", 8.0), j.value("initial_value", 0.5)};
    else if (kind == "rw_asymmetric")
        p = AsymmetricRwOracle{j.value("alpha_pos", 0.3), j.value("alpha_neg", 0.3), j.value("inverse_temperature", 8.0),
                               j.value("initial_value", 0.5)};
    else if (kind == "hybrid_two_step")
        p = HybridTwoStepOracle{j.value("w_model_based", 0.5), j.value("alpha", 0.5), j.value("inverse_temperature", 5.0),
                                j.value("common_prob", 0.7)};
    else if (kind == "always_first") p = AlwaysFirstOracle{};
    else if (kind == "always_last") p = AlwaysLastOracle{};
    else if (kind == "staircase_scripted" || kind == "scripted")
        p = ScriptedOracle{j.at("replies").get<std::vector<std::string>>()};
    else if (kind == "horizon_heuristic")
        p = HorizonHeuristicOracle{j.value("temperature_h1", 5.0), j.value("temperature_h6", 5.0),
                                   j.value("info_bonus_h1", 0.0), j.value("info_bonus_h6", 0.0)};
    else if (kind == "discounting_preference") p = DiscountingPreferenceOracle{j.value("sooner", true)};
    else if (kind == "bart_fixed_pumps") p = BartFixedPumpsOracle{j.value("pumps", 0)};
    else throw ConfigError("unknown oracle kind '" + kind + "'");
    validate(p);
    return p;
}

/// Whether an oracle kind can play a task.
inline bool supports(const OracleParams& p, TaskId task) {
    if (std::holds_alternative<RandomOracle>(p) || std::holds_alternative<AlwaysFirstOracle>(p) ||
        std::holds_alternative<AlwaysLastOracle>(p) || std::holds_alternative<ScriptedOracle>(p))
        return true;
    if (std::holds_alternative<BayesOptimalOracle>(p) || std::holds_alternative<SystemNeglectOracle>(p))
        return task == TaskId::probabilistic_reasoning;
    if (std::holds_alternative<RescorlaWagnerOracle>(p) || std::holds_alternative<AsymmetricRwOracle>(p))
        return task == TaskId::instrumental_learning || task == TaskId::restless_bandit || task == TaskId::horizon;
    if (std::holds_alternative<HybridTwoStepOracle>(p)) return task == TaskId::two_step;
    if (std::holds_alternative<HorizonHeuristicOracle>(p)) return task == TaskId::horizon;
    if (std::holds_alternative<DiscountingPreferenceOracle>(p)) return task == TaskId::temporal_discounting;
    if (std::holds_alternative<BartFixedPumpsOracle>(p)) return task == TaskId::bart;
    return false;
}

/// Probability of picking option 0 under a softmax over two values.
inline double softmax2(double v0, double v1, double inverse_temperature) noexcept {
    if (std::isinf(inverse_temperature)) return v0 > v1 ? 1.0 : (v0 < v1 ? 0.0 : 0.5);
    return numopt::sigmoid(inverse_temperature * (v0 - v1));
}

class OracleAgent final : public Agent {
public:
    OracleAgent(OracleParams params, TaskId task, SeededStream stream)
        : params_(std::move(params)), task_(task), stream_(std::move(stream)) {
        validate(params_);
        if (!supports(params_, task_))
            throw ConfigError("oracle '" + oracle_kind(params_) + "' cannot play task '" + std::string(to_string(task_)) + "'");
    }

    std::string describe() const override { return "oracle:" + oracle_kind(params_); }

    std::string respond(const TrialContext& ctx) override {
        if (auto* sc = std::get_if<ScriptedOracle>(&params_)) {
            const std::size_t i = std::min(calls_++, sc->replies.size() - 1);
            return sc->replies[i];
        }
        catch_up(ctx.history);
        return format_reply(choose(ctx), ctx.query, ctx.mode);
    }

    /// The oracle's decision for a query, before formatting.
    Choice choose(const TrialContext& ctx) {
        catch_up(ctx.history);
        const ChoiceQuery& q = ctx.query;
        return std::visit([&](const auto& p) { return decide(p, ctx, q); }, params_);
    }

    static std::string format_reply(const Choice& c, const ChoiceQuery& q, PromptMode mode) {
        std::string answer = is_discrete(q.answer_kind) ? choice_token(c) : format_two_decimals(choice_value(c));
        if (mode == PromptMode::base) return answer;
        return std::string(final_answer_marker) + " " + answer;
    }

private:
    using Values = std::array<double, 2>;

    Choice pick(const ChoiceQuery& q, double p_first) {
        return q.valid_tokens[stream_.bernoulli(p_first) ? 0 : 1];
    }

    Choice decide(const RandomOracle&, const TrialContext&, const ChoiceQuery& q) {
        if (is_discrete(q.answer_kind)) return q.valid_tokens[stream_.index(q.valid_tokens.size())];
        return static_cast<double>(stream_.uniform_int(0, 100)) / 100.0;
    }

    Choice decide(const AlwaysFirstOracle&, const TrialContext&, const ChoiceQuery& q) {
        if (is_discrete(q.answer_kind)) return q.valid_tokens.front();
        return 0.0;
    }

    Choice decide(const AlwaysLastOracle&, const TrialContext&, const ChoiceQuery& q) {
        if (is_discrete(q.answer_kind)) return q.valid_tokens.back();
        return 1.0;
    }

    Choice decide(const ScriptedOracle&, const TrialContext&, const ChoiceQuery& q) { return q.valid_tokens.front(); }

    Choice decide(const BayesOptimalOracle&, const TrialContext& ctx, const ChoiceQuery&) {
        return round2(ctx.meta.at("posterior").get<double>());
    }

    Choice decide(const SystemNeglectOracle& p, const TrialContext& ctx, const ChoiceQuery&) {
        const double prior = ctx.meta.at("prior_f").get<double>();
        const double lik = ctx.meta.at("likelihood_red_given_f").get<double>();
        if (prior <= 0.0 || prior >= 1.0) return prior;
        const bool red = ctx.meta.at("ball") == "red";
        const double llr = red ? numopt::logit(lik) : -numopt::logit(lik);
        return round2(numopt::sigmoid(p.prior_weight * numopt::logit(prior) + p.likelihood_weight * llr));
    }

    Choice decide(const DiscountingPreferenceOracle& p, const TrialContext& ctx, const ChoiceQuery&) {
        const std::string sooner = ctx.meta.at("sooner_token").get<std::string>();
        if (p.sooner) return sooner;
        return std::string(sooner == "1" ? "2" : "1");
    }

    Choice decide(const BartFixedPumpsOracle& p, const TrialContext& ctx, const ChoiceQuery&) {
        return std::string(ctx.meta.at("pumps_so_far").get<int>() < p.pumps ? "0" : "1");
    }

    Choice decide(const HorizonHeuristicOracle& p, const TrialContext& ctx, const ChoiceQuery& q) {
        const bool long_horizon = ctx.meta.at("horizon").get<int>() == 6;
        const double temperature = long_horizon ? p.temperature_h6 : p.temperature_h1;
        const double bonus = long_horizon ? p.info_bonus_h6 : p.info_bonus_h1;
        const double mean0 = counts_[0] > 0 ? sums_[0] / counts_[0] : 0.0;
        const double mean1 = counts_[1] > 0 ? sums_[1] / counts_[1] : 0.0;
        const double info0 = counts_[0] < counts_[1] ? 1.0 : (counts_[0] > counts_[1] ? -1.0 : 0.0);
        return pick(q, numopt::sigmoid((mean0 - mean1) / temperature + bonus * info0));
    }

    Choice decide(const RescorlaWagnerOracle& p, const TrialContext& ctx, const ChoiceQuery& q) {
        return bandit_decision(p.inverse_temperature, p.initial_value, ctx, q);
    }

    Choice decide(const AsymmetricRwOracle& p, const TrialContext& ctx, const ChoiceQuery& q) {
        return bandit_decision(p.inverse_temperature, p.initial_value, ctx, q);
    }

    Choice bandit_decision(double beta, double initial, const TrialContext& ctx, const ChoiceQuery& q) {
        if (!is_discrete(q.answer_kind)) return round2(last_choice_prob_);
        const Values& v = values_for(bandit_context(ctx.meta), initial);
        const double p0 = softmax2(v[0], v[1], beta);
        Choice c = pick(q, p0);
        last_choice_prob_ = choice_token(c) == q.valid_tokens[0] ? p0 : 1.0 - p0;
        return c;
    }

    Choice decide(const HybridTwoStepOracle& p, const TrialContext& ctx, const ChoiceQuery& q) {
        if (ctx.meta.at("stage").get<int>() == 1) {
            double net[2];
            for (int planet = 0; planet < 2; ++planet) {
                const double common_best = std::max(stage2_[planet][0], stage2_[planet][1]);
                const double rare_best = std::max(stage2_[1 - planet][0], stage2_[1 - planet][1]);
                const double mb = p.common_prob * common_best + (1.0 - p.common_prob) * rare_best;
                net[planet] = p.w_model_based * mb + (1.0 - p.w_model_based) * stage1_mf_[planet];
            }
            return pick(q, softmax2(net[0], net[1], p.inverse_temperature));
        }
        const int state = ctx.meta.at("arrived") == envs::two_step_planets[0] ? 0 : 1;
        return pick(q, softmax2(stage2_[state][0], stage2_[state][1], p.inverse_temperature));
    }

    int bandit_context(const json& meta) const {
        if (task_ == TaskId::instrumental_learning) return meta.at("casino").get<int>();
        return 0;
    }

    Values& values_for(int context, double initial) {
        auto it = values_.find(context);
        if (it == values_.end()) it = values_.emplace(context, Values{initial, initial}).first;
        return it->second;
    }

    /// Folds trials recorded since the previous call into the agent's state.
    void catch_up(const Transcript& history) {
        for (; processed_ < history.trials.size(); ++processed_) observe(history.trials[processed_]);
    }

    void observe(const TrialRecord& r) {
        if (std::holds_alternative<HorizonHeuristicOracle>(params_)) {
            const int arm = r.outcome.at("machine") == envs::horizon_machines[0] ? 0 : 1;
            sums_[arm] += r.outcome.at("reward").get<double>();
            counts_[arm] += 1;
            return;
        }
        if (auto* h = std::get_if<HybridTwoStepOracle>(&params_)) {
            if (r.meta.at("stage").get<int>() == 1) {
                last_planet_ = r.outcome.at("planet") == envs::two_step_planets[0] ? 0 : 1;
                return;
            }
            const int state = r.meta.at("arrived") == envs::two_step_planets[0] ? 0 : 1;
            const auto& aliens = envs::two_step_aliens[static_cast<std::size_t>(state)];
            const int alien = r.outcome.at("alien") == aliens[0] ? 0 : 1;
            const double reward = r.outcome.at("treasure").get<double>();
            stage2_[state][alien] += h->alpha * (reward - stage2_[state][alien]);
            stage1_mf_[last_planet_] += h->alpha * (reward - stage1_mf_[last_planet_]);
            return;
        }
        const bool rw = std::holds_alternative<RescorlaWagnerOracle>(params_);
        const bool rw_pm = std::holds_alternative<AsymmetricRwOracle>(params_);
        if (!rw && !rw_pm) return;

        int arm = 0;
        double reward = 0.0;
        if (task_ == TaskId::instrumental_learning) {
            arm = r.outcome.at("arm").get<int>();
            reward = r.outcome.at("reward").get<double>();
        } else if (task_ == TaskId::restless_bandit) {
            if (r.meta.at("step") != "confidence") return;
            arm = r.outcome.at("machine") == envs::restless_machines[0] ? 0 : 1;
            reward = r.outcome.at("reward").get<double>() / 100.0;
        } else {
            arm = r.outcome.at("machine") == envs::horizon_machines[0] ? 0 : 1;
            reward = r.outcome.at("reward").get<double>() / 100.0;
        }
        if (rw) {
            const auto& p = std::get<RescorlaWagnerOracle>(params_);
            Values& v = values_for(bandit_context(r.meta), p.initial_value);
            v[static_cast<std::size_t>(arm)] += p.alpha * (reward - v[static_cast<std::size_t>(arm)]);
        } else {
            const auto& p = std::get<AsymmetricRwOracle>(params_);
            Values& v = values_for(bandit_context(r.meta), p.initial_value);
            const double delta = reward - v[static_cast<std::size_t>(arm)];
            v[static_cast<std::size_t>(arm)] += (delta > 0.0 ? p.alpha_pos : p.alpha_neg) * delta;
        }
    }

    OracleParams params_;
    TaskId task_;
    SeededStream stream_;
    std::size_t processed_ = 0;
    std::size_t calls_ = 0;

    std::map<int, Values> values_;
    double last_choice_prob_ = 0.5;

    std::array<double, 2> sums_{};
    std::array<int, 2> counts_{};

    double stage2_[2][2] = {{0.5, 0.5}, {0.5, 0.5}};
    double stage1_mf_[2] = {0.5, 0.5};
    int last_planet_ = 0;
};

}  // namespace cogbench
