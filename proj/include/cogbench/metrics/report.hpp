#pragma once

// Metric catalogue, human normalisation and report emission.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cogbench/core/transcript_io.hpp"
#include "cogbench/metrics/behavioral.hpp"
#include "cogbench/metrics/performance.hpp"

namespace cogbench::metrics {

enum class MetricKind { behavioral, performance };

struct MetricDef {
    std::string name;
    TaskId task;
    MetricKind kind;
};

/// Ten behavioural then six performance metrics, in report order.
inline const std::vector<MetricDef>& metric_catalog() {
    static const std::vector<MetricDef> defs{
        {"prior_weighting", TaskId::probabilistic_reasoning, MetricKind::behavioral},
        {"likelihood_weighting", TaskId::probabilistic_reasoning, MetricKind::behavioral},
        {"directed_exploration", TaskId::horizon, MetricKind::behavioral},
        {"random_exploration", TaskId::horizon, MetricKind::behavioral},
        {"meta_cognition", TaskId::restless_bandit, MetricKind::behavioral},
        {"learning_rate", TaskId::instrumental_learning, MetricKind::behavioral},
        {"optimism_bias", TaskId::instrumental_learning, MetricKind::behavioral},
        {"model_basedness", TaskId::two_step, MetricKind::behavioral},
        {"temporal_discounting", TaskId::temporal_discounting, MetricKind::behavioral},
        {"risk", TaskId::bart, MetricKind::behavioral},
        {"posterior_accuracy", TaskId::probabilistic_reasoning, MetricKind::performance},
        {"horizon_reward", TaskId::horizon, MetricKind::performance},
        {"restless_accuracy", TaskId::restless_bandit, MetricKind::performance},
        {"instrumental_reward", TaskId::instrumental_learning, MetricKind::performance},
        {"two_step_reward", TaskId::two_step, MetricKind::performance},
        {"bart_points", TaskId::bart, MetricKind::performance},
    };
    return defs;
}

inline std::vector<MetricDef> metrics_for(TaskId task) {
    std::vector<MetricDef> out;
    for (const auto& d : metric_catalog())
        if (d.task == task) out.push_back(d);
    return out;
}

/// Raw value of every metric of one task; a fit that fails yields an error entry.
struct MetricValue {
    std::optional<double> value;
    std::string error;
};

/// Replaceable fitting functions. The defaults are the real fitters; tests swap in broken ones.
struct Fitters {
    std::function<PriorLikelihoodFit(const Transcripts&, const FitOptions&)> prior_likelihood = fit_prior_likelihood;
    std::function<ExplorationFit(const Transcripts&, const FitOptions&)> exploration = fit_exploration;
    std::function<MetacognitionResult(const Transcripts&, const FitOptions&)> meta = metacognition;
    std::function<LearningFit(const Transcripts&, const FitOptions&)> learning = fit_learning;
    std::function<ModelBasednessFit(const Transcripts&, const FitOptions&)> two_step = model_basedness;
};

inline std::map<std::string, MetricValue> compute_task_metrics(TaskId task, const Transcripts& ts,
                                                               const FitOptions& opt = {}, const Fitters& fit = {}) {
    std::map<std::string, MetricValue> out;
    auto guarded = [&](const std::vector<std::string>& names, const auto& body) {
        try {
            body();
        } catch (const std::exception& e) {
            for (const auto& n : names) out[n] = MetricValue{std::nullopt, e.what()};
        }
    };
    switch (task) {
        case TaskId::probabilistic_reasoning:
            guarded({"prior_weighting", "likelihood_weighting"}, [&] {
                const auto f = fit.prior_likelihood(ts, opt);
                out["prior_weighting"] = {f.prior_weight, {}};
                out["likelihood_weighting"] = {f.likelihood_weight, {}};
            });
            guarded({"posterior_accuracy"}, [&] { out["posterior_accuracy"] = {posterior_accuracy(ts), {}}; });
            break;
        case TaskId::horizon:
            guarded({"directed_exploration", "random_exploration"}, [&] {
                const auto f = fit.exploration(ts, opt);
                out["directed_exploration"] = {f.directed, {}};
                out["random_exploration"] = {f.random, {}};
            });
            guarded({"horizon_reward"}, [&] { out["horizon_reward"] = {horizon_reward(ts), {}}; });
            break;
        case TaskId::restless_bandit:
            guarded({"meta_cognition"}, [&] { out["meta_cognition"] = {fit.meta(ts, opt).qsr, {}}; });
            guarded({"restless_accuracy"}, [&] { out["restless_accuracy"] = {restless_accuracy(ts), {}}; });
            break;
        case TaskId::instrumental_learning:
            guarded({"learning_rate", "optimism_bias"}, [&] {
                const auto f = fit.learning(ts, opt);
                out["learning_rate"] = {f.learning_rate, {}};
                out["optimism_bias"] = {f.optimism_bias, {}};
            });
            guarded({"instrumental_reward"}, [&] { out["instrumental_reward"] = {instrumental_reward(ts), {}}; });
            break;
        case TaskId::two_step:
            guarded({"model_basedness"}, [&] { out["model_basedness"] = {fit.two_step(ts, opt).interaction, {}}; });
            guarded({"two_step_reward"}, [&] { out["two_step_reward"] = {two_step_reward(ts), {}}; });
            break;
        case TaskId::temporal_discounting:
            guarded({"temporal_discounting"}, [&] { out["temporal_discounting"] = {temporal_discounting(ts), {}}; });
            break;
        case TaskId::bart:
            guarded({"risk"}, [&] { out["risk"] = {risk(ts), {}}; });
            guarded({"bart_points"}, [&] { out["bart_points"] = {bart_points(ts), {}}; });
            break;
    }
    return out;
}

/// (raw - random) / (human - random).
inline double normalize(double raw, double random_baseline, double human_reference) {
    if (human_reference == random_baseline)
        throw NormalizationUndefined("human reference equals random baseline");
    return (raw - random_baseline) / (human_reference - random_baseline);
}

struct HumanReference {
    double value = 0.0;
    std::string source;
    bool verified = false;
};

inline std::map<std::string, HumanReference> load_human_reference(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open human reference file " + path.string());
    const json j = json::parse(in);
    std::map<std::string, HumanReference> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key().rfind("_", 0) == 0) continue;  // comments
        const auto& v = it.value();
        out[it.key()] = HumanReference{v.at("value").get<double>(), v.value("source", ""), v.value("verified", false)};
    }
    return out;
}

struct BaselineEntry {
    double value = 0.0;
    std::uint64_t seed = 0;
    int episodes = 0;
};

/// Baseline cache file: metric -> {value, seed, episodes}.
inline std::map<std::string, BaselineEntry> load_baselines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open baseline file " + path.string());
    const json j = json::parse(in);
    std::map<std::string, BaselineEntry> out;
    for (auto it = j.at("metrics").begin(); it != j.at("metrics").end(); ++it)
        out[it.key()] = BaselineEntry{it.value().at("value").get<double>(), it.value().at("seed").get<std::uint64_t>(),
                                      it.value().at("episodes").get<int>()};
    return out;
}

inline json baselines_to_json(const std::map<std::string, BaselineEntry>& b) {
    json m = json::object();
    for (const auto& [name, e] : b) m[name] = json{{"value", e.value}, {"seed", e.seed}, {"episodes", e.episodes}};
    return json{{"agent", "random"}, {"metrics", m}};
}

struct ReportRow {
    std::string metric;
    TaskId task;
    MetricKind kind;
    /// False when the task was configured but its transcripts are missing.
    bool present = false;
    std::optional<double> raw;
    std::optional<double> random_baseline;
    std::optional<double> human_reference;
    bool human_verified = false;
    std::optional<double> normalized;
    std::string note;
};

struct MetricReport {
    std::vector<ReportRow> rows;

    bool complete() const {
        return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.present && r.raw.has_value(); });
    }
};

/// Rows for every metric of every task in `tasks`, in catalogue order.
inline MetricReport build_report(const std::vector<TaskId>& tasks, const std::map<TaskId, Transcripts>& transcripts,
                                 const std::map<std::string, BaselineEntry>& baselines,
                                 const std::map<std::string, HumanReference>& human, const FitOptions& opt = {},
                                 const Fitters& fitters = {}) {
    MetricReport report;
    std::map<TaskId, std::map<std::string, MetricValue>> values;
    for (TaskId task : tasks) {
        auto it = transcripts.find(task);
        if (it != transcripts.end() && !it->second.empty()) values[task] = compute_task_metrics(task, it->second, opt, fitters);
    }
    for (const auto& def : metric_catalog()) {
        if (std::find(tasks.begin(), tasks.end(), def.task) == tasks.end()) continue;
        ReportRow row{def.name, def.task, def.kind, false, {}, {}, {}, false, {}, {}};
        auto vt = values.find(def.task);
        if (vt == values.end()) {
            row.note = "absent: no transcripts for task";
        } else {
            row.present = true;
            const auto& mv = vt->second.at(def.name);
            row.raw = mv.value;
            if (!mv.value) row.note = "fit failed: " + mv.error;
        }
        if (auto b = baselines.find(def.name); b != baselines.end()) row.random_baseline = b->second.value;
        if (auto h = human.find(def.name); h != human.end()) {
            row.human_reference = h->second.value;
            row.human_verified = h->second.verified;
        }
        if (row.raw && row.random_baseline && row.human_reference) {
            try {
                row.normalized = normalize(*row.raw, *row.random_baseline, *row.human_reference);
            } catch (const NormalizationUndefined& e) {
                row.note = e.what();
            }
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

inline std::string format_optional(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream os;
    os.precision(10);
    os << *v;
    return os.str();
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string report_csv(const MetricReport& r) {
    std::string out = "metric,task,kind,raw,random_baseline,human_reference,human_verified,normalized,note\n";
    for (const auto& row : r.rows)
        out += row.metric + "," + std::string(to_string(row.task)) + "," +
               (row.kind == MetricKind::behavioral ? "behavioral" : "performance") + "," + format_optional(row.raw) + "," +
               format_optional(row.random_baseline) + "," + format_optional(row.human_reference) + "," +
               (row.human_verified ? "true" : "false") + "," + format_optional(row.normalized) + "," +
               csv_escape(row.note) + "\n";
    return out;
}

/// Long format for plotting: one row per (metric, scale).
inline std::string report_long_csv(const MetricReport& r) {
    std::string out = "metric,scale,value\n";
    for (const auto& row : r.rows) {
        if (row.raw) out += row.metric + ",raw," + format_optional(row.raw) + "\n";
        if (row.normalized) out += row.metric + ",normalized," + format_optional(row.normalized) + "\n";
    }
    return out;
}

inline json report_json(const MetricReport& r) {
    json rows = json::array();
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    for (const auto& row : r.rows)
        rows.push_back(json{{"metric", row.metric},
                            {"task", to_string(row.task)},
                            {"kind", row.kind == MetricKind::behavioral ? "behavioral" : "performance"},
                            {"present", row.present},
                            {"raw", opt(row.raw)},
                            {"random_baseline", opt(row.random_baseline)},
                            {"human_reference", opt(row.human_reference)},
                            {"human_verified", row.human_verified},
                            {"normalized", opt(row.normalized)},
                            {"note", row.note}});
    return json{{"complete", r.complete()}, {"rows", rows}};
}

}  // namespace cogbench::metrics
