#pragma once

// Intertemporal choice battery: three adaptive five-rung baselines followed by
// four fixed anomaly items. Scored 0..19.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cogbench/core/environment.hpp"
#include "cogbench/core/transcript_io.hpp"
#include "cogbench/envs/common.hpp"

namespace cogbench::envs {

struct DiscountLadder {
    std::string name;
    bool loss = false;
    int immediate_amount = 500;
    int delay_months = 12;
    /// Delayed amounts in increasing order.
    std::vector<int> rungs;

    /// Delayed amount ordered from least to most attractive delayed option.
    int rung_by_attractiveness(int k) const {
        const auto n = static_cast<int>(rungs.size());
        return rungs[static_cast<std::size_t>(loss ? n - 1 - k : k)];
    }
    int size() const noexcept { return static_cast<int>(rungs.size()); }
};

struct AnomalyItem {
    std::string name;
    std::string option_1;
    std::string option_2;
    /// 1 or 2.
    int sooner_option = 1;
};

struct DiscountingBattery {
    std::vector<DiscountLadder> baselines;
    std::vector<AnomalyItem> anomalies;

    int max_score() const noexcept {
        int s = static_cast<int>(anomalies.size());
        for (const auto& b : baselines) s += b.size();
        return s;
    }
};

inline void from_json(const json& j, DiscountLadder& l) {
    l.name = j.at("name").get<std::string>();
    l.loss = j.at("polarity").get<std::string>() == "loss";
    l.immediate_amount = j.at("immediate_amount").get<int>();
    l.delay_months = j.at("delay_months").get<int>();
    l.rungs = j.at("rungs").get<std::vector<int>>();
    for (std::size_t i = 1; i < l.rungs.size(); ++i)
        if (l.rungs[i] <= l.rungs[i - 1]) throw ConfigError("ladder '" + l.name + "' rungs must be strictly increasing");
}

inline void to_json(json& j, const DiscountLadder& l) {
    j = json{{"name", l.name}, {"polarity", l.loss ? "loss" : "gain"}, {"immediate_amount", l.immediate_amount},
             {"delay_months", l.delay_months}, {"rungs", l.rungs}};
}

inline void from_json(const json& j, AnomalyItem& a) {
    a.name = j.at("name").get<std::string>();
    a.option_1 = j.at("option_1").get<std::string>();
    a.option_2 = j.at("option_2").get<std::string>();
    a.sooner_option = j.at("sooner_option").get<int>();
    if (a.sooner_option != 1 && a.sooner_option != 2) throw ConfigError("sooner_option must be 1 or 2");
}

inline void to_json(json& j, const AnomalyItem& a) {
    j = json{{"name", a.name}, {"option_1", a.option_1}, {"option_2", a.option_2}, {"sooner_option", a.sooner_option}};
}

inline void from_json(const json& j, DiscountingBattery& b) {
    b.baselines = j.at("baselines").get<std::vector<DiscountLadder>>();
    b.anomalies = j.at("anomalies").get<std::vector<AnomalyItem>>();
}

inline void to_json(json& j, const DiscountingBattery& b) {
    j = json{{"baselines", b.baselines}, {"anomalies", b.anomalies}};
}

/// Rungs beyond the printed examples are reconstructed; data/temporal_discounting.json mirrors this.
inline DiscountingBattery default_battery() {
    DiscountingBattery b;
    b.baselines = {
        {"gain_500", false, 500, 12, {505, 510, 550, 600, 700}},
        {"gain_5000", false, 5000, 12, {5050, 5100, 5500, 6000, 7000}},
        {"loss_500", true, 500, 12, {505, 510, 550, 600, 700}},
    };
    b.anomalies = {
        {"present_bias", "Receive 500 dollars in 12 months.", "Receive 600 dollars in 24 months.", 1},
        {"subadditivity", "Receive 500 dollars now.", "Receive 700 dollars in 24 months.", 1},
        {"delay_speedup_asymmetry", "Receive 500 dollars now.",
         "Wait 12 months for the 500 dollars but with an additional 99 dollars.", 1},
        {"delay_length_asymmetry", "Wait 12 months to receive 600 dollars now.",
         "Pay 100 dollars and receive the 600 dollars gain now.", 2},
    };
    return b;
}

inline DiscountingBattery load_battery(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open ladder file " + path.string());
    return json::parse(in).get<DiscountingBattery>();
}

inline std::string discounting_question(const std::string& option_1, const std::string& option_2) {
    return "Q: What do you prefer between the following two options:\n - Option 1: " + option_1 +
           "\n - Option 2: " + option_2;
}

inline std::string ladder_option_1(const DiscountLadder& l) {
    return std::string(l.loss ? "Pay " : "Receive ") + std::to_string(l.immediate_amount) + " dollars now.";
}

inline std::string ladder_option_2(const DiscountLadder& l, int amount) {
    return std::string(l.loss ? "Pay " : "Receive ") + std::to_string(amount) + " dollars in " +
           std::to_string(l.delay_months) + " months.";
}

/// Interval of still-possible switch ranks for one baseline. A sooner answer at
/// the k-th least attractive rung implies rank > k; a delayed answer implies rank <= k.
/// Opens at the middle rung, then steps one rung at a time in the direction of the
/// last answer, so at most three rungs of five are shown.
struct Staircase {
    int lo = 0;
    int hi = 5;
    int answered = 0;
    bool last_sooner = false;

    bool done() const noexcept { return lo == hi; }
    int next_rung() const noexcept {
        if (answered == 0) return (lo + hi - 1) / 2;
        return last_sooner ? lo : hi - 1;
    }
    void answer(bool sooner) noexcept {
        const int k = next_rung();
        if (sooner) lo = k + 1;
        else hi = k;
        last_sooner = sooner;
        ++answered;
    }
};

class DiscountingEnvironment final : public Environment {
public:
    explicit DiscountingEnvironment(DiscountingBattery battery = default_battery())
        : battery_(std::move(battery)) {
        reset_staircase();
    }

    TaskId task() const override { return TaskId::temporal_discounting; }
    const DiscountingBattery& battery() const noexcept { return battery_; }
    bool complete() const noexcept {
        return baseline_ >= static_cast<int>(battery_.baselines.size()) &&
               anomaly_ >= static_cast<int>(battery_.anomalies.size());
    }
    int questions_asked() const noexcept { return asked_; }
    const std::vector<int>& switch_ranks() const noexcept { return ranks_; }
    int sooner_anomalies() const noexcept { return sooner_anomalies_; }

    /// Running score; equals the final score once complete().
    int score() const noexcept {
        int s = sooner_anomalies_;
        for (int r : ranks_) s += r;
        return s;
    }

    std::optional<PendingQuery> next() override {
        if (complete()) return std::nullopt;
        if (baseline_ < static_cast<int>(battery_.baselines.size())) {
            const auto& ladder = battery_.baselines[static_cast<std::size_t>(baseline_)];
            const int k = stair_.next_rung();
            const int amount = ladder.rung_by_attractiveness(k);
            json m{{"kind", "baseline"}, {"item", ladder.name}, {"rung", k}, {"delayed_amount", amount},
                   {"sooner_token", "1"}};
            return PendingQuery{ChoiceQuery{chain_ + discounting_question(ladder_option_1(ladder), ladder_option_2(ladder, amount)),
                                            AnswerKind::binary_option, {"1", "2"}, "A: I prefer option"},
                                std::move(m), std::nullopt};
        }
        const auto& item = battery_.anomalies[static_cast<std::size_t>(anomaly_)];
        json m{{"kind", "anomaly"}, {"item", item.name}, {"sooner_token", std::to_string(item.sooner_option)}};
        return PendingQuery{ChoiceQuery{discounting_question(item.option_1, item.option_2), AnswerKind::binary_option,
                                        {"1", "2"}, "A: I prefer option"},
                            std::move(m), std::nullopt};
    }

    json resolve(const Choice& choice) override {
        if (complete()) throw EpisodeStateError("discounting battery already complete");
        const std::string& tok = choice_token(choice);
        ++asked_;
        if (baseline_ < static_cast<int>(battery_.baselines.size())) {
            const auto& ladder = battery_.baselines[static_cast<std::size_t>(baseline_)];
            const bool sooner = tok == "1";
            chain_ += discounting_question(ladder_option_1(ladder), ladder_option_2(ladder, ladder.rung_by_attractiveness(stair_.next_rung()))) +
                      "\nA: I prefer option " + tok + ".\n\n";
            stair_.answer(sooner);
            json out{{"sooner", sooner}};
            if (stair_.done()) {
                ranks_.push_back(stair_.lo);
                out["switch_rank"] = stair_.lo;
                ++baseline_;
                reset_staircase();
            }
            return out;
        }
        const auto& item = battery_.anomalies[static_cast<std::size_t>(anomaly_)];
        const bool sooner = tok == std::to_string(item.sooner_option);
        if (sooner) ++sooner_anomalies_;
        ++anomaly_;
        return json{{"sooner", sooner}};
    }

private:
    void reset_staircase() {
        chain_.clear();
        const int n = baseline_ < static_cast<int>(battery_.baselines.size())
                          ? battery_.baselines[static_cast<std::size_t>(baseline_)].size()
                          : 0;
        stair_ = Staircase{0, n};
    }

    DiscountingBattery battery_;
    int baseline_ = 0;
    int anomaly_ = 0;
    Staircase stair_;
    std::string chain_;
    std::vector<int> ranks_;
    int sooner_anomalies_ = 0;
    int asked_ = 0;
};

/// Score of a completed battery transcript: switch ranks plus sooner anomaly answers.
inline int discounting_score(const Transcript& t, int expected_baselines = 3, int expected_anomalies = 4) {
    int score = 0;
    int baselines = 0;
    int anomalies = 0;
    for (const auto& trial : t.trials) {
        if (trial.meta.at("kind") == "baseline") {
            if (trial.outcome.contains("switch_rank")) {
                score += trial.outcome.at("switch_rank").get<int>();
                ++baselines;
            }
        } else {
            if (trial.outcome.at("sooner").get<bool>()) ++score;
            ++anomalies;
        }
    }
    if (baselines != expected_baselines || anomalies != expected_anomalies)
        throw EpisodeStateError("discounting battery incomplete: " + std::to_string(baselines) + " baselines, " +
                                std::to_string(anomalies) + " anomaly items answered");
    return score;
}

}  // namespace cogbench::envs
