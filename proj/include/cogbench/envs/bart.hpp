#pragma once

// Balloon Analogue Risk Task. Each balloon hides a pop point drawn uniformly
// from [1, N]; the pump that reaches it explodes the balloon. The hazard of the
// k-th pump is therefore 1/(N-k+1), starting at 1/N.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cogbench/core/environment.hpp"
#include "cogbench/envs/common.hpp"

namespace cogbench::envs {

struct BartConfig {
    std::array<int, 3> hazard_classes{32, 8, 128};
    int balloons_per_type = 10;
};

inline const std::array<std::string, 3> bart_types{"A", "B", "C"};

struct BartInstance {
    /// Hazard class N of types A, B, C.
    std::array<int, 3> type_class{};
    /// Type index of every balloon in presentation order.
    std::vector<int> balloon_types;
    std::vector<int> pop_points;

    int balloons() const noexcept { return static_cast<int>(balloon_types.size()); }
    int balloons_per_type() const noexcept { return balloons() / 3; }
    int hazard_of(int balloon) const noexcept {
        return type_class[static_cast<std::size_t>(balloon_types[static_cast<std::size_t>(balloon)])];
    }
};

inline BartInstance generate_bart(SeededStream& stream, const BartConfig& cfg = {}) {
    BartInstance inst;
    inst.type_class = cfg.hazard_classes;
    stream.shuffle(std::span{inst.type_class});
    for (int t = 0; t < 3; ++t)
        for (int k = 0; k < cfg.balloons_per_type; ++k) inst.balloon_types.push_back(t);
    stream.shuffle(inst.balloon_types);
    for (int b = 0; b < inst.balloons(); ++b)
        inst.pop_points.push_back(static_cast<int>(stream.uniform_int(1, inst.hazard_of(b))));
    return inst;
}

enum class BartAction { inflate, skip };
enum class BartEvent { pumped, exploded, banked };

inline constexpr std::string_view to_string(BartEvent e) noexcept {
    switch (e) {
        case BartEvent::pumped: return "pumped";
        case BartEvent::exploded: return "exploded";
        case BartEvent::banked: return "banked";
    }
    return "unknown";
}

struct BalloonResult {
    int type = 0;
    int pumps = 0;
    bool exploded = false;

    int points() const noexcept { return exploded ? 0 : pumps; }
};

inline std::string bart_prompt(const BartInstance& inst, const std::vector<BalloonResult>& done, int current_pumps) {
    const int per_type = inst.balloons_per_type();
    std::string text =
        "In this game, you will encounter 3 different balloons labeled A, B, and C. There will be a "
        "total of " + std::to_string(per_type) +
        " balloons for each type of balloon. Your goal is to accumulate as many points as possible "
        "without popping the balloon. You will be presented with a balloon and given the option to "
        "inflate it or not. Each inflation increases the balloon's size and potential points but also "
        "carries a risk of the balloon popping. Your task is to decide whether to inflate the balloon "
        "or not knowing that a successful inflation adds 1 point from that balloon. Once you decide to "
        "stop inflating the balloon, you can no longer earn points from that balloon. If the balloon "
        "pops before you stop inflating, you will lose all the points accumulated in that balloon. "
        "Your final score will be determined by the total number of points earned across all " +
        std::to_string(inst.balloons()) + " balloons. Your goal is to maximize your final score.\n\n";
    if (!done.empty()) {
        text += "You observed the following previously where the type of balloon is given in parenthesis:\n";
        for (std::size_t i = 0; i < done.size(); ++i) {
            const auto& r = done[i];
            text += "-Balloon " + std::to_string(i + 1) + " (" + bart_types[static_cast<std::size_t>(r.type)] +
                    "): You inflated the balloon " + std::to_string(r.pumps) + " times for a total of " +
                    std::to_string(r.points()) + (r.points() == 1 ? " point" : " points") + ". It did " +
                    (r.exploded ? "explode." : "not explode.") + "\n";
        }
        text += "\n";
    }
    const std::size_t current = done.size();
    text += "Q: You are currently with Balloon " + std::to_string(current + 1) + " which is a balloon of type " +
            bart_types[static_cast<std::size_t>(inst.balloon_types[current])];
    if (current_pumps > 0) text += " and you have inflated it " + std::to_string(current_pumps) + " times so far";
    text += ". What do you do? (Option 1 for 'skip' or 0 for 'inflate')";
    return text;
}

class BartEnvironment final : public Environment {
public:
    explicit BartEnvironment(BartInstance inst) : inst_(std::move(inst)) {}

    TaskId task() const override { return TaskId::bart; }
    const BartInstance& instance() const noexcept { return inst_; }
    const std::vector<BalloonResult>& results() const noexcept { return done_; }
    int current_balloon() const noexcept { return static_cast<int>(done_.size()); }
    int current_pumps() const noexcept { return pumps_; }
    bool complete() const noexcept { return current_balloon() >= inst_.balloons(); }

    /// Acts on the active balloon; any other index is an error.
    BartEvent step(int balloon_index, BartAction action) {
        if (complete() || balloon_index != current_balloon())
            throw EpisodeStateError("balloon " + std::to_string(balloon_index + 1) + " is not active");
        const int type = inst_.balloon_types[static_cast<std::size_t>(balloon_index)];
        if (action == BartAction::skip) {
            done_.push_back({type, pumps_, false});
            pumps_ = 0;
            return BartEvent::banked;
        }
        ++pumps_;
        if (pumps_ == inst_.pop_points[static_cast<std::size_t>(balloon_index)]) {
            done_.push_back({type, pumps_, true});
            pumps_ = 0;
            return BartEvent::exploded;
        }
        return BartEvent::pumped;
    }

    std::optional<PendingQuery> next() override {
        if (complete()) return std::nullopt;
        const int b = current_balloon();
        json m{{"balloon", b + 1},
               {"type", bart_types[static_cast<std::size_t>(inst_.balloon_types[static_cast<std::size_t>(b)])]},
               {"hazard_class", inst_.hazard_of(b)},
               {"pumps_so_far", pumps_}};
        return PendingQuery{ChoiceQuery{bart_prompt(inst_, done_, pumps_), AnswerKind::binary_option, {"1", "0"}, "A: Option"},
                            std::move(m), std::nullopt};
    }

    json resolve(const Choice& choice) override {
        const int b = current_balloon();
        const auto event = step(b, choice_token(choice) == "1" ? BartAction::skip : BartAction::inflate);
        json out{{"event", to_string(event)}};
        if (event == BartEvent::pumped) {
            out["pumps"] = pumps_;
            out["points"] = pumps_;
        } else {
            out["pumps"] = done_.back().pumps;
            out["points"] = done_.back().points();
        }
        return out;
    }

private:
    BartInstance inst_;
    std::vector<BalloonResult> done_;
    int pumps_ = 0;
};

}  // namespace cogbench::envs
