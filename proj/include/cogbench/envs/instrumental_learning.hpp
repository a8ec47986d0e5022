#pragma once

// Four interleaved two-armed bandits ("casinos") paying 1 or 0 dollars.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cogbench/core/environment.hpp"
#include "cogbench/envs/common.hpp"

namespace cogbench::envs {

struct Casino {
    std::array<std::string, 2> machines;
    std::array<double, 2> win_probs{};

    bool symmetric() const noexcept { return win_probs[0] == win_probs[1]; }
};

struct CasinoSet {
    std::array<Casino, 4> casinos;
    int trials_per_casino = 24;
    /// Casino index (0-based) of every visit.
    std::vector<int> visit_order;

    int total_visits() const noexcept { return static_cast<int>(visit_order.size()); }
};

/// Two symmetric casinos (0.25/0.25, 0.75/0.75) and two asymmetric ones
/// (0.25/0.75, orientation random), assigned to casino numbers at random.
inline CasinoSet generate_casino_set(SeededStream& stream, int trials_per_casino = 24) {
    CasinoSet set;
    set.trials_per_casino = trials_per_casino;

    std::vector<char> alphabet;
    for (char c = 'A'; c <= 'Z'; ++c) alphabet.push_back(c);
    stream.shuffle(alphabet);

    std::array<std::array<double, 2>, 4> conditions{{{0.25, 0.25}, {0.75, 0.75}, {0.25, 0.75}, {0.25, 0.75}}};
    stream.shuffle(std::span{conditions});
    for (std::size_t c = 0; c < 4; ++c) {
        auto probs = conditions[c];
        if (probs[0] != probs[1] && stream.bernoulli(0.5)) std::swap(probs[0], probs[1]);
        set.casinos[c].machines = {std::string(1, alphabet[2 * c]), std::string(1, alphabet[2 * c + 1])};
        set.casinos[c].win_probs = probs;
    }

    for (int c = 0; c < 4; ++c)
        for (int k = 0; k < trials_per_casino; ++k) set.visit_order.push_back(c);
    stream.shuffle(set.visit_order);
    return set;
}

struct CasinoVisit {
    int casino = 0;
    int arm = 0;
    double reward = 0.0;
};

inline std::string casino_prompt(const CasinoSet& set, const std::vector<CasinoVisit>& history) {
    const int visit = static_cast<int>(history.size());
    const int casino = set.visit_order[static_cast<std::size_t>(visit)];
    const auto& machines = set.casinos[static_cast<std::size_t>(casino)].machines;
    std::string text =
        "You are going to visit four different casinos (named 1, 2, 3, and 4) " +
        std::to_string(set.trials_per_casino) +
        " times each. Each casino owns two slot machines which all return either 1 or 0 dollars "
        "stochastically with different reward probabilities. Your goal is to maximize the sum of "
        "received dollars within " +
        std::to_string(set.total_visits()) + " visits.\n\n";
    if (!history.empty()) {
        text += "You have received the following amount of dollars when playing in the past:\n";
        for (const auto& v : history)
            text += "- Machine " + set.casinos[static_cast<std::size_t>(v.casino)].machines[static_cast<std::size_t>(v.arm)] +
                    " in Casino " + std::to_string(v.casino + 1) + " delivered " +
                    (v.reward > 0.5 ? "1.0" : "0.0") + " dollars.\n";
        text += "\n";
    }
    text += "Q: You are now in visit " + std::to_string(visit + 1) + " playing in Casino " +
            std::to_string(casino + 1) + ". Which machine do you choose between Machine " + machines[0] +
            " and Machine " + machines[1] + "? (Give the answer in the form \"Machine <your choice>\").";
    return text;
}

class InstrumentalEnvironment final : public Environment {
public:
    InstrumentalEnvironment(CasinoSet set, SeededStream stream)
        : set_(std::move(set)), stream_(std::move(stream)) {}

    TaskId task() const override { return TaskId::instrumental_learning; }
    const CasinoSet& casino_set() const noexcept { return set_; }
    const std::vector<CasinoVisit>& history() const noexcept { return history_; }

    /// Bernoulli reward for pulling `arm` in the casino of the current visit.
    std::optional<double> step(int arm) {
        const int visit = static_cast<int>(history_.size());
        if (visit >= set_.total_visits()) return std::nullopt;
        const int casino = set_.visit_order[static_cast<std::size_t>(visit)];
        const double p = set_.casinos[static_cast<std::size_t>(casino)].win_probs[static_cast<std::size_t>(arm)];
        const double reward = stream_.bernoulli(p) ? 1.0 : 0.0;
        history_.push_back({casino, arm, reward});
        return reward;
    }

    std::optional<PendingQuery> next() override {
        const int visit = static_cast<int>(history_.size());
        if (visit >= set_.total_visits()) return std::nullopt;
        const int casino = set_.visit_order[static_cast<std::size_t>(visit)];
        const auto& c = set_.casinos[static_cast<std::size_t>(casino)];
        json m{{"visit", visit + 1}, {"casino", casino + 1}, {"machines", c.machines},
               {"win_probs", c.win_probs}, {"symmetric", c.symmetric()}};
        return PendingQuery{letter_query(casino_prompt(set_, history_), {c.machines[0], c.machines[1]}, "A: Machine"),
                            std::move(m), std::nullopt};
    }

    json resolve(const Choice& choice) override {
        const int visit = static_cast<int>(history_.size());
        if (visit >= set_.total_visits()) throw EpisodeStateError("all casino visits used");
        const auto& c = set_.casinos[static_cast<std::size_t>(set_.visit_order[static_cast<std::size_t>(visit)])];
        const int arm = choice_token(choice) == c.machines[0] ? 0 : 1;
        const double reward = *step(arm);
        return json{{"machine", c.machines[static_cast<std::size_t>(arm)]}, {"arm", arm}, {"reward", reward}};
    }

private:
    CasinoSet set_;
    SeededStream stream_;
    std::vector<CasinoVisit> history_;
};

}  // namespace cogbench::envs
