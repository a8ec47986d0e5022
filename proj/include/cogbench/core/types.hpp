#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cogbench/core/error.hpp"
#include "cogbench/core/random.hpp"

namespace cogbench {

using json = nlohmann::json;

enum class TaskId {
    probabilistic_reasoning,
    horizon,
    restless_bandit,
    instrumental_learning,
    two_step,
    temporal_discounting,
    bart,
};

inline constexpr std::array<TaskId, 7> all_tasks{
    TaskId::probabilistic_reasoning, TaskId::horizon,  TaskId::restless_bandit,
    TaskId::instrumental_learning,   TaskId::two_step, TaskId::temporal_discounting,
    TaskId::bart,
};

inline constexpr std::string_view to_string(TaskId task) noexcept {
    switch (task) {
        case TaskId::probabilistic_reasoning: return "probabilistic_reasoning";
        case TaskId::horizon: return "horizon";
        case TaskId::restless_bandit: return "restless_bandit";
        case TaskId::instrumental_learning: return "instrumental_learning";
        case TaskId::two_step: return "two_step";
        case TaskId::temporal_discounting: return "temporal_discounting";
        case TaskId::bart: return "bart";
    }
    return "unknown";
}

inline TaskId task_from_string(std::string_view name) {
    for (TaskId t : all_tasks)
        if (to_string(t) == name) return t;
    throw ConfigError("unknown task '" + std::string(name) + "'");
}

enum class PromptMode { base, cot, sb };

inline constexpr std::string_view to_string(PromptMode mode) noexcept {
    switch (mode) {
        case PromptMode::base: return "base";
        case PromptMode::cot: return "cot";
        case PromptMode::sb: return "sb";
    }
    return "unknown";
}

inline PromptMode prompt_mode_from_string(std::string_view name) {
    if (name == "base") return PromptMode::base;
    if (name == "cot") return PromptMode::cot;
    if (name == "sb") return PromptMode::sb;
    throw ConfigError("unknown prompt mode '" + std::string(name) + "'");
}

enum class AnswerKind { letter_choice, binary_option, probability_0_1, confidence_0_1 };

inline constexpr std::string_view to_string(AnswerKind kind) noexcept {
    switch (kind) {
        case AnswerKind::letter_choice: return "letter_choice";
        case AnswerKind::binary_option: return "binary_option";
        case AnswerKind::probability_0_1: return "probability_0_1";
        case AnswerKind::confidence_0_1: return "confidence_0_1";
    }
    return "unknown";
}

inline AnswerKind answer_kind_from_string(std::string_view name) {
    for (AnswerKind k : {AnswerKind::letter_choice, AnswerKind::binary_option,
                         AnswerKind::probability_0_1, AnswerKind::confidence_0_1})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown answer kind '" + std::string(name) + "'");
}

inline constexpr bool is_discrete(AnswerKind kind) noexcept {
    return kind == AnswerKind::letter_choice || kind == AnswerKind::binary_option;
}

/// A parsed answer: a token for discrete queries, a two-decimal number otherwise.
using Choice = std::variant<std::string, double>;

inline const std::string& choice_token(const Choice& c) { return std::get<std::string>(c); }
inline double choice_value(const Choice& c) { return std::get<double>(c); }

inline double round2(double v) noexcept { return std::round(v * 100.0) / 100.0; }

struct ChoiceQuery {
    std::string prompt_text;
    AnswerKind answer_kind = AnswerKind::letter_choice;
    /// Ordered as presented to the agent; empty for numeric kinds.
    std::vector<std::string> valid_tokens;
    /// Completion stub, e.g. "A: Machine".
    std::string answer_prefix;

    bool accepts(const Choice& c) const {
        if (is_discrete(answer_kind)) {
            const auto* tok = std::get_if<std::string>(&c);
            return tok && std::find(valid_tokens.begin(), valid_tokens.end(), *tok) !=
                              valid_tokens.end();
        }
        const auto* v = std::get_if<double>(&c);
        return v && *v >= 0.0 && *v <= 1.0 && round2(*v) == *v;
    }

    bool operator==(const ChoiceQuery&) const = default;
};

struct TrialRecord {
    int trial_index = 0;
    ChoiceQuery query;
    std::string raw_reply;
    Choice parsed_choice;
    /// Task-specific observation (reward, ball colour, transition, explosion).
    json outcome = json::object();
    /// Task-specific context known to the environment (conditions, best arm, ...).
    json meta = json::object();
    bool forced = false;
    /// Set when the choice came from the fallback policy after failed parses.
    bool invalid = false;
    int attempts = 0;

    bool operator==(const TrialRecord&) const = default;
};

struct Transcript {
    TaskId task_id = TaskId::probabilistic_reasoning;
    int simulation_index = 0;
    std::uint64_t seed = 0;
    PromptMode prompt_mode = PromptMode::base;
    std::vector<TrialRecord> trials;
    int invalid_count = 0;

    bool operator==(const Transcript&) const = default;
};

/// Stream for one purpose ("env", "agent", "fallback", ...) of one simulation.
inline SeededStream episode_stream(std::uint64_t root_seed, TaskId task, int simulation_index,
                                   std::string_view purpose) {
    std::string label{to_string(task)};
    label += '/';
    label += std::to_string(simulation_index);
    label += '/';
    label += purpose;
    return SeededStream(root_seed, std::move(label));
}

}  // namespace cogbench
