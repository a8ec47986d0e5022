#pragma once

// JSONL serialization of transcripts: one Transcript object per line.
//
// Key names (stable):
//   transcript: task_id, simulation_index, seed, prompt_mode, invalid_count, trials
//   trial:      trial_index, query, raw_reply, parsed_choice, outcome, meta,
//               forced, invalid, attempts
//   query:      prompt_text, answer_kind, valid_tokens, answer_prefix
// parsed_choice is a JSON string for discrete answers and a number otherwise.

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "cogbench/core/types.hpp"

namespace cogbench {

inline void to_json(json& j, const ChoiceQuery& q) {
    j = json{{"prompt_text", q.prompt_text},
             {"answer_kind", to_string(q.answer_kind)},
             {"valid_tokens", q.valid_tokens},
             {"answer_prefix", q.answer_prefix}};
}

inline void from_json(const json& j, ChoiceQuery& q) {
    q.prompt_text = j.at("prompt_text").get<std::string>();
    q.answer_kind = answer_kind_from_string(j.at("answer_kind").get<std::string>());
    q.valid_tokens = j.at("valid_tokens").get<std::vector<std::string>>();
    q.answer_prefix = j.at("answer_prefix").get<std::string>();
}

inline json choice_to_json(const Choice& c) {
    if (const auto* tok = std::get_if<std::string>(&c)) return *tok;
    return std::get<double>(c);
}

inline Choice choice_from_json(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) return j.get<double>();
    throw ConfigError("parsed_choice must be a string or number");
}

inline void to_json(json& j, const TrialRecord& r) {
    j = json{{"trial_index", r.trial_index},
             {"query", r.query},
             {"raw_reply", r.raw_reply},
             {"parsed_choice", choice_to_json(r.parsed_choice)},
             {"outcome", r.outcome},
             {"meta", r.meta},
             {"forced", r.forced},
             {"invalid", r.invalid},
             {"attempts", r.attempts}};
}

inline void from_json(const json& j, TrialRecord& r) {
    r.trial_index = j.at("trial_index").get<int>();
    r.query = j.at("query").get<ChoiceQuery>();
    r.raw_reply = j.at("raw_reply").get<std::string>();
    r.parsed_choice = choice_from_json(j.at("parsed_choice"));
    r.outcome = j.at("outcome");
    r.meta = j.at("meta");
    r.forced = j.at("forced").get<bool>();
    r.invalid = j.at("invalid").get<bool>();
    r.attempts = j.value("attempts", 0);
}

inline void to_json(json& j, const Transcript& t) {
    j = json{{"task_id", to_string(t.task_id)},
             {"simulation_index", t.simulation_index},
             {"seed", t.seed},
             {"prompt_mode", to_string(t.prompt_mode)},
             {"invalid_count", t.invalid_count},
             {"trials", t.trials}};
}

inline void from_json(const json& j, Transcript& t) {
    t.task_id = task_from_string(j.at("task_id").get<std::string>());
    t.simulation_index = j.at("simulation_index").get<int>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.prompt_mode = prompt_mode_from_string(j.at("prompt_mode").get<std::string>());
    t.invalid_count = j.at("invalid_count").get<int>();
    t.trials = j.at("trials").get<std::vector<TrialRecord>>();
}

inline std::string to_jsonl_line(const Transcript& t) { return json(t).dump() + "\n"; }

inline void write_jsonl(std::ostream& out, const std::vector<Transcript>& transcripts) {
    for (const auto& t : transcripts) out << to_jsonl_line(t);
}

inline std::vector<Transcript> read_jsonl(std::istream& in) {
    std::vector<Transcript> result;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        result.push_back(json::parse(line).get<Transcript>());
    }
    return result;
}

inline std::vector<Transcript> read_jsonl_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open transcript file " + path.string());
    return read_jsonl(in);
}

}  // namespace cogbench
