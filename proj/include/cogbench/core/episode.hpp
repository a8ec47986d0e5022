#pragma once

#include <cstdint>

#include "cogbench/core/agent.hpp"
#include "cogbench/core/environment.hpp"
#include "cogbench/core/parse.hpp"

namespace cogbench {

struct EpisodeInfo {
    int simulation_index = 0;
    /// Root seed of the run; recorded in the transcript.
    std::uint64_t seed = 0;
    PromptMode mode = PromptMode::base;
    int max_parse_attempts = 3;
};

/// Uniform random valid answer; used when an agent's replies cannot be parsed.
inline Choice fallback_choice(const ChoiceQuery& query, SeededStream& stream) {
    if (is_discrete(query.answer_kind)) return query.valid_tokens[stream.index(query.valid_tokens.size())];
    return static_cast<double>(stream.uniform_int(0, 100)) / 100.0;
}

/// Runs one episode to completion. Agent exceptions (endpoint failures) propagate.
inline Transcript run_episode(Environment& env, Agent& agent, const EpisodeInfo& info) {
    Transcript transcript;
    transcript.task_id = env.task();
    transcript.simulation_index = info.simulation_index;
    transcript.seed = info.seed;
    transcript.prompt_mode = info.mode;

    SeededStream fallback = episode_stream(info.seed, env.task(), info.simulation_index, "fallback");

    while (auto pending = env.next()) {
        TrialRecord record;
        record.trial_index = static_cast<int>(transcript.trials.size());
        record.query = pending->query;
        record.meta = pending->meta;

        if (pending->forced_choice) {
            record.forced = true;
            record.parsed_choice = *pending->forced_choice;
        } else {
            std::optional<Choice> parsed;
            for (int attempt = 0; attempt < info.max_parse_attempts && !parsed; ++attempt) {
                TrialContext ctx{record.query, record.meta, transcript, info.mode, attempt};
                record.raw_reply = agent.respond(ctx);
                record.attempts = attempt + 1;
                parsed = parse_reply(record.raw_reply, record.query, info.mode);
                if (parsed && !record.query.accepts(*parsed)) parsed.reset();
            }
            if (parsed) {
                record.parsed_choice = *parsed;
            } else {
                record.parsed_choice = fallback_choice(record.query, fallback);
                record.invalid = true;
                ++transcript.invalid_count;
            }
        }

        record.outcome = env.resolve(record.parsed_choice);
        transcript.trials.push_back(std::move(record));
    }
    return transcript;
}

}  // namespace cogbench
