#pragma once

#include <string>

#include "cogbench/core/types.hpp"

namespace cogbench {

struct TrialContext {
    const ChoiceQuery& query;
    const json& meta;
    /// Everything recorded so far in this episode.
    const Transcript& history;
    PromptMode mode;
    /// 0 on the first request for a trial, incremented on each parse retry.
    int attempt = 0;
};

/// Anything that answers queries with raw completion text.
class Agent {
public:
    virtual ~Agent() = default;
    virtual std::string respond(const TrialContext& ctx) = 0;
    virtual std::string describe() const = 0;
};

}  // namespace cogbench
