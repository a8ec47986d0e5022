#pragma once

#include <optional>

#include "cogbench/core/types.hpp"

namespace cogbench {

/// The next step an environment asks for.
struct PendingQuery {
    ChoiceQuery query;
    json meta = json::object();
    /// Present when the environment dictates the choice (forced trials).
    std::optional<Choice> forced_choice;
};

/// Single-episode state machine. Call next() until it returns nullopt,
/// answering every returned query with exactly one resolve().
class Environment {
public:
    virtual ~Environment() = default;

    virtual TaskId task() const = 0;

    /// nullopt once the episode is complete.
    virtual std::optional<PendingQuery> next() = 0;

    /// Applies the choice for the pending query and returns its observation.
    virtual json resolve(const Choice& choice) = 0;
};

}  // namespace cogbench
