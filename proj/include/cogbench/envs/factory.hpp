#pragma once

#include <cstdint>
#include <memory>

#include "cogbench/envs/bart.hpp"
#include "cogbench/envs/horizon.hpp"
#include "cogbench/envs/instrumental_learning.hpp"
#include "cogbench/envs/probabilistic_reasoning.hpp"
#include "cogbench/envs/restless_bandit.hpp"
#include "cogbench/envs/temporal_discounting.hpp"
#include "cogbench/envs/two_step.hpp"

namespace cogbench::envs {

/// Per-task generator settings.
struct TaskSettings {
    UrnLevels urn;
    HorizonConfig horizon;
    RestlessConfig restless;
    int casino_trials = 24;
    TwoStepConfig two_step;
    DiscountingBattery discounting = default_battery();
    BartConfig bart;
};

/// Fresh environment for simulation `sim` of `task`. Everything random derives
/// from (root_seed, task, sim).
inline std::unique_ptr<Environment> make_environment(TaskId task, std::uint64_t root_seed, int sim,
                                                     const TaskSettings& settings = {}) {
    SeededStream stream = episode_stream(root_seed, task, sim, "env");
    switch (task) {
        case TaskId::probabilistic_reasoning: {
            const int cell = balanced_cell(root_seed, task, sim, urn_design_cells);
            return std::make_unique<UrnEnvironment>(generate_urn_cell(cell, stream, settings.urn));
        }
        case TaskId::horizon: {
            const int cell = balanced_cell(root_seed, task, sim, 4);
            auto game = generate_horizon_cell(cell, stream, settings.horizon);
            return std::make_unique<HorizonEnvironment>(std::move(game), std::move(stream));
        }
        case TaskId::restless_bandit: {
            auto inst = generate_restless(stream, settings.restless);
            return std::make_unique<RestlessEnvironment>(std::move(inst), std::move(stream));
        }
        case TaskId::instrumental_learning: {
            auto set = generate_casino_set(stream, settings.casino_trials);
            return std::make_unique<InstrumentalEnvironment>(std::move(set), std::move(stream));
        }
        case TaskId::two_step: {
            auto inst = generate_two_step(stream, settings.two_step);
            return std::make_unique<TwoStepEnvironment>(inst, std::move(stream));
        }
        case TaskId::temporal_discounting:
            return std::make_unique<DiscountingEnvironment>(settings.discounting);
        case TaskId::bart:
            return std::make_unique<BartEnvironment>(generate_bart(stream, settings.bart));
    }
    throw ConfigError("unknown task");
}

}  // namespace cogbench::envs
