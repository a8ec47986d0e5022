#pragma once

// Run configuration (a JSON file) and construction of per-episode agents.

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "cogbench/agents/llm_endpoint.hpp"
#include "cogbench/agents/oracle.hpp"
#include "cogbench/envs/factory.hpp"

namespace cogbench {

inline int default_simulations(TaskId task) noexcept {
    switch (task) {
        case TaskId::probabilistic_reasoning: return 100;
        case TaskId::horizon: return 100;
        case TaskId::restless_bandit: return 10;
        case TaskId::instrumental_learning: return 10;
        case TaskId::two_step: return 100;
        case TaskId::temporal_discounting: return 1;
        case TaskId::bart: return 10;
    }
    return 1;
}

struct AgentSpec {
    enum class Type { oracle, endpoint };
    Type type = Type::oracle;
    OracleParams oracle = RandomOracle{};
    std::map<TaskId, OracleParams> per_task;
    EndpointConfig endpoint;

    const OracleParams& oracle_for(TaskId task) const {
        auto it = per_task.find(task);
        return it == per_task.end() ? oracle : it->second;
    }
};

inline json agent_spec_to_json(const AgentSpec& a) {
    if (a.type == AgentSpec::Type::endpoint) return json{{"type", "endpoint"}, {"endpoint", a.endpoint}};
    json per = json::object();
    for (const auto& [task, p] : a.per_task) per[std::string(to_string(task))] = oracle_to_json(p);
    return json{{"type", "oracle"}, {"oracle", oracle_to_json(a.oracle)}, {"per_task", per}};
}

inline AgentSpec agent_spec_from_json(const json& j) {
    AgentSpec a;
    const std::string type = j.value("type", "oracle");
    if (type == "endpoint") {
        a.type = AgentSpec::Type::endpoint;
        a.endpoint = j.at("endpoint").get<EndpointConfig>();
        a.endpoint.validate();
    } else if (type == "oracle") {
        if (j.contains("oracle")) a.oracle = oracle_from_json(j.at("oracle"));
        if (j.contains("per_task"))
            for (auto it = j.at("per_task").begin(); it != j.at("per_task").end(); ++it)
                a.per_task[task_from_string(it.key())] = oracle_from_json(it.value());
    } else {
        throw ConfigError("unknown agent type '" + type + "'");
    }
    return a;
}

struct RunConfig {
    AgentSpec agent;
    std::vector<TaskId> tasks{all_tasks.begin(), all_tasks.end()};
    std::map<TaskId, int> simulations;
    PromptMode mode = PromptMode::base;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";
    /// 0 means one worker per hardware thread.
    int workers = 0;
    /// Optional ladder file replacing the built-in discounting battery.
    std::string discounting_file;

    int simulations_for(TaskId task) const {
        auto it = simulations.find(task);
        return it == simulations.end() ? default_simulations(task) : it->second;
    }

    int worker_count() const {
        if (workers > 0) return workers;
        return std::max(1u, std::thread::hardware_concurrency());
    }

    envs::TaskSettings task_settings() const {
        envs::TaskSettings s;
        if (!discounting_file.empty()) s.discounting = envs::load_battery(discounting_file);
        return s;
    }

    void validate() const {
        if (tasks.empty()) throw ConfigError("no tasks configured");
        for (TaskId t : tasks) {
            const int n = simulations_for(t);
            if (n < 1) throw ConfigError("simulations for " + std::string(to_string(t)) + " must be >= 1");
            if (t == TaskId::temporal_discounting && n != 1)
                throw ConfigError("temporal_discounting runs exactly one simulation");
            if (agent.type == AgentSpec::Type::oracle && !supports(agent.oracle_for(t), t))
                throw ConfigError("oracle '" + oracle_kind(agent.oracle_for(t)) + "' cannot play task '" +
                                  std::string(to_string(t)) + "'");
        }
    }

    /// Everything that determines transcripts; stored in the manifest and compared on resume.
    json identity() const {
        json sims = json::object();
        json names = json::array();
        for (TaskId t : tasks) {
            names.push_back(to_string(t));
            sims[std::string(to_string(t))] = simulations_for(t);
        }
        return json{{"agent", agent_spec_to_json(agent)}, {"tasks", names},           {"simulations", sims},
                    {"prompt_mode", to_string(mode)},     {"seed", seed},             {"discounting_file", discounting_file}};
    }
};

inline RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    if (j.contains("agent")) c.agent = agent_spec_from_json(j.at("agent"));
    if (j.contains("tasks")) {
        c.tasks.clear();
        for (const auto& t : j.at("tasks")) c.tasks.push_back(task_from_string(t.get<std::string>()));
    }
    if (j.contains("simulations"))
        for (auto it = j.at("simulations").begin(); it != j.at("simulations").end(); ++it)
            c.simulations[task_from_string(it.key())] = it.value().get<int>();
    if (j.contains("prompt_mode")) c.mode = prompt_mode_from_string(j.at("prompt_mode").get<std::string>());
    c.seed = j.value("seed", std::uint64_t{0});
    c.output_dir = j.value("output_dir", std::string("out"));
    c.workers = j.value("workers", 0);
    c.discounting_file = j.value("discounting_file", std::string());
    return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return run_config_from_json(j);
}

/// Agent for one episode. Oracles draw from their own seeded stream.
inline std::unique_ptr<Agent> make_agent(const AgentSpec& spec, TaskId task, std::uint64_t seed, int sim) {
    if (spec.type == AgentSpec::Type::endpoint) return std::make_unique<EndpointAgent>(spec.endpoint);
    return std::make_unique<OracleAgent>(spec.oracle_for(task), task, episode_stream(seed, task, sim, "agent"));
}

}  // namespace cogbench
