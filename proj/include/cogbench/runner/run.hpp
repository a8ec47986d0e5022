#pragma once

// Batch execution with a bounded worker pool, per-episode files and resume.
//
// Layout of an output directory:
//   manifest.json                 config identity, per-task progress, status
//   episodes/<task>/<sim>.jsonl   one transcript per completed episode
//   transcripts/<task>.jsonl      all episodes of a task ordered by sim (written once complete)

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "cogbench/core/episode.hpp"
#include "cogbench/core/transcript_io.hpp"
#include "cogbench/runner/config.hpp"

namespace cogbench {

inline constexpr std::string_view engine_version = "1.0.0";

namespace fs = std::filesystem;

inline fs::path episode_path(const fs::path& dir, TaskId task, int sim) {
    return dir / "episodes" / std::string(to_string(task)) / (std::to_string(sim) + ".jsonl");
}

inline void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

inline std::optional<Transcript> read_episode(const fs::path& path) {
    if (!fs::exists(path)) return std::nullopt;
    try {
        auto ts = read_jsonl_file(path);
        if (ts.size() != 1) return std::nullopt;
        return ts.front();
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

struct RunSummary {
    int total = 0;
    int executed = 0;
    int skipped = 0;
    bool complete = false;
    std::string error;
};

/// Thrown when an existing output directory was produced by a different configuration.
class ResumeMismatch : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Single writer for manifest.json.
class ManifestWriter {
public:
    ManifestWriter(fs::path dir, const RunConfig& cfg) : dir_(std::move(dir)), identity_(cfg.identity()) {
        for (TaskId t : cfg.tasks) sims_[t] = cfg.simulations_for(t);
    }

    void record(TaskId task, int sim, int invalid_count) {
        std::lock_guard lock(mu_);
        invalid_[task][sim] = invalid_count;
        write_locked();
    }

    void set_status(std::string status, std::string error = {}) {
        std::lock_guard lock(mu_);
        status_ = std::move(status);
        error_ = std::move(error);
        write_locked();
    }

    bool complete() const {
        std::lock_guard lock(mu_);
        for (const auto& [task, n] : sims_) {
            auto it = invalid_.find(task);
            if (it == invalid_.end() || static_cast<int>(it->second.size()) != n) return false;
        }
        return true;
    }

private:
    void write_locked() {
        json tasks = json::object();
        for (const auto& [task, n] : sims_) {
            json invalid = json::array();
            int done = 0;
            if (auto it = invalid_.find(task); it != invalid_.end())
                for (const auto& [sim, count] : it->second) {
                    invalid.push_back(json{{"sim", sim}, {"invalid_count", count}});
                    ++done;
                }
            tasks[std::string(to_string(task))] = json{{"simulations", n}, {"completed", done}, {"episodes", invalid}};
        }
        json m{{"engine_version", engine_version}, {"config", identity_}, {"tasks", tasks}, {"status", status_}};
        if (!error_.empty()) m["error"] = error_;
        write_file_atomic(dir_ / "manifest.json", m.dump(2) + "\n");
    }

    fs::path dir_;
    json identity_;
    std::map<TaskId, int> sims_;
    std::map<TaskId, std::map<int, int>> invalid_;
    std::string status_ = "running";
    std::string error_;
    mutable std::mutex mu_;
};

/// Runs (or resumes) every configured episode. `limit` caps newly executed
/// episodes, leaving a resumable partial run.
inline RunSummary run_benchmark(const RunConfig& cfg, std::optional<int> limit = std::nullopt) {
    cfg.validate();
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);

    if (fs::exists(dir / "manifest.json")) {
        std::ifstream in(dir / "manifest.json");
        json old;
        try {
            old = json::parse(in);
        } catch (const json::exception& e) {
            throw ResumeMismatch("unreadable manifest in " + dir.string() + ": " + e.what());
        }
        if (old.value("config", json()) != cfg.identity())
            throw ResumeMismatch("output directory " + dir.string() + " holds a run with a different configuration");
    }

    const envs::TaskSettings settings = cfg.task_settings();
    ManifestWriter manifest(dir, cfg);
    RunSummary summary;

    struct Job {
        TaskId task;
        int sim;
    };
    std::vector<Job> jobs;
    for (TaskId t : cfg.tasks)
        for (int s = 0; s < cfg.simulations_for(t); ++s) {
            ++summary.total;
            if (auto done = read_episode(episode_path(dir, t, s))) {
                manifest.record(t, s, done->invalid_count);
                ++summary.skipped;
            } else {
                jobs.push_back({t, s});
            }
        }
    if (limit && static_cast<int>(jobs.size()) > *limit) jobs.resize(static_cast<std::size_t>(std::max(0, *limit)));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::atomic<int> executed{0};
    std::mutex error_mu;
    std::string first_error;

    auto worker = [&] {
        while (!stop) {
            const std::size_t i = next++;
            if (i >= jobs.size()) return;
            const Job job = jobs[i];
            try {
                auto env = envs::make_environment(job.task, cfg.seed, job.sim, settings);
                auto agent = make_agent(cfg.agent, job.task, cfg.seed, job.sim);
                const Transcript t = run_episode(*env, *agent, EpisodeInfo{job.sim, cfg.seed, cfg.mode});
                write_file_atomic(episode_path(dir, job.task, job.sim), to_jsonl_line(t));
                manifest.record(job.task, job.sim, t.invalid_count);
                ++executed;
            } catch (const EndpointError& e) {
                stop = true;
                std::lock_guard lock(error_mu);
                if (first_error.empty()) first_error = e.what();
            }
        }
    };
    const int n_workers = std::min<int>(cfg.worker_count(), std::max<int>(1, static_cast<int>(jobs.size())));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    summary.executed = executed;
    summary.error = first_error;
    summary.complete = manifest.complete();
    if (summary.complete) {
        for (TaskId t : cfg.tasks) {
            std::string all;
            for (int s = 0; s < cfg.simulations_for(t); ++s) all += to_jsonl_line(*read_episode(episode_path(dir, t, s)));
            write_file_atomic(dir / "transcripts" / (std::string(to_string(t)) + ".jsonl"), all);
        }
        manifest.set_status("complete");
    } else {
        manifest.set_status("partial", first_error);
    }
    return summary;
}

/// Transcripts of every task found under `dir/episodes`, ordered by sim.
inline std::map<TaskId, std::vector<Transcript>> load_run_transcripts(const fs::path& dir) {
    std::map<TaskId, std::vector<Transcript>> out;
    const fs::path root = dir / "episodes";
    if (!fs::exists(root)) return out;
    for (TaskId t : all_tasks) {
        const fs::path task_dir = root / std::string(to_string(t));
        if (!fs::exists(task_dir)) continue;
        std::map<int, Transcript> by_sim;
        for (const auto& entry : fs::directory_iterator(task_dir)) {
            if (entry.path().extension() != ".jsonl") continue;
            if (auto tr = read_episode(entry.path())) by_sim.emplace(tr->simulation_index, std::move(*tr));
        }
        for (auto& [sim, tr] : by_sim) out[t].push_back(std::move(tr));
    }
    return out;
}

/// Configured tasks from the manifest, or every task that has episodes.
inline std::vector<TaskId> run_tasks(const fs::path& dir) {
    std::vector<TaskId> tasks;
    std::ifstream in(dir / "manifest.json");
    if (in) {
        const json m = json::parse(in);
        for (const auto& t : m.at("config").at("tasks")) tasks.push_back(task_from_string(t.get<std::string>()));
        return tasks;
    }
    for (const auto& [t, _] : load_run_transcripts(dir)) tasks.push_back(t);
    return tasks;
}

}  // namespace cogbench
