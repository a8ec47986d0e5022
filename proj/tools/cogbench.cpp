// Command-line front end: run, score, baseline, recover.
// Exit codes: 0 success, 2 partial result, 3 validation failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cogbench/cogbench.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_partial = 2;
constexpr int exit_invalid = 3;

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& mode,
            const std::string& output, std::optional<int> workers, std::optional<int> limit) {
    cogbench::RunConfig cfg = cogbench::load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!mode.empty()) cfg.mode = cogbench::prompt_mode_from_string(mode);
    if (!output.empty()) cfg.output_dir = output;
    if (workers) cfg.workers = *workers;

    const auto summary = cogbench::run_benchmark(cfg, limit);
    std::cout << "episodes: " << summary.total << " total, " << summary.executed << " run, " << summary.skipped
              << " already present\n";
    if (!summary.error.empty()) std::cerr << "stopped: " << summary.error << "\n";
    if (!summary.complete) {
        std::cout << "run is partial; rerun the same command to resume\n";
        return exit_partial;
    }
    std::cout << "run complete: " << cfg.output_dir.string() << "\n";
    return exit_ok;
}

int cmd_score(const std::string& dir, const std::string& human_path, const std::string& baseline_path) {
    namespace fs = std::filesystem;
    if (!fs::exists(dir)) throw cogbench::ConfigError("run directory " + dir + " does not exist");
    const auto tasks = cogbench::run_tasks(dir);
    const auto transcripts = cogbench::load_run_transcripts(dir);

    std::map<std::string, cogbench::metrics::HumanReference> human;
    if (human_path.empty()) std::cerr << "warning: no human reference file; normalized values are omitted\n";
    else human = cogbench::metrics::load_human_reference(human_path);

    std::map<std::string, cogbench::metrics::BaselineEntry> baselines;
    if (!baseline_path.empty()) baselines = cogbench::metrics::load_baselines(baseline_path);
    else if (!human_path.empty()) std::cerr << "warning: no baseline file; normalized values are omitted\n";

    const auto report = cogbench::metrics::build_report(tasks, transcripts, baselines, human);
    const fs::path out(dir);
    cogbench::write_file_atomic(out / "report.csv", cogbench::metrics::report_csv(report));
    cogbench::write_file_atomic(out / "report_long.csv", cogbench::metrics::report_long_csv(report));
    cogbench::write_file_atomic(out / "report.json", cogbench::metrics::report_json(report).dump(2) + "\n");
    std::cout << cogbench::metrics::report_csv(report);
    if (!report.complete()) {
        std::cerr << "report incomplete: some metrics are absent\n";
        return exit_partial;
    }
    return exit_ok;
}

int cmd_baseline(const std::string& task_name, std::uint64_t seed, std::optional<int> episodes, const std::string& output) {
    const auto task = cogbench::task_from_string(task_name);
    const int n = episodes.value_or(cogbench::default_baseline_episodes(task));
    if (n < 1) throw cogbench::ConfigError("--episodes must be >= 1");
    auto entries = cogbench::random_baseline(task, seed, n);

    // Merge into an existing cache so one file can hold every task.
    if (!output.empty() && std::filesystem::exists(output)) {
        auto old = cogbench::metrics::load_baselines(output);
        for (auto& [k, v] : entries) old[k] = v;
        entries = std::move(old);
    }
    const std::string text = cogbench::metrics::baselines_to_json(entries).dump(2) + "\n";
    if (output.empty()) std::cout << text;
    else cogbench::write_file_atomic(output, text);
    return exit_ok;
}

int cmd_recover(const std::string& profile_name, std::uint64_t seed) {
    const auto profile = cogbench::RecoveryProfile::named(profile_name);
    const auto checks = cogbench::run_recovery(profile, seed);
    for (const auto& c : checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " " << c.metric << " estimate=" << c.estimate
                  << " expected " << c.expectation << "\n";
    if (!cogbench::all_passed(checks)) {
        std::cout << "recovery failed\n";
        return exit_invalid;
    }
    std::cout << "recovery passed\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cognitive-psychology benchmark for text agents"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run (or resume) a benchmark configuration");
    std::string config_path, mode, output;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers, limit;
    run->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Root seed (overrides the file)");
    run->add_option("--mode", mode, "Prompt mode")->check(CLI::IsMember({"base", "cot", "sb"}));
    run->add_option("--output", output, "Output directory (overrides the file)");
    run->add_option("--workers", workers, "Worker threads (0 = hardware threads)");
    run->add_option("--limit", limit, "Stop after this many new episodes");

    auto* score = app.add_subcommand("score", "Compute the metric report of a run directory");
    std::string score_dir, human_path, baseline_path;
    score->add_option("dir", score_dir, "Run directory")->required();
    score->add_option("--human", human_path, "Human reference file")->check(CLI::ExistingFile);
    score->add_option("--baseline", baseline_path, "Random-agent baseline file")->check(CLI::ExistingFile);

    auto* baseline = app.add_subcommand("baseline", "Compute random-agent baselines for one task");
    std::string task_name, baseline_out;
    std::uint64_t baseline_seed = 12345;
    std::optional<int> episodes;
    baseline->add_option("--task", task_name, "Task name")->required();
    baseline->add_option("--seed", baseline_seed, "Seed of the baseline run");
    baseline->add_option("--episodes", episodes, "Number of random-agent episodes");
    baseline->add_option("--output", baseline_out, "Baseline file to create or update");

    auto* recover = app.add_subcommand("recover", "Run the parameter-recovery suite");
    std::string profile = "default";
    std::uint64_t recover_seed = 1;
    recover->add_option("--tolerance-profile", profile, "default or strict")->check(CLI::IsMember({"default", "strict"}));
    recover->add_option("--seed", recover_seed, "Root seed of the simulated data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    try {
        if (*run) return cmd_run(config_path, seed, mode, output, workers, limit);
        if (*score) return cmd_score(score_dir, human_path, baseline_path);
        if (*baseline) return cmd_baseline(task_name, baseline_seed, episodes, baseline_out);
        if (*recover) return cmd_recover(profile, recover_seed);
    } catch (const cogbench::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_invalid;
}
