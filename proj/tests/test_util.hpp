#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cogbench/cogbench.hpp"

namespace testutil {

namespace fs = std::filesystem;

inline std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Golden files end with one newline that is not part of the prompt.
inline std::string golden(const std::string& name) {
    std::string s = read_text(fs::path(COGBENCH_GOLDEN_DIR) / name);
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

/// Fresh, empty directory under the system temp dir.
inline fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("cogbench_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

/// Agent replying with a fixed string.
class ConstantAgent final : public cogbench::Agent {
public:
    explicit ConstantAgent(std::string reply) : reply_(std::move(reply)) {}
    std::string respond(const cogbench::TrialContext&) override {
        ++calls;
        return reply_;
    }
    std::string describe() const override { return "constant"; }
    int calls = 0;

private:
    std::string reply_;
};

inline cogbench::Transcript play(cogbench::TaskId task, const cogbench::OracleParams& params, std::uint64_t seed,
                                 int sim = 0) {
    auto env = cogbench::envs::make_environment(task, seed, sim);
    cogbench::OracleAgent agent(params, task, cogbench::episode_stream(seed, task, sim, "agent"));
    return cogbench::run_episode(*env, agent, cogbench::EpisodeInfo{sim, seed, cogbench::PromptMode::base});
}

}  // namespace testutil
