#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "cogbench/core/types.hpp"

namespace cogbench::envs {

/// Balanced design: simulation indices are grouped in blocks of n_cells and
/// each block visits every cell once in a per-block shuffled order.
inline int balanced_cell(std::uint64_t root_seed, TaskId task, int simulation_index, int n_cells) {
    const int block = simulation_index / n_cells;
    SeededStream stream(root_seed, std::string(to_string(task)) + "/design/" + std::to_string(block));
    std::vector<int> order(static_cast<std::size_t>(n_cells));
    std::iota(order.begin(), order.end(), 0);
    stream.shuffle(order);
    return order[static_cast<std::size_t>(simulation_index % n_cells)];
}

inline std::string number_word(int n) {
    static const char* words[] = {"zero", "one", "two", "three", "four",
                                  "five", "six", "seven", "eight", "nine", "ten"};
    if (n >= 0 && n <= 10) return words[n];
    return std::to_string(n);
}

inline ChoiceQuery letter_query(std::string prompt, std::vector<std::string> tokens, std::string prefix) {
    return ChoiceQuery{std::move(prompt), AnswerKind::letter_choice, std::move(tokens), std::move(prefix)};
}

}  // namespace cogbench::envs
