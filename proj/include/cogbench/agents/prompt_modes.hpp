#pragma once

// Full prompt text as sent to a completion endpoint, per prompt mode.

#include <string>
#include <string_view>

#include "cogbench/core/types.hpp"

namespace cogbench {

/// Answer template shown inside the reasoning suffixes: "Machine <your choice>".
inline std::string answer_format(const ChoiceQuery& q) {
    std::string_view prefix = q.answer_prefix;
    if (prefix.substr(0, 3) == "A: ") prefix.remove_prefix(3);
    std::string out(prefix);
    if (!out.empty() && out.back() != '.' && out.back() != ' ') out += ' ';
    return out + "<your choice>";
}

inline std::string chain_of_thought_suffix(const std::string& format) {
    return "First break down the problem into smaller steps and reason through each step logically in a "
           "maximum of 100 words before giving your final answer in the format 'Final answer: " +
           format +
           "'. It is very important that you always answer in the right format even if you have no idea "
           "or you believe there is not enough information.\n\nA: Let's think step by step:";
}

inline std::string step_back_suffix(const std::string& format) {
    return "First, take-a-step-back and think in the following two steps to answer this:\n"
           "Step 1) Abstract the key concepts and principles relevant to this question in a maximum of "
           "60 words.\"\n"
           "Step 2) Use the abstractions to reason through the question in a maximum of 60 words.\n\n"
           "Finally, give your final answer in the format 'Final answer: " +
           format +
           "'. It is very important that you always answer in the right format even if you have no idea "
           "or you believe there is not enough information.\n\nA: Step 1)";
}

inline std::string render_prompt(const ChoiceQuery& q, PromptMode mode) {
    switch (mode) {
        case PromptMode::base: return q.prompt_text + "\n\n" + q.answer_prefix;
        case PromptMode::cot: return q.prompt_text + "\n\n" + chain_of_thought_suffix(answer_format(q));
        case PromptMode::sb: return q.prompt_text + "\n\n" + step_back_suffix(answer_format(q));
    }
    return q.prompt_text;
}

}  // namespace cogbench
