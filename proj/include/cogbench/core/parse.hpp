#pragma once

#include <cctype>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "cogbench/core/types.hpp"

namespace cogbench {

inline constexpr std::string_view final_answer_marker = "Final answer:";

/// "0.73", "1.00".
inline std::string format_two_decimals(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

namespace detail {

inline bool is_word_char(char c) noexcept {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

/// Last word of the completion stub ("A: Machine" -> "machine"), lower-cased.
inline std::string stub_word(std::string_view prefix) {
    std::size_t end = prefix.size();
    while (end > 0 && !is_word_char(prefix[end - 1])) --end;
    std::size_t begin = end;
    while (begin > 0 && std::isalpha(static_cast<unsigned char>(prefix[begin - 1]))) --begin;
    return lower(prefix.substr(begin, end - begin));
}

inline std::optional<std::string> first_token(std::string_view text, const ChoiceQuery& q) {
    std::optional<std::string> best;
    std::size_t best_pos = std::string_view::npos;
    for (const auto& tok : q.valid_tokens) {
        if (tok.empty()) continue;
        std::size_t pos = text.find(tok);
        while (pos != std::string_view::npos) {
            const bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
            const std::size_t after = pos + tok.size();
            const bool right_ok = after >= text.size() || !is_word_char(text[after]);
            if (left_ok && right_ok) break;
            pos = text.find(tok, pos + 1);
        }
        if (pos != std::string_view::npos && pos < best_pos) {
            best_pos = pos;
            best = tok;
        }
    }
    return best;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline std::optional<double> first_unit_number(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        const bool digit = std::isdigit(static_cast<unsigned char>(text[i])) != 0;
        const bool dot_digit = text[i] == '.' && i + 1 < text.size() &&
                               std::isdigit(static_cast<unsigned char>(text[i + 1])) != 0;
        if ((digit || dot_digit) && (i == 0 || !std::isdigit(static_cast<unsigned char>(text[i - 1])))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j + 1 < text.size() && text[j] == '.' &&
                std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            const double v = std::stod(std::string(text.substr(i, j - i)));
            if (v >= 0.0 && v <= 1.0) return round2(v);
            i = j;
            continue;
        }
        ++i;
    }
    return std::nullopt;
}

}  // namespace detail

/// Extracts the agent's answer from a raw completion.
///
/// Discrete kinds return the earliest valid token that stands as a whole word
/// after the stub word of the answer prefix (or anywhere when the stub word is
/// absent). Numeric kinds return the first literal in [0, 1], rounded to two
/// decimals; a bare digit run completing a stub that ends in "0." is read as
/// the fractional part. In cot/sb modes only the text after the last
/// "Final answer:" marker is scanned.
inline std::optional<Choice> parse_reply(std::string_view raw, const ChoiceQuery& query,
                                         PromptMode mode = PromptMode::base) {
    std::string_view text = raw;
    if (mode != PromptMode::base) {
        const std::size_t marker = text.rfind(final_answer_marker);
        if (marker == std::string_view::npos) return std::nullopt;
        text = text.substr(marker + final_answer_marker.size());
    }

    if (is_discrete(query.answer_kind)) {
        const std::string stub = detail::stub_word(query.answer_prefix);
        if (!stub.empty()) {
            const std::string lowered = detail::lower(text);
            std::size_t pos = lowered.find(stub);
            while (pos != std::string::npos) {
                const std::size_t after = pos + stub.size();
                const bool bounded = (pos == 0 || !detail::is_word_char(lowered[pos - 1])) &&
                                     (after >= lowered.size() || !detail::is_word_char(lowered[after]));
                if (bounded) {
                    if (auto tok = detail::first_token(text.substr(after), query)) return *tok;
                    break;
                }
                pos = lowered.find(stub, pos + 1);
            }
        }
        if (auto tok = detail::first_token(text, query)) return *tok;
        return std::nullopt;
    }

    std::size_t lead = 0;
    while (lead < text.size() && std::isspace(static_cast<unsigned char>(text[lead]))) ++lead;
    std::size_t digits = lead;
    while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits]))) ++digits;
    const bool continues_stub = mode == PromptMode::base && digits > lead &&
                                (digits >= text.size() || text[digits] != '.') &&
                                detail::ends_with(query.answer_prefix, "0.");
    if (continues_stub) {
        const double v = std::stod("0." + std::string(text.substr(lead, digits - lead)));
        return round2(v);
    }
    if (auto v = detail::first_unit_number(text)) return *v;
    return std::nullopt;
}

}  // namespace cogbench
