/**
 * @file config_parse.hpp
 * @brief Text grammars used on the command line.
 *
 *   monodromy   "a,b,c,d"            row-major SL(2,Z) entries
 *   insertions  "p1,s1;p2,s2;..."    empty string = no insertions
 *   int list    "a1,a2,..."          empty string = empty list
 */
#pragma once

#include "dp_engine.hpp"
#include "sl2z.hpp"

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wrtnct {

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string &what, std::size_t position)
        : std::invalid_argument(what + " (at position " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t'; }

/// Splits on `sep`, keeping each piece's offset into the original text.
inline std::vector<std::pair<std::string_view, std::size_t>> split(std::string_view text, char sep,
                                                                   std::size_t base) {
    std::vector<std::pair<std::string_view, std::size_t>> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == sep) {
            out.emplace_back(text.substr(start, i - start), base + start);
            start = i + 1;
        }
    }
    return out;
}

inline std::int64_t parse_int(std::string_view tok, std::size_t pos) {
    std::size_t lead = 0;
    while (lead < tok.size() && is_space(tok[lead])) ++lead;
    std::size_t end = tok.size();
    while (end > lead && is_space(tok[end - 1])) --end;
    std::string_view core = tok.substr(lead, end - lead);
    if (core.empty()) throw ParseError("expected an integer", pos + lead);
    if (core.front() == '+') core.remove_prefix(1);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(core.data(), core.data() + core.size(), value);
    if (ec == std::errc::result_out_of_range) throw ParseError("integer out of range", pos + lead);
    if (ec != std::errc{} || ptr != core.data() + core.size()) {
        const auto bad = static_cast<std::size_t>(ptr - tok.data());
        throw ParseError("invalid integer '" + std::string(core) + "'", pos + bad);
    }
    return value;
}

inline bool blank(std::string_view text) {
    for (char c : text) {
        if (!is_space(c)) return false;
    }
    return true;
}

}  // namespace detail

inline std::vector<std::int64_t> parse_int_list(std::string_view text) {
    std::vector<std::int64_t> out;
    if (detail::blank(text)) return out;
    for (const auto &[tok, pos] : detail::split(text, ',', 0)) out.push_back(detail::parse_int(tok, pos));
    return out;
}

inline InsertionList parse_insertions(std::string_view text) {
    InsertionList out;
    if (detail::blank(text)) return out;
    for (const auto &[pair_text, pos] : detail::split(text, ';', 0)) {
        const auto parts = detail::split(pair_text, ',', pos);
        if (parts.size() != 2) {
            throw ParseError("insertion must be 'p,s', got '" + std::string(pair_text) + "'", pos);
        }
        out.push_back({detail::parse_int(parts[0].first, parts[0].second),
                       detail::parse_int(parts[1].first, parts[1].second)});
    }
    return out;
}

/// Parses "a,b,c,d"; throws ParseError on syntax and std::invalid_argument when det != 1.
inline SL2Matrix parse_monodromy(std::string_view text) {
    const auto parts = detail::split(text, ',', 0);
    if (parts.size() != 4) throw ParseError("monodromy needs four comma-separated entries a,b,c,d", 0);
    std::int64_t v[4];
    for (std::size_t i = 0; i < 4; ++i) v[i] = detail::parse_int(parts[i].first, parts[i].second);
    return SL2Matrix::make(v[0], v[1], v[2], v[3]);
}

}  // namespace wrtnct
