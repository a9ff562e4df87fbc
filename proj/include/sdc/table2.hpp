#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace sdc {

/// Best-known minimum distances of self-dual [2n, n] codes over prime fields, transcribed cell by
/// cell from the published table of codes built with orthogonal matrices. 'M' = MDS (d = n + 1),
/// 'A' = almost MDS (d = n), digits = the distance itself; a trailing '*' marks parameters that
/// were new at publication. Blank cells carry no target.
struct Table2Cell {
    unsigned q;
    unsigned length;  // 2n
    std::string_view entry;

    bool is_new() const noexcept { return !entry.empty() && entry.back() == '*'; }
    std::string_view symbol() const noexcept { return is_new() ? entry.substr(0, entry.size() - 1) : entry; }

    /// Target minimum distance implied by the entry.
    std::size_t target_distance() const {
        const std::size_t half = length / 2;
        const auto s = symbol();
        if (s == "M") return half + 1;
        if (s == "A") return half;
        std::size_t d = 0;
        for (char ch : s) {
            if (ch < '0' || ch > '9') throw internal_error("malformed table entry");
            d = d * 10 + static_cast<std::size_t>(ch - '0');
        }
        return d;
    }
};

namespace detail {

inline constexpr std::array<unsigned, 28> table2_fields = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                                                           53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109};

struct Table2Row {
    unsigned length;
    std::array<std::string_view, 28> entries;  // aligned with table2_fields
};

// clang-format off
inline constexpr std::array<Table2Row, 11> table2_rows = {{
    { 4, {"M", "A", "M", "M", "M", "M", "M", "M", "M", "M", "M", "M", "M", "M",
          "M*", "M*", "M*", "M*", "M*", "M*", "M", "M*", "M*", "M", "M*", "M*", "M*", "M*"}},
    { 6, {"", "M", "", "", "M", "M", "", "", "M", "", "M", "M", "", "",
          "M", "", "M", "", "", "M", "", "", "M*", "M*", "M*", "", "", "M*"}},
    { 8, {"", "", "M", "M", "M", "M", "M", "M", "M", "M", "M", "M", "M", "M",
          "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*"}},
    {10, {"", "", "", "", "M", "M", "", "", "M", "", "M", "M", "", "",
          "M*", "", "M*", "", "", "M*", "", "", "M*", "M*", "M*", "", "", "M*"}},
    {12, {"", "A", "A", "M", "A", "6", "M", "M", "M", "M", "M", "M", "M", "M",
          "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*", "M*"}},
    {14, {"", "", "", "", "7", "7", "", "", "", "", "7", "", "", "",
          "", "", "", "", "", "", "", "", "", "", "", "", "", "7"}},
    {16, {"", "", "", "", "", "8", "8", "", "8", "8", "8", "8", "8", "8",
          "", "", "", "", "", "", "", "", "", "", "", "", "", "8"}},
    {18, {"", "", "", "", "", "", "", "", "", "", "8", "", "", "",
          "", "", "", "", "", "", "", "", "", "", "", "", "", "9"}},
    {20, {"", "", "", "", "", "", "", "", "", "", "9", "", "", "",
          "", "", "", "", "", "", "", "", "", "", "", "", "", "9"}},
    {22, {"", "", "", "", "", "", "", "", "", "", "10", "", "", "",
          "", "", "", "", "", "", "", "", "", "", "", "", "", "10"}},
    {24, {"", "", "", "", "", "", "10", "", "", "", "", "", "", "",
          "", "", "", "", "", "", "", "", "", "", "", "", "", ""}},
}};
// clang-format on

}  // namespace detail

inline std::optional<Table2Cell> table2_lookup(unsigned q, unsigned length) {
    for (const auto& row : detail::table2_rows) {
        if (row.length != length) continue;
        for (std::size_t i = 0; i < detail::table2_fields.size(); ++i)
            if (detail::table2_fields[i] == q) {
                if (row.entries[i].empty()) return std::nullopt;
                return Table2Cell{q, length, row.entries[i]};
            }
    }
    return std::nullopt;
}

inline std::vector<Table2Cell> table2_cells() {
    std::vector<Table2Cell> out;
    for (const auto& row : detail::table2_rows)
        for (std::size_t i = 0; i < detail::table2_fields.size(); ++i)
            if (!row.entries[i].empty()) out.push_back({detail::table2_fields[i], row.length, row.entries[i]});
    return out;
}

}  // namespace sdc
