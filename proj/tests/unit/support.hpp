#pragma once

// Test-only helpers. Everything here is written from the definitions and
// shares no code with the library's search routines.

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nearsearch/latin_core.hpp"

namespace testing {

using nearsearch::Cell;
using nearsearch::PartialLatinArray;

inline PartialLatinArray from_rows(const std::vector<std::vector<int>>& rows, int universe = 0) {
    int top = 0;
    for (const auto& r : rows)
        for (int v : r) top = std::max(top, v + 1);
    PartialLatinArray a(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()),
                        universe > 0 ? universe : std::max(1, top));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const int v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            a.set(i, j, v == -1 ? Cell::empty() : v == -2 ? Cell::marker() : Cell::symbol(v));
        }
    return a;
}

inline PartialLatinArray cyclic(int n) {
    PartialLatinArray a(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a.set(i, j, Cell::symbol((i + j) % n));
    return a;
}

// Distinct concrete symbols along one diagonal.
inline int weight_of(const PartialLatinArray& a, const std::vector<int>& sigma) {
    std::set<int> seen;
    for (int i = 0; i < a.rows(); ++i) {
        const Cell c = a.at(i, sigma[static_cast<std::size_t>(i)]);
        if (c.is_symbol()) seen.insert(c.value());
    }
    return static_cast<int>(seen.size());
}

// Plain enumeration of all n! diagonals.
inline int brute_max_weight(const PartialLatinArray& a) {
    std::vector<int> sigma(static_cast<std::size_t>(a.rows()));
    std::iota(sigma.begin(), sigma.end(), 0);
    int best = 0;
    do best = std::max(best, weight_of(a, sigma));
    while (std::next_permutation(sigma.begin(), sigma.end()));
    return best;
}

// Longest set of concrete cells in distinct rows, columns and symbols, by
// trying every choice (skip or any column) for each row.
inline int brute_max_partial(const PartialLatinArray& a) {
    int best = 0;
    std::vector<char> col_used(static_cast<std::size_t>(a.cols()), 0);
    std::set<int> syms;
    auto go = [&](auto&& self, int row, int len) -> void {
        if (row == a.rows()) {
            best = std::max(best, len);
            return;
        }
        if (len + (a.rows() - row) <= best) return;
        self(self, row + 1, len);
        for (int j = 0; j < a.cols(); ++j) {
            const Cell c = a.at(row, j);
            if (!c.is_symbol() || col_used[static_cast<std::size_t>(j)] || syms.count(c.value())) continue;
            col_used[static_cast<std::size_t>(j)] = 1;
            syms.insert(c.value());
            self(self, row + 1, len + 1);
            syms.erase(c.value());
            col_used[static_cast<std::size_t>(j)] = 0;
        }
    };
    go(go, 0, 0);
    return best;
}

inline bool rows_and_columns_distinct(const PartialLatinArray& a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const Cell c = a.at(i, j);
            if (!c.is_symbol()) continue;
            for (int k = j + 1; k < a.cols(); ++k)
                if (a.at(i, k).is_symbol() && a.at(i, k).value() == c.value()) return false;
            for (int k = i + 1; k < a.rows(); ++k)
                if (a.at(k, j).is_symbol() && a.at(k, j).value() == c.value()) return false;
        }
    return true;
}

// Random fully filled n x n Latin array on `symbols` symbols (n <= symbols).
// Cells are filled in row-major order with restarts on dead ends.
inline PartialLatinArray random_latin_array(int n, int symbols, std::mt19937& rng) {
    for (;;) {
        PartialLatinArray a(n, n, symbols);
        bool stuck = false;
        for (int i = 0; i < n && !stuck; ++i)
            for (int j = 0; j < n && !stuck; ++j) {
                std::vector<int> options;
                for (int s = 0; s < symbols; ++s) {
                    bool clash = false;
                    for (int k = 0; k < j; ++k) clash |= a.at(i, k).value() == s;
                    for (int k = 0; k < i; ++k) clash |= a.at(k, j).value() == s;
                    if (!clash) options.push_back(s);
                }
                if (options.empty()) {
                    stuck = true;
                    break;
                }
                a.set(i, j, Cell::symbol(options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)]));
            }
        if (!stuck) return a;
    }
}

// First Latin completion found by backtracking: Markers take symbols from
// [0, pool), Empty cells from [0, symbols).
inline std::optional<PartialLatinArray> complete(PartialLatinArray a, int pool, int symbols) {
    std::vector<std::pair<int, int>> open;
    std::vector<char> marker;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (!a.at(i, j).is_symbol()) {
                open.emplace_back(i, j);
                marker.push_back(a.at(i, j).is_marker());
            }
    PartialLatinArray out(a.rows(), a.cols(), symbols);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.set(i, j, a.at(i, j).is_symbol() ? a.at(i, j) : Cell::empty());
    auto ok = [&](int r, int c, int s) {
        for (int k = 0; k < out.cols(); ++k)
            if (out.at(r, k).is_symbol() && out.at(r, k).value() == s) return false;
        for (int k = 0; k < out.rows(); ++k)
            if (out.at(k, c).is_symbol() && out.at(k, c).value() == s) return false;
        return true;
    };
    auto go = [&](auto&& self, std::size_t idx) -> bool {
        if (idx == open.size()) return true;
        const auto [r, c] = open[idx];
        const int top = marker[idx] ? pool : symbols;
        for (int s = 0; s < top; ++s) {
            if (!ok(r, c, s)) continue;
            out.set(r, c, Cell::symbol(s));
            if (self(self, idx + 1)) return true;
            out.set(r, c, Cell::empty());
        }
        return false;
    };
    if (!go(go, 0)) return std::nullopt;
    return out;
}

// An order-8 naive-search failure with five Markers in the top row.
inline const char* kMarkedTopRow8 =
    "8 8\n"
    "0 x x x x x . .\n"
    ". 0 . . 1 2 . .\n"
    "2 . 1 3 . . . .\n"
    "3 2 . 1 0 . . .\n"
    ". 3 0 . 2 . . .\n"
    "1 . . 0 . 3 . .\n"
    ". . . . . . 4 .\n"
    ". . . . . . . 5\n";

// Order 11: the top-left 9x9 block has no Empty cell left.
inline const char* kPrunable11 =
    "11 11\n"
    "0 6 x 5 3 x 2 4 1 . .\n"
    "x 0 3 x 1 x x x x . .\n"
    "2 x 1 4 x x x 0 3 . .\n"
    "6 2 x 1 x x x x 5 . .\n"
    "x x 0 3 2 x x 6 4 . .\n"
    "x 1 5 x x 3 6 x x . .\n"
    "3 x x x 5 x 4 x x . .\n"
    "x x x x x 2 1 5 0 . .\n"
    "x x x 2 x 5 0 x 6 . .\n"
    ". . . . . . . . . 7 .\n"
    ". . . . . . . . . . 8\n";

}  // namespace testing
