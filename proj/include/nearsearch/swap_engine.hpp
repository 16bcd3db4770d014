#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nearsearch/latin_core.hpp"

namespace nearsearch {

// #-swap search for near transversals.
//
// Both searches start from the order-n array whose only filled cells are the
// main diagonal (0,0,1,1,2,...,n-3) and walk the chain of #-swaps anchored on
// one row. Every concrete symbol in a search array lies in the pool
// {0,...,n-3}; a Marker stands for an unknown pool symbol. A row or column
// with n-1 filled cells is impossible in a Latin array, so such a branch
// proves that a heavier diagonal exists.

enum class Algorithm { Naive, Advanced };

std::string to_string(Algorithm alg);
Algorithm algorithm_from_string(const std::string& name);

inline constexpr int kMaxSearchOrder = 16;
inline constexpr int kPhases = 4;

struct SearchStats {
    // Branches closed by the n-1 filled cells rule.
    std::uint64_t true_leaves = 0;
    // Inconclusive leaves: cycle-back in the naive search, cycle-back with
    // r0 = 3 in the advanced search.
    std::uint64_t false_leaves = 0;
    // Branches closed by the Latin-square-only cutoff.
    std::uint64_t pruned_leaves = 0;
    // cycle_backs_at[r] counts escalations out of phase r0 = r.
    std::array<std::uint64_t, kPhases> cycle_backs_at{};
    std::uint64_t nodes = 0;
    std::uint64_t max_depth = 0;

    void merge(const SearchStats& other);
    friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

struct SearchFailure {
    PartialLatinArray array;
    DiagonalPerm sigma;
};

struct SearchVerdict {
    bool proved = true;
    std::vector<SearchFailure> failures;
};

struct SearchFrame {
    PartialLatinArray array;
    DiagonalPerm sigma;
    int depth = 0;
    int r0 = 0;
    int r1 = 3;
};

struct SearchOptions {
    // Disables Marker resolution and corner marking: plain #-swap reachability.
    bool swap_only = false;
    // Latin-square-only cutoff on the top-left (n-2)x(n-2) block.
    bool square_prune = false;
    // Assert the phase invariant at every Hash entry and verify that every
    // branch restores the array exactly. Slow; meant for tests at small n.
    bool check_invariants = false;
    // Worker threads. Results do not depend on this value.
    int parallel = 1;
    // Number of branching levels explored sequentially before work is
    // handed to the pool when parallel > 1.
    int split_level = 3;
    // Called every `progress_interval` nodes with the running counters.
    std::uint64_t progress_interval = 0;
    std::function<void(const SearchStats&)> progress;
};

// Order-n seed: diagonal (0,0,1,1,2,...,n-3), identity diagonal, universe n-2.
std::pair<PartialLatinArray, DiagonalPerm> seed_array(int n);

// Exchanges sigma[r0] and sigma[row]; the cell newly exposed in row r0 becomes
// a Marker if it was Empty.
void hash_swap(SearchFrame& f, int row);

// Naive search, anchored on row 0. `r` is the row just swapped on. Every branch
// is explored so that the counters are complete.
SearchVerdict naive_hash(const SearchFrame& f, int r, SearchStats& stats, const SearchOptions& options = {});

// Advanced search, entered at Hash(f.array, f.sigma, f.depth, f.r0, f.r1).
SearchVerdict advanced_hash(const SearchFrame& f, SearchStats& stats, const SearchOptions& options = {});

// FillCell of the advanced search at (r, c) followed by Hash at depth f.depth + 1.
SearchVerdict fill_cell(const SearchFrame& f, int r, int c, SearchStats& stats, const SearchOptions& options = {});

// Symbols FillCell tries at (r, c): 0..min(k+1, n-3), where k is the largest
// symbol occurring at least twice in `a`, minus those in row r or column c.
std::vector<Symbol> branch_symbols(const PartialLatinArray& a, int r, int c);

// The four cells in the two rows and two columns missed by `t` become Markers
// where Empty. `t` must have length n-2.
void mark_corners(PartialLatinArray& a, const PartialTransversal& t);

// True when fewer than 2(n-2)-4 cells of the top-left (n-2)x(n-2) block are
// Empty: the two symbols missing from the pool no longer fit in a Latin square.
bool latin_square_prune(const PartialLatinArray& a);

struct OrderReport {
    int order = 0;
    Algorithm algorithm = Algorithm::Naive;
    SearchOptions options;
    bool proved = false;
    SearchStats stats;
    // Sorted by serialized grid text.
    std::vector<SearchFailure> failures;
    // The weight-(n-2) seed is only justified when order n-1 is already proved.
    std::string chain_assumption;
    double wall_seconds = 0.0;
};

OrderReport verify_order(int n, Algorithm algorithm, const SearchOptions& options = {});

}  // namespace nearsearch
