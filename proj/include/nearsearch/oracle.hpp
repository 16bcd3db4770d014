#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>

#include "nearsearch/latin_core.hpp"

namespace nearsearch {

// Exact brute-force answers, independent of the #-swap search.

struct OracleConfig {
    // Largest order (min of rows and cols for rectangles) the oracle accepts.
    int max_order = 10;
};

class OracleCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    int value = 0;
    std::variant<DiagonalPerm, PartialTransversal> witness;
    std::uint64_t nodes_explored = 0;
};

// Branch-and-bound over diagonals: rows in increasing order, columns in
// increasing order, a branch is cut when distinct-so-far + rows-remaining
// cannot beat the incumbent. Witness is a DiagonalPerm.
OracleResult max_diagonal_weight(const PartialLatinArray& a, const OracleConfig& config = {});

// Longest partial transversal over concrete cells of a (possibly
// rectangular) array. Witness is a PartialTransversal.
OracleResult max_partial_transversal_length(const PartialLatinArray& a, const OracleConfig& config = {});

// Rearranges `d` so that no symbol appears more than twice on it, without
// losing weight and keeping the cell of row `preserve`. Requires a fully
// filled Latin array. `iterations`, if given, receives the number of swaps.
DiagonalPerm normalize_diagonal(const PartialLatinArray& a, const DiagonalPerm& d, int preserve,
                                int* iterations = nullptr);

bool has_transversal(const PartialLatinArray& a, const OracleConfig& config = {});

}  // namespace nearsearch
