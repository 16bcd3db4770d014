#pragma once

#include <string>
#include <vector>

#include "nearsearch/latin_core.hpp"

namespace nearsearch {

// m x n column-Latin array on {0,...,m-1}: a_ij = i mod m for j <= m-2 and
// a_ij = i+1 mod m for j >= m-1. Requires m < n <= 2m-2.
PartialLatinArray drisko(int m, int n);

// Machine-checkable proof that a Drisko array has no transversal.
//
// With delta(i,j) = a_ij - i (mod m), a transversal would need the deltas on
// its cells to sum to 0 mod m. The sum equals the number t of its cells in
// columns m-1..n-1, and 1 <= t <= n-m+1 <= m-1.
struct DeltaCertificate {
    int m = 0;
    int n = 0;
    std::vector<std::vector<int>> delta_table;
    bool pattern_ok = false;
    // Range of t over all possible transversals.
    int min_count = 0;
    int max_count = 0;
    bool no_transversal = false;

    std::string conclusion() const { return no_transversal ? "no transversal" : "not certified"; }
};

// Re-derives the delta table from the array itself; throws
// std::invalid_argument when the array is not a Drisko array.
DeltaCertificate certify_no_transversal(const PartialLatinArray& a);

}  // namespace nearsearch
