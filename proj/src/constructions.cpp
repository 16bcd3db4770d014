#include "nearsearch/constructions.hpp"

#include <algorithm>
#include <stdexcept>

namespace nearsearch {

PartialLatinArray drisko(int m, int n) {
    if (!(m < n && n <= 2 * m - 2))
        throw std::invalid_argument("drisko(" + std::to_string(m) + ", " + std::to_string(n) +
                                    ") needs m < n <= 2m-2");
    PartialLatinArray a(m, n, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a.set(i, j, Cell::symbol(j <= m - 2 ? i % m : (i + 1) % m));
    return a;
}

DeltaCertificate certify_no_transversal(const PartialLatinArray& a) {
    DeltaCertificate cert;
    cert.m = a.rows();
    cert.n = a.cols();
    const int m = cert.m;
    const int n = cert.n;
    if (!(m < n && n <= 2 * m - 2)) throw std::invalid_argument("dimensions outside m < n <= 2m-2");
    if (a.universe() != m) throw std::invalid_argument("symbol universe must be {0,...,m-1}");

    cert.delta_table.assign(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(n), 0));
    bool pattern = true;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const Cell cell = a.at(i, j);
            if (!cell.is_symbol()) throw std::invalid_argument("array is not fully filled");
            const int delta = ((cell.value() - i) % m + m) % m;
            cert.delta_table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = delta;
            if (delta != (j <= m - 2 ? 0 : 1)) pattern = false;
        }
    if (!pattern) throw std::invalid_argument("delta pattern check failed: not a Drisko array");
    cert.pattern_ok = true;

    // A transversal has one cell per row. At most m-1 of them fit in the
    // first m-1 columns; at most n-m+1 in the remaining ones.
    cert.min_count = std::max(0, m - (m - 1));
    cert.max_count = std::min(m, n - m + 1);
    cert.no_transversal = cert.min_count >= 1 && cert.max_count <= m - 1;
    return cert;
}

}  // namespace nearsearch
