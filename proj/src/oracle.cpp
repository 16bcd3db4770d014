#include "nearsearch/oracle.hpp"

#include <algorithm>
#include <vector>

namespace nearsearch {

namespace {

void check_cap(const PartialLatinArray& a, const OracleConfig& config) {
    const int order = std::min(a.rows(), a.cols());
    if (order > config.max_order)
        throw OracleCapError("order " + std::to_string(order) + " exceeds oracle cap " +
                             std::to_string(config.max_order));
}

int distinct_symbols(const PartialLatinArray& a) {
    std::vector<char> seen(static_cast<std::size_t>(a.universe()), 0);
    int k = 0;
    for (Cell c : a.cells())
        if (c.is_symbol() && c.value() < a.universe() && !seen[static_cast<std::size_t>(c.value())]++) ++k;
    return k;
}

class DiagonalSearch {
public:
    explicit DiagonalSearch(const PartialLatinArray& a)
        : a_(a),
          n_(a.rows()),
          col_used_(static_cast<std::size_t>(n_), 0),
          count_(static_cast<std::size_t>(a.universe()), 0),
          current_(static_cast<std::size_t>(n_), 0),
          ceiling_(std::min(n_, distinct_symbols(a))) {}

    OracleResult run() {
        descend(0, 0);
        return {best_, DiagonalPerm(best_sigma_), nodes_};
    }

private:
    void descend(int row, int distinct) {
        ++nodes_;
        if (row == n_) {
            if (distinct > best_) {
                best_ = distinct;
                best_sigma_ = current_;
            }
            return;
        }
        for (int c = 0; c < n_; ++c) {
            if (best_ >= ceiling_) return;
            if (col_used_[static_cast<std::size_t>(c)]) continue;
            const Cell cell = a_.at(row, c);
            const bool fresh = cell.is_symbol() && count_[static_cast<std::size_t>(cell.value())] == 0;
            const int next = distinct + (fresh ? 1 : 0);
            if (next + (n_ - row - 1) <= best_) continue;
            col_used_[static_cast<std::size_t>(c)] = 1;
            if (cell.is_symbol()) ++count_[static_cast<std::size_t>(cell.value())];
            current_[static_cast<std::size_t>(row)] = c;
            descend(row + 1, next);
            if (cell.is_symbol()) --count_[static_cast<std::size_t>(cell.value())];
            col_used_[static_cast<std::size_t>(c)] = 0;
        }
    }

    const PartialLatinArray& a_;
    int n_;
    std::vector<char> col_used_;
    std::vector<int> count_;
    std::vector<int> current_;
    std::vector<int> best_sigma_;
    int ceiling_;
    int best_ = -1;
    std::uint64_t nodes_ = 0;
};

class TransversalSearch {
public:
    explicit TransversalSearch(const PartialLatinArray& a)
        : a_(a),
          col_used_(static_cast<std::size_t>(a.cols()), 0),
          sym_used_(static_cast<std::size_t>(a.universe()), 0),
          ceiling_(std::min({a.rows(), a.cols(), distinct_symbols(a)})) {}

    OracleResult run() {
        descend(0);
        return {best_, PartialTransversal{best_entries_}, nodes_};
    }

private:
    void descend(int row) {
        ++nodes_;
        const int taken = static_cast<int>(current_.size());
        if (taken > best_) {
            best_ = taken;
            best_entries_ = current_;
        }
        if (row == a_.rows() || best_ >= ceiling_) return;
        if (taken + (a_.rows() - row) <= best_) return;
        for (int c = 0; c < a_.cols(); ++c) {
            const Cell cell = a_.at(row, c);
            if (!cell.is_symbol() || cell.value() >= a_.universe()) continue;
            auto& cu = col_used_[static_cast<std::size_t>(c)];
            auto& su = sym_used_[static_cast<std::size_t>(cell.value())];
            if (cu || su) continue;
            cu = su = 1;
            current_.push_back({row, c, cell.value()});
            descend(row + 1);
            current_.pop_back();
            cu = su = 0;
            if (best_ >= ceiling_) return;
        }
        descend(row + 1);
    }

    const PartialLatinArray& a_;
    std::vector<char> col_used_;
    std::vector<char> sym_used_;
    std::vector<Entry> current_;
    std::vector<Entry> best_entries_;
    int ceiling_;
    int best_ = -1;
    std::uint64_t nodes_ = 0;
};

}  // namespace

OracleResult max_diagonal_weight(const PartialLatinArray& a, const OracleConfig& config) {
    if (!a.is_square()) throw std::invalid_argument("diagonals need a square array");
    check_cap(a, config);
    return DiagonalSearch(a).run();
}

OracleResult max_partial_transversal_length(const PartialLatinArray& a, const OracleConfig& config) {
    check_cap(a, config);
    return TransversalSearch(a).run();
}

DiagonalPerm normalize_diagonal(const PartialLatinArray& a, const DiagonalPerm& d, int preserve, int* iterations) {
    const int n = a.rows();
    if (!a.is_square() || d.size() != n) throw std::invalid_argument("diagonal does not match array dimensions");
    if (preserve < 0 || preserve >= n) throw std::invalid_argument("preserved row out of range");
    for (Cell c : a.cells())
        if (!c.is_symbol()) throw std::invalid_argument("normalize_diagonal needs a fully filled array");
    if (!check_latin(a).ok()) throw std::invalid_argument("normalize_diagonal needs a Latin array");

    std::vector<int> sigma = d.columns();
    std::vector<int> mult(static_cast<std::size_t>(a.universe()), 0);
    auto sym = [&](int r, int c) { return a.at(r, c).value(); };
    auto m = [&](Symbol s) -> int& { return mult[static_cast<std::size_t>(s)]; };
    for (int r = 0; r < n; ++r) ++m(sym(r, sigma[static_cast<std::size_t>(r)]));

    int steps = 0;
    for (;;) {
        int r1 = -1;
        for (int r = 0; r < n && r1 < 0; ++r)
            if (r != preserve && m(sym(r, sigma[static_cast<std::size_t>(r)])) >= 3) r1 = r;
        if (r1 < 0) break;
        if (steps > n * n) throw std::logic_error("diagonal normalization did not terminate");

        // Row r1 gains a symbol missing from the diagonal; row r2's new symbol
        // is at most once on it already.
        const int c1 = sigma[static_cast<std::size_t>(r1)];
        int r2 = -1;
        for (int r = 0; r < n && r2 < 0; ++r) {
            if (r == preserve || r == r1) continue;
            const int c2 = sigma[static_cast<std::size_t>(r)];
            if (m(sym(r1, c2)) == 0 && m(sym(r, c1)) <= 1) r2 = r;
        }
        if (r2 < 0) throw std::logic_error("no admissible swap row; input violates the Latin property");

        const int c2 = sigma[static_cast<std::size_t>(r2)];
        --m(sym(r1, c1));
        --m(sym(r2, c2));
        ++m(sym(r1, c2));
        ++m(sym(r2, c1));
        std::swap(sigma[static_cast<std::size_t>(r1)], sigma[static_cast<std::size_t>(r2)]);
        ++steps;
    }
    if (iterations) *iterations = steps;
    return DiagonalPerm(std::move(sigma));
}

bool has_transversal(const PartialLatinArray& a, const OracleConfig& config) {
    return max_diagonal_weight(a, config).value == a.rows();
}

}  // namespace nearsearch
