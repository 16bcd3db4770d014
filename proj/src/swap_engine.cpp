#include "nearsearch/swap_engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <stdexcept>
#include <thread>

namespace nearsearch {

std::string to_string(Algorithm alg) { return alg == Algorithm::Naive ? "naive" : "advanced"; }

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "naive") return Algorithm::Naive;
    if (name == "advanced") return Algorithm::Advanced;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

void SearchStats::merge(const SearchStats& other) {
    true_leaves += other.true_leaves;
    false_leaves += other.false_leaves;
    pruned_leaves += other.pruned_leaves;
    for (int i = 0; i < kPhases; ++i) cycle_backs_at[i] += other.cycle_backs_at[i];
    nodes += other.nodes;
    max_depth = std::max(max_depth, other.max_depth);
}

namespace {

using Mask = std::uint32_t;
constexpr std::int8_t kEmpty = -1;
constexpr std::int8_t kMarker = -2;
constexpr int kStride = kMaxSearchOrder;

Mask bit(int i) { return Mask{1} << i; }

// Search state with incremental row/column bookkeeping and an undo log.
class Board {
public:
    Board(const PartialLatinArray& a, const DiagonalPerm& sigma) : n(a.rows()), pool(a.rows() - 2) {
        if (!a.is_square()) throw std::invalid_argument("search array must be square");
        if (n < 4 || n > kMaxSearchOrder)
            throw std::invalid_argument("search order must lie in [4, " + std::to_string(kMaxSearchOrder) + "]");
        if (sigma.size() != n) throw std::invalid_argument("diagonal does not match array order");
        cells_.fill(kEmpty);
        for (int r = 0; r < n; ++r) {
            sigma_[static_cast<std::size_t>(r)] = static_cast<std::int8_t>(sigma[r]);
            for (int c = 0; c < n; ++c) {
                Cell cell = a.at(r, c);
                if (cell.is_symbol() && cell.value() >= pool)
                    throw std::invalid_argument("search array holds a symbol outside the pool {0,...,n-3}");
                if (cell.is_filled())
                    place(r, c, cell.is_marker() ? kMarker : static_cast<std::int8_t>(cell.value()));
            }
        }
        log_.clear();
    }

    std::int8_t at(int r, int c) const { return cells_[static_cast<std::size_t>(r * kStride + c)]; }
    int col_of(int r) const { return sigma_[static_cast<std::size_t>(r)]; }
    std::int8_t diag(int r) const { return at(r, col_of(r)); }
    Mask blocked(int r, int c) const { return row_mask_[idx(r)] | col_mask_[idx(c)]; }
    Mask pool_mask() const { return bit(pool) - 1; }

    void place(int r, int c, std::int8_t v) {
        const auto i = static_cast<std::size_t>(r * kStride + c);
        log_.push_back({static_cast<std::uint16_t>(i), cells_[i]});
        write(r, c, v);
    }

    // Marker on an Empty cell; anything else is left alone.
    void mark(int r, int c) {
        if (at(r, c) == kEmpty) place(r, c, kMarker);
    }

    std::size_t checkpoint() const { return log_.size(); }

    void rollback(std::size_t cp) {
        while (log_.size() > cp) {
            auto [i, old] = log_.back();
            log_.pop_back();
            write(static_cast<int>(i) / kStride, static_cast<int>(i) % kStride, old);
        }
    }

    void swap_sigma(int a, int b) { std::swap(sigma_[idx(a)], sigma_[idx(b)]); }

    bool pigeonhole() const {
        for (int i = 0; i < n; ++i)
            if (row_filled_[idx(i)] >= n - 1 || col_filled_[idx(i)] >= n - 1) return true;
        return false;
    }

    bool identity() const {
        for (int i = 0; i < n; ++i)
            if (sigma_[idx(i)] != i) return false;
        return true;
    }

    // Largest symbol occurring at least twice, or -1.
    int largest_duplicate() const {
        for (int s = pool - 1; s >= 0; --s)
            if (sym_count_[idx(s)] >= 2) return s;
        return -1;
    }

    // FillCell's branch set at (r, c): 0..min(k+1, n-3) with k the largest
    // duplicated symbol, minus the symbols already in row r or column c.
    Mask candidates(int r, int c) const {
        const int top = std::min(largest_duplicate() + 1, pool - 1);
        return (bit(top + 1) - 1) & ~blocked(r, c);
    }

    int count_empty_top_left() const {
        int empty = 0;
        for (int r = 0; r < pool; ++r)
            for (int c = 0; c < pool; ++c)
                if (at(r, c) == kEmpty) ++empty;
        return empty;
    }

    PartialLatinArray to_array() const {
        PartialLatinArray a(n, n, pool);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                std::int8_t v = at(r, c);
                if (v == kMarker)
                    a.set(r, c, Cell::marker());
                else if (v >= 0)
                    a.set(r, c, Cell::symbol(v));
            }
        return a;
    }

    DiagonalPerm to_sigma() const {
        std::vector<int> s(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) s[idx(r)] = sigma_[idx(r)];
        return DiagonalPerm(std::move(s));
    }

    std::uint64_t fingerprint() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        for (int r = 0; r < n; ++r) {
            mix(static_cast<std::uint8_t>(sigma_[idx(r)]));
            for (int c = 0; c < n; ++c) mix(static_cast<std::uint8_t>(at(r, c)));
        }
        return h;
    }

    void forget_history() { log_.clear(); }

    const int n;
    const int pool;

private:
    static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

    void write(int r, int c, std::int8_t v) {
        auto& cell = cells_[static_cast<std::size_t>(r * kStride + c)];
        if (cell >= 0) {
            row_mask_[idx(r)] &= ~bit(cell);
            col_mask_[idx(c)] &= ~bit(cell);
            --sym_count_[idx(cell)];
        }
        if (cell != kEmpty) {
            --row_filled_[idx(r)];
            --col_filled_[idx(c)];
        }
        cell = v;
        if (v >= 0) {
            row_mask_[idx(r)] |= bit(v);
            col_mask_[idx(c)] |= bit(v);
            ++sym_count_[idx(v)];
        }
        if (v != kEmpty) {
            ++row_filled_[idx(r)];
            ++col_filled_[idx(c)];
        }
    }

    std::array<std::int8_t, kStride * kStride> cells_{};
    std::array<std::int8_t, kStride> sigma_{};
    std::array<Mask, kStride> row_mask_{};
    std::array<Mask, kStride> col_mask_{};
    std::array<std::uint8_t, kStride> row_filled_{};
    std::array<std::uint8_t, kStride> col_filled_{};
    std::array<std::uint16_t, kStride> sym_count_{};
    std::vector<std::pair<std::uint16_t, std::int8_t>> log_;
};

// A pending Hash entry, handed to a worker in parallel mode.
struct Task {
    Board board;
    int d;
    int r0;
    int r1;
    std::uint64_t depth;
    bool swept;
};

class Engine {
public:
    Engine(Board board, const SearchOptions& options, SearchStats& stats)
        : b_(std::move(board)), opt_(options), stats_(stats) {}

    bool naive(int d, int r) {
        DepthGuard guard(*this);
        if (opt_.check_invariants) check_phase(0, r);
        if (b_.pigeonhole()) return true_leaf();
        if (d != 0 && b_.identity() && r == 3) return false_leaf();

        const int partner = find_partner(b_.diag(r), 0, r);
        const std::size_t cp = b_.checkpoint();
        b_.swap_sigma(0, partner);
        b_.mark(0, b_.col_of(0));
        const int c = b_.col_of(partner);
        bool ok;
        if (b_.at(partner, c) >= 0)
            ok = naive(d + 1, partner);
        else
            ok = branch(partner, c, false, [&] { return naive(d + 1, partner); },
                        [&] { return Task{b_, d + 1, 0, partner, depth_, swept_}; });
        b_.rollback(cp);
        b_.swap_sigma(0, partner);
        return ok;
    }

    bool hash(int d, int r0, int r1) {
        DepthGuard guard(*this);
        if (opt_.check_invariants) check_phase(r0, r1);
        if (b_.pigeonhole()) return true_leaf();
        if (opt_.square_prune && b_.count_empty_top_left() < 2 * b_.pool - 4) {
            ++stats_.pruned_leaves;
            return true;
        }
        if (d != 0 && b_.identity() && r0 + r1 == 3) {
            if (r0 >= 3) return false_leaf();
            ++stats_.cycle_backs_at[static_cast<std::size_t>(r0)];
            return hash(0, r0 + 1, r1 - 1);
        }

        if (!opt_.swap_only && d % 4 == 3) {
            int best_r = -1, best_c = -1, best_lib = 1 << 20;
            for (int r = 0; r < b_.n; ++r)
                for (int c = 0; c < b_.n; ++c) {
                    if (b_.at(r, c) != kMarker) continue;
                    const int lib = std::popcount(b_.pool_mask() & ~b_.blocked(r, c));
                    if (lib < best_lib) {
                        best_lib = lib;
                        best_r = r;
                        best_c = c;
                    }
                }
            if (best_r >= 0) return fill(best_r, best_c, d, r0, r1);
        }

        const int partner = find_partner(b_.diag(r1), r0, r1);
        const std::size_t cp = b_.checkpoint();
        b_.swap_sigma(r0, partner);
        b_.mark(r0, b_.col_of(r0));
        const bool ok = fill(partner, b_.col_of(partner), d, r0, partner);
        b_.rollback(cp);
        b_.swap_sigma(r0, partner);
        return ok;
    }

    bool fill(int r, int c, int d, int r0, int r1) {
        if (b_.at(r, c) >= 0) return hash(d + 1, r0, r1);
        return branch(r, c, !opt_.swap_only, [&] { return hash(d + 1, r0, r1); },
                      [&] { return Task{b_, d + 1, r0, r1, depth_, swept_}; });
    }

    void collect_tasks_at(int level) {
        collecting_ = true;
        split_level_ = level;
    }

    std::vector<Task>& tasks() { return tasks_; }
    std::vector<SearchFailure>& failures() { return failures_; }
    void set_depth(std::uint64_t depth) { depth_ = depth; }
    void set_swept(bool swept) { swept_ = swept; }

private:
    struct DepthGuard {
        explicit DepthGuard(Engine& e) : e(e) {
            ++e.depth_;
            ++e.stats_.nodes;
            e.stats_.max_depth = std::max(e.stats_.max_depth, e.depth_);
            if (e.opt_.progress && e.opt_.progress_interval && e.stats_.nodes % e.opt_.progress_interval == 0)
                e.opt_.progress(e.stats_);
        }
        ~DepthGuard() { --e.depth_; }
        Engine& e;
    };

    bool true_leaf() {
        if (opt_.check_invariants) check_pigeonhole();
        ++stats_.true_leaves;
        return true;
    }

    bool false_leaf() {
        ++stats_.false_leaves;
        failures_.push_back({b_.to_array(), b_.to_sigma()});
        return false;
    }

    // Tries every symbol in the branch set at (r, c).
    template <class Next, class MakeTask>
    bool branch(int r, int c, bool mark, Next next, MakeTask make_task) {
        const Mask candidates = b_.candidates(r, c);
        const bool split = collecting_ && branch_level_ == split_level_;
        ++branch_level_;
        bool ok = true;
        for (int s = 0; s < b_.pool; ++s) {
            if (!(candidates & bit(s))) continue;
            const std::uint64_t before = opt_.check_invariants ? b_.fingerprint() : 0;
            const std::size_t cp = b_.checkpoint();
            b_.place(r, c, static_cast<std::int8_t>(s));
            // FillCell marks the corners of every partial transversal of
            // length n-2. Those not through (r, c) were marked by an earlier
            // fill on this path, except the ones already present at the root.
            const bool sweep = mark && !swept_;
            if (sweep) {
                mark_corners_all();
                swept_ = true;
            } else if (mark) {
                mark_corners_through(r, c);
            }
            if (split) {
                tasks_.push_back(make_task());
                tasks_.back().board.forget_history();
            } else {
                ok = next() && ok;
            }
            b_.rollback(cp);
            if (sweep) swept_ = false;
            if (opt_.check_invariants && b_.fingerprint() != before)
                throw std::logic_error("backtracking did not restore the array");
        }
        --branch_level_;
        return ok;
    }

    // Rows other than ex1/ex2 whose diagonal cell holds `s`; the phase
    // invariant makes the answer unique.
    int find_partner(int s, int ex1, int ex2) const {
        int found = -1;
        for (int i = 0; i < b_.n; ++i) {
            if (i == ex1 || i == ex2 || b_.diag(i) != s) continue;
            if (found >= 0) throw std::logic_error("#-swap partner is not unique");
            found = i;
            if (!opt_.check_invariants) break;
        }
        if (found < 0) throw std::logic_error("#-swap partner not found");
        return found;
    }

    // Every partial transversal of length n-2 through the concrete cell (r, c)
    // uses each pool symbol once; the corners of the two missed rows and
    // columns must then hold pool symbols.
    void mark_corners_through(int r, int c) { mark_corners_from(r, c); }
    void mark_corners_all() { mark_corners_from(-1, -1); }

    // r < 0 enumerates every partial transversal of length n-2.
    void mark_corners_from(int r, int c) {
        const int s0 = r >= 0 ? b_.at(r, c) : -1;
        std::array<std::array<std::int8_t, kStride>, kStride> row_of{}, col_of{};
        std::array<int, kStride> count{};
        for (int i = 0; i < b_.n; ++i)
            for (int j = 0; j < b_.n; ++j) {
                const int v = b_.at(i, j);
                if (v < 0 || v == s0) continue;
                auto k = static_cast<std::size_t>(count[static_cast<std::size_t>(v)]++);
                row_of[static_cast<std::size_t>(v)][k] = static_cast<std::int8_t>(i);
                col_of[static_cast<std::size_t>(v)][k] = static_cast<std::int8_t>(j);
            }
        std::array<int, kStride> order{};
        int m = 0;
        for (int v = 0; v < b_.pool; ++v) {
            if (v == s0) continue;
            if (count[static_cast<std::size_t>(v)] == 0) return;
            order[static_cast<std::size_t>(m++)] = v;
        }
        std::sort(order.begin(), order.begin() + m, [&](int x, int y) {
            const int cx = count[static_cast<std::size_t>(x)], cy = count[static_cast<std::size_t>(y)];
            return cx != cy ? cx < cy : x < y;
        });
        const Mask all = bit(b_.n) - 1;
        auto descend = [&](auto&& self, int level, Mask rows, Mask cols) -> void {
            if (level == m) {
                const Mask fr = all & ~rows, fc = all & ~cols;
                const int ra = std::countr_zero(fr), rb = 31 - std::countl_zero(fr);
                const int ca = std::countr_zero(fc), cb = 31 - std::countl_zero(fc);
                b_.mark(ra, ca);
                b_.mark(ra, cb);
                b_.mark(rb, ca);
                b_.mark(rb, cb);
                return;
            }
            const auto v = static_cast<std::size_t>(order[static_cast<std::size_t>(level)]);
            for (int k = 0; k < count[v]; ++k) {
                const int i = row_of[v][static_cast<std::size_t>(k)];
                const int j = col_of[v][static_cast<std::size_t>(k)];
                if ((rows & bit(i)) || (cols & bit(j))) continue;
                self(self, level + 1, rows | bit(i), cols | bit(j));
            }
        };
        descend(descend, 0, r >= 0 ? bit(r) : 0, r >= 0 ? bit(c) : 0);
    }

    void check_phase(int r0, int r1) const {
        Mask cols = 0;
        std::array<int, kStride> count{};
        for (int i = 0; i < b_.n; ++i) {
            cols |= bit(b_.col_of(i));
            if (i == r0) continue;
            const int v = b_.diag(i);
            if (v < 0) throw std::logic_error("phase invariant: diagonal cell off the anchor row is not concrete");
            ++count[static_cast<std::size_t>(v)];
        }
        if (cols != bit(b_.n) - 1) throw std::logic_error("phase invariant: sigma is not a permutation");
        if (r1 == r0) throw std::logic_error("phase invariant: r1 equals r0");
        int duplicated = -1;
        for (int v = 0; v < b_.pool; ++v) {
            const int k = count[static_cast<std::size_t>(v)];
            if (k == 0) throw std::logic_error("phase invariant: diagonal misses a pool symbol");
            if (k == 2) duplicated = v;
        }
        if (duplicated != b_.diag(r1)) throw std::logic_error("phase invariant: duplicate is not at row r1");
    }

    void check_pigeonhole() const {
        for (int i = 0; i < b_.n; ++i)
            for (int j = 0; j < b_.n; ++j)
                if (b_.at(i, j) >= b_.pool) throw std::logic_error("cell outside the pool");
    }

    Board b_;
    const SearchOptions& opt_;
    SearchStats& stats_;
    std::uint64_t depth_ = 0;
    bool collecting_ = false;
    int split_level_ = 0;
    int branch_level_ = 0;
    bool swept_ = false;
    std::vector<Task> tasks_;
    std::vector<SearchFailure> failures_;
};

void sort_failures(std::vector<SearchFailure>& failures) {
    std::vector<std::pair<std::string, std::size_t>> keys;
    keys.reserve(failures.size());
    for (std::size_t i = 0; i < failures.size(); ++i) {
        std::string key = serialize_array(failures[i].array);
        for (int c : failures[i].sigma.columns()) key += ' ' + std::to_string(c);
        keys.emplace_back(std::move(key), i);
    }
    std::sort(keys.begin(), keys.end());
    std::vector<SearchFailure> sorted;
    sorted.reserve(failures.size());
    for (const auto& k : keys) sorted.push_back(std::move(failures[k.second]));
    failures = std::move(sorted);
}

// Runs `root` sequentially, or with the top `split_level` branching levels
// sequential and the remaining subtrees spread over worker threads. Stats and
// the sorted failure list are the same either way.
template <class Root, class Resume>
SearchVerdict drive(Board board, SearchStats& stats, const SearchOptions& options, Root root, Resume resume) {
    SearchVerdict verdict;
    Engine engine(std::move(board), options, stats);
    if (options.parallel <= 1) {
        verdict.proved = root(engine);
        verdict.failures = std::move(engine.failures());
        sort_failures(verdict.failures);
        return verdict;
    }

    engine.collect_tasks_at(std::max(0, options.split_level));
    verdict.proved = root(engine);
    verdict.failures = std::move(engine.failures());
    std::vector<Task> tasks = std::move(engine.tasks());

    struct Outcome {
        bool proved = true;
        SearchStats stats;
        std::vector<SearchFailure> failures;
    };
    std::vector<Outcome> outcomes(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            Engine e(tasks[i].board, options, outcomes[i].stats);
            e.set_depth(tasks[i].depth);
            e.set_swept(tasks[i].swept);
            outcomes[i].proved = resume(e, tasks[i]);
            outcomes[i].failures = std::move(e.failures());
        }
    };
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < options.parallel; ++t) pool.emplace_back(worker);
    }
    for (auto& o : outcomes) {
        verdict.proved = verdict.proved && o.proved;
        stats.merge(o.stats);
        for (auto& f : o.failures) verdict.failures.push_back(std::move(f));
    }
    sort_failures(verdict.failures);
    return verdict;
}

}  // namespace

std::pair<PartialLatinArray, DiagonalPerm> seed_array(int n) {
    if (n < 4) throw std::invalid_argument("seed order must be at least 4");
    PartialLatinArray a(n, n, n - 2);
    a.set(0, 0, Cell::symbol(0));
    a.set(1, 1, Cell::symbol(0));
    for (int i = 2; i < n; ++i) a.set(i, i, Cell::symbol(i == 2 ? 1 : i - 2));
    return {std::move(a), DiagonalPerm::identity(n)};
}

void hash_swap(SearchFrame& f, int row) {
    if (row == f.r0) throw std::invalid_argument("cannot #-swap the anchor row with itself");
    f.sigma.swap_rows(f.r0, row);
    if (f.array.at(f.r0, f.sigma[f.r0]).is_empty()) f.array.set(f.r0, f.sigma[f.r0], Cell::marker());
}

SearchVerdict naive_hash(const SearchFrame& f, int r, SearchStats& stats, const SearchOptions& options) {
    return drive(
        Board(f.array, f.sigma), stats, options, [&](Engine& e) { return e.naive(f.depth, r); },
        [](Engine& e, const Task& t) { return e.naive(t.d, t.r1); });
}

SearchVerdict advanced_hash(const SearchFrame& f, SearchStats& stats, const SearchOptions& options) {
    return drive(
        Board(f.array, f.sigma), stats, options, [&](Engine& e) { return e.hash(f.depth, f.r0, f.r1); },
        [](Engine& e, const Task& t) { return e.hash(t.d, t.r0, t.r1); });
}

SearchVerdict fill_cell(const SearchFrame& f, int r, int c, SearchStats& stats, const SearchOptions& options) {
    return drive(
        Board(f.array, f.sigma), stats, options, [&](Engine& e) { return e.fill(r, c, f.depth, f.r0, f.r1); },
        [](Engine& e, const Task& t) { return e.hash(t.d, t.r0, t.r1); });
}

std::vector<Symbol> branch_symbols(const PartialLatinArray& a, int r, int c) {
    const Board board(a, DiagonalPerm::identity(a.rows()));
    const Mask candidates = board.candidates(r, c);
    std::vector<Symbol> out;
    for (int s = 0; s < board.pool; ++s)
        if (candidates & bit(s)) out.push_back(s);
    return out;
}

void mark_corners(PartialLatinArray& a, const PartialTransversal& t) {
    if (!a.is_square() || t.length() != a.rows() - 2)
        throw std::invalid_argument("corner marking needs a partial transversal of length n-2");
    std::vector<char> row_used(static_cast<std::size_t>(a.rows()), 0), col_used(row_used);
    for (const auto& e : t.entries) {
        row_used.at(static_cast<std::size_t>(e.row)) = 1;
        col_used.at(static_cast<std::size_t>(e.col)) = 1;
    }
    for (int r = 0; r < a.rows(); ++r) {
        if (row_used[static_cast<std::size_t>(r)]) continue;
        for (int c = 0; c < a.cols(); ++c)
            if (!col_used[static_cast<std::size_t>(c)] && a.at(r, c).is_empty()) a.set(r, c, Cell::marker());
    }
}

bool latin_square_prune(const PartialLatinArray& a) {
    if (!a.is_square() || a.rows() < 4) throw std::invalid_argument("square-prune needs a square array of order >= 4");
    const int block = a.rows() - 2;
    int empty = 0;
    for (int r = 0; r < block; ++r)
        for (int c = 0; c < block; ++c)
            if (a.at(r, c).is_empty()) ++empty;
    return empty < 2 * block - 4;
}

OrderReport verify_order(int n, Algorithm algorithm, const SearchOptions& options) {
    OrderReport report;
    report.order = n;
    report.algorithm = algorithm;
    report.options = options;
    report.chain_assumption = "every Latin array of order " + std::to_string(n - 1) +
                              " has a near transversal, so order " + std::to_string(n) +
                              " has a diagonal of weight n-2";
    auto [array, sigma] = seed_array(n);
    const auto start = std::chrono::steady_clock::now();
    SearchVerdict verdict;
    if (algorithm == Algorithm::Naive) {
        verdict = naive_hash(SearchFrame{array, sigma, 0, 0, 3}, 3, report.stats, options);
    } else {
        verdict = advanced_hash(SearchFrame{array, sigma, 0, 0, 3}, report.stats, options);
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.proved = verdict.proved;
    report.failures = std::move(verdict.failures);
    return report;
}

}  // namespace nearsearch
