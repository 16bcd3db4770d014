#include "nearsearch/bounds.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace nearsearch::bounds {

namespace {

using Wide = __int128;

// n is indexed by k; entries below the first index are unused.
bool gap_ok(std::span<const Value> n, int k) { return n[static_cast<std::size_t>(k)] >= n[static_cast<std::size_t>(k - 1)] + 2 * k; }

bool quadratic_ok(std::span<const Value> n, int j, int k) {
    const Wide nk = n[static_cast<std::size_t>(k)];
    const Wide nk1 = n[static_cast<std::size_t>(k - 1)];
    const Wide nj = n[static_cast<std::size_t>(j)];
    const Wide nj1 = n[static_cast<std::size_t>(j - 1)];
    return (nk - nj) * (2 * nj + nk1 - 2 * nk + 2 * k - j) <= nj * (nj - nj1 - 2 * j);
}

// Constraints that become checkable once n_k is known, restricted to a
// sequence that starts at index `first`.
bool extension_ok(std::span<const Value> n, int first, int k) {
    if (k > first && !gap_ok(n, k)) return false;
    for (int j = std::max(3, first + 1); j < k; ++j)
        if (!quadratic_ok(n, j, k)) return false;
    return true;
}

std::string join(std::span<const Value> v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

}  // namespace

SequenceCheck check_sequence(const BoundSequence& s, Value n2_min) {
    SequenceCheck out;
    if (s.values.empty()) return out;
    std::vector<Value> n(s.values.size() + 2, 0);
    std::copy(s.values.begin(), s.values.end(), n.begin() + 2);
    if (n[2] < n2_min) return {false, Rule::MinStart, 0, 2};
    for (int k = 3; k <= s.last_k(); ++k) {
        if (!gap_ok(n, k)) return {false, Rule::Gap, 0, k};
        for (int j = 3; j < k; ++j)
            if (!quadratic_ok(n, j, k)) return {false, Rule::Quadratic, j, k};
    }
    return out;
}

std::string describe(const SequenceCheck& c) {
    switch (c.rule) {
        case Rule::None: return "valid";
        case Rule::MinStart: return "n_2 below the minimum";
        case Rule::Gap: return "n_" + std::to_string(c.k) + " < n_" + std::to_string(c.k - 1) + " + " + std::to_string(2 * c.k);
        case Rule::Quadratic:
            return "quadratic inequality fails at (j,k) = (" + std::to_string(c.j) + "," + std::to_string(c.k) + ")";
    }
    return "unknown";
}

ViabilityTable::ViabilityTable(int max_index) : levels_(static_cast<std::size_t>(max_index) + 1) {}

ViabilityTable::Level& ViabilityTable::level(int index) { return levels_.at(static_cast<std::size_t>(index)); }
const ViabilityTable::Level& ViabilityTable::level(int index) const { return levels_.at(static_cast<std::size_t>(index)); }

void ViabilityTable::open(int index, Value lo, Value hi) {
    Level& l = level(index);
    if (l.opened) throw std::logic_error("viability level opened twice");
    l.opened = true;
    l.lo = lo;
    const auto size = hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0;
    l.alive.assign(size, 1);
    l.dead.assign(size, 0);
}

void ViabilityTable::falsify(int index, Value value) {
    Level& l = level(index);
    if (value < l.lo || value - l.lo >= static_cast<Value>(l.alive.size())) return;
    const auto i = static_cast<std::size_t>(value - l.lo);
    l.alive[i] = 0;
    l.dead[i] = 1;
}

void ViabilityTable::mark_viable(int index, Value value) {
    Level& l = level(index);
    if (value < l.lo || value - l.lo >= static_cast<Value>(l.alive.size()))
        throw std::out_of_range("pair outside the opened range");
    const auto i = static_cast<std::size_t>(value - l.lo);
    if (l.dead[i]) throw std::logic_error("attempt to revive a falsified pair");
    l.alive[i] = 1;
}

bool ViabilityTable::viable(int index, Value value) const {
    const Level& l = level(index);
    if (value < l.lo || value - l.lo >= static_cast<Value>(l.alive.size())) return false;
    return l.alive[static_cast<std::size_t>(value - l.lo)] != 0;
}

bool ViabilityTable::any(int index) const {
    const Level& l = level(index);
    return std::find(l.alive.begin(), l.alive.end(), 1) != l.alive.end();
}

std::optional<Value> ViabilityTable::max_viable(int index) const {
    const Level& l = level(index);
    for (std::size_t i = l.alive.size(); i-- > 0;)
        if (l.alive[i]) return l.lo + static_cast<Value>(i);
    return std::nullopt;
}

std::vector<Value> ViabilityTable::viable_values(int index) const {
    const Level& l = level(index);
    std::vector<Value> out;
    for (std::size_t i = 0; i < l.alive.size(); ++i)
        if (l.alive[i]) out.push_back(l.lo + static_cast<Value>(i));
    return out;
}

std::size_t ViabilityTable::viable_count(int index) const {
    const Level& l = level(index);
    return static_cast<std::size_t>(std::count(l.alive.begin(), l.alive.end(), 1));
}

namespace {

// Depth-first search for [t_first = start, ..., t_k] using viable pairs only.
class WitnessSearch {
public:
    WitnessSearch(const ViabilityTable& table, int k) : table_(table), k_(k), n_(static_cast<std::size_t>(k) + 1, 0) {
        top_.resize(static_cast<std::size_t>(k) + 2);
        for (int x = 2; x <= k; ++x) top_[static_cast<std::size_t>(x)] = table.max_viable(x);
    }

    std::optional<std::vector<Value>> find(int first, Value start) {
        first_ = first;
        n_[static_cast<std::size_t>(first)] = start;
        if (!descend(first + 1)) return std::nullopt;
        return std::vector<Value>(n_.begin() + first, n_.end());
    }

private:
    bool descend(int x) {
        if (x > k_) return true;
        const auto& top = top_[static_cast<std::size_t>(x)];
        if (!top) return false;
        Value hi = *top;
        if (x < k_) {
            const auto& next = top_[static_cast<std::size_t>(x) + 1];
            if (!next) return false;
            hi = std::min(hi, *next - 2 * (x + 1));
        }
        auto& slot = n_[static_cast<std::size_t>(x)];
        for (Value y = n_[static_cast<std::size_t>(x) - 1] + 2 * x; y <= hi; ++y) {
            if (!table_.viable(x, y)) continue;
            slot = y;
            if (!extension_ok(n_, first_, x)) continue;
            if (descend(x + 1)) return true;
        }
        return false;
    }

    const ViabilityTable& table_;
    int k_;
    int first_ = 2;
    std::vector<Value> n_;
    std::vector<std::optional<Value>> top_;
};

}  // namespace

MinimizeResult minimize_nk(int max_k, const MinimizeOptions& options) {
    if (max_k < 2) throw std::invalid_argument("max_k must be at least 2");
    MinimizeResult result;
    std::vector<Value> mins(static_cast<std::size_t>(max_k) + 1, 0);
    mins[2] = options.n2;
    std::vector<Value> champion{options.n2};
    result.levels.push_back({2, options.n2, BoundSequence{champion}});
    result.log.push_back("k=2: n_2 = " + std::to_string(options.n2) + " by assumption");
    if (options.on_level) options.on_level(result.levels.back());

    for (int k = 3; k <= max_k; ++k) {
        // Greedy: extend the previous champion by the smallest valid value.
        std::vector<Value> n(static_cast<std::size_t>(k) + 1, 0);
        std::copy(champion.begin(), champion.end(), n.begin() + 2);
        Value& last = n[static_cast<std::size_t>(k)];
        for (last = n[static_cast<std::size_t>(k) - 1] + 2 * k; !extension_ok(n, 2, k); ++last) {
        }
        champion.assign(n.begin() + 2, n.end());
        Value kappa = last;
        result.log.push_back("k=" + std::to_string(k) + ": greedy champion " + join(champion));

        // Initial viable ranges, propagated downwards through the gap rule.
        ViabilityTable table(k);
        table.open(2, options.n2, options.n2);
        table.open(k, mins[static_cast<std::size_t>(k) - 1] + 2 * k, kappa - 1);
        for (int i = k - 1; i >= 3; --i) {
            const auto above = table.max_viable(i + 1);
            table.open(i, mins[static_cast<std::size_t>(i)], above ? *above - 2 * (i + 1) : mins[static_cast<std::size_t>(i)] - 1);
        }

        for (int round = 1;; ++round) {
            std::optional<std::vector<Value>> improvement;
            for (int i = k - 1; i >= 2; --i) {
                std::size_t refuted = 0;
                for (Value j : table.viable_values(i)) {
                    auto w = WitnessSearch(table, k).find(i, j);
                    if (!w) {
                        table.falsify(i, j);
                        ++refuted;
                    } else if (i == 2) {
                        improvement = std::move(w);
                    }
                }
                if (refuted)
                    result.log.push_back("k=" + std::to_string(k) + " round " + std::to_string(round) + ": index " +
                                         std::to_string(i) + " refuted " + std::to_string(refuted) + ", " +
                                         std::to_string(table.viable_count(i)) + " viable");
            }
            int exhausted = 0;
            for (int i = 2; i <= k && !exhausted; ++i)
                if (!table.any(i)) exhausted = i;
            if (exhausted) {
                result.log.push_back("k=" + std::to_string(k) + ": no viable pair at index " + std::to_string(exhausted) +
                                     "; n_" + std::to_string(k) + " = " + std::to_string(kappa) + " is minimal");
                break;
            }
            if (!improvement) throw std::logic_error("viable start without a witness");
            champion = std::move(*improvement);
            kappa = champion.back();
            result.log.push_back("k=" + std::to_string(k) + ": improved champion " + join(champion));
            for (Value y = kappa; y <= *table.max_viable(k); ++y) table.falsify(k, y);
        }
        mins[static_cast<std::size_t>(k)] = kappa;
        result.levels.push_back({k, kappa, BoundSequence{champion}});
        if (options.on_level) options.on_level(result.levels.back());
    }
    return result;
}

namespace {

// Plain enumeration used as an oracle for minimize_nk; it re-states the
// constraints instead of reusing the helpers above.
class Exhaustive {
public:
    explicit Exhaustive(int k) : k_(k), n_(static_cast<std::size_t>(k) + 1, 0) {}

    static bool valid_at(const std::vector<Value>& n, int k) {
        if (k == 2) return n[2] >= kDefaultN2;
        if (n[static_cast<std::size_t>(k)] < n[static_cast<std::size_t>(k - 1)] + 2 * k) return false;
        for (int j = 3; j < k; ++j) {
            const Value nk = n[static_cast<std::size_t>(k)], nk1 = n[static_cast<std::size_t>(k - 1)];
            const Value nj = n[static_cast<std::size_t>(j)], nj1 = n[static_cast<std::size_t>(j - 1)];
            if ((nk - nj) * (2 * nj + nk1 - 2 * nk + 2 * k - j) > nj * (nj - nj1 - 2 * j)) return false;
        }
        return true;
    }

    // Greedy completion of a valid prefix up to index k.
    static Value greedy_last(std::vector<Value> prefix, int k) {
        std::vector<Value> n(2, 0);
        n.insert(n.end(), prefix.begin(), prefix.end());
        while (static_cast<int>(n.size()) <= k) {
            const int x = static_cast<int>(n.size());
            n.push_back(n.back() + 2 * x);
            while (!valid_at(n, x)) ++n.back();
        }
        return n.back();
    }

    // Visits every valid sequence n_2..n_k extending `prefix` with n_k <= cap.
    template <class Visit>
    void each(const std::vector<Value>& prefix, Value n2_hi, Value cap, Visit visit) {
        cap_ = cap;
        for (std::size_t i = 0; i < prefix.size(); ++i) n_[i + 2] = prefix[i];
        const int start = static_cast<int>(prefix.size()) + 2;
        for (int x = 2; x < start; ++x)
            if (!valid_at(n_, x)) return;
        if (start == 2) {
            for (Value v = kDefaultN2; v <= n2_hi; ++v) {
                n_[2] = v;
                walk(3, visit);
            }
        } else {
            walk(start, visit);
        }
    }

private:
    // Largest n_x that still leaves room for the gaps up to k below cap.
    Value ceiling(int x) const {
        Value c = cap_;
        for (int y = x + 1; y <= k_; ++y) c -= 2 * y;
        return c;
    }

    template <class Visit>
    void walk(int x, Visit& visit) {
        if (x > k_) {
            visit(n_);
            return;
        }
        for (Value v = n_[static_cast<std::size_t>(x - 1)] + 2 * x; v <= ceiling(x); ++v) {
            n_[static_cast<std::size_t>(x)] = v;
            if (valid_at(n_, x)) walk(x + 1, visit);
        }
    }

    int k_;
    Value cap_ = 0;
    std::vector<Value> n_;
};

}  // namespace

std::vector<Value> brute_force_min_nk(int max_k) {
    if (max_k < 2 || max_k > 6) throw std::invalid_argument("brute force is limited to 2 <= max_k <= 6");
    std::vector<Value> out;
    for (int k = 2; k <= max_k; ++k) {
        const Value cap = Exhaustive::greedy_last({kDefaultN2}, k);
        Value n2_hi = cap;
        for (int y = 3; y <= k; ++y) n2_hi -= 2 * y;
        Value best = cap;
        Exhaustive(k).each({}, n2_hi, cap,
                           [&](const std::vector<Value>& n) { best = std::min(best, n[static_cast<std::size_t>(k)]); });
        out.push_back(best);
    }
    return out;
}

std::optional<Value> brute_force_min_last(const std::vector<Value>& prefix, int max_k) {
    if (prefix.empty() || static_cast<int>(prefix.size()) + 1 > max_k)
        throw std::invalid_argument("prefix must be nonempty and shorter than the target");
    std::vector<Value> n(2, 0);
    n.insert(n.end(), prefix.begin(), prefix.end());
    for (int x = 2; x < static_cast<int>(n.size()); ++x)
        if (!Exhaustive::valid_at(n, x)) return std::nullopt;
    const Value cap = Exhaustive::greedy_last(prefix, max_k);
    Value best = cap;
    Exhaustive(max_k).each(prefix, 0, cap,
                           [&](const std::vector<Value>& s) { best = std::min(best, s[static_cast<std::size_t>(max_k)]); });
    return best;
}

std::vector<BoundSequence> brute_force_minimizers(int max_k, Value n2) {
    const auto best = brute_force_min_last({n2}, max_k);
    if (!best) return {};
    std::vector<BoundSequence> out;
    Exhaustive(max_k).each({n2}, 0, *best, [&](const std::vector<Value>& s) {
        if (s[static_cast<std::size_t>(max_k)] == *best) out.push_back(BoundSequence{{s.begin() + 2, s.end()}});
    });
    return out;
}

std::span<const Value> shipped_table() {
    static constexpr std::array<Value, 20> table{11,  17,  28,  41,  58,  78,  107, 140,  177,  226,
                                                 283, 346, 436, 525, 626, 736, 887, 1043, 1234, 1449};
    return table;
}

std::string to_string(GuaranteeRule rule) {
    switch (rule) {
        case GuaranteeRule::SmallOrder: return "small-order";
        case GuaranteeRule::BoundTable: return "bound-table";
        case GuaranteeRule::SqrtBound: return "sqrt-bound";
    }
    return "unknown";
}

Guarantee guarantee_length(Value n, std::span<const Value> table) {
    if (n < 1) throw std::invalid_argument("order must be positive");
    Value root = 0;
    while ((root + 1) * (root + 1) <= n) ++root;
    Guarantee best{n - root, GuaranteeRule::SqrtBound, 0};
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i] > n) {
            const int k = static_cast<int>(i) + 2;
            if (n - k + 1 >= best.length) best = {n - k + 1, GuaranteeRule::BoundTable, k};
            break;
        }
    }
    if (n <= 11 && n - 1 >= best.length) best = {n - 1, GuaranteeRule::SmallOrder, 0};
    return best;
}

Guarantee guarantee_length(Value n) { return guarantee_length(n, shipped_table()); }

}  // namespace nearsearch::bounds
