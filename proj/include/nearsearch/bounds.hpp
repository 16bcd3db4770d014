#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nearsearch::bounds {

// Sequences [n_2, ..., n_K] constrained by
//   (A) n_2 >= 11
//   (B) n_k >= n_{k-1} + 2k                                     for k > 2
//   (C) (n_k - n_j)(2n_j + n_{k-1} - 2n_k + 2k - j) <= n_j(n_j - n_{j-1} - 2j)
//                                                               for 3 <= j < k
// Any Latin array of order n < n_k has a diagonal of weight > n - k.

using Value = std::int64_t;

inline constexpr Value kDefaultN2 = 11;

struct BoundSequence {
    // values[i] is n_{i+2}.
    std::vector<Value> values;

    int last_k() const { return static_cast<int>(values.size()) + 1; }
    Value at(int k) const { return values.at(static_cast<std::size_t>(k - 2)); }

    friend bool operator==(const BoundSequence&, const BoundSequence&) = default;
};

enum class Rule { None, MinStart, Gap, Quadratic };

struct SequenceCheck {
    bool ok = true;
    Rule rule = Rule::None;
    // Index pair of the first violation; j is 0 unless rule == Quadratic.
    int j = 0;
    int k = 0;
};

// Violations are searched prefix by prefix (k ascending; within k the gap
// rule, then the quadratic rule by ascending j), so the report names the
// shortest invalid prefix.
SequenceCheck check_sequence(const BoundSequence& s, Value n2_min = kDefaultN2);

std::string describe(const SequenceCheck& c);

// Viability of (index, value) pairs against the current champion. Pairs may
// only move from viable to dead; reviving a dead pair throws.
class ViabilityTable {
public:
    explicit ViabilityTable(int max_index);

    // Opens [lo, hi] at `index` as viable. Each index can be opened once.
    void open(int index, Value lo, Value hi);
    void falsify(int index, Value value);
    void mark_viable(int index, Value value);
    bool viable(int index, Value value) const;
    bool any(int index) const;
    // Largest viable value at `index`, if any.
    std::optional<Value> max_viable(int index) const;
    std::vector<Value> viable_values(int index) const;
    std::size_t viable_count(int index) const;

private:
    struct Level {
        bool opened = false;
        Value lo = 0;
        std::vector<char> alive;
        std::vector<char> dead;
    };
    Level& level(int index);
    const Level& level(int index) const;

    std::vector<Level> levels_;
};

struct LevelResult {
    int k = 0;
    Value n_k = 0;
    BoundSequence witness;
};

struct MinimizeResult {
    std::vector<LevelResult> levels;  // k = 2..K
    std::vector<std::string> log;
};

struct MinimizeOptions {
    Value n2 = kDefaultN2;
    // Called after each level is settled.
    std::function<void(const LevelResult&)> on_level;
};

// Smallest n_k for k = 2..max_k by greedy extension followed by viability
// sweeps: refute every pair that cannot start a sequence beating the
// champion, improve the champion when the full range admits a witness, and
// stop when some index has no viable pair left.
MinimizeResult minimize_nk(int max_k, const MinimizeOptions& options = {});

// Exhaustive minima of n_k for k = 2..max_k (max_k <= 6), n_2 ranging over
// [11, greedy bound]. Shares no code with minimize_nk.
std::vector<Value> brute_force_min_nk(int max_k);

// Minimal n_{max_k} over all valid extensions of `prefix` (which starts at
// n_2), or nullopt if the prefix itself is invalid.
std::optional<Value> brute_force_min_last(const std::vector<Value>& prefix, int max_k);

// Every sequence starting at n_2 = `n2` whose last value is the minimum n_{max_k}.
std::vector<BoundSequence> brute_force_minimizers(int max_k, Value n2 = kDefaultN2);

// Minimal n_k for k = 2..21. Values up to k = 15 are reproduced by minimize_nk.
std::span<const Value> shipped_table();

enum class GuaranteeRule { SmallOrder, BoundTable, SqrtBound };

std::string to_string(GuaranteeRule rule);

struct Guarantee {
    Value length = 0;
    GuaranteeRule rule = GuaranteeRule::SqrtBound;
    // k* = min{k : n_k > n} when the table rule applies, else 0.
    int k_star = 0;
};

// Best of: n-1 for n <= 11; n-k*+1 from the table; ceil(n - sqrt(n)).
// Ties go to the rule listed first. `table` holds n_2, n_3, ...
Guarantee guarantee_length(Value n, std::span<const Value> table);
Guarantee guarantee_length(Value n);

}  // namespace nearsearch::bounds
