#include <random>
#include <stdexcept>

#include "doctest.h"
#include "nearsearch/bounds.hpp"

using namespace nearsearch::bounds;

namespace {

// Direct transcription of the three constraints, indices as written.
bool satisfies(const std::vector<Value>& seq) {
    auto n = [&](int k) -> long double { return static_cast<long double>(seq[static_cast<std::size_t>(k - 2)]); };
    const int last = static_cast<int>(seq.size()) + 1;
    if (n(2) < 11) return false;
    for (int k = 3; k <= last; ++k) {
        if (n(k) < n(k - 1) + 2 * k) return false;
        for (int j = 3; j < k; ++j)
            if ((n(k) - n(j)) * (2 * n(j) + n(k - 1) - 2 * n(k) + 2 * k - j) > n(j) * (n(j) - n(j - 1) - 2 * j))
                return false;
    }
    return true;
}

const std::vector<std::vector<Value>> kWitnesses = {
    {11},
    {11, 17},
    {11, 17, 28},
    {11, 17, 31, 41},
    {11, 17, 28, 46, 58},
    {11, 17, 28, 42, 64, 78},
    {11, 17, 28, 42, 63, 90, 107},
    {11, 17, 28, 46, 58, 91, 122, 140},
    {11, 17, 28, 42, 64, 78, 122, 157, 177},
    {11, 17, 28, 42, 63, 90, 107, 165, 204, 226},
    {11, 17, 28, 46, 58, 91, 122, 140, 216, 259, 283},
    {11, 17, 28, 42, 64, 78, 122, 157, 177, 272, 320, 346},
    {11, 17, 28, 42, 64, 78, 122, 157, 177, 272, 356, 408, 436},
    {11, 17, 28, 42, 63, 90, 107, 165, 204, 226, 346, 439, 495, 525},
    {11, 17, 28, 46, 58, 91, 122, 140, 216, 259, 283, 432, 534, 594, 626},
    {11, 17, 28, 42, 64, 78, 122, 157, 177, 272, 320, 346, 527, 638, 702, 736},
    {11, 17, 28, 42, 64, 78, 122, 157, 177, 272, 356, 408, 436, 662, 783, 851, 887},
    {11, 17, 28, 42, 63, 90, 107, 165, 204, 226, 346, 439, 495, 525, 796, 933, 1005, 1043},
    {11, 17, 28, 46, 58, 91, 122, 140, 216, 259, 283, 432, 534, 594, 626, 948, 1110, 1192, 1234},
    {11, 17, 28, 42, 64, 78, 122, 157, 177, 272, 320, 346, 527, 638, 702, 736, 1114, 1304, 1400, 1449},
};

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("check_sequence on the published witnesses") {
    const auto table = shipped_table();
    REQUIRE(table.size() == kWitnesses.size());
    for (std::size_t i = 0; i < kWitnesses.size(); ++i) {
        const BoundSequence s{kWitnesses[i]};
        CHECK(check_sequence(s).ok);
        CHECK(satisfies(kWitnesses[i]));
        CHECK(s.values.back() == table[i]);
        CHECK(s.last_k() == static_cast<int>(i) + 2);
    }
}

TEST_CASE("check_sequence reports the first violation") {
    auto c = check_sequence(BoundSequence{{10}});
    CHECK_FALSE(c.ok);
    CHECK(c.rule == Rule::MinStart);
    CHECK(check_sequence(BoundSequence{{10}}, 10).ok);

    c = check_sequence(BoundSequence{{11, 16}});
    CHECK(c.rule == Rule::Gap);
    CHECK(c.k == 3);
    CHECK(describe(c) == "n_3 < n_2 + 6");

    // 11,17,25: gap fine (25 >= 25), quadratic at (3,4) fails.
    c = check_sequence(BoundSequence{{11, 17, 25}});
    CHECK(c.rule == Rule::Quadratic);
    CHECK(c.j == 3);
    CHECK(c.k == 4);
    CHECK_FALSE(satisfies({11, 17, 25}));
    CHECK(describe(check_sequence(BoundSequence{{11, 17, 28}})) == "valid");
}

TEST_CASE("check_sequence agrees with the direct transcription") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 5000; ++trial) {
        const int len = 1 + static_cast<int>(rng() % 6);
        std::vector<Value> s{static_cast<Value>(10 + rng() % 4)};
        for (int i = 1; i < len; ++i) s.push_back(s.back() + 2 * (i + 2) - 1 + static_cast<Value>(rng() % 25));
        CHECK(check_sequence(BoundSequence{s}).ok == satisfies(s));
    }
}

TEST_CASE("brute force minima") {
    CHECK(brute_force_min_nk(6) == std::vector<Value>{11, 17, 28, 41, 58});
    CHECK_THROWS_AS(brute_force_min_nk(7), std::invalid_argument);
}

TEST_CASE("forced prefix") {
    const auto forced = brute_force_min_last({11, 17, 28}, 5);
    REQUIRE(forced.has_value());
    CHECK(*forced > 41);
    const auto minimizers = brute_force_minimizers(5);
    REQUIRE_FALSE(minimizers.empty());
    for (const auto& s : minimizers) {
        CHECK(s.at(5) == 41);
        CHECK(s.at(4) == 31);
        CHECK(satisfies(s.values));
    }
    CHECK_FALSE(brute_force_min_last({11, 16}, 4).has_value());
}

TEST_CASE("minimize_nk") {
    std::vector<Value> seen;
    MinimizeOptions options;
    options.on_level = [&](const LevelResult& l) { seen.push_back(l.n_k); };
    const auto r = minimize_nk(10, options);
    const std::vector<Value> expected{11, 17, 28, 41, 58, 78, 107, 140, 177};
    REQUIRE(r.levels.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(r.levels[i].k == static_cast<int>(i) + 2);
        CHECK(r.levels[i].n_k == expected[i]);
        CHECK(r.levels[i].witness.values.back() == expected[i]);
        CHECK(satisfies(r.levels[i].witness.values));
    }
    CHECK(seen == expected);
    CHECK_FALSE(r.log.empty());
    CHECK_THROWS_AS(minimize_nk(1), std::invalid_argument);
}

TEST_CASE("viability table") {
    ViabilityTable t(4);
    t.open(3, 10, 20);
    CHECK(t.viable_count(3) == 11);
    CHECK(t.any(3));
    CHECK(t.max_viable(3) == 20);
    for (Value v = 10; v <= 20; ++v)
        if (v != 12 && v != 15) t.falsify(3, v);
    t.mark_viable(3, 12);
    CHECK(t.max_viable(3) == 15);
    t.falsify(3, 15);
    CHECK(t.viable_values(3) == std::vector<Value>{12});
    CHECK_FALSE(t.any(2));
    CHECK_THROWS_AS(t.mark_viable(3, 15), std::logic_error);
    CHECK_THROWS_AS(t.mark_viable(3, 21), std::out_of_range);
    CHECK_THROWS_AS(t.open(3, 0, 1), std::logic_error);
    t.falsify(3, 12);
    CHECK_FALSE(t.max_viable(3).has_value());
}

TEST_CASE("guarantee_length") {
    CHECK(guarantee_length(11).length == 10);
    CHECK(guarantee_length(11).rule == GuaranteeRule::SmallOrder);
    const auto g100 = guarantee_length(100);
    CHECK(g100.length == 93);
    CHECK(g100.rule == GuaranteeRule::BoundTable);
    CHECK(g100.k_star == 8);
    const auto g1448 = guarantee_length(1448);
    CHECK(g1448.length == 1428);
    CHECK(g1448.k_star == 21);
    CHECK(guarantee_length(1449).rule == GuaranteeRule::SqrtBound);
    CHECK(guarantee_length(1449).length == 1449 - 38);
    CHECK(to_string(GuaranteeRule::BoundTable) == "bound-table");
    CHECK_THROWS_AS(guarantee_length(0), std::invalid_argument);
}

TEST_CASE("guarantee_length properties") {
    Value previous = 0;
    for (Value n = 1; n <= 1448; ++n) {
        const auto g = guarantee_length(n);
        Value root = 0;
        while ((root + 1) * (root + 1) <= n) ++root;
        CHECK(g.length >= n - root);
        CHECK(g.length <= std::max<Value>(n - 1, 1));
        CHECK(g.length >= previous);
        previous = g.length;
    }
}

}  // TEST_SUITE
