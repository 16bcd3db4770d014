#include <map>
#include <random>

#include "doctest.h"
#include "nearsearch/constructions.hpp"
#include "nearsearch/oracle.hpp"
#include "support.hpp"

using namespace nearsearch;
using testing::from_rows;

namespace {

std::map<int, int> multiplicities(const PartialLatinArray& a, const DiagonalPerm& d) {
    std::map<int, int> m;
    for (int i = 0; i < a.rows(); ++i) ++m[a.at(i, d[i]).value()];
    return m;
}

void check_normalized(const PartialLatinArray& a, const DiagonalPerm& in, int preserve) {
    int iterations = -1;
    const DiagonalPerm out = normalize_diagonal(a, in, preserve, &iterations);
    CHECK(diagonal_weight(a, out) >= diagonal_weight(a, in));
    for (const auto& [symbol, count] : multiplicities(a, out)) CHECK(count <= 2);
    CHECK(out[preserve] == in[preserve]);
    CHECK(iterations >= 0);
    CHECK(iterations <= a.rows());
}

// A fully filled order-6 Latin array whose main diagonal reads `diag`.
PartialLatinArray with_diagonal(const std::vector<int>& diag) {
    const int n = static_cast<int>(diag.size());
    PartialLatinArray seed(n, n, 2 * n);
    for (int i = 0; i < n; ++i) seed.set(i, i, Cell::symbol(diag[static_cast<std::size_t>(i)]));
    auto full = testing::complete(seed, 2 * n, 2 * n);
    REQUIRE(full.has_value());
    return *full;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("max_diagonal_weight on small groups") {
    CHECK(max_diagonal_weight(testing::cyclic(2)).value == 1);

    const auto c3 = max_diagonal_weight(testing::cyclic(3));
    CHECK(c3.value == 3);
    const auto& w = std::get<DiagonalPerm>(c3.witness);
    CHECK(diagonal_weight(testing::cyclic(3), w) == 3);
    CHECK(w.is_identity());

    const auto c4 = testing::cyclic(4);
    CHECK(max_diagonal_weight(c4).value == testing::brute_max_weight(c4));
    CHECK(max_diagonal_weight(c4).value == 3);
}

TEST_CASE("max_partial_transversal_length") {
    CHECK(max_partial_transversal_length(testing::cyclic(2)).value == 1);

    const auto d = drisko(4, 6);
    const auto r = max_partial_transversal_length(d);
    CHECK(r.value == testing::brute_max_partial(d));
    CHECK(r.value == 3);
    const auto& t = std::get<PartialTransversal>(r.witness);
    CHECK(t.is_valid());
    CHECK(t.length() == 3);
    for (const auto& e : t.entries) CHECK(d.at(e.row, e.col).value() == e.symbol);
}

TEST_CASE("order-6 Latin arrays have a diagonal of weight at least 5") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = testing::random_latin_array(6, 6 + static_cast<int>(rng() % 6), rng);
        CHECK(max_diagonal_weight(a).value >= 5);
    }
}

TEST_CASE("random Latin arrays of order up to 11 have a near transversal") {
    std::mt19937 rng(23);
    OracleConfig config;
    config.max_order = 11;
    for (int n = 2; n <= 11; ++n)
        for (int trial = 0; trial < 3; ++trial) {
            const auto a = testing::random_latin_array(n, n + static_cast<int>(rng() % 4), rng);
            CHECK(max_diagonal_weight(a, config).value >= n - 1);
        }
}

TEST_CASE("caps") {
    const auto big = testing::cyclic(11);
    CHECK_THROWS_AS(max_diagonal_weight(big), OracleCapError);
    CHECK_THROWS_AS(max_partial_transversal_length(big), OracleCapError);
    OracleConfig config;
    config.max_order = 11;
    CHECK(max_diagonal_weight(big, config).value == 11);
    CHECK_THROWS_AS(max_diagonal_weight(drisko(4, 6)), std::invalid_argument);
}

TEST_CASE("has_transversal") {
    CHECK_FALSE(has_transversal(testing::cyclic(2)));
    CHECK(has_transversal(testing::cyclic(3)));
    CHECK_FALSE(has_transversal(testing::cyclic(4)));
    CHECK_THROWS_AS(has_transversal(drisko(4, 6)), std::invalid_argument);
}

TEST_CASE("normalize_diagonal fixed point") {
    const auto a = testing::cyclic(5);
    const DiagonalPerm id = DiagonalPerm::identity(5);
    int iterations = -1;
    CHECK(normalize_diagonal(a, id, 0, &iterations) == id);
    CHECK(iterations == 0);
}

TEST_CASE("normalize_diagonal on a tripled symbol") {
    const auto a = with_diagonal({0, 0, 0, 1, 2, 3});
    const DiagonalPerm id = DiagonalPerm::identity(6);
    CHECK(diagonal_weight(a, id) == 4);
    check_normalized(a, id, 5);
    // The preserved row is one of the copies: the others must move.
    check_normalized(a, id, 0);
    const DiagonalPerm out = normalize_diagonal(a, id, 0);
    CHECK(out[0] == 0);
    CHECK(diagonal_weight(a, out) >= 4);
}

TEST_CASE("normalize_diagonal rejects partial arrays") {
    auto a = testing::cyclic(4);
    a.set(1, 2, Cell::empty());
    CHECK_THROWS_AS(normalize_diagonal(a, DiagonalPerm::identity(4), 0), std::invalid_argument);
}

TEST_CASE("normalize_diagonal postconditions on 1000 random arrays") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const auto a = testing::random_latin_array(n, n + static_cast<int>(rng() % 4), rng);
        std::vector<int> sigma(static_cast<std::size_t>(n));
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        check_normalized(a, DiagonalPerm(sigma), static_cast<int>(rng() % static_cast<unsigned>(n)));
    }
}

TEST_CASE("branch and bound equals plain enumeration up to order 5") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        auto a = testing::random_latin_array(n, n + static_cast<int>(rng() % 4), rng);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (rng() % 4 == 0) a.set(i, j, rng() % 2 ? Cell::empty() : Cell::marker());
        const auto w = max_diagonal_weight(a);
        CHECK(w.value == testing::brute_max_weight(a));
        CHECK(diagonal_weight(a, std::get<DiagonalPerm>(w.witness)) == w.value);
        const auto p = max_partial_transversal_length(a);
        CHECK(p.value == testing::brute_max_partial(a));
        CHECK(std::get<PartialTransversal>(p.witness).length() == p.value);
    }
}

TEST_CASE("maximum beats random diagonals") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5);
        const auto a = testing::random_latin_array(n, n + 2, rng);
        const int best = max_diagonal_weight(a).value;
        std::vector<int> sigma(static_cast<std::size_t>(n));
        std::iota(sigma.begin(), sigma.end(), 0);
        for (int k = 0; k < 100; ++k) {
            std::shuffle(sigma.begin(), sigma.end(), rng);
            CHECK(testing::weight_of(a, sigma) <= best);
        }
    }
}

TEST_CASE("rectangles") {
    const auto a = from_rows({{0, 1, 2}, {1, 2, 0}});
    CHECK(max_partial_transversal_length(a).value == 2);
    CHECK(max_partial_transversal_length(from_rows({{0}, {0}, {-1}})).value == 1);
}

}  // TEST_SUITE
