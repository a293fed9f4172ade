#include <deque>
#include <map>
#include <random>

#include "cbr/expansion.hpp"
#include "cbr/matroid.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cbr;

namespace {
// Independent distance oracle on the exchange graph.
int bfs_distance(const Matroid& M, Mask I, Mask J) {
    std::map<Mask, int> dist{{I, 0}};
    std::deque<Mask> q{I};
    while (!q.empty()) {
        Mask c = q.front();
        q.pop_front();
        if (c == J) return dist[c];
        for (int a : elements(c))
            for (int b = 1; b <= M.n(); ++b) {
                if (has(c, b)) continue;
                Mask x = exchange(c, a, b);
                if (M.contains(x) && !dist.count(x)) {
                    dist[x] = dist[c] + 1;
                    q.push_back(x);
                }
            }
    }
    return -1;
}

bool exhaustive_generic(const Matroid& M) {
    for (Mask I : k_subsets(M.n(), M.k()))
        for (int a = 1; a <= M.n(); ++a)
            for (int b = a + 1; b <= M.n(); ++b) {
                if (has(I, a) || has(I, b)) continue;
                bool ok = true;
                for (Mask J : k_subsets(M.n(), M.k()))
                    if ((J & ~I & ~(bit(a) | bit(b))) == 0 && !M.contains(J)) ok = false;
                if (ok) return true;
            }
    return false;
}

void check_chain(const Matroid& M, Mask I, Mask J) {
    auto chain = exchange_chain(M, I, J);
    CHECK(chain.size() == static_cast<std::size_t>(card(I & ~J)) + 1);
    CHECK(chain.front() == I);
    CHECK(chain.back() == J);
    for (std::size_t u = 0; u < chain.size(); ++u) {
        CHECK(M.contains(chain[u]));
        if (u) CHECK(card(chain[u] & ~chain[u - 1]) == 1);
    }
    CHECK(static_cast<int>(chain.size()) - 1 == bfs_distance(M, I, J));
}
}  // namespace

TEST_CASE("uniform matroid") {
    std::mt19937 rng(1);
    Matroid M = matroid_of(oracle::random_generic(2, 5, rng));
    CHECK(M.is_uniform());
    CHECK(exchange_chain(M, mask_of({1, 2}), mask_of({1, 2})).size() == 1);
    check_chain(M, mask_of({1, 2}), mask_of({4, 5}));
    auto g = find_generic_columns(M);
    REQUIRE(g);
    CHECK(g->basis == mask_of({1, 2}));
    CHECK(g->alpha1 == 3);
    CHECK(g->alpha2 == 4);
}

TEST_CASE("exchange axiom violations are rejected") {
    // {1,2} and {3,4} alone violate exchange.
    CHECK_THROWS_AS(Matroid(4, 2, {mask_of({1, 2}), mask_of({3, 4})}), MatroidError);
    CHECK_THROWS_AS(Matroid(4, 2, {}), MatroidError);
    CHECK_NOTHROW(Matroid(4, 2, {mask_of({1, 2}), mask_of({1, 3})}));
}

TEST_CASE("ex12 fixture matroid") {
    ExactMatrix L = load_fixture("ex12_left.json");
    Matroid M = matroid_of(evaluate_matrix(L, {1}));
    std::size_t expected = 0;
    for (Mask I : k_subsets(12, 6)) {
        Mask low = I & full_mask(6), high = I >> 6;
        bool paired = high == (full_mask(6) & ~low);
        CHECK(M.contains(I) == paired);
        if (paired) ++expected;
    }
    CHECK(M.size() == expected);
    CHECK_FALSE(find_generic_columns(M));
    CHECK_FALSE(exhaustive_generic(M));
    check_chain(M, full_mask(6), full_mask(12) & ~full_mask(6));
    check_chain(M, mask_of({1, 2, 3, 10, 11, 12}), mask_of({4, 5, 6, 7, 8, 9}));
}

TEST_CASE("ex41 fixture matroid") {
    ExactMatrix L = load_fixture("ex41_left.json");
    Matroid M = matroid_of(L);
    std::vector<Mask> expected{full_mask(3)};
    for (int i = 1; i <= 3; ++i)
        for (int a = 4; a <= 6; ++a) expected.push_back(exchange(full_mask(3), i, a));
    std::sort(expected.begin(), expected.end(), lex_less);
    CHECK(M.bases() == expected);
    CHECK_FALSE(find_generic_columns(M));
    CHECK_FALSE(exhaustive_generic(M));
}

TEST_CASE("generic-column verdict matches the exhaustive scan") {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        // Sparse random 0/1-ish matrices give varied matroids.
        ExactMatrix m(2 + trial % 2, 6, 0);
        std::uniform_int_distribution<int> pick(0, 2);
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) m(r, c) = QuadExtScalar::constant(0, pick(rng) == 0 ? 0 : pick(rng) + 1);
        Matroid M;
        try {
            M = matroid_of(m);
        } catch (const MatroidError&) {
            continue;  // rank-deficient
        }
        auto g = find_generic_columns(M);
        CHECK(g.has_value() == exhaustive_generic(M));
        if (g) CHECK(is_generic_witness(M, *g));
        for (Mask A : M.bases()) check_chain(M, M.bases().front(), A);
    }
}
