#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "cbr/protocol.hpp"
#include "cbr/reduce.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cbr;

namespace {

ExactMatrix integer_generic(int rows, int cols, std::mt19937& rng, int range = 4) {
    std::uniform_int_distribution<int> e(-range, range);
    for (;;) {
        ExactMatrix m(rows, cols, 0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m(r, c) = QuadExtScalar::constant(0, e(rng));
        bool ok = true;
        for (const auto& v : all_minors_serial(m).values) ok = ok && !v.is_zero();
        if (ok) return m;
    }
}

std::vector<int> random_perm(int n, std::mt19937& rng) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 1);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

Rational as_q(const QuadExtScalar& v) { return v.rat().num().constant_value() / v.rat().den().constant_value(); }

// g(I) by Leibniz determinants of the submatrices.
LabeledValues leibniz_terms(const ExactMatrix& a, const ExactMatrix& q) {
    LabeledValues g;
    QuadExtScalar zero = QuadExtScalar::constant(0, 0);
    for (Mask J : k_subsets(a.cols(), a.rows())) {
        Rational v = as_q(oracle::leibniz(oracle::submatrix_cols(a, J), zero) *
                          oracle::leibniz(oracle::submatrix_cols(q.transpose(), J), zero));
        if (v != 0) g[J] = v;
    }
    return g;
}

struct Pipeline {
    bool accepted = false;
    RecoveredPermutation chain;
    LabelResult labels;
    MatrixRecovery matrices;
};

Pipeline run_protocol(const LabeledValues& g, const BasisPermutation& Psi, int n, int k) {
    Pipeline p;
    QueryPoint one;
    one.t.assign(static_cast<std::size_t>(n), Rational(1));
    Bounds b = bounds_query(oracle_answer(g, Psi, one));
    QueryPoint t0 = build_query(b, n, k, g.size());
    UnlabeledAnswer ans = oracle_answer(g, Psi, t0);
    p.chain = recover_chain(ans, t0, b, n, k, &g);
    if (!p.chain.ok) return p;
    p.labels = verify_and_label(ans, *p.chain.psi, t0, g);
    if (!p.labels.ok) return p;
    p.matrices = recover_matrices(p.labels.gmap, n, k);
    p.accepted = p.matrices.ok;
    return p;
}

bool reproduces(const DecompositionPair& pair, const std::vector<int>& psi, const LabeledValues& g) {
    return product_terms(permute_columns(pair.a, psi), permute_rows(pair.q, psi)) == g;
}

}  // namespace

TEST_CASE("oracle answers") {
    std::mt19937 rng(101);
    ExactMatrix a = oracle::random_generic(2, 7, rng), q = oracle::random_generic(2, 7, rng).transpose();
    LabeledValues g = leibniz_terms(a, q);
    CHECK(product_terms(a, q) == g);
    QueryPoint one;
    one.t.assign(7, Rational(1));
    std::vector<Rational> expect;
    for (const auto& [I, v] : g) expect.push_back(v);
    std::sort(expect.begin(), expect.end());
    CHECK(oracle_answer(g, {}, one).values == expect);

    // Identity permutation: terms of a diag(t0) q.
    QueryPoint t0;
    for (int s = 1; s <= 7; ++s) t0.t.emplace_back(s * s + 1);
    ExactMatrix at = a;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 7; ++c) at(r, c) = at(r, c) * QuadExtScalar::constant(0, t0.t[c]);
    std::vector<Rational> direct;
    for (const auto& [I, v] : leibniz_terms(at, q)) direct.push_back(v);
    std::sort(direct.begin(), direct.end());
    Matroid M = support_matroid(7, 2, g);
    CHECK(oracle_answer(g, induced_permutation({1, 2, 3, 4, 5, 6, 7}, M), t0).values == direct);

    // A transposition of two bases changes the multiset unless both the
    // values and the exponent sets coincide.
    BasisPermutation P = induced_permutation({1, 2, 3, 4, 5, 6, 7}, M);
    Mask A = mask_of({1, 2}), B = mask_of({3, 5});
    std::swap(P[A], P[B]);
    bool same = oracle_answer(g, P, t0).values == direct;
    CHECK(same == (g.at(A) == g.at(B)));
    LabeledValues g2 = g;
    g2[B] = g2[A];
    CHECK(oracle_answer(g2, P, t0).values == oracle_answer(g2, {}, t0).values);

    BasisPermutation bad = induced_permutation({1, 2, 3, 4, 5, 6, 7}, M);
    bad[A] = B;
    CHECK_THROWS_AS(oracle_answer(g, bad, t0), std::invalid_argument);
}

TEST_CASE("bounds and query construction") {
    Bounds b = bounds_query({{1, 3, 5}});
    CHECK(b.lambda <= 1);
    CHECK(b.mu > 5);
    Bounds f = bounds_query({{Rational(1, 2), Rational(-3)}});
    CHECK(f.lambda < Rational(1, 2));
    CHECK(f.mu > 3);
    Bounds s = bounds_query({{7}});
    CHECK(s.lambda < 7);
    CHECK(s.mu > 7);
    CHECK_THROWS_AS(bounds_query({{1, 0, 2}}), std::domain_error);

    Bounds b10{1, 10, std::nullopt};
    QueryPoint t0 = build_query(b10, 7, 2, 21);
    REQUIRE(t0.t.size() == 7);
    for (int s = 1; s < 7; ++s) {
        Rational lhs = t0.t[s] * t0.t[0] / (t0.t[s - 1] * t0.t[s - 1]);
        CHECK(lhs > Rational(41 * 10));
        // Least integer choice: one less breaks the inequality.
        Rational prev = (t0.t[s] - 1) * t0.t[0] / (t0.t[s - 1] * t0.t[s - 1]);
        CHECK_FALSE(prev > Rational(41 * 10));
    }
    CHECK(satisfies_separation(t0, b10, 2, 21));
    QueryPoint single = build_query(b10, 3, 3, 1);
    CHECK(single.t.size() == 3);
}

TEST_CASE("exact natural-log ceilings") {
    for (long N = 1; N < 5000; N += 7) {
        long c = ceil_ln(mpz_class(N));
        CHECK(static_cast<double>(c) == std::ceil(std::log(static_cast<double>(N)) - 1e-12));
    }
    CHECK(ceil_ln(mpz_class(20)) == 3);  // e^3 = 20.08
    CHECK(ceil_ln(mpz_class(21)) == 4);
}

TEST_CASE("block positions name k-subsets") {
    for (auto [n, k] : std::vector<std::pair<int, int>>{{7, 2}, {8, 3}, {5, 1}, {6, 6}}) {
        std::set<std::string> seen;
        for (Mask A : k_subsets(n, k)) {
            mpz_class P = block_position(A, k);
            CHECK(seen.insert(P.get_str()).second);
            auto back = set_from_position(P, n, k);
            REQUIRE(back);
            CHECK(*back == A);
        }
    }
    CHECK_FALSE(set_from_position(mpz_class(2), 7, 2));  // 3 = 11 in base 2 plus carry
}

TEST_CASE("shortcut query satisfies the separation bound") {
    for (long maxG : {1L, 5L, 80L}) {
        ShortcutQuery s = shortcut_query(mpz_class(maxG), 7, 2, 21);
        Bounds b{1, Rational(maxG + 1), std::nullopt};
        CHECK(satisfies_separation(s.t0, b, 2, 21));
    }
}

TEST_CASE("protocol round trips on induced permutations") {
    std::mt19937 rng(103);
    for (auto [k, n] : std::vector<std::pair<int, int>>{{2, 7}, {2, 9}, {3, 8}}) {
        for (int trial = 0; trial < 3; ++trial) {
            ExactMatrix a = oracle::random_generic(k, n, rng), q = oracle::random_generic(k, n, rng).transpose();
            LabeledValues g = product_terms(a, q);
            Matroid M = support_matroid(n, k, g);
            std::vector<int> psi0 = trial == 0 ? std::vector<int>() : random_perm(n, rng);
            if (psi0.empty())
                for (int x = 1; x <= n; ++x) psi0.push_back(x);
            Pipeline p = run_protocol(g, induced_permutation(psi0, M), n, k);
            REQUIRE(p.chain.ok);
            CHECK(*p.chain.psi == psi0);
            CHECK(p.chain.chain.size() >= 2);
            for (std::size_t u = 1; u < p.chain.label_chain.size(); ++u)
                CHECK(card(p.chain.label_chain[u] & ~p.chain.label_chain[u - 1]) == 1);
            REQUIRE(p.labels.ok);
            for (const auto& [I, v] : g) CHECK(p.labels.gmap.at(apply_psi(psi0, I)) == v);
            REQUIRE(p.matrices.ok);
            CHECK(p.matrices.q_generic);
            CHECK(reproduces(*p.matrices.pair, psi0, g));
        }
    }
}

TEST_CASE("identity permutation: labels follow the magnitude order") {
    std::mt19937 rng(107);
    ExactMatrix a = oracle::random_generic(2, 6, rng), q = oracle::random_generic(2, 6, rng).transpose();
    LabeledValues g = product_terms(a, q);
    QueryPoint one;
    one.t.assign(6, Rational(1));
    Bounds b = bounds_query(oracle_answer(g, {}, one));
    QueryPoint t0 = build_query(b, 6, 2, g.size());
    RecoveredPermutation r = recover_chain(oracle_answer(g, {}, t0), t0, b, 6, 2);
    REQUIRE(r.ok);
    CHECK_FALSE(r.psi);
    CHECK(label_map(r.decoded) == g);
    // Magnitude order is colex order of the exponent sets.
    for (std::size_t u = 1; u < r.decoded.size(); ++u) CHECK(colex_rank(r.decoded[u - 1].set) < colex_rank(r.decoded[u].set));
    CHECK(r.chain.front() == mask_of({1, 2}));
}

TEST_CASE("non-induced permutations are rejected") {
    std::mt19937 rng(109);
    ExactMatrix a = oracle::random_generic(2, 7, rng), q = oracle::random_generic(2, 7, rng).transpose();
    LabeledValues g = product_terms(a, q);
    std::vector<Mask> bases;
    for (const auto& [I, v] : g) bases.push_back(I);
    int rejected = 0;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Mask> img = bases;
        std::shuffle(img.begin(), img.end(), rng);
        BasisPermutation P;
        for (std::size_t u = 0; u < bases.size(); ++u) P[bases[u]] = img[u];
        REQUIRE_FALSE(is_induced(P, 7));
        if (!run_protocol(g, P, 7, 2).accepted) ++rejected;
    }
    CHECK(rejected == 5);
    // Induced after one extra swap of two terms.
    Matroid M = support_matroid(7, 2, g);
    BasisPermutation P = induced_permutation(random_perm(7, rng), M);
    std::swap(P[mask_of({1, 2})], P[mask_of({4, 6})]);
    REQUIRE_FALSE(is_induced(P, 7));
    Pipeline p = run_protocol(g, P, 7, 2);
    CHECK_FALSE(p.accepted);
}

TEST_CASE("matrix recovery failures") {
    std::mt19937 rng(113);
    ExactMatrix a = oracle::random_generic(2, 7, rng), q = oracle::random_generic(2, 7, rng).transpose();
    LabeledValues g = product_terms(a, q);
    MatrixRecovery ok = recover_matrices(g, 7, 2);
    REQUIRE(ok.ok);
    CHECK(product_terms(ok.pair->a, ok.pair->q) == g);

    LabeledValues bad = g;
    bad[mask_of({2, 5})] *= 3;
    MatrixRecovery r = recover_matrices(bad, 7, 2);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.hypothesis_failed);
    CHECK((r.stage == "roots" || r.stage == "plucker"));

    ExactMatrix L = evaluate_at_one(load_fixture("ex12_left.json"));
    ExactMatrix R = evaluate_at_one(load_right_fixture("ex12_right.json"));
    MatrixRecovery ex = recover_matrices(product_terms(L, R), 12, 6);
    CHECK_FALSE(ex.ok);
    CHECK(ex.hypothesis_failed);
    CHECK(ex.stage == "generic-columns");
}

TEST_CASE("two-scalar shortcut") {
    std::mt19937 rng(127);
    for (int trial = 0; trial < 4; ++trial) {
        ExactMatrix a = integer_generic(2, 7, rng), q = integer_generic(2, 7, rng, 3).transpose();
        LabeledValues g = product_terms(a, q);
        Matroid M = support_matroid(7, 2, g);
        std::vector<int> psi0 = random_perm(7, rng);
        BasisPermutation P = induced_permutation(psi0, M);
        mpz_class maxG = 0;
        for (const auto& [I, v] : g) maxG = std::max(maxG, mpz_class(abs(v.get_num())));
        mpz_class delta = shortcut_delta(g, P, 7, 2);
        ShortcutResult s = integer_shortcut(maxG, delta, 7, 2, g.size(), &g);
        REQUIRE(s.ok);
        CHECK(*s.psi == psi0);
        Pipeline full = run_protocol(g, P, 7, 2);
        REQUIRE(full.accepted);
        CHECK(s.gmap == full.labels.gmap);
        CHECK(s.recovery->pair->a == full.matrices.pair->a);
        CHECK(s.recovery->pair->q == full.matrices.pair->q);
        CHECK(reproduces(*s.recovery->pair, psi0, g));

        // One base-B digit replaced.
        mpz_class B = s.query.base;
        std::size_t ndig = 0;
        for (mpz_class x = abs(delta); x != 0; x /= B) ++ndig;
        std::uniform_int_distribution<std::size_t> at(0, ndig - 1);
        for (int c = 0; c < 5; ++c) {
            mpz_class place;
            mpz_pow_ui(place.get_mpz_t(), B.get_mpz_t(), static_cast<unsigned long>(at(rng)));
            mpz_class old = (abs(delta) / place) % B;
            mpz_class nd = (old + 1 + rng() % (B.get_ui() - 1)) % B;
            mpz_class corrupted = delta + (delta < 0 ? -1 : 1) * (nd - old) * place;
            CHECK_FALSE(integer_shortcut(maxG, corrupted, 7, 2, g.size(), &g).ok);
        }
    }
    // k = n: one block.
    ExactMatrix a = integer_generic(3, 3, rng), q = integer_generic(3, 3, rng);
    LabeledValues g = product_terms(a, q);
    REQUIRE(g.size() == 1);
    mpz_class maxG = abs(g.begin()->second.get_num());
    ShortcutResult one = integer_shortcut(maxG, shortcut_delta(g, {}, 3, 3), 3, 3, 1);
    REQUIRE(one.decoded.size() == 1);
    CHECK(one.decoded[0].coeff == as_q(col_minor(a, full_mask(3)) * row_minor(q, full_mask(3))));
}
