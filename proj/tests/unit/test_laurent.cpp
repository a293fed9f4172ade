#include <random>

#include "cbr/field.hpp"
#include "cbr/laurent.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cbr;

namespace {
const std::vector<std::string> T2{"t1", "t2"};
const std::vector<std::string> T1{"t"};
LaurentPoly P2(const std::string& s) { return parse_laurent(s, T2); }
LaurentPoly P1(const std::string& s) { return parse_laurent(s, T1); }

LaurentPoly random_poly(std::mt19937& rng, int d, int terms, int lo, int hi) {
    std::uniform_int_distribution<int> ex(lo, hi);
    LaurentPoly p(d);
    for (int i = 0; i < terms; ++i) {
        Exponent e(d);
        for (auto& x : e) x = ex(rng);
        p.add_term(e, oracle::small_rational(rng));
    }
    return p;
}
}  // namespace

TEST_CASE("ring operations") {
    CHECK(P2("t1 + 1") + P2("-t1") == P2("1"));
    CHECK(P2("(t1 - t2)*(t1 + t2)") == P2("t1^2 - t2^2"));
    CHECK(P2("t1^-1 + 1") * P2("t1") == P2("1 + t1"));
    CHECK(P2("t1 + t2").pow(3) == P2("t1^3 + 3*t1^2*t2 + 3*t1*t2^2 + t2^3"));
    CHECK_THROWS(P2("t1") + P1("t"));

    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        LaurentPoly a = random_poly(rng, 2, 3, -2, 2), b = random_poly(rng, 2, 3, -2, 2), c = random_poly(rng, 2, 2, -1, 2);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(oracle::to_dense(a * b) == oracle::mul(oracle::to_dense(a), oracle::to_dense(b)));
    }
}

TEST_CASE("support and exponent set") {
    LaurentPoly p = P2("3*t1^2*t2^-1 + 1");
    auto s = support(p);
    CHECK(s.size() == 2);
    auto e = exponent_set(p);
    CHECK(e == std::vector<Exponent>{{0, 0}, {2, -1}});
    CHECK(support(LaurentPoly(2)).empty());
    CHECK(exponent_set(P1("5*t")) == std::vector<Exponent>{{1}});
}

TEST_CASE("ground monomial") {
    CHECK(ground_monomial({P2("t1^2"), P2("4*t1*t2"), P2("t2^2")}) == Exponent{0, 0});
    CHECK(ground_monomial({P2("t1^3*t2"), P2("t1^2*t2^2")}) == Exponent{2, 1});
    CHECK(ground_monomial({P1("t^-1"), P1("t")}) == Exponent{-1});
    CHECK_THROWS(ground_monomial({}));
    CHECK_THROWS(ground_monomial({P1("0")}));
}

TEST_CASE("printer and parser round trip") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        LaurentPoly p = random_poly(rng, 2, 4, -3, 3);
        CHECK(parse_laurent(p.to_string(T2), T2) == p);
    }
    CHECK(P2("t1^(-2)*t2") == P2("t1^-2*t2"));
    CHECK_THROWS(P2("t3"));
    CHECK_THROWS(P2("1/(t1+1)"));
}

TEST_CASE("exact division and gcd") {
    LaurentPoly a = P2("t1^2 - t2^2"), b = P2("t1 + t2");
    CHECK(a.exact_div(b).value() == P2("t1 - t2"));
    CHECK_FALSE(P2("t1^2 + t2^2").exact_div(b).has_value());
    CHECK(gcd(a, P2("t1^2 + 2*t1*t2 + t2^2")) == P2("t1 + t2"));
    CHECK(gcd(P2("t1^3*t2 - t1*t2"), P2("t1^2 - 1")) == P2("t1^2 - 1"));
    CHECK(gcd(P2("t1 + 1"), P2("t1 - 1")).is_constant());

    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        LaurentPoly f = random_poly(rng, 2, 3, 0, 2), g = random_poly(rng, 2, 2, 0, 2), h = random_poly(rng, 2, 2, 0, 2);
        if (f.is_zero() || g.is_zero() || h.is_zero()) continue;
        LaurentPoly gg = gcd(f * g, f * h);
        CHECK((f * g).exact_div(gg).has_value());
        CHECK((f * h).exact_div(gg).has_value());
        // f divides the gcd up to a unit.
        CHECK(gg.exact_div(f.primitive_integer().shift(exp_scale(f.min_exp(), -1))).has_value());
    }
}

TEST_CASE("rational functions canonical form") {
    RationalFunction r = parse_rational_function("(t1^2 - t2^2)/(2*t1 + 2*t2)", T2);
    CHECK(r == RationalFunction(P2("1/2*t1 - 1/2*t2")));
    RationalFunction s = parse_rational_function("1/(t1 + 1) + 1/(t1 - 1)", T2);
    CHECK(s == RationalFunction(P2("2*t1"), P2("t1^2 - 1")));
    CHECK(s.den().lead_coeff() == 1);
    CHECK((s * s.inverse()) == RationalFunction::constant(2, 1));
}

TEST_CASE("squarefree decomposition") {
    auto sp = squarefree_decompose(P2("(t1 - t2)^2*(t1^2 - 6*t1*t2 + t2^2)"));
    CHECK(sp.Q == P2("t1 - t2"));
    CHECK(sp.D == P2("t1^2 - 6*t1*t2 + t2^2"));
    CHECK(sp.unit == P2("1"));

    auto s1 = squarefree_decompose(P1("t^2 + 1"));
    CHECK(s1.Q == P1("1"));
    CHECK(s1.D == P1("t^2 + 1"));

    LaurentPoly cube = P1("(t - 1)^3");
    auto s3 = squarefree_decompose(cube);
    CHECK(s3.Q == P1("t - 1"));
    CHECK(s3.D == P1("t - 1"));
    oracle::Dense q2d = oracle::mul(oracle::mul(oracle::to_dense(s3.Q), oracle::to_dense(s3.Q)), oracle::to_dense(s3.D));
    CHECK(q2d == oracle::to_dense(cube));

    // Unit handling: 12 t^3 (t+1)^2 = 3 t * (2 t (t+1))^2
    auto s4 = squarefree_decompose(P1("12*t^3*(t + 1)^2"));
    CHECK(s4.D == P1("1"));
    CHECK(s4.unit == P1("3*t"));
    CHECK(s4.unit * s4.Q * s4.Q * s4.D == P1("12*t^3*(t + 1)^2"));

    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        LaurentPoly f = random_poly(rng, 2, 2, 0, 2), g = random_poly(rng, 2, 2, 0, 1);
        if (f.is_constant() || g.is_constant() || f.is_monomial() || g.is_monomial()) continue;
        LaurentPoly p = f * f * g;
        auto d = squarefree_decompose(p);
        CHECK(d.unit * d.Q * d.Q * d.D == p);
        for (int v = 0; v < 2; ++v) {
            LaurentPoly dv = d.D.derivative(v);
            if (dv.is_zero()) continue;
            CHECK(gcd(d.D, dv).is_constant());
        }
    }
}

TEST_CASE("exact square roots") {
    CHECK(sqrt_exact(P2("t1^2 - 2*t1*t2 + t2^2")).value() == P2("t1 - t2"));
    CHECK_FALSE(sqrt_exact(P2("t1^2 + t2^2")).has_value());
    CHECK(sqrt_exact(P1("4*t^-2 + 4 + t^2")).value() == P1("t + 2*t^-1"));
    CHECK_FALSE(sqrt_exact(P1("2*t^2")).has_value());
    Rational root;
    CHECK(squarefree_kernel(Rational(-18, 4), &root) == -2);
    CHECK(root == Rational(3, 2));
}

TEST_CASE("unimodular substitution") {
    IntMatrix id{{1, 0}, {0, 1}};
    CHECK(unimodular_substitute(P2("t1*t2"), id) == P2("t1*t2"));
    IntMatrix v{{1, 1}, {0, 1}};
    CHECK(unimodular_substitute(P2("t1 + t2"), v).size() == 2);
    CHECK_THROWS(unimodular_substitute(P2("t1"), IntMatrix{{2, 0}, {0, 1}}));

    std::mt19937 rng(9);
    std::uniform_int_distribution<int> ent(-2, 2);
    for (int trial = 0; trial < 20; ++trial) {
        // Random unimodular matrix as product of elementary matrices.
        IntMatrix m{{1, 0}, {0, 1}};
        for (int s = 0; s < 4; ++s) {
            int k = ent(rng);
            IntMatrix e{{1, 0}, {0, 1}};
            if (s % 2)
                e[0][1] = k;
            else
                e[1][0] = k;
            IntMatrix r(2, std::vector<long>(2, 0));
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int l = 0; l < 2; ++l) r[i][j] += m[i][l] * e[l][j];
            m = r;
        }
        LaurentPoly p = random_poly(rng, 2, 3, -2, 2);
        LaurentPoly q = unimodular_substitute(p, m);
        CHECK(q.size() == p.size());
        CHECK(unimodular_substitute(q, *unimodular_inverse(m)) == p);
        LaurentPoly p2 = random_poly(rng, 2, 2, -1, 1);
        CHECK(unimodular_substitute(p * p2, m) == q * unimodular_substitute(p2, m));
    }
}
