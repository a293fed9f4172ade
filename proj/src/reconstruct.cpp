// Monomial chi configurations with a prescribed discriminant kernel.
#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cbr/yalg.hpp"

namespace cbr {

namespace {

using Triple = std::array<LaurentPoly, 3>;

std::optional<LaurentPoly> monomial_sqrt(const LaurentPoly& m) {
    if (!m.is_monomial()) return std::nullopt;
    auto c = rational_sqrt(m.lead_coeff());
    if (!c) return std::nullopt;
    Exponent e = m.lead_exp();
    for (int& x : e) {
        if (x % 2 != 0) return std::nullopt;
        x /= 2;
    }
    return LaurentPoly::monomial(e, *c);
}

LaurentPoly mono(const Exponent& e, const Rational& c) { return LaurentPoly::monomial(e, c); }

LaurentPoly mono_div(const LaurentPoly& a, const LaurentPoly& b) {
    return mono(exp_sub(a.lead_exp(), b.lead_exp()), a.lead_coeff() / b.lead_coeff());
}

std::optional<Rational> rational_root(const Rational& q, unsigned k) {
    if (k == 0) return std::nullopt;
    if (sgn(q) < 0 && k % 2 == 0) return std::nullopt;
    Integer num = abs(q.get_num()), den = q.get_den(), rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k)) return std::nullopt;
    Rational r(rn, rd);
    r.canonicalize();
    return sgn(q) < 0 ? Rational(-r) : r;
}

// Terms in descending lexicographic order.
std::vector<LaurentPoly> descending_terms(const LaurentPoly& p) {
    std::vector<LaurentPoly> out;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) out.push_back(mono(it->first, it->second));
    return out;
}

bool all_nonzero(const Triple& t) { return !t[0].is_zero() && !t[1].is_zero() && !t[2].is_zero(); }

struct Builder {
    LaurentPoly kernel;
    Reconstruction& out;

    bool accept(const Triple& t) const {
        if (!all_nonzero(t)) return false;
        auto k = discriminant_kernel(t);
        return k && *k == kernel;
    }
    void add(Configuration c) {
        if (!accept(c.chi)) return;
        c.chi = normalize_triple(c.chi);
        for (const auto& e : out.candidates)
            if (e.kind == c.kind && same_up_to_unit(e.chi, c.chi)) return;
        out.candidates.push_back(std::move(c));
    }
};

// Three pairwise independent monomials: read E1, E2 from the top of the
// kernel and E3 from the bottom.
void class_one_independent(Builder& b, const std::vector<LaurentPoly>& t) {
    auto E1 = monomial_sqrt(t[0]);
    if (!E1) {
        b.out.notes.push_back("class I: leading term is not a square over Q (would need irrational or complex coefficients)");
        return;
    }
    LaurentPoly E2 = mono_div(t[1], *E1) * Rational(-1, 2);
    LaurentPoly E3 = mono_div(t[t.size() - 2], E2) * Rational(-1, 2);
    b.add({{*E1, E2, E3}, "I", std::nullopt, 0, 0});
}

// Two proportional monomials and one independent one.
void class_one_proportional(Builder& b, const std::vector<LaurentPoly>& t) {
    const Exponent &e0 = t[0].lead_exp(), &e1 = t[1].lead_exp(), &e2 = t[2].lead_exp();
    if (exp_add(e0, e2) != exp_scale(e1, 2)) return;
    for (int pair_top : {1, 0}) {
        const LaurentPoly& single = pair_top ? t[2] : t[0];
        const LaurentPoly& paired = pair_top ? t[0] : t[2];
        auto z = monomial_sqrt(single);
        if (!z) {
            b.out.notes.push_back("class I: proportional pair needs a square root of " + single.to_string());
            continue;
        }
        auto diff = rational_sqrt(paired.lead_coeff());
        if (!diff) {
            b.out.notes.push_back("class I: proportional pair needs sqrt(" + paired.lead_coeff().get_str() +
                                  "), complex phases or irrational coefficients");
            continue;
        }
        Exponent p = exp_sub(e1, z->lead_exp());
        Rational sum = -t[1].lead_coeff() / (2 * z->lead_coeff());
        Rational s = (sum + *diff) / 2, y = (sum - *diff) / 2;
        if (s == 0 || y == 0) continue;
        LaurentPoly P1 = mono(p, s), P2 = mono(p, y);
        Triple tr = pair_top ? Triple{P1, P2, *z} : Triple{*z, P1, P2};
        b.add({tr, "I", std::nullopt, 0, 0});
    }
}

// Collinear support: exponents e_lo + n_j f with f primitive.
struct LineForm {
    Exponent base, dir;
    std::vector<std::pair<long, Rational>> coeffs;  // (n_j, c_j) ascending
};
std::optional<LineForm> line_form(const LaurentPoly& K) {
    LineForm lf;
    lf.base = K.trail_exp();
    Exponent top = exp_sub(K.lead_exp(), lf.base);
    long g = 0;
    for (int x : top) g = std::gcd(g, static_cast<long>(std::abs(x)));
    if (g == 0) return std::nullopt;
    lf.dir = top;
    for (int& x : lf.dir) x = static_cast<int>(x / g);
    for (const auto& [e, c] : K.terms()) {
        Exponent v = exp_sub(e, lf.base);
        long n = -1;
        for (std::size_t u = 0; u < v.size(); ++u) {
            if (lf.dir[u] == 0) {
                if (v[u] != 0) return std::nullopt;
                continue;
            }
            if (v[u] % lf.dir[u] != 0) return std::nullopt;
            long m = v[u] / lf.dir[u];
            if (n >= 0 && m != n) return std::nullopt;
            n = m;
        }
        if (n < 0) return std::nullopt;
        lf.coeffs.push_back({n, c});
    }
    std::sort(lf.coeffs.begin(), lf.coeffs.end());
    return lf;
}

// Resonant family: (b^2 r^a, zeta a^2 r^b, (a-b)^2) with r = kappa x^s.
void class_two(Builder& bld, const LaurentPoly& K) {
    auto lf = line_form(K);
    if (!lf) return;
    long N = lf->coeffs.back().first;
    long G = 0;
    for (const auto& [n, c] : lf->coeffs) G = std::gcd(G, n);
    int d = K.nvars();
    for (long s = 1; s <= G; ++s) {
        if (G % s != 0 || N % (2 * s) != 0) continue;
        long a = N / (2 * s) + 1;
        if (a < 2 || a > 64) continue;
        for (long b = 1; b < a; ++b) {
            if (std::gcd(a, b) != 1) continue;
            for (int zeta : {1, -1}) {
                if (zeta < 0 && a % 2 != 0) continue;
                LaurentPoly r = LaurentPoly::variable(1, 0);
                LaurentPoly Bab = b_function(r.pow(static_cast<unsigned>(a)) * Rational(b * b),
                                             r.pow(static_cast<unsigned>(b)) * Rational(zeta * a * a),
                                             LaurentPoly::constant(1, (a - b) * (a - b)));
                SquarefreeParts sp = squarefree_decompose(Bab);
                LaurentPoly Dab = sp.unit * sp.D;
                if (Dab.size() != lf->coeffs.size() || Dab.trail_exp()[0] != 0 ||
                    Dab.lead_exp()[0] != 2 * a - 2)
                    continue;
                bool same_support = true;
                for (const auto& [n, c] : lf->coeffs)
                    if (Dab.terms().count(Exponent{static_cast<int>(n / s)}) == 0) same_support = false;
                if (!same_support) continue;
                Rational ratio = lf->coeffs.back().second * Dab.terms().begin()->second /
                                 (lf->coeffs.front().second * Dab.lead_coeff());
                auto kap = rational_root(ratio, static_cast<unsigned>(2 * a - 2));
                if (!kap) {
                    bld.out.notes.push_back("class II (a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                                            "): scale needs an irrational or complex root");
                    continue;
                }
                for (Rational kappa : {*kap, Rational(-*kap)}) {
                    Rational ka = 1, kb = 1;
                    for (long u = 0; u < a; ++u) ka *= kappa;
                    for (long u = 0; u < b; ++u) kb *= kappa;
                    LaurentPoly E1 = mono(exp_scale(lf->dir, static_cast<int>(s * a)), Rational(b * b) * ka);
                    LaurentPoly E2 = mono(exp_scale(lf->dir, static_cast<int>(s * b)), Rational(zeta * a * a) * kb);
                    LaurentPoly E3 = LaurentPoly::constant(d, (a - b) * (a - b));
                    Rational rho(b, a);
                    rho.canonicalize();
                    bld.add({{E1, E2, E3}, "II", rho, 0, 0});
                }
            }
        }
    }
}

void s_type(Builder& b, const std::vector<LaurentPoly>& t) {
    const LaurentPoly &m1 = t[0], &m2 = t[1];
    auto e1 = monomial_sqrt(m1), e2 = monomial_sqrt(m2);
    auto need = [&](const LaurentPoly& m, const char* row) {
        b.out.notes.push_back(std::string("S-type row ") + row + ": needs sqrt(" + m.to_string() +
                              "), complex phases or irrational coefficients");
    };
    if (e1 && e2) {
        b.add({{*e1 * Rational(1, 2), *e1 * Rational(-1, 2), *e2}, "S", std::nullopt, -1, 1});
        b.add({{*e1, *e2 * Rational(1, 2), *e2 * Rational(-1, 2)}, "S", std::nullopt, -1, 2});
    } else {
        need(e1 ? m2 : m1, "(-1,1)");
        need(e1 ? m2 : m1, "(-1,2)");
    }
    if (e2)
        b.add({{m1 * Rational(1, 4), m1 * Rational(1, 4), -m2}, "S", std::nullopt, 1, 1});
    else
        need(m2, "(+1,1)");
    if (e1)
        b.add({{-m1, m2 * Rational(1, 4), m2 * Rational(1, 4)}, "S", std::nullopt, 1, 2});
    else
        need(m1, "(+1,2)");
}

}  // namespace

std::optional<LaurentPoly> discriminant_kernel(const std::array<LaurentPoly, 3>& chi) {
    LaurentPoly B = b_function(chi[0], chi[1], chi[2]);
    if (B.is_zero()) return std::nullopt;
    SquarefreeParts sp = squarefree_decompose(B);
    return sp.unit * sp.D;
}

bool same_up_to_unit(const std::array<LaurentPoly, 3>& a, const std::array<LaurentPoly, 3>& b) {
    std::array<int, 3> p{0, 1, 2};
    do {
        bool ok = true;
        for (int u = 1; u < 3 && ok; ++u) ok = a[u] * b[p[0]] == a[0] * b[p[u]];
        if (ok) return true;
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
}

std::array<LaurentPoly, 3> normalize_triple(const std::array<LaurentPoly, 3>& t) {
    Exponent lo = t[0].lead_exp();
    for (const auto& x : t)
        for (std::size_t u = 0; u < lo.size(); ++u) lo[u] = std::min(lo[u], x.lead_exp()[u]);
    Integer L = 1, G = 0;
    for (const auto& x : t) L = lcm(L, x.lead_coeff().get_den());
    for (const auto& x : t) {
        Rational c = x.lead_coeff() * L;
        G = gcd(G, c.get_num());
    }
    Rational scale(L, G);
    scale.canonicalize();
    if (sgn(t[0].lead_coeff()) < 0) scale = -scale;
    std::array<LaurentPoly, 3> out;
    Exponent neg = exp_scale(lo, -1);
    for (int u = 0; u < 3; ++u) out[u] = t[u].shift(neg) * scale;
    return out;
}

Reconstruction reconstruct_from_kernel(const LaurentPoly& kernel) {
    Reconstruction out;
    if (kernel.is_zero()) throw std::invalid_argument("reconstruct: zero kernel");
    SquarefreeParts sp = squarefree_decompose(kernel);
    out.kernel = sp.unit * sp.D;
    out.omega = static_cast<int>(sp.D.size());
    if (!(sp.Q.is_monomial() && sp.Q.lead_coeff() == 1 && sp.Q.lead_exp() == Exponent(kernel.nvars(), 0)))
        out.notes.push_back("input was not squarefree; using its squarefree kernel");
    Builder b{out.kernel, out};
    std::vector<LaurentPoly> t = descending_terms(out.kernel);
    if (out.omega <= 1) {
        out.notes.push_back("kernel has at most one term: no radical configuration");
        return out;
    }
    if (out.omega == 2) {
        s_type(b, t);
    } else {
        if (t.size() >= 4) class_one_independent(b, t);
        if (t.size() == 3) class_one_proportional(b, t);
        class_two(b, out.kernel);
    }
    if (out.candidates.empty()) out.notes.push_back("no monomial configuration over Q reproduces the kernel");
    return out;
}

}  // namespace cbr
