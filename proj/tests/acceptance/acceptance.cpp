// One line per acceptance criterion; nonzero exit when any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#define DOCTEST_CONFIG_DISABLE
#include "../unit/oracles.hpp"
#include "cbr/io.hpp"
#include "cbr/protocol.hpp"
#include "cbr/reduce.hpp"
#include "cbr/yalg.hpp"

using namespace cbr;

namespace {

std::string data(const std::string& name) { return std::string(CBR_DATA_DIR) + "/fixtures/" + name; }

QuadExtScalar mono(const Exponent& e, const Rational& c) { return QuadExtScalar(RationalFunction(LaurentPoly::monomial(e, c))); }

Rational as_q(const QuadExtScalar& v) { return v.rat().num().constant_value() / v.rat().den().constant_value(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::vector<int> random_perm(int n, std::mt19937& rng) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 1);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

// L(t) = t^u L1 diag(t^psi0) with constant generic R.
struct Planted {
    ExactMatrix L, R;
    std::vector<Exponent> psi0;
};
Planted plant(int k, int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> e(-3, 3);
    ExactMatrix L1 = oracle::random_generic(k, n, rng), R1 = oracle::random_generic(k, n, rng).transpose();
    Planted p{ExactMatrix(k, n, 1), ExactMatrix(n, k, 1), {}};
    Exponent unit{e(rng)};
    for (int c = 0; c < n; ++c) {
        Exponent ps{e(rng)};
        for (int r = 0; r < k; ++r) {
            p.L(r, c) = mono(exp_add(ps, unit), as_q(L1(r, c)));
            p.R(c, r) = mono({0}, as_q(R1(c, r)));
        }
        p.psi0.push_back(ps);
    }
    return p;
}

Outcome c1() {
    ExactMatrix L = load_matrix(data("ex12_left.json")), R = as_right_factor(load_matrix(data("ex12_right.json")));
    TermMap h = cauchy_binet_terms(L, R);
    long nonzero = 0, bad = 0;
    for (const auto& v : h.values) {
        if (v.is_zero()) continue;
        ++nonzero;
        auto m = as_monomial(v);
        if (!m || (m->exp[0] != 0 && m->exp[0] != 1)) ++bad;
    }
    auto mc = monomial_condition(h);
    const auto* m = std::get_if<MonomialAssignment>(&mc);
    std::optional<Exponent> c;
    if (m) c = curvature(*m, mask_of({1, 2, 3, 4}), 5, 6, 11, 12);
    ReductionResult r = check_reduction(L, R);
    bool pass = bad == 0 && nonzero > 0 && c && *c == Exponent{-2} && r.verdict == Verdict::NotReduced;
    return {pass, std::to_string(nonzero) + " nonzero terms, curvature " + (c ? std::to_string((*c)[0]) : "n/a") +
                      ", verdict " + verdict_str(r.verdict)};
}

Outcome c2() {
    ExactMatrix L = load_matrix(data("ex59_left.json")), R = as_right_factor(load_matrix(data("ex59_right.json")));
    TermMap h = cauchy_binet_terms(L, R);
    long zero = 0, non_mono = 0;
    for (const auto& v : h.right.values) zero += v.is_zero();
    for (const auto& v : h.values) non_mono += v.is_zero() || !as_monomial(v);
    auto mc = monomial_condition(h);
    long nonzero_curv = 0;
    if (auto* m = std::get_if<MonomialAssignment>(&mc)) nonzero_curv = static_cast<long>(curvature_scan(*m).nonzero.size());
    bool pass = h.right.values.size() == 15 && zero == 0 && non_mono == 0 && nonzero_curv > 0;
    return {pass, std::to_string(h.right.values.size() - zero) + "/15 minors nonzero, " + std::to_string(non_mono) +
                      " non-monomial products, " + std::to_string(nonzero_curv) + " nonzero curvatures"};
}

Outcome c3() {
    std::vector<std::string> nm{"t1", "t3"};
    LaurentPoly Q = parse_laurent("t1 - t3", nm), D = parse_laurent("t1^2 - 6*t1*t3 + t3^2", nm);
    SquarefreeParts sp = squarefree_decompose(Q * Q * D);
    bool qd = (sp.Q == Q || sp.Q == -Q) && sp.D == D && sp.unit == LaurentPoly::constant(2, 1);
    Reconstruction r = reconstruct_from_kernel(D);
    std::vector<std::array<LaurentPoly, 3>> want{
        {parse_laurent("t1", nm), parse_laurent("2*t1", nm), parse_laurent("t3", nm)},
        {parse_laurent("t1", nm), parse_laurent("2*t3", nm), parse_laurent("t3", nm)},
        {parse_laurent("t1^2", nm), parse_laurent("4*t1*t3", nm), parse_laurent("t3^2", nm)}};
    int found = 0;
    for (const auto& w : want)
        for (const auto& c : r.candidates)
            if (same_up_to_unit(c.chi, w)) {
                ++found;
                break;
            }
    bool pass = qd && found == 3 && r.candidates.size() == 3;
    return {pass, "Q = " + sp.Q.to_string(nm) + ", D = " + sp.D.to_string(nm) + ", " + std::to_string(found) +
                      "/3 configurations among " + std::to_string(r.candidates.size())};
}

Outcome c4() {
    std::mt19937 rng(4);
    long residuals = 0, nonzero = 0, perturbed = 0, flagged = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int k = 2 + trial % 3;
        int n = std::min(8, k + 2 + static_cast<int>(rng() % 4));
        ExactMatrix m = oracle::random_matrix(k, n, rng);
        MinorTable t = all_minors(m);
        PluckerScan s = plucker_scan(minor_fn(t), n, k, 0);
        residuals += s.checked;
        nonzero += s.nonzero;
        MinorTable p = t;
        std::size_t idx = rng() % p.values.size();
        p.values[idx] = p.values[idx] + QuadExtScalar::constant(0, 1);
        ++perturbed;
        if (plucker_scan(minor_fn(p), n, k, 0, true).nonzero > 0) ++flagged;
    }
    bool pass = nonzero == 0 && flagged * 100 >= perturbed * 95;
    return {pass, std::to_string(residuals) + " residuals, " + std::to_string(nonzero) + " nonzero; " +
                      std::to_string(flagged) + "/" + std::to_string(perturbed) + " perturbations flagged"};
}

Outcome c5() {
    std::mt19937 rng(5);
    long checked = 0, failed = 0;
    const int shapes[4][2] = {{2, 6}, {3, 6}, {2, 7}, {3, 7}};
    for (int trial = 0; trial < 100; ++trial) {
        int k = shapes[trial % 4][0], n = shapes[trial % 4][1];
        ExactMatrix R = oracle::random_generic(k, n, rng).transpose();
        MinorTable table = all_minors(R, Orientation::Rows);
        MinorFn f = minor_fn(table);
        for (Mask I : k_subsets(n, k)) {
            IdentityReport rep = check_identities(f, n, k, I);
            checked += rep.checked;
            failed += rep.failed;
        }
    }
    return {failed == 0, std::to_string(checked) + " identity and Y != -1 checks, " + std::to_string(failed) + " failed"};
}

Outcome c6() {
    std::mt19937 rng(6);
    int reduced = 0, verified = 0, gauge = 0, total = 0;
    for (int trial = 0; trial < 50; ++trial) {
        int k = trial % 2 ? 3 : 2, n = trial % 2 ? 8 : 7;
        Planted p = plant(k, n, rng);
        ++total;
        ReductionResult r = check_reduction(p.L, p.R);
        if (r.verdict != Verdict::Reduced) continue;
        ++reduced;
        if (verify_reduction(p.L, p.R, r.psi, r.m0).ok) ++verified;
        Exponent s = exp_sub(r.psi[0], p.psi0[0]);
        bool same = true;
        for (std::size_t u = 0; u < r.psi.size(); ++u) same = same && exp_sub(r.psi[u], p.psi0[u]) == s;
        gauge += same;
    }
    bool pass = reduced == total && verified == total && gauge == total;
    return {pass, std::to_string(reduced) + "/" + std::to_string(total) + " reduced, " + std::to_string(verified) +
                      " verified on every subset, " + std::to_string(gauge) + " equal to the planted potential up to a shift"};
}

Outcome c7() {
    std::mt19937 rng(7);
    long observable = 0, radical = 0;
    int instances = 0, hyp = 0;
    for (int trial = 0; trial < 25; ++trial) {
        int k = trial % 2 ? 3 : 2, n = trial % 2 ? 8 : 7;
        Planted p = plant(k, n, rng);
        ++instances;
        if (check_assumptions(p.L, p.R).all()) ++hyp;
        TermMap h = cauchy_binet_terms(p.L, p.R);
        for (Mask I : k_subsets(n, k)) {
            std::vector<int> in = elements(I), out;
            for (int a = 1; a <= n; ++a)
                if (!has(I, a)) out.push_back(a);
            for (std::size_t x = 0; x < in.size(); ++x)
                for (std::size_t y = x + 1; y < in.size(); ++y)
                    for (std::size_t u = 0; u < out.size(); ++u)
                        for (std::size_t v = u + 1; v < out.size(); ++v) {
                            ChiTriple chi = chi_triple(h, I, in[x], in[y], out[u], out[v]);
                            if (!chi.observable) continue;
                            ++observable;
                            if (ab_terms(chi).type != YType::InBaseField) ++radical;
                        }
        }
    }
    bool pass = hyp == instances && radical == 0 && observable > 0;
    return {pass, std::to_string(hyp) + "/" + std::to_string(instances) + " instances meet the hypotheses, " +
                      std::to_string(observable) + " observable B-terms, " + std::to_string(radical) + " not squares"};
}

struct ProtocolRun {
    bool accepted = false;
    std::optional<std::vector<int>> psi;
    std::optional<DecompositionPair> pair;
};

ProtocolRun protocol(const LabeledValues& g, const BasisPermutation& P, int n, int k) {
    ProtocolRun out;
    QueryPoint one;
    one.t.assign(static_cast<std::size_t>(n), Rational(1));
    Bounds b = bounds_query(oracle_answer(g, P, one));
    QueryPoint t0 = build_query(b, n, k, g.size());
    UnlabeledAnswer ans = oracle_answer(g, P, t0);
    RecoveredPermutation rec = recover_chain(ans, t0, b, n, k, &g);
    if (!rec.ok) return out;
    out.psi = rec.psi;
    LabelResult lr = verify_and_label(ans, *rec.psi, t0, g);
    if (!lr.ok) return out;
    MatrixRecovery m = recover_matrices(lr.gmap, n, k);
    if (!m.ok) return out;
    out.pair = m.pair;
    out.accepted = true;
    return out;
}

bool reproduces(const DecompositionPair& pair, const std::vector<int>& psi, const LabeledValues& g) {
    return product_terms(permute_columns(pair.a, psi), permute_rows(pair.q, psi)) == g;
}

Outcome c8() {
    std::mt19937 rng(8);
    int ok = 0, total = 0;
    for (int trial = 0; trial < 50; ++trial) {
        int n = trial % 2 ? 9 : 7;
        ExactMatrix a = oracle::random_generic(2, n, rng), q = oracle::random_generic(2, n, rng).transpose();
        LabeledValues g = product_terms(a, q);
        std::vector<int> psi0 = random_perm(n, rng);
        ProtocolRun r = protocol(g, induced_permutation(psi0, support_matroid(n, 2, g)), n, 2);
        ++total;
        if (r.accepted && *r.psi == psi0 && reproduces(*r.pair, psi0, g)) ++ok;
    }
    int rejected = 0, tried = 0;
    for (int trial = 0; trial < 20; ++trial) {
        ExactMatrix a = oracle::random_generic(2, 7, rng), q = oracle::random_generic(2, 7, rng).transpose();
        LabeledValues g = product_terms(a, q);
        std::vector<Mask> bases, img;
        for (const auto& [I, v] : g) bases.push_back(I);
        BasisPermutation P;
        do {
            img = bases;
            std::shuffle(img.begin(), img.end(), rng);
            P.clear();
            for (std::size_t u = 0; u < bases.size(); ++u) P[bases[u]] = img[u];
        } while (is_induced(P, 7));
        ++tried;
        if (!protocol(g, P, 7, 2).accepted) ++rejected;
    }
    bool pass = ok == total && rejected == tried;
    return {pass, std::to_string(ok) + "/" + std::to_string(total) + " planted instances recovered, " +
                      std::to_string(rejected) + "/" + std::to_string(tried) + " non-induced rejected"};
}

ExactMatrix integer_generic(int rows, int cols, std::mt19937& rng) {
    std::uniform_int_distribution<int> e(-4, 4);
    for (;;) {
        ExactMatrix m(rows, cols, 0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m(r, c) = QuadExtScalar::constant(0, e(rng));
        bool ok = true;
        for (const auto& v : all_minors(m).values) ok = ok && !v.is_zero();
        if (ok) return m;
    }
}

Outcome c9() {
    std::mt19937 rng(9);
    int ok = 0, total = 0, corrupted = 0, detected = 0;
    for (int trial = 0; trial < 20; ++trial) {
        ExactMatrix a = integer_generic(2, 7, rng), q = integer_generic(2, 7, rng).transpose();
        LabeledValues g = product_terms(a, q);
        std::vector<int> psi0 = random_perm(7, rng);
        BasisPermutation P = induced_permutation(psi0, support_matroid(7, 2, g));
        mpz_class maxG = 0;
        for (const auto& [I, v] : g) maxG = std::max(maxG, mpz_class(abs(v.get_num())));
        mpz_class delta = shortcut_delta(g, P, 7, 2);
        ShortcutResult s = integer_shortcut(maxG, delta, 7, 2, g.size(), &g);
        ProtocolRun full = protocol(g, P, 7, 2);
        ++total;
        if (s.ok && full.accepted && *s.psi == psi0 && s.recovery->pair->a == full.pair->a &&
            s.recovery->pair->q == full.pair->q && reproduces(*s.recovery->pair, psi0, g))
            ++ok;
        const mpz_class& B = s.query.base;
        std::size_t ndig = 0;
        for (mpz_class x = abs(delta); x != 0; x /= B) ++ndig;
        for (int c = 0; c < 5; ++c) {
            mpz_class place;
            mpz_pow_ui(place.get_mpz_t(), B.get_mpz_t(), static_cast<unsigned long>(rng() % ndig));
            mpz_class old = (abs(delta) / place) % B;
            mpz_class nd = (old + 1 + rng() % (B.get_ui() - 1)) % B;
            mpz_class bad = delta + (delta < 0 ? -1 : 1) * (nd - old) * place;
            ++corrupted;
            if (!integer_shortcut(maxG, bad, 7, 2, g.size(), &g).ok) ++detected;
        }
    }
    bool pass = ok == total && detected == corrupted;
    return {pass, std::to_string(ok) + "/" + std::to_string(total) + " decoded pairs equal the full protocol, " +
                      std::to_string(detected) + "/" + std::to_string(corrupted) + " corruptions detected"};
}

// Y_{ab} Y_{bc} = -Y_{ac} and Y^{ij} Y^{jm} = -Y^{im} wherever all three are assigned.
bool consistent(const YAssignment& y, int n, int k) {
    for (Mask I : k_subsets(n, k)) {
        std::vector<int> in = elements(I), out;
        for (int a = 1; a <= n; ++a)
            if (!has(I, a)) out.push_back(a);
        for (int i : in)
            for (int j : in) {
                if (i == j) continue;
                for (int a : out)
                    for (int b : out) {
                        if (a == b) continue;
                        auto yab = y.get({I, i, j, a, b});
                        if (!yab) continue;
                        for (int c : out) {
                            if (c == a || c == b) continue;
                            auto ybc = y.get({I, i, j, b, c}), yac = y.get({I, i, j, a, c});
                            if (ybc && yac && !(*yab * *ybc + *yac).is_zero()) return false;
                        }
                        for (int m : in) {
                            if (m == i || m == j) continue;
                            auto yim = y.get({I, i, m, a, b}), ymj = y.get({I, m, j, a, b});
                            if (yim && ymj && !(*yim * *ymj + *yab).is_zero()) return false;
                        }
                    }
            }
    }
    return true;
}

Outcome c10() {
    std::mt19937 rng(10);
    int ok = 0, total = 0;
    const int shapes[4][2] = {{2, 6}, {3, 6}, {2, 7}, {3, 7}};
    for (int trial = 0; trial < 12; ++trial) {
        int k = shapes[trial % 4][0], n = shapes[trial % 4][1];
        ExactMatrix L = oracle::random_generic(k, n, rng), R = oracle::random_generic(k, n, rng).transpose();
        TermMap h = cauchy_binet_terms(L, R);
        YAssignment truth = assignment_from_right(minor_fn(h.right), n, k);
        YAssignment other = assignment_from_right(minor_fn(h.left), n, k);
        Disambiguation d = disambiguate_roots(h);
        ++total;
        if (!d.ok || !d.solutions[0] || !d.solutions[1]) continue;
        auto equal = [](const YAssignment& s, const YAssignment& t) {
            bool all = s.size() == t.size();
            for (const auto& [c, v] : s.entries()) all = all && t.get(c) && *t.get(c) == v;
            return all;
        };
        bool both = consistent(*d.solutions[0], n, k) && consistent(*d.solutions[1], n, k);
        bool split = (equal(*d.solutions[0], truth) && equal(*d.solutions[1], other)) ||
                     (equal(*d.solutions[1], truth) && equal(*d.solutions[0], other));
        if (both && split) ++ok;
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                             " instances: both seeds consistent, one equals the right factor's Y-terms, the other the left's"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all{
        {1, "degree-one pair with negative curvature", 5, c1},
        {2, "monomial pair with generic right factor", 2, c2},
        {3, "square-free split and kernel reconstruction", 2, c3},
        {4, "Pluecker suite", 30, c4},
        {5, "Y-identity suite", 60, c5},
        {6, "reduction round trip", 120, c6},
        {7, "no radical Y-terms under the hypotheses", 120, c7},
        {8, "protocol round trip", 180, c8},
        {9, "two-scalar shortcut", 60, c9},
        {10, "root disambiguation", 60, c10},
    };
    int failures = 0;
    for (const auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = s <= c.budget_s;
        bool pass = o.pass && in_time;
        failures += !pass;
        std::printf("criterion %2d %s: %s (%.2f s of %.0f s) %s%s\n", c.id, c.name, pass ? "PASS" : "FAIL", s,
                    c.budget_s, o.detail.c_str(), in_time ? "" : " [over time budget]");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
