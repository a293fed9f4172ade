#include "cbr/reduce.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbr {

std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::Reduced: return "Reduced";
        case Verdict::NotReduced: return "NotReduced";
        case Verdict::HypothesisFailed: return "HypothesisFailed";
    }
    return "?";
}

ExactMatrix evaluate_at_one(const ExactMatrix& m) {
    return evaluate_matrix(m, std::vector<Rational>(static_cast<std::size_t>(m.nvars()), Rational(1)));
}

namespace {

AssumptionReport assumptions_from(const ExactMatrix& L, const MinorTable& right) {
    AssumptionReport a;
    a.n = L.cols();
    a.k = L.rows();
    a.r_generic = true;
    for (Mask s : k_subsets(a.n, a.k))
        if (right.at(s).is_zero()) {
            a.r_generic = false;
            a.r_zero_minor = s;
            break;
        }
    a.dimension_bound = std::max(a.k, a.n - a.k) >= 5;
    try {
        Matroid M = matroid_of(evaluate_at_one(L));
        a.columns = find_generic_columns(M);
        a.generic_columns = a.columns.has_value();
    } catch (const std::exception& e) {
        a.evaluation_error = e.what();
    }
    return a;
}

}  // namespace

AssumptionReport check_assumptions(const ExactMatrix& L, const ExactMatrix& R) {
    return assumptions_from(L, all_minors(R, Orientation::Rows));
}

AssumptionReport check_assumptions(const ExactMatrix& L, const TermMap& h) { return assumptions_from(L, h.right); }

std::optional<ColumnIncrement> column_increment(const MonomialAssignment& m, Mask J, int j, int beta) {
    if (!has(J, j) || has(J, beta)) throw std::invalid_argument("column_increment: need j in J, beta outside J");
    Mask Jx = exchange(J, j, beta);
    if (!m.in_domain(J) || !m.in_domain(Jx)) return std::nullopt;
    return ColumnIncrement{j, beta, J, exp_sub(m.at(Jx)->exp, m.at(J)->exp)};
}

VerifyResult verify_reduction(const TermMap& h_t, const TermMap& h_1, const std::vector<Exponent>& psi,
                              const Exponent& m0) {
    if (static_cast<int>(psi.size()) != h_t.n) throw std::invalid_argument("verify_reduction: psi must cover [n]");
    std::vector<Mask> subs = k_subsets(h_t.n, h_t.k);
    const long N = static_cast<long>(subs.size());
    long first = N;
#pragma omp parallel for schedule(dynamic, 16) reduction(min : first)
    for (long u = 0; u < N; ++u) {
        Mask s = subs[static_cast<std::size_t>(u)];
        Exponent e = m0;
        for (int a : elements(s)) e = exp_add(e, psi[static_cast<std::size_t>(a - 1)]);
        QuadExtScalar expect = h_1.at(s) * QuadExtScalar(RationalFunction(LaurentPoly::monomial(e)));
        if (expect != h_t.at(s)) first = std::min(first, u);
    }
    VerifyResult r;
    r.ok = first == N;
    if (!r.ok) r.first_failure = subs[static_cast<std::size_t>(first)];
    return r;
}

VerifyResult verify_reduction(const ExactMatrix& L, const ExactMatrix& R, const std::vector<Exponent>& psi,
                              const Exponent& m0) {
    TermMap ht = cauchy_binet_terms(L, R);
    TermMap h1 = cauchy_binet_terms(evaluate_at_one(L), evaluate_at_one(R));
    return verify_reduction(ht, h1, psi, m0);
}

ReductionResult check_reduction(const ExactMatrix& L, const ExactMatrix& R) {
    ReductionResult res;
    TermMap h = cauchy_binet_terms(L, R);
    const int n = h.n, k = h.k, d = h.d;

    auto mc = monomial_condition(h);
    if (auto* w = std::get_if<NonMonomialWitness>(&mc)) {
        res.verdict = Verdict::NotReduced;
        res.reason = "non-monomial term";
        res.non_monomial = *w;
        res.assumptions = check_assumptions(L, h);
        return res;
    }
    const MonomialAssignment& m = std::get<MonomialAssignment>(mc);
    CurvatureScan scan = curvature_scan(m, true);
    res.curvature_evaluable = scan.evaluable;
    res.assumptions = check_assumptions(L, h);
    if (!scan.nonzero.empty()) {
        res.verdict = Verdict::NotReduced;
        res.reason = "nonzero curvature";
        res.curvature = scan.nonzero.front();
        return res;
    }
    const AssumptionReport& a = res.assumptions;
    if (!a.evaluation_error.empty()) {
        res.verdict = Verdict::HypothesisFailed;
        res.reason = "L(1) undefined: " + a.evaluation_error;
        return res;
    }
    if (!a.r_generic || !a.generic_columns || !a.dimension_bound) {
        res.verdict = Verdict::HypothesisFailed;
        res.reason = !a.r_generic ? "R not generic" : !a.generic_columns ? "no two generic columns" : "dimension bound";
        return res;
    }

    const Mask I = a.columns->basis;
    const int alpha1 = a.columns->alpha1;
    res.basis = I;
    res.alpha1 = alpha1;
    std::vector<Exponent> psi(static_cast<std::size_t>(n), Exponent(static_cast<std::size_t>(d), 0));
    auto fail = [&](const std::string& why) {
        res.verdict = Verdict::NotReduced;
        res.reason = why;
        return res;
    };
    if (!m.in_domain(I)) return fail("generic basis outside the support of h");
    for (int p : elements(I)) {
        auto c = column_increment(m, I, p, alpha1);
        if (!c) return fail("exchange with the generic column leaves the support of h");
        psi[static_cast<std::size_t>(p - 1)] = exp_scale(c->value, -1);
    }
    for (int w = 1; w <= n; ++w) {
        if (has(I, w) || w == alpha1) continue;
        for (int p : elements(I)) {
            if (auto c = column_increment(m, I, p, w)) {
                psi[static_cast<std::size_t>(w - 1)] = exp_add(c->value, psi[static_cast<std::size_t>(p - 1)]);
                break;
            }
        }
    }
    Exponent m0 = m.at(I)->exp;
    for (int p : elements(I)) m0 = exp_sub(m0, psi[static_cast<std::size_t>(p - 1)]);

    TermMap h1 = cauchy_binet_terms(evaluate_at_one(L), evaluate_at_one(R));
    VerifyResult v = verify_reduction(h, h1, psi, m0);
    if (!v.ok) {
        res.verify_failure = v.first_failure;
        return fail("potential fails on a k-subset");
    }
    res.verdict = Verdict::Reduced;
    res.reason = "affine set function";
    res.psi = std::move(psi);
    res.m0 = std::move(m0);
    return res;
}

}  // namespace cbr
