#include "cbr/expansion.hpp"

#include <stdexcept>

namespace cbr {

TermMap cauchy_binet_terms(const ExactMatrix& L, const ExactMatrix& R) {
    if (L.cols() != R.rows() || L.rows() != R.cols())
        throw std::invalid_argument("cauchy_binet_terms: L must be k x n and R n x k");
    if (L.nvars() != R.nvars()) throw std::invalid_argument("cauchy_binet_terms: variable count differs");
    TermMap h;
    h.n = L.cols();
    h.k = L.rows();
    h.d = L.nvars();
    h.names = L.names.empty() ? R.names : L.names;
    h.left = all_minors(L, Orientation::Columns);
    h.right = all_minors(R, Orientation::Rows);
    h.values.resize(h.left.values.size());
    for (std::size_t r = 0; r < h.values.size(); ++r) h.values[r] = h.left.values[r] * h.right.values[r];
    ExactMatrix P = L * R;
    Square s(static_cast<std::size_t>(h.k));
    for (int r = 0; r < h.k; ++r)
        for (int c = 0; c < h.k; ++c) s[r].push_back(P(r, c));
    if (determinant(std::move(s), h.d) != term_sum(h))
        throw std::logic_error("Cauchy-Binet terms do not sum to det(L R)");
    return h;
}

TermMap term_map_from_values(int n, int k, int d, std::vector<QuadExtScalar> values) {
    if (values.size() != binomial(n, k)) throw std::invalid_argument("term_map_from_values: need C(n,k) values");
    TermMap h;
    h.n = n;
    h.k = k;
    h.d = d;
    h.names = default_names(d);
    h.values = std::move(values);
    return h;
}

QuadExtScalar term_sum(const TermMap& h) {
    QuadExtScalar total(h.d);
    for (const auto& v : h.values) total = total + v;
    return total;
}

std::optional<MonomialValue> as_monomial(const QuadExtScalar& x) {
    int d = x.nvars();
    if (x.in_base_field()) {
        if (!x.rat().is_monomial()) return std::nullopt;
        const LaurentPoly& p = x.rat().num();
        Rational c = p.lead_coeff() / x.rat().den().constant_value();
        return MonomialValue{QuadExtScalar::constant(d, c), p.lead_exp()};
    }
    if (!x.rat().is_zero() || !x.rad().is_monomial() || !x.disc()->is_constant()) return std::nullopt;
    const LaurentPoly& p = x.rad().num();
    Rational c = p.lead_coeff() / x.rad().den().constant_value();
    return MonomialValue{QuadExtScalar(RationalFunction(d), RationalFunction::constant(d, c), x.disc()), p.lead_exp()};
}

ChiTriple chi_triple(const TermMap& h, Mask I, int i, int j, int alpha, int beta) {
    if (i == j || alpha == beta) throw std::invalid_argument("chi_triple: indices must differ");
    if (!has(I, i) || !has(I, j) || has(I, alpha) || has(I, beta))
        throw std::invalid_argument("chi_triple: need i,j in I and alpha,beta outside I");
    ChiTriple c;
    c.basis = I;
    c.i = i;
    c.j = j;
    c.alpha = alpha;
    c.beta = beta;
    c.values[0] = h.at(I) * h.at(exchange(exchange(I, i, alpha), j, beta));
    c.values[1] = h.at(exchange(I, i, alpha)) * h.at(exchange(I, j, beta));
    c.values[2] = h.at(exchange(I, i, beta)) * h.at(exchange(I, j, alpha));
    std::vector<LaurentPoly> laurent;
    bool all_laurent = true;
    std::optional<Exponent> common;
    bool integrable = true;
    for (const auto& v : c.values) {
        if (v.is_zero()) continue;
        c.observable = true;
        auto m = as_monomial(v);
        if (!m || (common && *common != m->exp))
            integrable = false;
        else
            common = m->exp;
        if (v.in_base_field() && v.rat().is_laurent())
            laurent.push_back(v.rat().num() * LaurentPoly::constant(h.d, 1 / v.rat().den().constant_value()));
        else
            all_laurent = false;
    }
    c.integrable = c.observable && integrable;
    if (c.observable && all_laurent) c.ground = ground_monomial(laurent);
    return c;
}

std::variant<MonomialAssignment, NonMonomialWitness> monomial_condition(const TermMap& h) {
    MonomialAssignment a;
    a.n = h.n;
    a.k = h.k;
    a.d = h.d;
    a.terms.resize(h.values.size());
    for (Mask s : k_subsets(h.n, h.k)) {
        const QuadExtScalar& v = h.at(s);
        if (v.is_zero()) continue;
        auto m = as_monomial(v);
        if (!m) return NonMonomialWitness{s, v};
        a.terms[colex_rank(s)] = std::move(m);
    }
    return a;
}

MonomialAssignment assignment_from(int n, int k, int d, const std::vector<std::pair<Mask, Exponent>>& psi) {
    MonomialAssignment a;
    a.n = n;
    a.k = k;
    a.d = d;
    a.terms.resize(binomial(n, k));
    for (const auto& [m, e] : psi) a.terms[colex_rank(m)] = MonomialValue{QuadExtScalar::constant(d, 1), e};
    return a;
}

std::optional<Exponent> curvature(const MonomialAssignment& m, Mask H, int a1, int a2, int b1, int b2) {
    const int ds[4] = {a1, a2, b1, b2};
    for (int x = 0; x < 4; ++x) {
        if (has(H, ds[x])) throw std::invalid_argument("curvature: index inside H");
        for (int y = x + 1; y < 4; ++y)
            if (ds[x] == ds[y]) throw std::invalid_argument("curvature: indices must be distinct");
    }
    const auto& p = m.at(H | bit(a1) | bit(a2));
    const auto& q = m.at(H | bit(b1) | bit(b2));
    const auto& r = m.at(H | bit(a1) | bit(b2));
    const auto& s = m.at(H | bit(b1) | bit(a2));
    if (!p || !q || !r || !s) return std::nullopt;
    return exp_sub(exp_sub(exp_add(p->exp, q->exp), r->exp), s->exp);
}

namespace {
bool canonical_roles(int a1, int a2, int b1, int b2) {
    std::array<int, 4> me{a1, a2, b1, b2};
    std::array<std::array<int, 4>, 3> others{{{b1, b2, a1, a2}, {a2, a1, b2, b1}, {b2, b1, a2, a1}}};
    for (const auto& o : others)
        if (o < me) return false;
    return true;
}
}  // namespace

CurvatureScan curvature_scan(const MonomialAssignment& m, bool stop_at_first) {
    CurvatureScan out;
    if (m.k < 2) return out;
    Exponent zero(static_cast<std::size_t>(m.d), 0);
    for (Mask H : k_subsets(m.n, m.k - 2)) {
        std::vector<int> rest;
        for (int a = 1; a <= m.n; ++a)
            if (!has(H, a)) rest.push_back(a);
        for (int a1 : rest)
            for (int a2 : rest)
                for (int b1 : rest)
                    for (int b2 : rest) {
                        if (a1 == a2 || a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2 || b1 == b2) continue;
                        if (!canonical_roles(a1, a2, b1, b2)) continue;
                        auto v = curvature(m, H, a1, a2, b1, b2);
                        if (!v) {
                            ++out.not_evaluable;
                            continue;
                        }
                        ++out.evaluable;
                        if (*v != zero) {
                            out.nonzero.push_back({H, a1, a2, b1, b2, *v});
                            if (stop_at_first) return out;
                        }
                    }
    }
    return out;
}

}  // namespace cbr
