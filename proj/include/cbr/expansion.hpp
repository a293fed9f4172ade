#ifndef CBR_EXPANSION_HPP
#define CBR_EXPANSION_HPP

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "cbr/matrix.hpp"

namespace cbr {

// h(I) = Delta_L(I) Delta_R(I) for every k-subset, with both minor tables.
struct TermMap {
    int n = 0, k = 0, d = 0;
    std::vector<std::string> names;
    MinorTable left, right;              // empty when built from bare values
    std::vector<QuadExtScalar> values;   // by colex rank
    const QuadExtScalar& at(Mask m) const { return values[colex_rank(m)]; }
    bool has_factors() const { return !left.values.empty(); }
};

// Throws std::invalid_argument on shape mismatch and std::logic_error if the
// terms fail to sum to det(L R).
TermMap cauchy_binet_terms(const ExactMatrix& L, const ExactMatrix& R);
TermMap term_map_from_values(int n, int k, int d, std::vector<QuadExtScalar> values);
QuadExtScalar term_sum(const TermMap& h);

// c * t^e with c a constant of F(sqrt D).
struct MonomialValue {
    QuadExtScalar coeff;
    Exponent exp;
};
// A value is a monomial when its radical part vanishes and the rest is a
// single term, or when it is a pure radical with constant discriminant.
std::optional<MonomialValue> as_monomial(const QuadExtScalar& x);

struct ChiTriple {
    Mask basis = 0;
    int i = 0, j = 0, alpha = 0, beta = 0;
    // (h(I) h(I^{ij}_{ab}), h(I^i_a) h(I^j_b), h(I^i_b) h(I^j_a))
    std::array<QuadExtScalar, 3> values;
    bool observable = false;
    bool integrable = false;
    std::optional<Exponent> ground;  // when all nonzero values are Laurent
};
ChiTriple chi_triple(const TermMap& h, Mask I, int i, int j, int alpha, int beta);

// Per-basis (g, Psi) for the nonzero terms.
struct MonomialAssignment {
    int n = 0, k = 0, d = 0;
    std::vector<std::optional<MonomialValue>> terms;  // by colex rank; nullopt off the domain
    const std::optional<MonomialValue>& at(Mask m) const { return terms[colex_rank(m)]; }
    bool in_domain(Mask m) const { return at(m).has_value(); }
};
struct NonMonomialWitness {
    Mask basis = 0;
    QuadExtScalar value;
};
std::variant<MonomialAssignment, NonMonomialWitness> monomial_condition(const TermMap& h);
// Assignment built from exponents directly (for tests and protocol code).
MonomialAssignment assignment_from(int n, int k, int d, const std::vector<std::pair<Mask, Exponent>>& psi);

// Psi(H a1 a2) + Psi(H b1 b2) - Psi(H a1 b2) - Psi(H b1 a2); nullopt when a
// set lies outside the domain.
std::optional<Exponent> curvature(const MonomialAssignment& m, Mask H, int a1, int a2, int b1, int b2);

struct CurvatureWitness {
    Mask H = 0;
    int a1 = 0, a2 = 0, b1 = 0, b2 = 0;
    Exponent value;
};
struct CurvatureScan {
    long evaluable = 0, not_evaluable = 0;
    std::vector<CurvatureWitness> nonzero;
};
// Every quadruple up to the order-4 symmetry (a1<->b1, a2<->b2), (a1<->a2, b1<->b2).
CurvatureScan curvature_scan(const MonomialAssignment& m, bool stop_at_first = false);

}  // namespace cbr

#endif
