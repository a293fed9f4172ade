#ifndef CBR_REDUCE_HPP
#define CBR_REDUCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "cbr/expansion.hpp"
#include "cbr/matroid.hpp"

namespace cbr {

struct AssumptionReport {
    int n = 0, k = 0;
    bool r_generic = false;
    std::optional<Mask> r_zero_minor;       // first vanishing minor of R
    bool generic_columns = false;
    std::optional<GenericColumns> columns;  // witness in the matroid of L(1)
    bool dimension_bound = false;           // max{k, n-k} >= 5 (dualising keeps the maximum)
    std::string evaluation_error;           // L(1) undefined
    bool all() const { return r_generic && generic_columns && dimension_bound; }
};
AssumptionReport check_assumptions(const ExactMatrix& L, const ExactMatrix& R);
AssumptionReport check_assumptions(const ExactMatrix& L, const TermMap& h);

// Psi(J^j_beta) - Psi(J): exponent of Delta(J)^{-1} Delta(J^j_beta) in the
// gauge where the right factor is constant.
struct ColumnIncrement {
    int j = 0, beta = 0;
    Mask basis = 0;
    Exponent value;
};
std::optional<ColumnIncrement> column_increment(const MonomialAssignment& m, Mask J, int j, int beta);

enum class Verdict { Reduced, NotReduced, HypothesisFailed };
std::string verdict_str(Verdict v);

struct ReductionResult {
    Verdict verdict = Verdict::NotReduced;
    AssumptionReport assumptions;
    std::string reason;  // short machine-readable cause
    // Reduced
    std::vector<Exponent> psi;  // psi[a-1]
    Exponent m0;
    Mask basis = 0;
    int alpha1 = 0;
    // NotReduced witnesses
    std::optional<NonMonomialWitness> non_monomial;
    std::optional<CurvatureWitness> curvature;
    std::optional<Mask> verify_failure;
    long curvature_evaluable = 0;
};

// Monomial condition and curvature are tested first, so a violation is
// reported even when the hypotheses fail; then the hypotheses; then the
// potential is built from one basis and verified on every k-subset.
ReductionResult check_reduction(const ExactMatrix& L, const ExactMatrix& R);

struct VerifyResult {
    bool ok = false;
    std::optional<Mask> first_failure;
};
// h_t(I) == t^{m0} h_1(I) prod_{a in I} t^{psi(a)} for every k-subset.
VerifyResult verify_reduction(const ExactMatrix& L, const ExactMatrix& R, const std::vector<Exponent>& psi,
                              const Exponent& m0);
VerifyResult verify_reduction(const TermMap& h_t, const TermMap& h_1, const std::vector<Exponent>& psi,
                              const Exponent& m0);

ExactMatrix evaluate_at_one(const ExactMatrix& m);

}  // namespace cbr

#endif
