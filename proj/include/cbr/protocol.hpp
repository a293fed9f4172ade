#ifndef CBR_PROTOCOL_HPP
#define CBR_PROTOCOL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cbr/matroid.hpp"
#include "cbr/yalg.hpp"

namespace cbr {

// Basis-labelled constants I -> g(I); absent keys are zero.
using LabeledValues = std::map<Mask, Rational>;

// g(I) = Delta_a(I) Delta_q(I) on its support.  a is k x n, q is n x k.
LabeledValues product_terms(const ExactMatrix& a, const ExactMatrix& q);
Matroid support_matroid(int n, int k, const LabeledValues& g);

// Permutation of a basis family, I -> Psi(I).
using BasisPermutation = std::map<Mask, Mask>;
// psi[x-1] = image of x.
BasisPermutation induced_permutation(const std::vector<int>& psi, const Matroid& M);
bool is_induced(const BasisPermutation& P, int n);  // brute force over S_n; tests and small n only
Mask apply_psi(const std::vector<int>& psi, Mask I);

struct QueryPoint {
    std::vector<Rational> t;  // t[s-1] > 0
};
Rational monomial_at(const QueryPoint& t0, Mask A);  // prod_{s in A} t_s

struct UnlabeledAnswer {
    std::vector<Rational> values;  // ascending
};

// Sorted {g(I) t0^{Psi(I)}}.  Throws std::invalid_argument if Psi is not a
// bijection of the support of g onto itself.
UnlabeledAnswer oracle_answer(const LabeledValues& g, const BasisPermutation& Psi, const QueryPoint& t0);
UnlabeledAnswer oracle_answer(const ExactMatrix& a, const ExactMatrix& q, const BasisPermutation& Psi,
                              const QueryPoint& t0);

struct Bounds {
    Rational lambda, mu;
    std::optional<Rational> L;  // upper bound on log(2 + max|g|), shortcut only
};
// lambda = min|v|/2 (1 when every value is an integer), mu = 2 max|v|.
// Throws std::domain_error on a zero value.
Bounds bounds_query(const UnlabeledAnswer& at_one);

// Separation ratio t_{s+1} t_1^{k-1} / t_s^k.
Rational separation_ratio(const QueryPoint& t0, int k, int s);
bool satisfies_separation(const QueryPoint& t0, const Bounds& b, int k, std::size_t g_size);
// t_1 = 1 and t_{s+1} the least integer strictly above the bound.
QueryPoint build_query(const Bounds& b, int n, int k, std::size_t g_size);

// One answer value with its exponent set and coefficient v / t0^A.
struct DecodedTerm {
    Mask set = 0;
    Rational coeff;
    Rational value;
};

struct RecoveredPermutation {
    bool ok = false;
    std::string stage;  // "decode", "chain", "labels" on failure
    std::string error;
    std::vector<DecodedTerm> decoded;  // ascending magnitude
    // Exponent-set chain A^(k-1), A^(k), ... and its thresholds T_k, T_{k+1}, ...
    std::vector<Mask> chain;
    std::vector<Rational> thresholds;
    // Preimages of the chain under the reference labelling.
    std::vector<Mask> label_chain;
    std::optional<std::vector<int>> psi;
};
// Decodes every value by magnitude, builds the threshold chain and, given a
// labelled reference g, identifies the element permutation.  Without a
// reference only the decoding and the chain are produced.
RecoveredPermutation recover_chain(const UnlabeledAnswer& answer, const QueryPoint& t0, const Bounds& b, int n, int k,
                                   const LabeledValues* reference = nullptr);

// Element permutations consistent with (set, coeff) pairs and a reference.
std::optional<std::vector<int>> match_labels(const std::vector<DecodedTerm>& decoded, const LabeledValues& reference,
                                             int n, int k, std::string* why = nullptr);

struct LabelResult {
    bool ok = false;
    std::string error;
    Rational answer_sum, rebuilt_sum;
    LabeledValues gmap;  // keyed by exponent sets: g o psi^{-1}
};
// Sum of the answer against sum_I g(I) t0^{psi(I)}; the relabelled map.
LabelResult verify_and_label(const UnlabeledAnswer& answer, const std::vector<int>& psi, const QueryPoint& t0,
                             const LabeledValues& reference);
// Without a reference the decoded map is the label map.
LabeledValues label_map(const std::vector<DecodedTerm>& decoded);

struct DecompositionPair {
    ExactMatrix a, q;
    LabeledValues gmap;
};

struct MatrixRecovery {
    bool ok = false;
    bool hypothesis_failed = false;
    std::string stage;  // "generic-columns", "pivot", "roots", "gauge", "plucker"
    std::string error;
    std::optional<GenericColumns> columns;
    int pivot = 0;
    int seed_used = -1;
    std::optional<Mask> mismatch;  // first basis whose minor product differs
    std::optional<std::pair<Mask, std::vector<int>>> plucker_witness;
    bool q_generic = false;
    std::optional<DecompositionPair> pair;
};
// Gauge-form q from the selected Y-terms at one basis, then Delta_a = g / Delta_q
// and a rebuilt from those coordinates.  Both root seeds are tried in order.
MatrixRecovery recover_matrices(const LabeledValues& gmap, int n, int k);

// a(psi) columns / q(psi) rows permuted back: position x takes psi(x).
ExactMatrix permute_columns(const ExactMatrix& a, const std::vector<int>& psi);
ExactMatrix permute_rows(const ExactMatrix& q, const std::vector<int>& psi);

// ------------------------------------------------------ two-scalar shortcut

// Smallest integer c >= 0 with e^c >= N (N >= 1), from rational bounds on e.
long ceil_ln(const mpz_class& N);

struct ShortcutQuery {
    mpz_class base;   // B = 2 + maxG
    long block = 0;   // c = ceil(log(2 #G) + log B)
    QueryPoint t0;    // t_s = B^{c (k^{s-1} - 1)/(k - 1)}
};
ShortcutQuery shortcut_query(const mpz_class& maxG, int n, int k, std::size_t g_size);
// Block position of an exponent set: sum_{s in A} (k^{s-1} - 1)/(k - 1).
mpz_class block_position(Mask A, int k);
std::optional<Mask> set_from_position(const mpz_class& P, int n, int k);

struct ShortcutResult {
    bool ok = false;
    std::string stage;  // "decode", "labels", "sum", "matrices"
    std::string error;
    ShortcutQuery query;
    std::vector<DecodedTerm> decoded;  // by block position
    std::optional<std::vector<int>> psi;
    LabeledValues gmap;
    std::optional<MatrixRecovery> recovery;
};
// Decodes the base-B^c balanced digits of delta into exponent sets and
// coefficients, then labels (when a reference is given) and recovers (a, q).
ShortcutResult integer_shortcut(const mpz_class& maxG, const mpz_class& delta, int n, int k, std::size_t g_size,
                                const LabeledValues* reference = nullptr);
// Delta at the shortcut query for a labelled instance.
mpz_class shortcut_delta(const LabeledValues& g, const BasisPermutation& Psi, int n, int k);

}  // namespace cbr

#endif
