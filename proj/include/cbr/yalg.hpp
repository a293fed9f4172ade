#ifndef CBR_YALG_HPP
#define CBR_YALG_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cbr/expansion.hpp"
#include "cbr/matroid.hpp"

namespace cbr {

// Index context (I; i, j; alpha, beta) with i, j in I and alpha, beta outside.
struct YContext {
    Mask basis = 0;
    int i = 0, j = 0, alpha = 0, beta = 0;
    friend bool operator==(const YContext& a, const YContext& b) {
        return a.basis == b.basis && a.i == b.i && a.j == b.j && a.alpha == b.alpha && a.beta == b.beta;
    }
};
std::string context_str(const YContext& c);
bool valid_context(const YContext& c);

// c1 c2 = -sign[(i-a)(i-b)(j-a)(j-b)]
int y_sign(int i, int j, int alpha, int beta);

// Y = c1c2 Delta(I^i_a) Delta(I^j_b) / (Delta(I^i_b) Delta(I^j_a)) over the
// right factor's row minors.  Throws std::domain_error on a vanishing minor.
QuadExtScalar y_from_minors(const MinorFn& right, const YContext& c);

enum class YTransform { Invert, Vertical, Diagonal };
struct YTerm {
    YContext ctx;
    QuadExtScalar value;
};
// Invert:   Y(I)^{ij}_{ba}   = 1/Y
// Vertical: Y(I^i_a)^{aj}_{ib} = -Y - 1
// Diagonal: Y(I^i_b)^{bj}_{ai} = -1/(1 + 1/Y)
YTerm transform_y(const YTerm& y, YTransform op);

// Residuals of the product identities and the local transformations at
// basis I, checked over every admissible index tuple.
struct IdentityReport {
    long checked = 0;
    long failed = 0;
    std::vector<std::string> failures;  // first few
};
IdentityReport check_identities(const MinorFn& right, int n, int k, Mask I);

// B(x, y, z) = (x - y - z)^2 - 4 y z
QuadExtScalar b_function(const QuadExtScalar& x, const QuadExtScalar& y, const QuadExtScalar& z);
LaurentPoly b_function(const LaurentPoly& x, const LaurentPoly& y, const LaurentPoly& z);

enum class YType {
    Unobservable,
    InBaseField,     // B is a square: both roots lie in F
    RadicalConstant, // sqrt of a non-square constant
    RadicalUnit,     // sqrt of a non-square monomial
    SType,           // two-term discriminant
    GTypeI,          // three or more terms, Q a monomial
    GTypeII,         // three or more terms, Q a binomial
    GTypeOther,
    Unsupported      // B outside F or not reducible to Laurent form
};
std::string ytype_str(YType t);

struct ABData {
    ChiTriple chi;
    QuadExtScalar A, B;
    YType type = YType::Unobservable;
    std::optional<Exponent> ground;  // G
    RationalFunction Q;              // B = unit * Q^2 * D
    LaurentPoly D, unit;
    LaurentPoly kernel;              // unit * D
    std::optional<LaurentPoly> Qhat; // Q / t^G when Laurent
    int omega = 0;                   // #Supp(D)
    std::optional<int> lambda;       // position of the odd term when two chi values are proportional; 0 if all three are
};
ABData ab_terms(const ChiTriple& chi);
std::optional<int> lambda_position(const std::array<QuadExtScalar, 3>& chi);

// Roots of chi2 X^2 - A X + chi1, the root with +sqrt(B) first.
struct YRoots {
    std::vector<QuadExtScalar> roots;
    bool linear = false;
    bool double_root = false;
    std::string note;  // empty unless roots could not be formed
};
YRoots y_roots(const ChiTriple& chi, const DiscPtr& hint = nullptr);

// E2^{d1} / (E3^{d1-d2} E1^{d2}) == ((d1-d2)/d1)^{-2(d1-d2)} (d2/d1)^{-2 d2}
bool resonance_check(const LaurentPoly& E1, const LaurentPoly& E2, const LaurentPoly& E3, int d1, int d2);

// Monomial chi configurations reproducing a squarefree discriminant kernel.
struct Configuration {
    std::array<LaurentPoly, 3> chi;
    std::string kind;  // "I", "II", "S"
    std::optional<Rational> rho;  // class II
    int table_sign = 0, table_p = 0;  // S-type row
};
struct Reconstruction {
    LaurentPoly kernel;
    int omega = 0;
    std::vector<Configuration> candidates;
    std::vector<std::string> notes;
};
Reconstruction reconstruct_from_kernel(const LaurentPoly& kernel);
// Kernel of B(x, y, z) for monomial triples (unit * D).
std::optional<LaurentPoly> discriminant_kernel(const std::array<LaurentPoly, 3>& chi);
bool same_up_to_unit(const std::array<LaurentPoly, 3>& a, const std::array<LaurentPoly, 3>& b);
// Presentation form: ground monomial divided out, integer coprime coefficients.
std::array<LaurentPoly, 3> normalize_triple(const std::array<LaurentPoly, 3>& t);

// --------------------------------------------------------- root selection

// Values keyed by normalised contexts (i<j, alpha<beta); lookups in other
// orientations invert as needed.
class YAssignment {
public:
    YAssignment() = default;
    YAssignment(int n, int k) : n_(n), k_(k) {}
    int n() const { return n_; }
    int k() const { return k_; }
    std::optional<QuadExtScalar> get(const YContext& c) const;
    void set(const YContext& c, const QuadExtScalar& v);
    std::size_t size() const { return values_.size(); }
    std::vector<std::pair<YContext, QuadExtScalar>> entries() const;  // sorted

private:
    int n_ = 0, k_ = 0;
    std::unordered_map<std::uint64_t, QuadExtScalar> values_;
};
YAssignment assignment_from_right(const MinorFn& right, int n, int k);

struct Disambiguation {
    bool ok = false;
    std::string error;
    std::optional<YContext> seed;
    long observable = 0;
    std::array<std::optional<YAssignment>, 2> solutions;  // per seed root
    std::array<std::string, 2> failures;
};
// Every context over every k-subset.  A context is a variable whose domain
// is the admissible roots (0 and -1 excluded); the product identities and the
// vertical transformation are propagated to a fixpoint, branching when
// needed.  `bases` restricts the k-subsets used (empty = all).
Disambiguation disambiguate_roots(const TermMap& h, const std::vector<Mask>& bases = {});

// Constant Y-terms whose two partners are radical (S-type) must be one of
// -1/2, 1, -2.
struct KappaReport {
    long checked = 0;
    std::vector<std::pair<YContext, QuadExtScalar>> violations;
};
KappaReport kappa_check(const YAssignment& y, Mask I);

}  // namespace cbr

#endif
