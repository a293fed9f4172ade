#ifndef CBR_LAURENT_HPP
#define CBR_LAURENT_HPP

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cbr {

using Rational = mpq_class;
using Integer = mpz_class;
using Exponent = std::vector<int>;

Exponent exp_add(const Exponent& a, const Exponent& b);
Exponent exp_sub(const Exponent& a, const Exponent& b);
Exponent exp_scale(const Exponent& a, int s);
std::string exp_to_string(const Exponent& e);

// Lexicographic comparison with a declared variable priority: priority[0]
// is compared first.  Identity priority is plain lexicographic order.
struct MonomialOrder {
    std::vector<int> priority;
    static MonomialOrder lex(int d);
    bool less(const Exponent& a, const Exponent& b) const;
};

// Sparse multivariate Laurent polynomial with rational coefficients.
// Terms are kept in a std::map ordered lexicographically (t1 first), so the
// last entry is the leading term.
class LaurentPoly {
public:
    using TermMap = std::map<Exponent, Rational>;

    LaurentPoly() = default;
    explicit LaurentPoly(int nvars) : d_(nvars) {}
    static LaurentPoly constant(int d, const Rational& c);
    static LaurentPoly monomial(const Exponent& e, const Rational& c = 1);
    static LaurentPoly variable(int d, int idx);

    int nvars() const { return d_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    Rational constant_value() const;  // coefficient of t^0

    // Leading term in lexicographic order; requires nonzero.
    const Exponent& lead_exp() const { return terms_.rbegin()->first; }
    const Rational& lead_coeff() const { return terms_.rbegin()->second; }
    LaurentPoly lead_term() const { return monomial(lead_exp(), lead_coeff()); }
    const Exponent& trail_exp() const { return terms_.begin()->first; }

    void add_term(const Exponent& e, const Rational& c);

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const Rational& c);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(LaurentPoly a, const Rational& c) { return a *= c; }
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.d_ == b.d_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    LaurentPoly pow(unsigned e) const;
    LaurentPoly shift(const Exponent& e) const;  // multiply by t^e

    // Per-variable minimum / maximum exponent over the support.
    Exponent min_exp() const;
    Exponent max_exp() const;
    int degree_in(int var) const;
    LaurentPoly derivative(int var) const;

    // Exact quotient if Q divides this; nullopt otherwise.
    std::optional<LaurentPoly> exact_div(const LaurentPoly& q) const;
    std::optional<Rational> evaluate(const std::vector<Rational>& point) const;

    // Rational content and sign normalisation: returns P/c with integer
    // coprime coefficients and positive leading coefficient.
    LaurentPoly primitive_integer(Rational* factor = nullptr) const;

    std::string to_string(const std::vector<std::string>& names = {}) const;

private:
    int d_ = 0;
    TermMap terms_;
};

std::vector<std::string> default_names(int d);

// Support and exponent set.
std::vector<LaurentPoly> support(const LaurentPoly& p);
std::vector<Exponent> exponent_set(const LaurentPoly& p);

// Ground monic monomial: componentwise minimum of the minimal exponents.
Exponent ground_monomial(const std::vector<LaurentPoly>& values);

// gcd over Q[t^{+-1}] up to units; result is an ordinary polynomial with
// zero minimal exponents and positive lead, primitive over Z.
LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b);

// p = unit * Q^2 * D, D squarefree, primitive over Z with positive lead and
// no monomial factor; unit is c*t^e with c a squarefree integer and e in
// {0,1}^d (the square part of the monomial/constant factor goes into Q).
struct SquarefreeParts {
    LaurentPoly Q;
    LaurentPoly D;
    LaurentPoly unit;
};
SquarefreeParts squarefree_decompose(const LaurentPoly& p);

// Squarefree factor list: p = c * t^e * prod f_i^i.
std::vector<std::pair<LaurentPoly, int>> squarefree_factors(const LaurentPoly& p, LaurentPoly* unit);

std::optional<Rational> rational_sqrt(const Rational& q);
std::optional<LaurentPoly> sqrt_exact(const LaurentPoly& p);
// Squarefree integer s with |q| = s * square (sign kept in the result).
Integer squarefree_kernel(const Rational& q, Rational* square_root_part = nullptr);

using IntMatrix = std::vector<std::vector<long>>;
std::optional<IntMatrix> unimodular_inverse(const IntMatrix& v);
LaurentPoly unimodular_substitute(const LaurentPoly& p, const IntMatrix& v);

LaurentPoly parse_laurent(const std::string& text, const std::vector<std::string>& names);

}  // namespace cbr

#endif
