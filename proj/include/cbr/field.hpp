#ifndef CBR_FIELD_HPP
#define CBR_FIELD_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cbr/laurent.hpp"

namespace cbr {

// Element of the Laurent fraction field in canonical form: gcd removed,
// denominator's lexicographically leading term equal to 1.
class RationalFunction {
public:
    RationalFunction() = default;
    explicit RationalFunction(int d) : num_(d), den_(LaurentPoly::constant(d, 1)) {}
    RationalFunction(LaurentPoly num);  // NOLINT(implicit)
    RationalFunction(LaurentPoly num, LaurentPoly den);
    static RationalFunction constant(int d, const Rational& c);

    int nvars() const { return num_.nvars(); }
    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return den_.is_constant(); }
    bool is_constant() const { return is_laurent() && num_.is_constant(); }
    bool is_monomial() const { return is_laurent() && num_.is_monomial(); }

    RationalFunction operator-() const;
    RationalFunction inverse() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }
    RationalFunction pow(int e) const;

    std::optional<Rational> evaluate(const std::vector<Rational>& point) const;
    std::string to_string(const std::vector<std::string>& names = {}) const;

private:
    void canonicalize();
    LaurentPoly num_, den_;
};

std::optional<RationalFunction> sqrt_in_field(const RationalFunction& x);

using DiscPtr = std::shared_ptr<const LaurentPoly>;

// rat + rad*sqrt(disc).  disc is shared; values with zero radical part may
// carry any disc (or none).  Combining two values whose radical parts are
// both nonzero over different discriminants throws.
class QuadExtScalar {
public:
    QuadExtScalar() = default;
    explicit QuadExtScalar(int d) : rat_(d), rad_(d) {}
    QuadExtScalar(RationalFunction r);  // NOLINT(implicit)
    QuadExtScalar(RationalFunction r, RationalFunction rad, DiscPtr disc);
    static QuadExtScalar constant(int d, const Rational& c) { return QuadExtScalar(RationalFunction::constant(d, c)); }

    int nvars() const { return rat_.nvars(); }
    const RationalFunction& rat() const { return rat_; }
    const RationalFunction& rad() const { return rad_; }
    const DiscPtr& disc() const { return disc_; }
    bool is_zero() const { return rat_.is_zero() && rad_.is_zero(); }
    bool in_base_field() const { return rad_.is_zero(); }
    bool is_laurent() const { return rat_.is_laurent() && rad_.is_laurent(); }

    QuadExtScalar conj() const;
    RationalFunction norm() const;  // rat^2 - rad^2*disc
    QuadExtScalar inverse() const;
    QuadExtScalar operator-() const;
    friend QuadExtScalar operator+(const QuadExtScalar& a, const QuadExtScalar& b);
    friend QuadExtScalar operator-(const QuadExtScalar& a, const QuadExtScalar& b);
    friend QuadExtScalar operator*(const QuadExtScalar& a, const QuadExtScalar& b);
    friend QuadExtScalar operator/(const QuadExtScalar& a, const QuadExtScalar& b);
    friend bool operator==(const QuadExtScalar& a, const QuadExtScalar& b);
    friend bool operator!=(const QuadExtScalar& a, const QuadExtScalar& b) { return !(a == b); }
    QuadExtScalar pow(int e) const;

    // Zero test of the value at a rational point (the discriminant is
    // evaluated too; sqrt of a non-square or negative constant is irrational).
    std::optional<bool> is_zero_at(const std::vector<Rational>& point) const;
    std::string to_string(const std::vector<std::string>& names = {}) const;

private:
    RationalFunction rat_, rad_;
    DiscPtr disc_;
};

bool same_disc(const DiscPtr& a, const DiscPtr& b);

// Canonical squarefree discriminant and cofactor: x = c^2 * kernel, with
// kernel a squarefree Laurent polynomial (unit part included).
struct RadicalSplit {
    RationalFunction cofactor;
    LaurentPoly kernel;
};
RadicalSplit radical_split(const RationalFunction& x);

// Square root in F or F(sqrt(disc)); nullopt when a nested radical is needed.
// For a base-field argument without a rational root the result lives in
// F(sqrt(kernel)); `disc_hint` is reused when it matches the kernel.
std::optional<QuadExtScalar> sqrt_ext(const QuadExtScalar& x, const DiscPtr& disc_hint = nullptr);

// Expression parser: + - * / ^int, parentheses, rational literals, variable
// names and the symbol sqrtD (the discriminant's root).
QuadExtScalar parse_scalar(const std::string& text, const std::vector<std::string>& names, const DiscPtr& disc);
RationalFunction parse_rational_function(const std::string& text, const std::vector<std::string>& names);

}  // namespace cbr

#endif
