#include "cbr/field.hpp"

#include <cctype>
#include <stdexcept>

namespace cbr {

// ------------------------------------------------------ RationalFunction

RationalFunction::RationalFunction(LaurentPoly num)
    : num_(std::move(num)), den_(LaurentPoly::constant(num_.nvars(), 1)) {}

RationalFunction::RationalFunction(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.nvars() != den_.nvars()) throw std::invalid_argument("dimension mismatch");
    if (den_.is_zero()) throw std::domain_error("zero denominator");
    canonicalize();
}

RationalFunction RationalFunction::constant(int d, const Rational& c) {
    return RationalFunction(LaurentPoly::constant(d, c));
}

void RationalFunction::canonicalize() {
    int d = num_.nvars();
    if (num_.is_zero()) {
        den_ = LaurentPoly::constant(d, 1);
        return;
    }
    if (!den_.is_monomial()) {
        LaurentPoly g = gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = *num_.exact_div(g);
            den_ = *den_.exact_div(g);
        }
    }
    LaurentPoly lt = den_.lead_term();
    if (!(lt.is_constant() && lt.lead_coeff() == 1)) {
        num_ = *num_.exact_div(lt);
        den_ = *den_.exact_div(lt);
    }
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r(*this);
    r.num_ = -r.num_;
    return r;
}

RationalFunction RationalFunction::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return RationalFunction(den_, num_);
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) {
        if (a.is_laurent()) return RationalFunction(a.num_ + b.num_);
        return RationalFunction(a.num_ + b.num_, a.den_);
    }
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_laurent() && b.is_laurent()) return RationalFunction(a.num_ * b.num_);
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (a.is_laurent() && b.is_laurent()) {
        if (auto q = a.num_.exact_div(b.num_)) return RationalFunction(*q);
    }
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    if (is_laurent()) return RationalFunction(num_.pow(static_cast<unsigned>(e)));
    RationalFunction r(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
    return r;
}

std::optional<Rational> RationalFunction::evaluate(const std::vector<Rational>& point) const {
    auto n = num_.evaluate(point);
    auto dd = den_.evaluate(point);
    if (!n || !dd || *dd == 0) return std::nullopt;
    return *n / *dd;
}

std::string RationalFunction::to_string(const std::vector<std::string>& names) const {
    if (is_laurent()) return num_.to_string(names);
    std::string n = num_.to_string(names);
    if (num_.size() > 1) n = "(" + n + ")";
    return n + "/(" + den_.to_string(names) + ")";
}

std::optional<RationalFunction> sqrt_in_field(const RationalFunction& x) {
    if (x.is_zero()) return x;
    auto n = sqrt_exact(x.num());
    if (!n) return std::nullopt;
    auto dd = sqrt_exact(x.den());
    if (!dd) return std::nullopt;
    return RationalFunction(*n, *dd);
}

RadicalSplit radical_split(const RationalFunction& x) {
    if (x.is_zero()) throw std::invalid_argument("radical_split of zero");
    LaurentPoly p = x.num() * x.den();
    SquarefreeParts sp = squarefree_decompose(p);
    RadicalSplit out{RationalFunction(sp.Q, x.den()), sp.unit * sp.D};
    return out;
}

// -------------------------------------------------------- QuadExtScalar

bool same_disc(const DiscPtr& a, const DiscPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

QuadExtScalar::QuadExtScalar(RationalFunction r) : rat_(std::move(r)), rad_(rat_.nvars()) {}

QuadExtScalar::QuadExtScalar(RationalFunction r, RationalFunction rad, DiscPtr disc)
    : rat_(std::move(r)), rad_(std::move(rad)), disc_(std::move(disc)) {
    if (rat_.nvars() != rad_.nvars()) throw std::invalid_argument("dimension mismatch");
    if (!rad_.is_zero() && !disc_) throw std::invalid_argument("radical part without discriminant");
}

namespace {

DiscPtr merge_disc(const QuadExtScalar& a, const QuadExtScalar& b) {
    if (a.rad().is_zero()) return b.disc() ? b.disc() : a.disc();
    if (b.rad().is_zero()) return a.disc();
    if (!same_disc(a.disc(), b.disc())) throw std::domain_error("mixing different quadratic extensions");
    return a.disc();
}

}  // namespace

QuadExtScalar QuadExtScalar::conj() const { return QuadExtScalar(rat_, -rad_, disc_); }

RationalFunction QuadExtScalar::norm() const {
    if (rad_.is_zero()) return rat_ * rat_;
    return rat_ * rat_ - rad_ * rad_ * RationalFunction(*disc_);
}

QuadExtScalar QuadExtScalar::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    if (rad_.is_zero()) return QuadExtScalar(rat_.inverse(), RationalFunction(nvars()), disc_);
    RationalFunction n = norm();
    if (n.is_zero()) throw std::domain_error("zero norm: discriminant is a square");
    RationalFunction ni = n.inverse();
    return QuadExtScalar(rat_ * ni, -(rad_ * ni), disc_);
}

QuadExtScalar QuadExtScalar::operator-() const { return QuadExtScalar(-rat_, -rad_, disc_); }

QuadExtScalar operator+(const QuadExtScalar& a, const QuadExtScalar& b) {
    DiscPtr d = merge_disc(a, b);
    return QuadExtScalar(a.rat_ + b.rat_, a.rad_ + b.rad_, d);
}

QuadExtScalar operator-(const QuadExtScalar& a, const QuadExtScalar& b) {
    DiscPtr d = merge_disc(a, b);
    return QuadExtScalar(a.rat_ - b.rat_, a.rad_ - b.rad_, d);
}

QuadExtScalar operator*(const QuadExtScalar& a, const QuadExtScalar& b) {
    DiscPtr d = merge_disc(a, b);
    if (a.rad_.is_zero() && b.rad_.is_zero()) return QuadExtScalar(a.rat_ * b.rat_, RationalFunction(a.nvars()), d);
    if (a.rad_.is_zero()) return QuadExtScalar(a.rat_ * b.rat_, a.rat_ * b.rad_, d);
    if (b.rad_.is_zero()) return QuadExtScalar(a.rat_ * b.rat_, a.rad_ * b.rat_, d);
    RationalFunction r = a.rat_ * b.rat_ + a.rad_ * b.rad_ * RationalFunction(*d);
    RationalFunction s = a.rat_ * b.rad_ + a.rad_ * b.rat_;
    return QuadExtScalar(r, s, d);
}

QuadExtScalar operator/(const QuadExtScalar& a, const QuadExtScalar& b) {
    if (b.rad_.is_zero()) {
        if (b.rat_.is_zero()) throw std::domain_error("division by zero");
        DiscPtr d = a.disc_ ? a.disc_ : b.disc_;
        return QuadExtScalar(a.rat_ / b.rat_, a.rad_.is_zero() ? a.rad_ : a.rad_ / b.rat_, d);
    }
    return a * b.inverse();
}

bool operator==(const QuadExtScalar& a, const QuadExtScalar& b) {
    if (a.rat_ != b.rat_ || a.rad_ != b.rad_) return false;
    return a.rad_.is_zero() || same_disc(a.disc_, b.disc_);
}

QuadExtScalar QuadExtScalar::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    QuadExtScalar r(RationalFunction::constant(nvars(), 1), RationalFunction(nvars()), disc_);
    QuadExtScalar b = *this;
    unsigned n = static_cast<unsigned>(e);
    while (n) {
        if (n & 1U) r = r * b;
        n >>= 1U;
        if (n) b = b * b;
    }
    return r;
}

std::optional<bool> QuadExtScalar::is_zero_at(const std::vector<Rational>& point) const {
    auto a = rat_.evaluate(point);
    if (!a) return std::nullopt;
    if (rad_.is_zero()) return *a == 0;
    auto b = rad_.evaluate(point);
    auto c = disc_->evaluate(point);
    if (!b || !c) return std::nullopt;
    if (*b == 0) return *a == 0;
    auto s = rational_sqrt(*c);
    if (!s) return false;  // a + b*sqrt(c) with irrational sqrt(c), b != 0
    return *a + *b * *s == 0;
}

std::string QuadExtScalar::to_string(const std::vector<std::string>& names) const {
    if (rad_.is_zero()) return rat_.to_string(names);
    std::string r = "(" + rad_.to_string(names) + ")*sqrtD";
    if (rat_.is_zero()) return r;
    return rat_.to_string(names) + " + " + r;
}

std::optional<QuadExtScalar> sqrt_ext(const QuadExtScalar& x, const DiscPtr& hint) {
    int d = x.nvars();
    if (x.is_zero()) return x;
    if (x.in_base_field()) {
        if (auto r = sqrt_in_field(x.rat())) return QuadExtScalar(*r, RationalFunction(d), x.disc());
        RadicalSplit sp = radical_split(x.rat());
        DiscPtr disc;
        if (hint && *hint == sp.kernel)
            disc = hint;
        else if (x.disc() && *x.disc() == sp.kernel)
            disc = x.disc();
        else
            disc = std::make_shared<const LaurentPoly>(sp.kernel);
        return QuadExtScalar(RationalFunction(d), sp.cofactor, disc);
    }
    auto n = sqrt_in_field(x.norm());
    if (!n) return std::nullopt;
    RationalFunction half = RationalFunction::constant(d, Rational(1, 2));
    for (int sgn : {1, -1}) {
        RationalFunction s = (x.rat() + (sgn > 0 ? *n : -*n)) * half;
        if (s.is_zero()) continue;
        if (auto p = sqrt_in_field(s)) {
            RationalFunction q = x.rad() / (*p * RationalFunction::constant(d, 2));
            return QuadExtScalar(*p, q, x.disc());
        }
    }
    return std::nullopt;
}

// ------------------------------------------------------------- parser

namespace {

class Parser {
public:
    Parser(const std::string& s, const std::vector<std::string>& names, const DiscPtr& disc)
        : s_(s), names_(names), disc_(disc), d_(static_cast<int>(names.size())) {}

    QuadExtScalar run() {
        QuadExtScalar v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error("parse error at column " + std::to_string(pos_ + 1) + " in '" + s_ + "': " + msg);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    QuadExtScalar expr() {
        QuadExtScalar v = term();
        for (;;) {
            if (accept('+'))
                v = v + term();
            else if (accept('-'))
                v = v - term();
            else
                return v;
        }
    }
    QuadExtScalar term() {
        QuadExtScalar v = unary();
        for (;;) {
            if (accept('*')) {
                v = v * unary();
            } else if (accept('/')) {
                QuadExtScalar w = unary();
                if (w.is_zero()) fail("division by zero");
                v = v / w;
            } else {
                return v;
            }
        }
    }
    QuadExtScalar unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        QuadExtScalar b = primary();
        if (accept('^')) {
            long e = signed_int();
            if (b.is_zero() && e < 0) fail("negative power of zero");
            b = b.pow(static_cast<int>(e));
        }
        return b;
    }
    long signed_int() {
        skip();
        bool paren = accept('(');
        skip();
        int sign = 1;
        if (accept('-')) sign = -1;
        else
            accept('+');
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        long v = std::stol(s_.substr(start, pos_ - start));
        if (paren && !accept(')')) fail("expected ')'");
        return sign * v;
    }
    QuadExtScalar primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            QuadExtScalar v = expr();
            if (!accept(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            Rational q(Integer(s_.substr(start, pos_ - start)));
            return QuadExtScalar::constant(d_, q);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            if (id == "sqrtD") {
                if (!disc_) fail("sqrtD used without a discriminant");
                return QuadExtScalar(RationalFunction(d_), RationalFunction::constant(d_, 1), disc_);
            }
            for (int i = 0; i < d_; ++i)
                if (names_[i] == id) return QuadExtScalar(RationalFunction(LaurentPoly::variable(d_, i)));
            pos_ = start;
            fail("unknown variable '" + id + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string& s_;
    const std::vector<std::string>& names_;
    DiscPtr disc_;
    int d_;
    std::size_t pos_ = 0;
};

}  // namespace

QuadExtScalar parse_scalar(const std::string& text, const std::vector<std::string>& names, const DiscPtr& disc) {
    return Parser(text, names, disc).run();
}

RationalFunction parse_rational_function(const std::string& text, const std::vector<std::string>& names) {
    QuadExtScalar v = parse_scalar(text, names, nullptr);
    return v.rat();
}

LaurentPoly parse_laurent(const std::string& text, const std::vector<std::string>& names) {
    RationalFunction r = parse_rational_function(text, names);
    if (!r.is_laurent()) throw std::runtime_error("parse error: '" + text + "' is not a Laurent polynomial");
    return r.num();
}

}  // namespace cbr
