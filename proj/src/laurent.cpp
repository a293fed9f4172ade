#include "cbr/laurent.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cbr {

Exponent exp_add(const Exponent& a, const Exponent& b) {
    if (a.size() != b.size()) throw std::invalid_argument("exponent length mismatch");
    Exponent r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Exponent exp_sub(const Exponent& a, const Exponent& b) {
    if (a.size() != b.size()) throw std::invalid_argument("exponent length mismatch");
    Exponent r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Exponent exp_scale(const Exponent& a, int s) {
    Exponent r(a);
    for (auto& x : r) x *= s;
    return r;
}

std::string exp_to_string(const Exponent& e) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
    os << ')';
    return os.str();
}

MonomialOrder MonomialOrder::lex(int d) {
    MonomialOrder o;
    for (int i = 0; i < d; ++i) o.priority.push_back(i);
    return o;
}

bool MonomialOrder::less(const Exponent& a, const Exponent& b) const {
    for (int v : priority) {
        if (a[v] != b[v]) return a[v] < b[v];
    }
    return false;
}

LaurentPoly LaurentPoly::constant(int d, const Rational& c) {
    LaurentPoly p(d);
    p.add_term(Exponent(d, 0), c);
    return p;
}

LaurentPoly LaurentPoly::monomial(const Exponent& e, const Rational& c) {
    LaurentPoly p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
}

LaurentPoly LaurentPoly::variable(int d, int idx) {
    Exponent e(d, 0);
    e.at(idx) = 1;
    return monomial(e);
}

bool LaurentPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    for (int x : terms_.begin()->first)
        if (x != 0) return false;
    return true;
}

Rational LaurentPoly::constant_value() const {
    auto it = terms_.find(Exponent(d_, 0));
    return it == terms_.end() ? Rational(0) : it->second;
}

void LaurentPoly::add_term(const Exponent& e, const Rational& c) {
    if (static_cast<int>(e.size()) != d_) throw std::invalid_argument("dimension mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r(*this);
    for (auto& kv : r.terms_) kv.second = -kv.second;
    return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    if (o.d_ != d_) throw std::invalid_argument("dimension mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    if (o.d_ != d_) throw std::invalid_argument("dimension mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& kv : terms_) kv.second *= c;
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.d_ != b.d_) throw std::invalid_argument("dimension mismatch");
    LaurentPoly r(a.d_);
    Exponent e(a.d_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (int i = 0; i < a.d_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

LaurentPoly LaurentPoly::pow(unsigned e) const {
    LaurentPoly result = constant(d_, 1);
    LaurentPoly base = *this;
    while (e) {
        if (e & 1U) result = result * base;
        e >>= 1U;
        if (e) base = base * base;
    }
    return result;
}

LaurentPoly LaurentPoly::shift(const Exponent& s) const {
    LaurentPoly r(d_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(exp_add(e, s), c);
    return r;
}

Exponent LaurentPoly::min_exp() const {
    if (terms_.empty()) return Exponent(d_, 0);
    Exponent m = terms_.begin()->first;
    for (const auto& kv : terms_)
        for (int i = 0; i < d_; ++i) m[i] = std::min(m[i], kv.first[i]);
    return m;
}

Exponent LaurentPoly::max_exp() const {
    if (terms_.empty()) return Exponent(d_, 0);
    Exponent m = terms_.begin()->first;
    for (const auto& kv : terms_)
        for (int i = 0; i < d_; ++i) m[i] = std::max(m[i], kv.first[i]);
    return m;
}

int LaurentPoly::degree_in(int var) const {
    if (terms_.empty()) return -1;
    return max_exp()[var] - min_exp()[var];
}

LaurentPoly LaurentPoly::derivative(int var) const {
    LaurentPoly r(d_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponent f = e;
        f[var] -= 1;
        r.add_term(f, c * e[var]);
    }
    return r;
}

std::optional<LaurentPoly> LaurentPoly::exact_div(const LaurentPoly& q) const {
    if (q.is_zero()) throw std::domain_error("division by zero polynomial");
    if (q.d_ != d_) throw std::invalid_argument("dimension mismatch");
    if (is_zero()) return LaurentPoly(d_);
    if (q.is_monomial()) {
        LaurentPoly r(d_);
        Rational inv = 1 / q.lead_coeff();
        Exponent s = exp_scale(q.lead_exp(), -1);
        for (const auto& [e, c] : terms_) r.terms_.emplace(exp_add(e, s), c * inv);
        return r;
    }
    // Every quotient exponent lies in the box [min(P)-min(Q), max(P)-max(Q)].
    Exponent lo = exp_sub(min_exp(), q.min_exp());
    Exponent hi = exp_sub(max_exp(), q.max_exp());
    for (int i = 0; i < d_; ++i)
        if (lo[i] > hi[i]) return std::nullopt;
    LaurentPoly rem = *this;
    LaurentPoly quo(d_);
    const Exponent& qe = q.lead_exp();
    Rational qinv = 1 / q.lead_coeff();
    while (!rem.is_zero()) {
        Exponent e = exp_sub(rem.lead_exp(), qe);
        for (int i = 0; i < d_; ++i)
            if (e[i] < lo[i] || e[i] > hi[i]) return std::nullopt;
        Rational c = rem.lead_coeff() * qinv;
        quo.add_term(e, c);
        Exponent f(d_);
        for (const auto& [eb, cb] : q.terms_) {
            for (int i = 0; i < d_; ++i) f[i] = eb[i] + e[i];
            rem.add_term(f, -c * cb);
        }
    }
    return quo;
}

namespace {

Rational qpow(const Rational& x, int e) {
    Rational r = 1;
    Rational b = e < 0 ? Rational(1 / x) : x;
    unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
    while (n) {
        if (n & 1U) r *= b;
        n >>= 1U;
        if (n) b *= b;
    }
    return r;
}

}  // namespace

std::optional<Rational> LaurentPoly::evaluate(const std::vector<Rational>& point) const {
    if (static_cast<int>(point.size()) != d_) throw std::invalid_argument("dimension mismatch");
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
        Rational v = c;
        for (int i = 0; i < d_; ++i) {
            if (e[i] == 0) continue;
            if (point[i] == 0 && e[i] < 0) return std::nullopt;
            v *= qpow(point[i], e[i]);
        }
        sum += v;
    }
    return sum;
}

LaurentPoly LaurentPoly::primitive_integer(Rational* factor) const {
    if (is_zero()) {
        if (factor) *factor = 1;
        return *this;
    }
    Integer g = 0, l = 1;
    for (const auto& kv : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), kv.second.get_num_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), kv.second.get_den_mpz_t());
    }
    Rational c(g, l);
    c.canonicalize();
    if (lead_coeff() < 0) c = -c;
    if (factor) *factor = c;
    LaurentPoly r(*this);
    Rational inv = 1 / c;
    for (auto& kv : r.terms_) kv.second *= inv;
    return r;
}

std::vector<std::string> default_names(int d) {
    if (d == 1) return {"t"};
    std::vector<std::string> n;
    for (int i = 1; i <= d; ++i) n.push_back("t" + std::to_string(i));
    return n;
}

std::string LaurentPoly::to_string(const std::vector<std::string>& names_in) const {
    if (terms_.empty()) return "0";
    std::vector<std::string> names = names_in.empty() ? default_names(d_) : names_in;
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Exponent& e = it->first;
        Rational c = it->second;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) os << '-';
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        bool unit_monomial = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
        bool wrote = false;
        if (unit_monomial || c != 1) {
            os << c.get_str();
            wrote = true;
        }
        for (int i = 0; i < d_; ++i) {
            if (e[i] == 0) continue;
            if (wrote) os << '*';
            os << names[i];
            if (e[i] != 1) os << '^' << e[i];
            wrote = true;
        }
    }
    return os.str();
}

std::vector<LaurentPoly> support(const LaurentPoly& p) {
    std::vector<LaurentPoly> out;
    for (const auto& [e, c] : p.terms()) out.push_back(LaurentPoly::monomial(e, c));
    return out;
}

std::vector<Exponent> exponent_set(const LaurentPoly& p) {
    std::vector<Exponent> out;
    for (const auto& kv : p.terms()) out.push_back(kv.first);
    return out;
}

Exponent ground_monomial(const std::vector<LaurentPoly>& values) {
    if (values.empty()) throw std::invalid_argument("ground_monomial: empty list");
    Exponent g;
    for (const auto& v : values) {
        if (v.is_zero()) throw std::invalid_argument("ground_monomial: zero value");
        Exponent m = v.min_exp();
        if (g.empty()) {
            g = m;
        } else {
            if (g.size() != m.size()) throw std::invalid_argument("dimension mismatch");
            for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::min(g[i], m[i]);
        }
    }
    return g;
}

// ---------------------------------------------------------------- gcd

namespace {

std::map<int, LaurentPoly> coeffs_in(const LaurentPoly& p, int v) {
    std::map<int, LaurentPoly> out;
    for (const auto& [e, c] : p.terms()) {
        Exponent f = e;
        int k = f[v];
        f[v] = 0;
        auto it = out.find(k);
        if (it == out.end()) it = out.emplace(k, LaurentPoly(p.nvars())).first;
        it->second.add_term(f, c);
    }
    return out;
}

LaurentPoly lc_in(const LaurentPoly& p, int v) { return coeffs_in(p, v).rbegin()->second; }

int deg_in(const LaurentPoly& p, int v) { return p.max_exp()[v]; }

LaurentPoly normalize_poly(const LaurentPoly& p) {
    if (p.is_zero()) return p;
    LaurentPoly s = p.shift(exp_scale(p.min_exp(), -1));
    return s.primitive_integer();
}

LaurentPoly gcd_norm(const LaurentPoly& a, const LaurentPoly& b);

LaurentPoly content_in(const LaurentPoly& p, int v) {
    LaurentPoly g(p.nvars());
    for (const auto& kv : coeffs_in(p, v)) {
        g = gcd_norm(g, kv.second);
        if (g.is_constant()) break;
    }
    return g;
}

LaurentPoly must_div(const LaurentPoly& a, const LaurentPoly& b) {
    auto q = a.exact_div(b);
    if (!q) throw std::logic_error("internal: expected exact division");
    return *q;
}

LaurentPoly prem(const LaurentPoly& a, const LaurentPoly& b, int v) {
    int db = deg_in(b, v);
    LaurentPoly lcb = lc_in(b, v);
    LaurentPoly r = a;
    int e = deg_in(a, v) - db + 1;
    while (!r.is_zero() && deg_in(r, v) >= db) {
        LaurentPoly lcr = lc_in(r, v);
        Exponent s(a.nvars(), 0);
        s[v] = deg_in(r, v) - db;
        r = lcb * r - lcr * b.shift(s);
        --e;
    }
    if (e > 0) r = lcb.pow(static_cast<unsigned>(e)) * r;
    return r;
}

// Inputs are polynomials without monomial content.
LaurentPoly gcd_norm(const LaurentPoly& a0, const LaurentPoly& b0) {
    if (a0.is_zero()) return normalize_poly(b0);
    if (b0.is_zero()) return normalize_poly(a0);
    LaurentPoly a = normalize_poly(a0);
    LaurentPoly b = normalize_poly(b0);
    int d = a.nvars();
    if (a.is_constant() || b.is_constant()) return LaurentPoly::constant(d, 1);
    if (a == b) return a;
    int v = -1;
    for (int i = 0; i < d && v < 0; ++i)
        if (deg_in(a, i) > 0 || deg_in(b, i) > 0) v = i;
    if (deg_in(a, v) == 0) return gcd_norm(a, content_in(b, v));
    if (deg_in(b, v) == 0) return gcd_norm(content_in(a, v), b);
    LaurentPoly ca = content_in(a, v), cb = content_in(b, v);
    LaurentPoly pa = must_div(a, ca), pb = must_div(b, cb);
    LaurentPoly c = gcd_norm(ca, cb);
    if (deg_in(pa, v) < deg_in(pb, v)) std::swap(pa, pb);
    LaurentPoly g(d);
    for (;;) {
        LaurentPoly r = prem(pa, pb, v);
        if (r.is_zero()) {
            g = pb;
            break;
        }
        if (deg_in(r, v) == 0) {
            g = LaurentPoly::constant(d, 1);
            break;
        }
        pa = pb;
        pb = must_div(r, content_in(r, v));
        pb = normalize_poly(pb);
    }
    if (!g.is_constant()) g = must_div(g, content_in(g, v));
    return normalize_poly(c * g);
}

}  // namespace

LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("dimension mismatch");
    if (a.is_zero() && b.is_zero()) return LaurentPoly(a.nvars());
    return gcd_norm(a, b);
}

// ---------------------------------------------------------- squarefree

namespace {

void yun(const LaurentPoly& f, int v, std::vector<std::pair<LaurentPoly, int>>& out) {
    LaurentPoly fp = f.derivative(v);
    LaurentPoly a = gcd(f, fp);
    LaurentPoly b = must_div(f, a);
    LaurentPoly c = must_div(fp, a);
    LaurentPoly dd = c - b.derivative(v);
    int i = 1;
    while (!b.is_constant()) {
        LaurentPoly g = gcd(b, dd);
        if (!g.is_constant()) out.emplace_back(g, i);
        b = must_div(b, g);
        c = must_div(dd, g);
        dd = c - b.derivative(v);
        ++i;
    }
}

void sqf_rec(const LaurentPoly& p, std::vector<std::pair<LaurentPoly, int>>& out) {
    if (p.is_constant()) return;
    int d = p.nvars();
    int v = -1;
    for (int i = 0; i < d && v < 0; ++i)
        if (deg_in(p, i) > 0) v = i;
    LaurentPoly cont = content_in(p, v);
    LaurentPoly pp = normalize_poly(must_div(p, cont));
    yun(pp, v, out);
    sqf_rec(cont, out);
}

}  // namespace

std::vector<std::pair<LaurentPoly, int>> squarefree_factors(const LaurentPoly& p, LaurentPoly* unit) {
    if (p.is_zero()) throw std::invalid_argument("squarefree of zero");
    std::vector<std::pair<LaurentPoly, int>> out;
    sqf_rec(normalize_poly(p), out);
    // Merge equal factors (content recursion may produce repeated entries).
    std::vector<std::pair<LaurentPoly, int>> merged;
    for (auto& fi : out) {
        LaurentPoly f = normalize_poly(fi.first);
        auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& m) { return m.first == f; });
        if (it != merged.end())
            it->second += fi.second;
        else
            merged.emplace_back(f, fi.second);
    }
    if (unit) {
        LaurentPoly prod = LaurentPoly::constant(p.nvars(), 1);
        for (auto& [f, m] : merged) prod = prod * f.pow(static_cast<unsigned>(m));
        *unit = must_div(p, prod);
    }
    return merged;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return std::nullopt;
    Integer n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    Rational r(n, d);
    r.canonicalize();
    return r;
}

Integer squarefree_kernel(const Rational& q, Rational* root_part) {
    if (q == 0) throw std::invalid_argument("squarefree_kernel of zero");
    Integer n = q.get_num() * q.get_den();
    int sign = n < 0 ? -1 : 1;
    n = abs(n);
    Integer s = 1, sq = 1;
    // Trial division; the cofactor left over is treated as squarefree unless
    // it is a perfect square.
    for (unsigned long f = 2; f < 100000; ++f) {
        Integer ff = Integer(f) * f;
        if (ff > n) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), f)) {
            n /= f;
            if (mpz_divisible_ui_p(n.get_mpz_t(), f)) {
                n /= f;
                sq *= f;
            } else {
                s *= f;
            }
        }
    }
    if (n > 1) {
        if (mpz_perfect_square_p(n.get_mpz_t())) {
            Integer r;
            mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
            sq *= r;
        } else {
            s *= n;
        }
    }
    if (root_part) {
        // |q| = s * (sq / den)^2
        Rational r(sq, q.get_den());
        r.canonicalize();
        *root_part = r;
    }
    return sign * s;
}

std::optional<LaurentPoly> sqrt_exact(const LaurentPoly& p) {
    int d = p.nvars();
    if (p.is_zero()) return LaurentPoly(d);
    const Exponent& le = p.lead_exp();
    for (int x : le)
        if (x % 2 != 0) return std::nullopt;
    auto rc = rational_sqrt(p.lead_coeff());
    if (!rc) return std::nullopt;
    Exponent lo = p.min_exp(), hi = p.max_exp();
    for (int i = 0; i < d; ++i) {
        if (lo[i] % 2 != 0 || hi[i] % 2 != 0) return std::nullopt;
        lo[i] /= 2;
        hi[i] /= 2;
    }
    Exponent half(le);
    for (auto& x : half) x /= 2;
    LaurentPoly s = LaurentPoly::monomial(half, *rc);
    Rational two_lead = 2 * *rc;
    for (;;) {
        LaurentPoly r = p - s * s;
        if (r.is_zero()) return s;
        Exponent e = exp_sub(r.lead_exp(), half);
        for (int i = 0; i < d; ++i)
            if (e[i] < lo[i] || e[i] > hi[i]) return std::nullopt;
        // The new term must sit strictly below the current leading term.
        if (!(e < half)) return std::nullopt;
        s.add_term(e, r.lead_coeff() / two_lead);
    }
}

SquarefreeParts squarefree_decompose(const LaurentPoly& p) {
    int d = p.nvars();
    LaurentPoly unit(d);
    auto fac = squarefree_factors(p, &unit);
    LaurentPoly Q = LaurentPoly::constant(d, 1), D = LaurentPoly::constant(d, 1);
    for (auto& [f, m] : fac) {
        if (m / 2) Q = Q * f.pow(static_cast<unsigned>(m / 2));
        if (m % 2) D = D * f;
    }
    if (!unit.is_monomial()) throw std::logic_error("internal: non-monomial unit");
    Exponent e = unit.lead_exp();
    Exponent h(d), rest(d);
    for (int i = 0; i < d; ++i) {
        rest[i] = ((e[i] % 2) + 2) % 2;
        h[i] = (e[i] - rest[i]) / 2;
    }
    Rational root;
    Integer s = squarefree_kernel(unit.lead_coeff(), &root);
    Q = Q.shift(h) * root;
    SquarefreeParts out{Q, D, LaurentPoly::monomial(rest, Rational(s))};
    return out;
}

// --------------------------------------------------------- unimodular

std::optional<IntMatrix> unimodular_inverse(const IntMatrix& v) {
    std::size_t n = v.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i].size() != n) return std::nullopt;
        for (std::size_t j = 0; j < n; ++j) a[i][j] = v[i][j];
        a[i][n + i] = 1;
    }
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        Rational inv = 1 / a[c][c];
        for (auto& x : a[c]) x *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational f = a[r][c];
            for (std::size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    if (det != 1 && det != -1) return std::nullopt;
    IntMatrix out(n, std::vector<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = a[i][n + j].get_num().get_si();
    return out;
}

LaurentPoly unimodular_substitute(const LaurentPoly& p, const IntMatrix& v) {
    int d = p.nvars();
    if (static_cast<int>(v.size()) != d) throw std::invalid_argument("unimodular_substitute: shape");
    auto w = unimodular_inverse(v);
    if (!w) throw std::invalid_argument("unimodular_substitute: matrix is not unimodular");
    // t = s^{V^{-1}}: t_i = prod_j s_j^{W_ij}, so t^e = s^{W^T e}.
    LaurentPoly r(d);
    for (const auto& [e, c] : p.terms()) {
        Exponent f(d, 0);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) f[j] += static_cast<int>((*w)[i][j]) * e[i];
        r.add_term(f, c);
    }
    return r;
}

}  // namespace cbr
