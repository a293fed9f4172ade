#include "cbr/yalg.hpp"

#include <sstream>
#include <stdexcept>

namespace cbr {

std::string context_str(const YContext& c) {
    std::ostringstream os;
    os << subset_str(c.basis) << "; " << c.i << "," << c.j << "; " << c.alpha << "," << c.beta;
    return os.str();
}

bool valid_context(const YContext& c) {
    return c.i != c.j && c.alpha != c.beta && has(c.basis, c.i) && has(c.basis, c.j) && !has(c.basis, c.alpha) &&
           !has(c.basis, c.beta);
}

int y_sign(int i, int j, int alpha, int beta) {
    long p = static_cast<long>(i - alpha) * (i - beta) * (j - alpha) * (j - beta);
    return p > 0 ? -1 : 1;
}

QuadExtScalar y_from_minors(const MinorFn& right, const YContext& c) {
    if (!valid_context(c)) throw std::invalid_argument("invalid Y context " + context_str(c));
    const Mask I = c.basis;
    QuadExtScalar num = right(exchange(I, c.i, c.alpha)) * right(exchange(I, c.j, c.beta));
    QuadExtScalar den = right(exchange(I, c.i, c.beta)) * right(exchange(I, c.j, c.alpha));
    if (den.is_zero() || num.is_zero()) throw std::domain_error("vanishing minor in Y at " + context_str(c));
    QuadExtScalar y = num / den;
    return y_sign(c.i, c.j, c.alpha, c.beta) > 0 ? y : -y;
}

YTerm transform_y(const YTerm& y, YTransform op) {
    const YContext& c = y.ctx;
    int d = y.value.nvars();
    QuadExtScalar one = QuadExtScalar::constant(d, 1);
    switch (op) {
        case YTransform::Invert:
            return {{c.basis, c.i, c.j, c.beta, c.alpha}, y.value.inverse()};
        case YTransform::Vertical:
            return {{exchange(c.basis, c.i, c.alpha), c.alpha, c.j, c.i, c.beta}, -y.value - one};
        case YTransform::Diagonal:
            return {{exchange(c.basis, c.i, c.beta), c.beta, c.j, c.alpha, c.i}, -(one + y.value.inverse()).inverse()};
    }
    throw std::logic_error("unknown transform");
}

IdentityReport check_identities(const MinorFn& right, int n, int k, Mask I) {
    IdentityReport rep;
    auto fail = [&](const std::string& what) {
        ++rep.failed;
        if (rep.failures.size() < 8) rep.failures.push_back(what);
    };
    std::vector<int> in = elements(I), out;
    for (int a = 1; a <= n; ++a)
        if (!has(I, a)) out.push_back(a);
    (void)k;
    auto Y = [&](int i, int j, int a, int b) { return y_from_minors(right, {I, i, j, a, b}); };
    for (int i : in)
        for (int j : in) {
            if (i == j) continue;
            for (int a : out)
                for (int b : out) {
                    if (a == b) continue;
                    YTerm y{{I, i, j, a, b}, Y(i, j, a, b)};
                    ++rep.checked;
                    if (y.value == QuadExtScalar::constant(y.value.nvars(), -1)) fail("Y = -1 at " + context_str(y.ctx));
                    for (YTransform op : {YTransform::Invert, YTransform::Vertical, YTransform::Diagonal}) {
                        YTerm t = transform_y(y, op);
                        ++rep.checked;
                        if (t.value != y_from_minors(right, t.ctx))
                            fail("transform " + std::to_string(static_cast<int>(op)) + " at " + context_str(y.ctx));
                    }
                    for (int g : out) {
                        if (g == a || g == b) continue;
                        ++rep.checked;
                        if (!(y.value * Y(i, j, b, g) + Y(i, j, a, g)).is_zero())
                            fail("lower product at " + context_str(y.ctx) + " via " + std::to_string(g));
                        // quadrilateral through delta = g
                        for (int m : in) {
                            if (m == i || m == j) continue;
                            ++rep.checked;
                            QuadExtScalar q = Y(i, m, a, g) * Y(m, j, a, g) * Y(i, m, g, b) * Y(m, j, g, b);
                            if (!(y.value + q).is_zero()) fail("quadrilateral at " + context_str(y.ctx));
                        }
                    }
                    for (int m : in) {
                        if (m == i || m == j) continue;
                        ++rep.checked;
                        if (!(Y(i, m, a, b) * Y(m, j, a, b) + y.value).is_zero())
                            fail("upper product at " + context_str(y.ctx) + " via " + std::to_string(m));
                    }
                }
        }
    return rep;
}

QuadExtScalar b_function(const QuadExtScalar& x, const QuadExtScalar& y, const QuadExtScalar& z) {
    QuadExtScalar a = x - y - z;
    return a * a - QuadExtScalar::constant(x.nvars(), 4) * y * z;
}

LaurentPoly b_function(const LaurentPoly& x, const LaurentPoly& y, const LaurentPoly& z) {
    LaurentPoly a = x - y - z;
    return a * a - y * z * Rational(4);
}

std::string ytype_str(YType t) {
    switch (t) {
        case YType::Unobservable: return "unobservable";
        case YType::InBaseField: return "base-field";
        case YType::RadicalConstant: return "radical-constant";
        case YType::RadicalUnit: return "radical-unit";
        case YType::SType: return "S";
        case YType::GTypeI: return "G-I";
        case YType::GTypeII: return "G-II";
        case YType::GTypeOther: return "G-other";
        case YType::Unsupported: return "unsupported";
    }
    return "?";
}

std::optional<int> lambda_position(const std::array<QuadExtScalar, 3>& chi) {
    std::array<Exponent, 3> e;
    for (int u = 0; u < 3; ++u) {
        auto m = as_monomial(chi[u]);
        if (!m || chi[u].is_zero()) return std::nullopt;
        e[u] = m->exp;
    }
    if (e[0] == e[1] && e[1] == e[2]) return 0;
    if (e[1] == e[2]) return 1;
    if (e[0] == e[2]) return 2;
    if (e[0] == e[1]) return 3;
    return std::nullopt;
}

ABData ab_terms(const ChiTriple& chi) {
    ABData r;
    r.chi = chi;
    const auto& v = chi.values;
    int d = v[0].nvars();
    r.A = v[0] - v[1] - v[2];
    r.B = r.A * r.A - QuadExtScalar::constant(d, 4) * v[1] * v[2];
    r.ground = chi.ground;
    r.lambda = lambda_position(v);
    if (!chi.observable) return r;
    if (!r.B.in_base_field()) {
        r.type = YType::Unsupported;
        return r;
    }
    if (r.B.is_zero()) {
        r.type = YType::InBaseField;
        r.Q = RationalFunction(d);
        r.D = r.unit = r.kernel = LaurentPoly::constant(d, 1);
        return r;
    }
    const RationalFunction& b = r.B.rat();
    SquarefreeParts sp = squarefree_decompose(b.num() * b.den());
    r.Q = RationalFunction(sp.Q, b.den());
    r.D = sp.D;
    r.unit = sp.unit;
    r.kernel = sp.unit * sp.D;
    r.omega = static_cast<int>(sp.D.size());
    if (r.ground && r.Q.is_laurent()) {
        Exponent neg = exp_scale(*r.ground, -1);
        r.Qhat = r.Q.num().shift(neg) * (1 / r.Q.den().constant_value());
    }
    if (r.kernel.is_constant()) {
        r.type = r.kernel.constant_value() == 1 ? YType::InBaseField : YType::RadicalConstant;
    } else if (r.omega <= 1) {
        r.type = YType::RadicalUnit;
    } else if (r.omega == 2) {
        r.type = YType::SType;
    } else if (!r.Q.is_laurent()) {
        r.type = YType::GTypeOther;
    } else {
        std::size_t terms = r.Q.num().size();
        r.type = terms == 1 ? YType::GTypeI : terms == 2 ? YType::GTypeII : YType::GTypeOther;
    }
    return r;
}

YRoots y_roots(const ChiTriple& chi, const DiscPtr& hint) {
    YRoots out;
    if (!chi.observable) {
        out.note = "unobservable";
        return out;
    }
    const auto& v = chi.values;
    int d = v[0].nvars();
    QuadExtScalar A = v[0] - v[1] - v[2];
    if (v[2].is_zero()) {
        out.linear = true;
        if (A.is_zero()) {
            out.note = "no root: linear equation with vanishing coefficient";
            return out;
        }
        out.roots.push_back(v[1] / A);
        return out;
    }
    QuadExtScalar B = A * A - QuadExtScalar::constant(d, 4) * v[1] * v[2];
    std::optional<QuadExtScalar> s;
    try {
        s = sqrt_ext(B, hint);
    } catch (const std::domain_error& e) {
        out.note = e.what();
        return out;
    }
    if (!s) {
        out.note = "nested radical";
        return out;
    }
    QuadExtScalar twoq = QuadExtScalar::constant(d, 2) * v[2];
    if (s->is_zero()) {
        out.double_root = true;
        out.roots.push_back(A / twoq);
        return out;
    }
    out.roots.push_back((A + *s) / twoq);
    out.roots.push_back((A - *s) / twoq);
    return out;
}

bool resonance_check(const LaurentPoly& E1, const LaurentPoly& E2, const LaurentPoly& E3, int d1, int d2) {
    if (d1 <= 0 || d2 <= 0 || d2 >= d1) throw std::invalid_argument("resonance_check: need 0 < d2 < d1");
    if (!E1.is_monomial() || !E2.is_monomial() || !E3.is_monomial()) return false;
    RationalFunction num(E2.pow(static_cast<unsigned>(d1)));
    RationalFunction den(E3.pow(static_cast<unsigned>(d1 - d2)) * E1.pow(static_cast<unsigned>(d2)));
    RationalFunction ratio = num / den;
    if (!ratio.is_constant()) return false;
    Rational p(d1 - d2, d1), q(d2, d1);
    p.canonicalize();
    q.canonicalize();
    RationalFunction target = RationalFunction::constant(E1.nvars(), 1 / p).pow(2 * (d1 - d2)) *
                              RationalFunction::constant(E1.nvars(), 1 / q).pow(2 * d2);
    return ratio == target;
}

}  // namespace cbr
