// Root selection for the quadratic Y-equations by exact constraint propagation.
#include <algorithm>
#include <deque>
#include <stdexcept>

#include "cbr/yalg.hpp"

namespace cbr {

namespace {

struct Key {
    std::uint64_t code;
    bool flip;
};

Key normalize(const YContext& c) {
    int i = c.i, j = c.j, a = c.alpha, b = c.beta;
    bool flip = false;
    if (i > j) std::swap(i, j), flip = !flip;
    if (a > b) std::swap(a, b), flip = !flip;
    std::uint64_t code = static_cast<std::uint64_t>(c.basis) | (static_cast<std::uint64_t>(i) << 32) |
                         (static_cast<std::uint64_t>(j) << 38) | (static_cast<std::uint64_t>(a) << 44) |
                         (static_cast<std::uint64_t>(b) << 50);
    return {code, flip};
}

YContext decode(std::uint64_t code) {
    YContext c;
    c.basis = static_cast<Mask>(code & 0xffffffffULL);
    c.i = static_cast<int>((code >> 32) & 63);
    c.j = static_cast<int>((code >> 38) & 63);
    c.alpha = static_cast<int>((code >> 44) & 63);
    c.beta = static_cast<int>((code >> 50) & 63);
    return c;
}

bool context_less(const YContext& x, const YContext& y) {
    if (x.basis != y.basis) return lex_less(x.basis, y.basis);
    return std::tie(x.i, x.j, x.alpha, x.beta) < std::tie(y.i, y.j, y.alpha, y.beta);
}

QuadExtScalar orient(const QuadExtScalar& v, bool flip) { return flip ? v.inverse() : v; }

bool admissible(const QuadExtScalar& v) {
    return !v.is_zero() && v != QuadExtScalar::constant(v.nvars(), -1);
}

struct Dom {
    bool free = true;
    std::vector<QuadExtScalar> vals;
};

struct Constraint {
    bool ternary;
    int x, y, z;       // ternary: x*y = -z
    bool fx = false, fz = false;  // binary: orient(z,fz) = -orient(x,fx) - 1
};

bool contains(const std::vector<QuadExtScalar>& v, const QuadExtScalar& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

struct Solver {
    std::vector<YContext> ctx;
    std::vector<Constraint> cons;
    std::vector<std::vector<int>> adj;
    long budget = 4096;

    // Returns false on contradiction.  `changed` receives touched variables.
    bool apply(const Constraint& c, std::vector<Dom>& d, std::vector<int>& changed) const {
        auto set_single = [&](int v, const QuadExtScalar& x) {
            if (!admissible(x)) return false;
            d[v].free = false;
            d[v].vals = {x};
            changed.push_back(v);
            return true;
        };
        auto restrict = [&](int v, std::vector<QuadExtScalar> keep) {
            if (keep.size() != d[v].vals.size()) {
                d[v].vals = std::move(keep);
                changed.push_back(v);
            }
            return !d[v].vals.empty();
        };
        try {
            if (c.ternary) {
                Dom &X = d[c.x], &Y = d[c.y], &Z = d[c.z];
                int nfree = X.free + Y.free + Z.free;
                if (nfree >= 2) return true;
                if (nfree == 1) {
                    if (X.free && Y.vals.size() == 1 && Z.vals.size() == 1)
                        return set_single(c.x, -Z.vals[0] / Y.vals[0]);
                    if (Y.free && X.vals.size() == 1 && Z.vals.size() == 1)
                        return set_single(c.y, -Z.vals[0] / X.vals[0]);
                    if (Z.free && X.vals.size() == 1 && Y.vals.size() == 1)
                        return set_single(c.z, -(X.vals[0] * Y.vals[0]));
                    return true;
                }
                std::vector<QuadExtScalar> kx, ky, kz;
                for (const auto& a : X.vals)
                    for (const auto& b : Y.vals) {
                        QuadExtScalar p;
                        try {
                            p = -(a * b);
                        } catch (const std::domain_error&) {
                            continue;
                        }
                        if (!contains(Z.vals, p)) continue;
                        if (!contains(kx, a)) kx.push_back(a);
                        if (!contains(ky, b)) ky.push_back(b);
                        if (!contains(kz, p)) kz.push_back(p);
                    }
                return restrict(c.x, kx) && restrict(c.y, ky) && restrict(c.z, kz);
            }
            Dom &S = d[c.x], &T = d[c.z];
            auto fwd = [&](const QuadExtScalar& s) {
                return orient(-orient(s, c.fx) - QuadExtScalar::constant(s.nvars(), 1), c.fz);
            };
            auto bwd = [&](const QuadExtScalar& t) {
                return orient(-orient(t, c.fz) - QuadExtScalar::constant(t.nvars(), 1), c.fx);
            };
            if (S.free && T.free) return true;
            if (S.free) return T.vals.size() == 1 ? set_single(c.x, bwd(T.vals[0])) : true;
            if (T.free) return S.vals.size() == 1 ? set_single(c.z, fwd(S.vals[0])) : true;
            std::vector<QuadExtScalar> ks, kt;
            for (const auto& s : S.vals) {
                QuadExtScalar t = fwd(s);
                if (contains(T.vals, t)) {
                    ks.push_back(s);
                    kt.push_back(t);
                }
            }
            return restrict(c.x, ks) && restrict(c.z, kt);
        } catch (const std::domain_error&) {
            return false;
        }
    }

    bool propagate(std::vector<Dom>& d, std::deque<int> work) const {
        std::vector<char> queued(cons.size(), 0);
        for (int w : work) queued[static_cast<std::size_t>(w)] = 1;
        std::vector<int> changed;
        while (!work.empty()) {
            int ci = work.front();
            work.pop_front();
            queued[static_cast<std::size_t>(ci)] = 0;
            changed.clear();
            if (!apply(cons[static_cast<std::size_t>(ci)], d, changed)) return false;
            for (int v : changed)
                for (int nc : adj[static_cast<std::size_t>(v)])
                    if (!queued[static_cast<std::size_t>(nc)]) {
                        queued[static_cast<std::size_t>(nc)] = 1;
                        work.push_back(nc);
                    }
        }
        return true;
    }

    std::deque<int> all_constraints() const {
        std::deque<int> w;
        for (std::size_t c = 0; c < cons.size(); ++c) w.push_back(static_cast<int>(c));
        return w;
    }

    std::optional<std::vector<Dom>> solve(std::vector<Dom> d, std::deque<int> work, long& nodes) const {
        if (++nodes > budget) return std::nullopt;
        if (!propagate(d, std::move(work))) return std::nullopt;
        for (std::size_t v = 0; v < d.size(); ++v) {
            if (d[v].free || d[v].vals.size() <= 1) continue;
            for (const auto& choice : d[v].vals) {
                std::vector<Dom> e = d;
                e[v].vals = {choice};
                std::deque<int> w(adj[v].begin(), adj[v].end());
                if (auto r = solve(std::move(e), std::move(w), nodes)) return r;
            }
            return std::nullopt;
        }
        return d;
    }
};

}  // namespace

std::optional<QuadExtScalar> YAssignment::get(const YContext& c) const {
    Key k = normalize(c);
    auto it = values_.find(k.code);
    if (it == values_.end()) return std::nullopt;
    return orient(it->second, k.flip);
}

void YAssignment::set(const YContext& c, const QuadExtScalar& v) {
    Key k = normalize(c);
    values_[k.code] = orient(v, k.flip);
}

std::vector<std::pair<YContext, QuadExtScalar>> YAssignment::entries() const {
    std::vector<std::pair<YContext, QuadExtScalar>> out;
    for (const auto& [code, v] : values_) out.push_back({decode(code), v});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return context_less(a.first, b.first); });
    return out;
}

namespace {

template <class F>
void for_each_context(int n, int k, const std::vector<Mask>& bases, F&& f) {
    std::vector<Mask> bs = bases.empty() ? k_subsets(n, k) : bases;
    for (Mask I : bs) {
        std::vector<int> in = elements(I), out;
        for (int a = 1; a <= n; ++a)
            if (!has(I, a)) out.push_back(a);
        for (std::size_t p = 0; p < in.size(); ++p)
            for (std::size_t q = p + 1; q < in.size(); ++q)
                for (std::size_t u = 0; u < out.size(); ++u)
                    for (std::size_t w = u + 1; w < out.size(); ++w) f(YContext{I, in[p], in[q], out[u], out[w]});
    }
}

}  // namespace

YAssignment assignment_from_right(const MinorFn& right, int n, int k) {
    YAssignment y(n, k);
    for_each_context(n, k, {}, [&](const YContext& c) { y.set(c, y_from_minors(right, c)); });
    return y;
}

Disambiguation disambiguate_roots(const TermMap& h, const std::vector<Mask>& bases) {
    Disambiguation out;
    const int n = h.n, k = h.k;
    Solver s;
    std::unordered_map<std::uint64_t, int> index;
    std::vector<Dom> dom;
    DiscPtr hint;
    std::string error;
    for_each_context(n, k, bases, [&](const YContext& c) {
        index[normalize(c).code] = static_cast<int>(s.ctx.size());
        s.ctx.push_back(c);
        Dom d;
        ChiTriple chi = chi_triple(h, c.basis, c.i, c.j, c.alpha, c.beta);
        if (chi.observable) {
            ++out.observable;
            YRoots r = y_roots(chi, hint);
            for (const auto& x : r.roots) {
                if (!x.in_base_field() && !hint) hint = x.disc();
                if (admissible(x) && !contains(d.vals, x)) d.vals.push_back(x);
            }
            d.free = false;
            if (d.vals.empty() && error.empty())
                error = "no admissible root at " + context_str(c) + (r.note.empty() ? "" : " (" + r.note + ")");
        }
        dom.push_back(std::move(d));
    });
    if (!error.empty()) {
        out.error = error;
        return out;
    }
    auto var = [&](const YContext& c) -> std::optional<std::pair<int, bool>> {
        Key key = normalize(c);
        auto it = index.find(key.code);
        if (it == index.end()) return std::nullopt;
        return std::make_pair(it->second, key.flip);
    };
    for (std::size_t v = 0; v < s.ctx.size(); ++v) {
        const YContext& c = s.ctx[v];
        int iv = static_cast<int>(v);
        // products over a third lower index / a third upper index
        for (int g = c.beta + 1; g <= n; ++g) {
            if (has(c.basis, g)) continue;
            auto y1 = var({c.basis, c.i, c.j, c.beta, g}), y2 = var({c.basis, c.i, c.j, c.alpha, g});
            if (y1 && y2) s.cons.push_back({true, iv, y1->first, y2->first});
        }
        for (int m = c.j + 1; m <= n; ++m) {
            if (!has(c.basis, m)) continue;
            auto y1 = var({c.basis, c.j, m, c.alpha, c.beta}), y2 = var({c.basis, c.i, m, c.alpha, c.beta});
            if (y1 && y2) s.cons.push_back({true, iv, y1->first, y2->first});
        }
        for (int orientation = 0; orientation < 4; ++orientation) {
            YContext o = c;
            bool f = false;
            if (orientation & 1) std::swap(o.i, o.j), f = !f;
            if (orientation & 2) std::swap(o.alpha, o.beta), f = !f;
            YContext t{exchange(o.basis, o.i, o.alpha), o.alpha, o.j, o.i, o.beta};
            auto tv = var(t);
            if (!tv || tv->first < iv) continue;  // each pair once
            Constraint cn{false, iv, 0, tv->first};
            cn.fx = f;
            cn.fz = tv->second;
            s.cons.push_back(cn);
        }
    }
    s.adj.assign(s.ctx.size(), {});
    for (std::size_t ci = 0; ci < s.cons.size(); ++ci) {
        const Constraint& c = s.cons[ci];
        s.adj[static_cast<std::size_t>(c.x)].push_back(static_cast<int>(ci));
        s.adj[static_cast<std::size_t>(c.z)].push_back(static_cast<int>(ci));
        if (c.ternary) s.adj[static_cast<std::size_t>(c.y)].push_back(static_cast<int>(ci));
    }

    std::optional<std::size_t> seed;
    for (std::size_t v = 0; v < dom.size() && !seed; ++v)
        if (!dom[v].free && dom[v].vals.size() == 2) seed = v;

    auto to_assignment = [&](const std::vector<Dom>& d) {
        YAssignment y(n, k);
        for (std::size_t v = 0; v < d.size(); ++v)
            if (!d[v].free && d[v].vals.size() == 1) y.set(s.ctx[v], d[v].vals[0]);
        return y;
    };
    if (!seed) {
        long nodes = 0;
        auto r = s.solve(dom, s.all_constraints(), nodes);
        if (r) {
            out.solutions[0] = to_assignment(*r);
            out.ok = true;
        } else {
            out.failures[0] = "contradiction during propagation";
            out.error = out.failures[0];
        }
        return out;
    }
    out.seed = s.ctx[*seed];
    for (int pick = 0; pick < 2; ++pick) {
        std::vector<Dom> d = dom;
        d[*seed].vals = {dom[*seed].vals[static_cast<std::size_t>(pick)]};
        long nodes = 0;
        auto r = s.solve(std::move(d), s.all_constraints(), nodes);
        if (r)
            out.solutions[static_cast<std::size_t>(pick)] = to_assignment(*r);
        else
            out.failures[static_cast<std::size_t>(pick)] =
                nodes > s.budget ? "search budget exhausted" : "contradiction during propagation";
    }
    out.ok = out.solutions[0] || out.solutions[1];
    if (!out.ok) out.error = "both seeds contradict: " + out.failures[0];
    return out;
}

KappaReport kappa_check(const YAssignment& y, Mask I) {
    KappaReport rep;
    int n = y.n();
    std::vector<int> in = elements(I), out;
    for (int a = 1; a <= n; ++a)
        if (!has(I, a)) out.push_back(a);
    auto s_type_radical = [](const QuadExtScalar& v) {
        return !v.in_base_field() && v.disc() && v.disc()->size() == 2;
    };
    for (std::size_t p = 0; p < in.size(); ++p)
        for (std::size_t q = p + 1; q < in.size(); ++q)
            for (int a1 : out)
                for (int a2 : out)
                    for (int a3 : out) {
                        if (a1 == a2 || a1 == a3 || a2 >= a3) continue;
                        int i = in[p], j = in[q];
                        auto y12 = y.get({I, i, j, a1, a2}), y13 = y.get({I, i, j, a1, a3});
                        auto y23 = y.get({I, i, j, a2, a3});
                        if (!y12 || !y13 || !y23) continue;
                        if (!s_type_radical(*y12) || !s_type_radical(*y13) || !y23->in_base_field() ||
                            !y23->rat().is_constant())
                            continue;
                        ++rep.checked;
                        Rational v = y23->rat().num().constant_value() / y23->rat().den().constant_value();
                        if (v != Rational(-1, 2) && v != 1 && v != -2)
                            rep.violations.push_back({{I, i, j, a2, a3}, *y23});
                    }
    return rep;
}

}  // namespace cbr
