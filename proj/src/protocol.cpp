#include "cbr/protocol.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace cbr {

namespace {

Rational abs_q(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Rational constant_of(const QuadExtScalar& v) {
    if (!v.in_base_field() || !v.rat().is_constant()) throw std::invalid_argument("expected a rational constant");
    return v.rat().num().constant_value() / v.rat().den().constant_value();
}

Rational rpow(const Rational& x, long e) {
    Rational r = 1, b = x;
    for (; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

mpz_class zpow(const mpz_class& x, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), e);
    return r;
}

// (-1)^{#(I \ {x}) strictly between x and y}: sign of putting y in x's slot.
int slot_sign(Mask I, int x, int y) { return count_between(without(I, x), x, y) % 2 ? -1 : 1; }

bool all_integers(const std::vector<Rational>& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.get_den() == 1; });
}

}  // namespace

LabeledValues product_terms(const ExactMatrix& a, const ExactMatrix& q) {
    if (a.rows() != q.cols() || a.cols() != q.rows()) throw std::invalid_argument("product_terms: shape mismatch");
    MinorTable ma = all_minors(a, Orientation::Columns), mq = all_minors(q, Orientation::Rows);
    LabeledValues g;
    for (Mask J : k_subsets(a.cols(), a.rows())) {
        Rational v = constant_of(ma.at(J) * mq.at(J));
        if (v != 0) g[J] = v;
    }
    return g;
}

Matroid support_matroid(int n, int k, const LabeledValues& g) {
    std::vector<Mask> b;
    for (const auto& [m, v] : g)
        if (v != 0) b.push_back(m);
    return Matroid(n, k, b);
}

Mask apply_psi(const std::vector<int>& psi, Mask I) {
    Mask r = 0;
    for (int x : elements(I)) r = with(r, psi[static_cast<std::size_t>(x - 1)]);
    return r;
}

BasisPermutation induced_permutation(const std::vector<int>& psi, const Matroid& M) {
    BasisPermutation P;
    for (Mask I : M.bases()) P[I] = apply_psi(psi, I);
    return P;
}

bool is_induced(const BasisPermutation& P, int n) {
    std::vector<int> psi(static_cast<std::size_t>(n));
    std::iota(psi.begin(), psi.end(), 1);
    do {
        bool ok = true;
        for (const auto& [I, J] : P)
            if (apply_psi(psi, I) != J) {
                ok = false;
                break;
            }
        if (ok) return true;
    } while (std::next_permutation(psi.begin(), psi.end()));
    return false;
}

Rational monomial_at(const QueryPoint& t0, Mask A) {
    Rational r = 1;
    for (int s : elements(A)) r *= t0.t.at(static_cast<std::size_t>(s - 1));
    return r;
}

UnlabeledAnswer oracle_answer(const LabeledValues& g, const BasisPermutation& Psi, const QueryPoint& t0) {
    std::vector<std::pair<Mask, Rational>> terms;
    for (const auto& [I, v] : g)
        if (v != 0) terms.emplace_back(I, v);
    // Psi must be a bijection of the support onto itself.
    std::set<Mask> support, image;
    for (const auto& [I, v] : terms) support.insert(I);
    if (!Psi.empty()) {
        if (Psi.size() != support.size()) throw std::invalid_argument("oracle_answer: permutation size differs from #G");
        for (const auto& [I, J] : Psi) {
            if (!support.count(I) || !support.count(J))
                throw std::invalid_argument("oracle_answer: permutation leaves the basis family at " + subset_str(I));
            image.insert(J);
        }
        if (image.size() != support.size()) throw std::invalid_argument("oracle_answer: not injective");
    }
    UnlabeledAnswer out;
    out.values.resize(terms.size());
    const long count = static_cast<long>(terms.size());
#pragma omp parallel for schedule(dynamic)
    for (long u = 0; u < count; ++u) {
        const auto& [I, v] = terms[static_cast<std::size_t>(u)];
        Mask A = Psi.empty() ? I : Psi.at(I);
        out.values[static_cast<std::size_t>(u)] = v * monomial_at(t0, A);
    }
    std::sort(out.values.begin(), out.values.end());
    return out;
}

UnlabeledAnswer oracle_answer(const ExactMatrix& a, const ExactMatrix& q, const BasisPermutation& Psi,
                              const QueryPoint& t0) {
    return oracle_answer(product_terms(a, q), Psi, t0);
}

Bounds bounds_query(const UnlabeledAnswer& at_one) {
    if (at_one.values.empty()) throw std::domain_error("bounds_query: empty answer");
    Rational lo, hi;
    bool first = true;
    for (const Rational& v : at_one.values) {
        if (v == 0) throw std::domain_error("bounds_query: zero value (basis family mismatch)");
        Rational a = abs_q(v);
        if (first || a < lo) lo = a;
        if (first || a > hi) hi = a;
        first = false;
    }
    Bounds b;
    b.lambda = all_integers(at_one.values) ? Rational(1) : Rational(lo / 2);
    b.mu = 2 * hi;
    return b;
}

Rational separation_ratio(const QueryPoint& t0, int k, int s) {
    const auto& t = t0.t;
    return abs_q(t[static_cast<std::size_t>(s)]) * rpow(abs_q(t[0]), k - 1) /
           rpow(abs_q(t[static_cast<std::size_t>(s - 1)]), k);
}

bool satisfies_separation(const QueryPoint& t0, const Bounds& b, int k, std::size_t g_size) {
    Rational bound = Rational(2 * static_cast<long>(g_size) - 1) * b.mu / b.lambda;
    for (std::size_t s = 1; s < t0.t.size(); ++s)
        if (!(separation_ratio(t0, k, static_cast<int>(s)) > bound)) return false;
    return true;
}

QueryPoint build_query(const Bounds& b, int n, int k, std::size_t g_size) {
    Rational R = Rational(2 * static_cast<long>(g_size) - 1) * b.mu / b.lambda;
    QueryPoint q;
    q.t.push_back(1);
    for (int s = 1; s < n; ++s) {
        Rational need = R * rpow(q.t.back(), k);
        mpz_class f = need.get_num() / need.get_den();  // floor, need > 0
        q.t.emplace_back(f + 1);
    }
    return q;
}

// ------------------------------------------------------------ recovery

static std::optional<std::vector<int>> match_labels_from(const std::vector<DecodedTerm>& decoded,
                                                  const LabeledValues& reference, int n, int k,
                                                  std::vector<std::set<int>> dom, std::string* why) {
    auto fail = [&](const std::string& s) -> std::optional<std::vector<int>> {
        if (why) *why = s;
        return std::nullopt;
    };
    std::size_t support = 0;
    for (const auto& [I, v] : reference)
        if (v != 0) ++support;
    if (decoded.size() != support) return fail("answer size differs from the reference family");
    std::map<Mask, Rational> by_set;
    for (const auto& d : decoded) by_set[d.set] = d.coeff;
    // Sets carrying a coefficient attained by exactly one reference basis.
    for (const auto& d : decoded) {
        std::vector<Mask> labels;
        for (const auto& [I, v] : reference)
            if (v == d.coeff) labels.push_back(I);
        if (labels.empty()) return fail("coefficient of " + subset_str(d.set) + " matches no reference basis");
        if (labels.size() != 1) continue;
        for (int x = 1; x <= n; ++x) {
            auto& D = dom[static_cast<std::size_t>(x - 1)];
            for (auto it = D.begin(); it != D.end();)
                it = (has(labels[0], x) != has(d.set, *it)) ? D.erase(it) : std::next(it);
            if (D.empty()) return fail("no element image consistent at " + std::to_string(x));
        }
    }
    (void)k;
    std::vector<int> psi(static_cast<std::size_t>(n), 0);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    long budget = 1000000;
    std::function<bool(int)> go = [&](int x) -> bool {
        if (--budget < 0) return false;
        if (x > n) {
            for (const auto& [I, v] : reference) {
                if (v == 0) continue;
                auto it = by_set.find(apply_psi(psi, I));
                if (it == by_set.end() || it->second != v) return false;
            }
            return true;
        }
        for (int y : dom[static_cast<std::size_t>(x - 1)]) {
            if (used[static_cast<std::size_t>(y)]) continue;
            used[static_cast<std::size_t>(y)] = 1;
            psi[static_cast<std::size_t>(x - 1)] = y;
            if (go(x + 1)) return true;
            used[static_cast<std::size_t>(y)] = 0;
        }
        return false;
    };
    if (!go(1)) return fail(budget < 0 ? "label search budget exhausted" : "no element permutation reproduces the answer");
    return psi;
}

std::optional<std::vector<int>> match_labels(const std::vector<DecodedTerm>& decoded, const LabeledValues& reference,
                                             int n, int k, std::string* why) {
    std::set<int> all;
    for (int y = 1; y <= n; ++y) all.insert(y);
    return match_labels_from(decoded, reference, n, k, std::vector<std::set<int>>(static_cast<std::size_t>(n), all),
                             why);
}

RecoveredPermutation recover_chain(const UnlabeledAnswer& answer, const QueryPoint& t0, const Bounds& b, int n, int k,
                                   const LabeledValues* reference) {
    RecoveredPermutation out;
    auto fail = [&](const std::string& stage, const std::string& e) {
        out.ok = false;
        out.stage = stage;
        out.error = e;
        return out;
    };
    if (static_cast<int>(t0.t.size()) != n) return fail("decode", "query has the wrong length");
    std::vector<Rational> mags;
    std::vector<std::size_t> order(answer.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return abs_q(answer.values[x]) < abs_q(answer.values[y]); });
    const Rational& t1 = t0.t[0];
    std::set<Mask> seen;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const Rational& v = answer.values[order[pos]];
        Rational rem = abs_q(v);
        if (pos > 0 && rem == abs_q(answer.values[order[pos - 1]]))
            return fail("decode", "two answer values share a magnitude; the query violates the separation bound");
        Mask A = 0;
        int hi = n;
        // Peel the largest remaining element: the biggest u whose lower bracket fits.
        for (int r = k; r >= 1; --r) {
            int found = 0;
            for (int u = hi; u >= r; --u)
                if (b.lambda * t0.t[static_cast<std::size_t>(u - 1)] * rpow(t1, r - 1) <= rem) {
                    found = u;
                    break;
                }
            if (!found) return fail("decode", "value below every bracket: " + v.get_str());
            A = with(A, found);
            rem /= t0.t[static_cast<std::size_t>(found - 1)];
            hi = found - 1;
        }
        if (rem < b.lambda || rem > b.mu) return fail("decode", "value outside its bracket: " + v.get_str());
        if (!seen.insert(A).second) return fail("decode", "exponent set decoded twice: " + subset_str(A));
        out.decoded.push_back({A, v / monomial_at(t0, A), v});
    }
    if (out.decoded.empty()) return fail("decode", "empty answer");

    // Threshold chain.
    out.chain.push_back(out.decoded.front().set);
    for (int u = k; u <= n; ++u) {
        Rational T = b.mu;
        for (int s = u - k + 1; s <= u; ++s) T *= abs_q(t0.t[static_cast<std::size_t>(s - 1)]);
        auto it = std::find_if(out.decoded.begin(), out.decoded.end(),
                               [&](const DecodedTerm& d) { return abs_q(d.value) > T; });
        if (it == out.decoded.end()) break;
        out.thresholds.push_back(T);
        out.chain.push_back(it->set);
    }
    for (std::size_t u = 1; u < out.chain.size(); ++u)
        if (card(out.chain[u] & ~out.chain[u - 1]) != 1)
            return fail("chain", "exponent chain step " + std::to_string(u) + " is not a single exchange");

    if (!reference) {
        out.ok = true;
        return out;
    }
    std::set<int> all;
    for (int y = 1; y <= n; ++y) all.insert(y);
    std::vector<std::set<int>> dom(static_cast<std::size_t>(n), all);
    for (Mask A : out.chain) {
        Rational c = std::find_if(out.decoded.begin(), out.decoded.end(), [&](const DecodedTerm& d) {
                         return d.set == A;
                     })->coeff;
        std::vector<Mask> labels;
        for (const auto& [I, v] : *reference)
            if (v == c) labels.push_back(I);
        if (labels.size() != 1) {
            out.label_chain.clear();
            break;  // ambiguous reference values: the chain cannot be read back
        }
        out.label_chain.push_back(labels[0]);
    }
    for (std::size_t u = 1; u < out.label_chain.size(); ++u) {
        Mask in_l = out.label_chain[u] & ~out.label_chain[u - 1], out_l = out.label_chain[u - 1] & ~out.label_chain[u];
        if (card(in_l) != 1 || card(out_l) != 1)
            return fail("chain", "not induced by an element permutation: labels " + subset_str(out.label_chain[u - 1]) +
                                     " -> " + subset_str(out.label_chain[u]));
        Mask in_a = out.chain[u] & ~out.chain[u - 1], out_a = out.chain[u - 1] & ~out.chain[u];
        int x = elements(in_l)[0], y = elements(in_a)[0], x2 = elements(out_l)[0], y2 = elements(out_a)[0];
        for (auto [p, im] : {std::pair<int, int>{x, y}, {x2, y2}}) {
            auto& D = dom[static_cast<std::size_t>(p - 1)];
            if (!D.count(im)) return fail("chain", "not induced by an element permutation at " + std::to_string(p));
            D = {im};
        }
    }
    std::string why;
    out.psi = match_labels_from(out.decoded, *reference, n, k, dom, &why);
    if (!out.psi) return fail("labels", why);
    out.ok = true;
    return out;
}

LabelResult verify_and_label(const UnlabeledAnswer& answer, const std::vector<int>& psi, const QueryPoint& t0,
                             const LabeledValues& reference) {
    LabelResult r;
    for (const Rational& v : answer.values) r.answer_sum += v;
    for (const auto& [I, v] : reference) {
        if (v == 0) continue;
        Mask A = apply_psi(psi, I);
        r.rebuilt_sum += v * monomial_at(t0, A);
        r.gmap[A] = v;
    }
    r.ok = r.answer_sum == r.rebuilt_sum;
    if (!r.ok) {
        r.error = "answer sum differs from the expansion rebuilt under the recovered permutation";
        r.gmap.clear();
    }
    return r;
}

LabeledValues label_map(const std::vector<DecodedTerm>& decoded) {
    LabeledValues g;
    for (const auto& d : decoded) g[d.set] = d.coeff;
    return g;
}

// ------------------------------------------------------------ matrices

namespace {

std::optional<DecompositionPair> assemble(const LabeledValues& gmap, const Matroid& M, const GenericColumns& gc, int pivot,
                                          const YAssignment& y, MatrixRecovery& rep) {
    const int n = M.n(), k = M.k();
    const Mask I = gc.basis;
    const int a1 = gc.alpha1;
    std::vector<int> in = elements(I);
    auto pos = [&](int x) { return static_cast<int>(std::find(in.begin(), in.end(), x) - in.begin()); };
    auto C = [](const Rational& v) { return QuadExtScalar::constant(0, v); };

    ExactMatrix q(n, k, 0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < k; ++c) q(r, c) = C(0);
    for (int x : in) q(x - 1, pos(x)) = C(1);
    for (int w = 1; w <= n; ++w) {
        if (has(I, w)) continue;
        for (int m : in) {
            if (w == a1 || m == pivot) {
                q(w - 1, pos(m)) = C(1);
                continue;
            }
            if (!M.contains(exchange(I, m, w))) continue;  // the zero sits in q
            auto v = y.get({I, pivot, m, a1, w});
            if (!v) {
                rep.stage = "gauge";
                rep.error = "no selected Y-term at " + context_str({I, pivot, m, a1, w});
                return std::nullopt;
            }
            int s = y_sign(pivot, m, a1, w) * slot_sign(I, m, w) * slot_sign(I, pivot, w) * slot_sign(I, m, a1) *
                    slot_sign(I, pivot, a1);
            q(w - 1, pos(m)) = s > 0 ? *v : -*v;
        }
    }
    MinorTable mq = all_minors(q, Orientation::Rows);
    MinorTable p;
    p.n = n;
    p.k = k;
    p.d = 0;
    p.values.assign(mq.values.size(), C(0));
    for (const auto& [J, v] : gmap) {
        if (v == 0) continue;
        if (mq.at(J).is_zero()) {
            rep.stage = "gauge";
            rep.error = "gauge-form q vanishes on basis " + subset_str(J);
            rep.mismatch = J;
            return std::nullopt;
        }
        p.at(J) = C(v) / mq.at(J);
    }
    // a with identity columns on I, scaled so that Delta_a(I) = p(I).
    const QuadExtScalar pI = p.at(I);
    ExactMatrix a(k, n, 0);
    for (int r = 0; r < k; ++r)
        for (int j = 1; j <= n; ++j) {
            if (has(I, j)) {
                a(r, j - 1) = C(in[static_cast<std::size_t>(r)] == j ? 1 : 0);
                continue;
            }
            int x = in[static_cast<std::size_t>(r)];
            QuadExtScalar v = p.at(exchange(I, x, j)) / pI;
            a(r, j - 1) = slot_sign(I, x, j) > 0 ? v : -v;
        }
    for (int j = 0; j < n; ++j) a(0, j) = a(0, j) * pI;
    MinorTable ma = all_minors(a, Orientation::Columns);
    for (Mask J : k_subsets(n, k))
        if (ma.at(J) != p.at(J)) {
            rep.stage = "plucker";
            rep.error = "coordinates are not decomposable: minor mismatch at " + subset_str(J);
            rep.mismatch = J;
            PluckerScan sc = plucker_scan(minor_fn(p), n, k, 0, true);
            if (sc.first_failure) rep.plucker_witness = sc.first_failure;
            return std::nullopt;
        }
    rep.q_generic = std::none_of(mq.values.begin(), mq.values.end(), [](const QuadExtScalar& v) { return v.is_zero(); });
    return DecompositionPair{a, q, gmap};
}

}  // namespace

MatrixRecovery recover_matrices(const LabeledValues& gmap, int n, int k) {
    MatrixRecovery rep;
    Matroid M;
    try {
        M = support_matroid(n, k, gmap);
    } catch (const MatroidError& e) {
        rep.stage = "plucker";
        rep.error = std::string("support is not a matroid: ") + e.what();
        return rep;
    }
    rep.columns = find_generic_columns(M);
    if (!rep.columns) {
        rep.hypothesis_failed = true;
        rep.stage = "generic-columns";
        rep.error = "the basis family has no two generic columns";
        return rep;
    }
    const Mask I = rep.columns->basis;
    for (int x : elements(I)) {
        bool ok = true;
        for (int w = 1; w <= n && ok; ++w)
            if (!has(I, w) && !M.contains(exchange(I, x, w))) ok = false;
        if (ok) {
            rep.pivot = x;
            break;
        }
    }
    if (!rep.pivot) {
        rep.stage = "pivot";
        rep.error = "no pivot row exchanges with every outside element at " + subset_str(I);
        return rep;
    }
    std::vector<QuadExtScalar> vals(binomial(n, k), QuadExtScalar::constant(0, 0));
    for (const auto& [J, v] : gmap) vals[colex_rank(J)] = QuadExtScalar::constant(0, v);
    TermMap h = term_map_from_values(n, k, 0, std::move(vals));
    Disambiguation d = disambiguate_roots(h);
    if (!d.ok) {
        rep.stage = "roots";
        rep.error = "no Y assignment satisfies the three-term relations: " + d.error;
        return rep;
    }
    std::string errors;
    for (int s = 0; s < 2; ++s) {
        if (!d.solutions[static_cast<std::size_t>(s)]) continue;
        MatrixRecovery attempt = rep;
        auto pair = assemble(gmap, M, *rep.columns, rep.pivot, *d.solutions[static_cast<std::size_t>(s)], attempt);
        if (pair) {
            attempt.ok = true;
            attempt.stage.clear();
            attempt.error.clear();
            attempt.seed_used = s;
            attempt.pair = std::move(pair);
            return attempt;
        }
        if (s == 0 || !rep.mismatch) rep = attempt;
        errors += (errors.empty() ? "" : "; ") + attempt.error;
    }
    if (rep.stage.empty()) {
        rep.stage = "roots";
        rep.error = "no root seed survived propagation";
    } else {
        rep.error = errors;
    }
    return rep;
}

ExactMatrix permute_columns(const ExactMatrix& a, const std::vector<int>& psi) {
    ExactMatrix r(a.rows(), a.cols(), a.nvars());
    for (int x = 1; x <= a.cols(); ++x)
        for (int i = 0; i < a.rows(); ++i) r(i, x - 1) = a(i, psi[static_cast<std::size_t>(x - 1)] - 1);
    return r;
}

ExactMatrix permute_rows(const ExactMatrix& q, const std::vector<int>& psi) {
    return permute_columns(q.transpose(), psi).transpose();
}

// ------------------------------------------------------------ shortcut

long ceil_ln(const mpz_class& N) {
    if (N <= 1) return 0;
    for (unsigned terms = 20;; terms *= 2) {
        // e in [lo, lo + 2/(terms+1)!]
        Rational lo = 0, f = 1;
        for (unsigned i = 0; i <= terms; ++i) {
            if (i > 0) f /= i;
            lo += f;
        }
        Rational hi = lo + 2 * f / (terms + 1);
        bool undecided = false;
        for (long c = 1;; ++c) {
            Rational l = rpow(lo, c), h = rpow(hi, c);
            if (l >= N) return c;
            if (h < N) continue;
            undecided = true;  // the bracket straddles N
            break;
        }
        if (!undecided) break;
    }
    throw std::logic_error("ceil_ln: unreachable");
}

ShortcutQuery shortcut_query(const mpz_class& maxG, int n, int k, std::size_t g_size) {
    ShortcutQuery s;
    s.base = maxG + 2;
    s.block = ceil_ln(mpz_class(2 * static_cast<long>(g_size)) * s.base);
    for (int j = 1; j <= n; ++j) {
        mpz_class r = k == 1 ? mpz_class(j - 1) : mpz_class((zpow(k, static_cast<unsigned long>(j - 1)) - 1) / (k - 1));
        s.t0.t.emplace_back(zpow(s.base, static_cast<unsigned long>(s.block) * r.get_ui()));
    }
    return s;
}

mpz_class block_position(Mask A, int k) {
    mpz_class P = 0;
    for (int s : elements(A)) P += k == 1 ? mpz_class(s - 1) : mpz_class((zpow(k, static_cast<unsigned long>(s - 1)) - 1) / (k - 1));
    return P;
}

std::optional<Mask> set_from_position(const mpz_class& P, int n, int k) {
    // sum_{s in A} k^{s-1} = (k-1) P + #A
    if (k == 1) {
        if (P < 0 || P >= n) return std::nullopt;
        return bit(static_cast<int>(P.get_si()) + 1);
    }
    mpz_class X = mpz_class(k - 1) * P + k;
    Mask A = 0;
    for (int s = 1; X != 0; ++s) {
        if (s > n) return std::nullopt;
        mpz_class dgt = X % k;
        if (dgt > 1) return std::nullopt;
        if (dgt == 1) A = with(A, s);
        X /= k;
    }
    if (card(A) != k) return std::nullopt;
    return A;
}

mpz_class shortcut_delta(const LabeledValues& g, const BasisPermutation& Psi, int n, int k) {
    mpz_class maxG = 0;
    for (const auto& [I, v] : g) {
        if (v.get_den() != 1) throw std::invalid_argument("shortcut_delta: non-integer term");
        if (abs(v.get_num()) > maxG) maxG = abs(v.get_num());
    }
    ShortcutQuery s = shortcut_query(maxG, n, k, g.size());
    Rational sum = 0;
    for (const Rational& v : oracle_answer(g, Psi, s.t0).values) sum += v;
    return sum.get_num();
}

ShortcutResult integer_shortcut(const mpz_class& maxG, const mpz_class& delta, int n, int k, std::size_t g_size,
                                const LabeledValues* reference) {
    ShortcutResult out;
    auto fail = [&](const std::string& stage, const std::string& e) {
        out.ok = false;
        out.stage = stage;
        out.error = e;
        return out;
    };
    if (maxG < 1) return fail("decode", "maxG must be positive");
    out.query = shortcut_query(maxG, n, k, g_size);
    const mpz_class M = zpow(out.query.base, static_cast<unsigned long>(out.query.block));
    const mpz_class half = M / 2;
    mpz_class rest = delta, seen_max = 0;
    for (mpz_class P = 0; rest != 0; ++P) {
        mpz_class dgt;
        mpz_fdiv_r(dgt.get_mpz_t(), rest.get_mpz_t(), M.get_mpz_t());
        if (dgt > half) dgt -= M;
        rest = (rest - dgt) / M;
        if (dgt == 0) continue;
        if (abs(dgt) > maxG) return fail("decode", "block " + P.get_str() + " exceeds maxG");
        auto A = set_from_position(P, n, k);
        if (!A) return fail("decode", "nonzero block at position " + P.get_str() + " names no k-subset");
        if (abs(dgt) > seen_max) seen_max = abs(dgt);
        Rational c(dgt);
        out.decoded.push_back({*A, c, c * monomial_at(out.query.t0, *A)});
    }
    if (out.decoded.size() != g_size)
        return fail("decode", "decoded " + std::to_string(out.decoded.size()) + " blocks, expected " + std::to_string(g_size));
    if (seen_max != maxG) return fail("decode", "largest block differs from maxG");
    if (reference) {
        std::string why;
        out.psi = match_labels(out.decoded, *reference, n, k, &why);
        if (!out.psi) return fail("labels", why);
        UnlabeledAnswer ans;
        for (const auto& d : out.decoded) ans.values.push_back(d.value);
        LabelResult lr = verify_and_label(ans, *out.psi, out.query.t0, *reference);
        if (!lr.ok || Rational(delta) != lr.answer_sum) return fail("sum", lr.error.empty() ? "sum mismatch" : lr.error);
        out.gmap = lr.gmap;
    } else {
        out.gmap = label_map(out.decoded);
    }
    out.recovery = recover_matrices(out.gmap, n, k);
    if (!out.recovery->ok) return fail("matrices", out.recovery->stage + ": " + out.recovery->error);
    out.ok = true;
    return out;
}

}  // namespace cbr
