#include "cbr/matroid.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace cbr {

Matroid::Matroid(int n, int k, std::vector<Mask> bases, bool trusted) : n_(n), k_(k) {
    if (bases.empty()) throw MatroidError("empty basis family");
    std::sort(bases.begin(), bases.end(), lex_less);
    bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
    member_.assign(binomial(n, k), 0);
    for (Mask b : bases) {
        if (card(b) != k || (b & ~full_mask(n))) throw MatroidError("basis " + subset_str(b) + " is not a k-subset of [n]");
        member_[colex_rank(b)] = 1;
    }
    bases_ = std::move(bases);
    if (!trusted)
        if (auto v = exchange_violation(n, k, bases_))
            throw MatroidError("exchange axiom fails for A=" + subset_str(v->A) + ", B=" + subset_str(v->B) +
                               ", alpha=" + std::to_string(v->alpha));
}

std::optional<ExchangeViolation> exchange_violation(int n, int k, const std::vector<Mask>& bases) {
    std::vector<char> in(binomial(n, k), 0);
    for (Mask b : bases) in[colex_rank(b)] = 1;
    for (Mask A : bases)
        for (Mask B : bases) {
            Mask AmB = A & ~B, BmA = B & ~A;
            for (int a : elements(AmB)) {
                bool ok = false;
                for (int b : elements(BmA))
                    if (in[colex_rank(exchange(A, a, b))]) {
                        ok = true;
                        break;
                    }
                if (!ok) return ExchangeViolation{A, B, a};
            }
        }
    return std::nullopt;
}

Matroid from_minor_map(int n, int k, const std::function<bool(Mask)>& nonzero) {
    std::vector<Mask> bases;
    for (Mask s : k_subsets(n, k))
        if (nonzero(s)) bases.push_back(s);
    return Matroid(n, k, std::move(bases));
}

Matroid from_minor_table(const MinorTable& t) {
    return from_minor_map(t.n, t.k, [&t](Mask s) { return !t.at(s).is_zero(); });
}

Matroid matroid_of(const ExactMatrix& m, Orientation o) { return from_minor_table(all_minors(m, o)); }

std::vector<Mask> exchange_chain(const Matroid& M, Mask I, Mask J) {
    if (!M.contains(I) || !M.contains(J)) throw MatroidError("exchange_chain: endpoints must be bases");
    // Breadth-first search over single exchanges; in a matroid the distance is #(I\J).
    std::unordered_map<Mask, Mask> parent{{I, I}};
    std::deque<Mask> queue{I};
    while (!queue.empty()) {
        Mask cur = queue.front();
        queue.pop_front();
        if (cur == J) break;
        for (int out : elements(cur & ~J))
            for (int in : elements(J & ~cur)) {
                Mask next = exchange(cur, out, in);
                if (!M.contains(next) || parent.count(next)) continue;
                parent.emplace(next, cur);
                queue.push_back(next);
            }
    }
    if (!parent.count(J)) throw MatroidError("exchange_chain: no chain between " + subset_str(I) + " and " + subset_str(J));
    std::vector<Mask> chain{J};
    while (chain.back() != I) chain.push_back(parent.at(chain.back()));
    std::reverse(chain.begin(), chain.end());
    if (chain.size() != static_cast<std::size_t>(card(I & ~J)) + 1) throw MatroidError("exchange_chain: chain longer than #(I\\J)");
    return chain;
}

bool is_generic_witness(const Matroid& M, const GenericColumns& g) {
    Mask I = g.basis;
    int a1 = g.alpha1, a2 = g.alpha2;
    if (a1 == a2 || card(I) != M.k() || has(I, a1) || has(I, a2) || !M.contains(I)) return false;
    std::vector<int> el = elements(I);
    for (int i : el) {
        if (!M.contains(exchange(I, i, a1)) || !M.contains(exchange(I, i, a2))) return false;
        for (int j : el)
            if (j > i && !M.contains(exchange(exchange(I, i, a1), j, a2))) return false;
    }
    return true;
}

std::optional<GenericColumns> find_generic_columns(const Matroid& M) {
    int n = M.n();
    for (Mask I : M.bases())
        for (int a1 = 1; a1 <= n; ++a1) {
            if (has(I, a1)) continue;
            for (int a2 = a1 + 1; a2 <= n; ++a2) {
                if (has(I, a2)) continue;
                GenericColumns g{I, a1, a2};
                if (is_generic_witness(M, g)) return g;
            }
        }
    return std::nullopt;
}

}  // namespace cbr
