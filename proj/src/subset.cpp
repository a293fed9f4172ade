#include "cbr/subset.hpp"

#include <stdexcept>

namespace cbr {

Mask mask_of(const std::vector<int>& elems) {
    Mask m = 0;
    for (int a : elems) {
        if (a < 1 || a > kMaxN) throw std::out_of_range("subset element out of range");
        if (has(m, a)) throw std::invalid_argument("repeated subset element");
        m = with(m, a);
    }
    return m;
}

std::vector<int> elements(Mask m) {
    std::vector<int> out;
    for (int a = 1; m; ++a, m >>= 1)
        if (m & 1U) out.push_back(a);
    return out;
}

std::string subset_str(Mask m) {
    std::string s = "{";
    bool first = true;
    for (int a : elements(m)) {
        if (!first) s += ",";
        s += std::to_string(a);
        first = false;
    }
    return s + "}";
}

namespace {
void gen(int start, int n, int left, Mask cur, std::vector<Mask>& out) {
    if (left == 0) {
        out.push_back(cur);
        return;
    }
    for (int a = start; a <= n - left + 1; ++a) gen(a + 1, n, left - 1, with(cur, a), out);
}
}  // namespace

std::vector<Mask> k_subsets(int n, int k) {
    std::vector<Mask> out;
    if (k < 0 || k > n) return out;
    gen(1, n, k, 0, out);
    return out;
}

bool lex_less(Mask a, Mask b) { return elements(a) < elements(b); }

unsigned long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    unsigned long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
    return r;
}

unsigned long long colex_rank(Mask m) {
    unsigned long long r = 0;
    int i = 1;
    for (int a : elements(m)) r += binomial(a - 1, i++);
    return r;
}

int count_between(Mask m, int a, int b) {
    if (a > b) std::swap(a, b);
    int c = 0;
    for (int x = a + 1; x < b; ++x)
        if (has(m, x)) ++c;
    return c;
}

}  // namespace cbr
