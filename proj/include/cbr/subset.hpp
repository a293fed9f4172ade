#ifndef CBR_SUBSET_HPP
#define CBR_SUBSET_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace cbr {

// k-subset of [n] (1-based elements) stored as a bitmask, bit a-1 for a.
using Mask = std::uint32_t;
constexpr int kMaxN = 31;

inline bool has(Mask m, int a) { return (m >> (a - 1)) & 1U; }
inline Mask bit(int a) { return Mask(1) << (a - 1); }
inline Mask with(Mask m, int a) { return m | bit(a); }
inline Mask without(Mask m, int a) { return m & ~bit(a); }
inline int card(Mask m) { return __builtin_popcount(m); }
// I^{out}_{in} = I \ {out} u {in}
inline Mask exchange(Mask m, int out, int in) { return with(without(m, out), in); }

Mask mask_of(const std::vector<int>& elems);
std::vector<int> elements(Mask m);
std::string subset_str(Mask m);
// Mask of [n].
inline Mask full_mask(int n) { return n >= 32 ? ~Mask(0) : ((Mask(1) << n) - 1); }

// All k-subsets of [n] in lexicographic order of their sorted tuples.
std::vector<Mask> k_subsets(int n, int k);
bool lex_less(Mask a, Mask b);

unsigned long long binomial(int n, int k);
// Colex rank in [0, C(n,k)).
unsigned long long colex_rank(Mask m);

// #{x in m : lo < x < hi} for lo<hi (order-free convenience).
int count_between(Mask m, int a, int b);

}  // namespace cbr

#endif
