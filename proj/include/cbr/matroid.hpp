#ifndef CBR_MATROID_HPP
#define CBR_MATROID_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbr/matrix.hpp"

namespace cbr {

struct MatroidError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Family of k-subsets of [n] closed under basis exchange.
class Matroid {
public:
    Matroid() = default;
    // Bases in any order; the exchange axiom is checked unless `trusted`.
    Matroid(int n, int k, std::vector<Mask> bases, bool trusted = false);

    int n() const { return n_; }
    int k() const { return k_; }
    const std::vector<Mask>& bases() const { return bases_; }  // lexicographic
    std::size_t size() const { return bases_.size(); }
    bool contains(Mask m) const { return card(m) == k_ && member_[colex_rank(m)]; }
    bool is_uniform() const { return bases_.size() == binomial(n_, k_); }

private:
    int n_ = 0, k_ = 0;
    std::vector<Mask> bases_;
    std::vector<char> member_;  // indexed by colex rank
};

struct ExchangeViolation {
    Mask A = 0, B = 0;
    int alpha = 0;
};
// First violation of: for A,B bases and alpha in A\B some beta in B\A has A^alpha_beta a basis.
std::optional<ExchangeViolation> exchange_violation(int n, int k, const std::vector<Mask>& bases);

Matroid from_minor_map(int n, int k, const std::function<bool(Mask)>& nonzero);
Matroid from_minor_table(const MinorTable& t);
// Bases of a constant (or evaluated) matrix.
Matroid matroid_of(const ExactMatrix& m, Orientation o = Orientation::Columns);

// L_0 = I, ..., L_r = J with r = #(I\J), single exchanges inside the bases.
std::vector<Mask> exchange_chain(const Matroid& M, Mask I, Mask J);

struct GenericColumns {
    Mask basis = 0;
    int alpha1 = 0, alpha2 = 0;
};
// Lexicographically least (I, alpha1 < alpha2) such that every J with
// J\I inside {alpha1, alpha2} is a basis.
std::optional<GenericColumns> find_generic_columns(const Matroid& M);
bool is_generic_witness(const Matroid& M, const GenericColumns& g);

}  // namespace cbr

#endif
