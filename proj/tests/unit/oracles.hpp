// Independent reference implementations used only by the tests.
#ifndef CBR_TEST_ORACLES_HPP
#define CBR_TEST_ORACLES_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "cbr/laurent.hpp"

namespace oracle {

using cbr::Rational;
using Dense = std::map<std::vector<int>, Rational>;

inline Dense to_dense(const cbr::LaurentPoly& p) {
    Dense d;
    for (const auto& [e, c] : p.terms()) d[e] = c;
    return d;
}

// Schoolbook product on plain maps.
inline Dense mul(const Dense& a, const Dense& b) {
    Dense r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            std::vector<int> e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r[e] += ca * cb;
        }
    for (auto it = r.begin(); it != r.end();)
        it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

// Leibniz determinant over an arbitrary ring type with +,-,*.
template <class T>
T leibniz(const std::vector<std::vector<T>>& m, const T& zero) {
    std::size_t n = m.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    T total = zero;
    do {
        int inv = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inv;
        T prod = m[0][perm[0]];
        for (std::size_t i = 1; i < n; ++i) prod = prod * m[i][perm[i]];
        total = (inv % 2) ? total - prod : total + prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

inline Rational small_rational(std::mt19937& rng, int range = 5) {
    std::uniform_int_distribution<int> num(-range, range), den(1, 3);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

}  // namespace oracle


#include "doctest.h"
#include "cbr/field.hpp"
#include "cbr/matrix.hpp"

namespace oracle {
// Constant matrix with small random rational entries.
inline cbr::ExactMatrix random_matrix(int rows, int cols, std::mt19937& rng, int d = 0, int range = 5) {
    cbr::ExactMatrix m(rows, cols, d);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = cbr::QuadExtScalar::constant(d, small_rational(rng, range));
    return m;
}

// Random k x n matrix with every maximal minor nonzero.
inline cbr::ExactMatrix random_generic(int rows, int cols, std::mt19937& rng, int range = 5) {
    for (;;) {
        cbr::ExactMatrix m = random_matrix(rows, cols, rng, 0, range);
        bool ok = true;
        for (const auto& v : cbr::all_minors_serial(m).values) ok = ok && !v.is_zero();
        if (ok) return m;
    }
}

inline std::vector<std::vector<cbr::QuadExtScalar>> submatrix_cols(const cbr::ExactMatrix& m, cbr::Mask s) {
    std::vector<std::vector<cbr::QuadExtScalar>> a(static_cast<std::size_t>(m.rows()));
    for (int r = 0; r < m.rows(); ++r)
        for (int c : cbr::elements(s)) a[r].push_back(m(r, c - 1));
    return a;
}
}  // namespace oracle

namespace doctest {
template <>
struct StringMaker<cbr::LaurentPoly> {
    static String convert(const cbr::LaurentPoly& p) { return p.to_string().c_str(); }
};
template <>
struct StringMaker<cbr::RationalFunction> {
    static String convert(const cbr::RationalFunction& p) { return p.to_string().c_str(); }
};
template <>
struct StringMaker<cbr::QuadExtScalar> {
    static String convert(const cbr::QuadExtScalar& p) { return p.to_string().c_str(); }
};
}  // namespace doctest

#endif
