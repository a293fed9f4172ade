#include "cbr/matrix.hpp"

#include <exception>
#include <sstream>
#include <stdexcept>

namespace cbr {

ExactMatrix::ExactMatrix(int rows, int cols, int d)
    : names(default_names(d)), rows_(rows), cols_(cols), d_(d),
      e_(static_cast<std::size_t>(rows * cols), QuadExtScalar(d)) {}

ExactMatrix ExactMatrix::identity(int k, int d) {
    ExactMatrix m(k, k, d);
    for (int i = 0; i < k; ++i) m(i, i) = QuadExtScalar::constant(d, 1);
    return m;
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix t(cols_, rows_, d_);
    t.names = names;
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    ExactMatrix p(rows_, o.cols_, d_);
    p.names = names;
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < o.cols_; ++c) {
            QuadExtScalar s(d_);
            for (int k = 0; k < cols_; ++k) {
                const QuadExtScalar& a = (*this)(r, k);
                const QuadExtScalar& b = o(k, c);
                if (a.is_zero() || b.is_zero()) continue;
                s = s + a * b;
            }
            p(r, c) = s;
        }
    return p;
}

DiscPtr ExactMatrix::disc() const {
    for (const auto& x : e_)
        if (!x.rad().is_zero()) return x.disc();
    for (const auto& x : e_)
        if (x.disc()) return x.disc();
    return nullptr;
}

bool ExactMatrix::all_laurent() const {
    for (const auto& x : e_)
        if (!x.in_base_field() || !x.rat().is_laurent()) return false;
    return true;
}

bool ExactMatrix::all_base_field() const {
    for (const auto& x : e_)
        if (!x.in_base_field()) return false;
    return true;
}

ExactMatrix ExactMatrix::select_cols(const std::vector<int>& cols1) const {
    ExactMatrix m(rows_, static_cast<int>(cols1.size()), d_);
    m.names = names;
    for (int r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols1.size(); ++c) m(r, static_cast<int>(c)) = (*this)(r, cols1[c] - 1);
    return m;
}

ExactMatrix ExactMatrix::select_rows(const std::vector<int>& rows1) const {
    ExactMatrix m(static_cast<int>(rows1.size()), cols_, d_);
    m.names = names;
    for (std::size_t r = 0; r < rows1.size(); ++r)
        for (int c = 0; c < cols_; ++c) m(static_cast<int>(r), c) = (*this)(rows1[r] - 1, c);
    return m;
}

std::optional<ExactMatrix> ExactMatrix::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
    int n = rows_;
    Square a(static_cast<std::size_t>(n), std::vector<QuadExtScalar>(static_cast<std::size_t>(2 * n), QuadExtScalar(d_)));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) a[r][c] = (*this)(r, c);
        a[r][n + r] = QuadExtScalar::constant(d_, 1);
    }
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && a[p][c].is_zero()) ++p;
        if (p == n) return std::nullopt;
        std::swap(a[p], a[c]);
        QuadExtScalar inv = a[c][c].inverse();
        for (auto& x : a[c])
            if (!x.is_zero()) x = x * inv;
        for (int r = 0; r < n; ++r) {
            if (r == c || a[r][c].is_zero()) continue;
            QuadExtScalar f = a[r][c];
            for (int j = 0; j < 2 * n; ++j)
                if (!a[c][j].is_zero()) a[r][j] = a[r][j] - f * a[c][j];
        }
    }
    ExactMatrix out(n, n, d_);
    out.names = names;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out(r, c) = a[r][n + c];
    return out;
}

ExactMatrix evaluate_matrix(const ExactMatrix& m, const std::vector<Rational>& point) {
    int d = m.nvars();
    ExactMatrix out(m.rows(), m.cols(), d);
    out.names = m.names;
    DiscPtr dv;
    std::optional<Rational> root;  // set when the evaluated discriminant is a square
    if (DiscPtr disc = m.disc()) {
        auto c = disc->evaluate(point);
        if (!c) throw std::domain_error("discriminant undefined at evaluation point");
        root = rational_sqrt(*c);
        dv = std::make_shared<const LaurentPoly>(LaurentPoly::constant(d, *c));
    }
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            const QuadExtScalar& x = m(r, c);
            auto a = x.rat().evaluate(point);
            auto b = x.rad().evaluate(point);
            if (!a || !b) throw std::domain_error("matrix entry undefined at evaluation point");
            if (*b == 0)
                out(r, c) = QuadExtScalar::constant(d, *a);
            else if (root)
                out(r, c) = QuadExtScalar::constant(d, *a + *b * *root);
            else
                out(r, c) = QuadExtScalar(RationalFunction::constant(d, *a), RationalFunction::constant(d, *b), dv);
        }
    return out;
}

// ------------------------------------------------------- determinants

namespace {

std::optional<LaurentPoly> bareiss_laurent(std::vector<std::vector<LaurentPoly>> a, int d) {
    std::size_t n = a.size();
    int sign = 1;
    LaurentPoly prev = LaurentPoly::constant(d, 1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c].is_zero()) ++p;
        if (p == n) return LaurentPoly(d);
        if (p != c) {
            std::swap(a[p], a[c]);
            sign = -sign;
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            for (std::size_t j = c + 1; j < n; ++j) {
                LaurentPoly num = a[c][c] * a[r][j] - a[r][c] * a[c][j];
                auto q = num.exact_div(prev);
                if (!q) return std::nullopt;
                a[r][j] = std::move(*q);
            }
            a[r][c] = LaurentPoly(d);
        }
        prev = a[c][c];
    }
    LaurentPoly det = a[n - 1][n - 1];
    if (sign < 0) det = -det;
    return det;
}

QuadExtScalar bareiss_field(Square a, int d) {
    std::size_t n = a.size();
    int sign = 1;
    QuadExtScalar prev = QuadExtScalar::constant(d, 1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c].is_zero()) ++p;
        if (p == n) return QuadExtScalar(d);
        if (p != c) {
            std::swap(a[p], a[c]);
            sign = -sign;
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            for (std::size_t j = c + 1; j < n; ++j) a[r][j] = (a[c][c] * a[r][j] - a[r][c] * a[c][j]) / prev;
            a[r][c] = QuadExtScalar(d);
        }
        prev = a[c][c];
    }
    return sign < 0 ? -a[n - 1][n - 1] : a[n - 1][n - 1];
}

}  // namespace

QuadExtScalar determinant_cofactor(const Square& a, int d) {
    std::size_t n = a.size();
    if (n == 0) return QuadExtScalar::constant(d, 1);
    if (n == 1) return a[0][0];
    QuadExtScalar total(d);
    for (std::size_t c = 0; c < n; ++c) {
        if (a[0][c].is_zero()) continue;
        Square sub;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<QuadExtScalar> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(a[r][j]);
            sub.push_back(std::move(row));
        }
        QuadExtScalar term = a[0][c] * determinant_cofactor(sub, d);
        total = (c % 2) ? total - term : total + term;
    }
    return total;
}

QuadExtScalar determinant(Square a, int d) {
    std::size_t n = a.size();
    if (n == 0) return QuadExtScalar::constant(d, 1);
    bool laurent = true;
    DiscPtr disc;
    for (const auto& row : a)
        for (const auto& x : row) {
            if (!x.in_base_field() || !x.rat().is_laurent()) laurent = false;
            if (x.disc()) disc = x.disc();
        }
    if (laurent) {
        std::vector<std::vector<LaurentPoly>> b(n);
        for (std::size_t r = 0; r < n; ++r)
            for (const auto& x : a[r]) b[r].push_back(x.rat().num());
        if (auto det = bareiss_laurent(std::move(b), d)) return QuadExtScalar(RationalFunction(*det), RationalFunction(d), disc);
    }
    try {
        return bareiss_field(a, d);
    } catch (const std::domain_error&) {
        // A pivot with vanishing norm (square discriminant): expand instead.
        return determinant_cofactor(a, d);
    }
}

QuadExtScalar col_minor(const ExactMatrix& m, Mask cols) {
    std::vector<int> idx = elements(cols);
    if (static_cast<int>(idx.size()) != m.rows()) throw std::invalid_argument("minor: subset size differs from k");
    if (!idx.empty() && idx.back() > m.cols()) throw std::out_of_range("minor: column index out of range");
    Square a(idx.size());
    for (int r = 0; r < m.rows(); ++r)
        for (int c : idx) a[r].push_back(m(r, c - 1));
    return determinant(std::move(a), m.nvars());
}

QuadExtScalar row_minor(const ExactMatrix& m, Mask rows) {
    std::vector<int> idx = elements(rows);
    if (static_cast<int>(idx.size()) != m.cols()) throw std::invalid_argument("minor: subset size differs from k");
    if (!idx.empty() && idx.back() > m.rows()) throw std::out_of_range("minor: row index out of range");
    Square a;
    for (int r : idx) {
        std::vector<QuadExtScalar> row;
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r - 1, c));
        a.push_back(std::move(row));
    }
    return determinant(std::move(a), m.nvars());
}

namespace {
MinorTable empty_table(const ExactMatrix& m, Orientation o) {
    MinorTable t;
    t.k = o == Orientation::Columns ? m.rows() : m.cols();
    t.n = o == Orientation::Columns ? m.cols() : m.rows();
    t.d = m.nvars();
    if (t.k > t.n) throw std::invalid_argument("maximal minors need k <= n");
    t.values.assign(binomial(t.n, t.k), QuadExtScalar(t.d));
    return t;
}
}  // namespace

MinorTable all_minors(const ExactMatrix& m, Orientation o) {
    MinorTable t = empty_table(m, o);
    std::vector<Mask> subsets = k_subsets(t.n, t.k);
    std::exception_ptr err;
    long count = static_cast<long>(subsets.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        try {
            Mask s = subsets[static_cast<std::size_t>(i)];
            t.values[colex_rank(s)] = o == Orientation::Columns ? col_minor(m, s) : row_minor(m, s);
        } catch (...) {
#pragma omp critical
            err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return t;
}

MinorTable all_minors_serial(const ExactMatrix& m, Orientation o) {
    MinorTable t = empty_table(m, o);
    for (Mask s : k_subsets(t.n, t.k)) t.values[colex_rank(s)] = o == Orientation::Columns ? col_minor(m, s) : row_minor(m, s);
    return t;
}

MinorFn minor_fn(const MinorTable& t) {
    return [&t](Mask m) { return t.at(m); };
}

// ------------------------------------------------------ signed minors

namespace {
int smaller_in(Mask H, int a) {
    int c = 0;
    for (int x : elements(H))
        if (x < a) ++c;
    return c;
}
}  // namespace

QuadExtScalar signed_minor(const MinorFn& f, int a, int b, Mask H) {
    if (a == b) throw std::invalid_argument("signed_minor: equal indices");
    if (has(H, a) || has(H, b)) throw std::invalid_argument("signed_minor: index inside H");
    QuadExtScalar v = f(with(with(H, a), b));
    int e = 1 + smaller_in(H, a) + smaller_in(H, b) + (a < b ? 1 : 0);
    return e % 2 ? -v : v;
}

QuadExtScalar signed_minor(const ExactMatrix& m, int a, int b, Mask H) {
    return signed_minor([&m](Mask s) { return col_minor(m, s); }, a, b, H);
}

QuadExtScalar plucker_residual(const MinorFn& f, Mask H, int d1, int d2, int d3, int d4) {
    int ds[4] = {d1, d2, d3, d4};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (ds[i] == ds[j]) throw std::invalid_argument("plucker_residual: repeated index");
    auto s = [&](int a, int b) { return signed_minor(f, a, b, H); };
    return s(d1, d2) * s(d3, d4) - s(d1, d3) * s(d2, d4) + s(d1, d4) * s(d2, d3);
}

QuadExtScalar plucker_residual(const ExactMatrix& m, Mask H, int d1, int d2, int d3, int d4) {
    return plucker_residual([&m](Mask s) { return col_minor(m, s); }, H, d1, d2, d3, d4);
}

PluckerScan plucker_scan(const MinorFn& f, int n, int k, int /*d*/, bool stop_at_first) {
    PluckerScan out;
    if (k < 2) return out;
    for (Mask H : k_subsets(n, k - 2)) {
        std::vector<int> rest;
        for (int a = 1; a <= n; ++a)
            if (!has(H, a)) rest.push_back(a);
        std::size_t r = rest.size();
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b)
                for (std::size_t c = b + 1; c < r; ++c)
                    for (std::size_t e = c + 1; e < r; ++e) {
                        ++out.checked;
                        QuadExtScalar res = plucker_residual(f, H, rest[a], rest[b], rest[c], rest[e]);
                        if (!res.is_zero()) {
                            ++out.nonzero;
                            if (!out.first_failure)
                                out.first_failure = std::make_pair(H, std::vector<int>{rest[a], rest[b], rest[c], rest[e]});
                            if (stop_at_first) return out;
                        }
                    }
    }
    return out;
}

// ------------------------------------------------------------- gauge

GaugeResult gauge_normalize(const ExactMatrix& L, const ExactMatrix& R, Mask basis, int alpha1) {
    int n = R.rows(), k = R.cols(), d = R.nvars();
    if (L.rows() != k || L.cols() != n) throw std::invalid_argument("gauge_normalize: shape mismatch");
    if (card(basis) != k || has(basis, alpha1)) throw std::invalid_argument("gauge_normalize: bad basis/column");
    std::vector<int> I = elements(basis);
    auto RIinv = R.select_rows(I).inverse();
    if (!RIinv) throw std::domain_error("gauge_normalize: basis rows of R are singular");
    ExactMatrix Rc = R * *RIinv;  // rows I are the identity
    std::vector<QuadExtScalar> w(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        w[j] = Rc(alpha1 - 1, j);
        if (w[j].is_zero()) throw std::domain_error("gauge_normalize: vanishing pivot entry in row alpha1");
    }
    std::vector<QuadExtScalar> D(static_cast<std::size_t>(n), QuadExtScalar::constant(d, 1));
    for (int j = 0; j < k; ++j) D[I[j] - 1] = w[j];
    for (int a = 1; a <= n; ++a) {
        if (has(basis, a) || a == alpha1) continue;
        const QuadExtScalar& v = Rc(a - 1, 0);
        if (v.is_zero()) throw std::domain_error("gauge_normalize: vanishing pivot-column entry");
        D[a - 1] = w[0] / v;
    }
    ExactMatrix dm = *RIinv;
    for (int r = 0; r < k; ++r)
        for (int j = 0; j < k; ++j) dm(r, j) = dm(r, j) / w[j];
    GaugeResult g;
    g.basis = basis;
    g.alpha1 = alpha1;
    g.pivot = I[0];
    g.D = D;
    g.d = dm;
    g.det_d = determinant([&] {
        Square s(static_cast<std::size_t>(k));
        for (int r = 0; r < k; ++r)
            for (int j = 0; j < k; ++j) s[r].push_back(dm(r, j));
        return s;
    }(), d);
    g.R = ExactMatrix(n, k, d);
    g.R.names = R.names;
    for (int a = 0; a < n; ++a)
        for (int j = 0; j < k; ++j) g.R(a, j) = D[a] * Rc(a, j) / w[j];
    auto dinv = dm.inverse();
    ExactMatrix Ls = *dinv * L;
    for (int r = 0; r < k; ++r)
        for (int a = 0; a < n; ++a) Ls(r, a) = Ls(r, a) / D[a];
    g.L = Ls;
    return g;
}

GaugeResult gauge_normalize(const ExactMatrix& L, const ExactMatrix& R) {
    int k = R.cols();
    return gauge_normalize(L, R, full_mask(k), k + 1);
}

// -------------------------------------------------------------- duals

ExactMatrix complement_rep(const ExactMatrix& L, Mask basis) {
    int k = L.rows(), n = L.cols(), d = L.nvars();
    std::vector<int> I = elements(basis);
    auto inv = L.select_cols(I).inverse();
    if (!inv) throw std::domain_error("dual: the given subset is not a basis");
    ExactMatrix Lh = *inv * L;
    ExactMatrix K(n - k, n, d);
    K.names = L.names;
    int row = 0;
    for (int w = 1; w <= n; ++w) {
        if (has(basis, w)) continue;
        K(row, w - 1) = QuadExtScalar::constant(d, -1);
        for (int r = 0; r < k; ++r) K(row, I[r] - 1) = Lh(r, w - 1);
        ++row;
    }
    for (int a = 1; a <= n; ++a)
        if (a % 2 == 0)
            for (int r = 0; r < n - k; ++r) K(r, a - 1) = -K(r, a - 1);
    return K;
}

DualResult dual_pair(const ExactMatrix& L, const ExactMatrix& R, Mask basis) {
    int n = L.cols();
    DualResult out;
    out.Lperp = complement_rep(L, basis);
    ExactMatrix Rt = R.transpose();
    out.Rperp = complement_rep(Rt, basis);
    Mask comp = full_mask(n) & ~basis;
    out.CL = col_minor(out.Lperp, comp) / col_minor(L, basis);
    QuadExtScalar rb = row_minor(R, basis);
    if (rb.is_zero()) throw std::domain_error("dual: the given subset is not a basis of R");
    out.CR = col_minor(out.Rperp, comp) / rb;
    return out;
}

std::string matrix_to_string(const ExactMatrix& m) {
    std::ostringstream os;
    for (int r = 0; r < m.rows(); ++r) {
        os << '[';
        for (int c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << m(r, c).to_string(m.names);
        os << "]\n";
    }
    return os.str();
}

}  // namespace cbr
