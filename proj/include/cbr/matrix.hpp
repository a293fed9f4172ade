#ifndef CBR_MATRIX_HPP
#define CBR_MATRIX_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cbr/field.hpp"
#include "cbr/subset.hpp"

namespace cbr {

// Dense matrix over F(sqrt D).  Left factors are k x n; right factors are
// stored n x k and their minors are taken over rows.
class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(int rows, int cols, int d);
    static ExactMatrix identity(int k, int d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nvars() const { return d_; }
    QuadExtScalar& operator()(int r, int c) { return e_[static_cast<std::size_t>(r * cols_ + c)]; }
    const QuadExtScalar& operator()(int r, int c) const { return e_[static_cast<std::size_t>(r * cols_ + c)]; }

    ExactMatrix transpose() const;
    ExactMatrix operator*(const ExactMatrix& o) const;
    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }
    DiscPtr disc() const;  // discriminant of any entry with nonzero radical part
    bool all_laurent() const;
    bool all_base_field() const;
    // Columns (or rows) permuted/selected.
    ExactMatrix select_cols(const std::vector<int>& cols1) const;
    ExactMatrix select_rows(const std::vector<int>& rows1) const;
    std::optional<ExactMatrix> inverse() const;

    std::vector<std::string> names;  // variable names for printing/parsing

private:
    int rows_ = 0, cols_ = 0, d_ = 0;
    std::vector<QuadExtScalar> e_;
};

// Value of every entry at a rational point (entries keep d variables but
// become constants; the discriminant is evaluated as well).
ExactMatrix evaluate_matrix(const ExactMatrix& m, const std::vector<Rational>& point);

using Square = std::vector<std::vector<QuadExtScalar>>;
QuadExtScalar determinant(Square a, int d);          // Bareiss
QuadExtScalar determinant_cofactor(const Square& a, int d);  // Laplace expansion

QuadExtScalar col_minor(const ExactMatrix& m, Mask cols);  // k x n, #cols = k
QuadExtScalar row_minor(const ExactMatrix& m, Mask rows);  // n x k, #rows = k

// All C(n,k) maximal minors, indexed by colex rank.
struct MinorTable {
    int n = 0, k = 0, d = 0;
    std::vector<QuadExtScalar> values;
    const QuadExtScalar& at(Mask m) const { return values[colex_rank(m)]; }
    QuadExtScalar& at(Mask m) { return values[colex_rank(m)]; }
};

enum class Orientation { Columns, Rows };
MinorTable all_minors(const ExactMatrix& m, Orientation o = Orientation::Columns);         // OpenMP
MinorTable all_minors_serial(const ExactMatrix& m, Orientation o = Orientation::Columns);  // reference

using MinorFn = std::function<QuadExtScalar(Mask)>;
MinorFn minor_fn(const MinorTable& t);

// Delta(a,b|H) = Delta(H u {a,b}) (-1)^{1+S(a,H)+S(b,H)} sign(a-b).
QuadExtScalar signed_minor(const MinorFn& f, int a, int b, Mask H);
QuadExtScalar signed_minor(const ExactMatrix& m, int a, int b, Mask H);
QuadExtScalar plucker_residual(const MinorFn& f, Mask H, int d1, int d2, int d3, int d4);
QuadExtScalar plucker_residual(const ExactMatrix& m, Mask H, int d1, int d2, int d3, int d4);

struct PluckerScan {
    long checked = 0;
    long nonzero = 0;
    std::optional<std::pair<Mask, std::vector<int>>> first_failure;
};
// Every three-term relation over (k-2)-subsets H and 4-tuples outside H.
PluckerScan plucker_scan(const MinorFn& f, int n, int k, int d, bool stop_at_first = false);

// Gauge normalisation of a right factor R (n x k) at basis I and column
// alpha1 (pivot element i = min I):  R~ = diag(D) R d,  L~ = d^{-1} L diag(D)^{-1}.
// R~ has identity rows on I, row alpha1 all ones and ones in the pivot column.
struct GaugeResult {
    ExactMatrix L, R, d;
    std::vector<QuadExtScalar> D;
    QuadExtScalar det_d;
    Mask basis = 0;
    int alpha1 = 0, pivot = 0;
};
GaugeResult gauge_normalize(const ExactMatrix& L, const ExactMatrix& R, Mask basis, int alpha1);
GaugeResult gauge_normalize(const ExactMatrix& L, const ExactMatrix& R);

// Orthogonal-complement representations with alternating column signs:
// Delta_{Lperp}(J^C) = C_L Delta_L(J), Delta_{Rperp}(J^C) = C_R Delta_R(J).
// Both complements are returned as (n-k) x n.
struct DualResult {
    ExactMatrix Lperp, Rperp;
    QuadExtScalar CL, CR;
};
DualResult dual_pair(const ExactMatrix& L, const ExactMatrix& R, Mask basis);
ExactMatrix complement_rep(const ExactMatrix& L, Mask basis);

std::string matrix_to_string(const ExactMatrix& m);

}  // namespace cbr

#endif
