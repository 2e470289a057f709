#pragma once

// Third-order tensor identities in a frame diagonalizing the second
// fundamental form: the Schoen-Simon-Yau decomposition of
// |grad A|^2 - |grad |A||^2, its nonnegativity, the equality-case system,
// and the rank classification behind the cylinder characterization.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "curvstab/common.hpp"
#include "curvstab/curvalg.hpp"

namespace curvstab::tensorid {

/// |A| below which dividing by |A|^2 is refused.
inline constexpr double kNormFloor = 1e-10;
/// Default tolerance for equality / rank classification on grid-sourced data.
inline constexpr double kDefaultTol = 1e-8;

/// Fully symmetric third-order array h_ijk; entries are symmetrized over all
/// six index permutations on construction.
class CubicSymTensor {
  public:
    explicit CubicSymTensor(int dim) : n_(dim), a_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {
        if (dim < 2) throw invalid_input("CubicSymTensor: dimension must be >= 2");
    }

    static CubicSymTensor from_raw(int dim, const std::vector<double>& raw) {
        CubicSymTensor t(dim);
        if (raw.size() != t.a_.size()) throw invalid_input("CubicSymTensor: wrong entry count");
        // Symmetrize: average over the six permutations of (i,j,k).
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                for (int k = 0; k < dim; ++k) {
                    const double v = (raw[t.flat(i, j, k)] + raw[t.flat(i, k, j)] +
                                      raw[t.flat(j, i, k)] + raw[t.flat(j, k, i)] +
                                      raw[t.flat(k, i, j)] + raw[t.flat(k, j, i)]) /
                                     6.0;
                    t.a_[t.flat(i, j, k)] = v;
                }
        return t;
    }

    int n() const { return n_; }
    double operator()(int i, int j, int k) const { return a_[flat(i, j, k)]; }

    /// Sets the whole permutation class of (i,j,k) to v.
    void set_sym(int i, int j, int k, double v) {
        a_[flat(i, j, k)] = a_[flat(i, k, j)] = a_[flat(j, i, k)] = a_[flat(j, k, i)] =
            a_[flat(k, i, j)] = a_[flat(k, j, i)] = v;
    }

  private:
    std::size_t flat(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }
    int n_;
    std::vector<double> a_;
};

/// Diagonal entries h_ii of the second fundamental form in its eigenframe.
struct DiagonalShape {
    int n = 0;
    Eigen::VectorXd h;

    DiagonalShape(int dim, Eigen::VectorXd diag) : n(dim), h(std::move(diag)) {
        if (n < 2) throw invalid_input("DiagonalShape: dimension must be >= 2");
        if (h.size() != n) throw invalid_input("DiagonalShape: need n diagonal entries");
    }
    static DiagonalShape of(std::initializer_list<double> values) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
        Eigen::Index i = 0;
        for (double x : values) v[i++] = x;
        return DiagonalShape(static_cast<int>(values.size()), std::move(v));
    }
    double norm_sq() const { return h.squaredNorm(); }
};

/// |grad A|^2 - |grad |A||^2 written directly:
///   sum_{ijk} C_ijk^2 - sum_k (sum_i h_ii C_iik)^2 / sum_i h_ii^2.
inline double ssy_left(const DiagonalShape& h, const CubicSymTensor& C) {
    if (h.n != C.n()) throw invalid_input("ssy_left: dimension mismatch");
    const double a2 = h.norm_sq();
    if (std::sqrt(a2) < kNormFloor) throw division_by_zero("ssy_left: |A| vanishes");
    double full = 0.0;
    for (int i = 0; i < h.n; ++i)
        for (int j = 0; j < h.n; ++j)
            for (int k = 0; k < h.n; ++k) full += C(i, j, k) * C(i, j, k);
    double grad = 0.0;
    for (int k = 0; k < h.n; ++k) {
        double dk = 0.0;
        for (int i = 0; i < h.n; ++i) dk += h.h[i] * C(i, i, k);
        grad += dk * dk;
    }
    return full - grad / a2;
}

/// The closed form on the last line of the SSY chain of equalities:
///   1/2 sum_{iks} (h_ii C_ssk - h_ss C_iik)^2 / |A|^2
///   + 2 sum_{i!=j} C_iij^2 + sum_{i,j,k distinct} C_ijk^2.
/// Nonnegative by inspection.
inline double ssy_right(const DiagonalShape& h, const CubicSymTensor& C) {
    if (h.n != C.n()) throw invalid_input("ssy_right: dimension mismatch");
    const double a2 = h.norm_sq();
    if (std::sqrt(a2) < kNormFloor) throw division_by_zero("ssy_right: |A| vanishes");
    double pairs = 0.0;
    for (int i = 0; i < h.n; ++i)
        for (int k = 0; k < h.n; ++k)
            for (int s = 0; s < h.n; ++s) {
                const double d = h.h[i] * C(s, s, k) - h.h[s] * C(i, i, k);
                pairs += d * d;
            }
    double offdiag = 0.0;
    for (int i = 0; i < h.n; ++i)
        for (int j = 0; j < h.n; ++j) {
            if (i == j) continue;
            offdiag += C(i, i, j) * C(i, i, j);
        }
    double distinct = 0.0;
    for (int i = 0; i < h.n; ++i)
        for (int j = 0; j < h.n; ++j)
            for (int k = 0; k < h.n; ++k) {
                if (i == j || j == k || i == k) continue;
                distinct += C(i, j, k) * C(i, j, k);
            }
    return 0.5 * pairs / a2 + 2.0 * offdiag + distinct;
}

/// The three equation families forced by equality in the SSY bound, plus the
/// derived claim that at most one diagonal third derivative survives.
struct EqualityReport {
    bool offdiag_vanish = false;     // h_jji = 0 for all j != i
    bool distinct_vanish = false;    // h_ijk = 0 for pairwise distinct indices
    bool proportional = false;       // h_ii h_ssk = h_ss h_iik for all i,s,k
    bool at_most_one_diag = false;   // #{i : |C_iii| > tol} <= 1
    bool all() const { return offdiag_vanish && distinct_vanish && proportional; }
};

inline EqualityReport equality_conditions(const DiagonalShape& h, const CubicSymTensor& C,
                                          double tol = kDefaultTol) {
    if (h.n != C.n()) throw invalid_input("equality_conditions: dimension mismatch");
    EqualityReport rep;
    rep.offdiag_vanish = true;
    rep.distinct_vanish = true;
    rep.proportional = true;
    for (int i = 0; i < h.n; ++i)
        for (int j = 0; j < h.n; ++j) {
            if (i == j) continue;
            if (std::abs(C(j, j, i)) > tol) rep.offdiag_vanish = false;
        }
    for (int i = 0; i < h.n; ++i)
        for (int j = 0; j < h.n; ++j)
            for (int k = 0; k < h.n; ++k) {
                if (i == j || j == k || i == k) continue;
                if (std::abs(C(i, j, k)) > tol) rep.distinct_vanish = false;
            }
    for (int i = 0; i < h.n; ++i)
        for (int s = 0; s < h.n; ++s)
            for (int k = 0; k < h.n; ++k)
                if (std::abs(h.h[i] * C(s, s, k) - h.h[s] * C(i, i, k)) > tol)
                    rep.proportional = false;
    int diag_nonzero = 0;
    for (int i = 0; i < h.n; ++i)
        if (std::abs(C(i, i, i)) > tol) ++diag_nonzero;
    rep.at_most_one_diag = diag_nonzero <= 1;
    return rep;
}

enum class RankClass { flat, cylinder_like, generic };

/// Counts surviving principal curvatures: zero -> flat, one -> cylinder over
/// a curve, more -> generic.
inline RankClass classify_rank(const DiagonalShape& h, double tol = kDefaultTol) {
    int nonzero = 0;
    for (int i = 0; i < h.n; ++i)
        if (std::abs(h.h[i]) > tol) ++nonzero;
    if (nonzero == 0) return RankClass::flat;
    if (nonzero == 1) return RankClass::cylinder_like;
    return RankClass::generic;
}

/// trace(A^2 P_1), the squared norm |sqrt(P_1) A|^2 when P_1 is psd. Equals
/// S_1 S_2 - 3 S_3 in general and -3 S_3 when S_2 = 0.
inline double p1_contraction(const curvalg::ShapeOperator& A) {
    const Eigen::MatrixXd P1 = curvalg::newton_operator(A, 1).entries;
    return (A.entries * A.entries * P1).trace();
}

}  // namespace curvstab::tensorid
