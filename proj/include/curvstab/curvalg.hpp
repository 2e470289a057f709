#pragma once

// Pointwise algebra of principal curvatures: elementary symmetric functions
// S_r, normalized means H_r, Newton transformations P_r, the trace identities
// they satisfy, and the curvature inequalities used by the stability
// estimates.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "curvstab/common.hpp"

namespace curvstab::curvalg {

/// Relative tolerance for the trace-identity residual checks.
inline constexpr double kIdentityTol = 1e-10;
/// Slack allowed when classifying P_1 as positive semidefinite.
inline constexpr double kPsdSlack = 1e-12;
/// Largest relative asymmetry accepted when symmetrizing matrix input.
inline constexpr double kAsymmetryTol = 1e-8;

/// Ordered principal curvatures at a point of an n-dimensional hypersurface.
struct PrincipalSpectrum {
    int n = 0;
    Eigen::VectorXd lambda;

    PrincipalSpectrum(int dim, Eigen::VectorXd values) : n(dim), lambda(std::move(values)) {
        if (n < 2) throw invalid_input("PrincipalSpectrum: dimension must be >= 2");
        if (lambda.size() != n)
            throw invalid_input("PrincipalSpectrum: need exactly n principal curvatures");
        if (!lambda.allFinite()) throw invalid_input("PrincipalSpectrum: non-finite entry");
    }

    static PrincipalSpectrum of(std::initializer_list<double> values) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
        Eigen::Index i = 0;
        for (double x : values) v[i++] = x;
        return PrincipalSpectrum(static_cast<int>(values.size()), std::move(v));
    }
};

/// Shape operator as a symmetric matrix. Input is symmetrized on
/// construction; grossly asymmetric input is rejected.
struct ShapeOperator {
    int n = 0;
    Eigen::MatrixXd entries;

    ShapeOperator(int dim, const Eigen::MatrixXd& raw) : n(dim) {
        if (n < 2) throw invalid_input("ShapeOperator: dimension must be >= 2");
        if (raw.rows() != n || raw.cols() != n)
            throw invalid_input("ShapeOperator: matrix must be n x n");
        if (!raw.allFinite()) throw invalid_input("ShapeOperator: non-finite entry");
        const double scale = std::max(1.0, raw.norm());
        if ((raw - raw.transpose()).norm() > kAsymmetryTol * scale)
            throw invalid_input("ShapeOperator: input exceeds asymmetry tolerance");
        entries = 0.5 * (raw + raw.transpose());
    }

    static ShapeOperator diag(std::initializer_list<double> values) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
        Eigen::Index i = 0;
        for (double x : values) v[i++] = x;
        return ShapeOperator(static_cast<int>(values.size()), v.asDiagonal());
    }

    /// Eigenvalues in ascending order.
    PrincipalSpectrum spectrum() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw numerical_failure("ShapeOperator: eigenvalue solve failed");
        return PrincipalSpectrum(n, es.eigenvalues());
    }
};

/// Newton transformation P_r of the shape operator that produced it.
struct NewtonOperator {
    int r = 0;
    Eigen::MatrixXd entries;
};

/// S_0..S_n and H_0..H_n at a point; S_0 = H_0 = 1, H_r = S_r / C(n,r).
struct CurvatureVector {
    int n = 0;
    Eigen::VectorXd S;  // length n+1
    Eigen::VectorXd H;  // length n+1
};

/// Binomial coefficient as a double; exact for the small n used here.
inline double binomial(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    r = std::min(r, n - r);
    double acc = 1.0;
    for (int k = 1; k <= r; ++k) acc = acc * static_cast<double>(n - r + k) / static_cast<double>(k);
    return std::round(acc);
}

/// Elementary symmetric functions of the principal curvatures, computed as
/// the coefficients of prod_i (t + lambda_i) by the stable O(n^2) recurrence,
/// together with the normalized means H_r = S_r / C(n,r).
inline CurvatureVector elem_sym(const PrincipalSpectrum& spec) {
    const int n = spec.n;
    Eigen::VectorXd S = Eigen::VectorXd::Zero(n + 1);
    S[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        const double lam = spec.lambda[i];
        for (int k = i + 1; k >= 1; --k) S[k] += lam * S[k - 1];
    }
    CurvatureVector cv;
    cv.n = n;
    cv.S = S;
    cv.H.resize(n + 1);
    for (int r = 0; r <= n; ++r) cv.H[r] = S[r] / binomial(n, r);
    return cv;
}

inline CurvatureVector elem_sym(const ShapeOperator& A) { return elem_sym(A.spectrum()); }

/// Newton transformation by the inductive formula P_0 = I,
/// P_r = S_r I - A P_{r-1}. Eigenvalues of P_1 are S_1 - lambda_i.
inline NewtonOperator newton_operator(const ShapeOperator& A, int r) {
    if (r < 0 || r > A.n) throw invalid_input("newton_operator: order out of range");
    const CurvatureVector cv = elem_sym(A);
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(A.n, A.n);
    for (int k = 1; k <= r; ++k)
        P = cv.S[k] * Eigen::MatrixXd::Identity(A.n, A.n) - A.entries * P;
    // Symmetric up to roundoff (polynomial in a symmetric matrix).
    P = 0.5 * (P + P.transpose()).eval();
    return NewtonOperator{r, std::move(P)};
}

/// Residuals of the three trace identities
///   trace(P_r)       = (n-r) S_r
///   trace(A P_r)     = (r+1) S_{r+1}
///   trace(A^2 P_r)   = S_1 S_{r+1} - (r+2) S_{r+2},
/// each normalized by 1 + |target|.
struct TraceIdentityReport {
    double res_trace_p = 0.0;
    double res_trace_ap = 0.0;
    double res_trace_a2p = 0.0;
    double max() const { return std::max({res_trace_p, res_trace_ap, res_trace_a2p}); }
};

inline TraceIdentityReport trace_identity_report(const ShapeOperator& A, int r) {
    if (r < 0 || r > A.n - 2) throw invalid_input("trace_identity_report: need 0 <= r <= n-2");
    const CurvatureVector cv = elem_sym(A);
    const Eigen::MatrixXd P = newton_operator(A, r).entries;
    const Eigen::MatrixXd AP = A.entries * P;
    const double n = A.n;
    const double t0 = (n - r) * cv.S[r];
    const double t1 = (r + 1) * cv.S[r + 1];
    const double t2 = cv.S[1] * cv.S[r + 1] - (r + 2) * cv.S[r + 2];
    TraceIdentityReport rep;
    rep.res_trace_p = std::abs(P.trace() - t0) / (1.0 + std::abs(t0));
    rep.res_trace_ap = std::abs(AP.trace() - t1) / (1.0 + std::abs(t1));
    rep.res_trace_a2p = std::abs((A.entries * AP).trace() - t2) / (1.0 + std::abs(t2));
    return rep;
}

/// Outcome of the curvature-mean inequality suite under the orientation
/// S_2 >= 0, S_1 > 0. `hypotheses_met` is false when the spectrum does not
/// satisfy the preconditions; the slack fields are then informational only.
/// `slack_newton` (H_1^2 - H_2) is meaningful for every real spectrum.
struct MaclaurinReport {
    bool hypotheses_met = false;
    bool h1h2_ge_h3 = false;      // H_1 H_2 >= H_3
    bool h1_ge_sqrt_h2 = false;   // H_1 >= H_2^{1/2}
    bool s1s2_ge_3s3 = false;     // (n-2)/n S_1 S_2 >= 3 S_3
    bool s1_ge_sqrt_s2 = false;   // S_1 >= (2n/(n-1))^{1/2} S_2^{1/2}
    double slack_h1h2 = 0.0;
    double slack_h1 = 0.0;
    double slack_s1s2 = 0.0;
    double slack_s1 = 0.0;
    double slack_newton = 0.0;    // H_1^2 - H_2, unconditional
    bool all_hold() const { return h1h2_ge_h3 && h1_ge_sqrt_h2 && s1s2_ge_3s3 && s1_ge_sqrt_s2; }
};

inline MaclaurinReport maclaurin_check(const PrincipalSpectrum& spec) {
    const CurvatureVector cv = elem_sym(spec);
    const int n = spec.n;
    MaclaurinReport rep;
    rep.slack_newton = cv.H[1] * cv.H[1] - cv.H[2];
    rep.hypotheses_met = cv.S[2] >= 0.0 && cv.S[1] > 0.0;
    if (!rep.hypotheses_met) return rep;

    const double h3 = (n >= 3) ? cv.H[3] : 0.0;
    const double s3 = (n >= 3) ? cv.S[3] : 0.0;
    rep.slack_h1h2 = cv.H[1] * cv.H[2] - h3;
    rep.slack_h1 = cv.H[1] - std::sqrt(std::max(0.0, cv.H[2]));
    rep.slack_s1s2 = (double(n) - 2.0) / double(n) * cv.S[1] * cv.S[2] - 3.0 * s3;
    rep.slack_s1 = cv.S[1] - std::sqrt(2.0 * n / (n - 1.0)) * std::sqrt(std::max(0.0, cv.S[2]));
    const double scale = spec.lambda.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * (1.0 + scale * scale * scale);
    rep.h1h2_ge_h3 = rep.slack_h1h2 >= -tol;
    rep.h1_ge_sqrt_h2 = rep.slack_h1 >= -tol;
    rep.s1s2_ge_3s3 = rep.slack_s1s2 >= -tol;
    rep.s1_ge_sqrt_s2 = rep.slack_s1 >= -tol;
    return rep;
}

/// Pointwise audit of the gradient-comparison inequality
/// S_1 |grad phi|^2 >= <P_1 grad phi, grad phi>. The strong (as-written)
/// form asks max eig(P_1) <= S_1; the weak form, which follows from the
/// trace identity whenever P_1 is psd, asks max eig(P_1) <= (n-1) S_1.
struct EstimaAudit {
    bool p1_psd = false;          // precondition; when false nothing is asserted
    double min_eig_p1 = 0.0;      // min_i (S_1 - lambda_i)
    double max_eig_p1 = 0.0;      // max_i (S_1 - lambda_i)
    double s1 = 0.0;
    bool strong_holds = false;    // max eig P_1 <= S_1 (reported, not asserted)
    bool weak_holds = false;      // max eig P_1 <= (n-1) S_1 (a theorem under psd)
};

inline EstimaAudit estima_audit(const PrincipalSpectrum& spec) {
    const CurvatureVector cv = elem_sym(spec);
    EstimaAudit audit;
    audit.s1 = cv.S[1];
    audit.min_eig_p1 = (cv.S[1] - spec.lambda.array()).minCoeff();
    audit.max_eig_p1 = (cv.S[1] - spec.lambda.array()).maxCoeff();
    audit.p1_psd = audit.min_eig_p1 >= -kPsdSlack;
    if (!audit.p1_psd) return audit;
    audit.strong_holds = audit.max_eig_p1 <= audit.s1 + kPsdSlack;
    audit.weak_holds = audit.max_eig_p1 <= (spec.n - 1.0) * audit.s1 + kPsdSlack;
    return audit;
}

/// Orientation helper: the sign s in {+1, -1} such that P_1(sA) is positive
/// semidefinite, or nullopt when neither orientation works. The toolkit never
/// flips orientation on its own; callers apply the returned sign explicitly.
inline std::optional<int> orientation_for_psd_p1(const ShapeOperator& A) {
    const PrincipalSpectrum spec = A.spectrum();
    const CurvatureVector cv = elem_sym(spec);
    const double lo = (cv.S[1] - spec.lambda.array()).minCoeff();
    const double hi = (cv.S[1] - spec.lambda.array()).maxCoeff();
    // P_1(-A) has eigenvalues -(S_1 - lambda_i).
    if (lo >= -kPsdSlack) return 1;
    if (hi <= kPsdSlack) return -1;
    return std::nullopt;
}

}  // namespace curvstab::curvalg
