#pragma once

// Discretized geometric state: a uniform lattice over the patch domain with
// the full pointwise geometry (metric, W, shape operator, curvature
// functions, Newton operator) evaluated at every node.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

#include "curvstab/common.hpp"
#include "curvstab/curvalg.hpp"
#include "curvstab/patch.hpp"

namespace curvstab::graphgeo {

/// Uniform lattice over the bounding box of a domain. Nodes outside a ball
/// domain are present in the index space but masked out.
struct Grid {
    int n = 0;
    double h = 0.0;
    Vec origin;
    Eigen::VectorXi dims;
    Domain domain;
    std::vector<std::uint8_t> inside;

    Grid() = default;
    Grid(const Domain& dom, double spacing) : n(dom.dim()), h(spacing), domain(dom) {
        if (h <= 0) throw invalid_input("Grid: spacing must be positive");
        dims.resize(n);
        origin.resize(n);
        if (dom.kind == Domain::Kind::box) {
            for (int d = 0; d < n; ++d) {
                const double len = dom.hi[d] - dom.lo[d];
                const double cells = len / h;
                dims[d] = static_cast<int>(std::lround(cells)) + 1;
                if (std::abs(cells - std::lround(cells)) > 1e-8 * std::max(1.0, cells))
                    throw invalid_input("Grid: spacing does not tile the box");
                origin[d] = dom.lo[d];
            }
        } else {
            // Node-centered at the ball center.
            const int half = static_cast<int>(std::floor(dom.radius / h + 1e-9));
            for (int d = 0; d < n; ++d) {
                dims[d] = 2 * half + 1;
                origin[d] = dom.center[d] - half * h;
            }
        }
        std::size_t total = 1;
        for (int d = 0; d < n; ++d) {
            if (dims[d] < 2) throw invalid_input("Grid: fewer than 2 nodes along an axis");
            total *= static_cast<std::size_t>(dims[d]);
        }
        inside.assign(total, 1);
        if (dom.kind == Domain::Kind::ball) {
            for (std::size_t i = 0; i < total; ++i)
                inside[i] = dom.contains(coord(i), 1e-12 * (1.0 + dom.radius)) ? 1 : 0;
        }
    }

    std::size_t size() const { return inside.size(); }

    std::size_t flatten(const Eigen::VectorXi& m) const {
        std::size_t idx = 0;
        for (int d = 0; d < n; ++d) idx = idx * dims[d] + m[d];
        return idx;
    }
    Eigen::VectorXi unflatten(std::size_t idx) const {
        Eigen::VectorXi m(n);
        for (int d = n - 1; d >= 0; --d) {
            m[d] = static_cast<int>(idx % dims[d]);
            idx /= dims[d];
        }
        return m;
    }
    Vec coord(std::size_t idx) const {
        const Eigen::VectorXi m = unflatten(idx);
        Vec x(n);
        for (int d = 0; d < n; ++d) x[d] = origin[d] + h * m[d];
        return x;
    }
    /// Stride of one step along axis d in flat index space.
    std::ptrdiff_t stride(int d) const {
        std::ptrdiff_t s = 1;
        for (int e = n - 1; e > d; --e) s *= dims[e];
        return s;
    }
    bool in_bounds(const Eigen::VectorXi& m) const {
        for (int d = 0; d < n; ++d)
            if (m[d] < 0 || m[d] >= dims[d]) return false;
        return true;
    }
    /// True when every node within Chebyshev distance `ring` exists and is
    /// inside the domain; such nodes support centered stencils of that width.
    bool interior(std::size_t idx, int ring) const {
        const Eigen::VectorXi m = unflatten(idx);
        Eigen::VectorXi probe = m;
        std::function<bool(int)> walk = [&](int d) -> bool {
            if (d == n) return inside[flatten(probe)] != 0;
            for (int o = -ring; o <= ring; ++o) {
                probe[d] = m[d] + o;
                if (probe[d] < 0 || probe[d] >= dims[d]) return false;
                if (!walk(d + 1)) return false;
            }
            probe[d] = m[d];
            return true;
        };
        return walk(0);
    }
    std::size_t nearest_node(const Vec& x) const {
        Eigen::VectorXi m(n);
        for (int d = 0; d < n; ++d) {
            m[d] = static_cast<int>(std::lround((x[d] - origin[d]) / h));
            m[d] = std::clamp(m[d], 0, dims[d] - 1);
        }
        return flatten(m);
    }
};

/// Full geometric state at a single point of a patch.
struct PointGeometry {
    Vec x;                 // chart coordinates
    double W = 1.0;        // graph area factor sqrt(1 + |grad u|^2); 1 on charts
    double detg = 1.0;
    double sqrt_detg = 1.0;
    Mat g, g_inv;
    Mat A;                 // mixed-index shape operator
    Mat P1;                // mixed-index Newton operator S_1 I - A
    Mat Pi;                // contravariant P1 g^{-1}; weights the stability form
    Vec lambda;            // principal curvatures, ascending
    Vec S;                 // S_0..S_n
    Vec N;                 // unit normal in R^{n+1}
    double nu = 0.0;       // <N, e_{n+1}>

    double s1() const { return S[1]; }
    double s2() const { return S[2]; }
    double s3() const { return S.size() > 3 ? S[3] : 0.0; }
    /// Second-variation potential S_1 S_2 - 3 S_3 + c (n-1) S_1.
    double jacobi_potential(double c) const {
        const int n = static_cast<int>(lambda.size());
        return S[1] * S[2] - 3.0 * s3() + c * (n - 1.0) * S[1];
    }
};

/// Evaluates the geometry of a patch at a chart point. Throws domain_error
/// outside the domain and numerical_failure on a degenerate metric.
inline PointGeometry point_geometry(const SurfacePatch& patch, const Vec& x,
                                    bool enforce_domain = true) {
    if (enforce_domain && !patch.domain.contains(x))
        throw domain_error("point_geometry: point outside patch domain");
    const int n = patch.n;
    PointGeometry pg;
    pg.x = x;

    Mat b(n, n);  // covariant second fundamental form
    if (patch.is_graph()) {
        const Vec du = patch.graph->grad(x);
        const Mat hu = patch.graph->hess(x);
        const double w2 = 1.0 + du.squaredNorm();
        pg.W = std::sqrt(w2);
        pg.g = Mat::Identity(n, n) + du * du.transpose();
        pg.g_inv = Mat::Identity(n, n) - du * du.transpose() / w2;
        pg.detg = w2;
        b = hu / pg.W;
        pg.N.resize(n + 1);
        pg.N.head(n) = -du / pg.W;
        pg.N[n] = 1.0 / pg.W;
    } else {
        pg.W = 1.0;
        pg.g = patch.chart->metric(x);
        pg.detg = pg.g.determinant();
        if (!(pg.detg > 0)) throw numerical_failure("point_geometry: degenerate chart metric");
        pg.g_inv = pg.g.inverse();
        b = patch.chart->second_form(x);
        pg.N = patch.chart->normal(x);
    }
    if (!(pg.detg > 0) || !std::isfinite(pg.detg))
        throw numerical_failure("point_geometry: degenerate metric");
    pg.sqrt_detg = std::sqrt(pg.detg);
    pg.nu = pg.N[n];

    // Principal curvatures from the symmetric similar form
    // g^{-1/2} b g^{-1/2}; guarantees a real spectrum.
    Eigen::SelfAdjointEigenSolver<Mat> gsolve(pg.g);
    if (gsolve.info() != Eigen::Success)
        throw numerical_failure("point_geometry: metric eigensolve failed");
    const Mat g_isqrt = gsolve.operatorInverseSqrt();
    Eigen::SelfAdjointEigenSolver<Mat> asolve(Mat(g_isqrt * b * g_isqrt), Eigen::EigenvaluesOnly);
    if (asolve.info() != Eigen::Success)
        throw numerical_failure("point_geometry: shape operator eigensolve failed");
    pg.lambda = asolve.eigenvalues();
    pg.S = curvalg::elem_sym(curvalg::PrincipalSpectrum(n, pg.lambda)).S;
    pg.A = pg.g_inv * b;
    pg.P1 = pg.S[1] * Mat::Identity(n, n) - pg.A;
    pg.Pi = pg.P1 * pg.g_inv;
    pg.Pi = 0.5 * (pg.Pi + pg.Pi.transpose()).eval();
    return pg;
}

/// Scalar samples over a grid; entries at masked-out nodes are unused.
using ScalarField = std::vector<double>;
/// Contravariant vector samples over a grid.
using VectorField = std::vector<Vec>;

/// Lattice of PointGeometry over a patch.
struct ShapeField {
    SurfacePatch patch;
    Grid grid;
    std::vector<PointGeometry> points;   // indexed like grid; valid where inside
    std::vector<std::uint8_t> valid;

    const PointGeometry& at(std::size_t idx) const { return points[idx]; }

    ScalarField scalar(const std::function<double(const PointGeometry&)>& f) const {
        ScalarField out(grid.size(), 0.0);
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (valid[i]) out[i] = f(points[i]);
        return out;
    }
};

/// Builds the field by evaluating point_geometry at every inside node.
/// Construction is data-parallel with disjoint writes, hence deterministic.
inline ShapeField build_field(const SurfacePatch& patch, double h) {
    if (patch.n < 2) throw invalid_input("build_field: patch dimension must be >= 2");
    ShapeField field;
    field.patch = patch;
    field.grid = Grid(patch.domain, h);
    const std::size_t total = field.grid.size();
    field.points.resize(total);
    field.valid.assign(total, 0);
    curvstab::detail::parallel_for(total, [&](std::size_t i) {
        if (!field.grid.inside[i]) return;
        field.points[i] = point_geometry(patch, field.grid.coord(i), false);
        field.valid[i] = 1;
    });
    return field;
}

}  // namespace curvstab::graphgeo
