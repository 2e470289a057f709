#pragma once

// Surface patches: graphs u : R^n -> R over a box or ball, and analytic
// charts (round spherical caps). Each patch carries a derivative oracle
// supplying the partials the geometry engine consumes.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "curvstab/common.hpp"

namespace curvstab::graphgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Axis-aligned box or ball in the chart plane R^n.
struct Domain {
    enum class Kind { box, ball };
    Kind kind = Kind::box;
    Vec lo, hi;      // box corners
    Vec center;      // ball center
    double radius = 0.0;

    static Domain box(Vec lo_, Vec hi_) {
        if (lo_.size() != hi_.size() || lo_.size() == 0)
            throw invalid_input("Domain: box corners must have equal nonzero dimension");
        if (((hi_ - lo_).array() <= 0).any())
            throw invalid_input("Domain: box must have positive extent");
        Domain d;
        d.kind = Kind::box;
        d.lo = std::move(lo_);
        d.hi = std::move(hi_);
        return d;
    }
    static Domain cube(int n, double lo_, double hi_) {
        return box(Vec::Constant(n, lo_), Vec::Constant(n, hi_));
    }
    static Domain ball(Vec center_, double radius_) {
        if (radius_ <= 0) throw invalid_input("Domain: ball radius must be positive");
        Domain d;
        d.kind = Kind::ball;
        d.center = std::move(center_);
        d.radius = radius_;
        return d;
    }

    int dim() const { return kind == Kind::box ? static_cast<int>(lo.size())
                                               : static_cast<int>(center.size()); }
    Vec bbox_lo() const { return kind == Kind::box ? lo : Vec(center.array() - radius); }
    Vec bbox_hi() const { return kind == Kind::box ? hi : Vec(center.array() + radius); }

    bool contains(const Vec& x, double tol = 1e-12) const {
        if (kind == Kind::box)
            return (x.array() >= lo.array() - tol).all() && (x.array() <= hi.array() + tol).all();
        return (x - center).norm() <= radius + tol;
    }
    /// Signed distance to the ball boundary (negative inside); boxes use the
    /// max face coordinate. Used for boundary-fitted meshing.
    double boundary_excess(const Vec& x) const {
        if (kind == Kind::ball) return (x - center).norm() - radius;
        double worst = -1e300;
        for (int d = 0; d < dim(); ++d)
            worst = std::max({worst, lo[d] - x[d], x[d] - hi[d]});
        return worst;
    }
};

/// Derivative source for a graph patch. Analytic oracles supply exact
/// partials up to order four; the finite-difference fallback supplies only
/// value, gradient and Hessian from second-order central stencils.
class GraphOracle {
  public:
    virtual ~GraphOracle() = default;
    virtual bool analytic() const = 0;
    virtual double fd_step() const { return 0.0; }
    virtual double value(const Vec& x) const = 0;
    virtual Vec grad(const Vec& x) const = 0;
    virtual Mat hess(const Vec& x) const = 0;
    virtual double third(const Vec& x, int i, int j, int k) const = 0;
    virtual double fourth(const Vec& x, int i, int j, int k, int l) const = 0;
};

class FiniteDifferenceGraphOracle final : public GraphOracle {
  public:
    FiniteDifferenceGraphOracle(std::function<double(const Vec&)> f, double step)
        : f_(std::move(f)), step_(step) {
        if (step_ <= 0) throw invalid_input("FiniteDifferenceGraphOracle: step must be positive");
    }
    bool analytic() const override { return false; }
    double fd_step() const override { return step_; }
    double value(const Vec& x) const override { return f_(x); }
    Vec grad(const Vec& x) const override {
        Vec g(x.size());
        for (int d = 0; d < x.size(); ++d) {
            Vec xp = x, xm = x;
            xp[d] += step_;
            xm[d] -= step_;
            g[d] = (f_(xp) - f_(xm)) / (2.0 * step_);
        }
        return g;
    }
    Mat hess(const Vec& x) const override {
        const int n = static_cast<int>(x.size());
        Mat h(n, n);
        const double s = step_;
        for (int i = 0; i < n; ++i) {
            Vec xp = x, xm = x;
            xp[i] += s;
            xm[i] -= s;
            h(i, i) = (f_(xp) - 2.0 * f_(x) + f_(xm)) / (s * s);
            for (int j = i + 1; j < n; ++j) {
                Vec xpp = x, xpm = x, xmp = x, xmm = x;
                xpp[i] += s; xpp[j] += s;
                xpm[i] += s; xpm[j] -= s;
                xmp[i] -= s; xmp[j] += s;
                xmm[i] -= s; xmm[j] -= s;
                h(i, j) = h(j, i) = (f_(xpp) - f_(xpm) - f_(xmp) + f_(xmm)) / (4.0 * s * s);
            }
        }
        return h;
    }
    double third(const Vec&, int, int, int) const override {
        throw unsupported_precision("finite-difference oracle has no third partials");
    }
    double fourth(const Vec&, int, int, int, int) const override {
        throw unsupported_precision("finite-difference oracle has no fourth partials");
    }

  private:
    std::function<double(const Vec&)> f_;
    double step_;
};

/// Analytic chart: immersion X : R^n -> R^{n+1} with closed-form metric,
/// second fundamental form, their first derivatives, and the unit normal.
class ChartOracle {
  public:
    virtual ~ChartOracle() = default;
    virtual Vec immersion(const Vec& y) const = 0;
    virtual Vec normal(const Vec& y) const = 0;
    virtual Mat metric(const Vec& y) const = 0;
    virtual Mat dmetric(const Vec& y, int k) const = 0;
    virtual Mat second_form(const Vec& y) const = 0;
    virtual Mat dsecond_form(const Vec& y, int k) const = 0;
};

struct PatchDescriptor {
    std::string kind;  // builder name
    int n = 0;
    Domain domain;
    std::map<std::string, double> params;
    std::string profile;  // one_variable_graph only
};

struct SurfacePatch {
    enum class Kind { graph, chart };
    Kind kind = Kind::graph;
    int n = 0;
    Domain domain;
    std::string label;
    std::shared_ptr<const GraphOracle> graph;
    std::shared_ptr<const ChartOracle> chart;
    PatchDescriptor descriptor;

    bool is_graph() const { return kind == Kind::graph; }
    bool analytic_oracle() const { return kind == Kind::chart || graph->analytic(); }
};

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

namespace detail {

class FlatOracle final : public GraphOracle {
  public:
    bool analytic() const override { return true; }
    double value(const Vec&) const override { return 0.0; }
    Vec grad(const Vec& x) const override { return Vec::Zero(x.size()); }
    Mat hess(const Vec& x) const override { return Mat::Zero(x.size(), x.size()); }
    double third(const Vec&, int, int, int) const override { return 0.0; }
    double fourth(const Vec&, int, int, int, int) const override { return 0.0; }
};

/// Lower hemisphere u = -sqrt(rho^2 - |x|^2). With the upward graph normal
/// this orientation has principal curvatures +1/rho.
class HemisphereOracle final : public GraphOracle {
  public:
    explicit HemisphereOracle(double rho) : rho_(rho) {}
    bool analytic() const override { return true; }
    double value(const Vec& x) const override { return -std::sqrt(s(x)); }
    Vec grad(const Vec& x) const override { return x * std::pow(s(x), -0.5); }
    Mat hess(const Vec& x) const override {
        const double s1 = s(x);
        return Mat(Mat::Identity(x.size(), x.size()) * std::pow(s1, -0.5)) +
               x * x.transpose() * std::pow(s1, -1.5);
    }
    double third(const Vec& x, int i, int j, int k) const override {
        const double s32 = std::pow(s(x), -1.5), s52 = std::pow(s(x), -2.5);
        const double d = (i == j ? x[k] : 0.0) + (i == k ? x[j] : 0.0) + (j == k ? x[i] : 0.0);
        return d * s32 + 3.0 * x[i] * x[j] * x[k] * s52;
    }
    double fourth(const Vec& x, int i, int j, int k, int l) const override {
        const double s32 = std::pow(s(x), -1.5), s52 = std::pow(s(x), -2.5),
                     s72 = std::pow(s(x), -3.5);
        auto kr = [](int a, int b) { return a == b ? 1.0 : 0.0; };
        const double dd = kr(i, j) * kr(k, l) + kr(i, k) * kr(j, l) + kr(j, k) * kr(i, l);
        const double dx = kr(i, j) * x[k] * x[l] + kr(i, k) * x[j] * x[l] +
                          kr(j, k) * x[i] * x[l] + kr(i, l) * x[j] * x[k] +
                          kr(j, l) * x[i] * x[k] + kr(k, l) * x[i] * x[j];
        return dd * s32 + 3.0 * dx * s52 + 15.0 * x[i] * x[j] * x[k] * x[l] * s72;
    }

  private:
    double s(const Vec& x) const {
        const double v = rho_ * rho_ - x.squaredNorm();
        if (v <= 0) throw domain_error("hemisphere oracle evaluated at |x| >= rho");
        return v;
    }
    double rho_;
};

enum class Profile { x1_squared, sin_x1, x1_cubed };

inline Profile profile_from_name(const std::string& name) {
    if (name == "x1_squared") return Profile::x1_squared;
    if (name == "sin_x1") return Profile::sin_x1;
    if (name == "x1_cubed") return Profile::x1_cubed;
    throw invalid_input("unknown one-variable profile: " + name);
}

class OneVariableOracle final : public GraphOracle {
  public:
    explicit OneVariableOracle(Profile p) : p_(p) {}
    bool analytic() const override { return true; }
    double value(const Vec& x) const override { return d(x[0], 0); }
    Vec grad(const Vec& x) const override {
        Vec g = Vec::Zero(x.size());
        g[0] = d(x[0], 1);
        return g;
    }
    Mat hess(const Vec& x) const override {
        Mat h = Mat::Zero(x.size(), x.size());
        h(0, 0) = d(x[0], 2);
        return h;
    }
    double third(const Vec& x, int i, int j, int k) const override {
        return (i == 0 && j == 0 && k == 0) ? d(x[0], 3) : 0.0;
    }
    double fourth(const Vec& x, int i, int j, int k, int l) const override {
        return (i == 0 && j == 0 && k == 0 && l == 0) ? d(x[0], 4) : 0.0;
    }

  private:
    double d(double t, int order) const {
        switch (p_) {
            case Profile::x1_squared:
                switch (order) {
                    case 0: return t * t;
                    case 1: return 2.0 * t;
                    case 2: return 2.0;
                    default: return 0.0;
                }
            case Profile::sin_x1:
                switch (order % 4) {
                    case 0: return std::sin(t);
                    case 1: return std::cos(t);
                    case 2: return -std::sin(t);
                    default: return -std::cos(t);
                }
            case Profile::x1_cubed:
                switch (order) {
                    case 0: return t * t * t;
                    case 1: return 3.0 * t * t;
                    case 2: return 6.0 * t;
                    case 3: return 6.0;
                    default: return 0.0;
                }
        }
        return 0.0;
    }
    Profile p_;
};

class ParaboloidOracle final : public GraphOracle {
  public:
    explicit ParaboloidOracle(double a) : a_(a) {}
    bool analytic() const override { return true; }
    double value(const Vec& x) const override { return 0.5 * a_ * x.squaredNorm(); }
    Vec grad(const Vec& x) const override { return a_ * x; }
    Mat hess(const Vec& x) const override { return a_ * Mat::Identity(x.size(), x.size()); }
    double third(const Vec&, int, int, int) const override { return 0.0; }
    double fourth(const Vec&, int, int, int, int) const override { return 0.0; }

  private:
    double a_;
};

/// Sphere of radius rho about the origin in the conformal chart obtained by
/// stereographic projection from the south pole. The cap of polar angle
/// alpha (measured from the north pole) is the chart ball |y| <= rho
/// tan(alpha/2). The inward normal N = -X/rho makes A = (1/rho) Id.
class RoundCapOracle final : public ChartOracle {
  public:
    explicit RoundCapOracle(double rho) : rho_(rho) {}
    Vec immersion(const Vec& y) const override {
        const double q = qq(y);
        Vec X(y.size() + 1);
        X.head(y.size()) = (2.0 * rho_ * rho_ / q) * y;
        X[y.size()] = rho_ * (rho_ * rho_ - y.squaredNorm()) / q;
        return X;
    }
    Vec normal(const Vec& y) const override { return -immersion(y) / rho_; }
    Mat metric(const Vec& y) const override {
        const double phi = 2.0 * rho_ * rho_ / qq(y);
        return phi * phi * Mat::Identity(y.size(), y.size());
    }
    Mat dmetric(const Vec& y, int k) const override {
        const double q = qq(y);
        const double phi = 2.0 * rho_ * rho_ / q;
        const double dphi = -2.0 * y[k] * phi / q;
        return 2.0 * phi * dphi * Mat::Identity(y.size(), y.size());
    }
    Mat second_form(const Vec& y) const override { return metric(y) / rho_; }
    Mat dsecond_form(const Vec& y, int k) const override { return dmetric(y, k) / rho_; }

  private:
    double qq(const Vec& y) const { return rho_ * rho_ + y.squaredNorm(); }
    double rho_;
};

}  // namespace detail

inline SurfacePatch flat(int n, const Domain& box) {
    if (n < 1 || box.dim() != n) throw invalid_input("flat: dimension mismatch");
    SurfacePatch p;
    p.kind = SurfacePatch::Kind::graph;
    p.n = n;
    p.domain = box;
    p.label = "flat";
    p.graph = std::make_shared<detail::FlatOracle>();
    p.descriptor = PatchDescriptor{"flat", n, box, {}, ""};
    return p;
}

/// Lower hemisphere of the sphere of radius rho, restricted to the chart
/// ball of radius fraction * rho. All principal curvatures equal 1/rho under
/// the upward-normal convention.
inline SurfacePatch hemisphere_graph(int n, double rho, double fraction) {
    if (rho <= 0 || fraction <= 0 || fraction >= 1)
        throw invalid_input("hemisphere_graph: need rho > 0 and 0 < fraction < 1");
    SurfacePatch p;
    p.kind = SurfacePatch::Kind::graph;
    p.n = n;
    p.domain = Domain::ball(Vec::Zero(n), fraction * rho);
    p.label = "hemisphere_graph";
    p.graph = std::make_shared<detail::HemisphereOracle>(rho);
    p.descriptor =
        PatchDescriptor{"hemisphere_graph", n, p.domain, {{"rho", rho}, {"fraction", fraction}}, ""};
    return p;
}

/// Graph depending on x_1 only; a cylinder over a plane curve, so S_2 = 0.
inline SurfacePatch one_variable_graph(const std::string& profile, int n, const Domain& slab) {
    if (slab.kind != Domain::Kind::box || slab.dim() != n)
        throw invalid_input("one_variable_graph: slab must be an n-dimensional box");
    SurfacePatch p;
    p.kind = SurfacePatch::Kind::graph;
    p.n = n;
    p.domain = slab;
    p.label = "one_variable_graph(" + profile + ")";
    p.graph = std::make_shared<detail::OneVariableOracle>(detail::profile_from_name(profile));
    p.descriptor = PatchDescriptor{"one_variable_graph", n, slab, {}, profile};
    return p;
}

inline SurfacePatch paraboloid(int n, double a, const Domain& box) {
    if (box.dim() != n) throw invalid_input("paraboloid: dimension mismatch");
    SurfacePatch p;
    p.kind = SurfacePatch::Kind::graph;
    p.n = n;
    p.domain = box;
    p.label = "paraboloid";
    p.graph = std::make_shared<detail::ParaboloidOracle>(a);
    p.descriptor = PatchDescriptor{"paraboloid", n, box, {{"a", a}}, ""};
    return p;
}

/// Round cap of polar angle alpha on the sphere of radius rho, as an analytic
/// conformal chart over the ball |y| <= rho tan(alpha/2). Unlike the graph
/// builders this reaches beyond the hemisphere (alpha > pi/2).
inline SurfacePatch round_cap_chart(int n, double rho, double alpha) {
    if (rho <= 0 || alpha <= 0 || alpha >= M_PI)
        throw invalid_input("round_cap_chart: need rho > 0 and 0 < alpha < pi");
    SurfacePatch p;
    p.kind = SurfacePatch::Kind::chart;
    p.n = n;
    p.domain = Domain::ball(Vec::Zero(n), rho * std::tan(alpha / 2.0));
    p.label = "round_cap_chart";
    p.chart = std::make_shared<detail::RoundCapOracle>(rho);
    p.descriptor =
        PatchDescriptor{"round_cap_chart", n, p.domain, {{"rho", rho}, {"alpha", alpha}}, ""};
    return p;
}

/// Graph patch backed by a finite-difference oracle; only value, gradient
/// and Hessian are available. Exists to exercise the degraded-precision path.
inline SurfacePatch fd_graph(std::function<double(const Vec&)> f, int n, const Domain& dom,
                             double step) {
    SurfacePatch p;
    p.kind = SurfacePatch::Kind::graph;
    p.n = n;
    p.domain = dom;
    p.label = "fd_graph";
    p.graph = std::make_shared<FiniteDifferenceGraphOracle>(std::move(f), step);
    p.descriptor = PatchDescriptor{"fd_graph", n, dom, {{"step", step}}, ""};
    return p;
}

/// Reconstructs a builder patch from its serialized descriptor.
inline SurfacePatch make_patch(const PatchDescriptor& d) {
    auto need = [&](const char* key) {
        auto it = d.params.find(key);
        if (it == d.params.end())
            throw invalid_input(std::string("patch descriptor missing parameter: ") + key);
        return it->second;
    };
    if (d.kind == "flat") return flat(d.n, d.domain);
    if (d.kind == "hemisphere_graph") return hemisphere_graph(d.n, need("rho"), need("fraction"));
    if (d.kind == "one_variable_graph") return one_variable_graph(d.profile, d.n, d.domain);
    if (d.kind == "paraboloid") return paraboloid(d.n, need("a"), d.domain);
    if (d.kind == "round_cap_chart") return round_cap_chart(d.n, need("rho"), need("alpha"));
    throw invalid_input("unknown patch kind: " + d.kind);
}

}  // namespace curvstab::graphgeo
