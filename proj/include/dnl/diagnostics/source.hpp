#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "dnl/error.hpp"
#include "dnl/exact/closed_form.hpp"
#include "dnl/exponents.hpp"
#include "dnl/grid.hpp"
#include "dnl/solver/trajectory.hpp"

namespace dnl {

/// A solution sampled along the e1 axis: s is the signed e1 coordinate. For radial sources
/// (N >= 2) the value depends on |s| only and the gradient is u_r(|s|) sign(s).
class SolutionSource {
public:
    using ScalarFn = std::function<double(double, double)>;
    using ViolationFn = std::function<std::optional<std::string>(double, double)>;

    SolutionSource(std::string description, ExponentTriple e, bool radial, ScalarFn value, ScalarFn gradient,
                   ViolationFn violation, bool first_order_gradient = false)
        : description_(std::move(description)), exponents_(e), radial_(radial), value_(std::move(value)),
          gradient_(std::move(gradient)), violation_(std::move(violation)), first_order_(first_order_gradient) {}

    static SolutionSource closed_form(const ClosedFormSolution& sol) {
        const bool radial = sol.exponents().n_dim() >= 2;
        return SolutionSource(
            "closed form " + sol.id(), sol.exponents(), radial,
            [sol](double s, double t) { return sol.radial(std::abs(s), t).u; },
            [sol](double s, double t) {
                const double ur = sol.radial(std::abs(s), t).u_r;
                return s < 0.0 ? -ur : ur;
            },
            [sol, radial](double s, double t) -> std::optional<std::string> {
                if (radial && s == 0.0 && sol.violation_radial(0.0, t)) return "r = 0";
                return sol.violation_radial(std::abs(s), t);
            });
    }

    /// Radial steady state A + B r^{(p-N)/(p-1)} on A-annulus r_lo <= |x| <= r_hi; solves the
    /// prototype for every q because the time term vanishes.
    static SolutionSource steady_radial(ExponentTriple e, double a, double b, double r_lo, double r_hi) {
        const double p = e.p();
        const int n = e.n_dim();
        if (!(p < n)) throw std::invalid_argument("steady radial profile: needs p < N");
        if (!(r_lo > 0.0 && r_hi > r_lo)) throw std::invalid_argument("steady radial profile: need 0 < r_lo < r_hi");
        if (!(a >= 0.0 && b > 0.0)) throw std::invalid_argument("steady radial profile: need A >= 0, B > 0");
        const double k = (p - n) / (p - 1.0);
        std::ostringstream os;
        os << "steady radial profile A=" << a << " B=" << b << " on [" << r_lo << ", " << r_hi << "]";
        return SolutionSource(
            os.str(), e, true, [a, b, k](double s, double) { return a + b * std::pow(std::abs(s), k); },
            [b, k](double s, double) {
                const double ur = b * k * std::pow(std::abs(s), k - 1.0);
                return s < 0.0 ? -ur : ur;
            },
            [r_lo, r_hi](double s, double) -> std::optional<std::string> {
                const double r = std::abs(s);
                if (r < r_lo || r > r_hi) return "outside annulus";
                return std::nullopt;
            });
    }

    /// Piecewise-linear interpolation in space (boundary values at the faces, even extension at r = 0)
    /// and linear in time. Gradients come from central differences of the nodal values (one-sided at the
    /// boundary faces), which makes them O(h) accurate near the boundary.
    static SolutionSource trajectory(const Trajectory& traj) {
        auto data = std::make_shared<const TrajectoryNodes>(build_nodes(traj));
        const bool radial = traj.grid().is_radial() && traj.grid().n_dim() >= 2;
        return SolutionSource(
            "trajectory", traj.problem().exponents, radial,
            [data](double s, double t) { return data->sample(s, t, false); },
            [data](double s, double t) { return data->sample(s, t, true); },
            [data](double s, double t) { return data->violation(s, t); }, true);
    }

    const std::string& description() const { return description_; }
    const ExponentTriple& exponents() const { return exponents_; }
    bool radial() const { return radial_; }
    int n_dim() const { return radial_ ? exponents_.n_dim() : 1; }
    bool gradient_first_order() const { return first_order_; }

    std::optional<std::string> violation(double s, double t) const { return violation_(s, t); }
    double value(double s, double t) const {
        check(s, t);
        return value_(s, t);
    }
    double gradient(double s, double t) const {
        check(s, t);
        return gradient_(s, t);
    }

    /// The source u(x_o + scale_x y, t_o + scale_t s) / u_scale (1-D sources only).
    SolutionSource rescaled(double x_o, double t_o, double scale_x, double scale_t, double u_scale) const {
        if (radial_) throw std::invalid_argument("rescaled: only for one-dimensional sources");
        auto self = std::make_shared<SolutionSource>(*this);
        return SolutionSource(
            description_ + " (rescaled)", exponents_, false,
            [=](double y, double s) { return self->value(x_o + scale_x * y, t_o + scale_t * s) / u_scale; },
            [=](double y, double s) { return self->gradient(x_o + scale_x * y, t_o + scale_t * s) * scale_x / u_scale; },
            [=](double y, double s) { return self->violation(x_o + scale_x * y, t_o + scale_t * s); },
            first_order_);
    }

private:
    struct TrajectoryNodes {
        std::vector<double> times;
        std::vector<double> x;                       // node coordinates (|x| for radial)
        std::vector<std::vector<double>> u, grad;    // per slice
        double lo = 0.0, hi = 0.0;
        bool radial = false;

        double sample(double s, double t, bool want_grad) const {
            const double c = radial ? std::abs(s) : s;
            std::size_t k = 0;
            if (times.size() > 1) {
                const auto tt = std::lower_bound(times.begin(), times.end(), t);
                k = tt == times.begin() ? 0 : static_cast<std::size_t>(tt - times.begin()) - 1;
                k = std::min(k, times.size() - 2);
            }
            double wt = 0.0;
            if (times.size() > 1) wt = std::clamp((t - times[k]) / (times[k + 1] - times[k]), 0.0, 1.0);
            const auto it = std::upper_bound(x.begin(), x.end(), c);
            std::size_t j = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
            j = std::min(j, x.size() - 2);
            const double wx = std::clamp((c - x[j]) / (x[j + 1] - x[j]), 0.0, 1.0);
            auto at = [&](const std::vector<double>& v) { return (1.0 - wx) * v[j] + wx * v[j + 1]; };
            const auto& src = want_grad ? grad : u;
            double out = at(src[k]);
            if (times.size() > 1) out = (1.0 - wt) * out + wt * at(src[k + 1]);
            if (want_grad && radial && s < 0.0) out = -out;
            return out;
        }
        std::optional<std::string> violation(double s, double t) const {
            const double c = radial ? std::abs(s) : s;
            const double slack = 1e-12 * std::max(1.0, std::abs(hi));
            if (c < lo - slack || c > hi + slack) return "outside the spatial grid";
            const double tslack = 1e-12 * std::max(1.0, std::abs(times.back()));
            if (t < times.front() - tslack || t > times.back() + tslack) return "outside the stored time range";
            return std::nullopt;
        }
    };

    static TrajectoryNodes build_nodes(const Trajectory& traj) {
        const auto& g = traj.grid();
        const auto& bc = traj.problem().boundary;
        const int n = g.n_cells();
        TrajectoryNodes d;
        d.radial = g.is_radial() && g.n_dim() >= 2;
        d.times = traj.times();
        const bool sym = g.left_is_symmetry();
        d.x.push_back(g.face(0));
        for (int i = 0; i < n; ++i) d.x.push_back(g.center(i));
        d.x.push_back(g.face(n));
        d.lo = sym && d.radial ? 0.0 : g.x_lo();
        d.hi = g.x_hi();
        auto face_value = [&](int side, double t, double inner) {
            switch (bc.kind()) {
                case BoundaryKind::zero_dirichlet: return 0.0;
                case BoundaryKind::dirichlet: return bc.value(side, t);
                case BoundaryKind::from_exact: {
                    const double ghost = bc.ghost(side, g.face(side == 0 ? 0 : n), g.h(), inner, t, g.is_radial()).first;
                    return 0.5 * (ghost + inner);
                }
            }
            return 0.0;
        };
        for (const auto& f : traj.fields()) {
            std::vector<double> u(n + 2);
            for (int i = 0; i < n; ++i) u[i + 1] = f[i];
            u[0] = sym ? f[0] : face_value(0, f.time(), f[0]);
            u[n + 1] = face_value(1, f.time(), f[n - 1]);
            std::vector<double> gr(n + 2);
            for (std::size_t j = 1; j + 1 < u.size(); ++j) gr[j] = (u[j + 1] - u[j - 1]) / (d.x[j + 1] - d.x[j - 1]);
            gr[0] = sym ? 0.0 : (u[1] - u[0]) / (d.x[1] - d.x[0]);
            gr[n + 1] = (u[n + 1] - u[n]) / (d.x[n + 1] - d.x[n]);
            if (sym) gr[1] = (u[2] - u[1]) / (d.x[2] - d.x[1]) * 0.5;  // slope 0 at r = 0, averaged to the first centre
            d.u.push_back(std::move(u));
            d.grad.push_back(std::move(gr));
        }
        return d;
    }

    void check(double s, double t) const {
        if (auto v = violation_(s, t)) {
            std::ostringstream os;
            os << description_ << ": point (" << s << ", " << t << ") outside the domain (" << *v << ")";
            throw DomainError(os.str());
        }
    }

    std::string description_;
    ExponentTriple exponents_;
    bool radial_;
    ScalarFn value_;
    ScalarFn gradient_;
    ViolationFn violation_;
    bool first_order_;
};

/// n points spanning [lo, hi] with both ends, plus the midpoint when n is even.
inline std::vector<double> lattice(double lo, double hi, int n) {
    std::vector<double> v;
    if (n <= 1 || hi == lo) return {0.5 * (lo + hi)};
    for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
    if (n % 2 == 0) {
        v.push_back(0.5 * (lo + hi));
        std::sort(v.begin(), v.end());
    }
    return v;
}

struct CylinderExtremes {
    double sup_u = -std::numeric_limits<double>::infinity();
    double inf_u = std::numeric_limits<double>::infinity();
    double sup_abs_grad = 0.0;
    double max_grad = -std::numeric_limits<double>::infinity();  // signed e1 component
    double min_grad = std::numeric_limits<double>::infinity();
};

/// Extremes over K_rho(s_o e1) x [t_lo, t_hi] sampled on the e1 segment through the centre, which
/// meets every radius of the ball for radial sources. n points per axis (plus the midpoints).
inline CylinderExtremes cylinder_extremes(const SolutionSource& src, double s_o, double rho, double t_lo, double t_hi,
                                          int n, bool with_gradient) {
    CylinderExtremes out;
    for (double t : lattice(t_lo, t_hi, n))
        for (double s : lattice(s_o - rho, s_o + rho, n)) {
            const double u = src.value(s, t);
            out.sup_u = std::max(out.sup_u, u);
            out.inf_u = std::min(out.inf_u, u);
            if (!with_gradient) continue;
            const double g = src.gradient(s, t);
            out.sup_abs_grad = std::max(out.sup_abs_grad, std::abs(g));
            out.max_grad = std::max(out.max_grad, g);
            out.min_grad = std::min(out.min_grad, g);
        }
    return out;
}

/// First violation found on an (n+2)-point lattice of the open cylinder, endpoints excluded.
inline std::optional<std::string> cylinder_violation(const SolutionSource& src, double s_o, double rho, double t_lo,
                                                     double t_hi, int n = 17) {
    auto interior = [n](double lo, double hi) {
        std::vector<double> v;
        for (int i = 1; i <= n; ++i) v.push_back(lo + (hi - lo) * i / (n + 1));
        return v;
    };
    for (double t : interior(t_lo, t_hi))
        for (double s : interior(s_o - rho, s_o + rho))
            if (auto v = src.violation(s, t)) return v;
    return std::nullopt;
}

/// Quadrature for integrals over the ball K_rho(s_o e1): sum_j w_j f(c_j) ~ int f dx, where f depends on
/// the axis coordinate (|x| for radial sources). Radial weights use the spherical-cap measure.
struct BallQuadrature {
    std::vector<double> coords;
    std::vector<double> weights;
    double volume = 0.0;

    template <class F>
    double mean(F&& f) const {
        double s = 0.0;
        for (std::size_t j = 0; j < coords.size(); ++j) s += weights[j] * f(coords[j]);
        return s / volume;
    }
};

inline BallQuadrature ball_quadrature(const SolutionSource& src, double s_o, double rho, int n_sub = 64) {
    using Rule = boost::math::quadrature::gauss<double, 8>;
    BallQuadrature q;
    auto add_interval = [&](double a, double b, auto&& weight) {
        if (!(b > a)) return;
        const double hseg = (b - a) / n_sub;
        for (int k = 0; k < n_sub; ++k) {
            const double mid = a + (k + 0.5) * hseg;
            for (std::size_t m = 0; m < Rule::abscissa().size(); ++m)
                for (int sgn : {-1, 1}) {
                    if (m == 0 && sgn == 1 && Rule::abscissa()[0] == 0.0) continue;
                    const double x = mid + sgn * 0.5 * hseg * Rule::abscissa()[m];
                    const double w = 0.5 * hseg * Rule::weights()[m] * weight(x);
                    if (w == 0.0) continue;
                    q.coords.push_back(x);
                    q.weights.push_back(w);
                }
        }
    };
    if (!src.radial()) {
        add_interval(s_o - rho, s_o + rho, [](double) { return 1.0; });
    } else {
        const int n = src.n_dim();
        const double area = unit_sphere_area(n);
        const double c = std::abs(s_o);
        auto cap_fraction = [&](double r) {
            if (c == 0.0) return r < rho ? 1.0 : 0.0;
            const double cosang = (r * r + c * c - rho * rho) / (2.0 * r * c);
            if (cosang <= -1.0) return 1.0;
            if (cosang >= 1.0) return 0.0;
            const double tail = 0.5 * boost::math::ibeta(0.5 * (n - 1), 0.5, 1.0 - cosang * cosang);
            return cosang >= 0.0 ? tail : 1.0 - tail;
        };
        auto weight = [&](double r) { return area * std::pow(r, n - 1) * cap_fraction(r); };
        const double lo = std::max(0.0, c - rho), hi = c + rho, kink = std::abs(rho - c);
        if (kink > lo && kink < hi) {
            add_interval(lo, kink, weight);
            add_interval(kink, hi, weight);
        } else {
            add_interval(lo, hi, weight);
        }
    }
    for (double w : q.weights) q.volume += w;
    return q;
}

}  // namespace dnl
