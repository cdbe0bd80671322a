#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnl/error.hpp"
#include "dnl/fit.hpp"
#include "dnl/solver/trajectory.hpp"

namespace dnl {

struct SliceFunctionals {
    double time = 0.0;
    double integral_uq = 0.0;
    double integral_uq1 = 0.0;
    double sup_u = 0.0;
    double sup_grad = 0.0;
};

/// Midpoint quadrature with the grid's cell volumes; |Du| from face differences (interior faces only).
inline std::vector<SliceFunctionals> slice_functionals(const Grid1D& grid, const std::vector<Field>& fields, double q) {
    std::vector<SliceFunctionals> out;
    for (const auto& f : fields) {
        SliceFunctionals s;
        s.time = f.time();
        for (int i = 0; i < f.size(); ++i) {
            const double u = std::max(f[i], 0.0);
            const double v = grid.cell_volume(i);
            s.integral_uq += v * std::pow(u, q);
            s.integral_uq1 += v * std::pow(u, q + 1.0);
            s.sup_u = std::max(s.sup_u, f[i]);
        }
        for (int i = 1; i < f.size(); ++i) s.sup_grad = std::max(s.sup_grad, std::abs(f[i] - f[i - 1]) / grid.h());
        out.push_back(s);
    }
    return out;
}

/// As above, with the boundary faces included through the problem's ghost cells.
inline std::vector<SliceFunctionals> slice_functionals(const Trajectory& traj) {
    auto out = slice_functionals(traj.grid(), traj.fields(), traj.problem().exponents.q());
    const auto& g = traj.grid();
    const auto& bc = traj.problem().boundary;
    const int n = g.n_cells();
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto& f = traj.fields()[k];
        const double t = f.time();
        if (!g.left_is_symmetry()) {
            const double ghost = bc.ghost(0, g.face(0), g.h(), f[0], t, g.is_radial()).first;
            out[k].sup_grad = std::max(out[k].sup_grad, std::abs(f[0] - ghost) / g.h());
        }
        const double ghost = bc.ghost(1, g.face(n), g.h(), f[n - 1], t, g.is_radial()).first;
        out[k].sup_grad = std::max(out[k].sup_grad, std::abs(ghost - f[n - 1]) / g.h());
    }
    return out;
}

struct ComparisonReport {
    double max_violation = 0.0;
    double at_time = 0.0;
    double at_x = 0.0;
    double threshold = 0.0;
    bool passes = true;

    std::string describe() const {
        std::ostringstream os;
        os << "max (v-w)+ = " << max_violation << " at t=" << at_time << ", x=" << at_x << "; threshold "
           << threshold << (passes ? " -> pass" : " -> FAIL");
        return os.str();
    }
};

/// Largest positive part of v - w over every stored cell and time.
/// Hypotheses: same grid, times and exponents; v_o <= w_o; v has zero boundary unless q = 1.
inline ComparisonReport check_comparison(const Trajectory& v, const Trajectory& w, double tol) {
    if (!(v.grid() == w.grid())) throw std::invalid_argument("comparison: trajectories use different grids");
    if (!(v.problem().exponents == w.problem().exponents))
        throw std::invalid_argument("comparison: trajectories use different exponents");
    if (v.times().size() != w.times().size()) throw std::invalid_argument("comparison: different numbers of slices");
    for (std::size_t k = 0; k < v.times().size(); ++k)
        if (std::abs(v.times()[k] - w.times()[k]) > 1e-12 * std::max(1.0, std::abs(v.times()[k])))
            throw std::invalid_argument("comparison: trajectories stored at different times");
    const double q = v.problem().exponents.q();
    if (q != 1.0 && v.problem().boundary.kind() != BoundaryKind::zero_dirichlet)
        throw RegimeError("comparison: for q != 1 the smaller solution must have zero lateral boundary data");
    const auto& v0 = v.fields().front();
    const auto& w0 = w.fields().front();
    for (int i = 0; i < v0.size(); ++i)
        if (v0[i] > w0[i]) throw RegimeError("comparison: initial data not ordered (v_o > w_o)");

    ComparisonReport rep;
    for (std::size_t k = 0; k < v.fields().size(); ++k) {
        const auto& a = v.fields()[k];
        const auto& b = w.fields()[k];
        for (int i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            if (d > rep.max_violation) {
                rep.max_violation = d;
                rep.at_time = a.time();
                rep.at_x = v.grid().center(i);
            }
        }
    }
    rep.threshold = tol + v.config().newton_tol + w.config().newton_tol;
    rep.passes = rep.max_violation <= rep.threshold;
    return rep;
}

struct HolderFit {
    double exponent = 1.0;
    double seminorm = 0.0;
    double r_squared = 1.0;
};

/// Fits osc_{window of length r} f ~ seminorm * r^exponent over dyadic window lengths.
inline HolderFit fit_holder(const std::vector<double>& values, double h) {
    const int n = static_cast<int>(values.size());
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, std::abs(v));
    std::vector<double> rs, oscs;
    for (int w = 1; 2 * w <= n; w *= 2) {
        double osc = 0.0;
        for (int i = 0; i + w < n; ++i) {
            const auto [lo, hi] = std::minmax_element(values.begin() + i, values.begin() + i + w + 1);
            osc = std::max(osc, *hi - *lo);
        }
        rs.push_back(w * h);
        oscs.push_back(osc);
    }
    HolderFit fit;
    for (double o : oscs)
        if (!(o > 1e-14 * std::max(vmax, 1e-300))) return fit;  // flat: no measurable oscillation
    const auto line = fit_loglog(rs, oscs);
    fit.exponent = line.slope;
    fit.seminorm = std::exp(line.intercept);
    fit.r_squared = line.r_squared;
    return fit;
}

struct VTransform {
    Grid1D grid;
    double p = 2.0;
    double q = 1.0;
    std::vector<double> times;
    std::vector<Field> v_fields;
    std::vector<Field> a_fields;
    double a_min = 0.0;
    double a_max = 0.0;
    std::vector<HolderFit> a_holder;
    int cell_lo = 0;
    int cell_hi = 0;  // exclusive
};

/// v = u^q and a = (1/q)^{p-1} u^{(p-1)(1-q)} on the cells with centres in [x_lo, x_hi] and the
/// stored slices with times in [t_lo, t_hi]. u must be strictly positive there.
inline VTransform transform_to_v(const Trajectory& traj, std::optional<std::pair<double, double>> x_window = std::nullopt,
                                 std::optional<std::pair<double, double>> t_window = std::nullopt) {
    const auto& g = traj.grid();
    const double p = traj.problem().exponents.p();
    const double q = traj.problem().exponents.q();
    int lo = 0, hi = g.n_cells();
    if (x_window) {
        lo = hi;
        int last = -1;
        for (int i = 0; i < g.n_cells(); ++i)
            if (g.center(i) >= x_window->first && g.center(i) <= x_window->second) {
                lo = std::min(lo, i);
                last = i;
            }
        hi = last + 1;
    }
    if (hi - lo < 4) throw DomainError("transform_to_v: spatial window holds fewer than 4 cells");
    const Grid1D sub = lo == 0 && hi == g.n_cells() ? g : Grid1D(g.geometry(), g.n_dim(), g.face(lo), g.face(hi), hi - lo);
    VTransform out{sub, p, q, {}, {}, {}, std::numeric_limits<double>::infinity(), 0.0, {}, lo, hi};
    const double scale = std::pow(1.0 / q, p - 1.0);
    const double power = (p - 1.0) * (1.0 - q);
    for (const auto& f : traj.fields()) {
        if (t_window && (f.time() < t_window->first || f.time() > t_window->second)) continue;
        std::vector<double> v(hi - lo), a(hi - lo);
        for (int i = lo; i < hi; ++i) {
            if (!(f[i] > 0.0)) {
                std::ostringstream os;
                os << "transform_to_v: u(" << g.center(i) << ", " << f.time() << ") = " << f[i] << " is not positive";
                throw DomainError(os.str());
            }
            v[i - lo] = std::pow(f[i], q);
            a[i - lo] = scale * std::pow(f[i], power);
            out.a_min = std::min(out.a_min, a[i - lo]);
            out.a_max = std::max(out.a_max, a[i - lo]);
        }
        out.a_holder.push_back(fit_holder(a, g.h()));
        out.times.push_back(f.time());
        out.v_fields.emplace_back(sub, f.time(), std::move(v));
        out.a_fields.emplace_back(sub, f.time(), std::move(a));
    }
    if (out.times.empty()) throw DomainError("transform_to_v: no stored slice inside the time window");
    return out;
}

/// The coefficient form dv/dt = div(a |Dv|^{p-2} Dv) with a frozen from a full-domain transform,
/// interpolated linearly in x (clamped at the ends) and in t.
inline CauchyDirichletProblem v_problem(const Trajectory& traj, const VTransform& tr) {
    const auto& pb = traj.problem();
    if (!(tr.grid == pb.grid) || tr.times.size() != traj.times().size())
        throw std::invalid_argument("v_problem: transform must cover the whole trajectory");
    auto data = std::make_shared<VTransform>(tr);
    auto fn = [data](double x, double t) {
        const auto& g = data->grid;
        const double s = std::clamp((x - g.center(0)) / g.h(), 0.0, static_cast<double>(g.n_cells() - 1));
        const int i = std::min(static_cast<int>(s), g.n_cells() - 2);
        const double wx = s - i;
        const auto& ts = data->times;
        std::size_t k = 0;
        while (k + 2 < ts.size() && ts[k + 1] < t) ++k;
        auto at = [&](std::size_t slice) {
            const auto& a = data->a_fields[slice];
            return (1.0 - wx) * a[i] + wx * a[i + 1];
        };
        if (ts.size() == 1) return at(0);
        const double wt = std::clamp((t - ts[k]) / (ts[k + 1] - ts[k]), 0.0, 1.0);
        return (1.0 - wt) * at(k) + wt * at(k + 1);
    };
    Boundary bc = Boundary::zero();
    const double q = pb.exponents.q();
    if (pb.boundary.kind() == BoundaryKind::dirichlet) {
        const auto orig = pb.boundary;
        bc = Boundary::dirichlet([orig, q](double t) { return std::pow(orig.value(0, t), q); },
                                 [orig, q](double t) { return std::pow(orig.value(1, t), q); });
    } else if (pb.boundary.kind() == BoundaryKind::from_exact) {
        throw std::invalid_argument("v_problem: from_exact boundaries are not transformed");
    }
    return CauchyDirichletProblem(ExponentTriple(pb.exponents.p(), 1.0, pb.exponents.n_dim()), pb.grid,
                                  tr.v_fields.front(), bc, pb.t_end, Coefficient::bounded(fn, tr.a_min, tr.a_max),
                                  pb.mu);
}

}  // namespace dnl
