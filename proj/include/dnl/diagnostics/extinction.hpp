#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dnl/diagnostics/report.hpp"
#include "dnl/diagnostics/source.hpp"
#include "dnl/fit.hpp"
#include "dnl/solver/trajectory.hpp"

namespace dnl {

struct ExtinctionOptions {
    double threshold = 1e-8;           // max u below this counts as extinct
    double active_fraction = 1e-6;     // Rayleigh quotient taken only while max u > this * max u(., 0)
    double tolerance = 0.05;           // allowed relative excess of v over w
    std::vector<double> time_fractions = {0.6, 0.7, 0.8, 0.9};  // probe times t_o = T * fraction
};

/// Per stored slice: v = sum V |u|^{q+1} and the face energy sum A h |Du|^p. Boundary faces sit half a cell
/// from the last centre, so they carry weight A h/2; this keeps the discrete dissipation identity exact.
struct EnergySeries {
    std::vector<double> times;
    std::vector<double> v;
    std::vector<double> gradient_energy;
    std::vector<double> max_u;
};

inline EnergySeries energy_series(const Trajectory& traj) {
    const auto& g = traj.grid();
    const auto& bc = traj.problem().boundary;
    const double p = traj.problem().exponents.p(), q = traj.problem().exponents.q();
    const int n = g.n_cells();
    const double h = g.h();
    EnergySeries es;
    for (const auto& f : traj.fields()) {
        double v = 0.0, e = 0.0, mx = 0.0;
        for (int i = 0; i < n; ++i) {
            v += g.cell_volume(i) * std::pow(std::abs(f[i]), q + 1.0);
            mx = std::max(mx, f[i]);
        }
        for (int i = 1; i < n; ++i) e += g.face_area(i) * h * std::pow(std::abs(f[i] - f[i - 1]) / h, p);
        if (!g.left_is_symmetry()) {
            const double ghost = bc.ghost(0, g.face(0), h, f[0], f.time(), g.is_radial()).first;
            e += g.face_area(0) * 0.5 * h * std::pow(std::abs(f[0] - ghost) / h, p);
        }
        const double ghost = bc.ghost(1, g.face(n), h, f[n - 1], f.time(), g.is_radial()).first;
        e += g.face_area(n) * 0.5 * h * std::pow(std::abs(ghost - f[n - 1]) / h, p);
        es.times.push_back(f.time());
        es.v.push_back(v);
        es.gradient_energy.push_back(e);
        es.max_u.push_back(mx);
    }
    return es;
}

/// Energy comparison function w(t) = v0 [1 - mu (q+1-p) t / ((q+1) v0^{(q+1-p)/(q+1)})]_+^{(q+1)/(q+1-p)}.
inline double energy_envelope(double v0, double mu, double p, double q, double t) {
    const double d = q + 1.0 - p;
    const double base = 1.0 - mu * d * t / ((q + 1.0) * std::pow(v0, d / (q + 1.0)));
    return base <= 0.0 ? 0.0 : v0 * std::pow(base, (q + 1.0) / d);
}

/// The time at which energy_envelope reaches zero.
inline double energy_envelope_zero(double v0, double mu, double p, double q) {
    const double d = q + 1.0 - p;
    return (q + 1.0) * std::pow(v0, d / (q + 1.0)) / (mu * d);
}

/// Extinction time, energy domination v <= w (1 + tol) and the pointwise decay constants near T at the probes.
inline DiagnosticReport extinction_analysis(const Trajectory& traj, const std::vector<double>& x_probes,
                                            const ExtinctionOptions& opt = {}) {
    const auto& pb = traj.problem();
    const double p = pb.exponents.p(), q = pb.exponents.q();
    const double d = q + 1.0 - p;
    if (pb.boundary.kind() != BoundaryKind::zero_dirichlet)
        throw std::invalid_argument("extinction_analysis: needs zero Dirichlet boundary data");
    if (!(d > 0.0)) throw RegimeError("extinction_analysis: needs q + 1 - p > 0");

    const auto es = energy_series(traj);
    const double t0 = es.times.front();
    DiagnosticReport rep;
    rep.estimate_id = "extinction";
    rep.param_names = {"x_o", "t_o", "boundary_distance", "quantity", "value"};
    std::ostringstream desc;
    desc << "trajectory N=" << pb.exponents.n_dim() << " p=" << p << " q=" << q << "; " << x_probes.size()
         << " spatial probes; quantity 0 = u, 1 = |Du|";
    rep.probe_description = desc.str();

    double t_ext = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < es.times.size(); ++k)
        if (es.max_u[k] < opt.threshold) {
            t_ext = es.times[k];
            break;
        }

    bool monotone = true;
    for (std::size_t k = 1; k < es.v.size(); ++k)
        if (es.v[k] > es.v[k - 1] * (1.0 + 1e-12)) monotone = false;

    const double v0 = es.v.front();
    double rayleigh_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < es.times.size(); ++k)
        if (es.max_u[k] > opt.active_fraction * es.max_u.front() && es.v[k] > 0.0)
            rayleigh_min = std::min(rayleigh_min, es.gradient_energy[k] / std::pow(es.v[k], p / (q + 1.0)));
    const double mu = (q + 1.0) / q * rayleigh_min;
    const double t_bound = energy_envelope_zero(v0, mu, p, q);
    double excess = 0.0;
    for (std::size_t k = 0; k < es.times.size(); ++k)
        excess = std::max(excess, (es.v[k] - energy_envelope(v0, mu, p, q, es.times[k] - t0)) / v0);
    const bool dominated = excess <= opt.tolerance;

    rep.set("v0", v0);
    rep.set("mu", mu);
    rep.set("T_bound", t0 + t_bound);
    rep.set("max_relative_excess", excess);
    rep.set("dominated", dominated ? 1.0 : 0.0);
    rep.set("v_non_increasing", monotone ? 1.0 : 0.0);
    rep.set("T_num", t_ext);

    if (std::isnan(t_ext)) {
        rep.notes.push_back("no extinction before t_end: max u stays above the threshold");
        rep.verdict = Verdict::inconclusive;
        return rep;
    }
    const bool within = t_ext - t0 <= t_bound;
    rep.set("T_within_bound", within ? 1.0 : 0.0);

    const auto src = SolutionSource::trajectory(traj);
    const auto& g = traj.grid();
    int k = 0;
    for (double x : x_probes) {
        const double c = g.is_radial() ? std::abs(x) : x;
        double dist = g.x_hi() - c;
        if (!g.left_is_symmetry()) dist = std::min(dist, c - g.x_lo());
        if (!(dist > 0.0)) throw DomainError("extinction_analysis: probe on or outside the boundary");
        for (double frac : opt.time_fractions) {
            if (!(frac > 0.5 && frac < 1.0)) throw std::invalid_argument("extinction_analysis: time fractions must lie in (1/2, 1)");
            const double t_o = t0 + frac * (t_ext - t0);
            const double core = std::pow((t_ext - t_o) / std::pow(dist, p), 1.0 / d);
            const double u = src.value(x, t_o);
            const double du = std::abs(src.gradient(x, t_o));
            rep.rows.push_back({k, k, {x, t_o, dist, 0.0, u}, u, core, u / core});
            ++k;
            rep.rows.push_back({k, k, {x, t_o, dist, 1.0, du}, du, core / dist, du * dist / core});
            ++k;
        }
    }
    rep.implied_constant = 0.0;
    for (const auto& r : rep.rows) rep.implied_constant = std::max(rep.implied_constant, r.implied);
    rep.verdict = dominated && within ? Verdict::bounded : Verdict::diverging;
    if (!dominated) rep.notes.push_back("v exceeds w by more than the tolerance");
    if (!within) rep.notes.push_back("numerical extinction time exceeds the energy bound");
    rep.notes.push_back("gradients interpolated from cell values: O(h) accurate, one-sided at the boundary");
    return rep;
}

struct DecayFit {
    double slope = 0.0;
    double expected = 0.0;
    double r_squared = 0.0;
    double relative_error = 0.0;
    bool passes = false;
};

/// Log-log slope of u(x_o, T - tau) against tau, compared with 1/(q+1-p) to the given relative tolerance.
inline DecayFit fit_decay_exponent(const SolutionSource& src, double s_o, double t_final, const std::vector<double>& taus,
                                   double tolerance = 0.1) {
    if (taus.size() < 2) throw std::invalid_argument("fit_decay_exponent: needs at least 2 times");
    std::vector<double> u;
    for (double tau : taus) {
        if (!(tau > 0.0)) throw std::invalid_argument("fit_decay_exponent: tau must be > 0");
        u.push_back(src.value(s_o, t_final - tau));
        if (!(u.back() > 0.0)) throw DomainError("fit_decay_exponent: u vanishes at a probe time");
    }
    const auto line = fit_loglog(taus, u);
    DecayFit f;
    f.slope = line.slope;
    f.r_squared = line.r_squared;
    f.expected = 1.0 / src.exponents().intrinsic_exponent();
    f.relative_error = std::abs(f.slope - f.expected) / f.expected;
    f.passes = f.relative_error <= tolerance;
    return f;
}

}  // namespace dnl
