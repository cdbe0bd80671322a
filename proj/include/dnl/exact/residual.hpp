#pragma once

#include <cmath>
#include <span>
#include <string>

#include "dnl/error.hpp"
#include "dnl/exact/closed_form.hpp"
#include "dnl/g_function.hpp"

namespace dnl {

/// The two terms of the residual, each by second-order central differences.
struct ResidualParts {
    double time_term = 0.0;
    double divergence = 0.0;
    double residual() const { return time_term - divergence; }
};

/// Finite-difference residual of the family's equation at a scalar coordinate:
/// the signed x for N = 1, the radius |x| for N >= 2. Second-order central stencils
/// in space and time with spacing h, conservative radial divergence.
inline ResidualParts pde_residual_parts(const ClosedFormSolution& s, double coord, double t, double h) {
    const auto e = s.exponents();
    const int n = e.n_dim();
    const bool radial = n >= 2;
    const double p = e.p();
    const auto porous_m = s.porous_m();

    for (int di = -2; di <= 2; ++di)
        for (int dj = -2; dj <= 2; ++dj) {
            const double c = coord + di * h;
            if (radial && !(c > 0.0)) throw DomainError(s.id() + ": residual stencil reaches r <= 0");
            if (auto v = s.violation_radial(std::abs(c), t + dj * h))
                throw DomainError(s.id() + ": residual stencil leaves the validity domain (" + *v + ")");
        }

    auto u = [&](double c, double tt) { return s.radial(std::abs(c), tt).u; };
    auto flux = [&](double left, double right) {
        const double g = (right - left) / h;
        double f = signed_pow(g, p - 1.0);
        if (porous_m) f *= std::pow(std::abs(0.5 * (left + right)), *porous_m - 1.0);
        return f;
    };

    const double u0 = u(coord, t);
    const double up = u(coord + h, t);
    const double um = u(coord - h, t);
    const double f_plus = flux(u0, up);
    const double f_minus = flux(um, u0);
    double divergence;
    if (radial) {
        const double w_plus = std::pow(coord + 0.5 * h, n - 1);
        const double w_minus = std::pow(coord - 0.5 * h, n - 1);
        divergence = (w_plus * f_plus - w_minus * f_minus) / (h * std::pow(coord, n - 1));
    } else {
        divergence = (f_plus - f_minus) / h;
    }

    double time_term;
    if (porous_m) {
        time_term = (u(coord, t + h) - u(coord, t - h)) / (2.0 * h);
    } else {
        const double q = e.q();
        time_term = (std::pow(u(coord, t + h), q) - std::pow(u(coord, t - h), q)) / (2.0 * h);
    }
    return {time_term, divergence};
}

inline double pde_residual_scalar(const ClosedFormSolution& s, double coord, double t, double h) {
    return pde_residual_parts(s, coord, t, h).residual();
}

/// d/dt(u^q) - div(|Du|^{p-2}Du) at (x, t) by central differences with spacing h
/// (porous-form families use their own operator).
inline double pde_residual(const ClosedFormSolution& s, std::span<const double> x, double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("pde_residual: h must be > 0");
    const double coord = s.exponents().n_dim() == 1 ? x[0] : radial_norm(x);
    return pde_residual_scalar(s, coord, t, h);
}

}  // namespace dnl

#include <vector>

#include "dnl/fit.hpp"

namespace dnl {

/// Probe point in scalar coordinates (signed x for N = 1, radius otherwise).
struct ResidualProbe {
    double coord;
    double t;
};

/// 8 x 6 lattice kept clear of each family's singular set and time cut-offs.
inline std::vector<ResidualProbe> default_residual_probes(const ClosedFormSolution& s) {
    double c_lo = 0.5, c_hi = 2.0, t_lo = 0.0, t_hi = 0.5;
    const auto params = s.params();
    auto param = [&](const std::string& key) {
        for (const auto& [k, v] : params)
            if (k == key) return v;
        return std::nan("");
    };
    switch (s.family()) {
        case Family::trudinger_gaussian:
            c_lo = s.exponents().n_dim() == 1 ? -2.0 : 0.25, c_hi = 2.0, t_lo = 0.5, t_hi = 2.0;
            break;
        case Family::separable_blowup: t_hi = 0.8 * param("T"); break;
        case Family::critical_harnack_wave: c_lo = 0.4, t_lo = -0.5, t_hi = 0.5; break;
        case Family::boundedness_borderline: c_lo = 0.25, t_hi = 0.8 * param("T"); break;
        case Family::supercritical_extinction: {
            // R(t) grows towards T for C < 0, so the window stops at T/4 there.
            const double tt = param("T");
            const auto* impl = s.as<detail::SupercriticalExtinction>();
            const bool annular = param("C") < 0.0;
            t_hi = (annular ? 0.25 : 0.5) * tt;
            const double inner = impl->inner_radius(t_hi + 0.05 * tt);
            c_lo = annular ? inner + 0.7 : 0.5;
            c_hi = c_lo + 1.75;
            break;
        }
        case Family::dipole_self_similar: c_lo = 1.0, c_hi = 3.0, t_hi = 0.5 * param("T"); break;
        case Family::ivanov_subsolution: {
            const double r0 = param("r"), rate = param("h");
            c_lo = 0.1 * r0, c_hi = 0.8 * r0, t_lo = 0.05 / rate, t_hi = 0.8 / rate;
            break;
        }
        case Family::special_log_profile: {
            const double anchor = s.as<detail::SpecialLogProfile>()->anchor();
            const double reach = anchor * std::pow(0.5, 1.0 / s.exponents().p());
            c_lo = 0.2 * reach, c_hi = 0.7 * reach, t_hi = 0.5 * param("T");
            break;
        }
    }
    std::vector<ResidualProbe> probes;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 6; ++j) probes.push_back({c_lo + (c_hi - c_lo) * i / 7.0, t_lo + (t_hi - t_lo) * j / 5.0});
    return probes;
}

struct ResidualStudy {
    std::vector<double> h;
    std::vector<double> max_abs_residual;
    std::vector<double> max_signed_residual;
    double order = 0.0;
};

inline ResidualStudy residual_convergence(const ClosedFormSolution& s, const std::vector<ResidualProbe>& probes,
                                          const std::vector<double>& h_sequence) {
    ResidualStudy out;
    for (double h : h_sequence) {
        double worst = 0.0, top = -INFINITY;
        for (const auto& pr : probes) {
            const double r = pde_residual_scalar(s, pr.coord, pr.t, h);
            worst = std::max(worst, std::abs(r));
            top = std::max(top, r);
        }
        out.h.push_back(h);
        out.max_abs_residual.push_back(worst);
        out.max_signed_residual.push_back(top);
    }
    if (h_sequence.size() >= 2) out.order = fit_loglog(out.h, out.max_abs_residual).slope;
    return out;
}

}  // namespace dnl
