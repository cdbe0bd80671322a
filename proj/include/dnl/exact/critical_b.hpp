#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "dnl/error.hpp"
#include "dnl/exact/closed_form.hpp"
#include "dnl/exact/residual.hpp"

namespace dnl {

enum class CriticalBWinner { power_p, power_q, both, neither };

inline const char* to_string(CriticalBWinner w) {
    switch (w) {
        case CriticalBWinner::power_p: return "power_p";
        case CriticalBWinner::power_q: return "power_q";
        case CriticalBWinner::both: return "both";
        case CriticalBWinner::neither: return "neither";
    }
    return "?";
}

/// Outcome of fitting the rate b of the critical wave and comparing it with (N/q)^p and (N/q)^q.
struct CriticalBArbitration {
    int n_dim = 0;
    double p = 0.0;
    double q = 0.0;
    double b_fit = 0.0;
    double candidate_power_p = 0.0;
    double candidate_power_q = 0.0;
    double h_coarse = 2.5e-3;
    double h_fine = 1.25e-3;
    double residual_power_p_coarse = 0.0;
    double residual_power_p_fine = 0.0;
    double residual_power_q_coarse = 0.0;
    double residual_power_q_fine = 0.0;
    double residual_fit_coarse = 0.0;
    double residual_fit_fine = 0.0;
    CriticalBWinner winner = CriticalBWinner::neither;

    std::string describe() const {
        std::ostringstream os;
        os.precision(10);
        os << "critical wave b for N=" << n_dim << ", p=" << p << " (q=" << q << "): fitted b=" << b_fit
           << "; (N/q)^p=" << candidate_power_p << " residual " << residual_power_p_coarse << " -> "
           << residual_power_p_fine << "; (N/q)^q=" << candidate_power_q << " residual " << residual_power_q_coarse
           << " -> " << residual_power_q_fine << "; fitted residual " << residual_fit_coarse << " -> "
           << residual_fit_fine << "; winner " << to_string(winner);
        return os.str();
    }
};

namespace detail {

struct WaveProbe {
    std::vector<double> radii;
    std::vector<double> times;
};

inline WaveProbe critical_wave_lattice() {
    WaveProbe w;
    for (int i = 0; i < 16; ++i) w.radii.push_back(0.4 + 1.6 * i / 15.0);
    for (int j = 0; j < 8; ++j) w.times.push_back(-0.5 + 1.0 * j / 7.0);
    return w;
}

inline double wave_max_residual(int n_dim, double p, double rate, double h) {
    const auto sol = ClosedFormSolution::critical_harnack_wave(n_dim, p, rate);
    const auto lat = critical_wave_lattice();
    double worst = 0.0;
    for (double r : lat.radii)
        for (double t : lat.times) worst = std::max(worst, std::abs(pde_residual_scalar(sol, r, t, h)));
    return worst;
}

/// Residual relative to the size of its two terms. For large b the wave is nearly stationary
/// (p-harmonic) on most of the lattice and the absolute residual is small for the wrong reason.
inline double wave_max_relative_residual(int n_dim, double p, double rate, double h) {
    const auto sol = ClosedFormSolution::critical_harnack_wave(n_dim, p, rate);
    const auto lat = critical_wave_lattice();
    double worst = 0.0;
    for (double r : lat.radii)
        for (double t : lat.times) {
            const auto parts = pde_residual_parts(sol, r, t, h);
            const double scale = std::abs(parts.time_term) + std::abs(parts.divergence) + 1e-300;
            worst = std::max(worst, std::abs(parts.residual()) / scale);
        }
    return worst;
}

/// Minimiser of the max relative residual over b > 0: log-spaced scan, then golden section in log b.
inline double fit_wave_rate(int n_dim, double p, double h) {
    auto objective = [&](double log_b) { return wave_max_relative_residual(n_dim, p, std::exp(log_b), h); };
    const double lo = std::log(1e-3), hi = std::log(1e3);
    const int n = 241;
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double v = objective(lo + (hi - lo) * i / (n - 1));
        if (v < best_val) best_val = v, best = i;
    }
    double a = lo + (hi - lo) * std::max(best - 1, 0) / (n - 1);
    double b = lo + (hi - lo) * std::min(best + 1, n - 1) / (n - 1);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = objective(c), fd = objective(d);
    while (b - a > 1e-13) {
        if (fc < fd) {
            b = d, d = c, fd = fc;
            c = b - ratio * (b - a), fc = objective(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + ratio * (b - a), fd = objective(d);
        }
    }
    return std::exp(0.5 * (a + b));
}

}  // namespace detail

/// Fits b on a fixed 16 x 8 lattice (Richardson-extrapolated from two stencil widths) and
/// compares it with both printed candidates.
inline CriticalBArbitration arbitrate_critical_b(int n_dim, double p) {
    if (n_dim < 2 || !(p >= 2.0) || !(p < n_dim))
        throw std::invalid_argument("derive_critical_b: needs N >= 2 and 2 <= p < N");
    CriticalBArbitration out;
    out.n_dim = n_dim;
    out.p = p;
    out.q = n_dim * (p - 1.0) / (n_dim - p);
    out.candidate_power_p = std::pow(n_dim / out.q, p);
    out.candidate_power_q = std::pow(n_dim / out.q, out.q);

    const double b_coarse = detail::fit_wave_rate(n_dim, p, 2e-3);
    const double b_fine = detail::fit_wave_rate(n_dim, p, 1e-3);
    out.b_fit = (4.0 * b_fine - b_coarse) / 3.0;

    auto res = [&](double b, double h) { return detail::wave_max_residual(n_dim, p, b, h); };
    out.residual_power_p_coarse = res(out.candidate_power_p, out.h_coarse);
    out.residual_power_p_fine = res(out.candidate_power_p, out.h_fine);
    out.residual_power_q_coarse = res(out.candidate_power_q, out.h_coarse);
    out.residual_power_q_fine = res(out.candidate_power_q, out.h_fine);
    out.residual_fit_coarse = res(out.b_fit, out.h_coarse);
    out.residual_fit_fine = res(out.b_fit, out.h_fine);

    auto matches = [&](double cand) { return std::abs(cand - out.b_fit) <= 1e-6 * std::abs(out.b_fit); };
    const bool mp = matches(out.candidate_power_p), mq = matches(out.candidate_power_q);
    out.winner = mp && mq ? CriticalBWinner::both
                 : mp     ? CriticalBWinner::power_p
                 : mq     ? CriticalBWinner::power_q
                          : CriticalBWinner::neither;
    return out;
}

/// The fitted b when at least one printed candidate reproduces it; InconsistencyError otherwise.
inline double derive_critical_b(int n_dim, double p) {
    const auto arb = arbitrate_critical_b(n_dim, p);
    if (arb.winner == CriticalBWinner::neither) throw InconsistencyError(arb.describe());
    return arb.b_fit;
}

}  // namespace dnl
