#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dnl {

/// Samples v(t0 + n dt), n = 0..size-1.
struct TimeSeries {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time(std::size_t n) const { return t0 + static_cast<double>(n) * dt; }
};

enum class MollifierDirection { forward, backward };

/// Exponential time mollifier.
///   forward:  (1/h) int_{t0}^{t} e^{(tau-t)/h} v(tau) dtau
///   backward: (1/h) int_{t}^{T} e^{(t-tau)/h} v(tau) dtau
/// Discretised as the trapezoidal rule applied to the equivalent relation
/// m' = (v - m)/h (forward) or m' = (m - v)/h (backward), started from zero.
inline TimeSeries mollify_exp(const TimeSeries& v, double h, MollifierDirection direction) {
    if (!(h > 0.0)) throw std::invalid_argument("mollify_exp: h must be > 0");
    if (h < v.dt * (1.0 - 1e-12)) throw std::invalid_argument("mollify_exp: h must be >= the time step");
    const std::size_t n = v.size();
    TimeSeries m{v.t0, v.dt, std::vector<double>(n, 0.0)};
    if (n == 0) return m;
    const double c = v.dt / (2.0 * h);
    const double keep = (1.0 - c) / (1.0 + c);
    const double feed = c / (1.0 + c);
    if (direction == MollifierDirection::forward) {
        for (std::size_t k = 0; k + 1 < n; ++k)
            m.values[k + 1] = keep * m.values[k] + feed * (v.values[k] + v.values[k + 1]);
    } else {
        for (std::size_t k = n - 1; k > 0; --k)
            m.values[k - 1] = keep * m.values[k] + feed * (v.values[k] + v.values[k - 1]);
    }
    return m;
}

/// Forward Steklov average (1/h) int_t^{t+h} v, trapezoidal over the window, 0 where t+h runs past the last sample.
/// h must be a whole number of time steps.
inline TimeSeries steklov(const TimeSeries& v, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("steklov: h must be > 0");
    const double ratio = h / v.dt;
    const long k = std::lround(ratio);
    if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * ratio)
        throw std::invalid_argument("steklov: h must be a positive multiple of the time step");
    const std::size_t n = v.size();
    const std::size_t window = static_cast<std::size_t>(k);
    TimeSeries s{v.t0, v.dt, std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i + window < n; ++i) {
        double acc = 0.5 * (v.values[i] + v.values[i + window]);
        for (std::size_t j = i + 1; j < i + window; ++j) acc += v.values[j];
        s.values[i] = acc * v.dt / h;
    }
    return s;
}

/// Largest defect of the staggered identity (M_{n+1}-M_n)/dt = +-(avg v - avg M)/h on the discrete mollifier.
inline double mollifier_identity_defect(const TimeSeries& v, const TimeSeries& m, double h,
                                        MollifierDirection direction) {
    const double sign = direction == MollifierDirection::forward ? 1.0 : -1.0;
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const double lhs = (m.values[k + 1] - m.values[k]) / v.dt;
        const double rhs = sign * (0.5 * (v.values[k] + v.values[k + 1]) - 0.5 * (m.values[k] + m.values[k + 1])) / h;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

/// Largest defect of (S_{n+1}-S_n)/dt = (D_n + D_{n+1})/2 with D_n = (v(t_n+h) - v(t_n))/h, over full windows.
inline double steklov_identity_defect(const TimeSeries& v, const TimeSeries& s, double h) {
    const auto window = static_cast<std::size_t>(std::lround(h / v.dt));
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 + window < v.size(); ++k) {
        const double lhs = (s.values[k + 1] - s.values[k]) / v.dt;
        const double d0 = (v.values[k + window] - v.values[k]) / h;
        const double d1 = (v.values[k + 1 + window] - v.values[k + 1]) / h;
        worst = std::max(worst, std::abs(lhs - 0.5 * (d0 + d1)));
    }
    return worst;
}

}  // namespace dnl
