#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dnl {

/// sign(a) |a|^q, well defined at a = 0 for every q > 0.
inline double signed_pow(double a, double q) {
    if (a == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(a), q), a);
}

enum class GVariant { plus, minus, full };

namespace detail {

/// Globally adaptive 15-point Gauss-Kronrod: bisect the interval with the largest error estimate
/// until the summed estimate meets abs_tol (or 1e-15 relative), capped at 4000 subintervals.
inline double adaptive_gk(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    struct Piece {
        double a, b, est, err;
        bool operator<(const Piece& o) const { return err < o.err; }
    };
    auto make = [&](double lo, double hi) {
        double err = 0.0;
        const double est = GK::integrate(f, lo, hi, 0, 0.0, &err);
        if (!std::isfinite(est) || !std::isfinite(err)) throw std::domain_error("adaptive_gk: non-finite integrand");
        return Piece{lo, hi, est, err};
    };
    std::priority_queue<Piece> heap;
    heap.push(make(a, b));
    double total = heap.top().est, total_err = heap.top().err;
    for (int pieces = 1; pieces < 4000; ++pieces) {
        if (total_err <= std::max(abs_tol, 1e-15 * std::abs(total))) break;
        const Piece worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
            heap.push(worst);
            break;
        }
        const Piece left = make(worst.a, mid), right = make(mid, worst.b);
        total += left.est + right.est - worst.est;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
    return total;
}

/// Oriented integral of q|s|^{q-1} phi(s) over [s0, s1] with s0, s1 of one sign.
/// For q < 1 the substitution sigma = |s|^q absorbs the weight and removes the singularity at 0.
inline double weighted_segment(const std::function<double(double)>& phi, double s0, double s1, double q,
                               double abs_tol) {
    if (s0 == s1) return 0.0;
    if (q < 1.0) {
        const double sg = (s0 + s1) >= 0.0 ? 1.0 : -1.0;
        auto f = [&](double sigma) { return phi(sg * std::pow(sigma, 1.0 / q)); };
        const double a = std::pow(std::abs(s0), q), b = std::pow(std::abs(s1), q);
        return sg * adaptive_gk(f, a, b, abs_tol);
    }
    auto f = [&](double s) { return q * std::pow(std::abs(s), q - 1.0) * phi(s); };
    return adaptive_gk(f, s0, s1, abs_tol);
}

inline double weighted_integral(const std::function<double(double)>& phi, double s0, double s1, double q,
                                double abs_tol) {
    if ((s0 < 0.0 && s1 > 0.0) || (s0 > 0.0 && s1 < 0.0))
        return weighted_segment(phi, s0, 0.0, q, 0.5 * abs_tol) + weighted_segment(phi, 0.0, s1, q, 0.5 * abs_tol);
    return weighted_segment(phi, s0, s1, q, abs_tol);
}

}  // namespace detail

/// The g-functions of (w, k) = (a, b):
///   plus  =  q int_k^w |s|^{q-1} (s-k)_+ ds,
///   minus = -q int_k^w |s|^{q-1} (s-k)_- ds,
///   full  =  q/(q+1)(|a|^{q+1} - |b|^{q+1}) - b(|a|^{q-1}a - |b|^{q-1}b).
/// plus and minus are computed by quadrature, full by its closed form.
inline double g_signed(double a, double b, double q, GVariant variant) {
    if (!(q > 0.0)) throw std::invalid_argument("g_signed: q must be > 0");
    constexpr double abs_tol = 1e-12;
    switch (variant) {
        case GVariant::full: {
            if (q == 1.0) return 0.5 * (a - b) * (a - b);  // the general form cancels to this, minus rounding
            const double val = q / (q + 1.0) * (std::pow(std::abs(a), q + 1.0) - std::pow(std::abs(b), q + 1.0)) -
                               b * (signed_pow(a, q) - signed_pow(b, q));
            return std::max(val, 0.0);
        }
        case GVariant::plus: {
            auto phi = [b](double s) { return std::max(s - b, 0.0); };
            return std::max(detail::weighted_integral(phi, b, a, q, abs_tol), 0.0);
        }
        case GVariant::minus: {
            auto phi = [b](double s) { return std::max(b - s, 0.0); };
            return std::max(-detail::weighted_integral(phi, b, a, q, abs_tol), 0.0);
        }
    }
    return 0.0;
}

}  // namespace dnl
