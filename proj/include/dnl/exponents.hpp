#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dnl {

/// Relative tolerance for deciding that an exponent sits on a threshold.
inline constexpr double kThresholdRelTol = 1e-12;

inline bool nearly_equal(double a, double b, double rel = kThresholdRelTol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

/// (p, q, N) for the equation d/dt(u^q) - div(|Du|^{p-2} Du) = 0.
class ExponentTriple {
public:
    ExponentTriple(double p, double q, int n_dim) : p_(p), q_(q), n_(n_dim) {
        if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("exponent p must be > 1");
        if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("exponent q must be > 0");
        if (n_dim < 1) throw std::invalid_argument("dimension N must be >= 1");
    }

    double p() const { return p_; }
    double q() const { return q_; }
    int n_dim() const { return n_; }

    /// N(p-1)/(N-p) for p < N, +inf otherwise.
    double critical_harnack_q() const {
        if (p_ < n_) return n_ * (p_ - 1.0) / (n_ - p_);
        return std::numeric_limits<double>::infinity();
    }

    /// (N(p-1)+p)/(N-p) for p < N, +inf otherwise.
    double boundedness_q() const {
        if (p_ < n_) return (n_ * (p_ - 1.0) + p_) / (n_ - p_);
        return std::numeric_limits<double>::infinity();
    }

    /// p(N+q+1)/N.
    double m_exponent() const { return p_ * (n_ + q_ + 1.0) / n_; }

    /// q + 1 - p, the intrinsic time-scaling exponent.
    double intrinsic_exponent() const { return q_ + 1.0 - p_; }

    bool operator==(const ExponentTriple&) const = default;

private:
    double p_;
    double q_;
    int n_;
};

inline double lambda_r(const ExponentTriple& e, double r) {
    return e.n_dim() * (e.p() - e.q() - 1.0) + r * e.p();
}

enum class DiffusionKind { slow, trudinger, fast };

inline const char* to_string(DiffusionKind k) {
    switch (k) {
        case DiffusionKind::slow: return "slow";
        case DiffusionKind::trudinger: return "trudinger";
        case DiffusionKind::fast: return "fast";
    }
    return "?";
}

struct RegimeFlags {
    DiffusionKind diffusion_kind;
    bool supercritical_harnack;
    bool at_harnack_critical;
    bool bounded_guaranteed;
    bool at_boundedness_critical;
};

inline RegimeFlags classify(const ExponentTriple& e) {
    const double q = e.q();
    const double trud = e.p() - 1.0;
    const double crit = e.critical_harnack_q();
    const double bnd = e.boundedness_q();

    RegimeFlags f{};
    if (nearly_equal(q, trud)) f.diffusion_kind = DiffusionKind::trudinger;
    else if (q < trud) f.diffusion_kind = DiffusionKind::slow;
    else f.diffusion_kind = DiffusionKind::fast;

    f.at_harnack_critical = std::isfinite(crit) && nearly_equal(q, crit);
    f.at_boundedness_critical = std::isfinite(bnd) && nearly_equal(q, bnd);
    f.supercritical_harnack = f.diffusion_kind == DiffusionKind::fast && q < crit && !f.at_harnack_critical;
    f.bounded_guaranteed = q < bnd && !f.at_boundedness_critical;
    return f;
}

}  // namespace dnl
