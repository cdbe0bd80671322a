#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "dnl/exponents.hpp"

namespace dnl {

struct SpaceTimePoint {
    std::vector<double> x;
    double t = 0.0;
};

inline double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("points of different dimension");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// |x1 - x2| + sqrt(lambda^{p-2} |t1 - t2|).
inline double intrinsic_distance(const SpaceTimePoint& z1, const SpaceTimePoint& z2, double lambda, double p) {
    if (!(lambda > 0.0)) throw std::invalid_argument("intrinsic_distance: lambda must be > 0");
    return euclidean_distance(z1.x, z2.x) + std::sqrt(std::pow(lambda, p - 2.0) * std::abs(z1.t - z2.t));
}

struct ThetaBackward { double theta; };
struct LambdaBackward { double lambda; };
struct SymmetricIntrinsic { double u_o; };

using CylinderScaling = std::variant<ThetaBackward, LambdaBackward, SymmetricIntrinsic>;

struct TimeInterval {
    double lo;
    double hi;
    bool hi_closed;  ///< backward cylinders include t_o, the symmetric one is open at both ends
};

/// K_rho(x_o) (a cube, sup-norm) times a time interval fixed by the scaling kind.
class IntrinsicCylinder {
public:
    IntrinsicCylinder(SpaceTimePoint center, double radius, CylinderScaling scaling, ExponentTriple exponents)
        : center_(std::move(center)), radius_(radius), scaling_(scaling), exponents_(exponents) {
        if (!(radius > 0.0)) throw std::invalid_argument("cylinder radius must be > 0");
        if (!(time_extent() > 0.0)) throw std::invalid_argument("cylinder time extent must be > 0");
    }

    const SpaceTimePoint& center() const { return center_; }
    double radius() const { return radius_; }
    const CylinderScaling& scaling() const { return scaling_; }

    TimeInterval time_interval() const {
        const double p = exponents_.p();
        const double rho = radius_;
        const double t_o = center_.t;
        if (auto* th = std::get_if<ThetaBackward>(&scaling_)) return {t_o - th->theta * std::pow(rho, p), t_o, true};
        if (auto* la = std::get_if<LambdaBackward>(&scaling_))
            return {t_o - std::pow(la->lambda, 2.0 - p) * rho * rho, t_o, true};
        const auto& sy = std::get<SymmetricIntrinsic>(scaling_);
        const double half = std::pow(sy.u_o, exponents_.intrinsic_exponent()) * std::pow(rho, p);
        return {t_o - half, t_o + half, false};
    }

    double time_extent() const {
        const auto iv = time_interval();
        return iv.hi - iv.lo;
    }

    bool contains(const SpaceTimePoint& z) const {
        if (z.x.size() != center_.x.size()) return false;
        for (std::size_t i = 0; i < z.x.size(); ++i)
            if (!(std::abs(z.x[i] - center_.x[i]) < radius_)) return false;
        const auto iv = time_interval();
        if (!(z.t > iv.lo)) return false;
        return iv.hi_closed ? z.t <= iv.hi : z.t < iv.hi;
    }

private:
    SpaceTimePoint center_;
    double radius_;
    CylinderScaling scaling_;
    ExponentTriple exponents_;
};

}  // namespace dnl
