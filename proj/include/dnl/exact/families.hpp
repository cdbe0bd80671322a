#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "dnl/error.hpp"
#include "dnl/exact/family_base.hpp"
#include "dnl/exponents.hpp"
#include "dnl/g_function.hpp"

namespace dnl::detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

// u = C t^{-N/(p(p-1))} exp(-((p-1)/p) (r^p/(p t))^{1/(p-1)}),  q = p - 1.
class TrudingerGaussian final : public FamilyImpl {
public:
    TrudingerGaussian(double p, int n_dim, double amplitude) : e_(p, p - 1.0, n_dim), amp_(amplitude) {
        require(amplitude > 0.0, "trudinger_gaussian: C must be > 0");
    }
    Family family() const override { return Family::trudinger_gaussian; }
    Role role() const override { return Role::weak_solution; }
    ExponentTriple exponents() const override { return e_; }
    ParamList params() const override { return {{"C", amp_}}; }
    std::optional<std::string> violation(double, double t) const override {
        if (!(t > 0.0)) return "t > 0";
        return std::nullopt;
    }
    RadialSample sample(double r, double t) const override {
        const double p = e_.p();
        const double z = std::pow(std::pow(r, p) / (p * t), 1.0 / (p - 1.0));
        const double u = amp_ * std::pow(t, -e_.n_dim() / (p * (p - 1.0))) * std::exp(-(p - 1.0) / p * z);
        return {u, -u * std::pow(r / (p * t), 1.0 / (p - 1.0)), u * (-e_.n_dim() / (p * (p - 1.0) * t) + z / (p * t))};
    }

private:
    ExponentTriple e_;
    double amp_;
};

// u = C(N,p,q) (T-t)_+^{1/d} r^{-p/d},  d = q - (p-1).
class SeparableBlowup final : public FamilyImpl {
public:
    SeparableBlowup(int n_dim, double p, double q, double t_final) : e_(p, q, n_dim), t_final_(t_final) {
        require(p < n_dim, "separable_blowup: needs p < N");
        require(q > e_.boundedness_q(), "separable_blowup: needs q > (N(p-1)+p)/(N-p)");
        const double d = q - p + 1.0;
        amp_ = std::pow((n_dim * d - p * q) / q * std::pow(p / d, p - 1.0), 1.0 / d);
    }
    static double constant(int n_dim, double p, double q) {
        const double d = q - p + 1.0;
        return std::pow((n_dim * d - p * q) / q * std::pow(p / d, p - 1.0), 1.0 / d);
    }
    Family family() const override { return Family::separable_blowup; }
    Role role() const override { return Role::weak_solution; }
    ExponentTriple exponents() const override { return e_; }
    ParamList params() const override { return {{"T", t_final_}, {"C", amp_}}; }
    std::optional<std::string> violation(double r, double) const override {
        if (!(r > 0.0)) return "x != 0";
        return std::nullopt;
    }
    RadialSample sample(double r, double t) const override {
        const double d = e_.intrinsic_exponent();
        const double tau = t_final_ - t;
        if (tau <= 0.0) return {};
        const double u = amp_ * std::pow(tau, 1.0 / d) * std::pow(r, -e_.p() / d);
        return {u, -e_.p() / d * u / r, -u / (d * tau)};
    }

private:
    ExponentTriple e_;
    double t_final_;
    double amp_;
};

/// b for which (|x|^{p/(p-1)} + e^{bt})^{-(N-1)/(q+1)} solves the prototype at q = N(p-1)/(N-p).
inline double critical_wave_rate(int n_dim, double p) {
    const double q = n_dim * (p - 1.0) / (n_dim - p);
    return p / (p - 1.0) * std::pow(n_dim / q, p - 1.0);
}

// u = (r^g + e^{bt})^{-k},  g = N(q+1)/(q(N-1)),  k = (N-1)/(q+1).
class CriticalHarnackWave final : public FamilyImpl {
public:
    CriticalHarnackWave(int n_dim, double p, std::optional<double> rate)
        : e_(check(n_dim, p), n_dim * (p - 1.0) / (n_dim - p), n_dim) {
        rate_ = rate.value_or(critical_wave_rate(n_dim, p));
        const double q = e_.q();
        power_ = n_dim * (q + 1.0) / (q * (n_dim - 1.0));
        outer_ = (n_dim - 1.0) / (q + 1.0);
    }
    Family family() const override { return Family::critical_harnack_wave; }
    Role role() const override { return Role::weak_solution; }
    ExponentTriple exponents() const override { return e_; }
    ParamList params() const override { return {{"b", rate_}}; }
    std::optional<std::string> violation(double, double) const override { return std::nullopt; }
    RadialSample sample(double r, double t) const override {
        const double et = std::exp(rate_ * t);
        const double s = std::pow(r, power_) + et;
        const double u = std::pow(s, -outer_);
        const double common = -outer_ * u / s;
        return {u, common * power_ * std::pow(r, power_ - 1.0), common * rate_ * et};
    }
    double rate() const { return rate_; }

private:
    static double check(int n_dim, double p) {
        require(n_dim >= 2, "critical_harnack_wave: needs N >= 2");
        require(p > 1.0 && p < n_dim, "critical_harnack_wave: needs 1 < p < N");
        return p;
    }
    ExponentTriple e_;
    double rate_ = 0.0;
    double power_ = 0.0;
    double outer_ = 0.0;
};

// u = (T-t)_+^{(N+q+1)/(q+1)^2} (a + b r^e)^{-N/(q+1)},  e = N(q+1)/(Nq-q-1),  q = (N(p-1)+p)/(N-p).
class BoundednessBorderline final : public FamilyImpl {
public:
    BoundednessBorderline(int n_dim, double p, double a, double t_final)
        : e_(check(n_dim, p), (n_dim * (p - 1.0) + p) / (n_dim - p), n_dim), a_(a), t_final_(t_final) {
        require(a > 0.0, "boundedness_borderline: a must be > 0");
        const double q = e_.q();
        const double nn = n_dim;
        require(std::max((q + 1.0) / q, p) < nn, "boundedness_borderline: needs max((q+1)/q, p) < N");
        const double denom = nn * q - q - 1.0;
        time_power_ = (nn + q + 1.0) / ((q + 1.0) * (q + 1.0));
        space_power_ = nn * (q + 1.0) / denom;
        outer_ = nn / (q + 1.0);
        b_ = denom / (nn * nn) * std::pow(q * (nn + q + 1.0) / ((q + 1.0) * (q + 1.0) * nn * a), (nn + q + 1.0) / denom);
    }
    Family family() const override { return Family::boundedness_borderline; }
    Role role() const override { return Role::weak_solution; }
    ExponentTriple exponents() const override { return e_; }
    ParamList params() const override { return {{"a", a_}, {"T", t_final_}, {"b", b_}}; }
    std::optional<std::string> violation(double, double) const override { return std::nullopt; }
    RadialSample sample(double r, double t) const override {
        const double tau = t_final_ - t;
        if (tau <= 0.0) return {};
        const double s = a_ + b_ * std::pow(r, space_power_);
        const double spatial = std::pow(s, -outer_);
        const double temporal = std::pow(tau, time_power_);
        const double u = temporal * spatial;
        return {u, -outer_ * u / s * b_ * space_power_ * std::pow(r, space_power_ - 1.0), -time_power_ * u / tau};
    }
    double b() const { return b_; }

private:
    static double check(int n_dim, double p) {
        require(p > 1.0 && p < n_dim, "boundedness_borderline: needs 1 < p < N");
        return p;
    }
    ExponentTriple e_;
    double a_;
    double t_final_;
    double b_ = 0.0;
    double time_power_ = 0.0;
    double space_power_ = 0.0;
    double outer_ = 0.0;
};

// u = tau^{1/d} (a r^{p/(p-1)} + C tau^{pq/((p-1) lambda_q)})^{-(p-1)/d},  tau = (T-t)_+,  d = q+1-p,  lambda_q < 0.
class SupercriticalExtinction final : public FamilyImpl {
public:
    SupercriticalExtinction(int n_dim, double p, double q, double amplitude, double t_final)
        : e_(p, q, n_dim), amp_(amplitude), t_final_(t_final) {
        require(n_dim >= 2 && p < n_dim, "supercritical_extinction: needs N >= 2 and p < N");
        lambda_ = lambda_r(e_, q);
        require(lambda_ < 0.0, "supercritical_extinction: needs lambda_q < 0");
        require(amplitude != 0.0, "supercritical_extinction: C must be non-zero");
        const double d = e_.intrinsic_exponent();
        coef_ = std::pow(q / std::abs(lambda_), 1.0 / (p - 1.0)) * d / p;
        time_power_ = p * q / ((p - 1.0) * lambda_);
        space_power_ = p / (p - 1.0);
        outer_ = (p - 1.0) / d;
    }
    Family family() const override { return Family::supercritical_extinction; }
    Role role() const override { return Role::weak_solution; }
    ExponentTriple exponents() const override { return e_; }
    ParamList params() const override { return {{"C", amp_}, {"T", t_final_}, {"a", coef_}}; }

    /// Radius of the moving inner boundary of the C < 0 variant (0 when C > 0 or t >= T).
    double inner_radius(double t) const {
        const double tau = t_final_ - t;
        if (amp_ > 0.0 || tau <= 0.0) return 0.0;
        return std::pow(-amp_ * std::pow(tau, time_power_) / coef_, 1.0 / space_power_);
    }
    std::optional<std::string> violation(double r, double t) const override {
        if (amp_ < 0.0 && t < t_final_ && !(r > inner_radius(t))) return "|x| > R(t)";
        return std::nullopt;
    }
    RadialSample sample(double r, double t) const override {
        const double tau = t_final_ - t;
        if (tau <= 0.0) return {};
        const double d = e_.intrinsic_exponent();
        const double tail = amp_ * std::pow(tau, time_power_);
        const double s = coef_ * std::pow(r, space_power_) + tail;
        const double u = std::pow(tau, 1.0 / d) * std::pow(s, -outer_);
        const double u_r = -outer_ * u / s * coef_ * space_power_ * std::pow(r, space_power_ - 1.0);
        const double du_dtau = u / (d * tau) - outer_ * u / s * time_power_ * tail / tau;
        return {u, u_r, -du_dtau};
    }
    double decay_exponent_at_origin() const {
        return (1.0 - e_.p() * e_.q() / lambda_) / e_.intrinsic_exponent();
    }

private:
    ExponentTriple e_;
    double amp_;
    double t_final_;
    double lambda_ = 0.0;
    double coef_ = 0.0;
    double time_power_ = 0.0;
    double space_power_ = 0.0;
    double outer_ = 0.0;
};

inline double log_add_exp(double x, double y) {
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// u = f(|x| (T-t)^{-1/p}),  f' = -r^{-2/(2-p)} [C r^{|lambda_1|/(p-1)} + (2-p)/(p|lambda_1|)]^{-1/(2-p)},  f(inf) = 0.
class DipoleSelfSimilar final : public FamilyImpl {
public:
    static constexpr int kNodes = 4096;
    static constexpr double kRmin = 1e-6;
    static constexpr double kRmax = 1e6;

    DipoleSelfSimilar(int n_dim, double p, double amplitude, double t_final)
        : e_(p, 1.0, n_dim), amp_(amplitude), t_final_(t_final) {
        require(p > 1.0 && p < 2.0 * n_dim / (n_dim + 2.0), "dipole_self_similar: needs 1 < p < 2N/(N+2)");
        require(amplitude > 0.0, "dipole_self_similar: C must be > 0");
        lambda1_ = n_dim * (p - 2.0) + p;
        power_ = std::abs(lambda1_) / (p - 1.0);
        shift_ = (2.0 - p) / (p * std::abs(lambda1_));
        build_table();
    }
    Family family() const override { return Family::dipole_self_similar; }
    Role role() const override { return Role::weak_solution; }
    ExponentTriple exponents() const override { return e_; }
    ParamList params() const override { return {{"C", amp_}, {"T", t_final_}}; }
    std::optional<std::string> violation(double r, double t) const override {
        if (!(r > 0.0)) return "x != 0";
        if (!(t < t_final_)) return "t < T";
        return std::nullopt;
    }
    /// -f'(r) > 0.
    double slope(double r) const {
        const double p = e_.p();
        const double log_bracket = log_add_exp(std::log(amp_) + power_ * std::log(r), std::log(shift_));
        return std::exp(-2.0 / (2.0 - p) * std::log(r) - log_bracket / (2.0 - p));
    }
    double profile(double r) const {
        if (r >= kRmax) return tail(r);
        if (r < kRmin) return table_[0] + detail::adaptive_gk([this](double s) { return slope(s); }, r, kRmin, 1e-13 * table_[0]);
        const double pos = std::log(r / kRmin) / step_;
        int j = std::min(static_cast<int>(pos), kNodes - 2);
        const double upper = node(j + 1);
        return table_[j + 1] + gl(r, upper);
    }
    RadialSample sample(double r, double t) const override {
        const double tau = t_final_ - t;
        const double scale = std::pow(tau, -1.0 / e_.p());
        const double xi = r * scale;
        const double g = slope(xi);
        return {profile(xi), -g * scale, -g * xi / (e_.p() * tau)};
    }
    double small_r_constant() const {
        const double p = e_.p();
        return std::pow(std::pow(p / (2.0 - p), p - 1.0) * std::abs(lambda1_), 1.0 / (2.0 - p));
    }
    /// Limit of f(r) r^{(N-p)/(p-1)} as r -> inf.
    double large_r_constant() const {
        const double p = e_.p();
        return std::pow(amp_, -1.0 / (2.0 - p)) * (p - 1.0) / (e_.n_dim() - p);
    }

private:
    double node(int j) const { return kRmin * std::exp(step_ * j); }
    double gl(double a, double b) const {
        return boost::math::quadrature::gauss<double, 20>::integrate([this](double s) { return slope(s); }, a, b);
    }
    double tail(double r) const {
        auto f = [this, r](double s) {
            if (s <= 0.0) return 0.0;
            const double g = slope(r / s);
            return g == 0.0 ? 0.0 : g * (r / s) / s;
        };
        const double guess = slope(r) * r;
        return detail::adaptive_gk(f, 0.0, 1.0, 1e-13 * guess);
    }
    void build_table() {
        step_ = std::log(kRmax / kRmin) / (kNodes - 1);
        table_.assign(kNodes, 0.0);
        table_[kNodes - 1] = tail(kRmax);
        for (int j = kNodes - 2; j >= 0; --j) table_[j] = table_[j + 1] + gl(node(j), node(j + 1));
    }

    ExponentTriple e_;
    double amp_;
    double t_final_;
    double lambda1_ = 0.0;
    double power_ = 0.0;
    double shift_ = 0.0;
    double step_ = 0.0;
    std::vector<double> table_;
};

// w = (1-ht)_+ v(x),  v = [(r0^2-|x|^2)^2 / (|x|^{N/s} ln^2|x|^2)]^{q},  s = (N/p)(q+1-p),
// for w_t = div(w^{m-1}|Dw|^{p-2}Dw) with m = 1 + (p-1)(1/q - 1).
class IvanovSubsolution final : public FamilyImpl {
public:
    IvanovSubsolution(int n_dim, double p, double q, double outer_radius, double rate)
        : e_(p, q, n_dim), r0_(outer_radius), rate_(rate) {
        require(p < n_dim, "ivanov_subsolution: needs p < N");
        require(q >= e_.boundedness_q() * (1.0 - kThresholdRelTol), "ivanov_subsolution: needs q >= (N(p-1)+p)/(N-p)");
        require(outer_radius > 0.0 && outer_radius < 1.0, "ivanov_subsolution: needs 0 < r < 1");
        require(rate > 1.0, "ivanov_subsolution: needs h > 1");
        s_ = n_dim / p * (q + 1.0 - p);
    }
    Family family() const override { return Family::ivanov_subsolution; }
    Role role() const override { return Role::weak_subsolution; }
    ExponentTriple exponents() const override { return e_; }
    ParamList params() const override { return {{"r", r0_}, {"h", rate_}, {"s", s_}}; }
    std::optional<double> porous_m() const override { return 1.0 + (e_.p() - 1.0) * (1.0 / e_.q() - 1.0); }
    std::optional<std::string> violation(double r, double t) const override {
        if (!(r > 0.0 && r < r0_)) return "0 < |x| < r";
        if (!(t >= 0.0 && t <= 1.0)) return "0 <= t <= 1";
        return std::nullopt;
    }
    RadialSample sample(double r, double t) const override {
        const double q = e_.q();
        const double lr = std::log(r * r);
        const double psi = std::pow(r0_ * r0_ - r * r, 2) / (std::pow(r, e_.n_dim() / s_) * lr * lr);
        const double v = std::pow(psi, q);
        const double factor = std::max(1.0 - rate_ * t, 0.0);
        const double dlog = -4.0 * r / (r0_ * r0_ - r * r) - e_.n_dim() / (s_ * r) - 4.0 / (r * lr);
        const double w = factor * v;
        return {w, w * q * dlog, factor > 0.0 ? -rate_ * v : 0.0};
    }

private:
    ExponentTriple e_;
    double r0_;
    double rate_;
    double s_ = 0.0;
};

// u = f(|x| (T-t)^{-1/p}),  p = 2N/(N+1),  f' = -r^{-(N+1)} [C - (N+1)/(N(N-1)) ln r]^{-(N+1)/2}.
// f is pinned to 0 at half the radius where the bracket vanishes.
class SpecialLogProfile final : public FamilyImpl {
public:
    SpecialLogProfile(int n_dim, double amplitude, double t_final)
        : e_(check(n_dim), 1.0, n_dim), amp_(amplitude), t_final_(t_final) {
        log_coef_ = (n_dim + 1.0) / (n_dim * (n_dim - 1.0));
        anchor_ = 0.5 * std::exp(amplitude / log_coef_);
    }
    Family family() const override { return Family::special_log_profile; }
    Role role() const override { return Role::not_weak_solution; }
    ExponentTriple exponents() const override { return e_; }
    ParamList params() const override { return {{"C", amp_}, {"T", t_final_}}; }
    std::optional<std::string> violation(double r, double t) const override {
        if (!(t < t_final_)) return "t < T";
        if (!(r > 0.0)) return "x != 0";
        if (!(r * std::pow(t_final_ - t, -1.0 / e_.p()) <= anchor_)) return "|x|(T-t)^{-1/p} <= anchor";
        return std::nullopt;
    }
    double slope(double r) const {
        const int n = e_.n_dim();
        return std::pow(r, -(n + 1.0)) * std::pow(amp_ - log_coef_ * std::log(r), -(n + 1.0) / 2.0);
    }
    double profile(double xi) const {
        if (xi >= anchor_) return 0.0;
        return detail::adaptive_gk([this](double s) { return slope(s); }, xi, anchor_, 1e-14 * slope(xi) * xi);
    }
    double anchor() const { return anchor_; }
    RadialSample sample(double r, double t) const override {
        const double tau = t_final_ - t;
        const double scale = std::pow(tau, -1.0 / e_.p());
        const double xi = r * scale;
        const double g = slope(xi);
        return {profile(xi), -g * scale, -g * xi / (e_.p() * tau)};
    }

private:
    static double check(int n_dim) {
        require(n_dim >= 2, "special_log_profile: needs N >= 2");
        return 2.0 * n_dim / (n_dim + 1.0);
    }
    ExponentTriple e_;
    double amp_;
    double t_final_;
    double log_coef_ = 0.0;
    double anchor_ = 0.0;
};

}  // namespace dnl::detail
