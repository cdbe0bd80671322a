#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnl/error.hpp"
#include "dnl/exact/families.hpp"

namespace dnl {

inline const std::vector<std::pair<Family, std::string>>& family_ids() {
    static const std::vector<std::pair<Family, std::string>> ids = {
        {Family::trudinger_gaussian, "trudinger_gaussian"},
        {Family::separable_blowup, "separable_blowup"},
        {Family::critical_harnack_wave, "critical_harnack_wave"},
        {Family::boundedness_borderline, "boundedness_borderline"},
        {Family::supercritical_extinction, "supercritical_extinction"},
        {Family::dipole_self_similar, "dipole_self_similar"},
        {Family::ivanov_subsolution, "ivanov_subsolution"},
        {Family::special_log_profile, "special_log_profile"},
    };
    return ids;
}

inline std::string to_string(Family f) {
    for (const auto& [fam, id] : family_ids())
        if (fam == f) return id;
    return "?";
}

inline Family family_from_id(const std::string& id) {
    for (const auto& [fam, name] : family_ids())
        if (name == id) return fam;
    throw std::invalid_argument("unknown family id '" + id + "'");
}

/// Rate b that makes the critical wave an exact solution: p/(p-1) (N/q)^{p-1}.
inline double critical_wave_rate(int n_dim, double p) { return detail::critical_wave_rate(n_dim, p); }

inline double radial_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

/// A closed-form family member. Radially symmetric in x; cheap to copy.
class ClosedFormSolution {
public:
    explicit ClosedFormSolution(std::shared_ptr<const detail::FamilyImpl> impl) : impl_(std::move(impl)) {}

    static ClosedFormSolution trudinger_gaussian(double p, int n_dim, double amplitude = 1.0) {
        return make<detail::TrudingerGaussian>(p, n_dim, amplitude);
    }
    static ClosedFormSolution separable_blowup(int n_dim, double p, double q, double t_final) {
        return make<detail::SeparableBlowup>(n_dim, p, q, t_final);
    }
    static ClosedFormSolution critical_harnack_wave(int n_dim, double p, std::optional<double> rate = std::nullopt) {
        return make<detail::CriticalHarnackWave>(n_dim, p, rate);
    }
    static ClosedFormSolution boundedness_borderline(int n_dim, double p, double a, double t_final) {
        return make<detail::BoundednessBorderline>(n_dim, p, a, t_final);
    }
    static ClosedFormSolution supercritical_extinction(int n_dim, double p, double q, double amplitude, double t_final) {
        return make<detail::SupercriticalExtinction>(n_dim, p, q, amplitude, t_final);
    }
    static ClosedFormSolution dipole_self_similar(int n_dim, double p, double amplitude, double t_final) {
        return make<detail::DipoleSelfSimilar>(n_dim, p, amplitude, t_final);
    }
    static ClosedFormSolution ivanov_subsolution(int n_dim, double p, double q, double outer_radius, double rate) {
        return make<detail::IvanovSubsolution>(n_dim, p, q, outer_radius, rate);
    }
    static ClosedFormSolution special_log_profile(int n_dim, double amplitude, double t_final) {
        return make<detail::SpecialLogProfile>(n_dim, amplitude, t_final);
    }

    Family family() const { return impl_->family(); }
    std::string id() const { return to_string(family()); }
    Role role() const { return impl_->role(); }
    ExponentTriple exponents() const { return impl_->exponents(); }
    ParamList params() const { return impl_->params(); }
    std::optional<double> porous_m() const { return impl_->porous_m(); }

    std::optional<std::string> violation_radial(double r, double t) const { return impl_->violation(r, t); }
    std::optional<std::string> violation(std::span<const double> x, double t) const {
        return impl_->violation(radial_norm(x), t);
    }
    bool in_domain(std::span<const double> x, double t) const { return !violation(x, t).has_value(); }

    /// Value and radial/time derivatives at |x| = r. Throws DomainError outside the validity domain.
    RadialSample radial(double r, double t) const {
        if (auto v = impl_->violation(r, t)) throw DomainError(id() + ": outside validity domain, requires " + *v);
        return impl_->sample(r, t);
    }

    double eval(std::span<const double> x, double t) const { return radial(radial_norm(x), t).u; }

    std::vector<double> grad(std::span<const double> x, double t) const {
        const double r = radial_norm(x);
        const auto s = radial(r, t);
        std::vector<double> g(x.size(), 0.0);
        if (r > 0.0)
            for (std::size_t i = 0; i < x.size(); ++i) g[i] = s.u_r * x[i] / r;
        return g;
    }

    /// Time-derivative term of the family's equation: d/dt(u^q), or d/dt w for porous-form families.
    double dt_uq(std::span<const double> x, double t) const {
        const auto s = radial(radial_norm(x), t);
        if (porous_m()) return s.u_t;
        const double q = exponents().q();
        if (s.u == 0.0) return q == 1.0 ? s.u_t : 0.0;
        return q * std::pow(s.u, q - 1.0) * s.u_t;
    }

    template <class T>
    const T* as() const { return dynamic_cast<const T*>(impl_.get()); }

private:
    template <class T, class... Args>
    static ClosedFormSolution make(Args&&... args) {
        return ClosedFormSolution(std::make_shared<const T>(std::forward<Args>(args)...));
    }
    std::shared_ptr<const detail::FamilyImpl> impl_;
};

/// Parameters accepted by make_family; fields unused by a family are ignored.
struct FamilySpec {
    std::string id;
    double p = 2.0;
    double q = std::nan("");
    int n_dim = 1;
    double C = 1.0;
    double T = 1.0;
    double a = 1.0;
    double b = std::nan("");
    double h = 10.0;
    double r = 0.5;
};

inline ClosedFormSolution make_family(const FamilySpec& s) {
    switch (family_from_id(s.id)) {
        case Family::trudinger_gaussian: return ClosedFormSolution::trudinger_gaussian(s.p, s.n_dim, s.C);
        case Family::separable_blowup: return ClosedFormSolution::separable_blowup(s.n_dim, s.p, s.q, s.T);
        case Family::critical_harnack_wave:
            return ClosedFormSolution::critical_harnack_wave(s.n_dim, s.p,
                                                             std::isnan(s.b) ? std::nullopt : std::optional(s.b));
        case Family::boundedness_borderline: return ClosedFormSolution::boundedness_borderline(s.n_dim, s.p, s.a, s.T);
        case Family::supercritical_extinction:
            return ClosedFormSolution::supercritical_extinction(s.n_dim, s.p, s.q, s.C, s.T);
        case Family::dipole_self_similar: return ClosedFormSolution::dipole_self_similar(s.n_dim, s.p, s.C, s.T);
        case Family::ivanov_subsolution: return ClosedFormSolution::ivanov_subsolution(s.n_dim, s.p, s.q, s.r, s.h);
        case Family::special_log_profile: return ClosedFormSolution::special_log_profile(s.n_dim, s.C, s.T);
    }
    throw std::invalid_argument("unknown family");
}

}  // namespace dnl
