#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dnl/error.hpp"
#include "dnl/exponents.hpp"
#include "dnl/fit.hpp"

namespace dnl {

enum class LawKind { darcy, power_law, forchheimer, khristianovich };

inline std::string to_string(LawKind k) {
    switch (k) {
        case LawKind::darcy: return "darcy";
        case LawKind::power_law: return "power_law";
        case LawKind::forchheimer: return "forchheimer";
        case LawKind::khristianovich: return "khristianovich";
    }
    return "darcy";
}

/// Relation between filtration speed and pressure-gradient magnitude.
class FiltrationLaw {
public:
    static FiltrationLaw darcy() { return FiltrationLaw(LawKind::darcy); }

    /// speed = mobility * |Dp|^alpha
    static FiltrationLaw power_law(double alpha) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("power_law: alpha must be > 0");
        FiltrationLaw f(LawKind::power_law);
        f.alpha_ = alpha;
        return f;
    }

    /// speed = 2g / (sqrt(a^2 + 4bg) + a), the inverse of g = a*speed + b*speed^2.
    static FiltrationLaw forchheimer(double a, double b) {
        if (!(a >= 0.0 && b >= 0.0) || (a == 0.0 && b == 0.0))
            throw std::invalid_argument("forchheimer: coefficients must be >= 0 and not both zero");
        FiltrationLaw f(LawKind::forchheimer);
        f.forch_a_ = a;
        f.forch_b_ = b;
        return f;
    }

    /// speed = lambda_char * Phi(g / pi_scale), Phi given as (abscissa, value) pairs and interpolated linearly.
    static FiltrationLaw khristianovich(std::vector<std::pair<double, double>> phi, double pi_scale, double lambda_char) {
        if (phi.size() < 2) throw std::invalid_argument("khristianovich: table needs at least 2 points");
        if (!(pi_scale > 0.0) || !(lambda_char > 0.0))
            throw std::invalid_argument("khristianovich: scale constants must be > 0");
        if (phi.front().first != 0.0) throw std::invalid_argument("khristianovich: table must start at 0");
        if (phi.front().second < 0.0) throw std::invalid_argument("khristianovich: Phi(0) must be >= 0");
        for (std::size_t k = 1; k < phi.size(); ++k) {
            if (!(phi[k].first > phi[k - 1].first)) throw std::invalid_argument("khristianovich: abscissae must increase");
            if (phi[k].second < phi[k - 1].second) throw std::invalid_argument("khristianovich: Phi must be non-decreasing");
        }
        FiltrationLaw f(LawKind::khristianovich);
        f.phi_ = std::move(phi);
        f.pi_scale_ = pi_scale;
        f.lambda_char_ = lambda_char;
        return f;
    }

    LawKind kind() const { return kind_; }
    double alpha() const { return kind_ == LawKind::darcy ? 1.0 : alpha_; }
    double forchheimer_a() const { return forch_a_; }
    double forchheimer_b() const { return forch_b_; }
    const std::vector<std::pair<double, double>>& phi_table() const { return phi_; }
    double pi_scale() const { return pi_scale_; }
    double lambda_char() const { return lambda_char_; }
    bool reduces_to_power() const { return kind_ == LawKind::darcy || kind_ == LawKind::power_law; }

    /// Filtration speed for gradient magnitude g >= 0; mobility multiplies the power laws only.
    double speed(double g, double mobility = 1.0) const {
        if (g < 0.0) throw std::invalid_argument("FiltrationLaw::speed: gradient magnitude must be >= 0");
        switch (kind_) {
            case LawKind::darcy: return mobility * g;
            case LawKind::power_law: return mobility * std::pow(g, alpha_);
            case LawKind::forchheimer: return g == 0.0 ? 0.0 : 2.0 * g / (std::sqrt(forch_a_ * forch_a_ + 4.0 * forch_b_ * g) + forch_a_);
            case LawKind::khristianovich: return lambda_char_ * phi_at(g / pi_scale_);
        }
        return 0.0;
    }

    std::string describe() const {
        std::ostringstream os;
        os << to_string(kind_);
        switch (kind_) {
            case LawKind::darcy: break;
            case LawKind::power_law: os << "(alpha=" << alpha_ << ")"; break;
            case LawKind::forchheimer: os << "(a=" << forch_a_ << ", b=" << forch_b_ << ")"; break;
            case LawKind::khristianovich:
                os << "(" << phi_.size() << " table points on [0, " << phi_.back().first << "], Pi=" << pi_scale_
                   << ", lambda=" << lambda_char_ << ")";
                break;
        }
        return os.str();
    }

private:
    explicit FiltrationLaw(LawKind k) : kind_(k) {}

    double phi_at(double x) const {
        if (x >= phi_.back().first) {
            // Linear extension with the last segment's slope.
            const auto& a = phi_[phi_.size() - 2];
            const auto& b = phi_.back();
            return b.second + (x - b.first) * (b.second - a.second) / (b.first - a.first);
        }
        const auto it = std::upper_bound(phi_.begin(), phi_.end(), x,
                                         [](double v, const std::pair<double, double>& e) { return v < e.first; });
        const auto& b = *it;
        const auto& a = *(it - 1);
        return a.second + (x - a.first) * (b.second - a.second) / (b.first - a.first);
    }

    LawKind kind_;
    double alpha_ = 1.0;
    double forch_a_ = 0.0, forch_b_ = 0.0;
    std::vector<std::pair<double, double>> phi_;
    double pi_scale_ = 1.0, lambda_char_ = 1.0;
};

enum class StateKind { polytropic, ideal_isothermal, weakly_compressible, incompressible };

inline std::string to_string(StateKind k) {
    switch (k) {
        case StateKind::polytropic: return "polytropic";
        case StateKind::ideal_isothermal: return "ideal_isothermal";
        case StateKind::weakly_compressible: return "weakly_compressible";
        case StateKind::incompressible: return "incompressible";
    }
    return "incompressible";
}

/// Density-pressure relation of the fluid.
class StateEquation {
public:
    /// p = p_ref (rho / rho_ref)^n
    static StateEquation polytropic(double n, double p_ref = 1.0, double rho_ref = 1.0) {
        if (!(n > 1.0) || !std::isfinite(n)) throw std::invalid_argument("polytropic: n must be > 1");
        if (!(p_ref > 0.0 && rho_ref > 0.0)) throw std::invalid_argument("polytropic: reference state must be > 0");
        StateEquation s(StateKind::polytropic);
        s.n_ = n;
        s.p_ref_ = p_ref;
        s.rho_ref_ = rho_ref;
        return s;
    }

    /// p = gas_factor * rho; gas_factor stands for the molar gas constant times temperature over molar mass.
    static StateEquation ideal_isothermal(double gas_factor = 1.0) {
        if (!(gas_factor > 0.0)) throw std::invalid_argument("ideal_isothermal: gas factor must be > 0");
        StateEquation s(StateKind::ideal_isothermal);
        s.gas_factor_ = gas_factor;
        return s;
    }

    /// rho = rho_o (1 + (p - p_o) / bulk_modulus)
    static StateEquation weakly_compressible(double bulk_modulus, double rho_o, double p_o) {
        if (!(bulk_modulus > 0.0)) throw std::invalid_argument("weakly_compressible: bulk modulus must be > 0");
        if (!(rho_o > 0.0)) throw std::invalid_argument("weakly_compressible: reference density must be > 0");
        StateEquation s(StateKind::weakly_compressible);
        s.bulk_ = bulk_modulus;
        s.rho_ref_ = rho_o;
        s.p_ref_ = p_o;
        return s;
    }

    static StateEquation incompressible() { return StateEquation(StateKind::incompressible); }

    StateKind kind() const { return kind_; }
    double polytropic_n() const { return n_; }
    double p_ref() const { return p_ref_; }
    double rho_ref() const { return rho_ref_; }
    double gas_factor() const { return gas_factor_; }
    double bulk_modulus() const { return bulk_; }

    std::string describe() const {
        std::ostringstream os;
        os << to_string(kind_);
        switch (kind_) {
            case StateKind::polytropic: os << "(n=" << n_ << ", p_ref=" << p_ref_ << ", rho_ref=" << rho_ref_ << ")"; break;
            case StateKind::ideal_isothermal: os << "(gas_factor=" << gas_factor_ << ")"; break;
            case StateKind::weakly_compressible:
                os << "(K=" << bulk_ << ", rho_o=" << rho_ref_ << ", p_o=" << p_ref_ << ")";
                break;
            case StateKind::incompressible: break;
        }
        return os.str();
    }

private:
    explicit StateEquation(StateKind k) : kind_(k) {}
    StateKind kind_;
    double n_ = 1.0, p_ref_ = 1.0, rho_ref_ = 1.0, gas_factor_ = 1.0, bulk_ = 1.0;
};

/// Rock and fluid constants. The permeability is k = permeability * |Dp|^nanoporous_exponent.
struct MediumParams {
    double porosity = 0.2;
    double viscosity = 1.0;
    double permeability = 1.0;
    double nanoporous_exponent = 0.0;

    void validate() const {
        if (!(porosity > 0.0 && porosity < 1.0)) throw std::invalid_argument("medium: porosity must lie in (0, 1)");
        if (!(viscosity > 0.0)) throw std::invalid_argument("medium: viscosity must be > 0");
        if (!(permeability > 0.0)) throw std::invalid_argument("medium: permeability must be > 0");
        if (!(nanoporous_exponent >= 0.0)) throw std::invalid_argument("medium: nanoporous exponent must be >= 0");
    }
};

enum class MappedVariable { density, pressure };

inline std::string to_string(MappedVariable v) { return v == MappedVariable::density ? "density" : "pressure"; }

/// w_t = k_diff div(w^{m_u-1} |Dw|^{p_exp-2} Dw), equivalent to the prototype via w = u^{q_exp}.
struct DnlMapping {
    double p_exp = 2.0;
    double q_exp = 1.0;
    double m_u = 1.0;
    double k_diff = 1.0;
    double alpha = 1.0;  // effective gradient power: law exponent plus nanoporous exponent
    MappedVariable variable = MappedVariable::pressure;
    std::string law;
    std::string state;
    std::vector<std::pair<std::string, double>> provenance;  // factors whose product is k_diff

    ExponentTriple exponents(int n_dim) const { return ExponentTriple(p_exp, q_exp, n_dim); }

    /// Time rescaling tau = k_diff q^{p-1} t that turns the physical equation into the prototype.
    double time_factor() const { return k_diff * std::pow(q_exp, p_exp - 1.0); }

    std::string card() const {
        std::ostringstream os;
        os << std::setprecision(17);
        os << "law = " << law << "\n"
           << "state = " << state << "\n"
           << "variable = " << to_string(variable) << "\n"
           << "alpha = " << alpha << "\n"
           << "m_u = " << m_u << "\n"
           << "p_exp = " << p_exp << "\n"
           << "q_exp = " << q_exp << "\n"
           << "k_diff = " << k_diff << "\n";
        for (const auto& [name, v] : provenance) os << "k_diff." << name << " = " << v << "\n";
        return os.str();
    }
};

namespace detail {

inline std::string non_power_diagnosis(const FiltrationLaw& law) {
    std::ostringstream os;
    if (law.kind() == LawKind::forchheimer) {
        const double a = law.forchheimer_a(), b = law.forchheimer_b();
        if (b == 0.0) os << "b = 0 is linear in the gradient: use darcy";
        else if (a == 0.0) os << "a = 0 is speed = sqrt(g/b): use power_law(0.5)";
        else
            os << "speed ~ g/a (alpha = 1) for g << " << a * a / (4.0 * b) << ", speed ~ sqrt(g/b) (alpha = 1/2) above";
        return os.str();
    }
    // Local log-log slopes of the tabulated Phi over segments with positive values.
    const auto& t = law.phi_table();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t k = 1; k < t.size(); ++k) {
        const auto& a = t[k - 1];
        const auto& b = t[k];
        if (a.first <= 0.0 || a.second <= 0.0 || b.second <= 0.0) continue;
        const double s = std::log(b.second / a.second) / std::log(b.first / a.first);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if (!std::isfinite(lo)) os << "table has no positive segment away from 0";
    else if (nearly_equal(lo, hi, 1e-9)) os << "table is a single power with exponent " << lo << ": use power_law";
    else os << "local gradient exponent ranges over [" << lo << ", " << hi << "]";
    return os.str();
}

}  // namespace detail

/// Reduces a power-type filtration law and a state equation to the doubly nonlinear form.
/// Polytropic gases map to the density; ideal gases and weakly compressible fluids default to the pressure.
inline DnlMapping to_dnl(const FiltrationLaw& law, const StateEquation& state, const MediumParams& medium,
                         std::optional<MappedVariable> preferred = std::nullopt) {
    medium.validate();
    if (!law.reduces_to_power()) throw NotPowerLaw(law.describe(), detail::non_power_diagnosis(law));
    if (state.kind() == StateKind::incompressible)
        throw std::invalid_argument("to_dnl: incompressible fluid has no evolution equation for the pressure");

    DnlMapping m;
    m.law = law.describe();
    m.state = state.describe();
    m.alpha = law.alpha() + medium.nanoporous_exponent;
    m.p_exp = m.alpha + 1.0;
    const double alpha = m.alpha;
    const double mobility = medium.permeability / medium.viscosity;
    m.provenance.emplace_back("mobility", mobility);
    m.provenance.emplace_back("inverse_porosity", 1.0 / medium.porosity);

    double state_factor = 1.0;
    switch (state.kind()) {
        case StateKind::polytropic: {
            if (preferred && *preferred == MappedVariable::pressure)
                throw std::invalid_argument("to_dnl: polytropic gas maps to the density variable only");
            m.variable = MappedVariable::density;
            const double n = state.polytropic_n();
            const double coef = state.p_ref() / std::pow(state.rho_ref(), n);
            m.m_u = 2.0 + (n - 1.0) * alpha;
            state_factor = std::pow(coef * n, alpha);
            break;
        }
        case StateKind::ideal_isothermal: {
            m.variable = preferred.value_or(MappedVariable::pressure);
            m.m_u = 2.0;
            state_factor = m.variable == MappedVariable::pressure ? 1.0 : std::pow(state.gas_factor(), alpha);
            break;
        }
        case StateKind::weakly_compressible: {
            m.variable = preferred.value_or(MappedVariable::pressure);
            if (m.variable == MappedVariable::pressure) {
                m.m_u = 1.0;
                state_factor = state.bulk_modulus();
            } else {
                m.m_u = 2.0;
                state_factor = std::pow(state.bulk_modulus() / state.rho_ref(), alpha);
            }
            break;
        }
        case StateKind::incompressible: break;
    }
    m.provenance.emplace_back("state", state_factor);
    m.q_exp = 1.0 / (1.0 + (m.m_u - 1.0) / (m.p_exp - 1.0));
    m.k_diff = mobility / medium.porosity * state_factor;
    return m;
}

enum class ReynoldsRange { low, moderate, high };

inline std::string to_string(ReynoldsRange r) {
    switch (r) {
        case ReynoldsRange::low: return "low";
        case ReynoldsRange::moderate: return "moderate";
        case ReynoldsRange::high: return "high";
    }
    return "moderate";
}

struct ReynoldsThresholds {
    double low = 1.0;
    double high = 10.0;
};

struct RegimeChoice {
    ReynoldsRange range;
    FiltrationLaw law;
};

/// Below thresholds.low: power_law(alpha_low > 1). Between (inclusive): darcy.
/// Above thresholds.high: power_law(alpha_high in (1/2, 1)).
inline RegimeChoice reynolds_regime(double reynolds, ReynoldsThresholds th = {}, double alpha_low = 2.0,
                                    double alpha_high = 0.75) {
    if (!(reynolds > 0.0)) throw std::invalid_argument("reynolds_regime: Reynolds number must be > 0");
    if (!(th.low > 0.0 && th.high > th.low)) throw std::invalid_argument("reynolds_regime: thresholds must increase");
    if (!(alpha_low > 1.0)) throw std::invalid_argument("reynolds_regime: low-range alpha must be > 1");
    if (!(alpha_high > 0.5 && alpha_high < 1.0)) throw std::invalid_argument("reynolds_regime: high-range alpha must lie in (1/2, 1)");
    if (reynolds < th.low) return {ReynoldsRange::low, FiltrationLaw::power_law(alpha_low)};
    if (reynolds <= th.high) return {ReynoldsRange::moderate, FiltrationLaw::darcy()};
    return {ReynoldsRange::high, FiltrationLaw::power_law(alpha_high)};
}

/// A physical field w(x, t) > 0 on [x_lo, x_hi] x [t_lo, t_hi]; radial in x when n_dim >= 2.
struct MappingProbe {
    std::function<double(double, double)> field;
    double x_lo = 1.0, x_hi = 2.0;
    double t_lo = 0.0, t_hi = 1.0;
    int n_dim = 1;
    std::string description;
};

struct MappingCheck {
    std::vector<double> h;
    std::vector<double> max_difference;         // max |R_phys - time_factor * R_proto| per h
    std::vector<double> max_physical_residual;  // max |R_phys| per h
    double order = std::numeric_limits<double>::quiet_NaN();
    bool identity = false;  // q_exp = 1: u and w coincide
    bool negligible = false;  // stencils agree up to rounding
    bool passes = false;
};

/// Differences below this fraction of the residual scale that do not shrink with h count as rounding.
inline constexpr double kMappingRoundoff = 1e-6;

namespace detail {

inline double signed_power(double g, double e) { return g == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(g), e), g); }

}  // namespace detail

/// Substitutes the probe into w_t - k div(w^{m_u-1}|Dw|^{p-2}Dw) and, through u = w^{1/q} with tau = k q^{p-1} t,
/// into d_tau u^q - div(|Du|^{p-2}Du). Both use conservative second-order stencils of spacing h in x and t.
inline MappingCheck verify_mapping(const DnlMapping& map, const MappingProbe& probe,
                                   const std::vector<double>& hs = {1e-2, 5e-3, 2.5e-3}, int lattice_points = 9) {
    if (!probe.field) throw std::invalid_argument("verify_mapping: probe has no field");
    if (hs.size() < 2) throw std::invalid_argument("verify_mapping: needs at least 2 spacings");
    if (lattice_points < 2) throw std::invalid_argument("verify_mapping: lattice needs at least 2 points");
    if (!(probe.x_hi > probe.x_lo && probe.t_hi > probe.t_lo)) throw std::invalid_argument("verify_mapping: empty probe box");
    if (probe.n_dim >= 2 && !(probe.x_lo > 0.0)) throw std::invalid_argument("verify_mapping: radial probe box must avoid r = 0");

    const double p = map.p_exp, q = map.q_exp, m = map.m_u, k = map.k_diff;
    const double c = map.time_factor();
    const int nd = probe.n_dim;
    auto weight = [nd](double r) { return nd >= 2 ? std::pow(r, nd - 1) : 1.0; };
    auto w_at = [&](double x, double t) {
        const double w = probe.field(x, t);
        if (!(w > 0.0) || !std::isfinite(w)) {
            std::ostringstream os;
            os << "verify_mapping: probe value " << w << " at (" << x << ", " << t << ") is not positive";
            throw DomainError(os.str());
        }
        return w;
    };

    MappingCheck out;
    out.identity = q == 1.0;
    double scale = 0.0;
    for (double h : hs) {
        if (!(h > 0.0)) throw std::invalid_argument("verify_mapping: spacings must be > 0");
        double worst = 0.0, worst_phys = 0.0;
        for (int i = 0; i < lattice_points; ++i)
            for (int j = 0; j < lattice_points; ++j) {
                const double x = probe.x_lo + (probe.x_hi - probe.x_lo) * i / (lattice_points - 1);
                const double t = probe.t_lo + (probe.t_hi - probe.t_lo) * j / (lattice_points - 1);
                const double wl = w_at(x - h, t), wc = w_at(x, t), wr = w_at(x + h, t);
                const double wt = (w_at(x, t + h) - w_at(x, t - h)) / (2.0 * h);

                auto phys_flux = [&](double a, double b) {
                    return k * std::pow(0.5 * (a + b), m - 1.0) * detail::signed_power((b - a) / h, p - 1.0);
                };
                auto proto_flux = [&](double a, double b) {
                    return detail::signed_power((std::pow(b, 1.0 / q) - std::pow(a, 1.0 / q)) / h, p - 1.0);
                };
                const double wr_face = weight(x + 0.5 * h), wl_face = weight(x - 0.5 * h), wc_w = weight(x);
                const double div_phys = (wr_face * phys_flux(wc, wr) - wl_face * phys_flux(wl, wc)) / (h * wc_w);
                const double div_proto = (wr_face * proto_flux(wc, wr) - wl_face * proto_flux(wl, wc)) / (h * wc_w);
                // Prototype time step c*h lands on the same physical times t -+ h.
                const double r_phys = wt - div_phys;
                const double r_proto = wt / c - div_proto;
                worst = std::max(worst, std::abs(r_phys - c * r_proto));
                worst_phys = std::max(worst_phys, std::abs(r_phys));
                scale = std::max({scale, std::abs(wt), std::abs(div_phys)});
            }
        out.h.push_back(h);
        out.max_difference.push_back(worst);
        out.max_physical_residual.push_back(worst_phys);
    }
    // Rounding in second differences grows like 1/h^2, so a discretely exact match shows differences that are
    // tiny and do not shrink under refinement.
    const double floor = kMappingRoundoff * std::max(scale, 1.0);
    const auto& diff = out.max_difference;
    const bool tiny = std::all_of(diff.begin(), diff.end(), [&](double d) { return d <= floor; });
    out.negligible = tiny && (diff.back() >= diff.front() || diff.back() <= 1e-3 * floor);
    if (!out.negligible) {
        std::vector<double> hh, dd;
        for (std::size_t i = 0; i < out.h.size(); ++i)
            if (out.max_difference[i] > 0.0) {
                hh.push_back(out.h[i]);
                dd.push_back(out.max_difference[i]);
            }
        if (hh.size() >= 2) out.order = fit_loglog(hh, dd).slope;
    }
    out.passes = out.negligible || (out.order >= 1.7 && out.order <= 2.3);
    return out;
}

}  // namespace dnl
