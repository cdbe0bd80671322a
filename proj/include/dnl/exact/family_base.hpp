#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dnl/exponents.hpp"

namespace dnl {

enum class Family {
    trudinger_gaussian,
    separable_blowup,
    critical_harnack_wave,
    boundedness_borderline,
    supercritical_extinction,
    dipole_self_similar,
    ivanov_subsolution,
    special_log_profile,
};

enum class Role { weak_solution, weak_subsolution, not_weak_solution };

inline const char* to_string(Role r) {
    switch (r) {
        case Role::weak_solution: return "weak_solution";
        case Role::weak_subsolution: return "weak_subsolution";
        case Role::not_weak_solution: return "not_weak_solution";
    }
    return "?";
}

/// Value and first derivatives of a radially symmetric function of (r, t).
struct RadialSample {
    double u = 0.0;
    double u_r = 0.0;
    double u_t = 0.0;
};

using ParamList = std::vector<std::pair<std::string, double>>;

namespace detail {

class FamilyImpl {
public:
    virtual ~FamilyImpl() = default;
    virtual Family family() const = 0;
    virtual Role role() const = 0;
    virtual ExponentTriple exponents() const = 0;
    virtual ParamList params() const = 0;
    /// Reason (r, t) is outside the validity domain, or nothing.
    virtual std::optional<std::string> violation(double r, double t) const = 0;
    virtual RadialSample sample(double r, double t) const = 0;
    /// m for families stated in the form w_t = div(w^{m-1}|Dw|^{p-2}Dw); empty for the prototype form.
    virtual std::optional<double> porous_m() const { return std::nullopt; }
};

}  // namespace detail
}  // namespace dnl
