#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "dnl/exact/closed_form.hpp"
#include "dnl/exponents.hpp"
#include "dnl/grid.hpp"

namespace dnl {

enum class FluxMean { arithmetic, harmonic };

inline std::string to_string(FluxMean m) { return m == FluxMean::arithmetic ? "arithmetic" : "harmonic"; }

/// a(x, t) with declared bounds lower <= a <= upper, lower > 0.
struct Coefficient {
    std::function<double(double, double)> fn = [](double, double) { return 1.0; };
    double lower = 1.0;
    double upper = 1.0;

    static Coefficient constant(double value) {
        if (!(value > 0.0)) throw std::invalid_argument("coefficient: constant must be > 0");
        return {[value](double, double) { return value; }, value, value};
    }
    static Coefficient bounded(std::function<double(double, double)> fn, double lower, double upper) {
        if (!(lower > 0.0) || !(upper >= lower)) throw std::invalid_argument("coefficient: need 0 < C_o <= C_1");
        return {std::move(fn), lower, upper};
    }
    bool is_unit() const { return lower == 1.0 && upper == 1.0; }
};

enum class BoundaryKind { zero_dirichlet, dirichlet, from_exact };

inline std::string to_string(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::zero_dirichlet: return "zero_dirichlet";
        case BoundaryKind::dirichlet: return "dirichlet";
        case BoundaryKind::from_exact: return "from_exact";
    }
    return "?";
}

/// Lateral boundary data, imposed through one ghost cell per side.
class Boundary {
public:
    using TimeFunction = std::function<double(double)>;

    static Boundary zero() { return Boundary(BoundaryKind::zero_dirichlet); }
    static Boundary dirichlet(TimeFunction left, TimeFunction right) {
        Boundary b(BoundaryKind::dirichlet);
        b.left_ = std::move(left);
        b.right_ = std::move(right);
        return b;
    }
    static Boundary dirichlet(double value) {
        return dirichlet([value](double) { return value; }, [value](double) { return value; });
    }
    static Boundary from_exact(ClosedFormSolution sol) {
        Boundary b(BoundaryKind::from_exact);
        b.exact_ = std::move(sol);
        return b;
    }

    BoundaryKind kind() const { return kind_; }
    const std::optional<ClosedFormSolution>& exact() const { return exact_; }

    /// Boundary value at the left (side = 0) or right (side = 1) face.
    double value(int side, double t) const {
        if (kind_ != BoundaryKind::dirichlet) return 0.0;
        return side == 0 ? left_(t) : right_(t);
    }

    /// Ghost-cell value next to a boundary face at position face_x, with the adjacent cell
    /// value `inner`, and its derivative with respect to `inner`.
    std::pair<double, double> ghost(int side, double face_x, double h, double inner, double t, bool radial) const {
        switch (kind_) {
            case BoundaryKind::zero_dirichlet: return {-inner, -1.0};
            case BoundaryKind::dirichlet: return {2.0 * value(side, t) - inner, -1.0};
            case BoundaryKind::from_exact: {
                const double x = side == 0 ? face_x - 0.5 * h : face_x + 0.5 * h;
                const double coord = radial ? std::abs(x) : x;
                const double xs[1] = {coord};
                return {radial ? exact_->radial(coord, t).u : exact_->eval(xs, t), 0.0};
            }
        }
        return {0.0, 0.0};
    }

private:
    explicit Boundary(BoundaryKind kind) : kind_(kind) {}
    BoundaryKind kind_;
    TimeFunction left_;
    TimeFunction right_;
    std::optional<ClosedFormSolution> exact_;
};

/// d/dt(|u|^{q-1}u) = div(a (mu^2 + |Du|^2)^{(p-2)/2} Du) on grid x (0, t_end].
struct CauchyDirichletProblem {
    ExponentTriple exponents;
    Grid1D grid;
    Field initial;
    Boundary boundary = Boundary::zero();
    double t_end = 1.0;
    Coefficient coefficient{};
    /// Unset means 0 for p >= 2 and 1e-8 for p < 2.
    std::optional<double> mu{};

    CauchyDirichletProblem(ExponentTriple e, Grid1D g, Field u0, Boundary b, double t_final,
                           Coefficient a = {}, std::optional<double> mu_value = std::nullopt)
        : exponents(e), grid(g), initial(std::move(u0)), boundary(std::move(b)), t_end(t_final),
          coefficient(std::move(a)), mu(mu_value) {
        validate();
    }

    double effective_mu() const {
        if (mu) return *mu;
        return exponents.p() >= 2.0 ? 0.0 : 1e-8;
    }

    /// Cell-wise sampling of the initial profile at cell centres.
    template <class F>
    static Field sample_initial(const Grid1D& grid, double t0, F&& fn) {
        return Field::sample(grid, t0, std::forward<F>(fn));
    }

    void validate() const {
        if (!(initial.grid() == grid)) throw std::invalid_argument("problem: initial field lives on a different grid");
        for (double v : initial.values())
            if (v < 0.0) throw std::invalid_argument("problem: initial data must be >= 0");
        if (!(t_end >= initial.time())) throw std::invalid_argument("problem: t_end precedes the initial time");
        const double m = effective_mu();
        if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("problem: mu must lie in [0, 1]");
        if (!(coefficient.lower > 0.0)) throw std::invalid_argument("problem: coefficient lower bound C_o must be > 0");
        if (grid.is_radial() && grid.n_dim() != exponents.n_dim())
            throw std::invalid_argument("problem: radial grid dimension differs from N");
        if (boundary.kind() == BoundaryKind::from_exact && !(boundary.exact()->exponents() == exponents))
            throw std::invalid_argument("problem: from_exact boundary family has different exponents");
    }
};

struct SolverConfig {
    double dt = 1e-3;
    double newton_tol = 1e-10;
    int max_newton = 30;
    /// Floor for the slope of |u|^{q-1}u in the Jacobian: q max(|u|, floor_eps)^{q-1}.
    double floor_eps = 1e-12;
    FluxMean flux_mean = FluxMean::arithmetic;
    /// Store every k-th step (the last step is always stored).
    int keep_every = 1;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("solver config: dt must be > 0");
        if (!(newton_tol > 0.0)) throw std::invalid_argument("solver config: newton_tol must be > 0");
        if (!(floor_eps >= 0.0)) throw std::invalid_argument("solver config: floor_eps must be >= 0");
        if (max_newton < 2) throw std::invalid_argument("solver config: max_newton must be >= 2");
        if (keep_every < 1) throw std::invalid_argument("solver config: keep_every must be >= 1");
    }
};

}  // namespace dnl
