#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dnl/error.hpp"
#include "dnl/g_function.hpp"
#include "dnl/solver/problem.hpp"

namespace dnl {

struct StepStats {
    int newton_iterations = 0;
    int picard_iterations = 0;
    double residual = 0.0;
    double clipped_mass = 0.0;
    bool used_picard = false;
};

namespace detail {

/// Solves a tridiagonal system in place (lower[0] and upper[n-1] unused).
inline bool thomas_solve(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                         std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) return false;
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if (diag[n - 1] == 0.0) return false;
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    for (double v : rhs)
        if (!std::isfinite(v)) return false;
    return true;
}

/// Discrete implicit-Euler operator for one step; everything the Newton and Picard loops need.
class StepOperator {
public:
    StepOperator(const CauchyDirichletProblem& pb, const std::vector<double>& u_prev, double t_new, double dt,
                 const SolverConfig& cfg)
        : pb_(pb), grid_(pb.grid), t_(t_new), dt_(dt), cfg_(cfg), q_(pb.exponents.q()), p_(pb.exponents.p()),
          mu2_(pb.effective_mu() * pb.effective_mu()), n_(grid_.n_cells()), h_(grid_.h()) {
        beta_prev_.resize(n_);
        for (int i = 0; i < n_; ++i) beta_prev_[i] = beta(u_prev[i]);
        scale_ = 0.0;
        for (double b : beta_prev_) scale_ = std::max(scale_, std::abs(b));
        area_.resize(n_ + 1);
        for (int f = 0; f <= n_; ++f) area_[f] = grid_.face_area(f);
        volume_.resize(n_);
        for (int i = 0; i < n_; ++i) volume_[i] = grid_.cell_volume(i);
        face_coef_.resize(n_ + 1);
        std::vector<double> cell_coef(n_);
        const auto& a = pb.coefficient;
        for (int i = 0; i < n_; ++i) {
            cell_coef[i] = a.fn(grid_.center(i), t_);
            if (!(cell_coef[i] >= a.lower * (1 - 1e-12) && cell_coef[i] <= a.upper * (1 + 1e-12))) {
                std::ostringstream os;
                os << "coefficient a(" << grid_.center(i) << ", " << t_ << ") = " << cell_coef[i]
                   << " outside [C_o, C_1] = [" << a.lower << ", " << a.upper << "]";
                throw DomainError(os.str());
            }
        }
        for (int f = 1; f < n_; ++f) {
            const double l = cell_coef[f - 1], r = cell_coef[f];
            face_coef_[f] = cfg.flux_mean == FluxMean::arithmetic ? 0.5 * (l + r) : 2.0 * l * r / (l + r);
        }
        face_coef_[0] = a.fn(grid_.face(0), t_);
        face_coef_[n_] = a.fn(grid_.face(n_), t_);
    }

    double beta(double u) const { return signed_pow(u, q_); }
    double beta_slope(double u) const {
        const double base = std::max(std::abs(u), cfg_.floor_eps);
        if (base == 0.0) return q_ == 1.0 ? 1.0 : 0.0;
        return q_ * std::pow(base, q_ - 1.0);
    }
    double flux(double g) const {
        if (p_ == 2.0) return g;
        if (mu2_ == 0.0) return signed_pow(g, p_ - 1.0);
        return std::pow(mu2_ + g * g, 0.5 * (p_ - 2.0)) * g;
    }
    double flux_slope(double g) const {
        if (p_ == 2.0) return 1.0;
        double g2 = g * g;
        if (mu2_ == 0.0) {
            if (p_ < 2.0) g2 = std::max(g2, 1e-24);
            return (p_ - 1.0) * std::pow(g2, 0.5 * (p_ - 2.0));
        }
        return std::pow(mu2_ + g2, 0.5 * (p_ - 4.0)) * (mu2_ + (p_ - 1.0) * g2);
    }
    /// Frozen diffusivity F(g)/g used by the Picard fallback.
    double diffusivity(double g) const {
        if (p_ == 2.0) return 1.0;
        double g2 = g * g;
        if (mu2_ == 0.0 && p_ < 2.0) g2 = std::max(g2, 1e-24);
        return std::pow(mu2_ + g2, 0.5 * (p_ - 2.0));
    }

    /// Face gradients including boundary faces; dg[f] = (d g_f / d u_left, d g_f / d u_right).
    struct Gradients {
        std::vector<double> g;
        std::vector<double> d_left;   // derivative w.r.t. the cell left of the face (or the ghost rule)
        std::vector<double> d_right;  // derivative w.r.t. the cell right of the face
        bool left_symmetry = false;
    };

    Gradients gradients(const std::vector<double>& u) const {
        Gradients gr;
        gr.g.assign(n_ + 1, 0.0);
        gr.d_left.assign(n_ + 1, 0.0);
        gr.d_right.assign(n_ + 1, 0.0);
        for (int f = 1; f < n_; ++f) {
            gr.g[f] = (u[f] - u[f - 1]) / h_;
            gr.d_left[f] = -1.0 / h_;
            gr.d_right[f] = 1.0 / h_;
        }
        gr.left_symmetry = grid_.left_is_symmetry();
        const bool radial = grid_.is_radial();
        if (!gr.left_symmetry) {
            const auto [ghost, dghost] = pb_.boundary.ghost(0, grid_.face(0), h_, u[0], t_, radial);
            gr.g[0] = (u[0] - ghost) / h_;
            gr.d_right[0] = (1.0 - dghost) / h_;  // only cell 0 is involved
        }
        const auto [ghost, dghost] = pb_.boundary.ghost(1, grid_.face(n_), h_, u[n_ - 1], t_, radial);
        gr.g[n_] = (ghost - u[n_ - 1]) / h_;
        gr.d_left[n_] = (dghost - 1.0) / h_;
        return gr;
    }

    /// r_i = beta(u_i) - beta(u_prev_i) - dt (A F_{i+1} - A F_i) / V_i.
    std::vector<double> residual(const std::vector<double>& u) const {
        const auto gr = gradients(u);
        std::vector<double> face_flux(n_ + 1, 0.0);
        for (int f = 0; f <= n_; ++f) {
            if (f == 0 && gr.left_symmetry) continue;
            face_flux[f] = area_[f] * face_coef_[f] * flux(gr.g[f]);
        }
        std::vector<double> r(n_);
        for (int i = 0; i < n_; ++i)
            r[i] = beta(u[i]) - beta_prev_[i] - dt_ * (face_flux[i + 1] - face_flux[i]) / volume_[i];
        return r;
    }

    double norm(const std::vector<double>& r) const {
        double m = 0.0;
        for (double v : r) m = std::max(m, std::abs(v));
        return m;
    }

    /// Tolerance on max|r| relative to the size of beta(u).
    double tolerance(const std::vector<double>& u) const {
        double s = scale_;
        for (double v : u) s = std::max(s, std::abs(beta(v)));
        return std::max(cfg_.newton_tol, 1e-14) * std::max(s, std::numeric_limits<double>::min());
    }

    // Newton runs in z = u for q >= 1 and in z = |u|^{q-1}u for q < 1, where the slope of
    // u -> |u|^{q-1}u is unbounded at 0 but its inverse is smooth.
    bool newton_in_beta() const { return q_ < 1.0; }
    double u_of(double z) const { return newton_in_beta() ? signed_pow(z, 1.0 / q_) : z; }
    double z_of(double u) const { return newton_in_beta() ? beta(u) : u; }
    double du_dz(double z) const { return newton_in_beta() ? std::pow(std::abs(z), 1.0 / q_ - 1.0) / q_ : 1.0; }
    double dbeta_dz(double z) const { return newton_in_beta() ? 1.0 : beta_slope(z); }

    /// Newton direction in z: J delta = -r. Returns false if the system is singular.
    bool newton_direction(const std::vector<double>& z, const std::vector<double>& r, std::vector<double>& delta) const {
        std::vector<double> u(n_), col(n_);
        for (int i = 0; i < n_; ++i) u[i] = u_of(z[i]), col[i] = du_dz(z[i]);
        const auto gr = gradients(u);
        std::vector<double> lower(n_, 0.0), diag(n_, 0.0), upper(n_, 0.0);
        for (int f = 0; f <= n_; ++f) {
            if (f == 0 && gr.left_symmetry) continue;
            const double w = area_[f] * face_coef_[f] * flux_slope(gr.g[f]);
            // Face f enters r_{f-1} as -c F and r_f as +c F.
            if (f > 0) {
                const double c = dt_ / volume_[f - 1];
                diag[f - 1] -= c * w * gr.d_left[f];
                if (f < n_) upper[f - 1] -= c * w * gr.d_right[f];
            }
            if (f < n_) {
                const double c = dt_ / volume_[f];
                diag[f] += c * w * gr.d_right[f];
                if (f > 0) lower[f] += c * w * gr.d_left[f];
            }
        }
        for (int i = 0; i < n_; ++i) {
            diag[i] = diag[i] * col[i] + dbeta_dz(z[i]);
            if (i > 0) lower[i] *= col[i - 1];
            if (i + 1 < n_) upper[i] *= col[i + 1];
        }
        delta = r;
        for (double& v : delta) v = -v;
        return thomas_solve(lower, diag, upper, delta);
    }

    /// Picard update: diffusivity and beta slope frozen at u, linear solve for the next iterate.
    bool picard_update(const std::vector<double>& u, std::vector<double>& next) const {
        const auto gr = gradients(u);
        std::vector<double> lower(n_, 0.0), diag(n_), upper(n_, 0.0), rhs(n_);
        for (int i = 0; i < n_; ++i) {
            const double s = beta_slope(u[i]);
            diag[i] = s;
            rhs[i] = beta_prev_[i] - beta(u[i]) + s * u[i];
        }
        for (int f = 0; f <= n_; ++f) {
            if (f == 0 && gr.left_symmetry) continue;
            const double w = area_[f] * face_coef_[f] * diffusivity(gr.g[f]);
            // Flux = w * g with g affine in the cells; the constant part (ghost data) goes to the rhs.
            double g_const = gr.g[f];
            if (f > 0) g_const -= gr.d_left[f] * u[f - 1];
            if (f < n_) g_const -= gr.d_right[f] * u[f];
            if (f > 0) {
                const double c = dt_ / volume_[f - 1];
                diag[f - 1] -= c * w * gr.d_left[f];
                if (f < n_) upper[f - 1] -= c * w * gr.d_right[f];
                rhs[f - 1] += c * w * g_const;
            }
            if (f < n_) {
                const double c = dt_ / volume_[f];
                diag[f] += c * w * gr.d_right[f];
                if (f > 0) lower[f] += c * w * gr.d_left[f];
                rhs[f] -= c * w * g_const;
            }
        }
        next = rhs;
        return thomas_solve(lower, diag, upper, next);
    }

    const std::vector<double>& volumes() const { return volume_; }

private:
    const CauchyDirichletProblem& pb_;
    const Grid1D& grid_;
    double t_, dt_;
    const SolverConfig& cfg_;
    double q_, p_, mu2_;
    int n_;
    double h_;
    double scale_ = 0.0;
    std::vector<double> beta_prev_, area_, volume_, face_coef_;
};

}  // namespace detail

/// One implicit Euler step from u_prev (at time u_prev.time()) to u_prev.time() + dt.
/// Damped Newton; after max_newton/2 failed damping rounds, Picard iteration with frozen diffusivity.
/// Negative cells of the converged iterate are set to 0 and their |u|^{q+1} mass recorded.
inline Field step(const CauchyDirichletProblem& pb, const Field& u_prev, double dt, const SolverConfig& cfg,
                  StepStats* stats = nullptr) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    cfg.validate();
    if (!(u_prev.grid() == pb.grid)) throw std::invalid_argument("step: field lives on a different grid");
    for (double v : u_prev.values())
        if (v < 0.0) throw std::invalid_argument("step: u_prev must be >= 0");

    const double t_new = u_prev.time() + dt;
    detail::StepOperator op(pb, u_prev.values(), t_new, dt, cfg);
    StepStats st;

    std::vector<double> u = u_prev.values();
    std::vector<double> z(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) z[i] = op.z_of(u[i]);
    std::vector<double> r = op.residual(u);
    double res = op.norm(r);
    bool converged = res <= op.tolerance(u);
    int failures = 0;
    std::vector<double> delta, z_trial, u_trial(u.size());

    while (!converged && st.newton_iterations < cfg.max_newton && failures < cfg.max_newton / 2) {
        ++st.newton_iterations;
        if (!op.newton_direction(z, r, delta)) {
            ++failures;
            continue;
        }
        double lambda = 1.0;
        bool improved = false;
        for (int halving = 0; halving <= 8; ++halving, lambda *= 0.5) {
            z_trial = z;
            for (std::size_t i = 0; i < z.size(); ++i) {
                z_trial[i] += lambda * delta[i];
                u_trial[i] = op.u_of(z_trial[i]);
            }
            auto r_trial = op.residual(u_trial);
            const double res_trial = op.norm(r_trial);
            if (std::isfinite(res_trial) && res_trial < res) {
                z.swap(z_trial);
                u = u_trial;
                r.swap(r_trial);
                res = res_trial;
                improved = true;
                break;
            }
        }
        if (!improved) {
            ++failures;
            if (failures >= cfg.max_newton / 2) break;
        }
        converged = res <= op.tolerance(u);
    }

    if (!converged) {
        st.used_picard = true;
        const int max_picard = 20 * cfg.max_newton;
        std::vector<double> next;
        while (!converged && st.picard_iterations < max_picard) {
            ++st.picard_iterations;
            if (!op.picard_update(u, next)) break;
            u.swap(next);
            r = op.residual(u);
            res = op.norm(r);
            if (!std::isfinite(res)) break;
            converged = res <= op.tolerance(u);
        }
    }
    st.residual = res;
    if (!converged) {
        std::ostringstream os;
        os << "step to t=" << t_new << " did not converge (Newton " << st.newton_iterations << ", Picard "
           << st.picard_iterations << " iterations, residual " << res << ")";
        throw StepFailure(os.str(), t_new, res);
    }

    const auto& vol = op.volumes();
    const double qp1 = pb.exponents.q() + 1.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] < 0.0) {
            st.clipped_mass += vol[i] * std::pow(-u[i], qp1);
            u[i] = 0.0;
        }
    if (stats) *stats = st;
    return Field(pb.grid, t_new, std::move(u));
}

}  // namespace dnl
