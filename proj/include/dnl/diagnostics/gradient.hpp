#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dnl/diagnostics/harnack.hpp"
#include "dnl/fit.hpp"

namespace dnl {

enum class GradientMode {
    cylinder_sup,  // sup over Q_o = K_rho x (t_o -+ u_o^{q+1-p} rho^p)
    slice_sup,     // sup over K_rho x {t_o}: a lower bound for the cylinder sup
    centre_point,  // |Du(x_o, t_o)| only
};

inline std::string to_string(GradientMode m) {
    switch (m) {
        case GradientMode::cylinder_sup: return "cylinder_sup";
        case GradientMode::slice_sup: return "slice_sup";
        case GradientMode::centre_point: return "centre_point";
    }
    return "cylinder_sup";
}

struct GradientOptions {
    GradientMode mode = GradientMode::cylinder_sup;
    double enlargement = 8.0;
    bool check_inclusion = true;
    int lattice = 32;
    bool refinement_check = true;
};

/// K_emp = sup_{Q_o} |Du| rho / u_o per probe.
inline DiagnosticReport gradient_bound(const SolutionSource& src, const std::vector<HarnackProbe>& probes,
                                       const GradientOptions& opt = {}) {
    if (probes.empty()) throw std::invalid_argument("gradient_bound: no probes");
    if (!(opt.enlargement >= 1.0)) throw std::invalid_argument("gradient_bound: enlargement must be >= 1");
    const double d = src.exponents().intrinsic_exponent(), p = src.exponents().p();
    DiagnosticReport rep;
    rep.estimate_id = "gradient";
    rep.param_names = {"s_o", "t_o", "rho", "u_o", "time_half_width", "sup_grad"};
    std::ostringstream desc;
    desc << src.description() << "; " << probes.size() << " probes; mode " << to_string(opt.mode);
    if (opt.check_inclusion) desc << "; enlarged cylinder factor " << opt.enlargement;
    else desc << "; enlarged-cylinder inclusion not checked";
    rep.probe_description = desc.str();

    struct Result {
        ReportRow row;
        double change = 0.0;
    };
    auto results = parallel_map(probes.size(), [&](std::size_t k) {
        const auto& pr = probes[k];
        const double u_o = src.value(pr.s_o, pr.t_o);
        detail::require_positive_centre(u_o, pr.s_o, pr.t_o);
        const double half = std::pow(u_o, d) * std::pow(pr.rho, p);
        if (opt.check_inclusion) {
            const double big = opt.enlargement * pr.rho;
            const double big_half = std::pow(u_o, d) * std::pow(big, p);
            if (auto v = cylinder_violation(src, pr.s_o, big, pr.t_o - big_half, pr.t_o + big_half)) {
                std::ostringstream os;
                os << "gradient_bound: enlarged cylinder around (" << pr.s_o << ", " << pr.t_o << ") with rho = " << pr.rho
                   << " leaves the source domain (" << *v << ")";
                throw DomainError(os.str());
            }
        }
        Result r;
        double sup_grad = 0.0;
        if (opt.mode == GradientMode::centre_point) {
            sup_grad = std::abs(src.gradient(pr.s_o, pr.t_o));
        } else {
            const double lo = opt.mode == GradientMode::slice_sup ? pr.t_o : pr.t_o - half;
            const double hi = opt.mode == GradientMode::slice_sup ? pr.t_o : pr.t_o + half;
            sup_grad = cylinder_extremes(src, pr.s_o, pr.rho, lo, hi, opt.lattice, true).sup_abs_grad;
            if (opt.refinement_check && sup_grad > 0.0) {
                const double fine = cylinder_extremes(src, pr.s_o, pr.rho, lo, hi, 2 * opt.lattice, true).sup_abs_grad;
                r.change = std::abs(fine - sup_grad) / sup_grad;
            }
        }
        const double k_emp = sup_grad * pr.rho / u_o;
        r.row = {static_cast<int>(k), pr.scale, {pr.s_o, pr.t_o, pr.rho, u_o, half, sup_grad}, sup_grad, u_o / pr.rho, k_emp};
        return r;
    });
    double worst = 0.0;
    for (auto& r : results) {
        rep.rows.push_back(r.row);
        worst = std::max(worst, r.change);
    }
    if (opt.mode != GradientMode::centre_point && opt.refinement_check) detail::note_refinement(rep, worst);
    detail::note_gradient_accuracy(rep, src);
    rep.finalize();
    return rep;
}

struct HolderResult {
    double alpha_fit = 0.0;  // min(slope, 1); +inf when every oscillation vanishes
    double slope = 0.0;
    double r_squared = 0.0;
    double lipschitz_const = 0.0;
    bool degenerate = false;
    DiagnosticReport report;
};

inline constexpr double kDegenerateOscillation = 1e-12;

/// Fits osc_{Q_r} Du ~ r^alpha over intrinsic sub-cylinders Q_r = K_r x (t_o -+ u_o^{q+1-p} r^p), and measures
/// the Lipschitz constant of u on Q_rho in the intrinsic distance |x1-x2|/rho + sqrt(|t1-t2|/(u_o^{q+1-p} rho^p)).
inline HolderResult holder_fit(const SolutionSource& src, double s_o, double t_o, double rho, const std::vector<double>& radii,
                               int lattice_points = 32) {
    if (radii.size() < 4) throw std::invalid_argument("holder_fit: needs at least 4 radii");
    for (double r : radii)
        if (!(r > 0.0 && r <= rho)) throw std::invalid_argument("holder_fit: radii must lie in (0, rho]");
    const double d = src.exponents().intrinsic_exponent(), p = src.exponents().p();
    const double u_o = src.value(s_o, t_o);
    detail::require_positive_centre(u_o, s_o, t_o);
    const double time_unit = std::pow(u_o, d);

    HolderResult out;
    auto& rep = out.report;
    rep.estimate_id = "holder";
    rep.param_names = {"s_o", "t_o", "r", "u_o", "osc_grad"};
    std::ostringstream desc;
    desc << src.description() << "; centre (" << s_o << ", " << t_o << "), rho=" << rho << ", " << radii.size() << " radii";
    rep.probe_description = desc.str();

    auto osc = parallel_map(radii.size(), [&](std::size_t k) {
        const double r = radii[k];
        const double half = time_unit * std::pow(r, p);
        const auto ext = cylinder_extremes(src, s_o, r, t_o - half, t_o + half, lattice_points, true);
        return ext.max_grad - ext.min_grad;
    });

    bool all_flat = true;
    for (double o : osc)
        if (o >= kDegenerateOscillation) all_flat = false;
    std::vector<double> rs, os;
    for (std::size_t k = 0; k < radii.size(); ++k)
        if (osc[k] > 0.0) {
            rs.push_back(radii[k]);
            os.push_back(osc[k]);
        }
    if (all_flat || rs.size() < 2) {
        out.degenerate = true;
        out.alpha_fit = std::numeric_limits<double>::infinity();
        out.slope = std::numeric_limits<double>::infinity();
        rep.notes.push_back("oscillation of Du below 1e-12 at every radius: exponent not measurable");
    } else {
        const auto line = fit_loglog(rs, os);
        out.slope = line.slope;
        out.alpha_fit = std::min(line.slope, 1.0);
        out.r_squared = line.r_squared;
    }

    // Lipschitz constant of u in intrinsic variables over Q_rho.
    {
        const double half = time_unit * std::pow(rho, p);
        const auto ts = lattice(t_o - half, t_o + half, lattice_points);
        const auto xs = lattice(s_o - rho, s_o + rho, lattice_points);
        struct Pt {
            double x, t, u;
        };
        std::vector<Pt> pts;
        for (double t : ts)
            for (double x : xs) pts.push_back({x, t, src.value(x, t)});
        const double t_scale = time_unit * std::pow(rho, p);
        double best = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const double dist =
                    std::abs(pts[i].x - pts[j].x) / rho + std::sqrt(std::abs(pts[i].t - pts[j].t) / t_scale);
                if (dist > 0.0) best = std::max(best, std::abs(pts[i].u - pts[j].u) / (u_o * dist));
            }
        out.lipschitz_const = best;
    }

    for (std::size_t k = 0; k < radii.size(); ++k) {
        const double rhs = out.degenerate ? u_o / rho : u_o / rho * std::pow(radii[k] / rho, out.alpha_fit);
        rep.rows.push_back({static_cast<int>(k), static_cast<int>(k), {s_o, t_o, radii[k], u_o, osc[k]}, osc[k], rhs,
                            osc[k] / rhs});
    }
    rep.implied_constant = 0.0;
    for (const auto& r : rep.rows) rep.implied_constant = std::max(rep.implied_constant, r.implied);
    rep.set("alpha_fit", out.alpha_fit);
    rep.set("slope", out.slope);
    rep.set("r_squared", out.r_squared);
    rep.set("lipschitz_const", out.lipschitz_const);
    if (out.degenerate) rep.verdict = Verdict::inconclusive;
    else rep.verdict = out.alpha_fit > 0.0 && out.r_squared >= 0.9 ? Verdict::bounded : Verdict::inconclusive;
    detail::note_gradient_accuracy(rep, src);
    return out;
}

}  // namespace dnl
