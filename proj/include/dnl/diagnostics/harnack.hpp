#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dnl/diagnostics/report.hpp"
#include "dnl/diagnostics/source.hpp"
#include "dnl/solver/sweep.hpp"

namespace dnl {

struct HarnackProbe {
    double s_o = 0.0;
    double t_o = 0.0;
    double rho = 1.0;
    int scale = 0;
};

/// Which value sets the time half-width of the cylinder: u(x_o,t_o), or sup_{K_rho} u(., t_o).
enum class HarnackTimeScale { point_value, slice_sup };

struct HarnackOptions {
    double sigma = 0.25;
    int lattice = 32;
    bool refinement_check = true;
    HarnackTimeScale time_scale = HarnackTimeScale::point_value;
};

namespace detail {

inline void require_positive_centre(double u_o, double s_o, double t_o) {
    if (!(u_o > 0.0)) {
        std::ostringstream os;
        os << "probe centre (" << s_o << ", " << t_o << ") has u_o = " << u_o << " <= 0";
        throw DomainError(os.str());
    }
}

inline double harnack_ratio(double u_o, const CylinderExtremes& ext) {
    const double above = ext.sup_u / u_o;
    const double below = ext.inf_u > 0.0 ? u_o / ext.inf_u : std::numeric_limits<double>::infinity();
    return std::max(above, below);
}

inline void note_refinement(DiagnosticReport& rep, double worst) {
    rep.set("lattice_refinement_change", worst);
    if (worst > 0.02) {
        std::ostringstream os;
        os << "doubling the lattice moved an implied constant by " << 100.0 * worst << "% (> 2%)";
        rep.notes.push_back(os.str());
    }
}

inline void note_gradient_accuracy(DiagnosticReport& rep, const SolutionSource& src) {
    if (src.gradient_first_order())
        rep.notes.push_back("gradients interpolated from cell values: O(h) accurate, one-sided at the boundary");
}

}  // namespace detail

/// gamma_emp = max(sup u / u_o, u_o / inf u) over K_rho(x_o) x (t_o -+ sigma u_o^{q+1-p} rho^p).
inline DiagnosticReport harnack_scan(const SolutionSource& src, const std::vector<HarnackProbe>& probes,
                                     const HarnackOptions& opt = {}) {
    if (!(opt.sigma > 0.0 && opt.sigma < 1.0)) throw std::invalid_argument("harnack_scan: sigma must lie in (0,1)");
    if (probes.empty()) throw std::invalid_argument("harnack_scan: no probes");
    const double d = src.exponents().intrinsic_exponent();
    const double p = src.exponents().p();
    DiagnosticReport rep;
    rep.estimate_id = "harnack";
    rep.param_names = {"s_o", "t_o", "rho", "sigma", "u_o", "time_half_width", "sup_u", "inf_u", "edge_ratio"};
    std::ostringstream desc;
    desc << src.description() << "; " << probes.size() << " probes; sigma=" << opt.sigma << "; time scale "
         << (opt.time_scale == HarnackTimeScale::point_value ? "u(x_o,t_o)" : "sup over K_rho at t_o");
    rep.probe_description = desc.str();

    struct Result {
        ReportRow row;
        double change = 0.0;
    };
    auto results = parallel_map(probes.size(), [&](std::size_t k) {
        const auto& pr = probes[k];
        const double u_o = src.value(pr.s_o, pr.t_o);
        detail::require_positive_centre(u_o, pr.s_o, pr.t_o);
        double scale_value = u_o;
        if (opt.time_scale == HarnackTimeScale::slice_sup)
            scale_value = cylinder_extremes(src, pr.s_o, pr.rho, pr.t_o, pr.t_o, opt.lattice, false).sup_u;
        const double half = opt.sigma * std::pow(scale_value, d) * std::pow(pr.rho, p);
        auto measure = [&](int n) {
            return cylinder_extremes(src, pr.s_o, pr.rho, pr.t_o - half, pr.t_o + half, n, false);
        };
        const auto ext = measure(opt.lattice);
        const double gamma = detail::harnack_ratio(u_o, ext);
        Result r;
        if (opt.refinement_check && std::isfinite(gamma))
            r.change = std::abs(detail::harnack_ratio(u_o, measure(2 * opt.lattice)) - gamma) / gamma;
        const double edge = src.value(pr.s_o + pr.rho, pr.t_o);
        const double edge_ratio = edge > 0.0 ? u_o / edge : std::numeric_limits<double>::infinity();
        r.row = {static_cast<int>(k), pr.scale,
                 {pr.s_o, pr.t_o, pr.rho, opt.sigma, u_o, half, ext.sup_u, ext.inf_u, edge_ratio},
                 gamma, 1.0, gamma};
        return r;
    });
    double worst = 0.0;
    for (auto& r : results) {
        rep.rows.push_back(r.row);
        worst = std::max(worst, r.change);
    }
    if (opt.refinement_check) detail::note_refinement(rep, worst);
    rep.finalize();
    return rep;
}

/// Probes at every base point (s_o, t_o) and radius; the scale index is the radius index.
inline DiagnosticReport harnack_scan(const SolutionSource& src, const std::vector<std::pair<double, double>>& base_points,
                                     const std::vector<double>& radii, double sigma = 0.25) {
    std::vector<HarnackProbe> probes;
    for (const auto& [s, t] : base_points)
        for (std::size_t j = 0; j < radii.size(); ++j) probes.push_back({s, t, radii[j], static_cast<int>(j)});
    HarnackOptions opt;
    opt.sigma = sigma;
    return harnack_scan(src, probes, opt);
}

/// Backward cylinder K_rho(x_o) x (t_o - s, t_o].
struct CylinderProbe {
    double s_o = 0.0;
    double t_o = 0.0;
    double rho = 1.0;
    double s = 1.0;
    int scale = 0;
};

namespace detail {

inline double time_mean(const std::vector<double>& ts, const std::vector<double>& values) {
    if (ts.size() == 1) return values.front();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) acc += 0.5 * (values[k] + values[k + 1]) * (ts[k + 1] - ts[k]);
    return acc / (ts.back() - ts.front());
}

template <class Core>
DiagnosticReport sup_vs_core(const SolutionSource& src, const std::vector<CylinderProbe>& probes, int n,
                             const std::string& id, const std::vector<std::string>& core_names, Core&& core) {
    if (probes.empty()) throw std::invalid_argument(id + ": no probes");
    DiagnosticReport rep;
    rep.estimate_id = id;
    rep.param_names = {"s_o", "t_o", "rho", "s", "sup_half_cylinder"};
    rep.param_names.insert(rep.param_names.end(), core_names.begin(), core_names.end());
    rep.probe_description = src.description() + "; backward cylinders K_rho x (t_o - s, t_o]";
    auto rows = parallel_map(probes.size(), [&](std::size_t k) {
        const auto& pr = probes[k];
        if (!(pr.rho > 0.0 && pr.s > 0.0)) throw std::invalid_argument(id + ": rho and s must be > 0");
        if (auto v = cylinder_violation(src, pr.s_o, pr.rho, pr.t_o - pr.s, pr.t_o))
            throw DomainError(id + ": cylinder leaves the source domain (" + *v + ")");
        const double sup = cylinder_extremes(src, pr.s_o, 0.5 * pr.rho, pr.t_o - 0.5 * pr.s, pr.t_o, n, false).sup_u;
        std::vector<double> extra;
        const double rhs = core(pr, extra);
        ReportRow row{static_cast<int>(k), pr.scale, {pr.s_o, pr.t_o, pr.rho, pr.s, sup}, sup, rhs,
                      rhs > 0.0 ? sup / rhs : std::numeric_limits<double>::infinity()};
        row.params.insert(row.params.end(), extra.begin(), extra.end());
        return row;
    });
    rep.rows = std::move(rows);
    rep.finalize();
    return rep;
}

}  // namespace detail

/// Implied gamma in sup_{Q_{rho/2,s/2}} u <= gamma [(rho^p/s)^{N/lambda_q} (inf_t avg_{K_rho} u^q)^{p/lambda_q}
/// + (s/rho^p)^{1/(q+1-p)}].
inline DiagnosticReport integral_harnack(const SolutionSource& src, const std::vector<CylinderProbe>& probes,
                                         int lattice_points = 32) {
    const auto& e = src.exponents();
    const double p = e.p(), q = e.q(), d = e.intrinsic_exponent();
    const double lam = lambda_r(e, q);
    if (!(lam > 0.0)) throw RegimeError("integral_harnack: needs lambda_q = N(p-1-q) + qp > 0");
    if (!(d > 0.0)) throw RegimeError("integral_harnack: needs q > p - 1");
    const int n_dim = e.n_dim();
    return detail::sup_vs_core(
        src, probes, lattice_points, "integral_harnack", {"inf_slice_mean_uq", "main_term", "tail_term"},
        [&](const CylinderProbe& pr, std::vector<double>& extra) {
            const auto quad = ball_quadrature(src, pr.s_o, pr.rho);
            double inf_mean = std::numeric_limits<double>::infinity();
            for (double t : lattice(pr.t_o - pr.s, pr.t_o, lattice_points))
                inf_mean = std::min(inf_mean, quad.mean([&](double c) { return std::pow(src.value(c, t), q); }));
            const double ratio = std::pow(pr.rho, p) / pr.s;
            const double main = std::pow(ratio, n_dim / lam) * std::pow(inf_mean, p / lam);
            const double tail = std::pow(1.0 / ratio, 1.0 / d);
            extra = {inf_mean, main, tail};
            return main + tail;
        });
}

/// Implied gamma in sup_{Q_{rho/2,s/2}} u <= gamma [(rho^p/s)^{N/lambda_r} (mean_{Q_{rho,s}} u^r)^{p/lambda_r}
/// + (s/rho^p)^{1/(q+1-p)}].
inline DiagnosticReport sup_bound(const SolutionSource& src, const std::vector<CylinderProbe>& probes, double r,
                                  int lattice_points = 32) {
    const auto& e = src.exponents();
    const double p = e.p(), d = e.intrinsic_exponent();
    if (!(r >= 1.0)) throw std::invalid_argument("sup_bound: needs r >= 1");
    const double lam = lambda_r(e, r);
    if (!(lam > 0.0)) throw RegimeError("sup_bound: needs lambda_r = N(p-q-1) + rp > 0");
    if (!(d > 0.0)) throw RegimeError("sup_bound: needs q > p - 1");
    const int n_dim = e.n_dim();
    auto rep = detail::sup_vs_core(
        src, probes, lattice_points, "sup_bound", {"mean_ur", "main_term", "tail_term"},
        [&](const CylinderProbe& pr, std::vector<double>& extra) {
            const auto quad = ball_quadrature(src, pr.s_o, pr.rho);
            const auto ts = lattice(pr.t_o - pr.s, pr.t_o, lattice_points);
            std::vector<double> slice;
            for (double t : ts) slice.push_back(quad.mean([&](double c) { return std::pow(src.value(c, t), r); }));
            const double mean = detail::time_mean(ts, slice);
            const double ratio = std::pow(pr.rho, p) / pr.s;
            const double main = std::pow(ratio, n_dim / lam) * std::pow(mean, p / lam);
            const double tail = std::pow(1.0 / ratio, 1.0 / d);
            extra = {mean, main, tail};
            return main + tail;
        });
    rep.set("r", r);
    return rep;
}

struct ExpansionOptions {
    std::vector<double> deltas = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
    int lattice = 32;
};

/// eta(delta) = inf u / M over K_{2 rho}(x_o) x [t_o + delta/2 M^{q+1-p} rho^p, t_o + delta M^{q+1-p} rho^p],
/// given |{u(., t_o) >= M} cap K_rho| >= alpha |K_rho|.
inline DiagnosticReport expansion_of_positivity(const SolutionSource& src, double s_o, double t_o, double rho, double m_level,
                                                double alpha, const ExpansionOptions& opt = {}) {
    if (!(rho > 0.0 && m_level > 0.0)) throw std::invalid_argument("expansion_of_positivity: rho and M must be > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("expansion_of_positivity: alpha must lie in (0,1)");
    const double p = src.exponents().p(), d = src.exponents().intrinsic_exponent();
    const auto quad = ball_quadrature(src, s_o, rho, 256);
    const double fraction = quad.mean([&](double c) { return src.value(c, t_o) >= m_level ? 1.0 : 0.0; });
    if (fraction < alpha) {
        std::ostringstream os;
        os << "expansion_of_positivity: measure hypothesis fails at t_o = " << t_o << ": |{u >= M} cap K_rho| / |K_rho| = "
           << fraction << " < alpha = " << alpha;
        throw DomainError(os.str());
    }
    DiagnosticReport rep;
    rep.estimate_id = "expansion";
    rep.param_names = {"s_o", "t_o", "rho", "M", "alpha", "delta", "t_lo", "t_hi", "inf_u"};
    std::ostringstream desc;
    desc << src.description() << "; M=" << m_level << " alpha=" << alpha << " rho=" << rho;
    rep.probe_description = desc.str();
    rep.set("measured_fraction", fraction);
    const double unit = std::pow(m_level, d) * std::pow(rho, p);
    int k = 0;
    for (double delta : opt.deltas) {
        const double t_hi = t_o + delta * unit, t_lo = t_o + 0.5 * delta * unit;
        if (auto v = cylinder_violation(src, s_o, 8.0 * rho, t_o, t_hi)) {
            std::ostringstream os;
            os << "delta=" << delta << " skipped: K_8rho x (t_o, t_o + delta M^{q+1-p} rho^p] leaves the domain (" << *v << ")";
            rep.notes.push_back(os.str());
            ++k;
            continue;
        }
        const double inf_u = cylinder_extremes(src, s_o, 2.0 * rho, t_lo, t_hi, opt.lattice, false).inf_u;
        const double eta = std::max(inf_u, 0.0) / m_level;
        rep.rows.push_back({k, k, {s_o, t_o, rho, m_level, alpha, delta, t_lo, t_hi, inf_u}, eta, 1.0, eta});
        ++k;
    }
    rep.implied_constant = 0.0;
    for (const auto& r : rep.rows) rep.implied_constant = std::max(rep.implied_constant, r.implied);
    rep.verdict = rep.implied_constant > 0.0 ? Verdict::bounded : Verdict::inconclusive;
    if (rep.rows.empty()) rep.notes.push_back("no scanned delta had forward room in the domain");
    return rep;
}

}  // namespace dnl
