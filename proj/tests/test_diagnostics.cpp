#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dnl/diagnostics.hpp"
#include "dnl/exact_solutions.hpp"
#include "dnl/solver.hpp"

using namespace dnl;

namespace {

SolutionSource constant_source(double c, ExponentTriple e = ExponentTriple(2.0, 2.0, 3)) {
    return SolutionSource(
        "constant", e, e.n_dim() >= 2, [c](double, double) { return c; }, [](double, double) { return 0.0; },
        [](double, double) -> std::optional<std::string> { return std::nullopt; });
}

Field bump(const Grid1D& g, double amplitude, double radius) {
    return Field::sample(g, 0.0, [&](double r) {
        const double s = r / radius;
        return s < 1.0 ? amplitude * (1.0 - s * s) * (1.0 - s * s) : 0.0;
    });
}

// Radial N = 3, p = 2, q = 2 (inside the Harnack window) with zero boundary data on the unit ball.
Trajectory supercritical_run(int n_cells, double t_end, double dt = 1e-3) {
    const auto g = Grid1D::radial(3, 1.0, n_cells);
    CauchyDirichletProblem pb(ExponentTriple(2.0, 2.0, 3), g, bump(g, 1.0, 0.9), Boundary::zero(), t_end);
    SolverConfig cfg;
    cfg.dt = dt;
    return solve(pb, cfg);
}

const Trajectory& extinction_run() {
    // Fine steps: the implicit tail lags the true extinction time by a few steps.
    static const Trajectory tr = supercritical_run(100, 0.12, 2e-5);
    return tr;
}

}  // namespace

TEST(Diagnostics, BallQuadratureMeasuresVolumes) {
    const auto src = constant_source(1.0);
    const double ball = 4.0 / 3.0 * std::numbers::pi;
    EXPECT_NEAR(ball_quadrature(src, 0.0, 1.0).volume, ball, 1e-10);
    EXPECT_NEAR(ball_quadrature(src, 0.7, 1.0).volume, ball, 1e-6);
    EXPECT_NEAR(ball_quadrature(src, 3.0, 0.5).volume, ball * 0.125, 1e-6);
    // Mean of |x|^2 over the ball of radius 1 centred at distance 2: 4 + 3/5.
    EXPECT_NEAR(ball_quadrature(src, 2.0, 1.0).mean([](double r) { return r * r; }), 4.6, 1e-6);
}

TEST(Diagnostics, ConstantSolutionHasUnitHarnackConstant) {
    const auto rep = harnack_scan(constant_source(2.5), {{0.0, 1.0}, {0.5, 2.0}}, std::vector<double>{0.1, 0.2, 0.4});
    for (const auto& r : rep.rows) EXPECT_DOUBLE_EQ(r.implied, 1.0);
    EXPECT_EQ(rep.verdict, Verdict::bounded);
    EXPECT_DOUBLE_EQ(rep.implied_constant, 1.0);
}

TEST(Diagnostics, HarnackRejectsBadProbes) {
    const auto tg = SolutionSource::closed_form(ClosedFormSolution::trudinger_gaussian(2.0, 1));
    EXPECT_THROW(harnack_scan(tg, {{0.0, 0.1}}, {1.0}, 0.5), DomainError);  // cylinder reaches t <= 0
    EXPECT_THROW(harnack_scan(tg, {{0.0, 1.0}}, {1.0}, 1.5), std::invalid_argument);
    EXPECT_THROW(harnack_scan(constant_source(0.0), {{0.0, 1.0}}, std::vector<double>{1.0}), DomainError);
}

TEST(Diagnostics, TrudingerEdgeRatioAndDivergence) {
    const auto tg = SolutionSource::closed_form(ClosedFormSolution::trudinger_gaussian(2.0, 1));
    const std::vector<double> ells = {1.0, 2.0, 5.0, 10.0, 20.0};
    std::vector<HarnackProbe> probes;
    for (std::size_t k = 0; k < ells.size(); ++k) probes.push_back({ells[k], 2.0, 1.0, static_cast<int>(k)});
    const auto rep = harnack_scan(tg, probes);
    const auto edge = rep.column("edge_ratio");
    for (std::size_t k = 0; k < ells.size(); ++k) {
        const double expected = std::exp((2.0 * ells[k] + 1.0) / 8.0);
        EXPECT_NEAR(edge[k] / expected, 1.0, 1e-6);
        EXPECT_GE(rep.rows[k].implied, expected * (1 - 1e-12));
    }
    EXPECT_EQ(rep.verdict, Verdict::diverging);
}

TEST(Diagnostics, ScalingInvariance) {
    // One-dimensional profile with q + 1 - p = 1 so the time scale depends on u_o.
    const ExponentTriple e(2.0, 2.0, 1);
    const SolutionSource src(
        "profile", e, false, [](double x, double t) { return (1.0 + 0.3 * x * x) * std::exp(-0.2 * t) + 0.1 * x; },
        [](double x, double t) { return 0.6 * x * std::exp(-0.2 * t) + 0.1; },
        [](double, double) -> std::optional<std::string> { return std::nullopt; });
    const double x_o = 0.7, t_o = 1.3, rho = 0.4;
    const double u_o = src.value(x_o, t_o);
    const auto scaled = src.rescaled(x_o, t_o, rho, u_o * rho * rho, u_o);
    HarnackOptions opt;
    opt.refinement_check = false;
    const auto a = harnack_scan(src, {{x_o, t_o, rho, 0}}, opt);
    const auto b = harnack_scan(scaled, {{0.0, 0.0, 1.0, 0}}, opt);
    EXPECT_NEAR(a.rows[0].implied, b.rows[0].implied, 1e-10);
}

TEST(Diagnostics, BorderlineRadiusScanDiverges) {
    const auto bb = SolutionSource::closed_form(ClosedFormSolution::boundedness_borderline(3, 2.0, 10.0, 1.0));
    std::vector<HarnackProbe> probes;
    int k = 0;
    for (double rho : {4.0, 8.0, 12.0, 16.0, 19.0, 19.9}) probes.push_back({0.0, 0.0, rho, k++});
    const auto rep = harnack_scan(bb, probes);
    EXPECT_EQ(rep.verdict, Verdict::diverging);
}

TEST(Diagnostics, CriticalWaveBackwardInTimeDiverges) {
    const auto wave = SolutionSource::closed_form(ClosedFormSolution::critical_harnack_wave(3, 2.0));
    std::vector<HarnackProbe> probes;
    int k = 0;
    for (double t : {1.0, 0.5, 0.0, -0.5, -1.0}) probes.push_back({0.0, t, 1.0, k++});
    const auto rep = harnack_scan(wave, probes);
    EXPECT_EQ(rep.verdict, Verdict::diverging);
}

TEST(Diagnostics, SupercriticalRunHarnackBounded) {
    const auto& tr = extinction_run();
    const auto src = SolutionSource::trajectory(tr);
    std::vector<HarnackProbe> probes;
    for (double s : {0.0, 0.2, 0.4}) {
        int k = 0;
        for (double rho : {0.025, 0.05, 0.1, 0.2}) probes.push_back({s, 0.03, rho, k++});
    }
    const auto rep = harnack_scan(src, probes);
    EXPECT_EQ(rep.rows.size(), 12u);
    EXPECT_EQ(rep.verdict, Verdict::bounded);
    EXPECT_LT(rep.implied_constant, 2.0);
}

TEST(Diagnostics, TrajectorySourceInterpolatesAndBoundsDomain) {
    const auto& tr = extinction_run();
    const auto src = SolutionSource::trajectory(tr);
    const auto& g = tr.grid();
    EXPECT_DOUBLE_EQ(src.value(g.center(10), 0.0), tr.fields().front()[10]);
    EXPECT_DOUBLE_EQ(src.value(-g.center(10), 0.0), tr.fields().front()[10]);
    EXPECT_NEAR(src.value(1.0, 0.05), 0.0, 1e-15);
    EXPECT_THROW(src.value(1.2, 0.05), DomainError);
    EXPECT_THROW(src.value(0.5, 0.13), DomainError);
    EXPECT_TRUE(src.gradient_first_order());
}

TEST(Diagnostics, GradientOfLinearProfile) {
    const ExponentTriple e(2.0, 1.0, 1);
    const SolutionSource lin(
        "linear", e, false, [](double x, double) { return 1.0 + 0.5 * x; }, [](double, double) { return 0.5; },
        [](double, double) -> std::optional<std::string> { return std::nullopt; });
    const auto rep = gradient_bound(lin, {{1.0, 0.0, 0.2, 0}, {2.0, 0.0, 0.4, 1}});
    EXPECT_DOUBLE_EQ(rep.rows[0].implied, 0.5 * 0.2 / 1.5);
    EXPECT_DOUBLE_EQ(rep.rows[1].implied, 0.5 * 0.4 / 2.0);
    EXPECT_EQ(rep.verdict, Verdict::bounded);
}

TEST(Diagnostics, SteadyProfileGradientBounded) {
    const auto src = SolutionSource::steady_radial(ExponentTriple(2.0, 2.0, 3), 0.1, 1.0, 1e-3, 100.0);
    std::vector<HarnackProbe> probes;
    int k = 0;
    for (double r : {0.5, 1.0, 2.0, 4.0}) probes.push_back({r, 0.0, r / 16.0, k++});
    const auto rep = gradient_bound(src, probes);
    EXPECT_EQ(rep.verdict, Verdict::bounded);
    for (std::size_t j = 0; j < probes.size(); ++j) {
        const double r = probes[j].s_o, rho = probes[j].rho;
        const double expected = rho / ((r - rho) * (r - rho)) / (0.1 + 1.0 / r);
        EXPECT_NEAR(rep.rows[j].implied / expected, 1.0, 1e-12);
    }
}

TEST(Diagnostics, TrudingerGradientRatioIsHalfDistance) {
    const auto tg = SolutionSource::closed_form(ClosedFormSolution::trudinger_gaussian(2.0, 1));
    std::vector<HarnackProbe> probes;
    int k = 0;
    for (double n : {1.0, 2.0, 4.0, 8.0, 16.0}) probes.push_back({n, 1.0, 1.0, k++});
    GradientOptions opt;
    opt.mode = GradientMode::centre_point;
    opt.check_inclusion = false;
    const auto rep = gradient_bound(tg, probes, opt);
    for (std::size_t j = 0; j < probes.size(); ++j) EXPECT_NEAR(rep.rows[j].implied / (probes[j].s_o / 2.0), 1.0, 1e-8);
    EXPECT_EQ(rep.verdict, Verdict::diverging);
    opt.check_inclusion = true;
    EXPECT_THROW(gradient_bound(tg, probes, opt), DomainError);
}

TEST(Diagnostics, CriticalWaveGradientDivergesWithRadius) {
    const auto wave = SolutionSource::closed_form(ClosedFormSolution::critical_harnack_wave(3, 2.0));
    std::vector<HarnackProbe> probes;
    int k = 0;
    for (double rho : {1.0, 2.0, 3.0, 4.0, 5.0}) probes.push_back({0.0, 0.0, rho, k++});
    GradientOptions opt;
    opt.mode = GradientMode::slice_sup;
    const auto rep = gradient_bound(wave, probes, opt);
    EXPECT_EQ(rep.verdict, Verdict::diverging);
    // u(., 0) = (r^2 + 1)^{-1/2}: slice sup of |u_r| is 2/3^{3/2} once rho >= 1/sqrt(2).
    for (std::size_t j = 0; j < probes.size(); ++j)
        EXPECT_NEAR(rep.rows[j].implied / (probes[j].rho * 2.0 / std::pow(3.0, 1.5)), 1.0, 0.05);
}

TEST(Diagnostics, IntegralHarnackConstantAndRegime) {
    const auto rep = integral_harnack(constant_source(1.5), {{0.0, 1.0, 0.5, 0.2, 0}});
    EXPECT_TRUE(std::isfinite(rep.implied_constant));
    EXPECT_GT(rep.implied_constant, 0.0);
    EXPECT_NEAR(rep.column("inf_slice_mean_uq")[0], 1.5 * 1.5, 1e-12);
    const auto blow = SolutionSource::closed_form(ClosedFormSolution::separable_blowup(3, 2.0, 6.0, 1.0));
    EXPECT_THROW(integral_harnack(blow, {{2.0, 0.0, 0.5, 0.2, 0}}), RegimeError);
}

TEST(Diagnostics, IntegralHarnackStableUnderRefinement) {
    const auto coarse = supercritical_run(100, 0.06);
    const auto fine = supercritical_run(200, 0.06);
    std::vector<CylinderProbe> probes = {{0.0, 0.05, 0.1, 0.01, 0}, {0.0, 0.05, 0.2, 0.02, 1}, {0.0, 0.05, 0.4, 0.04, 2}};
    const auto a = integral_harnack(SolutionSource::trajectory(coarse), probes);
    const auto b = integral_harnack(SolutionSource::trajectory(fine), probes);
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const double ratio = a.rows[k].implied / b.rows[k].implied;
        EXPECT_LT(ratio, 2.0);
        EXPECT_GT(ratio, 0.5);
    }
}

TEST(Diagnostics, SupBoundConstantRegimeAndStability) {
    EXPECT_TRUE(std::isfinite(sup_bound(constant_source(2.0), {{0.0, 1.0, 0.5, 0.2, 0}}, 3.0).implied_constant));
    EXPECT_THROW(sup_bound(constant_source(2.0), {{0.0, 1.0, 0.5, 0.2, 0}}, 1.0), RegimeError);  // lambda_1 = -1
    EXPECT_THROW(sup_bound(constant_source(2.0), {{0.0, 1.0, 0.5, 0.2, 0}}, 0.5), std::invalid_argument);
    const auto coarse = supercritical_run(100, 0.06);
    const auto fine = supercritical_run(200, 0.06);
    const std::vector<CylinderProbe> probes = {{0.0, 0.05, 0.2, 0.02, 0}};
    const double a = sup_bound(SolutionSource::trajectory(coarse), probes, 3.0).implied_constant;
    const double b = sup_bound(SolutionSource::trajectory(fine), probes, 3.0).implied_constant;
    EXPECT_NEAR(a / b, 1.0, 0.5);
}

TEST(Diagnostics, ExpansionOfPositivity) {
    const auto flat = expansion_of_positivity(constant_source(0.8), 0.0, 0.0, 0.1, 0.8, 0.5);
    for (const auto& r : flat.rows) EXPECT_DOUBLE_EQ(r.implied, 1.0);
    EXPECT_EQ(flat.verdict, Verdict::bounded);

    // Bump supported in |x| < 0.1: zero on K_{2 rho} \ K_rho at t_o.
    const auto g = Grid1D::radial(3, 1.0, 200);
    CauchyDirichletProblem pb(ExponentTriple(2.0, 2.0, 3), g, bump(g, 1.0, 0.1), Boundary::zero(), 0.01);
    SolverConfig cfg;
    cfg.dt = 1e-4;
    const auto src = SolutionSource::trajectory(solve(pb, cfg));
    const auto rep = expansion_of_positivity(src, 0.0, 0.0, 0.1, 0.25, 0.3);
    EXPECT_EQ(rep.verdict, Verdict::bounded);
    EXPECT_GT(rep.implied_constant, 0.0);
    EXPECT_THROW(expansion_of_positivity(src, 0.0, 0.0, 0.1, 0.9, 0.5), DomainError);
}

TEST(Diagnostics, ExtinctionAnalysisOfSupercriticalRun) {
    const auto rep = extinction_analysis(extinction_run(), {0.0, 0.3, 0.6});
    EXPECT_TRUE(std::isfinite(rep.value("T_num")));
    EXPECT_EQ(rep.value("v_non_increasing"), 1.0);
    EXPECT_LE(rep.value("max_relative_excess"), 0.05);
    EXPECT_LE(rep.value("T_num"), rep.value("T_bound"));
    EXPECT_EQ(rep.verdict, Verdict::bounded);
    EXPECT_EQ(rep.rows.size(), 3u * 4u * 2u);
}

TEST(Diagnostics, ExtinctionRequiresZeroBoundaryAndFastDiffusion) {
    const auto g = Grid1D::cartesian(0.0, 1.0, 20);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    const auto dir = solve(CauchyDirichletProblem(ExponentTriple(2.0, 2.0, 1), g, Field(g, 0.0, std::vector<double>(20, 1.0)),
                                                  Boundary::dirichlet(1.0), 0.02),
                           cfg);
    EXPECT_THROW(extinction_analysis(dir, {0.5}), std::invalid_argument);
    const auto slow = solve(CauchyDirichletProblem(ExponentTriple(3.0, 1.0, 1), g, bump(g, 1.0, 0.9), Boundary::zero(), 0.02), cfg);
    EXPECT_THROW(extinction_analysis(slow, {0.5}), RegimeError);
}

TEST(Diagnostics, ExtinctionWithoutExtinctionIsInconclusive) {
    const auto tr = supercritical_run(50, 0.01);
    const auto rep = extinction_analysis(tr, {0.0});
    EXPECT_EQ(rep.verdict, Verdict::inconclusive);
    EXPECT_TRUE(std::isnan(rep.value("T_num")));
}

TEST(Diagnostics, ClosedFormExtinctionVanishesAtItsTime) {
    const auto sol = ClosedFormSolution::supercritical_extinction(3, 2.0, 4.0, 1.0, 1.0);
    const auto src = SolutionSource::closed_form(sol);
    EXPECT_GT(src.value(0.0, 1.0 - 1e-3), 0.0);
    EXPECT_EQ(src.value(0.0, 1.0), 0.0);
}

TEST(Diagnostics, DecayFitRecoversTheFamilyExponent) {
    // u(0, t) is an exact power of (T - t); the fit returns that power.
    const auto sol = ClosedFormSolution::supercritical_extinction(3, 2.0, 4.0, 1.0, 1.0);
    const auto fit = fit_decay_exponent(SolutionSource::closed_form(sol), 0.0, 1.0, {1e-3, 3e-3, 1e-2, 3e-2, 1e-1});
    const double lam = lambda_r(sol.exponents(), 4.0);
    EXPECT_NEAR(fit.slope, (1.0 - 2.0 * 4.0 / lam) / 3.0, 1e-9);
    EXPECT_NEAR(fit.expected, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(Diagnostics, HolderFitAffineIsDegenerate) {
    const ExponentTriple e(2.0, 2.0, 1);
    const SolutionSource aff(
        "affine", e, false, [](double x, double) { return 2.0 + x; }, [](double, double) { return 1.0; },
        [](double, double) -> std::optional<std::string> { return std::nullopt; });
    const auto res = holder_fit(aff, 0.0, 0.0, 0.5, {0.05, 0.1, 0.2, 0.4});
    EXPECT_TRUE(res.degenerate);
    EXPECT_TRUE(std::isinf(res.alpha_fit));
    EXPECT_EQ(res.report.verdict, Verdict::inconclusive);
    EXPECT_NEAR(res.lipschitz_const, 0.25, 1e-12);  // |slope| rho / u_o
    EXPECT_THROW(holder_fit(aff, 0.0, 0.0, 0.5, {0.1, 0.2, 0.4}), std::invalid_argument);
}

TEST(Diagnostics, HolderFitSmoothClosedForm) {
    const auto tg = SolutionSource::closed_form(ClosedFormSolution::trudinger_gaussian(2.0, 1));
    const auto res = holder_fit(tg, 0.5, 1.0, 0.4, {0.025, 0.05, 0.1, 0.2, 0.4});
    EXPECT_GE(res.alpha_fit, 0.9);
    EXPECT_LE(res.alpha_fit, 1.0);
}

TEST(Diagnostics, HolderFitStableUnderRefinement) {
    const std::vector<double> radii = {0.02, 0.04, 0.08, 0.16};
    const auto a = holder_fit(SolutionSource::trajectory(supercritical_run(200, 0.08)), 0.3, 0.05, 0.16, radii);
    const auto b = holder_fit(SolutionSource::trajectory(supercritical_run(400, 0.08)), 0.3, 0.05, 0.16, radii);
    for (const auto* r : {&a, &b}) {
        EXPECT_GT(r->alpha_fit, 0.0);
        EXPECT_LE(r->alpha_fit, 1.0);
        EXPECT_GE(r->r_squared, 0.9);
    }
    EXPECT_LT(std::abs(a.alpha_fit - b.alpha_fit), 0.1);
}

TEST(Diagnostics, VerdictRules) {
    auto rows = [](std::vector<std::pair<int, double>> v) {
        std::vector<ReportRow> out;
        for (auto [s, x] : v) out.push_back({0, s, {}, x, 1.0, x});
        return out;
    };
    EXPECT_EQ(classify_rows(rows({{0, 1.0}, {1, 1.9}})), Verdict::bounded);
    EXPECT_EQ(classify_rows(rows({{0, 1.0}, {1, 2.0}, {2, 3.0}})), Verdict::inconclusive);  // only 3 scales
    EXPECT_EQ(classify_rows(rows({{0, 1.0}, {1, 2.0}, {2, 3.0}, {3, 4.0}})), Verdict::diverging);
    EXPECT_EQ(classify_rows(rows({{0, 1.0}, {1, 3.0}, {2, 2.0}, {3, 4.0}})), Verdict::inconclusive);  // not monotone
    EXPECT_EQ(classify_rows(rows({{0, 1.0}, {1, 1.5}, {2, 1.5}, {3, 4.0}})), Verdict::inconclusive);
}

TEST(Diagnostics, CsvAndSummary) {
    const auto rep = harnack_scan(constant_source(1.0), {{0.0, 1.0}}, std::vector<double>{0.1, 0.2});
    std::ostringstream os;
    rep.write_csv(os);
    const auto text = os.str();
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "probe,scale,s_o,t_o,rho,sigma,u_o,time_half_width,sup_u,inf_u,edge_ratio,lhs,rhs,implied_constant");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
    EXPECT_EQ(rep.summary_line(), "harnack,bounded,1");
}

TEST(Diagnostics, ReportsAreDeterministic) {
    const auto src = SolutionSource::trajectory(extinction_run());
    std::vector<HarnackProbe> probes = {{0.1, 0.05, 0.1, 0}, {0.2, 0.05, 0.05, 1}};
    std::ostringstream a, b;
    harnack_scan(src, probes).write_csv(a);
    harnack_scan(src, probes).write_csv(b);
    EXPECT_EQ(a.str(), b.str());
}
