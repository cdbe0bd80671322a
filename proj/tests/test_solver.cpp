#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dnl/exact_solutions.hpp"
#include "dnl/solver.hpp"

using namespace dnl;

namespace {

double exact_at(const ClosedFormSolution& s, double x, double t) {
    const double xs[1] = {x};
    return s.eval(xs, t);
}

double l2_error(const Field& f, const ClosedFormSolution& s, double t) {
    double e = 0.0;
    for (int i = 0; i < f.size(); ++i) {
        const double d = f[i] - exact_at(s, f.grid().center(i), t);
        e += f.grid().cell_volume(i) * d * d;
    }
    return std::sqrt(e);
}

double trudinger_error(int n_cells, double dt) {
    const auto ex = ClosedFormSolution::trudinger_gaussian(2.0, 1);
    const auto grid = Grid1D::cartesian(-2.0, 2.0, n_cells);
    auto u0 = Field::sample(grid, 0.5, [&](double x) { return exact_at(ex, x, 0.5); });
    CauchyDirichletProblem pb(ex.exponents(), grid, u0, Boundary::from_exact(ex), 1.0);
    SolverConfig cfg;
    cfg.dt = dt;
    return l2_error(solve(pb, cfg).final_field(), ex, 1.0);
}

Field bump(const Grid1D& g, double amplitude, double radius) {
    return Field::sample(g, 0.0, [&](double r) {
        const double s = r / radius;
        return s < 1.0 ? amplitude * (1.0 - s * s) * (1.0 - s * s) : 0.0;
    });
}

}  // namespace

TEST(Solver, ZeroDataStaysZero) {
    const auto g = Grid1D::cartesian(0.0, 1.0, 20);
    CauchyDirichletProblem pb(ExponentTriple(3.0, 2.0, 1), g, Field(g, 0.0, std::vector<double>(20, 0.0)),
                              Boundary::zero(), 0.1);
    SolverConfig cfg;
    cfg.dt = 0.01;
    const auto tr = solve(pb, cfg);
    for (double v : tr.final_field().values()) EXPECT_EQ(v, 0.0);
}

TEST(Solver, ConstantWithMatchingBoundaryIsSteady) {
    for (double p : {1.5, 2.0, 3.0})
        for (double q : {0.5, 1.0, 2.0}) {
            const auto g = Grid1D::cartesian(0.0, 1.0, 16);
            CauchyDirichletProblem pb(ExponentTriple(p, q, 1), g, Field(g, 0.0, std::vector<double>(16, 0.7)),
                                      Boundary::dirichlet(0.7), 0.05);
            SolverConfig cfg;
            cfg.dt = 0.01;
            const auto tr = solve(pb, cfg);
            for (double v : tr.final_field().values()) EXPECT_NEAR(v, 0.7, 1e-13) << p << " " << q;
        }
}

TEST(Solver, ZeroEndTimeGivesInitialSliceOnly) {
    const auto g = Grid1D::radial(3, 1.0, 10);
    auto u0 = bump(g, 1.0, 0.8);
    CauchyDirichletProblem pb(ExponentTriple(2.0, 2.0, 3), g, u0, Boundary::zero(), 0.0);
    const auto tr = solve(pb, SolverConfig{});
    ASSERT_EQ(tr.size(), 1u);
    EXPECT_EQ(tr.final_field().values(), u0.values());
}

TEST(Solver, RejectsInvalidInput) {
    const auto g = Grid1D::cartesian(0.0, 1.0, 8);
    std::vector<double> neg(8, 1.0);
    neg[3] = -0.1;
    EXPECT_THROW(CauchyDirichletProblem(ExponentTriple(2.0, 1.0, 1), g, Field(g, 0.0, neg), Boundary::zero(), 1.0),
                 std::invalid_argument);
    CauchyDirichletProblem pb(ExponentTriple(2.0, 1.0, 1), g, Field(g, 0.0, std::vector<double>(8, 1.0)),
                              Boundary::zero(), 1.0);
    EXPECT_THROW(step(pb, pb.initial, -0.1, SolverConfig{}), std::invalid_argument);
    SolverConfig bad;
    bad.dt = 0.0;
    EXPECT_THROW(solve(pb, bad), std::invalid_argument);
    EXPECT_THROW(Coefficient::bounded([](double, double) { return 1.0; }, 0.0, 1.0), std::invalid_argument);
}

TEST(Solver, CoefficientOutsideDeclaredBoundsIsReported) {
    const auto g = Grid1D::cartesian(0.0, 1.0, 8);
    CauchyDirichletProblem pb(ExponentTriple(2.0, 1.0, 1), g, Field(g, 0.0, std::vector<double>(8, 1.0)),
                              Boundary::zero(), 1.0,
                              Coefficient::bounded([](double x, double) { return 1.0 + 3.0 * x; }, 1.0, 2.0));
    EXPECT_THROW(step(pb, pb.initial, 0.1, SolverConfig{}), DomainError);
}

TEST(Solver, ManufacturedSpatialOrder) {
    std::vector<double> errors;
    for (int n : {100, 200, 400}) {
        const double h = 4.0 / n;
        errors.push_back(trudinger_error(n, 0.25 * h * h));
    }
    const double order = fit_loglog({0.04, 0.02, 0.01}, errors).slope;
    EXPECT_GE(order, 1.7);
    EXPECT_LE(order, 2.3);
    EXPECT_GE(errors[0] / errors[1], 2.0);
}

TEST(Solver, ManufacturedTemporalOrder) {
    std::vector<double> errors;
    for (double dt : {4e-3, 2e-3, 1e-3}) errors.push_back(trudinger_error(1600, dt));
    const double order = fit_loglog({4e-3, 2e-3, 1e-3}, errors).slope;
    EXPECT_GE(order, 0.8);
    EXPECT_LE(order, 1.2);
}

TEST(Solver, RefiningBothReducesErrorTwofold) {
    EXPECT_GE(trudinger_error(100, 4e-3) / trudinger_error(200, 2e-3), 2.0);
}

TEST(Solver, SupercriticalFastDiffusionExtinguishes) {
    // p = 2, q = 2, radial N = 3: q exceeds p - 1, finite-time extinction.
    const auto g = Grid1D::radial(3, 1.0, 100);
    CauchyDirichletProblem pb(ExponentTriple(2.0, 2.0, 3), g, bump(g, 1.0, 0.9), Boundary::zero(), 0.5);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    const auto tr = solve(pb, cfg);
    const auto fun = slice_functionals(tr);
    double t_ext = -1.0;
    for (const auto& s : fun)
        if (s.sup_u < 1e-8) {
            t_ext = s.time;
            break;
        }
    EXPECT_GT(t_ext, 0.0);
    EXPECT_LT(t_ext, 0.5);
    for (std::size_t k = 1; k < fun.size(); ++k) EXPECT_LE(fun[k].integral_uq1, fun[k - 1].integral_uq1 * (1 + 1e-12));
    EXPECT_LT(tr.total_clipped_mass(), 1e-10 * fun.front().integral_uq1);
}

TEST(Solver, EnergyDecaysForSeveralExponents) {
    for (auto [p, q] : std::vector<std::pair<double, double>>{{3.0, 2.5}, {1.5, 1.0}, {2.0, 0.5}, {2.5, 1.6}}) {
        const auto g = Grid1D::radial(2, 1.0, 80);
        CauchyDirichletProblem pb(ExponentTriple(p, q, 2), g, bump(g, 1.0, 0.8), Boundary::zero(), 0.2);
        SolverConfig cfg;
        cfg.dt = 2e-3;
        const auto fun = slice_functionals(solve(pb, cfg));
        for (std::size_t k = 1; k < fun.size(); ++k)
            EXPECT_LE(fun[k].integral_uq1, fun[k - 1].integral_uq1 * (1 + 1e-10)) << p << " " << q;
    }
}

TEST(Solver, SliceFunctionalsOfUnitField) {
    const auto cart = Grid1D::cartesian(0.0, 1.0, 10);
    const auto a = slice_functionals(cart, {Field(cart, 0.0, std::vector<double>(10, 1.0))}, 2.0);
    EXPECT_NEAR(a[0].integral_uq, 1.0, 1e-14);
    const auto ball = Grid1D::radial(3, 1.0, 10);
    const auto b = slice_functionals(ball, {Field(ball, 0.0, std::vector<double>(10, 1.0))}, 2.0);
    EXPECT_NEAR(b[0].integral_uq, 4.0 * std::numbers::pi / 3.0, 1e-13);
    EXPECT_NEAR(b[0].integral_uq1, 4.0 * std::numbers::pi / 3.0, 1e-13);
    EXPECT_EQ(b[0].sup_u, 1.0);
    EXPECT_EQ(b[0].sup_grad, 0.0);
}

TEST(Solver, ComparisonIdenticalProblems) {
    const auto g = Grid1D::radial(3, 1.0, 60);
    CauchyDirichletProblem pb(ExponentTriple(2.0, 2.0, 3), g, bump(g, 1.0, 0.8), Boundary::zero(), 0.1);
    SolverConfig cfg;
    cfg.dt = 2e-3;
    const auto v = solve(pb, cfg);
    const auto rep = check_comparison(v, v, 1e-8);
    EXPECT_EQ(rep.max_violation, 0.0);
    EXPECT_TRUE(rep.passes);
}

TEST(Solver, ComparisonHalfInitialData) {
    const auto g = Grid1D::radial(3, 1.0, 60);
    SolverConfig cfg;
    cfg.dt = 2e-3;
    CauchyDirichletProblem big(ExponentTriple(2.0, 2.0, 3), g, bump(g, 1.0, 0.8), Boundary::zero(), 0.2);
    CauchyDirichletProblem small(ExponentTriple(2.0, 2.0, 3), g, bump(g, 0.5, 0.8), Boundary::zero(), 0.2);
    const auto rep = check_comparison(solve(small, cfg), solve(big, cfg), 1e-8);
    EXPECT_LE(rep.max_violation, 1e-8) << rep.describe();
    EXPECT_TRUE(rep.passes);
}

TEST(Solver, ComparisonLinearTimeTermWithBoundaryData) {
    const auto g = Grid1D::cartesian(0.0, 1.0, 80);
    SolverConfig cfg;
    cfg.dt = 2e-3;
    const ExponentTriple e(1.5, 1.0, 1);
    auto w0 = Field::sample(g, 0.0, [](double x) { return 1.0 + std::sin(std::numbers::pi * x); });
    auto v0 = Field::sample(g, 0.0, [](double x) { return 0.5 + 0.5 * std::sin(std::numbers::pi * x); });
    CauchyDirichletProblem w(e, g, w0, Boundary::dirichlet(1.0), 0.2);
    CauchyDirichletProblem v(e, g, v0, Boundary::dirichlet([](double t) { return 0.5 + t; }, [](double) { return 0.2; }),
                             0.2);
    const auto rep = check_comparison(solve(v, cfg), solve(w, cfg), 1e-8);
    EXPECT_LE(rep.max_violation, 1e-8) << rep.describe();
}

TEST(Solver, ComparisonRejectsBrokenHypotheses) {
    const auto g = Grid1D::cartesian(0.0, 1.0, 20);
    SolverConfig cfg;
    cfg.dt = 0.01;
    const ExponentTriple e(2.0, 2.0, 1);
    auto one = Field(g, 0.0, std::vector<double>(20, 1.0));
    auto half = Field(g, 0.0, std::vector<double>(20, 0.5));
    const auto a = solve(CauchyDirichletProblem(e, g, half, Boundary::dirichlet(0.5), 0.05), cfg);
    const auto b = solve(CauchyDirichletProblem(e, g, one, Boundary::dirichlet(1.0), 0.05), cfg);
    EXPECT_THROW(check_comparison(a, b, 1e-8), RegimeError);
    const auto c = solve(CauchyDirichletProblem(e, g, one, Boundary::zero(), 0.05), cfg);
    const auto d = solve(CauchyDirichletProblem(e, g, half, Boundary::zero(), 0.05), cfg);
    EXPECT_THROW(check_comparison(c, d, 1e-8), RegimeError);
    const auto g2 = Grid1D::cartesian(0.0, 1.0, 40);
    const auto other = solve(CauchyDirichletProblem(e, g2, Field(g2, 0.0, std::vector<double>(40, 1.0)),
                                                    Boundary::zero(), 0.05),
                             cfg);
    EXPECT_THROW(check_comparison(d, other, 1e-8), std::invalid_argument);
}

TEST(Solver, TransformOfConstantField) {
    const auto g = Grid1D::cartesian(0.0, 1.0, 10);
    const double c = 0.8, p = 3.0, q = 2.0;
    CauchyDirichletProblem pb(ExponentTriple(p, q, 1), g, Field(g, 0.0, std::vector<double>(10, c)),
                              Boundary::dirichlet(c), 0.05);
    SolverConfig cfg;
    cfg.dt = 0.01;
    const auto tr = transform_to_v(solve(pb, cfg));
    const double a = std::pow(1.0 / q, p - 1.0) * std::pow(c, (p - 1.0) * (1.0 - q));
    for (const auto& f : tr.v_fields)
        for (double v : f.values()) EXPECT_NEAR(v, c * c, 1e-13);
    EXPECT_NEAR(tr.a_min, a, 1e-13);
    EXPECT_NEAR(tr.a_max, a, 1e-13);
}

TEST(Solver, TransformWithUnitTimeExponentIsIdentity) {
    const auto g = Grid1D::cartesian(0.0, 1.0, 40);
    auto u0 = Field::sample(g, 0.0, [](double x) { return 1.0 + x * (1.0 - x); });
    CauchyDirichletProblem pb(ExponentTriple(2.5, 1.0, 1), g, u0, Boundary::dirichlet(1.0), 0.05);
    SolverConfig cfg;
    cfg.dt = 0.01;
    const auto traj = solve(pb, cfg);
    const auto tr = transform_to_v(traj);
    EXPECT_EQ(tr.a_min, 1.0);
    EXPECT_EQ(tr.a_max, 1.0);
    for (std::size_t k = 0; k < tr.v_fields.size(); ++k) EXPECT_EQ(tr.v_fields[k].values(), traj.fields()[k].values());
}

TEST(Solver, TransformRejectsNonPositiveValues) {
    const auto g = Grid1D::radial(3, 1.0, 40);
    CauchyDirichletProblem pb(ExponentTriple(2.0, 2.0, 3), g, bump(g, 1.0, 0.5), Boundary::zero(), 0.01);
    SolverConfig cfg;
    cfg.dt = 0.005;
    const auto traj = solve(pb, cfg);
    EXPECT_THROW(transform_to_v(traj), DomainError);
    EXPECT_NO_THROW(transform_to_v(traj, std::pair{0.0, 0.3}));
}

TEST(Solver, VEquationReproducesPowerOfSolution) {
    // Positive boundary data keep a = (1/q)^{p-1} u^{(p-1)(1-q)} bounded.
    const auto g = Grid1D::cartesian(0.0, 1.0, 100);
    auto u0 = Field::sample(g, 0.0, [](double x) { return 0.5 + std::sin(std::numbers::pi * x); });
    CauchyDirichletProblem pb(ExponentTriple(2.0, 2.0, 1), g, u0, Boundary::dirichlet(0.5), 0.1);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    const auto traj = solve(pb, cfg);
    const auto tr = transform_to_v(traj);
    const auto vtraj = solve(v_problem(traj, tr), cfg);
    double gap = 0.0, size = 0.0;
    for (std::size_t k = 0; k < vtraj.size(); ++k)
        for (int i = 0; i < g.n_cells(); ++i) {
            gap = std::max(gap, std::abs(vtraj.fields()[k][i] - tr.v_fields[k][i]));
            size = std::max(size, tr.v_fields[k][i]);
        }
    EXPECT_LT(gap / size, 1e-2);
}

TEST(Solver, TrajectoryRoundTripsThroughText) {
    const auto g = Grid1D::radial(3, 1.0, 12);
    CauchyDirichletProblem pb(ExponentTriple(2.0, 2.0, 3), g, bump(g, 1.0, 0.8), Boundary::zero(), 0.02);
    SolverConfig cfg;
    cfg.dt = 0.01;
    const auto tr = solve(pb, cfg);
    std::stringstream ss;
    write_trajectory(ss, tr);
    const auto back = read_trajectory(ss);
    EXPECT_TRUE(back.grid == g);
    ASSERT_EQ(back.fields.size(), tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        EXPECT_EQ(back.fields[k].time(), tr.times()[k]);
        EXPECT_EQ(back.fields[k].values(), tr.fields()[k].values());
    }
    std::istringstream bad("0.1,0.2\n");
    EXPECT_THROW(read_trajectory(bad), std::runtime_error);
}

TEST(Solver, KeepEveryThinsStoredSlices) {
    const auto g = Grid1D::cartesian(0.0, 1.0, 10);
    CauchyDirichletProblem pb(ExponentTriple(2.0, 1.0, 1), g, Field(g, 0.0, std::vector<double>(10, 1.0)),
                              Boundary::zero(), 0.1);
    SolverConfig cfg;
    cfg.dt = 0.01;
    cfg.keep_every = 3;
    const auto tr = solve(pb, cfg);
    EXPECT_EQ(tr.step_stats().size(), 10u);
    EXPECT_EQ(tr.size(), 5u);  // t = 0, 0.03, 0.06, 0.09, 0.1
    EXPECT_DOUBLE_EQ(tr.times().back(), 0.1);
}

TEST(Solver, ParallelSweepKeepsIndexOrder) {
    const auto out = parallel_map(50, [](std::size_t i) { return static_cast<int>(i * i); }, 4);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
    EXPECT_THROW(parallel_map(5, [](std::size_t i) -> int { if (i == 3) throw std::runtime_error("x"); return 0; }, 2),
                 std::runtime_error);
}
