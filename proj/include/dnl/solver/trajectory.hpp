#pragma once

#include <cmath>
#include <iomanip>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnl/error.hpp"
#include "dnl/solver/step.hpp"

namespace dnl {

/// Stored time slices of one solve plus per-step statistics (one entry per step taken).
class Trajectory {
public:
    Trajectory(std::shared_ptr<const CauchyDirichletProblem> problem, SolverConfig config)
        : problem_(std::move(problem)), config_(config) {}

    const CauchyDirichletProblem& problem() const { return *problem_; }
    std::shared_ptr<const CauchyDirichletProblem> problem_ptr() const { return problem_; }
    const SolverConfig& config() const { return config_; }
    const Grid1D& grid() const { return problem_->grid; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<Field>& fields() const { return fields_; }
    const std::vector<StepStats>& step_stats() const { return stats_; }
    const Field& final_field() const { return fields_.back(); }
    std::size_t size() const { return fields_.size(); }

    double total_clipped_mass() const {
        double m = 0.0;
        for (const auto& s : stats_) m += s.clipped_mass;
        return m;
    }
    int total_newton_iterations() const {
        int n = 0;
        for (const auto& s : stats_) n += s.newton_iterations;
        return n;
    }

    void append(Field f) {
        if (!times_.empty() && !(f.time() > times_.back()))
            throw std::invalid_argument("trajectory: times must be strictly increasing");
        times_.push_back(f.time());
        fields_.push_back(std::move(f));
    }
    void record(const StepStats& s) { stats_.push_back(s); }

    /// Cell values at time t by linear interpolation between stored slices.
    std::vector<double> values_at(double t) const {
        if (t < times_.front() - 1e-12 || t > times_.back() + 1e-12) {
            std::ostringstream os;
            os << "trajectory: time " << t << " outside [" << times_.front() << ", " << times_.back() << "]";
            throw DomainError(os.str());
        }
        std::size_t k = 0;
        while (k + 1 < times_.size() && times_[k + 1] < t) ++k;
        if (k + 1 == times_.size()) return fields_.back().values();
        const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
        const auto& a = fields_[k].values();
        const auto& b = fields_[k + 1].values();
        std::vector<double> out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - w) * a[i] + w * b[i];
        return out;
    }

private:
    std::shared_ptr<const CauchyDirichletProblem> problem_;
    SolverConfig config_;
    std::vector<double> times_;
    std::vector<Field> fields_;
    std::vector<StepStats> stats_;
};

/// Uniform steps of size dt from the initial time to t_end, the last one shortened to land on t_end.
inline Trajectory solve(const CauchyDirichletProblem& problem, const SolverConfig& config) {
    config.validate();
    problem.validate();
    auto shared = std::make_shared<const CauchyDirichletProblem>(problem);
    Trajectory traj(shared, config);
    Field u = problem.initial;
    traj.append(u);
    const double t0 = u.time();
    const double span = problem.t_end - t0;
    if (span <= 0.0) return traj;
    long n_steps = static_cast<long>(std::ceil(span / config.dt - 1e-9));
    if (n_steps < 1) n_steps = 1;
    for (long k = 1; k <= n_steps; ++k) {
        const double t_target = k == n_steps ? problem.t_end : t0 + k * config.dt;
        const double dt = t_target - u.time();
        StepStats st;
        u = step(*shared, u, dt, config, &st);
        traj.record(st);
        if (k % config.keep_every == 0 || k == n_steps) traj.append(u);
    }
    return traj;
}

// Text format: optional "# geometry=<cartesian|radial> n_dim=<N> x_lo=.. x_hi=.. n_cells=.." line, then per slice a "# t=<value>"
// line followed by "x,u" rows.

inline void write_trajectory(std::ostream& os, const Grid1D& grid, const std::vector<Field>& fields) {
    os << std::setprecision(17);
    os << "# geometry=" << (grid.is_radial() ? "radial" : "cartesian") << " n_dim=" << grid.n_dim()
       << " x_lo=" << grid.x_lo() << " x_hi=" << grid.x_hi() << " n_cells=" << grid.n_cells() << "\n";
    for (const auto& f : fields) {
        os << "# t=" << f.time() << "\n";
        for (int i = 0; i < f.size(); ++i) os << grid.center(i) << "," << f[i] << "\n";
    }
}

inline void write_trajectory(std::ostream& os, const Trajectory& traj) {
    write_trajectory(os, traj.grid(), traj.fields());
}

struct TrajectoryData {
    Grid1D grid;
    std::vector<Field> fields;
    std::vector<double> times() const {
        std::vector<double> t;
        for (const auto& f : fields) t.push_back(f.time());
        return t;
    }
};

inline TrajectoryData read_trajectory(std::istream& is) {
    std::string line;
    int line_no = 0;
    bool radial = false;
    int n_dim = 1;
    std::optional<double> head_lo, head_hi;
    std::vector<double> times;
    std::vector<std::vector<double>> xs, us;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error("trajectory line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string tok;
            while (ls >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                try {
                    if (key == "t") {
                        times.push_back(std::stod(val));
                        xs.emplace_back();
                        us.emplace_back();
                    } else if (key == "geometry") {
                        if (val != "radial" && val != "cartesian") fail("unknown geometry '" + val + "'");
                        radial = val == "radial";
                    } else if (key == "n_dim") {
                        n_dim = std::stoi(val);
                    } else if (key == "x_lo") {
                        head_lo = std::stod(val);
                    } else if (key == "x_hi") {
                        head_hi = std::stod(val);
                    }
                } catch (const std::logic_error&) {
                    fail("bad value for '" + key + "'");
                }
            }
            continue;
        }
        if (times.empty()) fail("data row before the first '# t=' header");
        const auto comma = line.find(',');
        if (comma == std::string::npos) fail("expected 'x,u'");
        try {
            xs.back().push_back(std::stod(line.substr(0, comma)));
            us.back().push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::logic_error&) {
            fail("non-numeric value");
        }
    }
    if (times.empty()) throw std::runtime_error("trajectory: no time slices");
    const auto& x = xs.front();
    if (x.size() < 4) throw std::runtime_error("trajectory: need at least 4 cells per slice");
    const double h = (x.back() - x.front()) / (x.size() - 1);
    double x_lo = head_lo.value_or(x.front() - 0.5 * h), x_hi = head_hi.value_or(x.back() + 0.5 * h);
    if (radial && std::abs(x_lo) < 1e-9 * h) x_lo = 0.0;
    Grid1D grid = radial ? Grid1D::radial(n_dim, x_hi, static_cast<int>(x.size()), x_lo)
                         : Grid1D::cartesian(x_lo, x_hi, static_cast<int>(x.size()));
    TrajectoryData data{grid, {}};
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (xs[k].size() != x.size()) throw std::runtime_error("trajectory: slices have different sizes");
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::abs(xs[k][i] - grid.center(static_cast<int>(i))) > 1e-9 * std::max(1.0, std::abs(x_hi)))
                throw std::runtime_error("trajectory: x values are not a uniform cell-centred grid");
        if (k > 0 && !(times[k] > times[k - 1])) throw std::runtime_error("trajectory: times not increasing");
        data.fields.emplace_back(grid, times[k], us[k]);
    }
    return data;
}

}  // namespace dnl
