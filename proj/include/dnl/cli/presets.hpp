#pragma once

#include <string>
#include <vector>

#include "dnl/cli/schema.hpp"

namespace dnl::cli {

struct Preset {
    std::string name;
    int criterion;  // acceptance criterion the preset serves
    std::string expect;  // "pass", "bounded", "diverging": the outcome the acceptance suite requires
    std::string text;
};

namespace preset_detail {

// Radial N = 3, p = q = 2 on the unit ball, zero boundary, bump initial datum.
inline std::string supercritical_run(int cells, const std::string& bump_radius) {
    return "\n[exponents]\np = 2\nq = 2\nN = 3\n\n[source]\nsource = run\n\n[grid]\ngeometry = radial\nx-hi = 1\ncells = " +
           std::to_string(cells) + "\n\n[initial]\ninitial = bump\nbump-amplitude = 1\nbump-radius = " + bump_radius +
           "\n\n[boundary]\nboundary = zero\n";
}

inline std::string run_based(const std::string& head, const std::string& solver, const std::string& rest, int cells = 100,
                             const std::string& bump_radius = "0.9") {
    return head + supercritical_run(cells, bump_radius) + "\n[solver]\n" + solver + rest;
}

inline std::vector<Preset> build() {
    std::vector<Preset> out;
    out.push_back({"exact-residual-weak", 1, "pass", R"(subcommand = exact-residual
output = exact-residual-weak

[family]
family = all-weak

[residual]
h-sequence = 1e-2, 5e-3, 2.5e-3
target-order = 2
order-tolerance = 0.2
max-residual = 1e-4
)"});
    out.push_back({"critical-b-arbitration", 2, "pass", R"(subcommand = exact-residual
output = critical-b-arbitration

[exponents]
p = 2
q = 2
N = 4

[family]
family = critical_harnack_wave

[residual]
arbitrate-b = true
loser-factor = 10
)"});
    out.push_back({"critical-b-coincident", 2, "pass", R"(subcommand = exact-residual
output = critical-b-coincident

[exponents]
p = 2
q = 3
N = 3

[family]
family = critical_harnack_wave

[residual]
arbitrate-b = true
loser-factor = 10
)"});
    const std::string trudinger_box = R"(
[exponents]
p = 2
q = 1
N = 1

[family]
family = trudinger_gaussian
amplitude = 1

[grid]
geometry = cartesian
x-lo = -2
x-hi = 2

[initial]
initial = exact

[boundary]
boundary = exact

[solver]
t-start = 0.5
t-end = 1
)";
    out.push_back({"solver-convergence-space", 3, "pass",
                   "subcommand = solve\noutput = solver-convergence-space\n" + trudinger_box + R"(
[study]
mode = convergence-space
cells-sequence = 100, 200, 400
dt-factor = 0.25
order-range = 1.7, 2.3
)"});
    out.push_back({"solver-convergence-time", 3, "pass",
                   "subcommand = solve\noutput = solver-convergence-time\n" + trudinger_box + R"(
[study]
mode = convergence-time
dt-sequence = 4e-3, 2e-3, 1e-3
time-study-cells = 1600
order-range = 0.8, 1.2
)"});
    const std::string half_bump = R"(
[exponents]
p = 2
q = 2
N = 3

[grid]
geometry = radial
x-hi = 1
cells = 60

[initial]
initial = bump
bump-amplitude = 1
bump-radius = 0.8

[boundary]
boundary = zero

[solver]
t-end = 0.2
dt = 2e-3
)";
    out.push_back({"comparison-zero-boundary", 4, "pass",
                   "subcommand = solve\noutput = comparison-zero-boundary\n" + half_bump + R"(
[study]
mode = comparison
compare-scale = 0.5
compare-tol = 1e-8
)"});
    out.push_back({"comparison-q1-boundary", 4, "pass", R"(subcommand = solve
output = comparison-q1-boundary

[exponents]
p = 1.5
q = 1
N = 1

[grid]
geometry = cartesian
x-lo = 0
x-hi = 1
cells = 80

[initial]
initial = sine
sine-base = 1
sine-amplitude = 1

[boundary]
boundary = dirichlet
boundary-value = 1

[solver]
t-end = 0.2
dt = 2e-3

[study]
mode = comparison
compare-scale = 0.5
compare-boundary-value = 0.5
compare-tol = 1e-8
)"});
    out.push_back({"comparison-identical", 4, "pass",
                   "subcommand = solve\noutput = comparison-identical\n" + half_bump + R"(
[study]
mode = comparison
compare-scale = 1
compare-tol = 1e-8
)"});
    out.push_back({"thm-harnack-supercritical", 5, "bounded",
                   run_based("subcommand = harnack\noutput = thm-harnack-supercritical\n", "t-end = 0.12\ndt = 2e-5\n", R"(
[probes]
centres = 0, 0.2, 0.4
times = 0.03
radii = 0.025, 0.05, 0.1, 0.2
scale-by = radius
)")});
    out.push_back({"harnack-fail-trudinger", 5, "diverging", R"(subcommand = harnack
output = harnack-fail-trudinger

[exponents]
p = 2
q = 1
N = 1

[source]
source = family

[family]
family = trudinger_gaussian
amplitude = 1

[probes]
centres = 1, 2, 5, 10, 20
times = 2
radii = 1
scale-by = centre
)"});
    out.push_back({"harnack-fail-critical-wave", 5, "diverging", R"(subcommand = harnack
output = harnack-fail-critical-wave

[exponents]
p = 2
q = 3
N = 3

[source]
source = family

[family]
family = critical_harnack_wave

[probes]
centres = 0
times = 1, 0.5, 0, -0.5, -1
radii = 1
scale-by = time
)"});
    out.push_back({"harnack-fail-borderline", 5, "diverging", R"(subcommand = harnack
output = harnack-fail-borderline

[exponents]
p = 2
q = 5
N = 3

[source]
source = family

[family]
family = boundedness_borderline
a = 10
T = 1

[probes]
centres = 0
times = 0
radii = 4, 8, 12, 16, 19, 19.9
scale-by = radius
)"});
    out.push_back({"gradient-supercritical", 6, "bounded", R"(subcommand = gradbound
output = gradient-supercritical

[exponents]
p = 2
q = 2
N = 3

[source]
source = steady-radial
steady-A = 0.1
steady-B = 1
steady-r-lo = 1e-3
steady-r-hi = 100

[probes]
centres = 0.5, 1, 2, 4
times = 0
radius-fraction = 0.0625
scale-by = centre
)"});
    out.push_back({"gradient-fail-trudinger", 6, "diverging", R"(subcommand = gradbound
output = gradient-fail-trudinger

[exponents]
p = 2
q = 1
N = 1

[source]
source = family

[family]
family = trudinger_gaussian
amplitude = 1

[probes]
centres = 1, 2, 4, 8, 16
times = 1
radii = 1
scale-by = centre

[gradient]
mode = centre_point
check-inclusion = false
)"});
    out.push_back({"gradient-fail-critical-wave", 6, "diverging", R"(subcommand = gradbound
output = gradient-fail-critical-wave

[exponents]
p = 2
q = 3
N = 3

[source]
source = family

[family]
family = critical_harnack_wave

[probes]
centres = 0
times = 0
radii = 1, 2, 3, 4, 5
scale-by = radius

[gradient]
mode = slice_sup
)"});
    out.push_back({"extinction-bound", 7, "bounded",
                   run_based("subcommand = extinction\noutput = extinction-bound\n", "t-end = 0.12\ndt = 2e-5\n", R"(
[extinction]
x-probes = 0, 0.3, 0.6
threshold = 1e-8
tolerance = 0.05
)")});
    out.push_back({"extinction-decay", 7, "pass", R"(subcommand = extinction
output = extinction-decay

[exponents]
p = 2
q = 4
N = 3

[source]
source = family

[family]
family = supercritical_extinction
C = 1
T = 1

[extinction]
decay-taus = 1e-3, 3e-3, 1e-2, 3e-2, 1e-1
decay-centre = 0
decay-tolerance = 0.1
)"});
    out.push_back({"mollifier-identities", 8, "pass", R"(subcommand = mollifier
output = mollifier-identities

[series]
dt = 1e-3
samples = 3001
h-values = 1e-3, 1e-2, 0.1
identity-tol = 1e-9
approx-dt = 1e-5
approx-samples = 100001
approx-h = 0.02, 0.01, 0.005
approx-from = 0.5
ratio-tolerance = 0.1
)"});
    out.push_back({"g-sandwich", 9, "pass", R"(subcommand = gsandwich
output = g-sandwich

[sandwich]
q-values = 0.3333333333333333, 0.5, 1, 2, 4
samples = 2000
range = 10
max-ratio = 100
)"});
    out.push_back({"model-mapping", 10, "pass", R"(subcommand = model
output = model-mapping

[state]
gas-factor = 1
bulk-modulus = 1
rho-o = 1

[medium]
porosity = 0.2
viscosity = 1
permeability = 1

[mapping]
battery = examples
probe = power
probe-power = 2.5
h-sequence = 1e-2, 5e-3, 2.5e-3
)"});
    out.push_back({"holder-supercritical", 11, "bounded",
                   run_based("subcommand = holder\noutput = holder-supercritical\n", "t-end = 0.08\n", R"(
[holder]
centre = 0.3
time = 0.05
radius = 0.16
holder-radii = 0.02, 0.04, 0.08, 0.16
compare-cells = 400
stability-tolerance = 0.1
)",
                            200)});
    // Examples for the remaining subcommands.
    out.push_back({"integral-harnack-supercritical", 0, "bounded",
                   run_based("subcommand = integral-harnack\noutput = integral-harnack-supercritical\n", "t-end = 0.06\n", R"(
[probes]
centres = 0
times = 0.05
radii = 0.1, 0.2, 0.4
durations = 0.01, 0.02, 0.04
scale-by = radius
)")});
    out.push_back({"supbound-supercritical", 0, "bounded",
                   run_based("subcommand = supbound\noutput = supbound-supercritical\n", "t-end = 0.06\n", R"(
[probes]
centres = 0
times = 0.05
radii = 0.2
durations = 0.02

[supbound]
r = 3
)")});
    out.push_back({"expand-supercritical", 0, "bounded",
                   run_based("subcommand = expand\noutput = expand-supercritical\n", "t-end = 0.01\ndt = 1e-4\n", R"(
[expansion]
centre = 0
time = 0
radius = 0.1
level = 0.25
fraction = 0.3
)",
                             200, "0.1")});
    out.push_back({"regimes-supercritical", 0, "pass", R"(subcommand = regimes
output = regimes-supercritical

[exponents]
p = 2
q = 2
N = 3

[regimes]
r-values = 1, 2, 3
reynolds = 0.5, 5, 50
)"});
    return out;
}

}  // namespace preset_detail

/// All shipped presets, in a fixed order.
inline const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = preset_detail::build();
    return all;
}

inline const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw ConfigError("unknown preset '" + name + "'");
}

inline ExperimentConfig preset(const std::string& name) { return parse_config(find_preset(name).text); }

}  // namespace dnl::cli
