#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dnl/cli/config.hpp"
#include "dnl/exact/closed_form.hpp"

namespace dnl::cli {

namespace schema_detail {

using Keys = std::vector<KeySpec>;

inline KeySpec real(std::string section, std::string name, std::string def, std::string help) {
    return {std::move(section), std::move(name), ValueType::real, std::move(def), std::move(help), {}};
}
inline KeySpec integer(std::string section, std::string name, std::string def, std::string help) {
    return {std::move(section), std::move(name), ValueType::integer, std::move(def), std::move(help), {}};
}
inline KeySpec list(std::string section, std::string name, std::string def, std::string help) {
    return {std::move(section), std::move(name), ValueType::real_list, std::move(def), std::move(help), {}};
}
inline KeySpec boolean(std::string section, std::string name, std::string def, std::string help) {
    return {std::move(section), std::move(name), ValueType::boolean, std::move(def), std::move(help), {}};
}
inline KeySpec text(std::string section, std::string name, std::string def, std::string help) {
    return {std::move(section), std::move(name), ValueType::text, std::move(def), std::move(help), {}};
}
inline KeySpec choice(std::string section, std::string name, std::vector<std::string> choices, std::string help) {
    std::string def = choices.front();
    return {std::move(section), std::move(name), ValueType::choice, std::move(def), std::move(help), std::move(choices)};
}

inline void append(Keys& out, const Keys& more) { out.insert(out.end(), more.begin(), more.end()); }

inline Keys exponents() {
    return {real("exponents", "p", "2", "gradient exponent p > 1"),
            real("exponents", "q", "2", "time exponent q > 0"),
            integer("exponents", "N", "3", "space dimension")};
}

inline Keys family(bool allow_catalog) {
    std::vector<std::string> ids;
    for (const auto& [fam, id] : family_ids()) ids.push_back(id);
    if (allow_catalog) ids.push_back("all-weak");
    return {choice("family", "family", ids, "closed-form family id"),
            real("family", "amplitude", "1", "amplitude (trudinger_gaussian, dipole_self_similar, special_log_profile)"),
            real("family", "T", "1", "final or extinction time"),
            real("family", "rate", "0", "critical wave rate b; 0 selects the exact rate"),
            real("family", "a", "1", "boundedness_borderline scale a"),
            real("family", "C", "1", "supercritical_extinction constant C"),
            real("family", "outer-radius", "0.5", "ivanov_subsolution outer radius")};
}

inline Keys grid() {
    return {choice("grid", "geometry", {"radial", "cartesian"}, "radial (x = |x| in N dimensions) or cartesian (N = 1)"),
            real("grid", "x-lo", "0", "left end (radial: inner radius)"),
            real("grid", "x-hi", "1", "right end (radial: outer radius)"),
            integer("grid", "cells", "100", "number of cells")};
}

inline Keys initial() {
    return {choice("initial", "initial", {"bump", "constant", "sine", "exact"},
                   "bump a(1-(x/r)^2)^2, constant, sine base+amp sin(pi (x-x_lo)/L), or the family at t-start"),
            real("initial", "bump-amplitude", "1", "bump height"),
            real("initial", "bump-radius", "0.9", "bump support radius"),
            real("initial", "constant-value", "1", "constant initial value"),
            real("initial", "sine-base", "1", "sine offset"),
            real("initial", "sine-amplitude", "1", "sine amplitude")};
}

inline Keys boundary() {
    return {choice("boundary", "boundary", {"zero", "dirichlet", "exact"}, "lateral data: zero, constant, or the family"),
            real("boundary", "boundary-value", "0", "constant Dirichlet value")};
}

inline Keys solver() {
    return {real("solver", "t-start", "0", "initial time"),
            real("solver", "t-end", "0.1", "final time"),
            real("solver", "dt", "1e-3", "time step"),
            real("solver", "newton-tol", "1e-10", "Newton residual tolerance"),
            integer("solver", "max-newton", "30", "Newton iteration cap"),
            integer("solver", "keep-every", "1", "store every k-th step"),
            choice("solver", "flux-mean", {"arithmetic", "harmonic"}, "face mean of the flux coefficient")};
}

inline Keys source() {
    return {choice("source", "source", {"run", "family", "steady-radial"},
                   "diagnosed solution: numerical run, closed-form family, or steady radial profile"),
            real("source", "steady-A", "0.1", "steady profile A + B r^{(p-N)/(p-1)}: A"),
            real("source", "steady-B", "1", "steady profile: B"),
            real("source", "steady-r-lo", "1e-3", "steady profile inner radius"),
            real("source", "steady-r-hi", "100", "steady profile outer radius")};
}

inline Keys run_source() {
    Keys k = exponents();
    append(k, source());
    append(k, family(false));
    append(k, grid());
    append(k, initial());
    append(k, boundary());
    append(k, solver());
    return k;
}

inline Keys probes(bool with_durations) {
    Keys k = {list("probes", "centres", "0", "probe centres s_o along e1 (radial: signed offset)"),
              list("probes", "times", "0", "probe times t_o"),
              list("probes", "radii", "0.1", "probe radii rho"),
              choice("probes", "scale-by", {"radius", "centre", "time"}, "list whose index labels the scale"),
              real("probes", "radius-fraction", "0", "if > 0, rho = fraction * |s_o| instead of the radii list"),
              integer("probes", "lattice", "32", "sampling lattice per direction")};
    if (with_durations) k.push_back(list("probes", "durations", "0.01", "backward cylinder lengths s, one per radius"));
    return k;
}

/// Stores defaults in canonical form so a fresh config serialises exactly as written back.
inline Schema make(std::string name, std::string help, Keys keys) {
    for (auto& k : keys) {
        std::string canon, message;
        if (!detail::canonical_value(k, k.default_value, canon, message))
            throw std::logic_error(name + "." + k.name + ": bad default: " + message);
        k.default_value = canon;
    }
    return {std::move(name), std::move(help), std::move(keys)};
}

inline std::vector<Schema> build() {
    std::vector<Schema> out;
    {
        Keys k = exponents();
        append(k, family(true));
        append(k, {list("residual", "h-sequence", "1e-2,5e-3,2.5e-3", "stencil widths"),
                   boolean("residual", "arbitrate-b", "false", "arbitrate the critical wave rate candidates instead"),
                   real("residual", "target-order", "2", "expected convergence order"),
                   real("residual", "order-tolerance", "0.2", "allowed deviation of the order"),
                   real("residual", "max-residual", "1e-4", "bound on the residual at the finest h"),
                   real("residual", "loser-factor", "10", "arbitration: loser residual over winner residual")});
        out.push_back(make("exact-residual", "finite-difference residual of closed-form families", k));
    }
    {
        Keys k = exponents();
        append(k, family(false));
        append(k, grid());
        append(k, initial());
        append(k, boundary());
        append(k, solver());
        append(k, {choice("study", "mode", {"run", "comparison", "convergence-space", "convergence-time"},
                          "single run, comparison pair, or convergence against the family"),
                   real("study", "compare-scale", "0.5", "comparison: smaller initial datum = scale * initial"),
                   real("study", "compare-boundary-value", "0", "comparison: constant boundary of the smaller solution"),
                   real("study", "compare-tol", "1e-8", "comparison: allowed max (v-w)+"),
                   list("study", "cells-sequence", "100,200,400", "space study: cell counts"),
                   real("study", "dt-factor", "0.25", "space study: dt = factor * h^2"),
                   list("study", "dt-sequence", "4e-3,2e-3,1e-3", "time study: steps"),
                   integer("study", "time-study-cells", "1600", "time study: cell count"),
                   list("study", "order-range", "1.7,2.3", "accepted fitted order interval")});
        out.push_back(make("solve", "implicit finite-volume runs, comparison and convergence studies", k));
    }
    {
        Keys k = run_source();
        append(k, probes(false));
        append(k, {real("harnack", "sigma", "0.25", "cylinder time factor"),
                   boolean("harnack", "refinement-check", "true", "re-sample at twice the lattice")});
        out.push_back(make("harnack", "backward-forward Harnack ratio scan", k));
    }
    {
        Keys k = run_source();
        append(k, probes(true));
        out.push_back(make("integral-harnack", "integral Harnack ratio on backward cylinders", k));
    }
    {
        Keys k = run_source();
        append(k, probes(true));
        append(k, {real("supbound", "r", "3", "integrability exponent r >= 1")});
        out.push_back(make("supbound", "sup bound against the space-time mean of u^r", k));
    }
    {
        Keys k = run_source();
        append(k, {real("expansion", "centre", "0", "centre s_o"), real("expansion", "time", "0", "time t_o"),
                   real("expansion", "radius", "0.1", "radius rho"), real("expansion", "level", "0.25", "level M"),
                   real("expansion", "fraction", "0.3", "measure fraction alpha"),
                   list("expansion", "deltas", "1,0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125", "time factors delta"),
                   integer("expansion", "lattice", "32", "sampling lattice per direction")});
        out.push_back(make("expand", "expansion of positivity", k));
    }
    {
        Keys k = run_source();
        append(k, {list("extinction", "x-probes", "0,0.3,0.6", "probe positions for the decay constants"),
                   real("extinction", "threshold", "1e-8", "max u below this counts as extinct"),
                   real("extinction", "active-fraction", "1e-6", "Rayleigh quotient only while max u exceeds this fraction"),
                   real("extinction", "tolerance", "0.05", "allowed relative excess of v over w"),
                   list("extinction", "time-fractions", "0.6,0.7,0.8,0.9", "probe times as fractions of T"),
                   list("extinction", "decay-taus", "1e-3,3e-3,1e-2,3e-2,1e-1", "family source: T - t values"),
                   real("extinction", "decay-centre", "0", "family source: probe position"),
                   real("extinction", "decay-tolerance", "0.1", "family source: relative slope tolerance")});
        out.push_back(make("extinction", "extinction time, energy comparison and decay exponent", k));
    }
    {
        Keys k = run_source();
        append(k, probes(false));
        append(k, {choice("gradient", "mode", {"cylinder_sup", "slice_sup", "centre_point"}, "where |Du| is sampled"),
                   real("gradient", "enlargement", "8", "enlarged cylinder factor"),
                   boolean("gradient", "check-inclusion", "true", "require the enlarged cylinder inside the domain"),
                   boolean("gradient", "refinement-check", "true", "re-sample at twice the lattice")});
        out.push_back(make("gradbound", "intrinsic gradient bound", k));
    }
    {
        Keys k = run_source();
        append(k, {real("holder", "centre", "0.3", "centre s_o"), real("holder", "time", "0.05", "time t_o"),
                   real("holder", "radius", "0.16", "outer radius rho"),
                   list("holder", "holder-radii", "0.02,0.04,0.08,0.16", "sub-cylinder radii"),
                   integer("holder", "lattice", "32", "sampling lattice per direction"),
                   integer("holder", "compare-cells", "0", "run source: repeat on this many cells and compare"),
                   real("holder", "stability-tolerance", "0.1", "allowed change of the exponent")});
        out.push_back(make("holder", "Holder exponent of the gradient", k));
    }
    {
        Keys k = {choice("law", "law", {"darcy", "power_law", "forchheimer", "khristianovich"}, "filtration law"),
                  real("law", "alpha", "1", "power-law exponent"),
                  real("law", "forch-a", "1", "Forchheimer linear coefficient"),
                  real("law", "forch-b", "1", "Forchheimer quadratic coefficient"),
                  text("law", "phi-table", "0:0,1:1", "Khristianovich table x:Phi pairs"),
                  real("law", "pi-scale", "1", "Khristianovich gradient scale"),
                  real("law", "lambda-char", "1", "Khristianovich speed scale"),
                  choice("state", "state", {"ideal_isothermal", "polytropic", "weakly_compressible", "incompressible"},
                         "equation of state"),
                  real("state", "n", "1.4", "polytropic index"),
                  real("state", "p-ref", "1", "polytropic reference pressure"),
                  real("state", "rho-ref", "1", "polytropic reference density"),
                  real("state", "gas-factor", "1", "ideal gas p / rho"),
                  real("state", "bulk-modulus", "1", "weakly compressible bulk modulus"),
                  real("state", "rho-o", "1", "weakly compressible reference density"),
                  real("state", "p-o", "0", "weakly compressible reference pressure"),
                  real("medium", "porosity", "0.2", "porosity in (0, 1)"),
                  real("medium", "viscosity", "1", "dynamic viscosity"),
                  real("medium", "permeability", "1", "permeability prefactor A"),
                  real("medium", "nanoporous-exponent", "0", "k = A |Dp|^m: m"),
                  choice("mapping", "variable", {"auto", "density", "pressure"}, "unknown of the reduced equation"),
                  choice("mapping", "battery", {"single", "examples"}, "this model, or the three porous-media examples"),
                  choice("mapping", "probe", {"power", "constant"}, "probe field x^s (1 + t/2) or a constant"),
                  real("mapping", "probe-power", "2.5", "probe exponent s"),
                  integer("mapping", "probe-dim", "1", "probe dimension (>= 2: radial)"),
                  list("mapping", "h-sequence", "1e-2,5e-3,2.5e-3", "stencil widths"),
                  real("mapping", "x-lo", "1", "probe box left end"), real("mapping", "x-hi", "2", "probe box right end"),
                  real("mapping", "t-lo", "0.1", "probe box start time"), real("mapping", "t-hi", "0.9", "probe box end time")};
        out.push_back(make("model", "porous-media model to (p, q, K) mapping and its check", k));
    }
    {
        Keys k = exponents();
        append(k, {list("regimes", "r-values", "1,2", "r values for lambda_r"),
                   list("regimes", "reynolds", "", "Reynolds numbers to classify"),
                   real("regimes", "re-low", "1", "low Reynolds threshold"),
                   real("regimes", "re-high", "10", "high Reynolds threshold")});
        out.push_back(make("regimes", "exponent thresholds and regime flags", k));
    }
    {
        Keys k = {real("series", "dt", "1e-3", "identity check: sample spacing"),
                  integer("series", "samples", "3001", "identity check: sample count"),
                  list("series", "h-values", "1e-3,1e-2,0.1", "identity check: mollifier widths"),
                  real("series", "identity-tol", "1e-9", "allowed identity defect"),
                  real("series", "approx-dt", "1e-5", "approximation check: sample spacing"),
                  integer("series", "approx-samples", "100001", "approximation check: sample count"),
                  list("series", "approx-h", "0.02,0.01,0.005", "approximation check: widths"),
                  real("series", "approx-from", "0.5", "approximation error measured for t >= this"),
                  real("series", "ratio-tolerance", "0.1", "allowed deviation of the halving ratio from 2")};
        out.push_back(make("mollifier", "exponential and Steklov time mollifiers", k));
    }
    {
        Keys k = {list("sandwich", "q-values", "0.3333333333333333,0.5,1,2,4", "exponents q"),
                  integer("sandwich", "samples", "2000", "Halton samples (a, b) per q"),
                  real("sandwich", "range", "10", "a, b in [-range, range]"),
                  real("sandwich", "max-ratio", "100", "accepted c2 / c1")};
        out.push_back(make("gsandwich", "two-sided bounds of the g-function", k));
    }
    return out;
}

}  // namespace schema_detail

inline const std::vector<Schema>& schemas() {
    static const std::vector<Schema> all = schema_detail::build();
    return all;
}

inline const Schema& schema_for(const std::string& subcommand) {
    for (const auto& s : schemas())
        if (s.subcommand == subcommand) return s;
    throw ConfigError("unknown subcommand '" + subcommand + "'");
}

/// Defaults, then config text.
inline ExperimentConfig parse_config(const std::string& subcommand, const std::string& text) {
    ExperimentConfig cfg(schema_for(subcommand));
    apply_config_text(cfg, text);
    return cfg;
}

/// As above, with the subcommand read from the text.
inline ExperimentConfig parse_config(const std::string& text) {
    const auto sub = declared_subcommand(text);
    if (sub.empty()) throw ConfigError("config does not name a subcommand");
    return parse_config(sub, text);
}

}  // namespace dnl::cli
