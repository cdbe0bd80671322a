// Acceptance suite: one PASS/FAIL line per criterion, each driven by the shipped presets.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "dnl/cli.hpp"

using namespace dnl;
using namespace dnl::cli;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        details.push_back(std::string(ok ? "ok " : "NO ") + what);
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunResult run_preset(const std::string& name, double* elapsed = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = execute(preset(name));
    if (elapsed) *elapsed = seconds_since(t0);
    return r;
}

double spread(const DiagnosticReport& rep) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& row : rep.rows) {
        lo = std::min(lo, row.implied);
        hi = std::max(hi, row.implied);
    }
    return hi / lo;
}

Outcome exact_residuals() {
    Outcome o;
    double t = 0.0;
    const auto r = run_preset("exact-residual-weak", &t);
    std::size_t families = 0;
    for (const auto& [k, v] : r.measured)
        if (k.rfind("order:", 0) == 0) ++families;
    o.check(r.exit_code == kExitPass, "all weak-solution families: order 2 +- 0.2, residual < 1e-4 at h = 2.5e-3 (worst order deviation " +
                                          fmt(r.value("max_order_deviation")) + ", worst residual " +
                                          fmt(r.value("max_final_residual")) + ")");
    o.check(families >= 6, std::to_string(families) + " family instances");
    o.check(t / std::max<std::size_t>(families, 1) < 5.0, "runtime per family " + fmt(t / std::max<std::size_t>(families, 1)) + " s");
    return o;
}

Outcome critical_b() {
    Outcome o;
    const auto four = run_preset("critical-b-arbitration");
    o.check(four.exit_code == kExitPass,
            "N=4, p=2 selects exactly one candidate with the loser >= 10x the winner (" + four.lines.front() + ")");
    const auto three = arbitrate_critical_b(3, 2.0);
    o.check(std::abs(three.candidate_power_p - 1.0) < 1e-12 && std::abs(three.candidate_power_q - 1.0) < 1e-12,
            "N=3, p=2 candidates coincide at 1");
    try {
        const double b = derive_critical_b(3, 2.0);
        o.check(std::abs(b - 1.0) < 1e-6, "N=3, p=2 routine returns 1 (got " + fmt(b) + ")");
    } catch (const InconsistencyError& e) {
        o.check(false, std::string("N=3, p=2 routine returns 1: ") + e.what());
    }
    return o;
}

Outcome solver_convergence() {
    Outcome o;
    double ts = 0.0, tt = 0.0;
    const auto space = run_preset("solver-convergence-space", &ts);
    const auto time = run_preset("solver-convergence-time", &tt);
    o.check(space.exit_code == kExitPass, "spatial order " + fmt(space.value("order")) + " in [1.7, 2.3]");
    o.check(time.exit_code == kExitPass, "temporal order " + fmt(time.value("order")) + " in [0.8, 1.2]");
    o.check(ts + tt < 30.0, "runtime " + fmt(ts + tt) + " s");
    return o;
}

Outcome comparison() {
    Outcome o;
    for (const char* name : {"comparison-zero-boundary", "comparison-q1-boundary", "comparison-identical"}) {
        const auto r = run_preset(name);
        o.check(r.value("max_violation") <= 1e-8, std::string(name) + ": max (v-w)+ = " + fmt(r.value("max_violation")));
    }
    return o;
}

Outcome harnack() {
    Outcome o;
    const auto sup = run_preset("thm-harnack-supercritical");
    const auto& rep = *sup.report;
    const auto radii = rep.column("rho");
    const double factor = *std::max_element(radii.begin(), radii.end()) / *std::min_element(radii.begin(), radii.end());
    o.check(rep.rows.size() >= 12 && factor >= 8.0 - 1e-12,
            "supercritical: " + std::to_string(rep.rows.size()) + " probes, radii factor " + fmt(factor));
    o.check(rep.verdict == Verdict::bounded && spread(rep) < 2.0,
            "supercritical: verdict " + to_string(rep.verdict) + ", constant spread " + fmt(spread(rep)));

    const auto tr = run_preset("harnack-fail-trudinger");
    const auto& trep = *tr.report;
    o.check(trep.verdict == Verdict::diverging, "trudinger: verdict " + to_string(trep.verdict));
    const auto centres = trep.column("s_o"), edge = trep.column("edge_ratio");
    double worst = 0.0;
    for (std::size_t k = 0; k < centres.size(); ++k)
        if (centres[k] == 5.0 || centres[k] == 10.0 || centres[k] == 20.0)
            worst = std::max(worst, std::abs(edge[k] / std::exp((2.0 * centres[k] + 1.0) / 8.0) - 1.0));
    o.check(worst <= 1e-6, "trudinger: edge ratio vs exp((2l+1)/8) at l = 5, 10, 20, worst relative error " + fmt(worst));

    for (const char* name : {"harnack-fail-critical-wave", "harnack-fail-borderline"}) {
        const auto r = run_preset(name);
        o.check(r.report->verdict == Verdict::diverging, std::string(name) + ": verdict " + r.status);
    }
    return o;
}

Outcome gradient() {
    Outcome o;
    const auto sup = run_preset("gradient-supercritical");
    o.check(sup.report->verdict == Verdict::bounded && spread(*sup.report) < 2.0,
            "supercritical: verdict " + sup.status + ", spread " + fmt(spread(*sup.report)));
    const auto tr = run_preset("gradient-fail-trudinger");
    const auto centres = tr.report->column("s_o");
    double worst = 0.0;
    for (std::size_t k = 0; k < centres.size(); ++k)
        worst = std::max(worst, std::abs(tr.report->rows[k].implied / (centres[k] / 2.0) - 1.0));
    o.check(worst <= 1e-8, "trudinger: constant vs n/2, worst relative error " + fmt(worst));
    o.check(tr.report->verdict == Verdict::diverging, "trudinger: verdict " + tr.status);
    return o;
}

Outcome extinction() {
    Outcome o;
    const auto run = run_preset("extinction-bound");
    const double t_num = run.value("T_num"), t_bound = run.value("T_bound");
    const double t_end = preset("extinction-bound").real("t-end");
    o.check(std::isfinite(t_num) && t_num < t_end, "max u < 1e-8 at T_num = " + fmt(t_num) + " before t_end = " + fmt(t_end));
    o.check(run.value("max_relative_excess") <= 0.05,
            "v dominated by w up to 5% (worst excess " + fmt(run.value("max_relative_excess")) + ")");
    o.check(t_num <= t_bound, "T_num <= bound " + fmt(t_bound));
    const auto decay = run_preset("extinction-decay");
    o.check(decay.exit_code == kExitPass, "decay slope " + fmt(decay.value("slope")) + " vs 1/(q+1-p) = " +
                                              fmt(decay.value("expected")) + " within 10%");
    return o;
}

Outcome mollifiers() {
    Outcome o;
    const auto r = run_preset("mollifier-identities");
    o.check(r.value("max_identity_defect") <= 1e-9, "identity defect " + fmt(r.value("max_identity_defect")));
    o.check(r.value("max_ratio_deviation") <= 0.1, "approximation error linear in h (order " +
                                                       fmt(r.value("approximation_order")) + ", halving-ratio deviation " +
                                                       fmt(r.value("max_ratio_deviation")) + ")");
    return o;
}

Outcome g_sandwich() {
    Outcome o;
    const auto r = run_preset("g-sandwich");
    for (const auto& [k, v] : r.measured)
        if (k.rfind("ratio:", 0) == 0) o.check(std::isfinite(v) && v < 100.0, "q = " + k.substr(6) + ": c2/c1 = " + fmt(v));
    o.check(r.value("q1_relative_defect") == 0.0, "q = 1 matches (a-b)^2/2, defect " + fmt(r.value("q1_relative_defect")));
    return o;
}

Outcome model_mapping() {
    Outcome o;
    const auto r = run_preset("model-mapping");
    for (const char* name : {"classic_gas", "nanoporous_gas", "nanoporous_oil"}) {
        const std::string n = name;
        const bool ok = r.value("passes:" + n) == 1.0;
        o.check(ok, n + ": " + (r.value("negligible:" + n) == 1.0 ? std::string("stencils coincide")
                                                                   : "difference order " + fmt(r.value("order:" + n))));
    }
    o.check(r.value("q_exp:nanoporous_oil") == 1.0, "oil pressure form q_exp = " + fmt(r.value("q_exp:nanoporous_oil")));
    return o;
}

Outcome holder() {
    Outcome o;
    const auto r = run_preset("holder-supercritical");
    for (const auto& [alpha, r2, label] : {std::tuple{"alpha_fit", "r_squared", "200 cells"},
                                           std::tuple{"alpha_compare", "r_squared_compare", "400 cells"}}) {
        const double a = r.value(alpha), q = r.value(r2);
        o.check(a > 0.0 && a <= 1.0 && q >= 0.9, std::string(label) + ": alpha " + fmt(a) + ", R^2 " + fmt(q));
    }
    o.check(r.value("alpha_change") <= 0.1, "change between grids " + fmt(r.value("alpha_change")));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"exact-solution residuals", exact_residuals},
        {"critical-b arbitration", critical_b},
        {"solver convergence", solver_convergence},
        {"discrete comparison principle", comparison},
        {"Harnack boundedness vs failure", harnack},
        {"gradient bound and its failure", gradient},
        {"extinction", extinction},
        {"mollifier identities", mollifiers},
        {"g-function sandwich", g_sandwich},
        {"model mapping", model_mapping},
        {"Holder-exponent fit", holder},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        std::printf("criterion %zu %s: %s\n", k + 1, criteria[k].first.c_str(), o.pass ? "PASS" : "FAIL");
        for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
