#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnl {

enum class Verdict { bounded, diverging, inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::bounded: return "bounded";
        case Verdict::diverging: return "diverging";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

/// One probe: its parameters (named by DiagnosticReport::param_names), the two sides of the
/// estimate and their ratio.
struct ReportRow {
    int probe = 0;
    int scale = 0;
    std::vector<double> params;
    double lhs = 0.0;
    double rhs = 1.0;
    double implied = 0.0;
};

/// Spread below this factor counts as bounded; divergence needs at least kMinDivergingScales increasing scales
/// and an overall growth of the same factor.
inline constexpr double kBoundedSpread = 2.0;
inline constexpr int kMinDivergingScales = 4;

/// bounded: every implied constant finite and max/min < 2.
/// diverging: the per-scale maxima, ordered by scale, increase strictly over >= 4 scales and grow by >= 2.
inline Verdict classify_rows(const std::vector<ReportRow>& rows) {
    if (rows.empty()) return Verdict::inconclusive;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    bool finite = true;
    for (const auto& r : rows) {
        if (!std::isfinite(r.implied)) finite = false;
        lo = std::min(lo, r.implied);
        hi = std::max(hi, r.implied);
    }
    if (finite && lo > 0.0 && hi / lo < kBoundedSpread) return Verdict::bounded;
    std::map<int, double> per_scale;
    for (const auto& r : rows) {
        auto [it, fresh] = per_scale.emplace(r.scale, r.implied);
        if (!fresh) it->second = std::max(it->second, r.implied);
    }
    if (static_cast<int>(per_scale.size()) >= kMinDivergingScales) {
        bool increasing = true;
        double prev = -1.0;
        for (const auto& [scale, v] : per_scale) {
            if (!(v > prev) || std::isnan(v)) increasing = false;
            prev = v;
        }
        const double first = per_scale.begin()->second, last = per_scale.rbegin()->second;
        if (increasing && first > 0.0 && last / first >= kBoundedSpread) return Verdict::diverging;
    }
    return Verdict::inconclusive;
}

struct DiagnosticReport {
    std::string estimate_id;
    std::string probe_description;
    std::vector<std::string> param_names;
    std::vector<ReportRow> rows;
    double implied_constant = 0.0;
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> notes;
    std::vector<std::pair<std::string, double>> measured;  // named scalar outputs

    /// Sets implied_constant to the largest row value and the verdict from classify_rows().
    void finalize() {
        implied_constant = 0.0;
        for (const auto& r : rows) implied_constant = std::max(implied_constant, r.implied);
        verdict = classify_rows(rows);
    }

    double value(const std::string& name) const {
        for (const auto& [k, v] : measured)
            if (k == name) return v;
        throw std::out_of_range("report " + estimate_id + ": no measured value '" + name + "'");
    }
    void set(const std::string& name, double v) {
        for (auto& [k, old] : measured)
            if (k == name) {
                old = v;
                return;
            }
        measured.emplace_back(name, v);
    }
    std::vector<double> column(const std::string& name) const {
        const auto it = std::find(param_names.begin(), param_names.end(), name);
        if (it == param_names.end()) throw std::out_of_range("report " + estimate_id + ": no column '" + name + "'");
        const auto k = static_cast<std::size_t>(it - param_names.begin());
        std::vector<double> out;
        for (const auto& r : rows) out.push_back(r.params[k]);
        return out;
    }

    void write_csv(std::ostream& os) const {
        os << "probe,scale";
        for (const auto& n : param_names) os << "," << n;
        os << ",lhs,rhs,implied_constant\n";
        for (const auto& r : rows) {
            os << r.probe << "," << r.scale;
            for (double v : r.params) os << "," << format_number(v);
            os << "," << format_number(r.lhs) << "," << format_number(r.rhs) << "," << format_number(r.implied) << "\n";
        }
    }

    std::string summary_line() const {
        return estimate_id + "," + to_string(verdict) + "," + format_number(implied_constant);
    }

    static std::string format_number(double v) {
        if (std::isnan(v)) return "nan";
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        std::ostringstream os;
        os << std::setprecision(17) << v;
        return os.str();
    }
};

}  // namespace dnl
