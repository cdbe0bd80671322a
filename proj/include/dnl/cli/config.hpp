#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "dnl/error.hpp"

namespace dnl::cli {

enum class ValueType { real, integer, text, real_list, boolean, choice };

struct KeySpec {
    std::string section;
    std::string name;
    ValueType type = ValueType::real;
    std::string default_value;
    std::string help;
    std::vector<std::string> choices;
};

/// Keys accepted by one subcommand. Names are unique across sections, so every key doubles as a `--name` flag.
struct Schema {
    std::string subcommand;
    std::string help;
    std::vector<KeySpec> keys;

    const KeySpec* find(std::string_view name) const {
        for (const auto& k : keys)
            if (k.name == name) return &k;
        return nullptr;
    }
    bool has_section(std::string_view section) const {
        return std::any_of(keys.begin(), keys.end(), [&](const KeySpec& k) { return k.section == section; });
    }
    std::vector<std::string> sections() const {
        std::vector<std::string> out;
        for (const auto& k : keys)
            if (std::find(out.begin(), out.end(), k.section) == out.end()) out.push_back(k.section);
        return out;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool parse_real(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

/// Shortest text that reads back to the same double.
inline std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// Canonical form of a raw value; the message describes the problem when the value is invalid.
inline bool canonical_value(const KeySpec& spec, std::string_view raw, std::string& out, std::string& message) {
    raw = trim(raw);
    switch (spec.type) {
        case ValueType::real: {
            double v;
            if (!parse_real(raw, v)) {
                message = "expected a finite number";
                return false;
            }
            out = format_real(v);
            return true;
        }
        case ValueType::integer: {
            long v;
            std::string_view s = raw.size() && raw.front() == '+' ? raw.substr(1) : raw;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
                message = "expected an integer";
                return false;
            }
            out = std::to_string(v);
            return true;
        }
        case ValueType::real_list: {
            out.clear();
            if (raw.empty()) return true;
            for (auto item : split(raw, ',')) {
                double v;
                if (!parse_real(item, v)) {
                    message = "expected a comma-separated list of finite numbers";
                    return false;
                }
                if (!out.empty()) out += ",";
                out += format_real(v);
            }
            return true;
        }
        case ValueType::boolean: {
            if (raw == "true" || raw == "1" || raw == "yes") out = "true";
            else if (raw == "false" || raw == "0" || raw == "no") out = "false";
            else {
                message = "expected true or false";
                return false;
            }
            return true;
        }
        case ValueType::choice: {
            if (std::find(spec.choices.begin(), spec.choices.end(), raw) == spec.choices.end()) {
                message = "expected one of";
                for (const auto& c : spec.choices) message += " " + c;
                return false;
            }
            out = std::string(raw);
            return true;
        }
        case ValueType::text: out = std::string(raw); return true;
    }
    return false;
}

}  // namespace detail

/// Resolved key-value tree for one subcommand. Every schema key is present; values are stored canonically.
class ExperimentConfig {
public:
    explicit ExperimentConfig(const Schema& schema) : schema_(&schema) {
        for (const auto& k : schema.keys) values_[k.name] = k.default_value;
        output_ = schema.subcommand;
    }

    const Schema& schema() const { return *schema_; }
    const std::string& subcommand() const { return schema_->subcommand; }
    const std::string& output() const { return output_; }
    void set_output(std::string prefix) {
        if (prefix.empty()) throw ConfigError("output prefix must not be empty");
        output_ = std::move(prefix);
    }

    /// Validates and stores a value; line/column locate it in a config file when known.
    void set(std::string_view name, std::string_view raw, int line = 0, int column = 0) {
        const KeySpec* spec = schema_->find(name);
        if (!spec) throw ConfigError("unknown key '" + std::string(name) + "' for " + subcommand(), line, column);
        std::string canon, message;
        if (!detail::canonical_value(*spec, raw, canon, message))
            throw ConfigError("invalid value '" + std::string(detail::trim(raw)) + "' for '" + spec->name + "': " + message,
                              line, column);
        values_[spec->name] = canon;
    }

    const std::string& raw(std::string_view name) const {
        const auto it = values_.find(std::string(name));
        if (it == values_.end()) throw ConfigError("no key '" + std::string(name) + "' for " + subcommand());
        return it->second;
    }
    double real(std::string_view name) const {
        double v = 0.0;
        detail::parse_real(raw(name), v);
        return v;
    }
    int integer(std::string_view name) const { return std::stoi(raw(name)); }
    bool flag(std::string_view name) const { return raw(name) == "true"; }
    const std::string& text(std::string_view name) const { return raw(name); }
    std::vector<double> list(std::string_view name) const {
        std::vector<double> out;
        const auto& s = raw(name);
        if (s.empty()) return out;
        for (auto item : detail::split(s, ',')) {
            double v = 0.0;
            detail::parse_real(item, v);
            out.push_back(v);
        }
        return out;
    }

    /// Text in the config grammar; parse_config(to_text()) reproduces this object.
    std::string to_text() const {
        std::ostringstream os;
        os << "subcommand = " << subcommand() << "\n";
        os << "output = " << output_ << "\n";
        for (const auto& section : schema_->sections()) {
            os << "\n[" << section << "]\n";
            for (const auto& k : schema_->keys)
                if (k.section == section) os << k.name << " = " << values_.at(k.name) << "\n";
        }
        return os.str();
    }

    bool operator==(const ExperimentConfig& o) const {
        return schema_->subcommand == o.schema_->subcommand && output_ == o.output_ && values_ == o.values_;
    }

private:
    const Schema* schema_;
    std::string output_;
    std::map<std::string, std::string> values_;
};

/// Applies config text on top of cfg. Grammar, one statement per line:
///   # comment            (from '#' to end of line)
///   [section]
///   key = value
/// Keys before the first section header are top-level: `subcommand` and `output`.
inline void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
    std::string section;
    bool seen_key[2] = {false, false};
    std::map<std::string, int> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        const int indent = static_cast<int>(body.data() - line.data()) + 1;
        if (body.front() == '[') {
            if (body.back() != ']') throw ConfigError("section header must end with ']'", line_no, indent);
            section = std::string(detail::trim(body.substr(1, body.size() - 2)));
            if (section.empty()) throw ConfigError("empty section name", line_no, indent);
            if (!cfg.schema().has_section(section))
                throw ConfigError("unknown section [" + section + "] for " + cfg.subcommand(), line_no, indent);
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no, indent);
        const auto key = detail::trim(body.substr(0, eq));
        const auto value = detail::trim(body.substr(eq + 1));
        const int value_col = static_cast<int>(value.data() - line.data()) + 1;
        if (key.empty()) throw ConfigError("missing key before '='", line_no, indent);
        if (section.empty()) {
            if (key == "subcommand") {
                if (seen_key[0]) throw ConfigError("duplicate key 'subcommand'", line_no, indent);
                seen_key[0] = true;
                if (value != cfg.subcommand())
                    throw ConfigError("config is for subcommand '" + std::string(value) + "', not " + cfg.subcommand(),
                                      line_no, value_col);
                continue;
            }
            if (key == "output") {
                if (seen_key[1]) throw ConfigError("duplicate key 'output'", line_no, indent);
                seen_key[1] = true;
                if (value.empty()) throw ConfigError("output prefix must not be empty", line_no, value_col);
                cfg.set_output(std::string(value));
                continue;
            }
            throw ConfigError("key '" + std::string(key) + "' must appear inside a section", line_no, indent);
        }
        const KeySpec* spec = cfg.schema().find(key);
        if (!spec || spec->section != section)
            throw ConfigError("unknown key '" + std::string(key) + "' in [" + section + "]" +
                                  (spec ? " (it belongs in [" + spec->section + "])" : ""),
                              line_no, indent);
        if (!seen.emplace(spec->name, line_no).second)
            throw ConfigError("duplicate key '" + spec->name + "'", line_no, indent);
        cfg.set(key, value, line_no, value_col);
    }
}

/// The subcommand named by a `subcommand = ...` line, if any.
inline std::string declared_subcommand(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = detail::trim(body);
        if (body.empty()) continue;
        if (body.front() == '[') break;
        const auto eq = body.find('=');
        if (eq != std::string_view::npos && detail::trim(body.substr(0, eq)) == "subcommand")
            return std::string(detail::trim(body.substr(eq + 1)));
    }
    return {};
}

}  // namespace dnl::cli
