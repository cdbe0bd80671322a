#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "dnl/cli/commands.hpp"
#include "dnl/cli/presets.hpp"

namespace dnl::cli {

/// `.meta` body: the resolved config followed by the result as comment lines, so the file parses back as a config.
inline std::string meta_text(const ExperimentConfig& cfg, const RunResult& r) {
    std::ostringstream os;
    os << cfg.to_text() << "\n# result\n";
    os << "# status = " << r.status << "\n";
    os << "# exit_code = " << r.exit_code << "\n";
    for (const auto& [k, v] : r.measured) os << "# " << k << " = " << DiagnosticReport::format_number(v) << "\n";
    for (const auto& line : r.lines) os << "# | " << line << "\n";
    return os.str();
}

inline void write_outputs(const ExperimentConfig& cfg, const RunResult& r) {
    const std::filesystem::path prefix(cfg.output());
    if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
    auto write = [](const std::filesystem::path& path, const std::string& body) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << body;
    };
    write(cfg.output() + ".csv", r.csv);
    write(cfg.output() + ".meta", meta_text(cfg, r));
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

/// Command-line entry point. Returns 0 on bounded/pass, 2 on diverging/fail/inconclusive, 1 on errors.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"dnl_lab: experiments for the doubly non-linear parabolic equation"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "show help for every subcommand");

    struct Invocation {
        std::string config_path, preset_name, output;
        bool print_config = false;
        std::map<std::string, std::string> flags;
    };
    std::map<std::string, Invocation> inv;

    auto* list = app.add_subcommand("presets", "list shipped presets");
    for (const auto& schema : schemas()) {
        auto* sub = app.add_subcommand(schema.subcommand, schema.help);
        auto& in = inv[schema.subcommand];
        sub->add_option("--config", in.config_path, "config file in the key = value grammar");
        sub->add_option("--preset", in.preset_name, "start from a shipped preset");
        sub->add_option("--output", in.output, "output prefix for <prefix>.csv and <prefix>.meta");
        sub->add_flag("--print-config", in.print_config, "print the resolved config and exit");
        for (const auto& key : schema.keys) {
            std::string help = "[" + key.section + "] " + key.help;
            if (!key.default_value.empty()) help += " (default " + key.default_value + ")";
            if (!key.choices.empty()) {
                help += "; one of";
                for (const auto& c : key.choices) help += " " + c;
            }
            sub->add_option("--" + key.name, in.flags[key.name], help)->allow_extra_args(false);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitError;
    }

    if (list->parsed()) {
        for (const auto& p : presets()) {
            out << p.name << "  " << declared_subcommand(p.text);
            if (p.criterion > 0) out << "  criterion " << p.criterion;
            out << "  expect " << p.expect << "\n";
        }
        return kExitPass;
    }

    try {
        const auto* sub = app.get_subcommands().front();
        const auto& name = sub->get_name();
        const auto& in = inv.at(name);
        ExperimentConfig cfg(schema_for(name));
        if (!in.preset_name.empty()) {
            const auto& p = find_preset(in.preset_name);
            if (declared_subcommand(p.text) != name)
                throw ConfigError("preset '" + p.name + "' is for subcommand " + declared_subcommand(p.text));
            apply_config_text(cfg, p.text);
        }
        if (!in.config_path.empty()) {
            try {
                apply_config_text(cfg, read_file(in.config_path));
            } catch (const ConfigError& e) {
                throw ConfigError(in.config_path + ":" + e.what());
            }
        }
        for (const auto& key : cfg.schema().keys) {
            const auto* opt = sub->get_option("--" + key.name);
            if (opt->count() > 0) cfg.set(key.name, in.flags.at(key.name));
        }
        if (!in.output.empty()) cfg.set_output(in.output);

        if (in.print_config) {
            out << cfg.to_text();
            return kExitPass;
        }
        const auto result = execute(cfg);
        write_outputs(cfg, result);
        for (const auto& line : result.lines) out << line << "\n";
        out << name << ": " << result.status << " (wrote " << cfg.output() << ".csv, " << cfg.output() << ".meta)\n";
        return result.exit_code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace dnl::cli
