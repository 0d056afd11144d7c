// tempus: certify Hyers-Ulam stability of dynamic equations on finite time
// scales. Subcommands: certify (one approximate solution), campaign
// (randomized trials), constants (stability-constant sweep over a grid
// parameter).
//
// Exit codes: 0 pass, 1 certification failure, 2 configuration error,
// 3 hypothesis violation (non-regressive coefficient, complex or repeated
// characteristic roots, Riccati breakdown).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tempus/config.hpp"
#include "tempus/report.hpp"
#include "tempus/tempus.hpp"

namespace {

int exit_code_for(const tempus::Error& e) {
    if (e.is_hypothesis_violation()) return 3;
    return e.kind() == tempus::ErrorKind::NonFiniteValue ? 1 : 2;
}

const char* exit_label(int code) {
    switch (code) {
        case 1: return "certification error";
        case 2: return "config error";
        case 3: return "hypothesis violation";
        default: return "error";
    }
}

struct CommonArgs {
    std::string config_path;
    std::string output_dir; // empty: take from config
    std::string format;     // empty: take from config
    bool dump_config = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "problem configuration (JSON)")->required();
    cmd->add_option("--output-dir", args.output_dir, "directory for report files");
    cmd->add_option("--format", args.format, "report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--dump-config", args.dump_config,
                  "echo the normalized configuration and exit");
}

/// Loads and normalizes the config; applies command-line overrides.
tempus::ProblemConfig load_config(const CommonArgs& args) {
    tempus::ProblemConfig cfg = tempus::ProblemConfig::from_file(args.config_path);
    if (!args.output_dir.empty()) cfg.output.dir = args.output_dir;
    if (!args.format.empty()) cfg.output.format = args.format;
    return cfg;
}

std::string report_path(const tempus::OutputConfig& out, const std::string& stem) {
    std::filesystem::create_directories(out.dir);
    return (std::filesystem::path(out.dir) / (stem + "." + out.format)).string();
}

int run_certify(const CommonArgs& args) {
    tempus::ProblemConfig cfg;
    try {
        cfg = load_config(args);
    } catch (const tempus::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (args.dump_config) {
        std::cout << cfg.to_json().dump(2) << "\n";
        return 0;
    }
    try {
        const tempus::TimeScalePtr ts = cfg.build_timescale();
        const tempus::EquationSpec eq = cfg.build_equation(ts);
        const tempus::GridFunction y = cfg.approximate_solution(eq);
        const tempus::CertificationResult result = tempus::certify_equation(eq, y);

        std::optional<std::uint64_t> seed;
        if (cfg.perturbation) seed = cfg.perturbation->seed;
        const std::string path = report_path(cfg.output, "certificate");
        if (cfg.output.format == "json") {
            nlohmann::json j = tempus::certificate_json(result.cert);
            if (seed) j["seed"] = *seed;
            tempus::write_text_file(path, j.dump(2) + "\n");
        } else {
            tempus::write_text_file(path, tempus::certificate_csv(seed, result.cert));
        }
        std::cout << tempus::summary_line(result.cert) << "\n";
        std::cout << "report: " << path << "\n";
        return result.cert.passed() ? 0 : 1;
    } catch (const tempus::Error& e) {
        const int code = exit_code_for(e);
        std::cerr << exit_label(code) << ": " << e.what() << "\n";
        return code;
    }
}

int run_campaign(const CommonArgs& args, std::size_t trials) {
    tempus::ProblemConfig cfg;
    try {
        cfg = load_config(args);
        if (!cfg.perturbation) {
            throw tempus::Error(tempus::ErrorKind::ConfigError,
                                "perturbation: campaigns need a perturbation spec (key \"kind\"), "
                                "not inline values");
        }
        if (const char* env = std::getenv("TEMPUS_SEED")) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(env, &end, 10);
            if (end == env || *end != '\0') {
                throw tempus::Error(tempus::ErrorKind::ConfigError,
                                    "TEMPUS_SEED must be a non-negative integer, got \"" +
                                        std::string(env) + "\"");
            }
            cfg.perturbation->seed = static_cast<std::uint64_t>(v);
        }
    } catch (const tempus::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (args.dump_config) {
        std::cout << cfg.to_json().dump(2) << "\n";
        return 0;
    }
    try {
        const tempus::TimeScalePtr ts = cfg.build_timescale();
        const tempus::EquationSpec eq = cfg.build_equation(ts);
        const tempus::CampaignReport report = tempus::run_campaign(eq, *cfg.perturbation, trials);

        const std::string path = report_path(cfg.output, "campaign");
        if (cfg.output.format == "json") {
            tempus::write_text_file(path, tempus::campaign_json(report).dump(2) + "\n");
        } else {
            tempus::write_text_file(path, tempus::campaign_csv(report));
        }
        std::cout << tempus::campaign_summary_line(report) << "\n";
        std::cout << "report: " << path << "\n";
        return report.all_passed() ? 0 : 1;
    } catch (const tempus::Error& e) {
        const int code = exit_code_for(e);
        std::cerr << exit_label(code) << ": " << e.what() << "\n";
        return code;
    }
}

struct Sweep {
    std::string param;
    std::vector<double> values;
};

Sweep parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size()) {
        throw tempus::Error(tempus::ErrorKind::ConfigError,
                            "--sweep expects NAME=v1,v2,... got \"" + text + "\"");
    }
    Sweep sweep;
    sweep.param = text.substr(0, eq);
    std::size_t pos = eq + 1;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            sweep.values.push_back(v);
        } catch (const std::exception&) {
            throw tempus::Error(tempus::ErrorKind::ConfigError,
                                "--sweep: bad number \"" + item + "\"");
        }
        pos = comma + 1;
    }
    if (sweep.values.empty()) {
        throw tempus::Error(tempus::ErrorKind::ConfigError, "--sweep: no values given");
    }
    return sweep;
}

tempus::TimeScaleFamily with_sweep_value(const tempus::TimeScaleFamily& family,
                                         const std::string& param, double value) {
    tempus::TimeScaleFamily out = family;
    using Kind = tempus::TimeScaleFamily::Kind;
    if (param == "h" && family.kind == Kind::Uniform) {
        out.h = value;
    } else if (param == "q" && family.kind == Kind::QScale) {
        out.q = value;
    } else if (param == "n" && (family.kind == Kind::QScale || family.kind == Kind::Sample)) {
        if (!(value >= 2.0) || value != std::floor(value)) {
            throw tempus::Error(tempus::ErrorKind::ConfigError,
                                "--sweep: n values must be integers >= 2");
        }
        out.n = static_cast<std::size_t>(value);
    } else {
        throw tempus::Error(tempus::ErrorKind::ConfigError,
                            "--sweep: parameter \"" + param +
                                "\" does not apply to this timescale family");
    }
    return out;
}

/// The inner/outer first-order factor coefficients of the second-order
/// factorization on the given grid, or the single coefficient (order 1).
struct FactorConstants {
    std::optional<double> L1; // inner
    std::optional<double> L2; // outer
};

FactorConstants factor_constants(const tempus::ProblemConfig& cfg, const tempus::TimeScalePtr& ts) {
    const tempus::EquationSpec eq = cfg.build_equation(ts);
    FactorConstants out;
    if (eq.kind == tempus::EquationKind::FirstOrder) {
        out.L1 = tempus::lemma_constant(tempus::Coefficient(*eq.d)).L;
        return out;
    }
    if (eq.kind == tempus::EquationKind::SecondOrderConstant && !eq.riccati_seed &&
        !eq.riccati_values) {
        const tempus::CharacteristicRoots roots =
            tempus::characteristic_roots(eq.alpha, eq.beta);
        out.L1 = tempus::lemma_constant(tempus::Coefficient::constant(ts, roots.lambda2)).L;
        out.L2 = tempus::lemma_constant(tempus::Coefficient::constant(ts, roots.lambda1)).L;
        return out;
    }
    const tempus::RiccatiSolution z = eq.riccati();
    out.L1 = tempus::lemma_constant(tempus::Coefficient(tempus::sigma_shift(z.z) - eq.coeff_p())).L;
    out.L2 = tempus::lemma_constant(tempus::Coefficient(-1.0 * z.z)).L;
    return out;
}

int run_constants(const CommonArgs& args, const std::string& sweep_text) {
    tempus::ProblemConfig cfg;
    Sweep sweep;
    try {
        cfg = load_config(args);
        sweep = parse_sweep(sweep_text);
        if (cfg.riccati_values) {
            throw tempus::Error(tempus::ErrorKind::ConfigError,
                                "riccati: sweeps rebuild the grid, so inline \"values\" cannot "
                                "be used; give \"z0\" instead");
        }
    } catch (const tempus::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (args.dump_config) {
        std::cout << cfg.to_json().dump(2) << "\n";
        return 0;
    }
    try {
        std::string csv = "param,value,L1,L2,product\n";
        for (const double value : sweep.values) {
            const tempus::TimeScaleFamily fam = with_sweep_value(cfg.family, sweep.param, value);
            const tempus::TimeScalePtr ts = tempus::share(tempus::make_timescale(fam));
            const FactorConstants c = factor_constants(cfg, ts);
            std::optional<double> product;
            if (c.L1 && c.L2) product = *c.L1 * *c.L2;
            csv += tempus::csv_line({sweep.param, tempus::format_double(value),
                                     tempus::format_optional(c.L1), tempus::format_optional(c.L2),
                                     tempus::format_optional(product)});
        }
        tempus::OutputConfig out = cfg.output;
        out.format = "csv"; // the sweep table is plot-ready CSV regardless of report format
        const std::string path = report_path(out, "constants");
        tempus::write_text_file(path, csv);
        std::cout << csv;
        std::cout << "report: " << path << "\n";
        return 0;
    } catch (const tempus::Error& e) {
        const int code = exit_code_for(e);
        std::cerr << exit_label(code) << ": " << e.what() << "\n";
        return code;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyers-Ulam stability certification for dynamic equations on time scales"};
    app.require_subcommand(1);

    CommonArgs certify_args;
    CLI::App* certify = app.add_subcommand("certify", "certify one approximate solution");
    add_common(certify, certify_args);

    CommonArgs campaign_args;
    std::size_t trials = 100;
    CLI::App* campaign = app.add_subcommand("campaign", "run randomized certification trials");
    add_common(campaign, campaign_args);
    campaign->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber);

    CommonArgs constants_args;
    std::string sweep_text;
    CLI::App* constants =
        app.add_subcommand("constants", "tabulate stability constants over a grid sweep");
    add_common(constants, constants_args);
    constants->add_option("--sweep", sweep_text, "parameter sweep, e.g. h=0.5,0.25,0.125")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (certify->parsed()) return run_certify(certify_args);
    if (campaign->parsed()) return run_campaign(campaign_args, trials);
    if (constants->parsed()) return run_constants(constants_args, sweep_text);
    return 2;
}
