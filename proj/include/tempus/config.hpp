#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tempus/equation.hpp"
#include "tempus/errors.hpp"
#include "tempus/expr.hpp"
#include "tempus/family.hpp"
#include "tempus/grid_function.hpp"
#include "tempus/perturbation.hpp"
#include "tempus/time_scale.hpp"

namespace tempus {

struct OutputConfig {
    std::string dir = ".";
    std::string format = "csv"; // "csv" | "json"
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& msg) {
    throw Error(ErrorKind::ConfigError, msg);
}

inline const nlohmann::json& need(const nlohmann::json& j, const char* key, const char* ctx) {
    const auto it = j.find(key);
    if (it == j.end()) config_fail(std::string(ctx) + ": missing key \"" + key + "\"");
    return *it;
}

inline double need_number(const nlohmann::json& j, const char* key, const char* ctx) {
    const nlohmann::json& v = need(j, key, ctx);
    if (!v.is_number()) config_fail(std::string(ctx) + ": key \"" + key + "\" must be a number");
    return v.get<double>();
}

inline std::uint64_t need_count(const nlohmann::json& j, const char* key, const char* ctx) {
    const nlohmann::json& v = need(j, key, ctx);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    config_fail(std::string(ctx) + ": key \"" + key + "\" must be a non-negative integer");
}

inline std::string need_string(const nlohmann::json& j, const char* key, const char* ctx) {
    const nlohmann::json& v = need(j, key, ctx);
    if (!v.is_string()) config_fail(std::string(ctx) + ": key \"" + key + "\" must be a string");
    return v.get<std::string>();
}

inline std::vector<double> need_number_array(const nlohmann::json& j, const char* key,
                                             const char* ctx) {
    const nlohmann::json& v = need(j, key, ctx);
    if (!v.is_array()) config_fail(std::string(ctx) + ": key \"" + key + "\" must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) {
            config_fail(std::string(ctx) + ": key \"" + key + "\" must contain only numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

/// A coefficient or forcing entry: a plain number (constant on the grid) or
/// an expression string over t.
struct ScalarOrExpr {
    bool is_expr = false;
    double value = 0.0;
    std::string expr;

    static ScalarOrExpr parse(const nlohmann::json& v, const char* key, const char* ctx) {
        ScalarOrExpr out;
        if (v.is_number()) {
            out.value = v.get<double>();
            return out;
        }
        if (v.is_string()) {
            out.is_expr = true;
            out.expr = v.get<std::string>();
            try {
                Expr::parse(out.expr); // validate now so errors name the key
            } catch (const Error& e) {
                config_fail(std::string(ctx) + ": key \"" + key + "\": " + e.what());
            }
            return out;
        }
        config_fail(std::string(ctx) + ": key \"" + key +
                    "\" must be a number or an expression string");
    }

    nlohmann::json to_json() const {
        if (is_expr) return expr;
        return value;
    }

    GridFunction evaluate(const TimeScalePtr& ts) const {
        if (is_expr) return Expr::parse(expr).evaluate_on(ts);
        return GridFunction::constant(ts, value);
    }
};

} // namespace detail

/// Parsed and validated problem description. Round-trips: to_json() emits a
/// normalized document (defaults made explicit) that parses back equal.
struct ProblemConfig {
    TimeScaleFamily family;

    int order = 2;
    std::string coeff_mode = "constant"; // "constant" | "variable"
    detail::ScalarOrExpr d;              // order 1
    double alpha = 0.0;                  // order 2 constant
    double beta = 0.0;
    detail::ScalarOrExpr p; // order 2 variable
    detail::ScalarOrExpr q;
    detail::ScalarOrExpr forcing; // defaults to 0
    double x0 = 1.0;
    double x1 = 1.0;

    std::optional<PerturbationSpec> perturbation;
    std::optional<std::vector<double>> inline_y;

    std::optional<double> riccati_z0;
    std::optional<std::vector<double>> riccati_values;

    OutputConfig output;

    // ------------------------------------------------------------------
    static ProblemConfig from_json(const nlohmann::json& root);

    static ProblemConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) detail::config_fail("cannot open config file: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            detail::config_fail("config is not valid JSON: " + std::string(e.what()));
        }
        return from_json(j);
    }

    nlohmann::json to_json() const;

    bool operator==(const ProblemConfig& other) const { return to_json() == other.to_json(); }

    // ------------------------------------------------------------------
    TimeScalePtr build_timescale() const { return share(make_timescale(family)); }

    EquationSpec build_equation(const TimeScalePtr& ts) const {
        EquationSpec eq;
        eq.ts = ts;
        eq.x0 = x0;
        eq.x1 = x1;
        eq.f = forcing.evaluate(ts);
        if (order == 1) {
            eq.kind = EquationKind::FirstOrder;
            eq.d = d.evaluate(ts);
        } else if (coeff_mode == "constant") {
            eq.kind = EquationKind::SecondOrderConstant;
            eq.alpha = alpha;
            eq.beta = beta;
        } else {
            eq.kind = EquationKind::SecondOrderVariable;
            eq.p = p.evaluate(ts);
            eq.q = q.evaluate(ts);
        }
        if (riccati_z0) eq.riccati_seed = *riccati_z0;
        if (riccati_values) {
            if (riccati_values->size() != ts->size()) {
                detail::config_fail("riccati: key \"values\" has " +
                                    std::to_string(riccati_values->size()) + " entries, grid has " +
                                    std::to_string(ts->size()));
            }
            eq.riccati_values = GridFunction(ts, *riccati_values);
        }
        return eq;
    }

    /// The approximate solution to certify: inline values, or the seeded
    /// perturbation of the equation's exact baseline.
    GridFunction approximate_solution(const EquationSpec& eq) const {
        if (inline_y) {
            if (inline_y->size() != eq.ts->size()) {
                detail::config_fail("perturbation: key \"values\" has " +
                                    std::to_string(inline_y->size()) + " entries, grid has " +
                                    std::to_string(eq.ts->size()));
            }
            return GridFunction(eq.ts, *inline_y);
        }
        return perturb(eq, *perturbation);
    }
};

// ---------------------------------------------------------------------------

namespace detail {

inline TimeScaleFamily family_from_json(const nlohmann::json& j) {
    if (!j.is_object()) config_fail("timescale: must be an object");
    const std::string kind = need_string(j, "family", "timescale");
    if (kind == "uniform") {
        return TimeScaleFamily::uniform(need_number(j, "a", "timescale"),
                                        need_number(j, "b", "timescale"),
                                        need_number(j, "h", "timescale"));
    }
    if (kind == "q_scale") {
        return TimeScaleFamily::q_scale(need_number(j, "t0", "timescale"),
                                        need_number(j, "q", "timescale"),
                                        static_cast<std::size_t>(need_count(j, "n", "timescale")));
    }
    if (kind == "points") {
        return TimeScaleFamily::from_points(need_number_array(j, "points", "timescale"));
    }
    if (kind == "sample") {
        return TimeScaleFamily::sample(need_number(j, "a", "timescale"),
                                       need_number(j, "b", "timescale"),
                                       static_cast<std::size_t>(need_count(j, "n", "timescale")));
    }
    if (kind == "mixed") {
        const nlohmann::json& segs = need(j, "segments", "timescale");
        if (!segs.is_array() || segs.empty()) {
            config_fail("timescale: key \"segments\" must be a non-empty array");
        }
        std::vector<TimeScaleFamily> out;
        out.reserve(segs.size());
        for (const auto& s : segs) out.push_back(family_from_json(s));
        return TimeScaleFamily::mixed(std::move(out));
    }
    config_fail("timescale: unknown family \"" + kind + "\"");
}

inline nlohmann::json family_to_json(const TimeScaleFamily& f) {
    nlohmann::json j;
    switch (f.kind) {
        case TimeScaleFamily::Kind::Uniform:
            j["family"] = "uniform";
            j["a"] = f.a;
            j["b"] = f.b;
            j["h"] = f.h;
            break;
        case TimeScaleFamily::Kind::QScale:
            j["family"] = "q_scale";
            j["t0"] = f.t0;
            j["q"] = f.q;
            j["n"] = f.n;
            break;
        case TimeScaleFamily::Kind::Points:
            j["family"] = "points";
            j["points"] = f.points;
            break;
        case TimeScaleFamily::Kind::Sample:
            j["family"] = "sample";
            j["a"] = f.a;
            j["b"] = f.b;
            j["n"] = f.n;
            break;
        case TimeScaleFamily::Kind::Mixed: {
            j["family"] = "mixed";
            nlohmann::json segs = nlohmann::json::array();
            for (const auto& s : f.segments) segs.push_back(family_to_json(s));
            j["segments"] = std::move(segs);
            break;
        }
    }
    return j;
}

inline PerturbationKind perturbation_kind_from_string(const std::string& s) {
    if (s == "pointwise-uniform") return PerturbationKind::PointwiseUniform;
    if (s == "single-spike") return PerturbationKind::SingleSpike;
    if (s == "smooth-bump") return PerturbationKind::SmoothBump;
    if (s == "residual-targeted") return PerturbationKind::ResidualTargeted;
    config_fail("perturbation: unknown kind \"" + s + "\"");
}

} // namespace detail

inline ProblemConfig ProblemConfig::from_json(const nlohmann::json& root) {
    if (!root.is_object()) detail::config_fail("config: top level must be a JSON object");
    ProblemConfig cfg;

    cfg.family = detail::family_from_json(detail::need(root, "timescale", "config"));

    const nlohmann::json& eq = detail::need(root, "equation", "config");
    if (!eq.is_object()) detail::config_fail("equation: must be an object");
    const std::uint64_t order = detail::need_count(eq, "order", "equation");
    if (order != 1 && order != 2) detail::config_fail("equation: key \"order\" must be 1 or 2");
    cfg.order = static_cast<int>(order);
    if (eq.contains("forcing")) {
        cfg.forcing = detail::ScalarOrExpr::parse(eq.at("forcing"), "forcing", "equation");
    }
    cfg.x0 = eq.contains("x0") ? detail::need_number(eq, "x0", "equation") : 1.0;
    if (cfg.order == 1) {
        cfg.coeff_mode = "variable";
        cfg.d = detail::ScalarOrExpr::parse(detail::need(eq, "d", "equation"), "d", "equation");
    } else {
        cfg.x1 = eq.contains("x1") ? detail::need_number(eq, "x1", "equation") : 1.0;
        cfg.coeff_mode = detail::need_string(eq, "coefficients", "equation");
        if (cfg.coeff_mode == "constant") {
            cfg.alpha = detail::need_number(eq, "alpha", "equation");
            cfg.beta = detail::need_number(eq, "beta", "equation");
        } else if (cfg.coeff_mode == "variable") {
            cfg.p = detail::ScalarOrExpr::parse(detail::need(eq, "p", "equation"), "p", "equation");
            cfg.q = detail::ScalarOrExpr::parse(detail::need(eq, "q", "equation"), "q", "equation");
        } else {
            detail::config_fail("equation: key \"coefficients\" must be \"constant\" or "
                                "\"variable\"");
        }
    }

    const nlohmann::json& pert = detail::need(root, "perturbation", "config");
    if (!pert.is_object()) detail::config_fail("perturbation: must be an object");
    const bool has_values = pert.contains("values");
    const bool has_kind = pert.contains("kind");
    if (has_values == has_kind) {
        detail::config_fail("perturbation: exactly one of \"kind\" (a perturbation spec) or "
                            "\"values\" (an inline approximate solution) is required");
    }
    if (has_values) {
        cfg.inline_y = detail::need_number_array(pert, "values", "perturbation");
    } else {
        PerturbationSpec spec;
        spec.kind = detail::perturbation_kind_from_string(
            detail::need_string(pert, "kind", "perturbation"));
        spec.magnitude = detail::need_number(pert, "magnitude", "perturbation");
        if (spec.magnitude < 0.0) {
            detail::config_fail("perturbation: key \"magnitude\" must be >= 0");
        }
        spec.seed = detail::need_count(pert, "seed", "perturbation");
        spec.pin_endpoints =
            pert.contains("pin_endpoints") ? pert.at("pin_endpoints").get<bool>() : true;
        cfg.perturbation = spec;
    }

    if (root.contains("riccati")) {
        const nlohmann::json& ric = root.at("riccati");
        if (!ric.is_object()) detail::config_fail("riccati: must be an object");
        const bool has_z0 = ric.contains("z0");
        const bool has_zvalues = ric.contains("values");
        if (has_z0 == has_zvalues) {
            detail::config_fail("riccati: exactly one of \"z0\" or \"values\" is required");
        }
        if (has_z0) cfg.riccati_z0 = detail::need_number(ric, "z0", "riccati");
        if (has_zvalues) cfg.riccati_values = detail::need_number_array(ric, "values", "riccati");
    }
    if (cfg.order == 2 && cfg.coeff_mode == "variable" && !cfg.riccati_z0 && !cfg.riccati_values) {
        detail::config_fail("riccati: required for variable-coefficient second-order equations "
                            "(provide \"z0\" or \"values\")");
    }

    if (root.contains("output")) {
        const nlohmann::json& out = root.at("output");
        if (!out.is_object()) detail::config_fail("output: must be an object");
        if (out.contains("dir")) cfg.output.dir = detail::need_string(out, "dir", "output");
        if (out.contains("format")) {
            cfg.output.format = detail::need_string(out, "format", "output");
            if (cfg.output.format != "csv" && cfg.output.format != "json") {
                detail::config_fail("output: key \"format\" must be \"csv\" or \"json\"");
            }
        }
    }
    return cfg;
}

inline nlohmann::json ProblemConfig::to_json() const {
    nlohmann::json root;
    root["timescale"] = detail::family_to_json(family);

    nlohmann::json eq;
    eq["order"] = order;
    eq["forcing"] = forcing.to_json();
    eq["x0"] = x0;
    if (order == 1) {
        eq["d"] = d.to_json();
    } else {
        eq["x1"] = x1;
        eq["coefficients"] = coeff_mode;
        if (coeff_mode == "constant") {
            eq["alpha"] = alpha;
            eq["beta"] = beta;
        } else {
            eq["p"] = p.to_json();
            eq["q"] = q.to_json();
        }
    }
    root["equation"] = std::move(eq);

    nlohmann::json pert;
    if (inline_y) {
        pert["values"] = *inline_y;
    } else {
        pert["kind"] = to_string(perturbation->kind);
        pert["magnitude"] = perturbation->magnitude;
        pert["seed"] = perturbation->seed;
        pert["pin_endpoints"] = perturbation->pin_endpoints;
    }
    root["perturbation"] = std::move(pert);

    if (riccati_z0 || riccati_values) {
        nlohmann::json ric;
        if (riccati_z0) ric["z0"] = *riccati_z0;
        if (riccati_values) ric["values"] = *riccati_values;
        root["riccati"] = std::move(ric);
    }

    nlohmann::json out;
    out["dir"] = output.dir;
    out["format"] = output.format;
    root["output"] = std::move(out);
    return root;
}

} // namespace tempus
