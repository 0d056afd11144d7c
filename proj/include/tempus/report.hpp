#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tempus/campaign.hpp"
#include "tempus/format.hpp"
#include "tempus/hyers_ulam.hpp"

namespace tempus {

/// Fixed CSV schema shared by certify and campaign reports; one row per
/// certificate. analytic_constant is empty when the construction provides
/// no analytic bound; seed is empty when no perturbation seed applies.
inline std::string certificate_csv_header() {
    return "seed,epsilon,analytic_constant,empirical_constant,sup_deviation,"
           "solution_residual,verdict\n";
}

inline std::string certificate_csv_row(const std::optional<std::uint64_t>& seed,
                                       const StabilityCertificate& cert) {
    return csv_line({seed ? std::to_string(*seed) : std::string(),
                     format_double(cert.epsilon),
                     format_optional(cert.analytic_constant),
                     format_double(cert.empirical_constant),
                     format_double(cert.sup_deviation),
                     format_double(cert.solution_residual),
                     to_string(cert.verdict)});
}

inline std::string certificate_csv(const std::optional<std::uint64_t>& seed,
                                   const StabilityCertificate& cert) {
    return certificate_csv_header() + certificate_csv_row(seed, cert);
}

inline std::string campaign_csv(const CampaignReport& report) {
    std::string out = certificate_csv_header();
    for (const TrialRow& row : report.rows) {
        out += csv_line({std::to_string(row.seed),
                         format_double(row.epsilon),
                         format_optional(row.analytic_constant),
                         format_double(row.empirical_constant),
                         format_double(row.sup_deviation),
                         format_double(row.solution_residual),
                         to_string(row.verdict)});
    }
    return out;
}

inline nlohmann::json hypothesis_flags_json(const HypothesisFlags& flags) {
    nlohmann::json j;
    j["roots_distinct"] = flags.roots_distinct;
    j["roots_positive"] = flags.roots_positive;
    j["regressive_ok"] = flags.regressive_ok;
    j["riccati_ok"] = flags.riccati_ok;
    j["suprema_finite"] = flags.suprema_finite;
    j["outside_theorem_hypotheses"] = flags.outside_theorem_hypotheses;
    return j;
}

inline nlohmann::json certificate_json(const StabilityCertificate& cert) {
    nlohmann::json j;
    j["epsilon"] = cert.epsilon;
    j["analytic_constant"] =
        cert.analytic_constant ? nlohmann::json(*cert.analytic_constant) : nlohmann::json();
    j["empirical_constant"] = cert.empirical_constant;
    j["sup_deviation"] = cert.sup_deviation;
    j["solution_residual"] = cert.solution_residual;
    j["residual_scale"] = cert.residual_scale;
    j["lemma_inner"] = cert.lemma_inner ? nlohmann::json(*cert.lemma_inner) : nlohmann::json();
    j["lemma_outer"] = cert.lemma_outer ? nlohmann::json(*cert.lemma_outer) : nlohmann::json();
    j["inner_deviation"] =
        cert.inner_deviation ? nlohmann::json(*cert.inner_deviation) : nlohmann::json();
    j["g_z_deviation"] =
        cert.g_z_deviation ? nlohmann::json(*cert.g_z_deviation) : nlohmann::json();
    j["z_ode_defect"] = cert.z_ode_defect ? nlohmann::json(*cert.z_ode_defect) : nlohmann::json();
    j["construction"] = to_string(cert.construction);
    j["hypothesis_flags"] = hypothesis_flags_json(cert.hypothesis_flags);
    j["verdict"] = to_string(cert.verdict);
    return j;
}

inline nlohmann::json campaign_json(const CampaignReport& report) {
    nlohmann::json j;
    j["trials"] = report.trials;
    j["pass_count"] = report.pass_count;
    j["max_empirical_constant"] = report.max_empirical_constant;
    j["max_analytic_constant"] = report.max_analytic_constant;
    j["worst_trial_seed"] = report.worst_trial_seed;
    nlohmann::json rows = nlohmann::json::array();
    for (const TrialRow& row : report.rows) {
        nlohmann::json r;
        r["seed"] = row.seed;
        r["epsilon"] = row.epsilon;
        r["analytic_constant"] =
            row.analytic_constant ? nlohmann::json(*row.analytic_constant) : nlohmann::json();
        r["empirical_constant"] = row.empirical_constant;
        r["sup_deviation"] = row.sup_deviation;
        r["solution_residual"] = row.solution_residual;
        r["verdict"] = to_string(row.verdict);
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

/// The one-line human summary printed by the CLI.
inline std::string summary_line(const StabilityCertificate& cert) {
    std::string line = "epsilon=" + format_double(cert.epsilon);
    line += " analytic_constant=";
    line += cert.analytic_constant ? format_double(*cert.analytic_constant) : "absent";
    line += " empirical_constant=" + format_double(cert.empirical_constant);
    line += " sup_deviation=" + format_double(cert.sup_deviation);
    line += " solution_residual=" + format_double(cert.solution_residual);
    line += std::string(" verdict=") + to_string(cert.verdict);
    return line;
}

inline std::string campaign_summary_line(const CampaignReport& report) {
    std::string line = "trials=" + std::to_string(report.trials);
    line += " pass_count=" + std::to_string(report.pass_count);
    line += " max_empirical_constant=" + format_double(report.max_empirical_constant);
    line += " max_analytic_constant=" + format_double(report.max_analytic_constant);
    line += " worst_trial_seed=" + std::to_string(report.worst_trial_seed);
    line += report.all_passed() ? " verdict=pass" : " verdict=fail";
    return line;
}

} // namespace tempus
