#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tempus/equation.hpp"
#include "tempus/errors.hpp"
#include "tempus/hyers_ulam.hpp"
#include "tempus/perturbation.hpp"

namespace tempus {

/// Certifies an approximate solution y against the equation, dispatching to
/// the matching construction:
///   - first order                      -> certify_first_order
///   - second order, constant, f == 0,
///     no Riccati data                  -> certify_second_order_cc
///   - second order, constant, else     -> certify_second_order_icc
///     (with Riccati data supplied      -> certify_second_order_ivc on the
///      broadcast constant grids, for cross-checking the two pipelines)
///   - second order, variable           -> certify_second_order_ivc
inline CertificationResult certify_equation(const EquationSpec& eq, const GridFunction& y) {
    eq.validate();
    switch (eq.kind) {
        case EquationKind::FirstOrder:
            return certify_first_order(y, Coefficient(*eq.d), eq.forcing());
        case EquationKind::SecondOrderConstant: {
            if (eq.riccati_seed || eq.riccati_values) {
                return certify_second_order_ivc(y, eq.coeff_p(), eq.coeff_q(), eq.forcing(),
                                                eq.riccati());
            }
            if (eq.homogeneous()) {
                return certify_second_order_cc(y, eq.alpha, eq.beta);
            }
            return certify_second_order_icc(y, eq.alpha, eq.beta, eq.forcing());
        }
        case EquationKind::SecondOrderVariable:
            return certify_second_order_ivc(y, *eq.p, *eq.q, eq.forcing(), eq.riccati());
    }
    throw Error(ErrorKind::InvalidArgument, "unknown equation kind");
}

/// One campaign trial as reported in the CSV.
struct TrialRow {
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    std::optional<double> analytic_constant;
    double empirical_constant = 0.0;
    double sup_deviation = 0.0;
    double solution_residual = 0.0;
    Verdict verdict = Verdict::Fail;
};

/// Aggregate over a campaign. worst_trial_seed is the seed of the trial
/// attaining max_empirical_constant (first such trial on ties).
struct CampaignReport {
    std::size_t trials = 0;
    std::size_t pass_count = 0;
    double max_empirical_constant = 0.0;
    double max_analytic_constant = 0.0;
    std::uint64_t worst_trial_seed = 0;
    std::vector<TrialRow> rows;

    bool all_passed() const noexcept { return pass_count == trials; }
};

/// Runs `trials` independent certifications with per-trial seeds
/// seed, seed+1, ... Deterministic in its inputs; trial outcomes do not
/// depend on evaluation order (aggregation is by max and count). Hard
/// certifier errors propagate with the failing seed named.
inline CampaignReport run_campaign(const EquationSpec& eq, const PerturbationSpec& pert,
                                   std::size_t trials) {
    eq.validate();
    pert.validate();
    CampaignReport report;
    report.trials = trials;
    report.rows.reserve(trials);
    bool have_worst = false;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t seed = pert.seed + t;
        const PerturbationSpec trial_spec = pert.with_seed(seed);
        try {
            const GridFunction y = perturb(eq, trial_spec);
            const CertificationResult result = certify_equation(eq, y);
            const StabilityCertificate& cert = result.cert;
            TrialRow row;
            row.seed = seed;
            row.epsilon = cert.epsilon;
            row.analytic_constant = cert.analytic_constant;
            row.empirical_constant = cert.empirical_constant;
            row.sup_deviation = cert.sup_deviation;
            row.solution_residual = cert.solution_residual;
            row.verdict = cert.verdict;
            if (cert.passed()) ++report.pass_count;
            if (!have_worst || cert.empirical_constant > report.max_empirical_constant) {
                have_worst = true;
                report.max_empirical_constant = cert.empirical_constant;
                report.worst_trial_seed = seed;
            }
            if (cert.analytic_constant) {
                report.max_analytic_constant =
                    std::max(report.max_analytic_constant, *cert.analytic_constant);
            }
            report.rows.push_back(row);
        } catch (const Error& e) {
            throw Error(e.kind(),
                        "trial with seed " + std::to_string(seed) + " failed: " + e.what());
        }
    }
    return report;
}

} // namespace tempus
