#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tempus/equation.hpp"
#include "tempus/errors.hpp"
#include "tempus/grid_function.hpp"
#include "tempus/rng.hpp"
#include "tempus/solvers.hpp"

namespace tempus {

enum class PerturbationKind {
    PointwiseUniform, // iid noise in [-m, m] on the values
    SingleSpike,      // one interior value moved by exactly +-m
    SmoothBump,       // scaled bump profile, sup-norm m
    ResidualTargeted, // defect forced into the equation; residual exactly m
};

inline const char* to_string(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::PointwiseUniform: return "pointwise-uniform";
        case PerturbationKind::SingleSpike: return "single-spike";
        case PerturbationKind::SmoothBump: return "smooth-bump";
        case PerturbationKind::ResidualTargeted: return "residual-targeted";
    }
    return "unknown";
}

/// Deterministic perturbation recipe: (kind, magnitude, seed) fully determine
/// the output. pin_endpoints keeps the first two values at their exact
/// baseline (so certifiers anchored at the left endpoint see exact data).
struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::PointwiseUniform;
    double magnitude = 0.0;
    std::uint64_t seed = 0;
    bool pin_endpoints = true;

    void validate() const {
        if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
            throw Error(ErrorKind::InvalidArgument, "perturbation magnitude must be >= 0");
        }
    }

    PerturbationSpec with_seed(std::uint64_t s) const {
        PerturbationSpec out = *this;
        out.seed = s;
        return out;
    }
};

namespace detail {

inline std::size_t first_free_index(const PerturbationSpec& spec) {
    return spec.pin_endpoints ? 2 : 0;
}

/// Additive value-space noise with sup-norm at most (and for the spike kind,
/// exactly) spec.magnitude.
inline std::vector<double> value_noise(const TimeScale& ts, const PerturbationSpec& spec) {
    const std::size_t n = ts.size();
    std::vector<double> delta(n, 0.0);
    const double m = spec.magnitude;
    if (m == 0.0) return delta;
    SplitMix64 rng(spec.seed);
    const std::size_t lo = std::min(first_free_index(spec), n - 1);
    switch (spec.kind) {
        case PerturbationKind::PointwiseUniform: {
            for (std::size_t i = lo; i < n; ++i) delta[i] = rng.uniform(-m, m);
            break;
        }
        case PerturbationKind::SingleSpike: {
            // One interior point (never the anchored left data, never the
            // right endpoint when avoidable) moved by exactly +-m.
            const std::size_t hi = n >= 2 ? n - 2 : n - 1;
            const std::size_t span = hi >= lo ? hi - lo + 1 : 1;
            const std::size_t k = lo + static_cast<std::size_t>(rng.below(span));
            delta[std::min(k, n - 1)] = rng.sign() * m;
            break;
        }
        case PerturbationKind::SmoothBump: {
            // exp(-r^2/(1-r^2)) bump centered inside the middle half of the
            // interval, renormalized so its grid maximum is exactly m.
            const double a = ts.a();
            const double b = ts.b();
            const double center = a + (b - a) * rng.uniform(0.3, 0.7);
            const double radius = (b - a) * rng.uniform(0.2, 0.45);
            const double sgn = rng.sign();
            double peak = 0.0;
            for (std::size_t i = lo; i < n; ++i) {
                const double r = (ts.point(i) - center) / radius;
                const double r2 = r * r;
                delta[i] = r2 < 1.0 ? std::exp(-r2 / (1.0 - r2)) : 0.0;
                peak = std::max(peak, delta[i]);
            }
            if (peak == 0.0) {
                // Degenerate draw (no grid point under the bump): fall back
                // to a spike at the first free index.
                delta[lo] = sgn * m;
            } else {
                for (std::size_t i = lo; i < n; ++i) delta[i] *= sgn * m / peak;
            }
            break;
        }
        case PerturbationKind::ResidualTargeted:
            throw Error(ErrorKind::InvalidArgument,
                        "residual-targeted perturbation needs the equation; use "
                        "perturb(EquationSpec, PerturbationSpec)");
    }
    return delta;
}

/// Defect grid for the residual-targeted kind: iid values in [-m, m] on the
/// indices the residual sup ranges over, with one of them forced to exactly
/// +-m so the resulting residual equals m by construction.
inline std::vector<double> defect_noise(std::size_t n, std::size_t valid, // defect indices [0, valid)
                                        const PerturbationSpec& spec) {
    std::vector<double> delta(n, 0.0);
    const double m = spec.magnitude;
    if (m == 0.0 || valid == 0) return delta;
    SplitMix64 rng(spec.seed);
    for (std::size_t i = 0; i < valid; ++i) delta[i] = rng.uniform(-m, m);
    const std::size_t k = static_cast<std::size_t>(rng.below(valid));
    delta[k] = rng.sign() * m;
    return delta;
}

} // namespace detail

/// Value-space perturbation of an exact solution (pointwise kinds only):
/// deterministic in (x_exact, spec), sup|y - x_exact| <= magnitude.
inline GridFunction perturb(const GridFunction& x_exact, const PerturbationSpec& spec) {
    spec.validate();
    const std::vector<double> delta = detail::value_noise(x_exact.time_scale(), spec);
    std::vector<double> y(x_exact.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x_exact[i] + delta[i];
    return x_exact.with_values(std::move(y));
}

/// Equation-aware perturbation. Pointwise kinds perturb the baseline's
/// values; the residual-targeted kind instead draws a defect grid with sup
/// exactly `magnitude` and re-solves the recurrence with forcing f + defect,
/// so the returned y has equation residual exactly `magnitude` (up to
/// rounding) and exact initial data.
inline GridFunction perturb(const EquationSpec& eq, const PerturbationSpec& spec) {
    spec.validate();
    eq.validate();
    if (spec.kind != PerturbationKind::ResidualTargeted) {
        return perturb(eq.exact_solution(), spec);
    }
    const std::size_t n = eq.ts->size();
    const GridFunction f = eq.forcing();
    if (eq.kind == EquationKind::FirstOrder) {
        const std::size_t valid = n - 1;
        const GridFunction bumped =
            f + f.with_values(detail::defect_noise(n, valid, spec));
        return first_order_recurrence(*eq.d, bumped, eq.x0);
    }
    const std::size_t valid = n - 2;
    const GridFunction bumped = f + f.with_values(detail::defect_noise(n, valid, spec));
    return recurrence_oracle_second_order(eq.coeff_p(), eq.coeff_q(), bumped, eq.x0, eq.x1);
}

} // namespace tempus
