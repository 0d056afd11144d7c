#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "tempus/errors.hpp"
#include "tempus/grid_function.hpp"
#include "tempus/solvers.hpp"
#include "tempus/time_scale.hpp"

namespace tempus {

enum class EquationKind {
    FirstOrder,           // x^D = d(t) x + f(t)
    SecondOrderConstant,  // x^DD + alpha x^D + beta x = f(t)
    SecondOrderVariable,  // x^DD + p(t) x^D + q(t) x = f(t)
};

inline const char* to_string(EquationKind k) {
    switch (k) {
        case EquationKind::FirstOrder: return "first-order";
        case EquationKind::SecondOrderConstant: return "second-order-constant";
        case EquationKind::SecondOrderVariable: return "second-order-variable";
    }
    return "unknown";
}

/// Full description of one certification problem: the equation, its grid,
/// the forcing, the initial data of the exact baseline solution, and (for
/// the variable-coefficient factorization) how to obtain the Riccati z.
struct EquationSpec {
    EquationKind kind = EquationKind::SecondOrderConstant;
    TimeScalePtr ts;

    std::optional<GridFunction> d; // first-order coefficient
    double alpha = 0.0;            // second-order constant coefficients
    double beta = 0.0;
    std::optional<GridFunction> p; // second-order variable coefficients
    std::optional<GridFunction> q;
    std::optional<GridFunction> f; // forcing; absent means zero

    double x0 = 1.0; // baseline initial value at a
    double x1 = 1.0; // baseline second value (second order only)

    std::optional<double> riccati_seed;         // z(a) for the forward recursion
    std::optional<GridFunction> riccati_values; // externally supplied z

    GridFunction forcing() const {
        if (f) return *f;
        return GridFunction::zero(ts);
    }

    bool homogeneous() const {
        if (!f) return true;
        for (double v : f->values()) {
            if (v != 0.0) return false;
        }
        return true;
    }

    /// Variable-coefficient view of the second-order equation (constants are
    /// broadcast to grids so both forms share one code path).
    GridFunction coeff_p() const {
        if (kind == EquationKind::SecondOrderVariable) return *p;
        return GridFunction::constant(ts, alpha);
    }

    GridFunction coeff_q() const {
        if (kind == EquationKind::SecondOrderVariable) return *q;
        return GridFunction::constant(ts, beta);
    }

    void validate() const {
        if (!ts) throw Error(ErrorKind::InvalidArgument, "equation has no time scale");
        switch (kind) {
            case EquationKind::FirstOrder:
                if (!d) throw Error(ErrorKind::InvalidArgument, "first-order equation needs d");
                require_aligned(*d, forcing(), "EquationSpec");
                break;
            case EquationKind::SecondOrderConstant:
                if (ts->size() < 3) {
                    throw Error(ErrorKind::TooFewPoints, "second-order equation needs n >= 3");
                }
                break;
            case EquationKind::SecondOrderVariable:
                if (!p || !q) {
                    throw Error(ErrorKind::InvalidArgument,
                                "variable-coefficient equation needs p and q");
                }
                if (ts->size() < 3) {
                    throw Error(ErrorKind::TooFewPoints, "second-order equation needs n >= 3");
                }
                require_aligned(*p, *q, "EquationSpec");
                require_aligned(*p, forcing(), "EquationSpec");
                if (!riccati_seed && !riccati_values) {
                    throw Error(ErrorKind::RiccatiConditions,
                                "variable-coefficient certification needs a Riccati seed or "
                                "inline z values");
                }
                break;
        }
    }

    /// The exact baseline solution the perturbation harness perturbs:
    /// first order by the forward recurrence, second order by the
    /// three-term recurrence oracle. Exact on the grid by construction.
    GridFunction exact_solution() const {
        validate();
        if (kind == EquationKind::FirstOrder) {
            return first_order_recurrence(*d, forcing(), x0);
        }
        return recurrence_oracle_second_order(coeff_p(), coeff_q(), forcing(), x0, x1);
    }

    /// The Riccati solution used by the variable-coefficient factorization.
    /// Inline values win over a seed; with neither, for constant coefficients
    /// the stationary seed z(a) = -lambda1 is implied.
    RiccatiSolution riccati() const {
        const GridFunction pg = coeff_p();
        const GridFunction qg = coeff_q();
        if (riccati_values) return riccati_from_values(pg, qg, *riccati_values);
        if (riccati_seed) return riccati_forward(pg, qg, *riccati_seed);
        if (kind == EquationKind::SecondOrderConstant) {
            const CharacteristicRoots roots = characteristic_roots(alpha, beta);
            return riccati_forward(pg, qg, -roots.lambda1);
        }
        throw Error(ErrorKind::RiccatiConditions,
                    "variable-coefficient certification needs a Riccati seed or inline z values");
    }
};

} // namespace tempus
