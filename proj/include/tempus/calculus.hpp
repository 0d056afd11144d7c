#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tempus/errors.hpp"
#include "tempus/grid_function.hpp"
#include "tempus/time_scale.hpp"

namespace tempus {

/// Forward-difference delta derivative: result[i] = (f[i+1]-f[i])/mu(t_i).
/// At the right endpoint the formula is undefined (mu = 0), so the last
/// interior value is copied; none of the residual or certificate formulas
/// ever read that entry.
inline GridFunction delta_derivative(const GridFunction& f) {
    const TimeScale& ts = f.time_scale();
    const std::size_t n = f.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        d[i] = (f[i + 1] - f[i]) / ts.graininess(i);
    }
    d[n - 1] = d[n - 2];
    return f.with_values(std::move(d));
}

/// Delta integral over [t_i, t_j): the left-weighted sum of mu(t_k)*f(t_k).
/// Zero when i == j; additive over adjacent index ranges.
inline double delta_integral(const GridFunction& f, std::size_t i, std::size_t j) {
    if (i > j) {
        throw Error(ErrorKind::InvalidArgument,
                    "delta_integral needs i <= j, got i=" + std::to_string(i) +
                        " j=" + std::to_string(j));
    }
    if (j >= f.size()) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "delta_integral: j=" + std::to_string(j) + " >= n=" + std::to_string(f.size()));
    }
    const TimeScale& ts = f.time_scale();
    double sum = 0.0;
    for (std::size_t k = i; k < j; ++k) sum += ts.graininess(k) * f[k];
    return sum;
}

/// The regressive-group inverse: (circle_minus p)(t) = -p(t)/(1 + mu(t)p(t)).
/// An involution, and e_{circle_minus p} = 1/e_p.
inline Coefficient circle_minus(const Coefficient& p) {
    p.require_regressive("circle_minus");
    const TimeScale& ts = p.fn().time_scale();
    std::vector<double> v(p.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = -p[i] / (1.0 + ts.graininess(i) * p[i]);
    }
    return Coefficient(p.fn().with_values(std::move(v)));
}

namespace detail {

inline double checked_factor(const Coefficient& p, std::size_t k, const char* what) {
    if (!p.regressive_at(k)) {
        throw Error(ErrorKind::NonRegressive,
                    std::string(what) + ": 1 + mu*p within tolerance of 0 at index " +
                        std::to_string(k));
    }
    return 1.0 + p.fn().time_scale().graininess(k) * p[k];
}

} // namespace detail

/// Generalized exponential e_p(t_i, t_j). On an isolated grid this is the
/// product prod_{k=j}^{i-1} (1 + mu(t_k) p(t_k)) for i >= j, and the
/// reciprocal of the forward product for i < j. e_p(t, t) = 1.
inline double ts_exponential(const Coefficient& p, std::size_t i, std::size_t j) {
    const std::size_t n = p.size();
    if (i >= n || j >= n) {
        throw Error(ErrorKind::IndexOutOfRange, "ts_exponential: index past end of grid");
    }
    if (i == j) return 1.0;
    const bool forward = i > j;
    const std::size_t lo = forward ? j : i;
    const std::size_t hi = forward ? i : j;
    double prod = 1.0;
    for (std::size_t k = lo; k < hi; ++k) {
        prod *= detail::checked_factor(p, k, "ts_exponential");
    }
    return forward ? prod : 1.0 / prod;
}

/// e_p(t_i, t_anchor) for every i, built from a single running product so
/// that consecutive values satisfy v[i+1] = (1 + mu*p)*v[i] to one rounding.
inline GridFunction exponential_grid(const Coefficient& p, std::size_t anchor) {
    const std::size_t n = p.size();
    if (anchor >= n) {
        throw Error(ErrorKind::IndexOutOfRange, "exponential_grid: anchor past end of grid");
    }
    std::vector<double> v(n);
    v[anchor] = 1.0;
    for (std::size_t k = anchor; k + 1 < n; ++k) {
        v[k + 1] = v[k] * detail::checked_factor(p, k, "exponential_grid");
    }
    for (std::size_t k = anchor; k > 0; --k) {
        v[k - 1] = v[k] / detail::checked_factor(p, k - 1, "exponential_grid");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(v[i])) {
            throw Error(ErrorKind::NonFiniteValue,
                        "exponential_grid overflowed double range at index " + std::to_string(i));
        }
    }
    return p.fn().with_values(std::move(v));
}

} // namespace tempus
