#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tempus/calculus.hpp"
#include "tempus/errors.hpp"
#include "tempus/grid_function.hpp"
#include "tempus/tolerances.hpp"

namespace tempus {

// ---------------------------------------------------------------------------
// Characteristic roots
// ---------------------------------------------------------------------------

/// Roots of lambda^2 + alpha*lambda + beta = 0, canonically ordered
/// lambda1 <= lambda2.
struct CharacteristicRoots {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    bool distinct = false;
    bool both_positive = false;
};

/// Sign-aware quadratic formula: the large-magnitude root is computed first
/// and the other recovered from the product, avoiding cancellation.
/// A discriminant within tolerance of zero is clamped to a double root;
/// genuinely negative discriminants raise ErrorKind::ComplexRoots.
inline CharacteristicRoots characteristic_roots(double alpha, double beta) {
    const double disc = alpha * alpha - 4.0 * beta;
    const double disc_scale = std::max({1.0, alpha * alpha, std::abs(beta)});
    if (disc < -tol::kDiscriminant * disc_scale) {
        throw Error(ErrorKind::ComplexRoots,
                    "complex characteristic roots (discriminant " + std::to_string(disc) + ")");
    }
    const double sq = std::sqrt(std::max(disc, 0.0));
    CharacteristicRoots r;
    if (sq == 0.0) {
        r.lambda1 = r.lambda2 = -alpha / 2.0;
    } else {
        const double big = -0.5 * (alpha + std::copysign(sq, alpha));
        const double other = big != 0.0 ? beta / big : -alpha;
        r.lambda1 = std::min(big, other);
        r.lambda2 = std::max(big, other);
    }
    const double sep_scale = std::max({1.0, std::abs(r.lambda1), std::abs(r.lambda2)});
    r.distinct = (r.lambda2 - r.lambda1) > tol::kRootSeparation * sep_scale;
    r.both_positive = r.lambda1 > 0.0 && r.lambda2 > 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// Defect (residual) measurement
// ---------------------------------------------------------------------------

/// A sup-norm equation defect together with the magnitude of the terms it
/// was formed from; tolerance checks compare against residual <= tol*scale.
struct Defect {
    double residual = 0.0;
    double scale = 1.0;
};

/// max_i |x^D[i] - d[i]x[i] - f[i]| over i <= n-2 (where x^D is genuine).
inline Defect first_order_defect(const GridFunction& x, const GridFunction& d,
                                 const GridFunction& f) {
    require_aligned(x, d, "first_order_defect");
    require_aligned(x, f, "first_order_defect");
    const TimeScale& ts = x.time_scale();
    const std::size_t n = x.size();
    Defect out;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double xd = (x[i + 1] - x[i]) / ts.graininess(i);
        const double r = xd - d[i] * x[i] - f[i];
        out.residual = std::max(out.residual, std::abs(r));
        out.scale = std::max({out.scale, std::abs(xd), std::abs(d[i] * x[i]), std::abs(f[i])});
    }
    return out;
}

/// max_i |y^DD[i] + p[i]y^D[i] + q[i]y[i] - f[i]| over i <= n-3 (the indices
/// where the second forward difference is genuine). Needs n >= 3.
inline Defect second_order_defect(const GridFunction& y, const GridFunction& p,
                                  const GridFunction& q, const GridFunction& f) {
    require_aligned(y, p, "second_order_defect");
    require_aligned(y, q, "second_order_defect");
    require_aligned(y, f, "second_order_defect");
    const TimeScale& ts = y.time_scale();
    const std::size_t n = y.size();
    if (n < 3) {
        throw Error(ErrorKind::TooFewPoints, "second-order defect needs n >= 3");
    }
    Defect out;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double mu_i = ts.graininess(i);
        const double mu_n = ts.graininess(i + 1);
        const double yd_i = (y[i + 1] - y[i]) / mu_i;
        const double yd_n = (y[i + 2] - y[i + 1]) / mu_n;
        const double ydd = (yd_n - yd_i) / mu_i;
        const double r = ydd + p[i] * yd_i + q[i] * y[i] - f[i];
        out.residual = std::max(out.residual, std::abs(r));
        out.scale = std::max(
            {out.scale, std::abs(ydd), std::abs(p[i] * yd_i), std::abs(q[i] * y[i]), std::abs(f[i])});
    }
    return out;
}

inline double residual_first_order(const GridFunction& x, const GridFunction& d,
                                   const GridFunction& f) {
    return first_order_defect(x, d, f).residual;
}

inline double residual_second_order(const GridFunction& y, const GridFunction& p,
                                    const GridFunction& q, const GridFunction& f) {
    return second_order_defect(y, p, q, f).residual;
}

// ---------------------------------------------------------------------------
// First-order solver (variation of constants)
// ---------------------------------------------------------------------------

/// Solves x^D = d(t) x + f(t), x(a) = x0 by the variation-of-constants
/// formula
///     w(t_i) = e_d(t_i, a) x0 + sum_{k<i} e_d(t_i, sigma(t_k)) f(t_k) mu(t_k),
/// evaluated in integrating-factor form: w_i = E_i (x0 + I_i) with
/// E_i = e_d(t_i, a) and I_i = sum_{k<i} mu_k f_k / E_{k+1}. Valid while the
/// exponential stays within double range (|sum log(1+mu d)| <~ 700).
inline GridFunction solve_first_order_ivp(const Coefficient& d, const GridFunction& f, double x0) {
    require_aligned(d.fn(), f, "solve_first_order_ivp");
    d.require_regressive("solve_first_order_ivp");
    const TimeScale& ts = f.time_scale();
    const std::size_t n = f.size();
    std::vector<double> w(n);
    double expo = 1.0;     // E_i = e_d(t_i, a)
    double integral = 0.0; // I_i
    w[0] = x0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double factor = 1.0 + ts.graininess(i) * d[i];
        const double expo_next = expo * factor;
        integral += ts.graininess(i) * f[i] / expo_next;
        expo = expo_next;
        w[i + 1] = expo * (x0 + integral);
        if (!std::isfinite(w[i + 1]) || !std::isfinite(expo) || expo == 0.0) {
            throw Error(ErrorKind::NonFiniteValue,
                        "first-order solution left double range at index " + std::to_string(i + 1));
        }
    }
    return f.with_values(std::move(w));
}

/// Brute-force forward recurrence x[i+1] = (1 + mu d) x[i] + mu f[i]; the
/// independent oracle against which solve_first_order_ivp is checked.
inline GridFunction first_order_recurrence(const GridFunction& d, const GridFunction& f,
                                           double x0) {
    require_aligned(d, f, "first_order_recurrence");
    const TimeScale& ts = f.time_scale();
    const std::size_t n = f.size();
    std::vector<double> x(n);
    x[0] = x0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double mu = ts.graininess(i);
        x[i + 1] = (1.0 + mu * d[i]) * x[i] + mu * f[i];
    }
    return f.with_values(std::move(x));
}

// ---------------------------------------------------------------------------
// Second-order forward recurrence oracle
// ---------------------------------------------------------------------------

/// Expands x^DD + p x^D + q x = f into a three-term recurrence on isolated
/// points and solves forward from x[0], x[1]. Exact on the grid, so it
/// serves as the independent oracle for every constructed solution.
inline GridFunction recurrence_oracle_second_order(const GridFunction& p, const GridFunction& q,
                                                   const GridFunction& f, double x0, double x1) {
    require_aligned(p, q, "recurrence_oracle_second_order");
    require_aligned(p, f, "recurrence_oracle_second_order");
    const TimeScale& ts = p.time_scale();
    const std::size_t n = p.size();
    if (n < 3) {
        throw Error(ErrorKind::TooFewPoints, "second-order recurrence needs n >= 3");
    }
    std::vector<double> x(n);
    x[0] = x0;
    x[1] = x1;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double mu_i = ts.graininess(i);
        const double mu_n = ts.graininess(i + 1);
        const double xd = (x[i + 1] - x[i]) / mu_i;
        // x^DD[i] = f - p x^D - q x  =>  next forward difference
        const double xdd = f[i] - p[i] * xd - q[i] * x[i];
        x[i + 2] = x[i + 1] + mu_n * (xd + mu_i * xdd);
    }
    return p.with_values(std::move(x));
}

// ---------------------------------------------------------------------------
// Riccati forward recursion
// ---------------------------------------------------------------------------

/// A candidate solution of z^D + p z - z z^sigma = q together with the
/// hypothesis record the certifier needs: 1 + mu (z^sigma - p) != 0 (cond1),
/// 1 - mu z != 0 (cond2), and the sup-norm defect of z in the equation.
struct RiccatiSolution {
    GridFunction z;
    bool cond1_ok = false;
    bool cond2_ok = false;
    double residual = 0.0;
    double scale = 1.0;
};

/// z^sigma as a grid function: the forward shift of z, keeping the final
/// value at the right endpoint (which no second-order formula consumes).
inline GridFunction sigma_shift(const GridFunction& z) {
    std::vector<double> v(z.size());
    for (std::size_t i = 0; i + 1 < z.size(); ++i) v[i] = z[i + 1];
    v[z.size() - 1] = z[z.size() - 1];
    return z.with_values(std::move(v));
}

/// Measures an externally supplied z against the Riccati equation for (p, q)
/// and records the two nondegeneracy conditions.
inline RiccatiSolution riccati_from_values(const GridFunction& p, const GridFunction& q,
                                           GridFunction z) {
    require_aligned(p, q, "riccati_from_values");
    require_aligned(p, z, "riccati_from_values");
    const TimeScale& ts = p.time_scale();
    const std::size_t n = p.size();
    RiccatiSolution out{std::move(z), true, true, 0.0, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = ts.graininess(i);
        const double zs = i + 1 < n ? out.z[i + 1] : out.z[i];
        if (!regressivity_ok(mu, zs - p[i])) out.cond1_ok = false;
        if (!regressivity_ok(mu, -out.z[i])) out.cond2_ok = false;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double mu = ts.graininess(i);
        const double zd = (out.z[i + 1] - out.z[i]) / mu;
        const double r = zd + p[i] * out.z[i] - out.z[i] * out.z[i + 1] - q[i];
        out.residual = std::max(out.residual, std::abs(r));
        out.scale = std::max({out.scale, std::abs(zd), std::abs(p[i] * out.z[i]),
                              std::abs(out.z[i] * out.z[i + 1]), std::abs(q[i])});
    }
    return out;
}

/// Solves the Riccati equation forward from z(a) = z0. On isolated points
/// the equation rearranges to the explicit step
///     z^sigma = (q - p z + z/mu) / (1/mu - z),
/// which breaks down exactly when 1 - mu z = 0, the same nondegeneracy the
/// certifier assumes, so breakdown is reported as a hard error.
inline RiccatiSolution riccati_forward(const GridFunction& p, const GridFunction& q, double z0) {
    require_aligned(p, q, "riccati_forward");
    const TimeScale& ts = p.time_scale();
    const std::size_t n = p.size();
    std::vector<double> z(n);
    z[0] = z0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double mu = ts.graininess(i);
        if (!regressivity_ok(mu, -z[i])) {
            throw Error(ErrorKind::RiccatiBreakdown,
                        "1 - mu*z vanishes at index " + std::to_string(i) +
                            " (t=" + std::to_string(ts.point(i)) + ")");
        }
        z[i + 1] = (q[i] - p[i] * z[i] + z[i] / mu) / (1.0 / mu - z[i]);
        if (!std::isfinite(z[i + 1])) {
            throw Error(ErrorKind::RiccatiBreakdown,
                        "Riccati recursion left double range at index " + std::to_string(i + 1));
        }
    }
    return riccati_from_values(p, q, p.with_values(std::move(z)));
}

} // namespace tempus
