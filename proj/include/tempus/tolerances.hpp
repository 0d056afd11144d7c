#pragma once

namespace tempus::tol {

// Central numeric tolerances. All comparisons are relative to a problem
// scale computed alongside the quantity being tested, never bare epsilons.

/// |1 + mu*p| must exceed this (times max(1, |mu*p|)) for p to count as
/// regressive at a point.
inline constexpr double kRegressivity = 1e-9;

/// Characteristic roots count as distinct when separated by more than this
/// times max(1, |lambda1|, |lambda2|).
inline constexpr double kRootSeparation = 1e-8;

/// A discriminant below -kDiscriminant * max(1, alpha^2, |beta|) is complex;
/// anything in (-tol, 0) is clamped to a double root.
inline constexpr double kDiscriminant = 1e-12;

/// Constructed solutions must satisfy their target equation to this times
/// the defect scale for a certificate to pass.
inline constexpr double kSolverResidual = 1e-9;

/// A Riccati solution handed to the variable-coefficient certifier must
/// have defect at most this times the defect scale.
inline constexpr double kRiccatiResidual = 1e-8;

/// Multiplicative slack on analytic bound checks |y-u| <= K*L*eps.
/// The bounds are exact in real arithmetic; this absorbs rounding in the
/// exponential products.
inline constexpr double kBoundSlackRel = 1e-9;

/// Absolute floor for the same checks, times the deviation scale. Keeps
/// zero-perturbation certificates (eps at rounding level) honest.
inline constexpr double kBoundSlackAbs = 1e-12;

} // namespace tempus::tol
