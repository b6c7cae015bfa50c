#pragma once

#include "ssdt/measure.hpp"
#include "ssdt/solver.hpp"

namespace ssdt {

/// J = (j_left, ∞) and the left endpoint e*_λ of I_λ = {e ∈ J : G(e) < λ/a*}.
struct IntervalInfo {
    double j_left = 0.0;
    double e_star_lambda = 0.0;
    solver::RootReport report;
};

/// The minimizer t(λ) of F_λ on I_λ, Q(λ) = F(λ, t(λ)) and Q'(λ) = ∂F/∂λ(λ, t(λ)).
struct QPoint {
    double lambda = 0.0;
    double t = 0.0;
    double q = 0.0;
    double q1 = 0.0;
    // Rounding scale of q, forwarded to the outer Newton solve.
    double q_scale = 0.0;
    IntervalInfo interval;
    solver::RootReport report;
};

/// The spectral signal detection threshold λ*, the unique root of Q on (0, ∞).
struct EdgeSolution {
    double lambda_star = 0.0;
    double q_at_root = 0.0;
    double t_at_root = 0.0;
    // Inner solves at λ*: e*_λ (endpoint) and t(λ) (minimizer).
    solver::RootReport endpoint;
    solver::RootReport minimizer;
    // Newton on Q; bisection_steps counts the initial halvings of λ.
    solver::RootReport outer;
};

/// Inner solves run this much tighter than the outer λ* solve ...
inline constexpr double kInnerToleranceRatio = 1e-2;
/// ... but never below this absolute level.
inline constexpr double kInnerToleranceFloor = 1e-15;

double inner_tolerance(double outer_tolerance) noexcept;

/// Root of T_λ(e) = G(e) − λ/a* on J: bisect from max(0, j_left + 1) toward
/// j_left until T_λ > 0, then Newton (decreasing, convex) from the left.
IntervalInfo left_endpoint(const NoiseModel& model, double lambda,
                           double tolerance = solver::kDefaultTolerance);

/// Root of R_λ = ∂F/∂e on I_λ: bisect from e*_λ + max(1, |e*_λ|) toward e*_λ
/// until R_λ < 0, then Newton (increasing, concave) from the left.
QPoint q_point(const NoiseModel& model, double lambda, double tolerance = solver::kDefaultTolerance);

/// λ*: halve λ₀ = a* b* (1 + √γ)² until Q > 0, then Newton (decreasing,
/// convex) from the left with nested inner solves.
EdgeSolution ssdt(const NoiseModel& model, double tolerance = solver::kDefaultTolerance);

}  // namespace ssdt
