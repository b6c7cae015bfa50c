#pragma once

#include <span>
#include <vector>

#include "ssdt/edge.hpp"
#include "ssdt/measure.hpp"
#include "ssdt/solver.hpp"

namespace ssdt {

/// Right of the support: the auxiliary e(λ) and the transforms built on it.
struct StieltjesPoint {
    double lambda = 0.0;
    double e = 0.0;
    double e1 = 0.0;
    double s = 0.0;
    double s1 = 0.0;
    double sbar = 0.0;
    double sbar1 = 0.0;
    double d = 0.0;
    double d1 = 0.0;
    solver::RootReport report;
};

struct EValue {
    double e = 0.0;
    double e1 = 0.0;
    solver::RootReport report;
};

/// Points with λ ≤ λ*·(1 + kEdgeMargin) are rejected as too close to the edge.
inline constexpr double kEdgeMargin = 1e-9;

/// Rightmost root of F_λ by Newton from `start` (0 unless warm-starting from
/// a root at a smaller λ). No λ* check: a λ at or below the edge is detected
/// by the iteration leaving I_λ or failing to converge, and reported as
/// kEdgeViolation.
EValue e_of_lambda(const NoiseModel& model, double lambda,
                   double tolerance = solver::kDefaultTolerance, double start = 0.0);

/// e_of_lambda plus s, s', s̄, s̄', D, D' at λ, still without the λ* check.
StieltjesPoint evaluate_stieltjes(const NoiseModel& model, double lambda,
                                  double tolerance = solver::kDefaultTolerance, double start = 0.0);

/// Evaluation with the edge computed once up front so that queries below it
/// fail fast with kEdgeViolation. Holds its own copy of the model.
class StieltjesEvaluator {
public:
    explicit StieltjesEvaluator(NoiseModel model, double tolerance = solver::kDefaultTolerance);
    /// Reuses an edge already computed for `model` at `tolerance`.
    StieltjesEvaluator(NoiseModel model, EdgeSolution edge, double tolerance);

    const NoiseModel& model() const noexcept { return model_; }
    double tolerance() const noexcept { return tolerance_; }
    const EdgeSolution& edge() const noexcept { return edge_; }
    double lambda_star() const noexcept { return edge_.lambda_star; }
    /// Smallest accepted λ is strictly above this.
    double edge_limit() const noexcept { return edge_.lambda_star * (1.0 + kEdgeMargin); }

    StieltjesPoint point(double lambda) const;

    /// One point per λ, in input order. While λ increases along the input,
    /// each solve is warm-started from the previous root.
    std::vector<StieltjesPoint> grid(std::span<const double> lambdas, bool warm_start = true) const;

private:
    void check(double lambda) const;

    NoiseModel model_;
    double tolerance_;
    EdgeSolution edge_;
};

/// Convenience wrapper; computes λ* on every call, prefer StieltjesEvaluator.
StieltjesPoint stieltjes_point(const NoiseModel& model, double lambda,
                               double tolerance = solver::kDefaultTolerance);

}  // namespace ssdt
