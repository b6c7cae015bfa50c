#pragma once

#include "ssdt/stieltjes.hpp"

namespace ssdt {

/// Rank-one spike seen through the noise: the outlier eigenvalue λ of YYᵀ,
/// the signal strength θ² = 1/D(λ), and the squared cosines between the
/// population and sample singular vectors.
struct SpikeParams {
    double lambda = 0.0;
    double theta2 = 0.0;
    double c2 = 0.0;     // |⟨u, û⟩|² → s D / D'
    double cbar2 = 0.0;  // |⟨v, v̂⟩|² → s̄ D / D'
};

SpikeParams spike_from_point(const StieltjesPoint& p);

SpikeParams spike_from_lambda(const StieltjesEvaluator& evaluator, double lambda);

/// Inverts θ² = 1/D(λ) by Newton on D(λ) − 1/θ² (decreasing, convex) from
/// just above the edge.
SpikeParams lambda_from_theta(const StieltjesEvaluator& evaluator, double theta2);

/// 1/D(λ*), evaluated at the edge itself through t(λ*) = e(λ*). Spikes with
/// θ² above this produce an outlier.
double detection_threshold(const StieltjesEvaluator& evaluator);

/// 1/D at λ*·(1 + kEdgeMargin): θ² at or below this is rejected as undetectable.
double undetectable_bound(const StieltjesEvaluator& evaluator);

SpikeParams spike_from_lambda(const NoiseModel& model, double lambda,
                              double tolerance = solver::kDefaultTolerance);
SpikeParams lambda_from_theta(const NoiseModel& model, double theta2,
                              double tolerance = solver::kDefaultTolerance);

}  // namespace ssdt
