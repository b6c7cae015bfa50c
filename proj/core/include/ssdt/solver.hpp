#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace ssdt::solver {

enum class Monotonicity { kIncreasing, kDecreasing };
enum class Curvature { kConvex, kConcave };

/// Shape of f between the start point and the root. Newton converges
/// monotonically when started on the side where the tangent undershoots:
///
///   increasing-concave  start with f < 0 (left of root), iterates increase
///   decreasing-convex   start with f > 0 (left of root), iterates increase
///   increasing-convex   start with f > 0 (right of root), iterates decrease
///   decreasing-concave  start with f < 0 (right of root), iterates decrease
struct ShapeClass {
    Monotonicity monotonicity;
    Curvature curvature;

    /// Sign of f on the monotone-convergence side: +1 or -1.
    int safe_sign() const noexcept;
    /// +1 if iterates move right from the safe side, -1 if they move left.
    int direction() const noexcept;
};

inline constexpr ShapeClass kIncreasingConcave{Monotonicity::kIncreasing, Curvature::kConcave};
inline constexpr ShapeClass kDecreasingConvex{Monotonicity::kDecreasing, Curvature::kConvex};
inline constexpr ShapeClass kIncreasingConvex{Monotonicity::kIncreasing, Curvature::kConvex};
inline constexpr ShapeClass kDecreasingConcave{Monotonicity::kDecreasing, Curvature::kConcave};

/// f(x) and f'(x). `scale` is an optional bound on the magnitude of the
/// terms summed into f; the engine never asks for a residual below the
/// rounding floor `floor_ulps * eps * scale`.
struct Sample {
    double value = 0.0;
    double derivative = 0.0;
    double scale = 0.0;
};

using Function = std::function<Sample(double)>;
using ValueFunction = std::function<double(double)>;

struct TracePoint {
    double x;
    double value;
};

struct RootReport {
    double root = 0.0;
    double residual = 0.0;
    // Steps taken by the Newton phase, fallback bisections included.
    int iterations = 0;
    // Initialization bisections, filled in by callers that bracket first.
    int bisection_steps = 0;
    // Newton steps replaced by a bisection after a non-finite value or a
    // guard crossing.
    int fallback_steps = 0;
    // Stopped on the rounding floor (or a sub-ulp step) rather than on the
    // requested tolerance.
    bool at_floor = false;
    // One entry per iterate, starting value included: size() == iterations + 1.
    std::vector<TracePoint> trace;
};

inline constexpr double kDefaultTolerance = 1e-13;
inline constexpr int kDefaultMaxIterations = 200;

struct NewtonOptions {
    double tolerance = kDefaultTolerance;
    int max_iter = kDefaultMaxIterations;
    // Iterates must stay strictly on the start's side of the guard.
    std::optional<double> guard;
    // A point where f has the opposite sign of the start, if one is known.
    std::optional<double> bracket;
    double floor_ulps = 16.0;
};

/// Newton's method for a function of known shape started on (or near) its
/// monotone-convergence side. Terminates on |f| ≤ tolerance only.
///
/// A start on the wrong side costs one overshooting step, after which the
/// iteration is monotone. Non-finite evaluations and guard crossings fall
/// back to bisecting toward the bracket; without a bracket they raise
/// kNonFiniteValue / kGuardViolated.
RootReport newton_guarded(const Function& eval, ShapeClass shape, double init,
                          const NewtonOptions& options = {});

enum class Sign { kPositive, kNegative };

struct BisectResult {
    double point = 0.0;
    double value = 0.0;
    int steps = 0;
    // Last point visited that did not have the wanted sign.
    std::optional<double> rejected;
};

/// Replaces `moving` by midpoint(moving, anchor) until eval has the wanted
/// sign there. A start that already qualifies is returned after 0 steps.
BisectResult bisect_to_sign(const ValueFunction& eval, double moving, double anchor, Sign want,
                            int max_steps = kDefaultMaxIterations);

}  // namespace ssdt::solver
