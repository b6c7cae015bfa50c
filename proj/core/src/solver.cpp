#include "ssdt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ssdt/error.hpp"

namespace ssdt::solver {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string at(double x, double fx) {
    std::ostringstream os;
    os.precision(17);
    os << "x = " << x << ", f(x) = " << fx;
    return os.str();
}

bool finite(const Sample& s) { return std::isfinite(s.value) && std::isfinite(s.derivative); }

bool same_side(double x, double guard, double reference) {
    return (x - guard) * (reference - guard) > 0.0;
}

}  // namespace

int ShapeClass::safe_sign() const noexcept {
    // Left-start shapes: increasing-concave (f<0), decreasing-convex (f>0).
    // Right-start shapes: increasing-convex (f>0), decreasing-concave (f<0).
    return curvature == Curvature::kConvex ? +1 : -1;
}

int ShapeClass::direction() const noexcept {
    const bool increasing = monotonicity == Monotonicity::kIncreasing;
    const bool convex = curvature == Curvature::kConvex;
    return (increasing != convex) ? +1 : -1;
}

RootReport newton_guarded(const Function& eval, ShapeClass shape, double init,
                          const NewtonOptions& options) {
    if (!(options.tolerance > 0.0)) {
        raise(ErrorCode::kInitializationFailed, "tolerance must be positive");
    }
    RootReport report;
    double x = init;
    Sample s = eval(x);
    if (!finite(s)) raise(ErrorCode::kNonFiniteValue, "at the initial point, " + at(x, s.value));
    report.trace.push_back({x, s.value});
    std::optional<double> bracket = options.bracket;

    for (;;) {
        const double floor = options.floor_ulps * kEps * std::fabs(s.scale);
        if (std::fabs(s.value) <= std::max(options.tolerance, floor)) {
            report.at_floor = std::fabs(s.value) > options.tolerance;
            break;
        }
        if (report.iterations >= options.max_iter) {
            raise(ErrorCode::kMaxIterationsExceeded, "after " + std::to_string(report.iterations) +
                                                         " Newton steps, " + at(x, s.value));
        }

        const bool slope_ok = shape.monotonicity == Monotonicity::kIncreasing ? s.derivative > 0.0
                                                                              : s.derivative < 0.0;
        if (!slope_ok && !bracket) {
            raise(ErrorCode::kGuardViolated, "derivative sign contradicts the declared shape, " +
                                                 at(x, s.value));
        }
        double next = x - s.value / s.derivative;
        bool fallback = !slope_ok || !std::isfinite(next);
        if (!fallback && next == x) {
            // Step below one ulp: no representable neighbour does better.
            report.at_floor = true;
            break;
        }
        if (!fallback && options.guard && !same_side(next, *options.guard, init)) {
            if (!bracket) {
                raise(ErrorCode::kGuardViolated, "Newton step to " + at(next, s.value) +
                                                     " crosses the guard");
            }
            fallback = true;
        }
        Sample sn;
        if (!fallback) {
            sn = eval(next);
            if (!finite(sn)) {
                if (!bracket) raise(ErrorCode::kNonFiniteValue, "after a Newton step, " + at(next, sn.value));
                fallback = true;
            }
        }
        if (fallback) {
            // Midpoint toward the bracket, shrinking toward x until finite.
            double toward = *bracket;
            for (int attempt = 0;; ++attempt) {
                next = 0.5 * (x + toward);
                sn = eval(next);
                if (finite(sn)) break;
                if (attempt >= options.max_iter || next == x) {
                    raise(ErrorCode::kNonFiniteValue, "bisection fallback, " + at(next, sn.value));
                }
                toward = next;
            }
            ++report.fallback_steps;
        }
        if ((sn.value > 0.0) != (s.value > 0.0) && sn.value != 0.0) bracket = x;
        x = next;
        s = sn;
        ++report.iterations;
        report.trace.push_back({x, s.value});
    }
    report.root = x;
    report.residual = s.value;
    return report;
}

BisectResult bisect_to_sign(const ValueFunction& eval, double moving, double anchor, Sign want,
                            int max_steps) {
    const auto wanted = [want](double v) { return want == Sign::kPositive ? v > 0.0 : v < 0.0; };
    BisectResult out;
    double value = eval(moving);
    while (!wanted(value)) {
        if (std::isnan(value)) raise(ErrorCode::kNonFiniteValue, "bisection, " + at(moving, value));
        if (out.steps >= max_steps) {
            raise(ErrorCode::kMaxIterationsExceeded,
                  "bisection did not reach the wanted sign in " + std::to_string(max_steps) +
                      " steps, " + at(moving, value));
        }
        out.rejected = moving;
        const double mid = 0.5 * (moving + anchor);
        if (mid == moving || mid == anchor) {
            raise(ErrorCode::kMaxIterationsExceeded, "bisection interval collapsed, " + at(moving, value));
        }
        moving = mid;
        value = eval(moving);
        ++out.steps;
    }
    out.point = moving;
    out.value = value;
    return out;
}

}  // namespace ssdt::solver
