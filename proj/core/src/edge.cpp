#include "ssdt/edge.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ssdt/error.hpp"
#include "ssdt/master.hpp"

namespace ssdt {

using solver::Sample;

double inner_tolerance(double outer_tolerance) noexcept {
    return std::max(outer_tolerance * kInnerToleranceRatio, kInnerToleranceFloor);
}

IntervalInfo left_endpoint(const NoiseModel& model, double lambda, double tolerance) {
    IntervalInfo info;
    info.j_left = j_left(model);
    const double start = std::max(0.0, info.j_left + 1.0);

    const auto value = [&](double e) { return t_kernel(model, lambda, e).value; };
    const auto bis = solver::bisect_to_sign(value, start, info.j_left, solver::Sign::kPositive);

    const auto eval = [&](double e) {
        const KernelValue t = t_kernel(model, lambda, e);
        return Sample{t.value, t.derivative, t.scale};
    };
    solver::NewtonOptions options;
    options.tolerance = tolerance;
    options.guard = info.j_left;
    options.bracket = bis.rejected;
    info.report = solver::newton_guarded(eval, solver::kDecreasingConvex, bis.point, options);
    info.report.bisection_steps = bis.steps;
    info.e_star_lambda = info.report.root;
    return info;
}

QPoint q_point(const NoiseModel& model, double lambda, double tolerance) {
    QPoint out;
    out.lambda = lambda;
    out.interval = left_endpoint(model, lambda, tolerance);
    const double left = out.interval.e_star_lambda;
    const double start = left + std::max(1.0, std::fabs(left));

    const auto value = [&](double e) { return r_kernel(model, lambda, e).value; };
    const auto bis = solver::bisect_to_sign(value, start, left, solver::Sign::kNegative);

    const auto eval = [&](double e) {
        const KernelValue r = r_kernel(model, lambda, e);
        return Sample{r.value, r.derivative, r.scale};
    };
    solver::NewtonOptions options;
    options.tolerance = tolerance;
    options.guard = left;
    options.bracket = bis.rejected;
    out.report = solver::newton_guarded(eval, solver::kIncreasingConcave, bis.point, options);
    out.report.bisection_steps = bis.steps;
    out.t = out.report.root;

    const FDerivatives f = f_eval(model, lambda, out.t);
    out.q = f.f;
    out.q1 = f.f_l;
    out.q_scale = f.scale;
    return out;
}

EdgeSolution ssdt(const NoiseModel& model, double tolerance) {
    const double inner = inner_tolerance(tolerance);
    const double mp = 1.0 + std::sqrt(model.gamma());
    const double upper = model.a_star() * model.b_star() * mp * mp;

    std::optional<QPoint> last;
    const auto q_at = [&](double lambda) -> const QPoint& {
        last = q_point(model, lambda, inner);
        return *last;
    };

    solver::BisectResult halving;
    try {
        halving = solver::bisect_to_sign([&](double lambda) { return q_at(lambda).q; }, upper, 0.0,
                                         solver::Sign::kPositive);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::kMaxIterationsExceeded) throw;
        raise(ErrorCode::kInitializationFailed, std::string("halving lambda never reached Q > 0: ") + e.what());
    }

    const auto eval = [&](double lambda) {
        const QPoint& qp = q_at(lambda);
        return Sample{qp.q, qp.q1, qp.q_scale};
    };
    solver::NewtonOptions options;
    options.tolerance = tolerance;
    options.guard = 0.0;
    options.bracket = halving.rejected;

    EdgeSolution sol;
    sol.outer = solver::newton_guarded(eval, solver::kDecreasingConvex, halving.point, options);
    sol.outer.bisection_steps = halving.steps;
    sol.lambda_star = sol.outer.root;
    if (!last || last->lambda != sol.lambda_star) q_at(sol.lambda_star);
    sol.q_at_root = last->q;
    sol.t_at_root = last->t;
    sol.endpoint = last->interval.report;
    sol.minimizer = last->report;
    return sol;
}

}  // namespace ssdt
