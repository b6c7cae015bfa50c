#include "ssdt/spike.hpp"

#include <cmath>
#include <sstream>

#include "ssdt/error.hpp"
#include "ssdt/master.hpp"

namespace ssdt {

SpikeParams spike_from_point(const StieltjesPoint& p) {
    SpikeParams out;
    out.lambda = p.lambda;
    out.theta2 = 1.0 / p.d;
    out.c2 = p.s * p.d / p.d1;
    out.cbar2 = p.sbar * p.d / p.d1;
    return out;
}

SpikeParams spike_from_lambda(const StieltjesEvaluator& evaluator, double lambda) {
    return spike_from_point(evaluator.point(lambda));
}

double detection_threshold(const StieltjesEvaluator& evaluator) {
    const NoiseModel& model = evaluator.model();
    const double lambda = evaluator.lambda_star();
    const WDerivatives w = w_eval(model, lambda, evaluator.edge().t_at_root);
    const double gamma = model.gamma();
    const double s = w.w;
    const double sbar = gamma * s + (gamma - 1.0) / lambda;
    return 1.0 / (lambda * s * sbar);
}

double undetectable_bound(const StieltjesEvaluator& evaluator) {
    const StieltjesPoint p =
        evaluate_stieltjes(evaluator.model(), evaluator.edge_limit(), evaluator.tolerance());
    return 1.0 / p.d;
}

SpikeParams lambda_from_theta(const StieltjesEvaluator& evaluator, double theta2) {
    const double bound = undetectable_bound(evaluator);
    if (!(theta2 > bound)) {
        std::ostringstream os;
        os.precision(17);
        os << "theta^2 = " << theta2 << " does not exceed the detection bound " << bound;
        raise(ErrorCode::kUndetectableSignal, os.str());
    }
    const NoiseModel& model = evaluator.model();
    const double tol = evaluator.tolerance();
    const double target = 1.0 / theta2;
    const double lambda_star = evaluator.lambda_star();

    double warm_lambda = 0.0;
    double warm_e = 0.0;
    const auto point_at = [&](double lambda) {
        const double start = lambda > warm_lambda && warm_lambda > 0.0 ? warm_e : 0.0;
        StieltjesPoint p = evaluate_stieltjes(model, lambda, tol, start);
        warm_lambda = lambda;
        warm_e = p.e;
        return p;
    };

    // D is steep near the edge, so the monotone side h > 0 sits just above λ*.
    double delta = 1e-6;
    double start = lambda_star * (1.0 + delta);
    StieltjesPoint p = point_at(start);
    for (int i = 0; i < 60 && !(p.d > target); ++i) {
        delta *= 0.5;
        start = std::max(lambda_star * (1.0 + delta), evaluator.edge_limit());
        warm_lambda = 0.0;
        p = point_at(start);
    }
    if (!(p.d > target)) {
        raise(ErrorCode::kUndetectableSignal, "no start point above the edge with D(lambda) > 1/theta^2");
    }

    const auto eval = [&](double lambda) {
        const StieltjesPoint q = point_at(lambda);
        return solver::Sample{q.d - target, q.d1, q.d + target};
    };
    solver::NewtonOptions options;
    options.tolerance = tol;
    options.guard = lambda_star;
    const solver::RootReport report =
        solver::newton_guarded(eval, solver::kDecreasingConvex, start, options);
    return spike_from_point(point_at(report.root));
}

SpikeParams spike_from_lambda(const NoiseModel& model, double lambda, double tolerance) {
    return spike_from_lambda(StieltjesEvaluator(model, tolerance), lambda);
}

SpikeParams lambda_from_theta(const NoiseModel& model, double theta2, double tolerance) {
    return lambda_from_theta(StieltjesEvaluator(model, tolerance), theta2);
}

}  // namespace ssdt
