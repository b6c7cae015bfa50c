#include "ssdt/stieltjes.hpp"

#include <cmath>
#include <sstream>

#include "ssdt/error.hpp"
#include "ssdt/master.hpp"

namespace ssdt {
namespace {

std::string lambda_text(double lambda) {
    std::ostringstream os;
    os.precision(17);
    os << "lambda = " << lambda;
    return os.str();
}

}  // namespace

EValue e_of_lambda(const NoiseModel& model, double lambda, double tolerance, double start) {
    const auto eval = [&](double e) {
        const KernelValue f = f_kernel_on_interval(model, lambda, e);
        return solver::Sample{f.value, f.derivative, f.scale};
    };
    solver::NewtonOptions options;
    options.tolerance = tolerance;
    // F_λ(0) > 0 right of the edge, so 0 is a valid bracket for a warm start
    // from the left of the root.
    if (start != 0.0) options.bracket = 0.0;

    EValue out;
    try {
        out.report = solver::newton_guarded(eval, solver::kIncreasingConvex, start, options);
    } catch (const Error& e) {
        switch (e.code()) {
            case ErrorCode::kMaxIterationsExceeded:
            case ErrorCode::kNonFiniteValue:
            case ErrorCode::kGuardViolated:
                raise(ErrorCode::kEdgeViolation,
                      lambda_text(lambda) + " has no real e(lambda); it is not right of the edge (" +
                          e.what() + ")");
            default:
                throw;
        }
    }
    out.e = out.report.root;
    const FDerivatives f = f_eval(model, lambda, out.e);
    if (!(f.f_e > 0.0) || !(out.e < 0.0)) {
        raise(ErrorCode::kEdgeViolation, lambda_text(lambda) + " converged to a root that is not e(lambda)");
    }
    out.e1 = -f.f_l / f.f_e;
    return out;
}

StieltjesPoint evaluate_stieltjes(const NoiseModel& model, double lambda, double tolerance,
                                  double start) {
    EValue ev = e_of_lambda(model, lambda, tolerance, start);
    const MasterPoint mp = master_point(model, lambda, ev.e);
    const double gamma = model.gamma();

    StieltjesPoint p;
    p.lambda = lambda;
    p.e = ev.e;
    p.e1 = ev.e1;
    p.s = mp.w.w;
    p.s1 = mp.w.w_l + mp.w.w_e * ev.e1;
    p.sbar = gamma * p.s + (gamma - 1.0) / lambda;
    p.sbar1 = gamma * p.s1 + (1.0 - gamma) / (lambda * lambda);
    p.d = lambda * p.s * p.sbar;
    p.d1 = p.s * p.sbar + lambda * p.s1 * p.sbar + lambda * p.s * p.sbar1;
    p.report = std::move(ev.report);
    return p;
}

StieltjesEvaluator::StieltjesEvaluator(NoiseModel model, double tolerance)
    : model_(std::move(model)), tolerance_(tolerance), edge_(ssdt(model_, tolerance)) {}

StieltjesEvaluator::StieltjesEvaluator(NoiseModel model, EdgeSolution edge, double tolerance)
    : model_(std::move(model)), tolerance_(tolerance), edge_(std::move(edge)) {}

void StieltjesEvaluator::check(double lambda) const {
    if (!(lambda > edge_limit())) {
        std::ostringstream os;
        os.precision(17);
        os << lambda_text(lambda) << " is not right of the edge lambda* = " << lambda_star();
        raise(ErrorCode::kEdgeViolation, os.str());
    }
}

StieltjesPoint StieltjesEvaluator::point(double lambda) const {
    check(lambda);
    return evaluate_stieltjes(model_, lambda, tolerance_);
}

std::vector<StieltjesPoint> StieltjesEvaluator::grid(std::span<const double> lambdas,
                                                     bool warm_start) const {
    for (double lambda : lambdas) check(lambda);
    std::vector<StieltjesPoint> out;
    out.reserve(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        double start = 0.0;
        if (warm_start && i > 0 && lambdas[i] > lambdas[i - 1]) start = out.back().e;
        out.push_back(evaluate_stieltjes(model_, lambdas[i], tolerance_, start));
    }
    return out;
}

StieltjesPoint stieltjes_point(const NoiseModel& model, double lambda, double tolerance) {
    return StieltjesEvaluator(model, tolerance).point(lambda);
}

}  // namespace ssdt
