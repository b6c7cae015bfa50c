#pragma once

#include "ssdt/measure.hpp"

namespace ssdt {

/// G(e) = Σ_j b_j π_j / (1 + γ b_j e) and its first two derivatives.
struct GDerivatives {
    double g = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    // First-order rounding magnitudes of g and g1, in units of eps.
    double g_err = 0.0;
    double g1_err = 0.0;
};

/// F(λ,e) = e − Σ_i a_i ω_i / (a_i G(e) − λ) with ∂F/∂e, ∂F/∂λ, ∂²F/∂e².
struct FDerivatives {
    double f = 0.0;
    double f_e = 0.0;
    double f_l = 0.0;
    double f_ee = 0.0;
    // First-order rounding magnitude of f in units of eps, including the
    // cancellation in each a_i G − λ; sets the rounding floor of f.
    double scale = 0.0;
};

/// W(λ,e) = Σ_i ω_i / (a_i G(e) − λ) with ∂W/∂λ and ∂W/∂e.
struct WDerivatives {
    double w = 0.0;
    double w_l = 0.0;
    double w_e = 0.0;
};

/// A scalar kernel value with its derivative in e. `scale` bounds the
/// magnitude of the terms that were summed, so `scale * eps` is the best
/// residual a root finder can hope for.
struct KernelValue {
    double value = 0.0;
    double derivative = 0.0;
    double scale = 0.0;
};

/// Denominators smaller than this in magnitude raise kSingularPoint.
inline constexpr double kSingularThreshold = 1e-300;

GDerivatives g_eval(const DiscreteMeasure& unu, double gamma, double e);

FDerivatives f_eval(const NoiseModel& model, double lambda, double e);

/// T_λ(e) = G(e) − λ/a*, whose root on J is the left endpoint of I_λ.
KernelValue t_kernel(const NoiseModel& model, double lambda, double e);

/// R_λ(e) = ∂F/∂e(λ,e), whose root on I_λ is the minimizer t(λ) of F_λ.
KernelValue r_kernel(const NoiseModel& model, double lambda, double e);

/// F_λ(e) and ∂F/∂e only; the Newton map for e(λ).
KernelValue f_kernel(const NoiseModel& model, double lambda, double e);

/// As f_kernel, but NaN when e lies outside I_λ, so a Newton iteration
/// that wanders off the interval stops instead of chasing a spurious root.
KernelValue f_kernel_on_interval(const NoiseModel& model, double lambda, double e);

WDerivatives w_eval(const NoiseModel& model, double lambda, double e);

/// -1/(γ b*): the largest pole of G and the left end of J.
double j_left(const NoiseModel& model) noexcept;

/// Everything the Stieltjes evaluation needs at one (λ, e), from a single
/// pass over each measure.
struct MasterPoint {
    GDerivatives g;
    FDerivatives f;
    WDerivatives w;
};

MasterPoint master_point(const NoiseModel& model, double lambda, double e);

}  // namespace ssdt
