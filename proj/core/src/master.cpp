#include "ssdt/master.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ssdt/compensated_sum.hpp"
#include "ssdt/error.hpp"

namespace ssdt {
namespace {

[[noreturn]] void singular(const char* what, double lambda, double e) {
    std::ostringstream os;
    os.precision(17);
    os << what << " vanishes at lambda = " << lambda << ", e = " << e;
    raise(ErrorCode::kSingularPoint, os.str());
}

enum SumMask : unsigned {
    kSumF = 1u << 0,    // Σ aω/d and Σ |aω/d|
    kSumFe = 1u << 1,   // Σ (a/d)² ω
    kSumFee = 1u << 2,  // Σ (a/d)³ ω
    kSumFl = 1u << 3,   // Σ aω/d²
    kSumW = 1u << 4,    // Σ ω/d and Σ ω/d²
};

// |δd_i| / eps for d_i = a_i G − λ.
double d_error(double a, const GDerivatives& g, double lambda) {
    return a * (std::fabs(g.g) + g.g_err) + std::fabs(lambda);
}

struct ASums {
    double s1 = 0.0;
    double abs1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
    double l1 = 0.0;
    double w0 = 0.0;
    double w2 = 0.0;
    double cond1 = 0.0;
    double cond2 = 0.0;
};

// One pass over nu with d_i = a_i G − λ. Only the sums named in Mask are
// accumulated.
template <unsigned Mask>
ASums a_sums(const NoiseModel& model, double lambda, const GDerivatives& g, double e) {
    const auto atoms = model.nu().atoms();
    const auto weights = model.nu().weights();
    CompensatedSum s1, abs1, s2, s3, l1, w0, w2, cond1, cond2;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double a = atoms[i];
        const double w = weights[i];
        const double d = a * g.g - lambda;
        if (std::fabs(d) < kSingularThreshold) singular("a_i G(e) - lambda", lambda, e);
        const double inv = 1.0 / d;
        const double r = a * inv;
        if constexpr ((Mask & kSumF) != 0) {
            s1 += r * w;
            abs1 += std::fabs(r * w);
            cond1 += std::fabs(r * w * inv) * d_error(a, g, lambda);
        }
        if constexpr ((Mask & kSumFe) != 0) {
            s2 += r * r * w;
            cond2 += 2.0 * std::fabs(r * r * w * inv) * d_error(a, g, lambda);
        }
        if constexpr ((Mask & kSumFee) != 0) s3 += r * r * r * w;
        if constexpr ((Mask & (kSumFl | kSumW)) != 0) l1 += r * inv * w;
        if constexpr ((Mask & kSumW) != 0) {
            w0 += w * inv;
            w2 += w * inv * inv;
        }
    }
    return {s1.value(), abs1.value(), s2.value(), s3.value(), l1.value(),
            w0.value(),  w2.value(),   cond1.value(), cond2.value()};
}

FDerivatives assemble_f(const GDerivatives& g, const ASums& s, double e) {
    FDerivatives out;
    out.f = e - s.s1;
    out.f_e = 1.0 + g.g1 * s.s2;
    out.f_l = -s.l1;
    out.f_ee = g.g2 * s.s2 - 2.0 * g.g1 * g.g1 * s.s3;
    out.scale = std::fabs(e) + s.abs1 + s.cond1;
    return out;
}

double r_scale(const GDerivatives& g, const ASums& s) {
    return 1.0 + std::fabs(g.g1) * (s.s2 + s.cond2) + g.g1_err * s.s2;
}

}  // namespace

double j_left(const NoiseModel& model) noexcept { return -1.0 / (model.gamma() * model.b_star()); }

GDerivatives g_eval(const DiscreteMeasure& unu, double gamma, double e) {
    const auto atoms = unu.atoms();
    const auto weights = unu.weights();
    CompensatedSum g, g1, g2, g_err, g1_err;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        const double b = atoms[j];
        const double denom = 1.0 + gamma * b * e;
        if (std::fabs(denom) < kSingularThreshold) singular("1 + gamma b_j e", 0.0, e);
        const double q = b / denom;
        const double pq = weights[j] * q;
        const double rel = (1.0 + std::fabs(gamma * b * e)) / std::fabs(denom);
        g += pq;
        g1 += pq * q;
        g2 += pq * q * q;
        g_err += std::fabs(pq) * (1.0 + rel);
        g1_err += std::fabs(pq * q) * (1.0 + 2.0 * rel);
    }
    return {g.value(), -gamma * g1.value(), 2.0 * gamma * gamma * g2.value(), g_err.value(),
            gamma * g1_err.value()};
}

FDerivatives f_eval(const NoiseModel& model, double lambda, double e) {
    const GDerivatives g = g_eval(model.unu(), model.gamma(), e);
    const ASums s = a_sums<kSumF | kSumFe | kSumFee | kSumFl>(model, lambda, g, e);
    return assemble_f(g, s, e);
}

KernelValue t_kernel(const NoiseModel& model, double lambda, double e) {
    const GDerivatives g = g_eval(model.unu(), model.gamma(), e);
    const double level = lambda / model.a_star();
    return {g.g - level, g.g1, std::fabs(g.g) + g.g_err + level};
}

KernelValue r_kernel(const NoiseModel& model, double lambda, double e) {
    const GDerivatives g = g_eval(model.unu(), model.gamma(), e);
    const ASums s = a_sums<kSumFe | kSumFee>(model, lambda, g, e);
    const FDerivatives f = assemble_f(g, s, e);
    return {f.f_e, f.f_ee, r_scale(g, s)};
}

KernelValue f_kernel(const NoiseModel& model, double lambda, double e) {
    const GDerivatives g = g_eval(model.unu(), model.gamma(), e);
    const ASums s = a_sums<kSumF | kSumFe>(model, lambda, g, e);
    return {e - s.s1, 1.0 + g.g1 * s.s2, std::fabs(e) + s.abs1 + s.cond1};
}

KernelValue f_kernel_on_interval(const NoiseModel& model, double lambda, double e) {
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    if (!(e > j_left(model))) return {kNaN, kNaN, 0.0};
    const GDerivatives g = g_eval(model.unu(), model.gamma(), e);
    if (!(model.a_star() * g.g < lambda)) return {kNaN, kNaN, 0.0};
    const ASums s = a_sums<kSumF | kSumFe>(model, lambda, g, e);
    return {e - s.s1, 1.0 + g.g1 * s.s2, std::fabs(e) + s.abs1 + s.cond1};
}

WDerivatives w_eval(const NoiseModel& model, double lambda, double e) {
    const GDerivatives g = g_eval(model.unu(), model.gamma(), e);
    const ASums s = a_sums<kSumW>(model, lambda, g, e);
    return {s.w0, s.w2, -g.g1 * s.l1};
}

MasterPoint master_point(const NoiseModel& model, double lambda, double e) {
    MasterPoint out;
    out.g = g_eval(model.unu(), model.gamma(), e);
    const ASums s = a_sums<kSumF | kSumFe | kSumFee | kSumFl | kSumW>(model, lambda, out.g, e);
    out.f = assemble_f(out.g, s, e);
    out.w = {s.w0, s.w2, -out.g.g1 * s.l1};
    return out;
}

}  // namespace ssdt
