#pragma once

// Reference computations for the tests. Nothing here calls the solver code
// under test: kernels are re-derived in long double and roots are found by
// plain bisection, scanning and golden-section search.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ssdt/measure.hpp"

namespace oracle {

// Marchenko-Pastur (both measures a unit point mass).
double mp_edge(double gamma);

struct MpTransform {
    double s = 0.0;
    double s1 = 0.0;
    double sbar = 0.0;
    double sbar1 = 0.0;
};

// s from the quadratic γλs² + (λ+γ−1)s + 1 = 0; s̄ from the companion
// matrix NᵀN, itself Marchenko-Pastur with ratio 1/γ scaled by γ.
MpTransform mp_transform(double gamma, double lambda);

long double kernel_g(const ssdt::NoiseModel& model, long double e);
long double kernel_f(const ssdt::NoiseModel& model, long double lambda, long double e);
double pole(const ssdt::NoiseModel& model);  // −1/(γ b*)

// Left endpoint of I_λ by bisection on G(e) = λ/a*.
double endpoint_by_bisection(const ssdt::NoiseModel& model, double lambda);

struct Minimum {
    double t = 0.0;
    double value = 0.0;
};
// min of F_λ over I_λ: geometric scan of offsets from e*_λ, then
// golden-section refinement around the best scan point.
Minimum minimize_f(const ssdt::NoiseModel& model, double lambda);

// Rightmost root of F_λ for λ above the edge, by scanning right of the
// minimizer for a sign change and bisecting.
double rightmost_root(const ssdt::NoiseModel& model, double lambda);

struct EdgeBracket {
    double lo = 0.0;          // grid point with min F > 0
    double hi = 0.0;          // next grid point, min F ≤ 0
    int sign_changes = 0;
    double cell_ratio = 0.0;  // λ_{i+1} / λ_i
};
// Geometric λ grid over [lo, hi] with `points` nodes.
EdgeBracket brute_force_edge(const ssdt::NoiseModel& model, int points, double lo, double hi);

// Five-point centered difference.
double derivative(const std::function<double(double)>& f, double x, double h);
double second_derivative(const std::function<double(double)>& f, double x, double h);

double rel_diff(double a, double b);

// p, n ∈ {1, 2, 3}, atoms in [0.2, 4], γ log-uniform in [0.1, 4].
ssdt::NoiseModel random_small_model(std::mt19937_64& rng);
// Unif(lo, hi) atoms, Unif(0, 1) weights normalized.
ssdt::NoiseModel random_model(std::mt19937_64& rng, std::size_t p, std::size_t n, double gamma, double lo,
                              double hi);
// A random model with λ ∈ (0.2, 3)·a*b*(1+√γ)² and e ∈ I_λ at a random
// distance `gap` right of e*_λ.
struct ValidPoint {
    ssdt::NoiseModel model;
    double lambda;
    double e;
    double gap;
};
ValidPoint random_valid_point(std::mt19937_64& rng);

// Step for difference quotients at a valid point: small relative to both the
// point and its distance to the end of I_λ.
double safe_step(const ValidPoint& p);

ssdt::NoiseModel single_atom_model(double a, double b, double gamma);

double dense_top_eigenvalue(const Eigen::MatrixXd& symmetric);

std::string data_path(const std::string& name);

}  // namespace oracle
