#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ssdt/measure.hpp"

namespace ssdt::mc {

/// One Monte Carlo experiment at a fixed row dimension k. The column
/// dimension is l = round(k / γ).
struct SimConfig {
    NoiseModel model;
    int k = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::optional<double> spike_theta2;

    int columns() const;
    /// Throws on k < 1, trials < 1, or l < 1.
    void check() const;
};

/// Relative error statistics against an asymptotic reference value:
/// mean |ref − x|/ref and mean (ref − x)/ref.
struct ErrorStats {
    double mean_abs_error = 0.0;
    double mean_bias = 0.0;
};

struct SimReport {
    std::vector<double> values;
    double reference = 0.0;
    double mean_abs_error = 0.0;
    double mean_bias = 0.0;
};

struct SpikeSample {
    double top_eig = 0.0;
    double c_hat = 0.0;     // |⟨u, û⟩|
    double cbar_hat = 0.0;  // |⟨v, v̂⟩|
};

/// Diagonal of a dim×dim matrix with spectrum `measure`: atom i repeated by
/// largest-remainder rounding of ω_i·dim, ties toward the smaller atom.
std::vector<double> build_diagonal_profile(const DiscreteMeasure& measure, int dim);

/// A model with p atoms for nu and n atoms for unu drawn from Unif(lo, hi)
/// and weights drawn from Unif(0, 1), then normalized.
NoiseModel random_model(std::size_t p, std::size_t n, double gamma, double lo, double hi,
                        std::mt19937_64& rng);

/// The generator for one trial; a function of (seed, trial_index) only.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial_index);

/// Largest eigenvalue of NNᵀ for N = A^{1/2} G B^{1/2}, G iid N(0, 1/l),
/// computed matrix-free to relative tolerance 1e-10.
double sample_top_noise(const SimConfig& config, std::uint64_t trial_index);

/// Y = N + θ u vᵀ with θ² = spike_theta2 and u, v uniform on their spheres.
/// Returns the top eigenvalue of YYᵀ and the cosines of its singular vectors.
SpikeSample sample_spiked(const SimConfig& config, std::uint64_t trial_index);

ErrorStats error_stats(std::span<const double> values, double reference);

/// Least-squares slope of log_errors against ln k = log2_dims · ln 2.
double slope_fit(std::span<const double> log2_dims, std::span<const double> log_errors);

/// sample_top_noise over all trials, compared with `lambda_star`. Trials run
/// on `threads` workers; the result does not depend on the thread count.
SimReport run_edge_trials(const SimConfig& config, double lambda_star, int threads = 1);

struct SpikeReport {
    SimReport eigenvalue;
    SimReport left_cosine;
    SimReport right_cosine;
};

/// sample_spiked over all trials, compared with the asymptotic outlier
/// λ and the cosines √c², √c̄² (the samples are unsquared cosines).
SpikeReport run_spike_trials(const SimConfig& config, double lambda, double c2, double cbar2,
                             int threads = 1);

}  // namespace ssdt::mc
