#include "ssdt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

#include <Eigen/Core>

#include "ssdt/compensated_sum.hpp"
#include "ssdt/error.hpp"
#include "ssdt/lanczos.hpp"

namespace ssdt::mc {
namespace {

// Remainders closer than this count as tied.
constexpr double kRemainderTieScale = 1e9;

struct NoiseDraw {
    Eigen::MatrixXd n;  // k × l
    Eigen::VectorXd start;
};

// Draw order is fixed: G column by column, then the Lanczos start vector.
// The spiked sampler draws u and v afterwards, so θ = 0 reproduces the
// noise-only sample exactly.
NoiseDraw draw_noise(const SimConfig& config, std::mt19937_64& rng) {
    const int k = config.k;
    const int l = config.columns();
    const std::vector<double> a = build_diagonal_profile(config.model.nu(), k);
    const std::vector<double> b = build_diagonal_profile(config.model.unu(), l);
    std::normal_distribution<double> normal(0.0, 1.0);

    NoiseDraw draw;
    draw.n.resize(k, l);
    const double inv_l = 1.0 / static_cast<double>(l);
    std::vector<double> row_scale(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) row_scale[i] = std::sqrt(a[i]);
    for (int j = 0; j < l; ++j) {
        const double col_scale = std::sqrt(b[j] * inv_l);
        for (int i = 0; i < k; ++i) draw.n(i, j) = row_scale[i] * col_scale * normal(rng);
    }
    draw.start.resize(std::min(k, l));
    for (Eigen::Index i = 0; i < draw.start.size(); ++i) draw.start(i) = normal(rng);
    return draw;
}

Eigen::VectorXd unit_vector(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
    return v / v.norm();
}

template <typename Sample>
std::vector<Sample> run_parallel(int trials, int threads, const std::function<Sample(int)>& body) {
    std::vector<Sample> out(static_cast<std::size_t>(trials));
    const int workers = std::clamp(threads, 1, std::max(1, trials));
    if (workers == 1) {
        for (int t = 0; t < trials; ++t) out[static_cast<std::size_t>(t)] = body(t);
        return out;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int t = w; t < trials; t += workers) out[static_cast<std::size_t>(t)] = body(t);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

SimReport make_report(std::vector<double> values, double reference) {
    const ErrorStats stats = error_stats(values, reference);
    SimReport r;
    r.values = std::move(values);
    r.reference = reference;
    r.mean_abs_error = stats.mean_abs_error;
    r.mean_bias = stats.mean_bias;
    return r;
}

}  // namespace

int SimConfig::columns() const {
    return static_cast<int>(std::lround(static_cast<double>(k) / model.gamma()));
}

void SimConfig::check() const {
    if (k < 1) raise(ErrorCode::kDimensionTooSmall, "k must be at least 1");
    if (trials < 1) raise(ErrorCode::kEmptyInput, "trials must be at least 1");
    if (columns() < 1) raise(ErrorCode::kDimensionTooSmall, "l = round(k/gamma) must be at least 1");
    if (spike_theta2 && !(*spike_theta2 >= 0.0)) {
        raise(ErrorCode::kUndetectableSignal, "spike theta^2 must be non-negative");
    }
}

std::vector<double> build_diagonal_profile(const DiscreteMeasure& measure, int dim) {
    const std::size_t p = measure.size();
    if (dim < 1 || static_cast<std::size_t>(dim) < p) {
        raise(ErrorCode::kDimensionTooSmall, "dimension " + std::to_string(dim) + " is smaller than the " +
                                                 std::to_string(p) + " atoms of the measure");
    }
    std::vector<long> counts(p);
    std::vector<long> remainder_key(p);
    long assigned = 0;
    for (std::size_t i = 0; i < p; ++i) {
        const double exact = measure.weights()[i] * dim;
        const double whole = std::floor(exact);
        counts[i] = static_cast<long>(whole);
        remainder_key[i] = std::lround((exact - whole) * kRemainderTieScale);
        assigned += counts[i];
    }
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Atoms are ascending, so a stable sort breaks ties toward smaller atoms.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return remainder_key[i] > remainder_key[j]; });
    for (std::size_t r = 0; assigned < dim; r = (r + 1) % p) {
        ++counts[order[r]];
        ++assigned;
    }
    std::vector<double> diag;
    diag.reserve(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < p; ++i) diag.insert(diag.end(), static_cast<std::size_t>(counts[i]), measure.atoms()[i]);
    return diag;
}

NoiseModel random_model(std::size_t p, std::size_t n, double gamma, double lo, double hi,
                        std::mt19937_64& rng) {
    std::uniform_real_distribution<double> atom(lo, hi);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    const auto draw = [&](std::size_t count) {
        RawMeasure raw;
        raw.atoms.resize(count);
        raw.weights.resize(count);
        CompensatedSum total;
        for (std::size_t i = 0; i < count; ++i) {
            raw.atoms[i] = atom(rng);
            // Unif(0,1) can return 0 exactly; nudge to the smallest normal.
            raw.weights[i] = std::max(weight(rng), std::numeric_limits<double>::min());
            total += raw.weights[i];
        }
        const double sum = total.value();
        for (double& w : raw.weights) w /= sum;
        return raw;
    };
    const RawMeasure nu = draw(p);
    const RawMeasure unu = draw(n);
    return validate(nu, unu, gamma);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial_index),
                      static_cast<std::uint32_t>(trial_index >> 32), 0x55d7u};
    return std::mt19937_64(seq);
}

double sample_top_noise(const SimConfig& config, std::uint64_t trial_index) {
    config.check();
    std::mt19937_64 rng = trial_rng(config.seed, trial_index);
    const NoiseDraw draw = draw_noise(config, rng);
    const Eigen::MatrixXd& n = draw.n;
    Eigen::VectorXd tmp;
    SymmetricOperator apply;
    if (n.rows() <= n.cols()) {
        apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
            tmp.noalias() = n.transpose() * x;
            y.noalias() = n * tmp;
        };
    } else {
        apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
            tmp.noalias() = n * x;
            y.noalias() = n.transpose() * tmp;
        };
    }
    return top_eigenpair(apply, draw.start.size(), draw.start).value;
}

SpikeSample sample_spiked(const SimConfig& config, std::uint64_t trial_index) {
    config.check();
    if (!config.spike_theta2) raise(ErrorCode::kUndetectableSignal, "sample_spiked needs spike_theta2");
    std::mt19937_64 rng = trial_rng(config.seed, trial_index);
    const NoiseDraw draw = draw_noise(config, rng);
    const Eigen::MatrixXd& n = draw.n;
    const Eigen::VectorXd u = unit_vector(static_cast<int>(n.rows()), rng);
    const Eigen::VectorXd v = unit_vector(static_cast<int>(n.cols()), rng);
    const double theta = std::sqrt(*config.spike_theta2);

    // Y x = N x + θ u (v·x) and Yᵀ y = Nᵀ y + θ v (u·y); Y is never formed.
    const auto y_times = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
        out.noalias() = n * x;
        out += (theta * v.dot(x)) * u;
    };
    const auto yt_times = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
        out.noalias() = n.transpose() * x;
        out += (theta * u.dot(x)) * v;
    };

    Eigen::VectorXd tmp;
    SpikeSample out;
    if (n.rows() <= n.cols()) {
        const TopEigenpair top = top_eigenpair(
            [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
                yt_times(x, tmp);
                y_times(tmp, y);
            },
            n.rows(), draw.start);
        Eigen::VectorXd right;
        yt_times(top.vector, right);
        out.top_eig = top.value;
        out.c_hat = std::fabs(u.dot(top.vector));
        out.cbar_hat = std::fabs(v.dot(right) / right.norm());
    } else {
        const TopEigenpair top = top_eigenpair(
            [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
                y_times(x, tmp);
                yt_times(tmp, y);
            },
            n.cols(), draw.start);
        Eigen::VectorXd left;
        y_times(top.vector, left);
        out.top_eig = top.value;
        out.c_hat = std::fabs(u.dot(left) / left.norm());
        out.cbar_hat = std::fabs(v.dot(top.vector));
    }
    out.c_hat = std::min(out.c_hat, 1.0);
    out.cbar_hat = std::min(out.cbar_hat, 1.0);
    return out;
}

ErrorStats error_stats(std::span<const double> values, double reference) {
    if (values.empty()) raise(ErrorCode::kEmptyInput, "error_stats needs at least one value");
    if (reference == 0.0) raise(ErrorCode::kEmptyInput, "error_stats reference must be nonzero");
    CompensatedSum abs_err, bias;
    for (double x : values) {
        abs_err += std::fabs(reference - x) / std::fabs(reference);
        bias += (reference - x) / reference;
    }
    const double m = static_cast<double>(values.size());
    return {abs_err.value() / m, bias.value() / m};
}

double slope_fit(std::span<const double> log2_dims, std::span<const double> log_errors) {
    if (log2_dims.size() != log_errors.size()) {
        raise(ErrorCode::kTooFewPoints, "slope_fit needs matching x and y lengths");
    }
    if (log2_dims.size() < 3) raise(ErrorCode::kTooFewPoints, "slope_fit needs at least 3 points");
    const double ln2 = std::log(2.0);
    const double m = static_cast<double>(log2_dims.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < log2_dims.size(); ++i) {
        mx += log2_dims[i] * ln2;
        my += log_errors[i];
    }
    mx /= m;
    my /= m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < log2_dims.size(); ++i) {
        const double dx = log2_dims[i] * ln2 - mx;
        sxy += dx * (log_errors[i] - my);
        sxx += dx * dx;
    }
    if (!(sxx > 0.0)) raise(ErrorCode::kTooFewPoints, "slope_fit needs at least two distinct dimensions");
    return sxy / sxx;
}

SimReport run_edge_trials(const SimConfig& config, double lambda_star, int threads) {
    config.check();
    std::vector<double> values = run_parallel<double>(
        config.trials, threads, [&](int t) { return sample_top_noise(config, static_cast<std::uint64_t>(t)); });
    return make_report(std::move(values), lambda_star);
}

SpikeReport run_spike_trials(const SimConfig& config, double lambda, double c2, double cbar2,
                             int threads) {
    config.check();
    const std::vector<SpikeSample> samples = run_parallel<SpikeSample>(
        config.trials, threads, [&](int t) { return sample_spiked(config, static_cast<std::uint64_t>(t)); });
    std::vector<double> eig, left, right;
    eig.reserve(samples.size());
    left.reserve(samples.size());
    right.reserve(samples.size());
    for (const SpikeSample& s : samples) {
        eig.push_back(s.top_eig);
        left.push_back(s.c_hat);
        right.push_back(s.cbar_hat);
    }
    SpikeReport report;
    report.eigenvalue = make_report(std::move(eig), lambda);
    report.left_cosine = make_report(std::move(left), std::sqrt(c2));
    report.right_cosine = make_report(std::move(right), std::sqrt(cbar2));
    return report;
}

}  // namespace ssdt::mc
