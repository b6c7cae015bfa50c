#include "ssdt_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssdt/edge.hpp"
#include "ssdt/error.hpp"
#include "ssdt/measure.hpp"
#include "ssdt/montecarlo.hpp"
#include "ssdt/spike.hpp"
#include "ssdt/stieltjes.hpp"
#include "ssdt_cli/csv.hpp"

namespace ssdt::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct Common {
    std::string model_path;
    double tolerance = solver::kDefaultTolerance;
    std::uint64_t seed = 1;
    bool trace = false;
    std::string out_path;
    std::string manifest_path;
};

struct StieltjesArgs {
    std::optional<double> min;
    std::optional<double> max;
    int count = 100;
    std::vector<double> lambdas;
    bool no_warm_start = false;
};

struct SpikeArgs {
    std::vector<double> from_lambda;
    std::vector<double> from_theta;
    std::vector<double> theta2_offset;
};

struct SimulateArgs {
    std::string mode = "edge";
    std::vector<int> k = {32, 64, 128, 256, 512};
    int trials = 1000;
    std::optional<double> theta2;
    int threads = 1;
};

struct BenchArgs {
    std::vector<long> sizes = {1L << 16, 1L << 17, 1L << 18, 1L << 19, 1L << 20};
    int reps = 3;
};

// A command writes its CSV into `out` and records resolved parameters.
using Body = std::function<void(std::ostream& out, json& params)>;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::kEmptyMeasure:
        case ErrorCode::kLengthMismatch:
        case ErrorCode::kNonPositiveAtom:
        case ErrorCode::kNonPositiveWeight:
        case ErrorCode::kWeightSumError:
        case ErrorCode::kBadGamma:
        case ErrorCode::kSyntaxError:
            return kExitInput;
        case ErrorCode::kEdgeViolation:
        case ErrorCode::kUndetectableSignal:
            return kExitDomain;
        default:
            return kExitSolver;
    }
}

void add_common(CLI::App& sub, Common& common, bool needs_model) {
    auto* model = sub.add_option("--model", common.model_path, "Model file (JSON)");
    if (needs_model) model->required();
    sub.add_option("--tol", common.tolerance, "Residual tolerance")->capture_default_str();
    sub.add_option("--seed", common.seed, "Random seed")->capture_default_str();
    sub.add_flag("--trace", common.trace, "Emit the iterate trace");
    sub.add_option("--out", common.out_path, "Output file (default: standard output)");
    sub.add_option("--manifest", common.manifest_path,
                   "Manifest file (default: <out>.manifest.json, or standard error)");
}

std::vector<double> equispaced(double lo, double hi, int count) {
    std::vector<double> grid(static_cast<std::size_t>(count));
    if (count == 1) {
        grid[0] = lo;
        return grid;
    }
    const double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = lo + step * i;
    grid.back() = hi;
    return grid;
}

double log_or_nan(double x) { return x > 0.0 ? std::log(x) : std::nan(""); }

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void cmd_ssdt(const Common& common, std::ostream& out, json& params) {
    const NoiseModel model = load_model(common.model_path);
    const EdgeSolution edge = ssdt(model, common.tolerance);
    params["trace"] = common.trace;
    if (!common.trace) {
        out << format_double(edge.lambda_star) << '\n';
        return;
    }
    write_header(out, {"iteration", "lambda", "q"});
    for (std::size_t i = 0; i < edge.outer.trace.size(); ++i) {
        write_row(out, {static_cast<double>(i), edge.outer.trace[i].x, edge.outer.trace[i].value});
    }
}

void cmd_stieltjes(const Common& common, const StieltjesArgs& args, std::ostream& out, json& params) {
    if (!args.lambdas.empty() && (args.min || args.max)) {
        raise(ErrorCode::kSyntaxError, "--lambda cannot be combined with --min/--max");
    }
    if (args.count < 1) raise(ErrorCode::kSyntaxError, "--count must be at least 1");
    const StieltjesEvaluator evaluator(load_model(common.model_path), common.tolerance);
    std::vector<double> grid = args.lambdas;
    if (grid.empty()) {
        const double lo = args.min.value_or(evaluator.lambda_star() + 1.0);
        const double hi = args.max.value_or(evaluator.lambda_star() + 10.0);
        if (!(hi >= lo)) raise(ErrorCode::kSyntaxError, "--max must not be below --min");
        grid = equispaced(lo, hi, args.count);
        params["min"] = lo;
        params["max"] = hi;
        params["count"] = args.count;
    } else {
        params["lambda"] = grid;
    }
    params["warm_start"] = !args.no_warm_start;

    const std::vector<StieltjesPoint> points = evaluator.grid(grid, !args.no_warm_start);
    write_header(out, {"lambda", "e", "e1", "s", "s1", "sbar", "sbar1", "D", "D1"});
    for (const StieltjesPoint& p : points) {
        write_row(out, {p.lambda, p.e, p.e1, p.s, p.s1, p.sbar, p.sbar1, p.d, p.d1});
    }
}

void cmd_spike(const Common& common, const SpikeArgs& args, std::ostream& out, json& params) {
    const int chosen = static_cast<int>(!args.from_lambda.empty()) + static_cast<int>(!args.from_theta.empty()) +
                       static_cast<int>(!args.theta2_offset.empty());
    if (chosen != 1) {
        raise(ErrorCode::kSyntaxError, "give exactly one of --from-lambda, --from-theta, --theta2-offset");
    }
    const StieltjesEvaluator evaluator(load_model(common.model_path), common.tolerance);
    std::vector<SpikeParams> rows;
    if (!args.from_lambda.empty()) {
        params["from_lambda"] = args.from_lambda;
        for (double lambda : args.from_lambda) rows.push_back(spike_from_lambda(evaluator, lambda));
    } else {
        std::vector<double> theta2 = args.from_theta;
        if (!args.theta2_offset.empty()) {
            params["theta2_offset"] = args.theta2_offset;
            const double threshold = detection_threshold(evaluator);
            theta2.clear();
            for (double offset : args.theta2_offset) theta2.push_back(threshold + offset);
        } else {
            params["from_theta"] = theta2;
        }
        for (double t2 : theta2) rows.push_back(lambda_from_theta(evaluator, t2));
    }
    write_header(out, {"lambda", "theta2", "c2", "cbar2"});
    for (const SpikeParams& r : rows) write_row(out, {r.lambda, r.theta2, r.c2, r.cbar2});
}

void cmd_simulate(const Common& common, const SimulateArgs& args, std::ostream& out, json& params) {
    if (args.mode != "edge" && args.mode != "spike") {
        raise(ErrorCode::kSyntaxError, "--mode must be edge or spike");
    }
    const bool spiked = args.mode == "spike";
    const NoiseModel model = load_model(common.model_path);
    const StieltjesEvaluator evaluator(model, common.tolerance);

    params["mode"] = args.mode;
    params["k"] = args.k;
    params["trials"] = args.trials;
    params["threads"] = args.threads;

    std::optional<SpikeParams> target;
    if (spiked) {
        const double theta2 = args.theta2.value_or(detection_threshold(evaluator) + 20.0);
        target = lambda_from_theta(evaluator, theta2);
        params["theta2"] = theta2;
        params["reference"] = {{"lambda", target->lambda}, {"c2", target->c2}, {"cbar2", target->cbar2}};
        write_header(out, {"k", "sing_val_error", "left_cos_error", "right_cos_error"});
    } else {
        params["reference"] = {{"lambda_star", evaluator.lambda_star()}};
        write_header(out, {"k", "mean_abs_error", "mean_bias"});
    }

    std::vector<double> log2_k;
    std::vector<std::vector<double>> log_columns(spiked ? 3 : 2);
    for (int k : args.k) {
        mc::SimConfig config{model, k, args.trials, common.seed, std::nullopt};
        std::vector<double> row;
        if (spiked) {
            config.spike_theta2 = target->theta2;
            const mc::SpikeReport r =
                mc::run_spike_trials(config, target->lambda, target->c2, target->cbar2, args.threads);
            row = {r.eigenvalue.mean_abs_error, r.left_cosine.mean_abs_error, r.right_cosine.mean_abs_error};
        } else {
            const mc::SimReport r = mc::run_edge_trials(config, evaluator.lambda_star(), args.threads);
            row = {r.mean_abs_error, r.mean_bias};
        }
        log2_k.push_back(std::log2(static_cast<double>(k)));
        for (std::size_t c = 0; c < row.size(); ++c) log_columns[c].push_back(log_or_nan(row[c]));
        row.insert(row.begin(), static_cast<double>(k));
        write_row(out, row);
    }
    if (args.k.size() < 3) return;

    out << "slope";
    for (const std::vector<double>& column : log_columns) {
        out << ',';
        const bool finite = std::all_of(column.begin(), column.end(), [](double v) { return std::isfinite(v); });
        if (finite) out << format_double(mc::slope_fit(log2_k, column));
    }
    out << '\n';
}

void cmd_bench(const Common& common, const BenchArgs& args, std::ostream& out, json& params) {
    if (args.sizes.size() < 2) raise(ErrorCode::kSyntaxError, "--sizes needs at least two entries");
    if (args.reps < 1) raise(ErrorCode::kSyntaxError, "--reps must be at least 1");
    for (long n : args.sizes) {
        if (n < 2) raise(ErrorCode::kSyntaxError, "every size must be at least 2");
    }
    params["sizes"] = args.sizes;
    params["reps"] = args.reps;

    using clock = std::chrono::steady_clock;
    const auto seconds_since = [](clock::time_point start) {
        return std::chrono::duration<double>(clock::now() - start).count();
    };
    write_header(out, {"n", "seconds_ssdt", "seconds_stieltjes_grid100"});
    for (long n : args.sizes) {
        std::mt19937_64 rng = mc::trial_rng(common.seed, static_cast<std::uint64_t>(n));
        const NoiseModel model =
            mc::random_model(static_cast<std::size_t>(n / 2), static_cast<std::size_t>(n), 0.5, 1.0, 2.0, rng);
        std::vector<double> edge_times;
        std::vector<double> grid_times;
        for (int rep = 0; rep < args.reps; ++rep) {
            auto start = clock::now();
            EdgeSolution edge = ssdt(model, common.tolerance);
            edge_times.push_back(seconds_since(start));

            const double lambda_star = edge.lambda_star;
            const StieltjesEvaluator evaluator(model, std::move(edge), common.tolerance);
            const std::vector<double> grid = equispaced(lambda_star + 1.0, lambda_star + 10.0, 100);
            start = clock::now();
            const auto points = evaluator.grid(grid);
            grid_times.push_back(seconds_since(start));
            if (points.size() != grid.size()) raise(ErrorCode::kConvergenceFailure, "short Stieltjes grid");
        }
        write_row(out, {static_cast<double>(n), median(edge_times), median(grid_times)});
    }
}

void cmd_validate(const Common& common, std::ostream& out, json&) {
    out << serialize_model(load_model(common.model_path));
}

int execute(const std::string& name, const Common& common, const std::vector<std::string>& args, const Body& body,
            std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream buffer;
    json params;
    if (!common.model_path.empty()) params["model"] = common.model_path;
    params["tol"] = common.tolerance;
    try {
        body(buffer, params);
    } catch (const Error& e) {
        err << "ssdt " << name << ": " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "ssdt " << name << ": " << e.what() << '\n';
        return kExitSolver;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (common.out_path.empty()) {
        out << buffer.str();
        out.flush();
    } else {
        std::ofstream file(common.out_path, std::ios::binary);
        file << buffer.str();
        if (!file) {
            err << "ssdt " << name << ": cannot write " << common.out_path << '\n';
            return kExitInput;
        }
    }

    json manifest;
    manifest["command"] = name;
    manifest["version"] = kVersion;
    manifest["argv"] = args;
    manifest["parameters"] = params;
    manifest["seed"] = common.seed;
    manifest["wall_seconds"] = wall;
    std::string manifest_path = common.manifest_path;
    if (manifest_path.empty() && !common.out_path.empty()) manifest_path = common.out_path + ".manifest.json";
    if (manifest_path.empty()) {
        err << manifest.dump() << '\n';
    } else {
        std::ofstream file(manifest_path, std::ios::binary);
        file << manifest.dump(2) << '\n';
        if (!file) {
            err << "ssdt " << name << ": cannot write " << manifest_path << '\n';
            return kExitInput;
        }
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral signal detection threshold and Stieltjes transform tools", "ssdt"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Common common;
    StieltjesArgs stieltjes_args;
    SpikeArgs spike_args;
    SimulateArgs simulate_args;
    BenchArgs bench_args;

    auto* ssdt_cmd = app.add_subcommand("ssdt", "Compute the edge lambda*");
    add_common(*ssdt_cmd, common, true);

    auto* stieltjes_cmd = app.add_subcommand("stieltjes", "Evaluate s, sbar, D and derivatives on a lambda grid");
    add_common(*stieltjes_cmd, common, true);
    stieltjes_cmd->add_option("--min", stieltjes_args.min, "Grid start (default lambda*+1)");
    stieltjes_cmd->add_option("--max", stieltjes_args.max, "Grid end (default lambda*+10)");
    stieltjes_cmd->add_option("--count", stieltjes_args.count, "Grid size")->capture_default_str();
    stieltjes_cmd->add_option("--lambda", stieltjes_args.lambdas, "Explicit lambda values")->delimiter(',');
    stieltjes_cmd->add_flag("--no-warm-start", stieltjes_args.no_warm_start, "Solve every point from e = 0");

    auto* spike_cmd = app.add_subcommand("spike", "Map between outlier lambda and spike strength theta^2");
    add_common(*spike_cmd, common, true);
    spike_cmd->add_option("--from-lambda", spike_args.from_lambda, "Outlier eigenvalues")->delimiter(',');
    spike_cmd->add_option("--from-theta", spike_args.from_theta, "Spike strengths theta^2")->delimiter(',');
    spike_cmd->add_option("--theta2-offset", spike_args.theta2_offset,
                          "theta^2 given as 1/D(lambda*) plus these offsets")
        ->delimiter(',');

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo finite-sample errors");
    add_common(*simulate_cmd, common, true);
    simulate_cmd->add_option("--mode", simulate_args.mode, "edge or spike")->capture_default_str();
    simulate_cmd->add_option("--k", simulate_args.k, "Row dimensions")->delimiter(',')->capture_default_str();
    simulate_cmd->add_option("--trials", simulate_args.trials, "Trials per k")->capture_default_str();
    simulate_cmd->add_option("--theta2", simulate_args.theta2, "Spike strength (default 1/D(lambda*)+20)");
    simulate_cmd->add_option("--threads", simulate_args.threads, "Worker threads")->capture_default_str();

    auto* bench_cmd = app.add_subcommand("bench", "Time lambda* and a 100-point Stieltjes grid");
    add_common(*bench_cmd, common, false);
    bench_cmd->add_option("--sizes", bench_args.sizes, "Values of n (p = n/2)")->delimiter(',');
    bench_cmd->add_option("--reps", bench_args.reps, "Repetitions per size")->capture_default_str();

    auto* validate_cmd = app.add_subcommand("validate", "Parse, validate and print the normalized model");
    add_common(*validate_cmd, common, true);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    if (ssdt_cmd->parsed()) {
        return execute("ssdt", common, args, [&](std::ostream& o, json& p) { cmd_ssdt(common, o, p); }, out, err);
    }
    if (stieltjes_cmd->parsed()) {
        return execute("stieltjes", common, args,
                       [&](std::ostream& o, json& p) { cmd_stieltjes(common, stieltjes_args, o, p); }, out, err);
    }
    if (spike_cmd->parsed()) {
        return execute("spike", common, args, [&](std::ostream& o, json& p) { cmd_spike(common, spike_args, o, p); },
                       out, err);
    }
    if (simulate_cmd->parsed()) {
        return execute("simulate", common, args,
                       [&](std::ostream& o, json& p) { cmd_simulate(common, simulate_args, o, p); }, out, err);
    }
    if (bench_cmd->parsed()) {
        return execute("bench", common, args, [&](std::ostream& o, json& p) { cmd_bench(common, bench_args, o, p); },
                       out, err);
    }
    return execute("validate", common, args, [&](std::ostream& o, json& p) { cmd_validate(common, o, p); }, out,
                   err);
}

}  // namespace ssdt::cli
