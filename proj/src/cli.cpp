#include "arsk/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "arsk/arsk.hpp"
#include "arsk/bench.hpp"
#include "arsk/errors.hpp"
#include "arsk/io.hpp"
#include "arsk/metrics.hpp"
#include "arsk/parallel.hpp"
#include "arsk/simgen.hpp"
#include "arsk/tuning.hpp"

namespace arsk::cli {

namespace {

struct DataArgs {
    std::string path;
    bool header = false;
    bool standardize = false;
};

struct ArskArgs {
    int k = 0;
    std::string penalty_e = "soft";
    std::string penalty_w = "soft";
    double scad_a = 3.7;
    int restarts = 20;
    double init_fraction = 0.8;
    std::string restore = "sqrt";
    int max_outer_iter = 50;
    double outer_tol = 1e-4;
    std::uint64_t seed = 0;
};

void add_data_args(CLI::App* cmd, DataArgs& d) {
    cmd->add_option("data", d.path, "Input CSV (n rows x p numeric columns)")->required();
    cmd->add_flag("--header", d.header, "Skip the first line of the CSV");
    cmd->add_flag("--standardize", d.standardize, "Centre and scale every column before fitting");
}

void add_arsk_args(CLI::App* cmd, ArskArgs& a) {
    cmd->add_option("--k", a.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--penalty-e", a.penalty_e, "Group penalty on error rows (soft|scad)");
    cmd->add_option("--penalty-w", a.penalty_w, "Penalty on variable weights (soft|scad)");
    cmd->add_option("--scad-a", a.scad_a, "SCAD shape parameter (> 2)");
    cmd->add_option("--restarts", a.restarts, "k-means restarts per outer iteration");
    cmd->add_option("--init-fraction", a.init_fraction, "Share of rows initialised as errors");
    cmd->add_option("--restore", a.restore, "Error restoration divisor (sqrt|linear)")
        ->check(CLI::IsMember({"sqrt", "linear"}));
    cmd->add_option("--max-outer-iter", a.max_outer_iter, "Outer iteration cap");
    cmd->add_option("--outer-tol", a.outer_tol, "Relative weight-change tolerance");
    cmd->add_option("--seed", a.seed, "Random seed");
}

ArskOptions make_options(const ArskArgs& a) {
    ArskOptions opts;
    opts.k = a.k;
    opts.penalty_e = PenaltySpec{parse_penalty_kind(a.penalty_e), 0.0, a.scad_a};
    opts.penalty_w = PenaltySpec{parse_penalty_kind(a.penalty_w), 0.0, a.scad_a};
    opts.kmeans.restarts = a.restarts;
    opts.init_error_fraction = a.init_fraction;
    opts.restore = a.restore == "linear" ? RestoreMode::Linear : RestoreMode::Sqrt;
    opts.max_outer_iter = a.max_outer_iter;
    opts.outer_tol = a.outer_tol;
    opts.seed = a.seed;
    return opts;
}

DataMatrix load_data(const DataArgs& d, std::ostream& err) {
    DataMatrix x(read_csv_file(d.path, d.header));
    if (!d.standardize) {
        return x;
    }
    Standardized s = standardize(x);
    for (std::size_t j : s.constant_columns) {
        err << "warning: column " << j + 1 << " is constant; centred but not scaled\n";
    }
    return std::move(s.x);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_text_file(path, text);
    }
}

std::vector<int> shift_labels(const std::vector<int>& labels) {
    std::vector<int> out(labels);
    for (int& l : out) {
        ++l;
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptively robust and sparse k-means"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: $ARSK_THREADS or 1)");

    // fit
    DataArgs fit_data;
    ArskArgs fit_arsk;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::string fit_out;
    CLI::App* fit_cmd = app.add_subcommand("fit", "Fit ARSK at fixed (lambda1, lambda2)");
    add_data_args(fit_cmd, fit_data);
    add_arsk_args(fit_cmd, fit_arsk);
    fit_cmd->add_option("--lambda1", lambda1, "Group penalty level on error rows")->required();
    fit_cmd->add_option("--lambda2", lambda2, "Penalty level on variable weights")->required();
    fit_cmd->add_option("--out", fit_out, "Output JSON (default stdout)");

    // tune
    DataArgs tune_data;
    ArskArgs tune_arsk;
    TuneConfig tune_cfg;
    std::optional<double> dagger;
    std::string tune_out;
    std::string tune_fit_out;
    CLI::App* tune_cmd = app.add_subcommand("tune", "Select (lambda2, lambda1) by the robust Gap statistic");
    add_data_args(tune_cmd, tune_data);
    add_arsk_args(tune_cmd, tune_arsk);
    tune_cmd->add_option("--b", tune_cfg.b, "Null reference datasets per Gap evaluation");
    tune_cmd->add_option("--grid-size", tune_cfg.grid_size, "Points per lambda grid");
    tune_cmd->add_option("--decay", tune_cfg.decay, "Geometric grid ratio in (0,1)");
    tune_cmd->add_option("--lambda1-dagger", dagger, "lambda1 held fixed during the lambda2 search");
    tune_cmd->add_option("--out", tune_out, "Output JSON (default stdout)");
    tune_cmd->add_option("--fit-out", tune_fit_out, "Also write the selected fit as JSON");

    // simulate
    SimConfig sim;
    std::string cov = "identity";
    std::string prefix;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Generate a contaminated Gaussian mixture");
    sim_cmd->add_option("--k", sim.k, "Clusters");
    sim_cmd->add_option("--n-per-cluster", sim.n_per_cluster, "Observations per cluster");
    sim_cmd->add_option("--p", sim.p, "Variables")->required();
    sim_cmd->add_option("--q", sim.q, "Informative variables")->required();
    sim_cmd->add_option("--pi", sim.pi, "Contamination probability");
    sim_cmd->add_option("--cov", cov, "Covariance (identity|rotated)");
    sim_cmd->add_option("--seed", sim.seed, "Random seed");
    sim_cmd->add_option("--out-prefix", prefix, "Writes <prefix>.csv and <prefix>.truth.json")->required();

    // bench
    std::string scenario_file;
    std::optional<int> bench_reps;
    std::optional<std::uint64_t> bench_seed;
    std::vector<std::string> bench_methods;
    std::string bench_out;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Monte Carlo comparison over simulated scenarios");
    bench_cmd->add_option("--scenario-file", scenario_file, "JSON scenario file")->required();
    bench_cmd->add_option("--reps", bench_reps, "Replications per scenario (overrides the file)");
    bench_cmd->add_option("--seed", bench_seed, "Master seed (overrides the file)");
    bench_cmd->add_option("--methods", bench_methods, "Methods (overrides the file)")->delimiter(',');
    bench_cmd->add_option("--out", bench_out, "Output CSV (default stdout)");

    // eval
    std::string result_path;
    std::string truth_path;
    std::string eval_out;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Score a fit result against ground truth");
    eval_cmd->add_option("result", result_path, "Fit result JSON")->required();
    eval_cmd->add_option("truth", truth_path, "Ground-truth JSON")->required();
    eval_cmd->add_option("--out", eval_out, "Output JSON (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseOrConfig;
    }

    try {
        if (fit_cmd->parsed()) {
            const DataMatrix x = load_data(fit_data, err);
            ArskOptions opts = make_options(fit_arsk);
            opts.penalty_e.lambda = lambda1;
            opts.penalty_w.lambda = lambda2;
            const FitResult result = fit(x, opts);
            emit(fit_out, to_json(result).dump(2) + "\n", out);
            if (!result.converged) {
                err << "warning: no convergence within " << result.outer_iterations << " outer iterations\n";
                return kNonConvergence;
            }
            return kSuccess;
        }
        if (tune_cmd->parsed()) {
            const DataMatrix x = load_data(tune_data, err);
            tune_cfg.lambda1_dagger = dagger;
            tune_cfg.seed = tune_arsk.seed;
            tune_cfg.threads = static_cast<int>(resolve_threads(threads));
            const TuneResult result = tune(x, tune_arsk.k, tune_cfg, make_options(tune_arsk));
            emit(tune_out, to_json(result).dump(2) + "\n", out);
            if (!tune_fit_out.empty()) {
                write_text_file(tune_fit_out, to_json(result.best_fit).dump(2) + "\n");
            }
            return kSuccess;
        }
        if (sim_cmd->parsed()) {
            sim.covariance = parse_covariance_kind(cov);
            const SimDataset data = gen_dataset(sim);
            std::ostringstream csv;
            write_csv(csv, data.x.values());
            write_text_file(prefix + ".csv", csv.str());
            write_text_file(prefix + ".truth.json", truth_to_json(data).dump(2) + "\n");
            return kSuccess;
        }
        if (bench_cmd->parsed()) {
            BenchConfig cfg = bench_config_from_json(read_json_file(scenario_file));
            if (bench_reps) {
                if (*bench_reps < 1) {
                    throw InvalidParameter("--reps must be at least 1");
                }
                cfg.reps = *bench_reps;
            }
            if (bench_seed) {
                cfg.seed = *bench_seed;
            }
            if (!bench_methods.empty()) {
                cfg.methods.clear();
                for (const auto& m : bench_methods) {
                    cfg.methods.push_back(parse_method(m));
                }
            }
            cfg.threads = static_cast<int>(resolve_threads(threads > 0 ? threads : cfg.threads));
            const BenchReport report = run_bench(cfg);
            std::ostringstream csv;
            write_bench_csv(csv, report.rows);
            emit(bench_out, csv.str(), out);
            return kSuccess;
        }
        if (eval_cmd->parsed()) {
            const FitResult result = fit_result_from_json(read_json_file(result_path));
            const GroundTruth truth = ground_truth_from_json(read_json_file(truth_path));
            if (truth.labels.size() != result.model.labels.size()) {
                throw InvalidInput("result has " + std::to_string(result.model.labels.size()) +
                                   " observations but truth has " + std::to_string(truth.labels.size()));
            }
            if (static_cast<Eigen::Index>(truth.p) != result.weights.p()) {
                throw InvalidInput("result has " + std::to_string(result.weights.p()) +
                                   " variables but truth has " + std::to_string(truth.p));
            }
            const SelectionRates rates = tpr_tnr(result.weights.values, truth.informative);
            const OutlierConfusion conf = outlier_confusion(truth.outlier_flags, result.outlier_indices);
            json m;
            m["n"] = truth.labels.size();
            m["cer"] = cer_with_outliers(truth.labels, truth.outlier_flags, result.model.labels,
                                         result.outlier_indices, truth.k);
            m["cer_clusters_only"] = cer(truth.labels, result.model.labels);
            m["tpr"] = rates.tpr;
            m["tnr"] = rates.tnr;
            m["outliers"] = {{"true_pos", conf.true_pos},
                             {"false_pos", conf.false_pos},
                             {"false_neg", conf.false_neg},
                             {"detected", conf.detected}};
            m["predicted_labels"] = shift_labels(result.model.labels);
            emit(eval_out, m.dump(2) + "\n", out);
            return kSuccess;
        }
    } catch (const DegenerateWeights& e) {
        err << "error: degenerate weights: " << e.what() << '\n';
        return kDegenerateWeights;
    } catch (const TuningFailed& e) {
        err << "error: tuning failed: " << e.what() << '\n';
        return kTuningFailed;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseOrConfig;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kParseOrConfig;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kParseOrConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}

}  // namespace arsk::cli
