#include "arsk/bench.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "arsk/errors.hpp"
#include "arsk/metrics.hpp"
#include "arsk/parallel.hpp"
#include "arsk/random.hpp"
#include "arsk/wkmeans.hpp"

namespace arsk {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

// FNV-1a, so method seeds do not depend on the order methods are listed in.
std::uint64_t name_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

const std::vector<std::string> kCsvHeader = {
    "scenario", "method",   "reps",     "failures",    "cer_mean",    "cer_sd",     "cer_se",
    "tpr_mean", "tpr_sd",   "tpr_se",   "tnr_mean",    "tnr_sd",      "tnr_se",     "outliers_mean",
    "outliers_sd", "outliers_se"};

}  // namespace

MethodSpec parse_method(const std::string& name) {
    const std::string key = lower(name);
    MethodSpec spec;
    spec.name = key;
    if (key == "kc") {
        spec.kind = MethodKind::KMeans;
        return spec;
    }
    if (key == "tkm") {
        spec.kind = MethodKind::Trimmed;
        return spec;
    }
    const std::string suffix = "-arsk";
    if (key.size() > suffix.size() && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0) {
        const std::string body = key.substr(0, key.size() - suffix.size());
        const auto dash = body.find('-');
        if (dash != std::string::npos) {
            try {
                spec.kind = MethodKind::Arsk;
                spec.weight_penalty = parse_penalty_kind(body.substr(0, dash));
                spec.error_penalty = parse_penalty_kind(body.substr(dash + 1));
                return spec;
            } catch (const InvalidParameter&) {
                // fall through to the generic message
            }
        }
    }
    throw InvalidParameter("unknown method '" + name + "' (expected kc, tkm or <soft|scad>-<soft|scad>-arsk)");
}

BenchConfig bench_config_from_json(const json& j) {
    BenchConfig cfg;
    try {
        cfg.reps = j.value("reps", cfg.reps);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.tkm_alpha = j.value("tkm_alpha", cfg.tkm_alpha);
        cfg.threads = j.value("threads", cfg.threads);
        for (const json& s : j.at("scenarios")) {
            Scenario sc;
            sc.sim.k = s.value("k", 3);
            sc.sim.n_per_cluster = s.value("n_per_cluster", 50);
            sc.sim.p = s.at("p").get<int>();
            sc.sim.q = s.at("q").get<int>();
            sc.sim.pi = s.value("pi", 0.0);
            sc.sim.covariance = parse_covariance_kind(s.value("covariance", std::string("identity")));
            sc.sim.check();
            std::ostringstream fallback;
            fallback << "p" << sc.sim.p << "_q" << sc.sim.q << "_pi" << sc.sim.pi << '_'
                     << to_string(sc.sim.covariance);
            sc.name = s.value("name", fallback.str());
            cfg.scenarios.push_back(std::move(sc));
        }
        for (const json& m : j.at("methods")) {
            cfg.methods.push_back(parse_method(m.get<std::string>()));
        }
        if (j.contains("lambda_policy")) {
            const json& lp = j.at("lambda_policy");
            const std::string mode = lp.value("mode", std::string("gap"));
            if (mode == "gap") {
                cfg.lambda.gap_tuned = true;
                cfg.lambda.tune.b = lp.value("b", cfg.lambda.tune.b);
                cfg.lambda.tune.grid_size = lp.value("grid_size", cfg.lambda.tune.grid_size);
                cfg.lambda.tune.decay = lp.value("decay", cfg.lambda.tune.decay);
                if (lp.contains("lambda1_dagger")) {
                    cfg.lambda.tune.lambda1_dagger = lp.at("lambda1_dagger").get<double>();
                }
                cfg.lambda.tune.check();
            } else if (mode == "fixed") {
                cfg.lambda.gap_tuned = false;
                cfg.lambda.lambda1 = lp.at("lambda1").get<double>();
                cfg.lambda.lambda2 = lp.at("lambda2").get<double>();
            } else {
                throw InvalidParameter("lambda_policy.mode must be 'gap' or 'fixed'");
            }
        }
        if (j.contains("arsk")) {
            const json& a = j.at("arsk");
            cfg.arsk.kmeans.restarts = a.value("restarts", cfg.arsk.kmeans.restarts);
            cfg.arsk.outer_tol = a.value("outer_tol", cfg.arsk.outer_tol);
            cfg.arsk.max_outer_iter = a.value("max_outer_iter", cfg.arsk.max_outer_iter);
            cfg.arsk.init_error_fraction = a.value("init_error_fraction", cfg.arsk.init_error_fraction);
            cfg.arsk.penalty_e.a = a.value("scad_a", cfg.arsk.penalty_e.a);
            cfg.arsk.penalty_w.a = cfg.arsk.penalty_e.a;
            const std::string restore = a.value("restore", std::string("sqrt"));
            if (restore != "sqrt" && restore != "linear") {
                throw InvalidParameter("arsk.restore must be 'sqrt' or 'linear'");
            }
            cfg.arsk.restore = restore == "sqrt" ? RestoreMode::Sqrt : RestoreMode::Linear;
        }
        if (j.contains("kmeans")) {
            cfg.kmeans.restarts = j.at("kmeans").value("restarts", cfg.kmeans.restarts);
        }
    } catch (const json::exception& e) {
        throw InvalidParameter(std::string("malformed bench configuration: ") + e.what());
    }
    if (cfg.scenarios.empty() || cfg.methods.empty()) {
        throw InvalidParameter("bench configuration needs at least one scenario and one method");
    }
    if (cfg.reps < 1) {
        throw InvalidParameter("reps must be at least 1");
    }
    return cfg;
}

std::uint64_t replicate_seed(std::uint64_t seed, std::size_t scenario, int rep) {
    return derive_seed(derive_seed(seed, SeedTag::Scenario, scenario), SeedTag::Replicate,
                       static_cast<std::uint64_t>(rep));
}

ReplicateRecord run_method(const SimDataset& data, const MethodSpec& method, const BenchConfig& cfg,
                           std::uint64_t seed) {
    ReplicateRecord rec;
    const int k = data.config.k;
    const std::uint64_t method_seed = derive_seed(seed, SeedTag::Method, name_hash(method.name));
    try {
        switch (method.kind) {
        case MethodKind::KMeans: {
            KMeansOptions km = cfg.kmeans;
            km.seed = method_seed;
            const KMeansReport report = kmeans(data.x.values(), k, km);
            rec.cer = cer_with_outliers(data.true_labels, data.outlier_flags, report.model.labels, {}, k);
            break;
        }
        case MethodKind::Trimmed: {
            KMeansOptions km = cfg.kmeans;
            km.seed = method_seed;
            const TrimmedResult res = trimmed_kmeans(data.x, k, cfg.tkm_alpha, km);
            rec.cer = cer_with_outliers(data.true_labels, data.outlier_flags, res.model.labels, res.outliers, k);
            rec.outliers = static_cast<double>(res.outliers.size());
            break;
        }
        case MethodKind::Arsk: {
            ArskOptions opts = cfg.arsk;
            opts.k = k;
            opts.seed = method_seed;
            opts.penalty_w.kind = method.weight_penalty;
            opts.penalty_e.kind = method.error_penalty;
            FitResult fitted;
            if (cfg.lambda.gap_tuned) {
                TuneConfig tc = cfg.lambda.tune;
                tc.seed = method_seed;
                tc.threads = 1;
                TuneResult tuned = tune(data.x, k, tc, opts);
                rec.lambda1 = tuned.lambda1_star;
                rec.lambda2 = tuned.lambda2_star;
                fitted = std::move(tuned.best_fit);
            } else {
                opts.penalty_e.lambda = cfg.lambda.lambda1;
                opts.penalty_w.lambda = cfg.lambda.lambda2;
                rec.lambda1 = cfg.lambda.lambda1;
                rec.lambda2 = cfg.lambda.lambda2;
                fitted = fit(data.x, opts);
            }
            rec.cer = cer_with_outliers(data.true_labels, data.outlier_flags, fitted.model.labels,
                                        fitted.outlier_indices, k);
            const SelectionRates rates = tpr_tnr(fitted.weights.values, data.informative);
            rec.tpr = rates.tpr;
            rec.tnr = rates.tnr;
            rec.outliers = static_cast<double>(fitted.outlier_indices.size());
            rec.nonzero_weights = static_cast<double>(fitted.weights.nonzero_count());
            break;
        }
        }
        rec.ok = true;
    } catch (const TuningFailed&) {
        rec.ok = false;
    } catch (const DegenerateWeights&) {
        rec.ok = false;
    }
    return rec;
}

Summary summarize(const std::vector<double>& values) {
    Summary s;
    if (values.empty()) {
        return s;
    }
    s.defined = true;
    const double n = static_cast<double>(values.size());
    double total = 0.0;
    for (double v : values) {
        total += v;
    }
    s.mean = total / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.sd = std::sqrt(ss / (n - 1.0));
        s.se = s.sd / std::sqrt(n);
    }
    return s;
}

BenchReport run_bench(const BenchConfig& cfg) {
    const std::size_t n_methods = cfg.methods.size();
    const auto reps = static_cast<std::size_t>(cfg.reps);
    BenchReport report;
    report.records.resize(cfg.scenarios.size() * reps * n_methods);

    parallel_for(report.records.size(), resolve_threads(cfg.threads), [&](std::size_t t) {
        const std::size_t s = t / (reps * n_methods);
        const std::size_t r = (t / n_methods) % reps;
        const std::size_t m = t % n_methods;
        SimConfig sim = cfg.scenarios[s].sim;
        sim.seed = replicate_seed(cfg.seed, s, static_cast<int>(r));
        const SimDataset data = gen_dataset(sim);
        ReplicateRecord rec = run_method(data, cfg.methods[m], cfg, sim.seed);
        rec.scenario = s;
        rec.method = m;
        rec.rep = static_cast<int>(r);
        report.records[t] = rec;
    });

    for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
        for (std::size_t m = 0; m < n_methods; ++m) {
            BenchRow row;
            row.scenario = cfg.scenarios[s].name;
            row.method = cfg.methods[m].name;
            row.reps = cfg.reps;
            std::vector<double> cer_v, tpr_v, tnr_v, out_v;
            for (const ReplicateRecord& rec : report.records) {
                if (rec.scenario != s || rec.method != m) {
                    continue;
                }
                if (!rec.ok) {
                    ++row.failures;
                    continue;
                }
                cer_v.push_back(rec.cer);
                out_v.push_back(rec.outliers);
                if (rec.tpr) {
                    tpr_v.push_back(*rec.tpr);
                    tnr_v.push_back(*rec.tnr);
                }
            }
            row.cer = summarize(cer_v);
            row.tpr = summarize(tpr_v);
            row.tnr = summarize(tnr_v);
            row.outliers = summarize(out_v);
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    for (std::size_t c = 0; c < kCsvHeader.size(); ++c) {
        out << (c ? "," : "") << kCsvHeader[c];
    }
    out << '\n';
    auto put = [&out](const Summary& s) {
        if (s.defined) {
            out << ',' << format_double(s.mean) << ',' << format_double(s.sd) << ',' << format_double(s.se);
        } else {
            out << ",NA,NA,NA";
        }
    };
    for (const BenchRow& row : rows) {
        out << row.scenario << ',' << row.method << ',' << row.reps << ',' << row.failures;
        put(row.cer);
        put(row.tpr);
        put(row.tnr);
        put(row.outliers);
        out << '\n';
    }
}

std::vector<BenchRow> read_bench_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty bench table", 1, 1);
    }
    std::vector<BenchRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != kCsvHeader.size()) {
            throw ParseError("bench row has " + std::to_string(cells.size()) + " cells", line_no, 1);
        }
        BenchRow row;
        row.scenario = cells[0];
        row.method = cells[1];
        row.reps = std::stoi(cells[2]);
        row.failures = std::stoi(cells[3]);
        auto get = [&cells](std::size_t at) {
            Summary s;
            if (cells[at] == "NA") {
                return s;
            }
            s.defined = true;
            s.mean = std::stod(cells[at]);
            s.sd = std::stod(cells[at + 1]);
            s.se = std::stod(cells[at + 2]);
            return s;
        };
        row.cer = get(4);
        row.tpr = get(7);
        row.tnr = get(10);
        row.outliers = get(13);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace arsk
