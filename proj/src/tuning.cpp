#include "arsk/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "arsk/errors.hpp"
#include "arsk/parallel.hpp"
#include "arsk/random.hpp"

namespace arsk {

void TuneConfig::check() const {
    if (b < 1) {
        throw InvalidParameter("number of null datasets B must be at least 1");
    }
    if (grid_size < 1) {
        throw InvalidParameter("grid size must be at least 1");
    }
    if (!(decay > 0.0 && decay < 1.0)) {
        throw InvalidParameter("grid decay must lie in (0, 1)");
    }
    for (const auto& v : {lambda1_dagger, lambda1_max, lambda2_max}) {
        if (v && !(*v > 0.0)) {
            throw InvalidParameter("explicit lambda bounds must be positive");
        }
    }
}

Eigen::MatrixXd permute_columns(const Eigen::MatrixXd& x, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    Eigen::MatrixXd out = x;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        auto col = out.col(j);
        std::shuffle(col.begin(), col.end(), rng);
    }
    return out;
}

DataMatrix permute_dataset(const DataMatrix& x, std::uint64_t seed) {
    return DataMatrix(permute_columns(x.values(), seed));
}

double robust_d(const DataMatrix& x, const FitResult& fit) {
    if (fit.weights.degenerate) {
        throw DegenerateStructure("weighted robust BCSS is undefined for degenerate weights");
    }
    const Eigen::VectorXd q = robust_bcss_all(x, fit.errors, fit.model);
    const double d = fit.weights.values.dot(q);
    if (!(d > 0.0)) {
        throw DegenerateStructure("weighted robust BCSS is not positive (" + std::to_string(d) + ")");
    }
    return d;
}

std::vector<double> make_grid(double lambda_max, int size, double decay) {
    if (!(lambda_max > 0.0)) {
        throw InvalidParameter("grid maximum must be positive");
    }
    if (size < 1) {
        throw InvalidParameter("grid size must be at least 1");
    }
    if (!(decay > 0.0 && decay < 1.0)) {
        throw InvalidParameter("grid decay must lie in (0, 1)");
    }
    std::vector<double> grid(static_cast<std::size_t>(size));
    double value = lambda_max;
    for (auto& g : grid) {
        g = value;
        value *= decay;
    }
    return grid;
}

double default_lambda2_max(const DataMatrix& x, int k, const KMeansOptions& kmeans_opts, std::uint64_t seed) {
    KMeansOptions opts = kmeans_opts;
    opts.seed = seed;
    const ClusterModel model = lloyd_weighted(x, WeightVector::uniform(x.p()), k, opts);
    double best = 0.0;
    for (Eigen::Index j = 0; j < x.p(); ++j) {
        best = std::max(best, bcss(x.col(j), model));
    }
    if (!(best > 0.0)) {
        throw DegenerateStructure("no variable separates the initial clustering; cannot build a lambda2 grid");
    }
    return best;
}

double default_lambda1_max(const DataMatrix& x) {
    const Eigen::RowVectorXd center = x.values().colwise().mean();
    double best = 0.0;
    for (Eigen::Index i = 0; i < x.n(); ++i) {
        best = std::max(best, (x.row(i) - center).norm());
    }
    if (!(best > 0.0)) {
        throw DegenerateStructure("all observations coincide; cannot build a lambda1 grid");
    }
    return best;
}

namespace {

struct Outcome {
    bool ok = false;
    double log_d = 0.0;
    std::size_t outliers = 0;
    std::size_t nonzero = 0;
};

std::vector<DataMatrix> make_nulls(const DataMatrix& x, const TuneConfig& cfg) {
    std::vector<DataMatrix> nulls;
    nulls.reserve(static_cast<std::size_t>(cfg.b));
    for (int b = 0; b < cfg.b; ++b) {
        const std::uint64_t seed = derive_seed(cfg.seed, SeedTag::Permutation, static_cast<std::uint64_t>(b));
        nulls.push_back(cfg.null_sampler ? cfg.null_sampler(x, seed) : permute_dataset(x, seed));
    }
    return nulls;
}

// Fits every (pair, dataset) combination; dataset 0 is X itself.
std::vector<GapPoint> sweep(const DataMatrix& x, const std::vector<DataMatrix>& nulls,
                            const std::vector<std::pair<double, double>>& pairs, const TuneConfig& cfg,
                            const ArskOptions& base, std::vector<FitResult>* originals) {
    const std::size_t per_point = nulls.size() + 1;
    std::vector<Outcome> outcomes(pairs.size() * per_point);
    std::vector<FitResult> fits(pairs.size());

    parallel_for(outcomes.size(), resolve_threads(cfg.threads), [&](std::size_t t) {
        const std::size_t g = t / per_point;
        const std::size_t b = t % per_point;
        const DataMatrix& data = b == 0 ? x : nulls[b - 1];
        ArskOptions opts = base;
        opts.penalty_e.lambda = pairs[g].first;
        opts.penalty_w.lambda = pairs[g].second;
        try {
            FitResult f = fit(data, opts);
            Outcome& o = outcomes[t];
            o.log_d = std::log(robust_d(data, f));
            o.outliers = f.outlier_indices.size();
            o.nonzero = f.weights.nonzero_count();
            o.ok = true;
            if (b == 0) {
                fits[g] = std::move(f);
            }
        } catch (const DegenerateWeights&) {
            // stays !ok; the point is reported infeasible
        } catch (const DegenerateStructure&) {
        }
    });

    std::vector<GapPoint> points(pairs.size());
    for (std::size_t g = 0; g < pairs.size(); ++g) {
        GapPoint& pt = points[g];
        pt.lambda1 = pairs[g].first;
        pt.lambda2 = pairs[g].second;
        const Outcome& orig = outcomes[g * per_point];
        pt.outliers = orig.outliers;
        pt.nonzero_weights = orig.nonzero;
        pt.log_d = orig.log_d;
        double total = 0.0;
        for (std::size_t b = 1; b < per_point; ++b) {
            const Outcome& o = outcomes[g * per_point + b];
            if (o.ok) {
                total += o.log_d;
            } else {
                ++pt.infeasible_nulls;
            }
        }
        pt.feasible = orig.ok && pt.infeasible_nulls == 0;
        if (pt.feasible) {
            pt.mean_log_d_null = total / static_cast<double>(nulls.size());
            pt.gap = pt.log_d - pt.mean_log_d_null;
        } else {
            pt.mean_log_d_null = std::nan("");
            pt.gap = std::nan("");
        }
    }
    if (originals != nullptr) {
        *originals = std::move(fits);
    }
    return points;
}

}  // namespace

GapPoint evaluate_gap(const DataMatrix& x, double lambda1, double lambda2, const TuneConfig& cfg,
                      const ArskOptions& arsk_opts) {
    cfg.check();
    arsk_opts.check();
    const auto nulls = make_nulls(x, cfg);
    return sweep(x, nulls, {{lambda1, lambda2}}, cfg, arsk_opts, nullptr).front();
}

double gap(const DataMatrix& x, int k, double lambda1, double lambda2, const TuneConfig& cfg,
           ArskOptions arsk_opts) {
    arsk_opts.k = k;
    const GapPoint pt = evaluate_gap(x, lambda1, lambda2, cfg, arsk_opts);
    if (!pt.feasible) {
        throw InfeasibleLambda("Gap undefined at lambda1=" + std::to_string(lambda1) +
                               ", lambda2=" + std::to_string(lambda2) + ": degenerate fit");
    }
    return pt.gap;
}

std::optional<std::size_t> select_best(const std::vector<GapPoint>& grid, bool sweep_lambda1) {
    std::optional<std::size_t> best;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (!grid[g].feasible) {
            continue;
        }
        if (!best) {
            best = g;
            continue;
        }
        const GapPoint& cur = grid[*best];
        const double lam = sweep_lambda1 ? grid[g].lambda1 : grid[g].lambda2;
        const double cur_lam = sweep_lambda1 ? cur.lambda1 : cur.lambda2;
        if (grid[g].gap > cur.gap || (grid[g].gap == cur.gap && lam < cur_lam)) {
            best = g;
        }
    }
    return best;
}

TuneResult tune(const DataMatrix& x, int k, const TuneConfig& cfg, ArskOptions arsk_opts) {
    cfg.check();
    arsk_opts.k = k;
    arsk_opts.check();
    if (k > x.n()) {
        throw InvalidParameter("cluster count exceeds the number of observations");
    }

    const double lambda1_max = cfg.lambda1_max.value_or(default_lambda1_max(x));
    const double lambda2_max = cfg.lambda2_max ? *cfg.lambda2_max
                                               : default_lambda2_max(x, k, arsk_opts.kmeans, arsk_opts.seed);
    TuneResult result;
    result.lambda1_dagger = cfg.lambda1_dagger.value_or(lambda1_max * cfg.decay * cfg.decay);
    const auto nulls = make_nulls(x, cfg);

    std::vector<std::pair<double, double>> pairs;
    for (double l2 : make_grid(lambda2_max, cfg.grid_size, cfg.decay)) {
        pairs.emplace_back(result.lambda1_dagger, l2);
    }
    result.grid2 = sweep(x, nulls, pairs, cfg, arsk_opts, nullptr);
    const auto best2 = select_best(result.grid2, false);
    if (!best2) {
        throw TuningFailed("every lambda2 grid point was infeasible (lambda1 fixed at " +
                           std::to_string(result.lambda1_dagger) + ")");
    }
    result.lambda2_star = result.grid2[*best2].lambda2;

    pairs.clear();
    for (double l1 : make_grid(lambda1_max, cfg.grid_size, cfg.decay)) {
        pairs.emplace_back(l1, result.lambda2_star);
    }
    std::vector<FitResult> fits;
    result.grid1 = sweep(x, nulls, pairs, cfg, arsk_opts, &fits);
    const auto best1 = select_best(result.grid1, true);
    if (!best1) {
        throw TuningFailed("every lambda1 grid point was infeasible (lambda2 fixed at " +
                           std::to_string(result.lambda2_star) + ")");
    }
    result.lambda1_star = result.grid1[*best1].lambda1;
    result.best_fit = std::move(fits[*best1]);
    return result;
}

}  // namespace arsk
