#include "arsk/wkmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "arsk/errors.hpp"
#include "arsk/random.hpp"

namespace arsk {

void KMeansOptions::check() const {
    if (restarts < 1) {
        throw InvalidParameter("k-means restarts must be at least 1");
    }
    if (max_iter < 1) {
        throw InvalidParameter("k-means max_iter must be at least 1");
    }
    if (!(tol > 0.0)) {
        throw InvalidParameter("k-means tolerance must be positive");
    }
}

namespace {

// Points are held transposed (p x n) so each observation is a contiguous column.
using ColMatrix = Eigen::MatrixXd;

void check_k(int k, Eigen::Index n) {
    if (k < 1) {
        throw InvalidParameter("cluster count must be at least 1, got " + std::to_string(k));
    }
    if (k > n) {
        throw InvalidParameter("cluster count " + std::to_string(k) + " exceeds the " + std::to_string(n) +
                               " available observations");
    }
}

// Nearest center for column i; ties resolved toward the lowest id.
inline int nearest(const ColMatrix& pts, Eigen::Index i, const ColMatrix& centers, double* dist) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centers.cols(); ++c) {
        const double d = (pts.col(i) - centers.col(c)).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    if (dist != nullptr) {
        *dist = best_d;
    }
    return best;
}

ColMatrix cluster_means(const ColMatrix& pts, const std::vector<int>& labels, int k) {
    ColMatrix centers = ColMatrix::Zero(pts.rows(), k);
    std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
        centers.col(labels[static_cast<std::size_t>(i)]) += pts.col(i);
        counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] += 1.0;
    }
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0.0) {
            centers.col(c) /= counts[static_cast<std::size_t>(c)];
        }
    }
    return centers;
}

double wss(const ColMatrix& pts, const std::vector<int>& labels, const ColMatrix& centers) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
        total += (pts.col(i) - centers.col(labels[static_cast<std::size_t>(i)])).squaredNorm();
    }
    return total;
}

// In-place farthest-point repair on transposed data; returns true if anything moved.
bool repair_empty(const ColMatrix& pts, std::vector<int>& labels, ColMatrix& centers, int k) {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int l : labels) {
        ++sizes[static_cast<std::size_t>(l)];
    }
    bool changed = false;
    for (int c = 0; c < k; ++c) {
        if (sizes[static_cast<std::size_t>(c)] > 0) {
            continue;
        }
        Eigen::Index far = -1;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < pts.cols(); ++i) {
            const int owner = labels[static_cast<std::size_t>(i)];
            if (sizes[static_cast<std::size_t>(owner)] <= 1) {
                continue;
            }
            const double d = (pts.col(i) - centers.col(owner)).squaredNorm();
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far < 0) {
            break;  // unreachable while k <= n
        }
        --sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
        labels[static_cast<std::size_t>(far)] = c;
        sizes[static_cast<std::size_t>(c)] = 1;
        centers.col(c) = pts.col(far);
        changed = true;
    }
    return changed;
}

ColMatrix seed_plus_plus(const ColMatrix& pts, int k, Rng& rng) {
    const Eigen::Index n = pts.cols();
    ColMatrix centers(pts.rows(), k);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    centers.col(0) = pts.col(pick(rng));
    Eigen::VectorXd d2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d2(i) = (pts.col(i) - centers.col(0)).squaredNorm();
    }
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        Eigen::Index chosen = n - 1;
        if (total > 0.0) {
            const double target = uniform01(rng) * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2(i);
                if (acc > target && d2(i) > 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick(rng);
        }
        centers.col(c) = pts.col(chosen);
        for (Eigen::Index i = 0; i < n; ++i) {
            d2(i) = std::min(d2(i), (pts.col(i) - centers.col(c)).squaredNorm());
        }
    }
    return centers;
}

std::vector<int> random_partition(Eigen::Index n, int k, Rng& rng) {
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::uniform_int_distribution<int> pick(0, k - 1);
    for (std::size_t r = 0; r < order.size(); ++r) {
        labels[order[r]] = r < static_cast<std::size_t>(k) ? static_cast<int>(r) : pick(rng);
    }
    return labels;
}

struct SingleRun {
    std::vector<int> labels;
    ColMatrix centers;
    KMeansRun run;
};

SingleRun lloyd_once(const ColMatrix& pts, int k, const KMeansOptions& opts, Rng& rng) {
    const Eigen::Index n = pts.cols();
    SingleRun out;
    out.labels.assign(static_cast<std::size_t>(n), -1);
    if (opts.init == KMeansInit::KMeansPlusPlus) {
        out.centers = seed_plus_plus(pts, k, rng);
    } else {
        out.labels = random_partition(n, k, rng);
        out.centers = cluster_means(pts, out.labels, k);
    }

    std::vector<int> next(static_cast<std::size_t>(n));
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        for (Eigen::Index i = 0; i < n; ++i) {
            next[static_cast<std::size_t>(i)] = nearest(pts, i, out.centers, nullptr);
        }
        const bool repaired = repair_empty(pts, next, out.centers, k);
        if (!repaired && next == out.labels) {
            break;
        }
        out.labels.swap(next);
        out.centers = cluster_means(pts, out.labels, k);
        const double obj = wss(pts, out.labels, out.centers);
        out.run.iterations = iter + 1;
        const bool small_step = !out.run.objective_trace.empty() &&
                                out.run.objective_trace.back() - obj <= opts.tol * out.run.objective_trace.back();
        out.run.objective_trace.push_back(obj);
        if (small_step) {
            break;
        }
    }
    if (out.run.objective_trace.empty()) {
        // Initial labels were already a fixed point (random-partition start).
        out.run.objective_trace.push_back(wss(pts, out.labels, out.centers));
    }
    out.run.objective = out.run.objective_trace.back();
    return out;
}

}  // namespace

KMeansReport kmeans(const Eigen::MatrixXd& points, int k, const KMeansOptions& opts) {
    opts.check();
    check_k(k, points.rows());
    const ColMatrix pts = points.transpose();

    KMeansReport report;
    report.runs.reserve(static_cast<std::size_t>(opts.restarts));
    SingleRun best;
    for (int r = 0; r < opts.restarts; ++r) {
        Rng rng = make_rng(derive_seed(opts.seed, SeedTag::KMeansRestart, static_cast<std::uint64_t>(r)));
        SingleRun run = lloyd_once(pts, k, opts, rng);
        report.runs.push_back(run.run);
        if (r == 0 || run.run.objective < best.run.objective) {
            report.best_restart = static_cast<std::size_t>(r);
            best = std::move(run);
        }
    }
    report.model.k = k;
    report.model.labels = std::move(best.labels);
    report.model.centers = best.centers.transpose();
    report.objective = best.run.objective;
    return report;
}

double within_ss(const Eigen::MatrixXd& points, const ClusterModel& model) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        total += (points.row(i) - model.centers.row(model.labels[static_cast<std::size_t>(i)])).squaredNorm();
    }
    return total;
}

ClusterModel lloyd_weighted(const DataMatrix& x_adj, const WeightVector& weights, int k,
                            const KMeansOptions& opts, KMeansReport* report) {
    if (weights.degenerate || weights.nonzero_count() == 0) {
        throw DegenerateWeights("all variable weights are zero; nothing to cluster on");
    }
    ensure_valid(weights);
    if (weights.p() != x_adj.p()) {
        throw InvalidInput("weight vector length does not match the number of variables");
    }
    check_k(k, x_adj.n());

    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < weights.p(); ++j) {
        if (weights.values(j) > 0.0) {
            active.push_back(j);
        }
    }
    Eigen::MatrixXd weighted(x_adj.n(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t a = 0; a < active.size(); ++a) {
        weighted.col(static_cast<Eigen::Index>(a)) = x_adj.col(active[a]) * weights.values(active[a]);
    }

    KMeansReport local = kmeans(weighted, k, opts);
    ClusterModel model;
    model.k = k;
    model.labels = local.model.labels;
    model.centers = Eigen::MatrixXd::Zero(k, x_adj.p());
    for (std::size_t a = 0; a < active.size(); ++a) {
        model.centers.col(active[a]) = local.model.centers.col(static_cast<Eigen::Index>(a));
    }
    if (report != nullptr) {
        local.model = model;
        *report = std::move(local);
    }
    return model;
}

ClusterModel empty_cluster_repair(ClusterModel model, const Eigen::MatrixXd& points) {
    check_k(model.k, points.rows());
    const ColMatrix pts = points.transpose();
    ColMatrix centers = model.centers.transpose();
    if (repair_empty(pts, model.labels, centers, model.k)) {
        model.centers = centers.transpose();
    }
    return model;
}

TrimmedResult trimmed_kmeans(const DataMatrix& x, int k, double alpha, const KMeansOptions& opts) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw InvalidParameter("trimming proportion must lie in [0, 1), got " + std::to_string(alpha));
    }
    const Eigen::Index n = x.n();
    const auto trim = static_cast<Eigen::Index>(std::ceil(alpha * static_cast<double>(n) - 1e-9));
    if (n - trim < k) {
        throw InvalidParameter("cluster count " + std::to_string(k) + " exceeds the " + std::to_string(n - trim) +
                               " retained observations");
    }

    TrimmedResult result;
    result.model = kmeans(x.values(), k, opts).model;
    if (trim == 0) {
        return result;
    }

    const ColMatrix pts = x.values().transpose();
    ColMatrix centers = result.model.centers.transpose();
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::vector<double> dist(static_cast<std::size_t>(n));
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::vector<std::size_t> trimmed;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        for (Eigen::Index i = 0; i < n; ++i) {
            labels[static_cast<std::size_t>(i)] = nearest(pts, i, centers, &dist[static_cast<std::size_t>(i)]);
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
        std::vector<std::size_t> now(order.begin(), order.begin() + trim);
        std::sort(now.begin(), now.end());

        // Refit centers on retained points only.
        std::vector<bool> dropped(static_cast<std::size_t>(n), false);
        for (std::size_t i : now) {
            dropped[i] = true;
        }
        std::vector<std::size_t> keep;
        keep.reserve(static_cast<std::size_t>(n - trim));
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
            if (!dropped[i]) {
                keep.push_back(i);
            }
        }
        ColMatrix kept(pts.rows(), static_cast<Eigen::Index>(keep.size()));
        std::vector<int> kept_labels(keep.size());
        for (std::size_t r = 0; r < keep.size(); ++r) {
            kept.col(static_cast<Eigen::Index>(r)) = pts.col(static_cast<Eigen::Index>(keep[r]));
            kept_labels[r] = labels[keep[r]];
        }
        repair_empty(kept, kept_labels, centers, k);
        for (std::size_t r = 0; r < keep.size(); ++r) {
            labels[keep[r]] = kept_labels[r];
        }
        const ColMatrix refit = cluster_means(kept, kept_labels, k);

        const bool stable = iter > 0 && now == trimmed && labels == result.model.labels;
        trimmed = std::move(now);
        result.model.labels = labels;
        centers = refit;
        result.iterations = iter + 1;
        if (stable) {
            break;
        }
    }
    result.model.centers = centers.transpose();
    result.outliers = trimmed;
    return result;
}

}  // namespace arsk
