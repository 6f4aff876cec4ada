#ifndef ARSK_WKMEANS_HPP
#define ARSK_WKMEANS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "arsk/model.hpp"

namespace arsk {

enum class KMeansInit { KMeansPlusPlus, RandomPartition };

struct KMeansOptions {
    int restarts = 20;
    int max_iter = 100;
    double tol = 1e-8;  // relative change in objective
    KMeansInit init = KMeansInit::KMeansPlusPlus;
    std::uint64_t seed = 0;

    void check() const;
};

// Per-restart record, kept so callers can audit Lloyd monotonicity.
struct KMeansRun {
    std::vector<double> objective_trace;  // within-cluster SS after each Lloyd iteration
    double objective = 0.0;
    int iterations = 0;
};

struct KMeansReport {
    ClusterModel model;
    double objective = 0.0;
    std::size_t best_restart = 0;
    std::vector<KMeansRun> runs;
};

// Lloyd's algorithm on `points` as given (no weighting), best of
// opts.restarts runs. Ties in assignment go to the lowest cluster id; ties in
// objective across restarts go to the lowest restart index.
KMeansReport kmeans(const Eigen::MatrixXd& points, int k, const KMeansOptions& opts);

// Within-cluster sum of squares of `points` around `model.centers`.
double within_ss(const Eigen::MatrixXd& points, const ClusterModel& model);

// Clusters X*_{ij} = w_j * Xadj_{ij}. Centers are returned in the weighted
// space. Zero-weight columns are skipped; they contribute nothing to distances.
ClusterModel lloyd_weighted(const DataMatrix& x_adj, const WeightVector& weights, int k,
                            const KMeansOptions& opts, KMeansReport* report = nullptr);

// Reseeds every empty cluster at the point farthest from its current center
// (points in singleton clusters are never taken) and relabels that point.
ClusterModel empty_cluster_repair(ClusterModel model, const Eigen::MatrixXd& points);

struct TrimmedResult {
    ClusterModel model;
    std::vector<std::size_t> outliers;  // sorted, 0-based
    int iterations = 0;
};

// Standard k-means, then repeatedly trims the ceil(alpha*n) points farthest
// from their nearest center, refits centers on the rest and reassigns, until
// both the trimmed set and the labels stop changing.
TrimmedResult trimmed_kmeans(const DataMatrix& x, int k, double alpha, const KMeansOptions& opts);

}  // namespace arsk

#endif  // ARSK_WKMEANS_HPP
