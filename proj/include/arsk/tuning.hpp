#ifndef ARSK_TUNING_HPP
#define ARSK_TUNING_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "arsk/arsk.hpp"
#include "arsk/model.hpp"

namespace arsk {

// Produces the b-th null reference dataset from X and a derived seed.
using NullSampler = std::function<DataMatrix(const DataMatrix&, std::uint64_t)>;

struct TuneConfig {
    int b = 25;           // null reference datasets per Gap evaluation
    int grid_size = 10;   // points per lambda grid
    double decay = 0.5;   // geometric grid ratio
    std::optional<double> lambda1_dagger;  // lambda1 held fixed while lambda2 is searched
    std::optional<double> lambda1_max;
    std::optional<double> lambda2_max;
    std::uint64_t seed = 0;
    int threads = 1;
    NullSampler null_sampler;  // defaults to permute_dataset

    void check() const;
};

struct GapPoint {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double gap = 0.0;
    bool feasible = false;
    double log_d = 0.0;            // log D^R of the fit on X
    double mean_log_d_null = 0.0;  // average log D^R over the null fits
    std::size_t outliers = 0;
    std::size_t nonzero_weights = 0;
    std::size_t infeasible_nulls = 0;
};

struct TuneResult {
    double lambda2_star = 0.0;
    double lambda1_star = 0.0;
    double lambda1_dagger = 0.0;
    std::vector<GapPoint> grid2;  // step 1: lambda2 sweep at lambda1_dagger
    std::vector<GapPoint> grid1;  // step 2: lambda1 sweep at lambda2_star
    FitResult best_fit;           // fit on X at (lambda1_star, lambda2_star)
};

// Permutes each column independently (column multisets preserved).
Eigen::MatrixXd permute_columns(const Eigen::MatrixXd& x, std::uint64_t seed);
DataMatrix permute_dataset(const DataMatrix& x, std::uint64_t seed);

// Weighted robust between-cluster sum of squares, sum_j w_j Q_j^R.
// Throws DegenerateStructure when it is not positive.
double robust_d(const DataMatrix& x, const FitResult& fit);

// Geometric grid lambda_max * decay^t, t = 0..size-1 (descending).
std::vector<double> make_grid(double lambda_max, int size, double decay);

// Saturation points of the two thresholding operators: the largest BCSS of
// a plain k-means fit (lambda2) and the largest row distance from the grand
// mean (lambda1).
double default_lambda2_max(const DataMatrix& x, int k, const KMeansOptions& kmeans, std::uint64_t seed);
double default_lambda1_max(const DataMatrix& x);

// Full Gap evaluation at one (lambda1, lambda2) pair, never throwing for
// degenerate fits (they mark the point infeasible).
GapPoint evaluate_gap(const DataMatrix& x, double lambda1, double lambda2, const TuneConfig& cfg,
                      const ArskOptions& arsk_opts);

// Gap statistic log D^R(X) - mean_b log D^R(X^(b)). Throws InfeasibleLambda.
double gap(const DataMatrix& x, int k, double lambda1, double lambda2, const TuneConfig& cfg,
           ArskOptions arsk_opts);

// Index of the best feasible point: largest gap, ties to the smaller lambda
// of the swept parameter. Returns nullopt if nothing is feasible.
std::optional<std::size_t> select_best(const std::vector<GapPoint>& grid, bool sweep_lambda1);

// Alternating search: lambda2 at fixed lambda1_dagger, then lambda1 at the
// chosen lambda2. Penalty kinds and everything else come from arsk_opts.
TuneResult tune(const DataMatrix& x, int k, const TuneConfig& cfg, ArskOptions arsk_opts);

}  // namespace arsk

#endif  // ARSK_TUNING_HPP
