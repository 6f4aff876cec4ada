#ifndef ARSK_ARSK_HPP
#define ARSK_ARSK_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "arsk/model.hpp"
#include "arsk/wkmeans.hpp"

namespace arsk {

// How the weighted error matrix is mapped back to data units after the
// E-update: divide column j by sqrt(w_j) or by w_j. Zero weights divide by one.
enum class RestoreMode { Sqrt, Linear };

struct ArskOptions {
    PenaltySpec penalty_e = PenaltySpec::lasso(1.0);  // group penalty on rows of E (lambda1)
    PenaltySpec penalty_w = PenaltySpec::lasso(0.0);  // penalty on weights (lambda2)
    int k = 2;
    double outer_tol = 1e-4;
    int max_outer_iter = 50;
    double inner_e_tol = 1e-6;
    int max_inner_e_iter = 100;
    double init_error_fraction = 0.8;
    RestoreMode restore = RestoreMode::Sqrt;
    // Restarts/iterations/init of the per-iteration weighted k-means. Its seed
    // field is ignored: outer iteration r uses a seed derived from `seed` and r.
    KMeansOptions kmeans{};
    std::uint64_t seed = 0;

    void check() const;
};

// Between-cluster sum of squares of one variable, computed as total SS minus
// within-cluster SS (both around means).
double bcss(const Eigen::Ref<const Eigen::VectorXd>& column, const ClusterModel& model);

// bcss of the error-adjusted column x - e.
double robust_bcss(const Eigen::Ref<const Eigen::VectorXd>& column, const Eigen::Ref<const Eigen::VectorXd>& errors,
                   const ClusterModel& model);

// Per-variable robust BCSS for the whole matrix.
Eigen::VectorXd robust_bcss_all(const DataMatrix& x, const ErrorMatrix& errors, const ClusterModel& model);

// sum_j w_j Q_j^R - sum_i P1(||E_i||) - sum_j (P2(w_j) + w_j^2 / 2).
double full_objective(const DataMatrix& x, const ClusterModel& model, const ErrorMatrix& errors,
                      const WeightVector& weights, const PenaltySpec& penalty_e, const PenaltySpec& penalty_w);

// Copies the ceil(fraction*n) rows farthest from the grand mean into E; other
// rows are zero. Distance ties keep the lower row index first.
ErrorMatrix init_error_matrix(const DataMatrix& x, double fraction);

struct ErrorUpdate {
    ErrorMatrix weighted;                 // E* in the weighted space
    std::vector<double> objective_trace;  // inner objective after each sweep
    int iterations = 0;
    bool converged = false;
};

// Block-coordinate E-update with the assignment held fixed, on weighted data
// X*_ij = w_j X_ij starting from E*_ij = w_j E_prev_ij. Each sweep recomputes
// cluster means of X* - E* and then group-thresholds every residual row.
ErrorUpdate update_error_matrix(const DataMatrix& x, const ClusterModel& model, const WeightVector& weights,
                                const ErrorMatrix& e_prev, const PenaltySpec& penalty_e, const ArskOptions& opts);

ErrorMatrix restore_error_matrix(const ErrorMatrix& weighted, const WeightVector& weights,
                                 RestoreMode mode = RestoreMode::Sqrt);

// Threshold then project onto the unit sphere. Negative inputs (rounding
// noise on an analytically nonnegative quantity) are clipped to zero first.
// Throws DegenerateWeights if nothing survives thresholding.
WeightVector update_weights(const Eigen::Ref<const Eigen::VectorXd>& q_robust, const PenaltySpec& penalty_w);

// Optional per-iteration record of a fit, for diagnostics and tests.
struct FitTrace {
    std::vector<KMeansReport> kmeans;
    std::vector<ErrorUpdate> error_updates;
    std::vector<Eigen::VectorXd> q_robust;
    std::vector<WeightVector> weights;  // weights used by iteration r (entry 0 is the uniform start)
};

FitResult fit(const DataMatrix& x, const ArskOptions& opts, FitTrace* trace = nullptr);

}  // namespace arsk

#endif  // ARSK_ARSK_HPP
