#ifndef ARSK_MODEL_HPP
#define ARSK_MODEL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace arsk {

// n x p observation matrix. Construction rejects n < 2, p < 1 and
// non-finite entries, so every DataMatrix in circulation is usable as-is.
class DataMatrix {
public:
    explicit DataMatrix(Eigen::MatrixXd values);

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    Eigen::Index n() const noexcept { return values_.rows(); }
    Eigen::Index p() const noexcept { return values_.cols(); }

    auto row(Eigen::Index i) const { return values_.row(i); }
    auto col(Eigen::Index j) const { return values_.col(j); }

    bool operator==(const DataMatrix& other) const { return values_ == other.values_; }

private:
    Eigen::MatrixXd values_;
};

// Hard assignment plus centers. Labels are 0-based in the C++ API; the JSON
// and CSV surfaces shift them to 1..K.
struct ClusterModel {
    std::vector<int> labels;
    int k = 0;
    Eigen::MatrixXd centers;  // k x p

    std::vector<std::size_t> sizes() const;
    std::vector<std::vector<std::size_t>> members() const;

    bool operator==(const ClusterModel& other) const {
        return k == other.k && labels == other.labels && centers == other.centers;
    }
};

// Per-observation mean-shift parameters. A row is an outlier iff its L2 norm
// is strictly positive.
struct ErrorMatrix {
    Eigen::MatrixXd values;

    static ErrorMatrix zeros(Eigen::Index n, Eigen::Index p) {
        return ErrorMatrix{Eigen::MatrixXd::Zero(n, p)};
    }

    bool row_active(Eigen::Index i) const { return values.row(i).squaredNorm() > 0.0; }
    std::vector<std::size_t> active_rows() const;

    bool operator==(const ErrorMatrix& other) const { return values == other.values; }
};

// Nonnegative variable weights on the unit L2 sphere, or the all-zero
// degenerate state produced when every weight is thresholded away.
struct WeightVector {
    Eigen::VectorXd values;
    bool degenerate = false;

    static WeightVector uniform(Eigen::Index p);
    static WeightVector degenerate_state(Eigen::Index p);

    Eigen::Index p() const noexcept { return values.size(); }
    std::size_t nonzero_count() const;

    bool operator==(const WeightVector& other) const {
        return degenerate == other.degenerate && values == other.values;
    }
};

inline constexpr double kUnitNormTolerance = 1e-10;

enum class PenaltyKind { Lasso, Scad };

struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::Lasso;
    double lambda = 0.0;
    double a = 3.7;

    static PenaltySpec lasso(double lambda) { return {PenaltyKind::Lasso, lambda, 3.7}; }
    static PenaltySpec scad(double lambda, double a = 3.7) { return {PenaltyKind::Scad, lambda, a}; }

    // Throws InvalidParameter for lambda < 0 (or NaN) and, for SCAD, a <= 2.
    void check() const;

    bool operator==(const PenaltySpec&) const = default;
};

std::string to_string(PenaltyKind kind);
// Accepts "soft"/"lasso" and "scad" (case-insensitive).
PenaltyKind parse_penalty_kind(const std::string& name);

struct FitResult {
    ClusterModel model;
    ErrorMatrix errors;
    WeightVector weights;
    std::vector<std::size_t> outlier_indices;  // sorted, 0-based
    std::vector<double> objective_trace;
    int outer_iterations = 0;
    bool converged = false;
    int inner_nonconverged = 0;  // outer iterations whose E-update hit its cap

    bool operator==(const FitResult& other) const {
        return model == other.model && errors == other.errors && weights == other.weights &&
               outlier_indices == other.outlier_indices && objective_trace == other.objective_trace &&
               outer_iterations == other.outer_iterations && converged == other.converged;
    }
};

// Invariant checks. Each returns human-readable violations; empty means valid.
std::vector<std::string> violations(const ClusterModel& model, std::size_t n);
std::vector<std::string> violations(const ErrorMatrix& errors);
std::vector<std::string> violations(const WeightVector& weights);
std::vector<std::string> validate(const FitResult& fit);

// Throwing counterparts used at API boundaries.
void ensure_valid(const ClusterModel& model, std::size_t n);
void ensure_valid(const WeightVector& weights);

}  // namespace arsk

#endif  // ARSK_MODEL_HPP
