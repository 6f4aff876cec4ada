#ifndef ARSK_SIMGEN_HPP
#define ARSK_SIMGEN_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arsk/model.hpp"

namespace arsk {

enum class CovarianceKind { Identity, RotatedEquicorrelation };

std::string to_string(CovarianceKind kind);
CovarianceKind parse_covariance_kind(const std::string& name);  // "identity" | "rotated"

struct SimConfig {
    int k = 3;
    int n_per_cluster = 50;
    int p = 50;
    int q = 5;
    double pi = 0.0;
    CovarianceKind covariance = CovarianceKind::Identity;
    std::uint64_t seed = 0;

    void check() const;
    bool operator==(const SimConfig&) const = default;
};

struct SimMeans {
    Eigen::MatrixXd means;                  // k x p
    std::vector<std::size_t> informative;  // sorted, 0-based, size q
};

struct SimCovariance {
    Eigen::MatrixXd sigma;
    double rho = 0.0;  // equicorrelation used (0 for identity)
};

struct SimDataset {
    DataMatrix x;
    std::vector<int> true_labels;  // 0-based, rows grouped by cluster
    std::vector<bool> outlier_flags;
    std::vector<std::size_t> informative;
    Eigen::MatrixXd true_means;
    SimConfig config;
};

// One shared informative set of q variables; each informative mean entry is
// U(-6,-3) or U(3,6) with a fair coin, everything else is zero.
SimMeans gen_means(int k, int p, int q, std::uint64_t seed);

// I_p, or Q R Q^T with R equicorrelated at rho ~ U(0.1, 1) and Q a Haar
// orthogonal matrix from the sign-fixed QR of a Gaussian matrix.
SimCovariance gen_covariance(int p, CovarianceKind kind, std::uint64_t seed);

// Draws n_per_cluster observations per cluster; each is an outlier with
// probability pi, shifted by an offset whose every coordinate is U(-13,-7) or
// U(7,13) with a fair coin.
SimDataset gen_dataset(const SimConfig& cfg);

}  // namespace arsk

#endif  // ARSK_SIMGEN_HPP
