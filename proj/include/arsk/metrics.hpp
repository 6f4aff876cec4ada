#ifndef ARSK_METRICS_HPP
#define ARSK_METRICS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace arsk {

// Clustering error rate: fraction of the n(n-1)/2 pairs whose co-membership
// differs between the two partitions. Computed from the contingency table.
// Labels may be any integers; only the induced partitions matter.
double cer(std::span<const int> truth, std::span<const int> predicted);

// Same quantity by explicit O(n^2) pair enumeration.
double cer_pairwise(std::span<const int> truth, std::span<const int> predicted);

// Number of disagreeing pairs (the CER numerator), by contingency counting.
unsigned long long cer_disagreements(std::span<const int> truth, std::span<const int> predicted);

// CER after moving true outliers and detected outliers into an extra label k.
double cer_with_outliers(std::span<const int> truth_labels, const std::vector<bool>& truth_flags,
                         std::span<const int> predicted_labels, std::span<const std::size_t> predicted_outliers,
                         int k);

struct SelectionRates {
    double tpr = 0.0;
    double tnr = 0.0;
};

// TPR = share of informative variables with nonzero weight; TNR = share of
// the rest with exactly zero weight. q = 0 gives TPR 1; q = p gives TNR 1.
SelectionRates tpr_tnr(const Eigen::Ref<const Eigen::VectorXd>& weights, std::span<const std::size_t> informative);

struct OutlierConfusion {
    std::size_t true_pos = 0;
    std::size_t false_pos = 0;
    std::size_t false_neg = 0;
    std::size_t detected = 0;

    bool operator==(const OutlierConfusion&) const = default;
};

OutlierConfusion outlier_confusion(const std::vector<bool>& truth_flags, std::span<const std::size_t> detected);

}  // namespace arsk

#endif  // ARSK_METRICS_HPP
