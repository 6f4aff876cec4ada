#include "arsk/metrics.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>

#include "arsk/errors.hpp"

namespace arsk {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b) {
        throw InvalidInput("partition lengths differ: " + std::to_string(a) + " vs " + std::to_string(b));
    }
    if (a < 2) {
        throw InvalidInput("CER needs at least 2 observations");
    }
}

unsigned long long pairs(unsigned long long m) {
    return m * (m - 1) / 2;
}

}  // namespace

unsigned long long cer_disagreements(std::span<const int> truth, std::span<const int> predicted) {
    check_lengths(truth.size(), predicted.size());
    std::map<int, unsigned long long> a;
    std::map<int, unsigned long long> b;
    std::map<std::pair<int, int>, unsigned long long> ab;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++a[truth[i]];
        ++b[predicted[i]];
        ++ab[{truth[i], predicted[i]}];
    }
    unsigned long long same_truth = 0;
    unsigned long long same_pred = 0;
    unsigned long long same_both = 0;
    for (const auto& [label, count] : a) {
        same_truth += pairs(count);
    }
    for (const auto& [label, count] : b) {
        same_pred += pairs(count);
    }
    for (const auto& [cell, count] : ab) {
        same_both += pairs(count);
    }
    return same_truth + same_pred - 2 * same_both;
}

double cer(std::span<const int> truth, std::span<const int> predicted) {
    const unsigned long long bad = cer_disagreements(truth, predicted);
    return static_cast<double>(bad) / static_cast<double>(pairs(truth.size()));
}

double cer_pairwise(std::span<const int> truth, std::span<const int> predicted) {
    check_lengths(truth.size(), predicted.size());
    unsigned long long bad = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        for (std::size_t j = i + 1; j < truth.size(); ++j) {
            const bool t = truth[i] == truth[j];
            const bool p = predicted[i] == predicted[j];
            bad += t != p ? 1 : 0;
        }
    }
    return static_cast<double>(bad) / static_cast<double>(pairs(truth.size()));
}

double cer_with_outliers(std::span<const int> truth_labels, const std::vector<bool>& truth_flags,
                         std::span<const int> predicted_labels, std::span<const std::size_t> predicted_outliers,
                         int k) {
    const std::size_t n = truth_labels.size();
    if (truth_flags.size() != n || predicted_labels.size() != n) {
        throw InvalidInput("truth labels, truth flags and predicted labels must have equal length");
    }
    std::vector<int> truth(truth_labels.begin(), truth_labels.end());
    std::vector<int> pred(predicted_labels.begin(), predicted_labels.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (truth_flags[i]) {
            truth[i] = k;
        }
    }
    for (std::size_t i : predicted_outliers) {
        if (i >= n) {
            throw InvalidInput("detected outlier index " + std::to_string(i) + " out of range");
        }
        pred[i] = k;
    }
    return cer(truth, pred);
}

SelectionRates tpr_tnr(const Eigen::Ref<const Eigen::VectorXd>& weights, std::span<const std::size_t> informative) {
    const auto p = static_cast<std::size_t>(weights.size());
    std::vector<bool> is_informative(p, false);
    for (std::size_t j : informative) {
        if (j >= p) {
            throw InvalidInput("informative index " + std::to_string(j) + " out of range");
        }
        is_informative[j] = true;
    }
    std::size_t q = 0;
    std::size_t hits = 0;
    std::size_t rejections = 0;
    for (std::size_t j = 0; j < p; ++j) {
        const bool nonzero = weights(static_cast<Eigen::Index>(j)) != 0.0;
        if (is_informative[j]) {
            ++q;
            hits += nonzero ? 1 : 0;
        } else {
            rejections += nonzero ? 0 : 1;
        }
    }
    SelectionRates rates;
    rates.tpr = q == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(q);
    rates.tnr = q == p ? 1.0 : static_cast<double>(rejections) / static_cast<double>(p - q);
    return rates;
}

OutlierConfusion outlier_confusion(const std::vector<bool>& truth_flags, std::span<const std::size_t> detected) {
    const std::set<std::size_t> found(detected.begin(), detected.end());
    OutlierConfusion out;
    out.detected = found.size();
    for (std::size_t i : found) {
        if (i >= truth_flags.size()) {
            throw InvalidInput("detected outlier index " + std::to_string(i) + " out of range");
        }
        if (truth_flags[i]) {
            ++out.true_pos;
        } else {
            ++out.false_pos;
        }
    }
    for (std::size_t i = 0; i < truth_flags.size(); ++i) {
        if (truth_flags[i] && found.count(i) == 0) {
            ++out.false_neg;
        }
    }
    return out;
}

}  // namespace arsk
