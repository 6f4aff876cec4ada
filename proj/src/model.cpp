#include "arsk/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "arsk/errors.hpp"

namespace arsk {

DataMatrix::DataMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() < 2) {
        throw InvalidParameter("data matrix needs at least 2 observations, got " + std::to_string(values_.rows()));
    }
    if (values_.cols() < 1) {
        throw InvalidParameter("data matrix needs at least 1 variable");
    }
    if (!values_.allFinite()) {
        throw InvalidParameter("data matrix contains non-finite entries");
    }
}

std::vector<std::size_t> ClusterModel::sizes() const {
    std::vector<std::size_t> out(static_cast<std::size_t>(std::max(k, 0)), 0);
    for (int label : labels) {
        if (label >= 0 && label < k) {
            ++out[static_cast<std::size_t>(label)];
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> ClusterModel::members() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(std::max(k, 0)));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= 0 && labels[i] < k) {
            out[static_cast<std::size_t>(labels[i])].push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> ErrorMatrix::active_rows() const {
    std::vector<std::size_t> rows;
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        if (row_active(i)) {
            rows.push_back(static_cast<std::size_t>(i));
        }
    }
    return rows;
}

WeightVector WeightVector::uniform(Eigen::Index p) {
    return WeightVector{Eigen::VectorXd::Constant(p, 1.0 / std::sqrt(static_cast<double>(p))), false};
}

WeightVector WeightVector::degenerate_state(Eigen::Index p) {
    return WeightVector{Eigen::VectorXd::Zero(p), true};
}

std::size_t WeightVector::nonzero_count() const {
    return static_cast<std::size_t>((values.array() != 0.0).count());
}

void PenaltySpec::check() const {
    if (!(lambda >= 0.0)) {
        throw InvalidParameter("penalty lambda must be nonnegative, got " + std::to_string(lambda));
    }
    if (kind == PenaltyKind::Scad && !(a > 2.0)) {
        throw InvalidParameter("SCAD parameter a must exceed 2, got " + std::to_string(a));
    }
}

std::string to_string(PenaltyKind kind) {
    return kind == PenaltyKind::Lasso ? "soft" : "scad";
}

PenaltyKind parse_penalty_kind(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "soft" || lower == "lasso") {
        return PenaltyKind::Lasso;
    }
    if (lower == "scad") {
        return PenaltyKind::Scad;
    }
    throw InvalidParameter("unknown penalty '" + name + "' (expected soft or scad)");
}

std::vector<std::string> violations(const ClusterModel& model, std::size_t n) {
    std::vector<std::string> out;
    if (model.k < 1) {
        out.push_back("labels: cluster count must be at least 1");
        return out;
    }
    if (model.labels.size() != n) {
        out.push_back("labels: expected " + std::to_string(n) + " labels, got " + std::to_string(model.labels.size()));
    }
    bool out_of_range = false;
    for (int label : model.labels) {
        if (label < 0 || label >= model.k) {
            out_of_range = true;
        }
    }
    if (out_of_range) {
        out.push_back("labels: cluster id outside 1.." + std::to_string(model.k));
    } else {
        const auto sizes = model.sizes();
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            if (sizes[c] == 0) {
                out.push_back("labels: cluster " + std::to_string(c + 1) + " is empty");
            }
        }
    }
    if (model.centers.rows() != model.k) {
        out.push_back("centers: expected " + std::to_string(model.k) + " rows");
    }
    if (!model.centers.allFinite()) {
        out.push_back("centers: non-finite entries");
    }
    return out;
}

std::vector<std::string> violations(const ErrorMatrix& errors) {
    std::vector<std::string> out;
    if (!errors.values.allFinite()) {
        out.push_back("errors: non-finite entries");
    }
    return out;
}

std::vector<std::string> violations(const WeightVector& weights) {
    std::vector<std::string> out;
    if (!weights.values.allFinite()) {
        out.push_back("weights: non-finite entries");
        return out;
    }
    if ((weights.values.array() < 0.0).any()) {
        out.push_back("weights: negative entries");
    }
    if (weights.degenerate) {
        if (!weights.values.isZero(0.0)) {
            out.push_back("weights: degenerate state must be all zero");
        }
    } else if (std::abs(weights.values.norm() - 1.0) > kUnitNormTolerance) {
        out.push_back("weights: unit-norm violated (norm " + std::to_string(weights.values.norm()) + ")");
    }
    return out;
}

std::vector<std::string> validate(const FitResult& fit) {
    const auto n = static_cast<std::size_t>(fit.errors.values.rows());
    std::vector<std::string> out = violations(fit.model, n);
    auto append = [&out](std::vector<std::string> more) {
        out.insert(out.end(), more.begin(), more.end());
    };
    append(violations(fit.errors));
    append(violations(fit.weights));
    if (fit.weights.degenerate) {
        out.push_back("weights: a fit result may not carry the degenerate weight state");
    }
    const auto p = fit.errors.values.cols();
    if (fit.weights.p() != p) {
        out.push_back("weights: length does not match the error matrix width");
    }
    if (fit.model.centers.cols() != p) {
        out.push_back("centers: width does not match the error matrix width");
    }
    if (fit.outlier_indices != fit.errors.active_rows()) {
        out.push_back("outliers: must equal the set of rows with nonzero error norm");
    }
    return out;
}

namespace {
[[noreturn]] void throw_violations(const std::vector<std::string>& v) {
    std::string msg = v.front();
    for (std::size_t i = 1; i < v.size(); ++i) {
        msg += "; " + v[i];
    }
    throw InvalidInput(msg);
}
}  // namespace

void ensure_valid(const ClusterModel& model, std::size_t n) {
    if (auto v = violations(model, n); !v.empty()) {
        throw_violations(v);
    }
}

void ensure_valid(const WeightVector& weights) {
    if (auto v = violations(weights); !v.empty()) {
        throw_violations(v);
    }
}

}  // namespace arsk
