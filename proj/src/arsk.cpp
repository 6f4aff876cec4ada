#include "arsk/arsk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "arsk/errors.hpp"
#include "arsk/random.hpp"
#include "arsk/threshold.hpp"

namespace arsk {

void ArskOptions::check() const {
    penalty_e.check();
    penalty_w.check();
    if (k < 1) {
        throw InvalidParameter("cluster count must be at least 1");
    }
    if (!(outer_tol > 0.0) || !(inner_e_tol > 0.0)) {
        throw InvalidParameter("tolerances must be positive");
    }
    if (max_outer_iter < 1 || max_inner_e_iter < 1) {
        throw InvalidParameter("iteration caps must be at least 1");
    }
    if (!(init_error_fraction >= 0.0 && init_error_fraction <= 1.0)) {
        throw InvalidParameter("init_error_fraction must lie in [0, 1]");
    }
    kmeans.check();
}

double bcss(const Eigen::Ref<const Eigen::VectorXd>& column, const ClusterModel& model) {
    const Eigen::Index n = column.size();
    const double grand = column.mean();
    const double total = (column.array() - grand).square().sum();

    std::vector<double> sums(static_cast<std::size_t>(model.k), 0.0);
    std::vector<double> counts(static_cast<std::size_t>(model.k), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(model.labels[static_cast<std::size_t>(i)]);
        sums[c] += column(i);
        counts[c] += 1.0;
    }
    for (std::size_t c = 0; c < sums.size(); ++c) {
        if (counts[c] > 0.0) {
            sums[c] /= counts[c];
        }
    }
    double within = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = column(i) - sums[static_cast<std::size_t>(model.labels[static_cast<std::size_t>(i)])];
        within += d * d;
    }
    return total - within;
}

double robust_bcss(const Eigen::Ref<const Eigen::VectorXd>& column, const Eigen::Ref<const Eigen::VectorXd>& errors,
                   const ClusterModel& model) {
    const Eigen::VectorXd adjusted = column - errors;
    return bcss(adjusted, model);
}

Eigen::VectorXd robust_bcss_all(const DataMatrix& x, const ErrorMatrix& errors, const ClusterModel& model) {
    Eigen::VectorXd q(x.p());
    for (Eigen::Index j = 0; j < x.p(); ++j) {
        q(j) = robust_bcss(x.col(j), errors.values.col(j), model);
    }
    return q;
}

double full_objective(const DataMatrix& x, const ClusterModel& model, const ErrorMatrix& errors,
                      const WeightVector& weights, const PenaltySpec& penalty_e, const PenaltySpec& penalty_w) {
    double gain = 0.0;
    if (!weights.degenerate) {
        const Eigen::VectorXd q = robust_bcss_all(x, errors, model);
        gain = weights.values.dot(q);
    }
    double row_penalty = 0.0;
    for (Eigen::Index i = 0; i < errors.values.rows(); ++i) {
        row_penalty += penalty_value(penalty_e, errors.values.row(i).norm());
    }
    double weight_penalty = 0.0;
    for (Eigen::Index j = 0; j < weights.p(); ++j) {
        const double wj = weights.values(j);
        weight_penalty += penalty_value(penalty_w, std::abs(wj)) + 0.5 * wj * wj;
    }
    return gain - row_penalty - weight_penalty;
}

ErrorMatrix init_error_matrix(const DataMatrix& x, double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw InvalidParameter("error initialisation fraction must lie in [0, 1]");
    }
    const Eigen::Index n = x.n();
    const Eigen::RowVectorXd center = x.values().colwise().mean();
    std::vector<double> dist(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        dist[static_cast<std::size_t>(i)] = (x.row(i) - center).squaredNorm();
    }
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });

    const auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
    ErrorMatrix e = ErrorMatrix::zeros(n, x.p());
    for (std::size_t r = 0; r < count; ++r) {
        e.values.row(static_cast<Eigen::Index>(order[r])) = x.row(static_cast<Eigen::Index>(order[r]));
    }
    return e;
}

ErrorUpdate update_error_matrix(const DataMatrix& x, const ClusterModel& model, const WeightVector& weights,
                                const ErrorMatrix& e_prev, const PenaltySpec& penalty_e, const ArskOptions& opts) {
    penalty_e.check();
    ensure_valid(model, static_cast<std::size_t>(x.n()));
    if (weights.p() != x.p() || e_prev.values.rows() != x.n() || e_prev.values.cols() != x.p()) {
        throw InvalidInput("error update: dimension mismatch between data, weights and error matrix");
    }
    const Eigen::Index n = x.n();
    const int k = model.k;

    // Transposed so each observation is a contiguous column.
    Eigen::MatrixXd xw = x.values().transpose();
    xw.array().colwise() *= weights.values.array();
    Eigen::MatrixXd ew = e_prev.values.transpose();
    ew.array().colwise() *= weights.values.array();

    const auto sizes = model.sizes();
    Eigen::MatrixXd mu(x.p(), k);
    Eigen::VectorXd residual(x.p());

    ErrorUpdate out;
    for (int iter = 0; iter < opts.max_inner_e_iter; ++iter) {
        mu.setZero();
        for (Eigen::Index i = 0; i < n; ++i) {
            mu.col(model.labels[static_cast<std::size_t>(i)]) += xw.col(i) - ew.col(i);
        }
        for (int c = 0; c < k; ++c) {
            mu.col(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
        }

        double objective = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            residual = xw.col(i) - mu.col(model.labels[static_cast<std::size_t>(i)]);
            const double norm = residual.norm();
            const double factor = group_factor(penalty_e, norm);
            if (factor == 0.0) {
                ew.col(i).setZero();
            } else if (factor == 1.0) {
                ew.col(i) = residual;
            } else {
                ew.col(i) = factor * residual;
            }
            const double left = (1.0 - factor) * norm;
            objective += 0.5 * left * left + penalty_value(penalty_e, factor * norm);
        }

        out.iterations = iter + 1;
        if (!out.objective_trace.empty()) {
            const double prev = out.objective_trace.back();
            out.objective_trace.push_back(objective);
            if (std::abs(prev - objective) <= opts.inner_e_tol * std::max(std::abs(prev), 1e-300)) {
                out.converged = true;
                break;
            }
        } else {
            out.objective_trace.push_back(objective);
        }
    }
    out.weighted.values = ew.transpose();
    return out;
}

ErrorMatrix restore_error_matrix(const ErrorMatrix& weighted, const WeightVector& weights, RestoreMode mode) {
    if (weights.p() != weighted.values.cols()) {
        throw InvalidInput("restore: weight length does not match the error matrix width");
    }
    ErrorMatrix out = weighted;
    for (Eigen::Index j = 0; j < weights.p(); ++j) {
        const double wj = weights.values(j);
        if (wj > 0.0) {
            out.values.col(j) /= mode == RestoreMode::Sqrt ? std::sqrt(wj) : wj;
        }
    }
    return out;
}

WeightVector update_weights(const Eigen::Ref<const Eigen::VectorXd>& q_robust, const PenaltySpec& penalty_w) {
    penalty_w.check();
    if (!q_robust.allFinite()) {
        throw InvalidInput("robust BCSS values must be finite");
    }
    Eigen::VectorXd s(q_robust.size());
    for (Eigen::Index j = 0; j < q_robust.size(); ++j) {
        s(j) = threshold_scalar(penalty_w, std::max(q_robust(j), 0.0));
    }
    const double norm = s.norm();
    if (!(norm > 0.0)) {
        throw DegenerateWeights("every variable weight was thresholded to zero; lambda2 = " +
                                std::to_string(penalty_w.lambda) + " is too large");
    }
    return WeightVector{s / norm, false};
}

FitResult fit(const DataMatrix& x, const ArskOptions& opts, FitTrace* trace) {
    opts.check();
    if (opts.k > x.n()) {
        throw InvalidParameter("cluster count " + std::to_string(opts.k) + " exceeds the " + std::to_string(x.n()) +
                               " observations");
    }

    WeightVector w = WeightVector::uniform(x.p());
    ErrorMatrix e = init_error_matrix(x, opts.init_error_fraction);

    FitResult result;
    for (int r = 0; r < opts.max_outer_iter; ++r) {
        const DataMatrix adjusted(x.values() - e.values);
        KMeansOptions km = opts.kmeans;
        km.seed = derive_seed(opts.seed, SeedTag::OuterIteration, static_cast<std::uint64_t>(r));
        KMeansReport report;
        ClusterModel model = lloyd_weighted(adjusted, w, opts.k, km, trace != nullptr ? &report : nullptr);

        ErrorUpdate update = update_error_matrix(x, model, w, e, opts.penalty_e, opts);
        if (!update.converged) {
            ++result.inner_nonconverged;
        }
        ErrorMatrix restored = restore_error_matrix(update.weighted, w, opts.restore);
        const Eigen::VectorXd q = robust_bcss_all(x, restored, model);
        WeightVector w_next = update_weights(q, opts.penalty_w);

        if (trace != nullptr) {
            trace->kmeans.push_back(std::move(report));
            trace->error_updates.push_back(std::move(update));
            trace->q_robust.push_back(q);
            trace->weights.push_back(w);
        }

        result.objective_trace.push_back(
            full_objective(x, model, restored, w_next, opts.penalty_e, opts.penalty_w));
        const double change = (w_next.values - w.values).lpNorm<1>() / w.values.lpNorm<1>();

        w = std::move(w_next);
        e = std::move(restored);
        result.model = std::move(model);
        result.outer_iterations = r + 1;
        if (change < opts.outer_tol) {
            result.converged = true;
            break;
        }
    }

    // Report centers as cluster means of the adjusted data in data units.
    const auto sizes = result.model.sizes();
    result.model.centers = Eigen::MatrixXd::Zero(opts.k, x.p());
    for (Eigen::Index i = 0; i < x.n(); ++i) {
        result.model.centers.row(result.model.labels[static_cast<std::size_t>(i)]) += x.row(i) - e.values.row(i);
    }
    for (int c = 0; c < opts.k; ++c) {
        result.model.centers.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
    }
    result.errors = std::move(e);
    result.weights = std::move(w);
    result.outlier_indices = result.errors.active_rows();
    return result;
}

}  // namespace arsk
