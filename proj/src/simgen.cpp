#include "arsk/simgen.hpp"

#include <algorithm>
#include <numeric>

#include "arsk/errors.hpp"
#include "arsk/random.hpp"

namespace arsk {

std::string to_string(CovarianceKind kind) {
    return kind == CovarianceKind::Identity ? "identity" : "rotated";
}

CovarianceKind parse_covariance_kind(const std::string& name) {
    if (name == "identity") {
        return CovarianceKind::Identity;
    }
    if (name == "rotated") {
        return CovarianceKind::RotatedEquicorrelation;
    }
    throw InvalidParameter("unknown covariance '" + name + "' (expected identity or rotated)");
}

void SimConfig::check() const {
    if (k < 1 || n_per_cluster < 1) {
        throw InvalidParameter("cluster count and cluster size must be positive");
    }
    if (k * n_per_cluster < 2) {
        throw InvalidParameter("a dataset needs at least 2 observations");
    }
    if (p < 1 || q < 0) {
        throw InvalidParameter("p must be positive and q nonnegative");
    }
    if (q > p) {
        throw InvalidParameter("informative count q=" + std::to_string(q) + " exceeds p=" + std::to_string(p));
    }
    if (!(pi >= 0.0 && pi <= 1.0)) {
        throw InvalidParameter("contamination proportion must lie in [0, 1]");
    }
}

namespace {

// Fair coin between U(-hi,-lo) and U(lo,hi).
double two_sided_uniform(Rng& rng, double lo, double hi) {
    const bool negative = uniform01(rng) < 0.5;
    const double magnitude = std::uniform_real_distribution<double>(lo, hi)(rng);
    return negative ? -magnitude : magnitude;
}

}  // namespace

SimMeans gen_means(int k, int p, int q, std::uint64_t seed) {
    if (q < 0 || q > p) {
        throw InvalidParameter("informative count must lie in [0, p]");
    }
    Rng rng = make_rng(seed);
    std::vector<std::size_t> vars(static_cast<std::size_t>(p));
    std::iota(vars.begin(), vars.end(), std::size_t{0});
    std::shuffle(vars.begin(), vars.end(), rng);
    SimMeans out;
    out.informative.assign(vars.begin(), vars.begin() + q);
    std::sort(out.informative.begin(), out.informative.end());

    out.means = Eigen::MatrixXd::Zero(k, p);
    for (int c = 0; c < k; ++c) {
        for (std::size_t j : out.informative) {
            out.means(c, static_cast<Eigen::Index>(j)) = two_sided_uniform(rng, 3.0, 6.0);
        }
    }
    return out;
}

SimCovariance gen_covariance(int p, CovarianceKind kind, std::uint64_t seed) {
    if (p < 1) {
        throw InvalidParameter("covariance dimension must be positive");
    }
    SimCovariance out;
    if (kind == CovarianceKind::Identity) {
        out.sigma = Eigen::MatrixXd::Identity(p, p);
        return out;
    }
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> rho_dist(0.1, 1.0);
    // R is positive definite for rho in (-1/(p-1), 1).
    do {
        out.rho = rho_dist(rng);
    } while (!(out.rho < 1.0));

    Eigen::MatrixXd r = Eigen::MatrixXd::Constant(p, p, out.rho);
    r.diagonal().setOnes();

    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index i = 0; i < p; ++i) {
            g(i, j) = normal(rng);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(p, p);
    const Eigen::MatrixXd upper = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < p; ++j) {
        if (upper(j, j) < 0.0) {
            q.col(j) = -q.col(j);
        }
    }
    out.sigma = q * r * q.transpose();
    out.sigma = 0.5 * (out.sigma + out.sigma.transpose());
    return out;
}

SimDataset gen_dataset(const SimConfig& cfg) {
    cfg.check();
    const SimMeans means = gen_means(cfg.k, cfg.p, cfg.q, derive_seed(cfg.seed, SeedTag::Means));
    const SimCovariance cov = gen_covariance(cfg.p, cfg.covariance, derive_seed(cfg.seed, SeedTag::Covariance));

    Eigen::MatrixXd factor;
    const bool identity = cfg.covariance == CovarianceKind::Identity;
    if (!identity) {
        Eigen::LLT<Eigen::MatrixXd> llt(cov.sigma);
        if (llt.info() != Eigen::Success) {
            throw InvalidParameter("generated covariance is not positive definite");
        }
        factor = llt.matrixL();
    }

    const int n = cfg.k * cfg.n_per_cluster;
    Rng rng = make_rng(derive_seed(cfg.seed, SeedTag::Observations));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd x(n, cfg.p);
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::vector<bool> flags(static_cast<std::size_t>(n), false);
    Eigen::VectorXd z(cfg.p);
    Eigen::VectorXd shift(cfg.p);

    for (int c = 0; c < cfg.k; ++c) {
        for (int m = 0; m < cfg.n_per_cluster; ++m) {
            const int i = c * cfg.n_per_cluster + m;
            labels[static_cast<std::size_t>(i)] = c;
            const bool outlier = uniform01(rng) < cfg.pi;
            flags[static_cast<std::size_t>(i)] = outlier;
            shift.setZero();
            if (outlier) {
                for (int j = 0; j < cfg.p; ++j) {
                    shift(j) = two_sided_uniform(rng, 7.0, 13.0);
                }
            }
            for (int j = 0; j < cfg.p; ++j) {
                z(j) = normal(rng);
            }
            const Eigen::VectorXd noise = identity ? z : Eigen::VectorXd(factor * z);
            x.row(i) = means.means.row(c) + shift.transpose() + noise.transpose();
        }
    }

    return SimDataset{DataMatrix(std::move(x)), std::move(labels), std::move(flags), means.informative, means.means,
                      cfg};
}

}  // namespace arsk
