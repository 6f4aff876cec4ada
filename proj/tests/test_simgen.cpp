#include <doctest.h>

#include <algorithm>

#include "arsk/errors.hpp"
#include "arsk/metrics.hpp"
#include "arsk/simgen.hpp"
#include "arsk/wkmeans.hpp"

using namespace arsk;

TEST_SUITE("simgen") {

TEST_CASE("gen_means") {
    CHECK(gen_means(3, 10, 0, 1).means.isZero(0.0));
    const SimMeans m = gen_means(3, 50, 5, 2);
    CHECK(m.informative.size() == 5);
    CHECK(std::is_sorted(m.informative.begin(), m.informative.end()));
    for (Eigen::Index j = 0; j < 50; ++j) {
        const bool inf = std::binary_search(m.informative.begin(), m.informative.end(), static_cast<std::size_t>(j));
        for (Eigen::Index c = 0; c < 3; ++c) {
            const double a = std::abs(m.means(c, j));
            if (inf) {
                CHECK(a >= 3.0);
                CHECK(a <= 6.0);
            } else {
                CHECK(m.means(c, j) == 0.0);
            }
        }
    }
    const SimMeans full = gen_means(2, 6, 6, 3);
    CHECK((full.means.array().abs() >= 3.0).all());
    // both signs appear over many draws
    const SimMeans big = gen_means(3, 200, 200, 4);
    CHECK((big.means.array() > 0.0).count() > 200);
    CHECK((big.means.array() < 0.0).count() > 200);
}

TEST_CASE("gen_covariance") {
    CHECK(gen_covariance(7, CovarianceKind::Identity, 1).sigma == Eigen::MatrixXd::Identity(7, 7));
    for (std::uint64_t s = 0; s < 5; ++s) {
        const int p = 12;
        const SimCovariance c = gen_covariance(p, CovarianceKind::RotatedEquicorrelation, s);
        CHECK(c.rho >= 0.1);
        CHECK(c.rho < 1.0);
        CHECK((c.sigma - c.sigma.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.sigma);
        Eigen::VectorXd ev = es.eigenvalues();
        CHECK(ev.minCoeff() > 0.0);
        // closed-form equicorrelation spectrum
        CHECK(std::abs(ev(p - 1) - (1.0 + (p - 1) * c.rho)) <= 1e-8);
        for (int i = 0; i < p - 1; ++i) {
            CHECK(std::abs(ev(i) - (1.0 - c.rho)) <= 1e-8);
        }
        // not just R itself: the rotation moves it off the equicorrelation pattern
        CHECK(std::abs(c.sigma(0, 0) - 1.0) > 1e-6);
    }
}

TEST_CASE("gen_dataset shapes and flags") {
    SimConfig c;
    c.seed = 5;
    const SimDataset clean = gen_dataset(c);
    CHECK(clean.x.n() == 150);
    CHECK(clean.x.p() == 50);
    CHECK(std::none_of(clean.outlier_flags.begin(), clean.outlier_flags.end(), [](bool b) { return b; }));
    CHECK(clean.informative.size() == 5);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::count(clean.true_labels.begin(), clean.true_labels.end(), k) == 50);
    }

    c.pi = 1.0;
    const SimDataset all = gen_dataset(c);
    CHECK(std::all_of(all.outlier_flags.begin(), all.outlier_flags.end(), [](bool b) { return b; }));

    c.pi = 0.1;
    for (std::uint64_t s = 0; s < 20; ++s) {
        c.seed = s;
        const SimDataset d = gen_dataset(c);
        const auto cnt = std::count(d.outlier_flags.begin(), d.outlier_flags.end(), true);
        CHECK(cnt >= 5);
        CHECK(cnt <= 27);
    }
}

TEST_CASE("outlier offsets land in the shifted range") {
    SimConfig c;
    c.pi = 0.3;
    c.seed = 8;
    const SimDataset d = gen_dataset(c);
    for (std::size_t i = 0; i < d.outlier_flags.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const Eigen::RowVectorXd dev = d.x.row(r) - d.true_means.row(d.true_labels[i]);
        // offsets are at least 7 in magnitude; unit noise rarely exceeds 5
        const double min_abs = dev.cwiseAbs().minCoeff();
        if (d.outlier_flags[i]) {
            CHECK(min_abs > 2.0);
        } else {
            CHECK(dev.cwiseAbs().maxCoeff() < 6.0);
        }
    }
}

TEST_CASE("determinism and seed sensitivity") {
    SimConfig c;
    c.pi = 0.1;
    c.covariance = CovarianceKind::RotatedEquicorrelation;
    c.seed = 99;
    const SimDataset a = gen_dataset(c);
    const SimDataset b = gen_dataset(c);
    CHECK(a.x == b.x);
    CHECK(a.outlier_flags == b.outlier_flags);
    CHECK(a.informative == b.informative);
    c.seed = 100;
    CHECK(!(gen_dataset(c).x == a.x));
}

TEST_CASE("column moments of noise variables") {
    SimConfig c;
    c.seed = 12;
    const SimDataset d = gen_dataset(c);
    const double se = 1.0 / std::sqrt(150.0);
    for (Eigen::Index j = 0; j < d.x.p(); ++j) {
        if (!std::binary_search(d.informative.begin(), d.informative.end(), static_cast<std::size_t>(j))) {
            CHECK(std::abs(d.x.col(j).mean()) <= 5.0 * se);
        }
    }
}

TEST_CASE("plain k-means separates clean data on average") {
    double total = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        SimConfig c;
        c.seed = 500 + s;
        const SimDataset d = gen_dataset(c);
        KMeansOptions o;
        o.seed = s;
        total += cer(d.true_labels, kmeans(d.x.values(), 3, o).model.labels);
    }
    CHECK(total / 10.0 <= 0.15);
}

TEST_CASE("config validation") {
    SimConfig c;
    c.q = 60;
    CHECK_THROWS_AS(gen_dataset(c), InvalidParameter);
    c.q = 5;
    c.pi = 1.5;
    CHECK_THROWS_AS(gen_dataset(c), InvalidParameter);
    CHECK(parse_covariance_kind("rotated") == CovarianceKind::RotatedEquicorrelation);
    CHECK(to_string(CovarianceKind::Identity) == "identity");
    CHECK_THROWS_AS(parse_covariance_kind("diag"), InvalidParameter);
}

}
