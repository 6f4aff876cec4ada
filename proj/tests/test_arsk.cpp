#include <doctest.h>

#include <random>

#include "arsk/arsk.hpp"
#include "arsk/errors.hpp"
#include "arsk/metrics.hpp"
#include "arsk/random.hpp"
#include "arsk/simgen.hpp"
#include "arsk/threshold.hpp"
#include "oracles.hpp"

using namespace arsk;

namespace {

ClusterModel random_model(int n, int k, std::mt19937_64& rng) {
    ClusterModel m;
    m.k = k;
    m.labels.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        m.labels[static_cast<std::size_t>(i)] = i < k ? i : static_cast<int>(rng() % static_cast<unsigned>(k));
    }
    std::shuffle(m.labels.begin(), m.labels.end(), rng);
    return m;
}

Eigen::MatrixXd normal_matrix(Eigen::Index n, Eigen::Index p, std::mt19937_64& rng, double sd = 1.0) {
    std::normal_distribution<double> nd(0.0, sd);
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x.data()[i] = nd(rng);
    }
    return x;
}

// Full objective written directly from its definition, with the pairwise BCSS.
double objective_oracle(const Eigen::MatrixXd& x, const ClusterModel& m, const Eigen::MatrixXd& e,
                        const Eigen::VectorXd& w, double l1, double l2, bool scad_e, bool scad_w) {
    double gain = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        gain += w(j) * oracle::bcss_pairwise(x.col(j) - e.col(j), m.labels, m.k);
    }
    double pe = 0.0;
    for (Eigen::Index i = 0; i < e.rows(); ++i) {
        const double v = e.row(i).norm();
        pe += scad_e ? oracle::scad_pen(v, l1, 3.7) : oracle::lasso_pen(v, l1);
    }
    double pw = 0.0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        const double v = std::abs(w(j));
        pw += (scad_w ? oracle::scad_pen(v, l2, 3.7) : oracle::lasso_pen(v, l2)) + 0.5 * w(j) * w(j);
    }
    return gain - pe - pw;
}

SimDataset sim(double pi, std::uint64_t seed, int p = 20, int q = 5) {
    SimConfig c;
    c.p = p;
    c.q = q;
    c.pi = pi;
    c.n_per_cluster = 30;
    c.seed = seed;
    return gen_dataset(c);
}

}  // namespace

TEST_SUITE("arsk") {

TEST_CASE("bcss examples") {
    ClusterModel m{{0, 0, 1, 1}, 2, Eigen::MatrixXd::Zero(2, 1)};
    CHECK(bcss(Eigen::Vector4d(3, 3, 3, 3), m) == 0.0);
    CHECK(bcss(Eigen::Vector4d(0, 0, 10, 10), m) == 100.0);
    CHECK(oracle::bcss_pairwise(Eigen::Vector4d(0, 0, 10, 10), m.labels, 2) == 100.0);
}

TEST_CASE("bcss equals the pairwise double sum") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 50; ++t) {
        const int n = 5 + t;
        const int k = 1 + t % 4;
        const ClusterModel m = random_model(n, k, rng);
        const Eigen::VectorXd col = normal_matrix(n, 1, rng, 3.0).col(0);
        const double got = bcss(col, m);
        CHECK(got == doctest::Approx(oracle::bcss_pairwise(col, m.labels, k)).epsilon(1e-10));
        CHECK(got >= -1e-9);
    }
}

TEST_CASE("robust_bcss examples") {
    std::mt19937_64 rng(3);
    const ClusterModel m = random_model(12, 3, rng);
    const Eigen::VectorXd col = normal_matrix(12, 1, rng).col(0);
    CHECK(robust_bcss(col, Eigen::VectorXd::Zero(12), m) == bcss(col, m));
    CHECK(robust_bcss(col, col, m) == 0.0);

    Eigen::VectorXd dirty = col;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(12);
    dirty(4) += 25.0;
    e(4) = 25.0;
    CHECK(robust_bcss(dirty, e, m) == doctest::Approx(bcss(col, m)).epsilon(1e-12));
    CHECK(bcss(dirty, m) != doctest::Approx(bcss(col, m)));
}

TEST_CASE("full_objective examples") {
    std::mt19937_64 rng(5);
    const int n = 15;
    const int p = 6;
    const Eigen::MatrixXd xv = normal_matrix(n, p, rng);
    const DataMatrix x(xv);
    const ClusterModel m = random_model(n, 3, rng);
    const ErrorMatrix zero = ErrorMatrix::zeros(n, p);
    double sum_q = 0.0;
    for (int j = 0; j < p; ++j) {
        sum_q += bcss(xv.col(j), m);
    }
    const double got = full_objective(x, m, zero, WeightVector::uniform(p), PenaltySpec::lasso(1e12),
                                      PenaltySpec::lasso(0.0));
    CHECK(got == doctest::Approx(sum_q / std::sqrt(double(p)) - 0.5).epsilon(1e-12));

    ErrorMatrix e = zero;
    e.values.row(2) << 1, 2, 2, 0, 0, 0;
    e.values.row(7) << 0, 0, 0, 0, 3, 4;
    const double degen = full_objective(x, m, e, WeightVector::degenerate_state(p), PenaltySpec::lasso(0.5),
                                        PenaltySpec::lasso(2.0));
    CHECK(degen == doctest::Approx(-(0.5 * 3 + 0.5 * 5)).epsilon(1e-14));
}

TEST_CASE("full_objective agrees with an independent implementation") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        const int n = 10 + t;
        const int p = 3 + t % 5;
        const Eigen::MatrixXd xv = normal_matrix(n, p, rng, 2.0);
        const ClusterModel m = random_model(n, 1 + t % 3, rng);
        Eigen::MatrixXd ev = Eigen::MatrixXd::Zero(n, p);
        for (int i = 0; i < n; i += 3) {
            ev.row(i) = normal_matrix(1, p, rng, 4.0);
        }
        Eigen::VectorXd w = normal_matrix(p, 1, rng).col(0).cwiseAbs();
        w(0) = 0.0;
        w.normalize();
        const double l1 = 0.1 + 0.3 * t;
        const double l2 = 0.05 * t;
        const bool se = t % 2 == 0;
        const bool sw = t % 3 == 0;
        const PenaltySpec pe{se ? PenaltyKind::Scad : PenaltyKind::Lasso, l1, 3.7};
        const PenaltySpec pw{sw ? PenaltyKind::Scad : PenaltyKind::Lasso, l2, 3.7};
        const double got = full_objective(DataMatrix(xv), m, ErrorMatrix{ev}, WeightVector{w, false}, pe, pw);
        CHECK(got == doctest::Approx(objective_oracle(xv, m, ev, w, l1, l2, se, sw)).epsilon(1e-8));
    }
}

TEST_CASE("init_error_matrix") {
    std::mt19937_64 rng(2);
    const DataMatrix x(normal_matrix(10, 3, rng));
    CHECK(init_error_matrix(x, 0.0).values.isZero(0.0));
    CHECK(init_error_matrix(x, 1.0).values == x.values());

    // rows at distances 1, 2, 3, 4 from the grand mean 0
    Eigen::MatrixXd rows(4, 1);
    rows << 1, -2, -3, 4;
    const ErrorMatrix e = init_error_matrix(DataMatrix(rows), 0.5);
    CHECK(e.active_rows() == std::vector<std::size_t>{2, 3});
    CHECK(e.values(2, 0) == -3.0);
    CHECK(e.values(3, 0) == 4.0);
    CHECK_THROWS_AS(init_error_matrix(x, 1.5), InvalidParameter);
}

TEST_CASE("update_error_matrix limits") {
    const SimDataset d = sim(0.1, 4);
    const ClusterModel m{d.true_labels, 3, Eigen::MatrixXd::Zero(3, d.x.p())};
    const WeightVector w = WeightVector::uniform(d.x.p());
    ArskOptions o;
    const ErrorMatrix e0 = ErrorMatrix::zeros(d.x.n(), d.x.p());

    const ErrorUpdate huge = update_error_matrix(d.x, m, w, e0, PenaltySpec::lasso(1e12), o);
    CHECK(huge.weighted.values.isZero(0.0));

    const ErrorUpdate zero = update_error_matrix(d.x, m, w, e0, PenaltySpec::lasso(0.0), o);
    Eigen::MatrixXd adjusted = d.x.values() * w.values.asDiagonal();
    adjusted -= zero.weighted.values;
    ClusterModel fitted = m;
    fitted.centers.setZero();
    const auto sizes = m.sizes();
    for (Eigen::Index i = 0; i < d.x.n(); ++i) {
        fitted.centers.row(m.labels[i]) += adjusted.row(i) / static_cast<double>(sizes[m.labels[i]]);
    }
    CHECK(within_ss(adjusted, fitted) <= 1e-20);
    CHECK(zero.weighted.active_rows().size() == static_cast<std::size_t>(d.x.n()));
}

TEST_CASE("update_error_matrix isolates a single planted row") {
    std::mt19937_64 rng(8);
    Eigen::MatrixXd xv = normal_matrix(40, 4, rng, 0.3);
    xv.block(20, 0, 20, 4).array() += 5.0;
    xv.row(33).array() += 30.0;
    const DataMatrix x(xv);
    std::vector<int> labels(40, 0);
    std::fill(labels.begin() + 20, labels.end(), 1);
    const ClusterModel m{labels, 2, Eigen::MatrixXd::Zero(2, 4)};
    ArskOptions o;
    for (PenaltySpec spec : {PenaltySpec::lasso(5.0), PenaltySpec::scad(5.0)}) {
        const ErrorUpdate u = update_error_matrix(x, m, WeightVector::uniform(4), ErrorMatrix::zeros(40, 4), spec, o);
        const auto active = u.weighted.active_rows();
        REQUIRE(active.size() == 1);
        CHECK(active[0] == 33);
        CHECK(u.converged);
    }
}

TEST_CASE("inner E objective is nonincreasing") {
    for (PenaltyKind kind : {PenaltyKind::Lasso, PenaltyKind::Scad}) {
        for (std::uint64_t s = 0; s < 20; ++s) {
            const SimDataset d = sim(0.15, 100 + s);
            ArskOptions o;
            o.k = 3;
            o.seed = s;
            o.kmeans.restarts = 3;
            o.max_outer_iter = 8;
            o.penalty_e = PenaltySpec{kind, 0.5 + 0.25 * static_cast<double>(s % 8), 3.7};
            o.penalty_w = PenaltySpec::lasso(5.0);
            FitTrace tr;
            fit(d.x, o, &tr);
            REQUIRE(!tr.error_updates.empty());
            for (const auto& up : tr.error_updates) {
                for (std::size_t i = 1; i < up.objective_trace.size(); ++i) {
                    CHECK(up.objective_trace[i] <= up.objective_trace[i - 1] * (1.0 + 1e-12) + 1e-12);
                }
            }
            for (const auto& km : tr.kmeans) {
                for (const auto& run : km.runs) {
                    for (std::size_t i = 1; i < run.objective_trace.size(); ++i) {
                        CHECK(run.objective_trace[i] <= run.objective_trace[i - 1] * (1.0 + 1e-12));
                    }
                }
            }
            for (const auto& q : tr.q_robust) {
                CHECK(q.minCoeff() >= -1e-9);
            }
        }
    }
}

TEST_CASE("restore_error_matrix") {
    Eigen::MatrixXd ev(2, 3);
    ev << 1, 2, 3, 4, 5, 6;
    const ErrorMatrix e{ev};
    CHECK(restore_error_matrix(e, WeightVector{Eigen::Vector3d(1, 1, 1), false}).values == ev);
    const ErrorMatrix r = restore_error_matrix(e, WeightVector{Eigen::Vector3d(0.25, 0.0, 1.0), false});
    CHECK(r.values(0, 0) == 2.0);
    CHECK(r.values(1, 0) == 8.0);
    CHECK(r.values.col(1) == ev.col(1));
    const ErrorMatrix lin =
        restore_error_matrix(e, WeightVector{Eigen::Vector3d(0.25, 0.0, 1.0), false}, RestoreMode::Linear);
    CHECK(lin.values(0, 0) == 4.0);
    // zero/nonzero row status is preserved
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 3);
    z(1, 2) = 1e-3;
    const ErrorMatrix rz = restore_error_matrix(ErrorMatrix{z}, WeightVector::uniform(3));
    CHECK(rz.active_rows() == std::vector<std::size_t>{1});
}

TEST_CASE("update_weights") {
    const Eigen::Vector3d q(10, 1, 1);
    const WeightVector a = update_weights(q, PenaltySpec::lasso(2.0));
    CHECK(a.values == Eigen::Vector3d(1, 0, 0));
    const WeightVector b = update_weights(q, PenaltySpec::lasso(0.0));
    CHECK((b.values - q / q.norm()).norm() <= 1e-15);
    CHECK(std::abs(b.values.norm() - 1.0) <= kUnitNormTolerance);
    const WeightVector c = update_weights(Eigen::Vector3d(-1e-12, 4, 9), PenaltySpec::scad(1.0));
    CHECK(c.values(0) == 0.0);
    CHECK(std::abs(c.values.norm() - 1.0) <= kUnitNormTolerance);
    try {
        update_weights(q, PenaltySpec::lasso(50.0));
        FAIL("expected DegenerateWeights");
    } catch (const DegenerateWeights& e) {
        CHECK(std::string(e.what()).find("lambda2") != std::string::npos);
    }
}

TEST_CASE("reduction law: huge lambda1") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const SimDataset d = sim(0.1, 300 + s);
        ArskOptions o;
        o.k = 3;
        o.seed = s;
        o.penalty_e = PenaltySpec::lasso(1e12);
        o.penalty_w = PenaltySpec::lasso(0.0);
        FitTrace tr;
        const FitResult f = fit(d.x, o, &tr);
        CHECK(f.errors.values.isZero(0.0));
        CHECK(f.outlier_indices.empty());
        REQUIRE(f.outer_iterations >= 2);
        const int last = f.outer_iterations - 1;
        KMeansOptions km = o.kmeans;
        km.seed = derive_seed(o.seed, SeedTag::OuterIteration, static_cast<std::uint64_t>(last));
        const ClusterModel plain = lloyd_weighted(d.x, tr.weights.back(), 3, km);
        CHECK(plain.labels == f.model.labels);
        CHECK(cer(plain.labels, f.model.labels) == 0.0);
    }
}

TEST_CASE("fit output invariants and determinism") {
    const SimDataset d = sim(0.1, 9, 30, 5);
    for (PenaltyKind ke : {PenaltyKind::Lasso, PenaltyKind::Scad}) {
        for (PenaltyKind kw : {PenaltyKind::Lasso, PenaltyKind::Scad}) {
            ArskOptions o;
            o.k = 3;
            o.seed = 42;
            o.penalty_e = PenaltySpec{ke, 2.0, 3.7};
            o.penalty_w = PenaltySpec{kw, 20.0, 3.7};
            const FitResult a = fit(d.x, o);
            const FitResult b = fit(d.x, o);
            CHECK(a == b);
            CHECK(validate(a).empty());
            CHECK(a.outlier_indices == a.errors.active_rows());
            CHECK((a.weights.values.array() >= 0.0).all());
            CHECK(std::abs(a.weights.values.norm() - 1.0) <= kUnitNormTolerance);
            CHECK(static_cast<int>(a.objective_trace.size()) == a.outer_iterations);
        }
    }
}

TEST_CASE("planted contamination with a reasonable lambda1") {
    const SimDataset d = sim(0.1, 77, 50, 5);
    ArskOptions o;
    o.k = 3;
    o.seed = 1;
    o.penalty_e = PenaltySpec::lasso(3.0);
    o.penalty_w = PenaltySpec::lasso(60.0);
    const FitResult f = fit(d.x, o);
    std::vector<std::size_t> truth;
    for (std::size_t i = 0; i < d.outlier_flags.size(); ++i) {
        if (d.outlier_flags[i]) {
            truth.push_back(i);
        }
    }
    CHECK(f.outlier_indices == truth);
    const double c = cer_with_outliers(d.true_labels, d.outlier_flags, f.model.labels, f.outlier_indices, 3);
    CHECK(c <= 0.02);
}

TEST_CASE("fit errors") {
    const SimDataset d = sim(0.0, 1);
    ArskOptions o;
    o.k = 200;
    CHECK_THROWS_AS(fit(d.x, o), InvalidParameter);
    o.k = 3;
    o.penalty_w = PenaltySpec::lasso(1e9);
    CHECK_THROWS_AS(fit(d.x, o), DegenerateWeights);
    o.penalty_w = PenaltySpec::lasso(0.0);
    o.outer_tol = 0.0;
    CHECK_THROWS_AS(fit(d.x, o), InvalidParameter);
    o.outer_tol = 1e-4;
    o.init_error_fraction = -0.1;
    CHECK_THROWS_AS(fit(d.x, o), InvalidParameter);
}

}
