#include <doctest.h>

#include <random>

#include "arsk/errors.hpp"
#include "arsk/metrics.hpp"
#include "oracles.hpp"

using namespace arsk;

namespace {

std::vector<int> random_labels(std::size_t n, int k, std::mt19937_64& rng) {
    std::vector<int> v(n);
    for (auto& x : v) {
        x = static_cast<int>(rng() % static_cast<unsigned>(k));
    }
    return v;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("cer hand cases") {
    const std::vector<int> a{1, 1, 2, 2};
    const std::vector<int> b{1, 2, 1, 2};
    CHECK(cer(a, a) == 0.0);
    CHECK(cer(a, b) == 4.0 / 6.0);
    CHECK(cer_pairwise(a, b) == 4.0 / 6.0);
    CHECK(cer_disagreements(a, b) == 4);
    CHECK(cer(a, std::vector<int>{7, 7, -3, -3}) == 0.0);
}

TEST_CASE("cer counting equals pair enumeration") {
    std::mt19937_64 rng(123);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + rng() % 49;
        const int ka = 1 + static_cast<int>(rng() % 6);
        const int kb = 1 + static_cast<int>(rng() % 6);
        const auto a = random_labels(n, ka, rng);
        const auto b = random_labels(n, kb, rng);
        CHECK(cer(a, b) == cer_pairwise(a, b));
        CHECK(cer(a, b) == oracle::cer_pairs(a, b));
        CHECK(cer(a, b) == cer(b, a));
        CHECK(cer(a, b) >= 0.0);
        CHECK(cer(a, b) <= 1.0);
        // independent relabeling of either side
        std::vector<int> perm{5, 3, 0, 4, 1, 2};
        std::vector<int> b2(b);
        for (auto& x : b2) {
            x = perm[static_cast<std::size_t>(x)] + 10;
        }
        CHECK(cer(a, b2) == cer(a, b));
    }
}

TEST_CASE("cer errors") {
    CHECK_THROWS_AS(cer(std::vector<int>{1, 2}, std::vector<int>{1}), InvalidInput);
    CHECK_THROWS_AS(cer(std::vector<int>{1}, std::vector<int>{1}), InvalidInput);
}

TEST_CASE("cer_with_outliers") {
    std::vector<int> truth(150);
    for (std::size_t i = 0; i < 150; ++i) {
        truth[i] = static_cast<int>(i / 50);
    }
    const std::vector<bool> none(150, false);
    const std::vector<std::size_t> nothing;
    std::mt19937_64 rng(1);
    const auto pred = random_labels(150, 3, rng);
    CHECK(cer_with_outliers(truth, none, pred, nothing, 3) == cer(truth, pred));
    CHECK(cer_with_outliers(truth, none, truth, nothing, 3) == 0.0);

    std::vector<bool> flags(150, false);
    flags[10] = flags[70] = true;
    const std::vector<std::size_t> det{10, 70};
    CHECK(cer_with_outliers(truth, flags, truth, det, 3) == 0.0);

    // one false positive: row 0 leaves its cluster of 50
    const std::vector<std::size_t> fp{0};
    std::vector<int> moved = truth;
    moved[0] = 3;
    const double expect = oracle::cer_pairs(truth, moved);
    CHECK(expect == 49.0 / (150.0 * 149.0 / 2.0));
    CHECK(cer_with_outliers(truth, none, truth, fp, 3) == expect);
}

TEST_CASE("tpr_tnr") {
    const std::vector<std::size_t> inf{0, 1, 2, 3, 4};
    Eigen::VectorXd oracle_w = Eigen::VectorXd::Zero(50);
    oracle_w.head(5).setConstant(1.0 / std::sqrt(5.0));
    auto r = tpr_tnr(oracle_w, inf);
    CHECK(r.tpr == 1.0);
    CHECK(r.tnr == 1.0);

    r = tpr_tnr(Eigen::VectorXd::Constant(50, 0.1), inf);
    CHECK(r.tpr == 1.0);
    CHECK(r.tnr == 0.0);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(50);
    w.segment(0, 4).setConstant(0.3);
    w(20) = 0.2;
    w(30) = 0.4;
    r = tpr_tnr(w, inf);
    CHECK(r.tpr == 0.8);
    CHECK(r.tnr == 43.0 / 45.0);
    const auto scaled = tpr_tnr(Eigen::VectorXd(w * 7.5), inf);
    CHECK(scaled.tpr == r.tpr);
    CHECK(scaled.tnr == r.tnr);

    CHECK(tpr_tnr(Eigen::VectorXd::Zero(4), std::vector<std::size_t>{}).tpr == 1.0);
    const std::vector<std::size_t> allv{0, 1, 2, 3};
    CHECK(tpr_tnr(Eigen::VectorXd::Zero(4), allv).tnr == 1.0);
}

TEST_CASE("outlier_confusion") {
    std::vector<bool> flags(6, false);
    flags[0] = flags[1] = true;
    const std::vector<std::size_t> perfect{0, 1};
    CHECK(outlier_confusion(flags, perfect) == OutlierConfusion{2, 0, 0, 2});
    CHECK(outlier_confusion(flags, std::vector<std::size_t>{}) == OutlierConfusion{0, 0, 2, 0});
    const std::vector<std::size_t> mixed{1, 2};
    CHECK(outlier_confusion(flags, mixed) == OutlierConfusion{1, 1, 1, 2});
}

}
