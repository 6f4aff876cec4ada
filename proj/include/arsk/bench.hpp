#ifndef ARSK_BENCH_HPP
#define ARSK_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "arsk/arsk.hpp"
#include "arsk/io.hpp"
#include "arsk/simgen.hpp"
#include "arsk/tuning.hpp"

namespace arsk {

enum class MethodKind { KMeans, Trimmed, Arsk };

// "kc", "tkm", or "<w>-<e>-arsk" where <w> thresholds the weights and <e>
// the error rows, each "soft" or "scad".
struct MethodSpec {
    std::string name;
    MethodKind kind = MethodKind::KMeans;
    PenaltyKind weight_penalty = PenaltyKind::Lasso;
    PenaltyKind error_penalty = PenaltyKind::Lasso;
};

MethodSpec parse_method(const std::string& name);

struct Scenario {
    std::string name;
    SimConfig sim;  // seed is ignored; replicates derive their own
};

struct LambdaPolicy {
    bool gap_tuned = true;
    double lambda1 = 1.0;  // fixed policy only
    double lambda2 = 0.0;
    TuneConfig tune{};
};

struct BenchConfig {
    std::vector<Scenario> scenarios;
    std::vector<MethodSpec> methods;
    int reps = 2;
    std::uint64_t seed = 0;
    double tkm_alpha = 0.1;
    LambdaPolicy lambda;
    ArskOptions arsk{};  // penalties/k/seed are filled in per task
    KMeansOptions kmeans{};  // for the kc and tkm baselines
    int threads = 1;
};

// Reads the JSON scenario file (schema documented in docs/formats.md).
BenchConfig bench_config_from_json(const json& j);

struct ReplicateRecord {
    std::size_t scenario = 0;
    std::size_t method = 0;
    int rep = 0;
    bool ok = false;
    double cer = 0.0;  // with the outlier pseudo-cluster
    std::optional<double> tpr;
    std::optional<double> tnr;
    double outliers = 0.0;
    double nonzero_weights = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

struct Summary {
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
    bool defined = false;

    bool operator==(const Summary&) const = default;
};

struct BenchRow {
    std::string scenario;
    std::string method;
    int reps = 0;
    int failures = 0;
    Summary cer;
    Summary tpr;
    Summary tnr;
    Summary outliers;

    bool operator==(const BenchRow&) const = default;
};

struct BenchReport {
    std::vector<BenchRow> rows;  // ordered by (scenario, method)
    std::vector<ReplicateRecord> records;
};

// Seed for replicate `rep` of scenario `scenario`.
std::uint64_t replicate_seed(std::uint64_t seed, std::size_t scenario, int rep);

// Evaluates one method on one dataset.
ReplicateRecord run_method(const SimDataset& data, const MethodSpec& method, const BenchConfig& cfg,
                           std::uint64_t seed);

BenchReport run_bench(const BenchConfig& cfg);

Summary summarize(const std::vector<double>& values);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
std::vector<BenchRow> read_bench_csv(std::istream& in);

}  // namespace arsk

#endif  // ARSK_BENCH_HPP
