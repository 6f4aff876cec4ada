#ifndef ARSK_IO_HPP
#define ARSK_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "arsk/model.hpp"
#include "arsk/simgen.hpp"
#include "arsk/tuning.hpp"

namespace arsk {

using json = nlohmann::json;

// Comma-separated numeric matrix, one observation per line. Blank lines are
// ignored; ragged rows and non-numeric cells raise ParseError with the
// 1-based line and column.
Eigen::MatrixXd read_csv(std::istream& in, bool header = false);
Eigen::MatrixXd read_csv_file(const std::string& path, bool header = false);

// Shortest round-trip representation of every value.
void write_csv(std::ostream& out, const Eigen::MatrixXd& values);
std::string format_double(double v);

struct Standardized {
    DataMatrix x;
    std::vector<std::size_t> constant_columns;  // centred but not scaled
};

// Centre each column and scale to unit sample standard deviation (n - 1).
Standardized standardize(const DataMatrix& x);

// FitResult <-> JSON. Labels, outliers are 1-based; matrices are row-major
// nested arrays. Parsing validates every invariant.
json to_json(const FitResult& fit);
FitResult fit_result_from_json(const json& j);

json to_json(const TuneResult& result);

// Ground-truth sidecar written next to a simulated CSV.
json truth_to_json(const SimDataset& data);

struct GroundTruth {
    std::vector<int> labels;  // 0-based
    std::vector<bool> outlier_flags;
    std::vector<std::size_t> informative;  // 0-based
    int k = 0;
    int p = 0;
};

GroundTruth ground_truth_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace arsk

#endif  // ARSK_IO_HPP
