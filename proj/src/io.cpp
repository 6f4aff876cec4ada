#include "arsk/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "arsk/errors.hpp"

namespace arsk {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* field) {
    if (!j.is_array()) {
        throw InvalidInput(std::string(field) + ": expected an array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw InvalidInput(std::string(field) + ": ragged row " + std::to_string(i + 1));
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
    }
    return m;
}

}  // namespace

Eigen::MatrixXd read_csv(std::istream& in, bool header) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    if (header) {
        ++line_no;
        std::getline(in, line);
    }
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view content = trim(line);
        if (content.empty()) {
            continue;
        }
        std::vector<double> row;
        std::size_t column = 0;
        std::size_t start = 0;
        while (true) {
            ++column;
            const std::size_t comma = content.find(',', start);
            const std::string_view cell =
                trim(content.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            double value = 0.0;
            const char* first = cell.data();
            const char* last = cell.data() + cell.size();
            if (!cell.empty() && *first == '+') {
                ++first;
            }
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
                throw ParseError("non-numeric cell '" + std::string(cell) + "'", line_no, column);
            }
            row.push_back(value);
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw ParseError("ragged row: expected " + std::to_string(width) + " cells, found " +
                                 std::to_string(row.size()),
                             line_no, std::min(row.size(), width) + 1);
        }
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

Eigen::MatrixXd read_csv_file(const std::string& path, bool header) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'", 0, 0);
    }
    return read_csv(in, header);
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void write_csv(std::ostream& out, const Eigen::MatrixXd& values) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << format_double(values(i, j));
        }
        out << '\n';
    }
}

Standardized standardize(const DataMatrix& x) {
    Eigen::MatrixXd values = x.values();
    std::vector<std::size_t> constant;
    const double denom = static_cast<double>(x.n() - 1);
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
        const double mean = values.col(j).mean();
        values.col(j).array() -= mean;
        const double sd = std::sqrt(values.col(j).squaredNorm() / denom);
        if (sd > 0.0) {
            values.col(j) /= sd;
        } else {
            constant.push_back(static_cast<std::size_t>(j));
        }
    }
    return Standardized{DataMatrix(std::move(values)), std::move(constant)};
}

json to_json(const FitResult& fit) {
    json j;
    std::vector<int> labels(fit.model.labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        labels[i] = fit.model.labels[i] + 1;
    }
    std::vector<std::size_t> outliers(fit.outlier_indices.size());
    for (std::size_t i = 0; i < outliers.size(); ++i) {
        outliers[i] = fit.outlier_indices[i] + 1;
    }
    j["labels"] = labels;
    j["centers"] = matrix_to_json(fit.model.centers);
    j["errors"] = matrix_to_json(fit.errors.values);
    j["weights"] = std::vector<double>(fit.weights.values.begin(), fit.weights.values.end());
    j["outliers"] = outliers;
    j["objective_trace"] = fit.objective_trace;
    j["iterations"] = fit.outer_iterations;
    j["converged"] = fit.converged;
    return j;
}

FitResult fit_result_from_json(const json& j) {
    FitResult fit;
    try {
        const auto labels = j.at("labels").get<std::vector<int>>();
        fit.model.centers = matrix_from_json(j.at("centers"), "centers");
        fit.model.k = static_cast<int>(fit.model.centers.rows());
        fit.model.labels.resize(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            fit.model.labels[i] = labels[i] - 1;
        }
        fit.errors.values = matrix_from_json(j.at("errors"), "errors");
        const auto weights = j.at("weights").get<std::vector<double>>();
        fit.weights.values = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
        for (std::size_t idx : j.at("outliers").get<std::vector<std::size_t>>()) {
            if (idx == 0) {
                throw InvalidInput("outliers: row ids are 1-based");
            }
            fit.outlier_indices.push_back(idx - 1);
        }
        fit.objective_trace = j.at("objective_trace").get<std::vector<double>>();
        fit.outer_iterations = j.at("iterations").get<int>();
        fit.converged = j.at("converged").get<bool>();
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed fit result: ") + e.what());
    }
    const auto problems = validate(fit);
    if (!problems.empty()) {
        throw InvalidInput("invalid fit result: " + problems.front());
    }
    return fit;
}

json to_json(const TuneResult& result) {
    auto grid_json = [](const std::vector<GapPoint>& grid) {
        json arr = json::array();
        for (const GapPoint& pt : grid) {
            json e;
            e["lambda1"] = pt.lambda1;
            e["lambda2"] = pt.lambda2;
            e["feasible"] = pt.feasible;
            e["gap"] = pt.feasible ? json(pt.gap) : json(nullptr);
            e["log_d"] = pt.log_d;
            e["mean_log_d_null"] = pt.feasible ? json(pt.mean_log_d_null) : json(nullptr);
            e["outliers"] = pt.outliers;
            e["nonzero_weights"] = pt.nonzero_weights;
            e["infeasible_nulls"] = pt.infeasible_nulls;
            arr.push_back(std::move(e));
        }
        return arr;
    };
    json j;
    j["lambda2_star"] = result.lambda2_star;
    j["lambda1_star"] = result.lambda1_star;
    j["lambda1_dagger"] = result.lambda1_dagger;
    std::vector<double> l2;
    std::vector<double> l1;
    for (const auto& pt : result.grid2) {
        l2.push_back(pt.lambda2);
    }
    for (const auto& pt : result.grid1) {
        l1.push_back(pt.lambda1);
    }
    j["lambda2_grid"] = l2;
    j["lambda1_grid"] = l1;
    j["gap_grid_2"] = grid_json(result.grid2);
    j["gap_grid_1"] = grid_json(result.grid1);
    j["selected_outliers"] = result.best_fit.outlier_indices.size();
    j["selected_nonzero_weights"] = result.best_fit.weights.nonzero_count();
    return j;
}

json truth_to_json(const SimDataset& data) {
    json j;
    std::vector<int> labels(data.true_labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        labels[i] = data.true_labels[i] + 1;
    }
    std::vector<std::size_t> informative(data.informative.size());
    for (std::size_t i = 0; i < informative.size(); ++i) {
        informative[i] = data.informative[i] + 1;
    }
    j["labels"] = labels;
    j["outlier_flags"] = data.outlier_flags;
    j["informative"] = informative;
    j["true_means"] = matrix_to_json(data.true_means);
    j["config"] = {{"k", data.config.k},
                   {"n_per_cluster", data.config.n_per_cluster},
                   {"p", data.config.p},
                   {"q", data.config.q},
                   {"pi", data.config.pi},
                   {"covariance", to_string(data.config.covariance)},
                   {"seed", data.config.seed}};
    return j;
}

GroundTruth ground_truth_from_json(const json& j) {
    GroundTruth truth;
    try {
        for (int label : j.at("labels").get<std::vector<int>>()) {
            if (label < 1) {
                throw InvalidInput("truth labels are 1-based");
            }
            truth.labels.push_back(label - 1);
        }
        truth.outlier_flags = j.at("outlier_flags").get<std::vector<bool>>();
        for (std::size_t idx : j.at("informative").get<std::vector<std::size_t>>()) {
            if (idx == 0) {
                throw InvalidInput("informative indices are 1-based");
            }
            truth.informative.push_back(idx - 1);
        }
        truth.k = j.at("config").at("k").get<int>();
        truth.p = j.at("config").at("p").get<int>();
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed ground truth: ") + e.what());
    }
    if (truth.outlier_flags.size() != truth.labels.size()) {
        throw InvalidInput("ground truth: labels and outlier flags differ in length");
    }
    return truth;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'", 0, 0);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what(), 0, e.byte);
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidParameter("cannot write '" + path + "'");
    }
    out << text;
}

}  // namespace arsk
