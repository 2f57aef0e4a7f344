#include "fwals/dataset.hpp"

#include <Eigen/SVD>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "fwals/errors.hpp"

namespace fwals {

Dataset make_dataset(Eigen::VectorXd y, Eigen::MatrixXd X1, Eigen::MatrixXd X2,
                     double rank_tol) {
    const Eigen::Index n = y.size();
    if (X1.rows() != n || X2.rows() != n)
        throw DataError("dataset: row counts differ (y: " + std::to_string(n) +
                        ", X1: " + std::to_string(X1.rows()) +
                        ", X2: " + std::to_string(X2.rows()) + ")");
    if (X1.cols() < 1) throw DataError("dataset: need at least one core regressor");
    if (X2.cols() < 1) throw DataError("dataset: need at least one auxiliary regressor");
    if (n <= X1.cols() + X2.cols())
        throw DataError("dataset: need N > k1 + k2 (N = " + std::to_string(n) +
                        ", k = " + std::to_string(X1.cols() + X2.cols()) + ")");
    if (!y.allFinite() || !X1.allFinite() || !X2.allFinite())
        throw DataError("dataset: non-finite entries");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X1);
    const auto& sv = svd.singularValues();
    if (sv[sv.size() - 1] <= rank_tol * sv[0])
        throw DataError("dataset: core regressors are rank deficient "
                        "(singular value ratio " +
                        std::to_string(sv[sv.size() - 1] / sv[0]) + ")");

    return Dataset{std::move(y), std::move(X1), std::move(X2)};
}

Eigen::Index SubmodelSelection::count() const {
    Eigen::Index c = 0;
    for (bool b : included) c += b ? 1 : 0;
    return c;
}

Eigen::VectorXd SubmodelSelection::diagonal() const {
    Eigen::VectorXd d(static_cast<Eigen::Index>(included.size()));
    for (std::size_t j = 0; j < included.size(); ++j) d[static_cast<Eigen::Index>(j)] = included[j] ? 1.0 : 0.0;
    return d;
}

SubmodelSelection submodel_from_index(std::uint32_t index, int k2) {
    if (k2 < 1 || k2 > 20)
        throw ConfigError("sub-models: k2 = " + std::to_string(k2) +
                          " outside the supported range [1, 20]");
    if (index >= (std::uint32_t{1} << k2))
        throw ConfigError("sub-models: index " + std::to_string(index) +
                          " out of range for k2 = " + std::to_string(k2));
    SubmodelSelection sel;
    sel.index = index;
    sel.included.resize(static_cast<std::size_t>(k2));
    for (int j = 0; j < k2; ++j) sel.included[static_cast<std::size_t>(j)] = (index >> j) & 1u;
    return sel;
}

std::vector<SubmodelSelection> enumerate_submodels(int k2) {
    if (k2 < 1 || k2 > 20)
        throw ConfigError("sub-models: k2 = " + std::to_string(k2) +
                          " outside the supported range [1, 20] (2^k2 cap)");
    const std::uint32_t m = std::uint32_t{1} << k2;
    std::vector<SubmodelSelection> out;
    out.reserve(m);
    for (std::uint32_t idx = 0; idx < m; ++idx) out.push_back(submodel_from_index(idx, k2));
    return out;
}

BoxWeights::BoxWeights(Eigen::VectorXd w_, double tol) : w(std::move(w_)) {
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (!(w[j] >= -tol && w[j] <= 1.0 + tol))
            throw NumericError("box weights: entry " + std::to_string(j) + " = " +
                               std::to_string(w[j]) + " outside [0,1]");
        w[j] = std::min(1.0, std::max(0.0, w[j]));
    }
}

SimplexWeights::SimplexWeights(Eigen::VectorXd w_, double sum_tol) : w(std::move(w_)) {
    double sum = 0.0;
    for (Eigen::Index m = 0; m < w.size(); ++m) {
        if (!(w[m] >= -1e-12 && w[m] <= 1.0 + 1e-12))
            throw NumericError("simplex weights: entry " + std::to_string(m) + " = " +
                               std::to_string(w[m]) + " outside [0,1]");
        w[m] = std::min(1.0, std::max(0.0, w[m]));
        sum += w[m];
    }
    if (std::abs(sum - 1.0) > sum_tol)
        throw NumericError("simplex weights: sum " + std::to_string(sum) + " != 1");
}

Eigen::VectorXd box_from_simplex(const Eigen::VectorXd& u, int k2) {
    if (u.size() != (Eigen::Index{1} << k2))
        throw ConfigError("box_from_simplex: expected 2^k2 weights");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(k2);
    for (Eigen::Index m = 0; m < u.size(); ++m)
        for (int j = 0; j < k2; ++j)
            if ((static_cast<std::uint32_t>(m) >> j) & 1u) w[j] += u[m];
    return w;
}

// ---------------------------------------------------------------------------
// CSV loading
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string column_label(const ColumnRef& ref) {
    if (std::holds_alternative<int>(ref)) return "#" + std::to_string(std::get<int>(ref));
    return "'" + std::get<std::string>(ref) + "'";
}

int resolve_column(const ColumnRef& ref,
                   const std::unordered_map<std::string, int>& header_index,
                   int ncols, bool has_header) {
    if (std::holds_alternative<int>(ref)) {
        const int idx = std::get<int>(ref);
        if (idx < 0 || idx >= ncols)
            throw DataError("csv: column index " + std::to_string(idx) +
                            " out of range (file has " + std::to_string(ncols) +
                            " columns)");
        return idx;
    }
    if (!has_header)
        throw ConfigError("csv: column name " + column_label(ref) +
                          " requires a header row");
    const auto it = header_index.find(std::get<std::string>(ref));
    if (it == header_index.end())
        throw DataError("csv: column " + column_label(ref) + " not found in header");
    return it->second;
}

}  // namespace

Dataset load_dataset(const std::string& path, const std::vector<ColumnRef>& core_cols,
                     const std::vector<ColumnRef>& aux_cols, const ColumnRef& response_col,
                     bool has_header) {
    std::ifstream in(path);
    if (!in) throw DataError("csv: cannot open '" + path + "'");

    std::string line;
    std::vector<std::vector<std::string>> rows;
    std::unordered_map<std::string, int> header_index;
    bool first = true;
    int ncols = -1;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (first && has_header) {
            for (std::size_t i = 0; i < fields.size(); ++i)
                header_index[trim(fields[i])] = static_cast<int>(i);
            ncols = static_cast<int>(fields.size());
            first = false;
            continue;
        }
        first = false;
        if (ncols < 0) ncols = static_cast<int>(fields.size());
        if (static_cast<int>(fields.size()) != ncols)
            throw DataError("csv: row " + std::to_string(rows.size() + 1) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(ncols));
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) throw DataError("csv: no data rows in '" + path + "'");

    std::vector<int> core_idx, aux_idx;
    for (const auto& ref : core_cols)
        core_idx.push_back(resolve_column(ref, header_index, ncols, has_header));
    for (const auto& ref : aux_cols)
        aux_idx.push_back(resolve_column(ref, header_index, ncols, has_header));
    const int y_idx = resolve_column(response_col, header_index, ncols, has_header);

    std::vector<int> all = core_idx;
    all.insert(all.end(), aux_idx.begin(), aux_idx.end());
    all.push_back(y_idx);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (all[i] == all[j])
                throw ConfigError("csv: column " + std::to_string(all[i]) +
                                  " selected more than once across core/aux/response");

    const auto n = static_cast<Eigen::Index>(rows.size());
    auto parse_cell = [&](Eigen::Index r, int c) -> double {
        const std::string cell = trim(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        double value = 0.0;
        const char* begin = cell.data();
        const char* end = begin + cell.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr != end)
            throw DataError("csv: non-numeric cell at row " + std::to_string(r + 1) +
                            ", column " + std::to_string(c) + " ('" + cell + "')");
        if (!std::isfinite(value))
            throw DataError("csv: non-finite cell at row " + std::to_string(r + 1) +
                            ", column " + std::to_string(c) + " ('" + cell + "')");
        return value;
    };

    Eigen::VectorXd y(n);
    Eigen::MatrixXd X1(n, static_cast<Eigen::Index>(core_idx.size()));
    Eigen::MatrixXd X2(n, static_cast<Eigen::Index>(aux_idx.size()));
    for (Eigen::Index r = 0; r < n; ++r) {
        y[r] = parse_cell(r, y_idx);
        for (std::size_t j = 0; j < core_idx.size(); ++j)
            X1(r, static_cast<Eigen::Index>(j)) = parse_cell(r, core_idx[j]);
        for (std::size_t j = 0; j < aux_idx.size(); ++j)
            X2(r, static_cast<Eigen::Index>(j)) = parse_cell(r, aux_idx[j]);
    }
    return make_dataset(std::move(y), std::move(X1), std::move(X2));
}

}  // namespace fwals
