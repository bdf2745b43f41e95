#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "melm/errors.hpp"
#include "melm/numerics.hpp"
#include "melm/rng.hpp"

namespace melm {

struct Dataset {
    Matrix X;  // N x d features
    Matrix Y;  // N x m targets
    std::vector<std::string> feature_names;  // optional, may be empty

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index dim() const { return X.cols(); }
    Eigen::Index targets() const { return Y.cols(); }
};

enum class DataFormat { Libsvm, Delimited };

namespace detail {

inline double parse_number(std::string_view tok, std::size_t line_no, const char* what) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw DataError("line " + std::to_string(line_no) + ": bad " + what + " '" +
                        std::string(tok) + "'");
    if (!std::isfinite(v))
        throw DataError("line " + std::to_string(line_no) + ": non-finite " + what + " '" +
                        std::string(tok) + "'");
    return v;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' ||
                                   line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != ',' &&
               line[j] != '\r')
            ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace detail

/// LIBSVM sparse lines: "label index:value ...", indices 1-based and strictly
/// increasing within a line; absent indices read as 0. The feature count is
/// the largest index seen anywhere.
inline Dataset parse_libsvm(std::string_view text) {
    std::vector<double> labels;
    std::vector<std::vector<std::pair<Eigen::Index, double>>> rows;
    Eigen::Index dim = 0;
    std::size_t line_no = 0;
    std::istringstream stream{std::string(text)};
    std::string line;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto fields = detail::split_fields(line);
        if (fields.empty()) continue;
        labels.push_back(detail::parse_number(fields[0], line_no, "label"));
        std::vector<std::pair<Eigen::Index, double>> entries;
        Eigen::Index prev = 0;
        for (std::size_t f = 1; f < fields.size(); ++f) {
            const auto tok = fields[f];
            const auto colon = tok.find(':');
            if (colon == std::string_view::npos)
                throw DataError("line " + std::to_string(line_no) + ": expected index:value, got '" +
                                std::string(tok) + "'");
            const double idx_raw = detail::parse_number(tok.substr(0, colon), line_no, "index");
            const auto idx = static_cast<Eigen::Index>(idx_raw);
            if (idx_raw != static_cast<double>(idx) || idx < 1)
                throw DataError("line " + std::to_string(line_no) + ": feature index '" +
                                std::string(tok.substr(0, colon)) + "' is not a positive integer");
            if (idx <= prev)
                throw DataError("line " + std::to_string(line_no) +
                                ": feature indices must be strictly increasing (saw " +
                                std::to_string(idx) + " after " + std::to_string(prev) + ")");
            prev = idx;
            entries.emplace_back(idx, detail::parse_number(tok.substr(colon + 1), line_no, "value"));
            dim = std::max(dim, idx);
        }
        rows.push_back(std::move(entries));
    }
    if (rows.empty()) throw DataError("libsvm input has no samples");
    Dataset ds;
    ds.X = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), dim);
    ds.Y.resize(static_cast<Eigen::Index>(rows.size()), 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ds.Y(static_cast<Eigen::Index>(i), 0) = labels[i];
        for (const auto& [idx, val] : rows[i]) ds.X(static_cast<Eigen::Index>(i), idx - 1) = val;
    }
    return ds;
}

/// Rectangular numeric text, comma or whitespace delimited. `target_column`
/// selects the Y column (0-based; negative counts from the end, -1 = last).
inline Dataset parse_delimited(std::string_view text, int target_column = -1) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::istringstream stream{std::string(text)};
    std::string line;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto fields = detail::split_fields(line);
        if (fields.empty()) continue;
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto tok : fields) row.push_back(detail::parse_number(tok, line_no, "value"));
        if (!rows.empty() && row.size() != rows.front().size())
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(rows.front().size()) + " columns, got " +
                            std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("delimited input has no samples");
    const auto cols = static_cast<int>(rows.front().size());
    const int target = target_column >= 0 ? target_column : cols + target_column;
    if (target < 0 || target >= cols)
        throw DataError("target column " + std::to_string(target_column) +
                        " is out of range for " + std::to_string(cols) + " columns");
    if (cols < 2) throw DataError("delimited input needs at least one feature and one target");
    Dataset ds;
    ds.X.resize(static_cast<Eigen::Index>(rows.size()), cols - 1);
    ds.Y.resize(static_cast<Eigen::Index>(rows.size()), 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Eigen::Index xi = 0;
        for (int c = 0; c < cols; ++c) {
            if (c == target)
                ds.Y(static_cast<Eigen::Index>(i), 0) = rows[i][static_cast<std::size_t>(c)];
            else
                ds.X(static_cast<Eigen::Index>(i), xi++) = rows[i][static_cast<std::size_t>(c)];
        }
    }
    return ds;
}

/// Writes "label index:value ..." with every index emitted, so the feature
/// count survives a round trip. Single-target datasets only.
inline void write_libsvm(std::ostream& os, const Dataset& ds) {
    if (ds.targets() != 1) throw DataError("libsvm output requires a single target column");
    os << std::setprecision(17);
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
        os << ds.Y(i, 0);
        for (Eigen::Index j = 0; j < ds.dim(); ++j) os << ' ' << (j + 1) << ':' << ds.X(i, j);
        os << '\n';
    }
}

/// Comma-separated rows, features first and target columns last.
inline void write_delimited(std::ostream& os, const Dataset& ds) {
    os << std::setprecision(17);
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
        for (Eigen::Index j = 0; j < ds.dim(); ++j) {
            if (j) os << ',';
            os << ds.X(i, j);
        }
        for (Eigen::Index c = 0; c < ds.targets(); ++c) os << ',' << ds.Y(i, c);
        os << '\n';
    }
}

/// Per-column min-max statistics learned on training data only.
struct Scaler {
    Vector x_min, x_max, y_min, y_max;

    bool x_constant(Eigen::Index j) const { return x_max[j] == x_min[j]; }
    bool y_constant(Eigen::Index j) const { return y_max[j] == y_min[j]; }
};

inline Scaler fit_scaler(const Dataset& train) {
    return {train.X.colwise().minCoeff(), train.X.colwise().maxCoeff(),
            train.Y.colwise().minCoeff(), train.Y.colwise().maxCoeff()};
}

/// (v - min) / (max - min) per column with training statistics; constant
/// columns map to 0. Values outside the training range are not clipped.
inline Dataset apply_scaler(const Scaler& s, const Dataset& ds) {
    Dataset out = ds;
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
        const double span = s.x_max[j] - s.x_min[j];
        if (span == 0)
            out.X.col(j).setZero();
        else
            out.X.col(j) = (ds.X.col(j).array() - s.x_min[j]) / span;
    }
    for (Eigen::Index j = 0; j < ds.Y.cols(); ++j) {
        const double span = s.y_max[j] - s.y_min[j];
        if (span == 0)
            out.Y.col(j).setZero();
        else
            out.Y.col(j) = (ds.Y.col(j).array() - s.y_min[j]) / span;
    }
    return out;
}

namespace detail {

inline Dataset take_rows(const Dataset& ds, const std::vector<Eigen::Index>& rows) {
    Dataset out;
    out.feature_names = ds.feature_names;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), ds.dim());
    out.Y.resize(static_cast<Eigen::Index>(rows.size()), ds.targets());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.X.row(static_cast<Eigen::Index>(i)) = ds.X.row(rows[i]);
        out.Y.row(static_cast<Eigen::Index>(i)) = ds.Y.row(rows[i]);
    }
    return out;
}

inline std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, Rng& rng) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index(0));
    for (std::size_t i = idx.size() - 1; i > 0; --i)
        std::swap(idx[i], idx[uniform_index(rng, i + 1)]);
    return idx;
}

}  // namespace detail

/// Disjoint, exhaustive, uniformly random split into n_train / rest.
inline std::pair<Dataset, Dataset> random_split(const Dataset& ds, Eigen::Index n_train,
                                                Rng& rng) {
    if (n_train < 1 || n_train >= ds.n())
        throw ConfigError("random_split: n_train " + std::to_string(n_train) +
                          " out of range for " + std::to_string(ds.n()) + " samples");
    auto idx = detail::shuffled_indices(ds.n(), rng);
    const std::vector<Eigen::Index> train(idx.begin(), idx.begin() + n_train);
    const std::vector<Eigen::Index> test(idx.begin() + n_train, idx.end());
    return {detail::take_rows(ds, train), detail::take_rows(ds, test)};
}

/// k disjoint exhaustive folds with sizes differing by at most one.
inline std::vector<Dataset> kfold(const Dataset& ds, std::size_t k, Rng& rng) {
    if (k < 1 || ds.n() < static_cast<Eigen::Index>(k))
        throw ConfigError("kfold: cannot split " + std::to_string(ds.n()) + " samples into " +
                          std::to_string(k) + " folds");
    const auto idx = detail::shuffled_indices(ds.n(), rng);
    std::vector<Dataset> folds;
    folds.reserve(k);
    const std::size_t base = idx.size() / k;
    const std::size_t extra = idx.size() % k;
    std::size_t at = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        const std::vector<Eigen::Index> fold_rows(idx.begin() + static_cast<std::ptrdiff_t>(at),
                                                  idx.begin() + static_cast<std::ptrdiff_t>(at + len));
        folds.push_back(detail::take_rows(ds, fold_rows));
        at += len;
    }
    return folds;
}

inline double sinc(double x) { return x == 0 ? 1.0 : std::sin(x) / x; }

/// n samples of y = sinc(x) on x ~ U[-10, 10] with optional Gaussian noise.
inline Dataset synthetic_sinc(Eigen::Index n, double noise_sd, Rng& rng) {
    if (n < 1) throw ConfigError("synthetic_sinc: need at least one sample");
    if (noise_sd < 0) throw ConfigError("synthetic_sinc: noise_sd must be >= 0");
    Dataset ds;
    ds.X.resize(n, 1);
    ds.Y.resize(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = uniform(rng, -10.0, 10.0);
        ds.X(i, 0) = x;
        ds.Y(i, 0) = sinc(x) + (noise_sd > 0 ? gaussian(rng, 0.0, noise_sd) : 0.0);
    }
    return ds;
}

inline DataFormat sniff_format(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::string line;
    while (std::getline(stream, line))
        if (!detail::split_fields(line).empty())
            return line.find(':') != std::string::npos ? DataFormat::Libsvm
                                                       : DataFormat::Delimited;
    return DataFormat::Delimited;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open data file '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

inline Dataset load_dataset(const std::string& path, DataFormat format, int target_column = -1) {
    const std::string text = read_text_file(path);
    return format == DataFormat::Libsvm ? parse_libsvm(text)
                                        : parse_delimited(text, target_column);
}

}  // namespace melm
