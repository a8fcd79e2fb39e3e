#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ctrain/rng.hpp"

namespace ctrain {

/// Tabular classification dataset: one row per sample, labels densely
/// re-encoded to [0, n_classes).
struct RawDataset {
    Eigen::MatrixXd features;               // n x nv
    std::vector<int> labels;                // length n
    int n_classes = 0;
    std::vector<std::string> column_names;  // empty when the file had no header

    Eigen::Index n() const { return features.rows(); }
    Eigen::Index nv() const { return features.cols(); }
};

/// Throws std::invalid_argument when a freshly loaded dataset breaks its
/// contract: labels out of range, a class index with no samples, non-finite
/// features, n < 2 or nv < 1. Split halves are exempt (a class may be
/// absent from one side).
void validate(const RawDataset& d);

/// A column referenced either by 0-based index in the source file or by
/// header name. Strings that parse as integers are treated as indices.
struct ColumnRef {
    static ColumnRef parse(const std::string& text);

    bool by_name = false;
    int index = -1;
    std::string name;
};

struct CsvSchema {
    ColumnRef label;                  // default: last column
    std::vector<ColumnRef> drop;      // removed before anything else

    static CsvSchema with_defaults();
};

/// Loads a comma-separated file. A header row is auto-detected: if any
/// retained non-label cell of the first row fails to parse as a number the
/// row is taken as a header (a by-name ColumnRef forces the header on).
/// Labels may be arbitrary strings; they are mapped to [0, n_classes) in
/// sorted order, numerically when every label parses as a number.
RawDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Per-column upper bounds drawn for injected irrelevant columns.
struct IrrelevantColumns {
    std::vector<double> alphas;  // each in [1, 20]

    std::size_t count() const { return alphas.size(); }
};

/// Appends `count` columns of noise: per column an upper bound alpha is
/// drawn from Unif(1, 20) once, then every row value from Unif(0, alpha).
/// Original cells and labels are untouched.
RawDataset inject_irrelevant_variables(const RawDataset& d, std::size_t count,
                                       Rng& rng, IrrelevantColumns* drawn = nullptr);

struct SplitPair {
    RawDataset train;
    RawDataset test;
    double train_fraction = 0.0;
    std::uint64_t seed = 0;
    std::vector<Eigen::Index> train_indices;  // source rows, in draw order
    std::vector<Eigen::Index> test_indices;
};

/// Uniformly random row partition; train side gets floor(fraction * n) rows.
/// Both sides inherit n_classes and column names.
SplitPair train_test_split(const RawDataset& d, double train_fraction, Rng& rng);

/// Optional min-max rescale of every column to [0, 1]; constant columns
/// map to 0. Disabled by default everywhere.
RawDataset scale_min_max(const RawDataset& d);

}  // namespace ctrain
