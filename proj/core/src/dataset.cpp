#include "ctrain/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ctrain/text.hpp"

namespace ctrain {

void validate(const RawDataset& d) {
    const auto n = d.n();
    const auto nv = d.nv();
    if (n < 2) throw std::invalid_argument("dataset needs at least 2 rows, got " + std::to_string(n));
    if (nv < 1) throw std::invalid_argument("dataset needs at least 1 feature column");
    if (static_cast<Eigen::Index>(d.labels.size()) != n)
        throw std::invalid_argument("label count does not match row count");
    if (d.n_classes < 1) throw std::invalid_argument("n_classes must be positive");
    std::vector<bool> seen(static_cast<std::size_t>(d.n_classes), false);
    for (const int label : d.labels) {
        if (label < 0 || label >= d.n_classes)
            throw std::invalid_argument("label index " + std::to_string(label) + " out of range");
        seen[static_cast<std::size_t>(label)] = true;
    }
    for (int c = 0; c < d.n_classes; ++c) {
        if (!seen[static_cast<std::size_t>(c)])
            throw std::invalid_argument("class " + std::to_string(c) + " has no samples");
    }
    if (!d.features.allFinite())
        throw std::invalid_argument("dataset contains a non-finite feature value");
    if (!d.column_names.empty() &&
        static_cast<Eigen::Index>(d.column_names.size()) != nv)
        throw std::invalid_argument("column name count does not match feature count");
}

ColumnRef ColumnRef::parse(const std::string& text) {
    ColumnRef ref;
    const auto trimmed = std::string(trim(text));
    if (trimmed.empty()) throw std::invalid_argument("empty column reference");
    char* end = nullptr;
    const long idx = std::strtol(trimmed.c_str(), &end, 10);
    if (end == trimmed.c_str() + trimmed.size()) {
        if (idx < 0) throw std::invalid_argument("column index must be nonnegative: " + trimmed);
        ref.index = static_cast<int>(idx);
    } else {
        ref.by_name = true;
        ref.name = trimmed;
    }
    return ref;
}

CsvSchema CsvSchema::with_defaults() {
    CsvSchema schema;
    schema.label.index = -1;  // -1 means "last column"
    return schema;
}

namespace {

bool cell_is_numeric(std::string_view cell) {
    return parse_double(cell).has_value();
}

int resolve_column(const ColumnRef& ref, const std::vector<std::string>& header,
                   int n_cols, const char* what) {
    if (!ref.by_name) {
        const int idx = ref.index < 0 ? n_cols - 1 : ref.index;
        if (idx >= n_cols)
            throw std::runtime_error(std::string(what) + " column index " +
                                     std::to_string(idx) + " out of range for " +
                                     std::to_string(n_cols) + " columns");
        return idx;
    }
    for (int i = 0; i < n_cols; ++i) {
        if (i < static_cast<int>(header.size()) &&
            std::string(trim(header[static_cast<std::size_t>(i)])) == ref.name)
            return i;
    }
    throw std::runtime_error(std::string(what) + " column '" + ref.name + "' not found in header");
}

// Labels sort numerically when every distinct value parses as a number,
// lexicographically otherwise.
std::map<std::string, int> encode_labels(const std::set<std::string>& raw) {
    std::vector<std::string> ordered(raw.begin(), raw.end());
    const bool all_numeric = std::all_of(ordered.begin(), ordered.end(), cell_is_numeric);
    if (all_numeric) {
        std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            return *parse_double(a) < *parse_double(b);
        });
    } else {
        std::sort(ordered.begin(), ordered.end());
    }
    std::map<std::string, int> encoding;
    for (std::size_t i = 0; i < ordered.size(); ++i)
        encoding[ordered[i]] = static_cast<int>(i);
    return encoding;
}

}  // namespace

RawDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open dataset file: " + path.string());

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(file, line)) {
        if (trim(line).empty()) continue;
        rows.push_back(split(line, ','));
    }
    if (rows.empty()) throw std::runtime_error("empty dataset file: " + path.string());

    const int n_cols = static_cast<int>(rows.front().size());
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n_cols)
            throw std::runtime_error("ragged row in " + path.string() + ": expected " +
                                     std::to_string(n_cols) + " cells, got " +
                                     std::to_string(row.size()));
    }

    const bool names_used = schema.label.by_name ||
        std::any_of(schema.drop.begin(), schema.drop.end(),
                    [](const ColumnRef& r) { return r.by_name; });

    // Resolve drops first so dropped columns never influence header detection.
    std::vector<std::string> header_guess = rows.front();
    std::vector<bool> dropped(static_cast<std::size_t>(n_cols), false);
    for (const auto& ref : schema.drop)
        dropped[static_cast<std::size_t>(resolve_column(ref, header_guess, n_cols, "drop"))] = true;
    const int label_col = resolve_column(schema.label, header_guess, n_cols, "label");
    if (dropped[static_cast<std::size_t>(label_col)])
        throw std::runtime_error("label column is also listed in drop columns");

    bool has_header = names_used;
    if (!has_header) {
        for (int c = 0; c < n_cols; ++c) {
            if (c == label_col || dropped[static_cast<std::size_t>(c)]) continue;
            if (!cell_is_numeric(rows.front()[static_cast<std::size_t>(c)])) {
                has_header = true;
                break;
            }
        }
    }

    const std::size_t first_data_row = has_header ? 1 : 0;
    const std::size_t n = rows.size() - first_data_row;
    if (n < 2)
        throw std::runtime_error("dataset has fewer than 2 data rows: " + path.string());

    std::vector<int> feature_cols;
    for (int c = 0; c < n_cols; ++c)
        if (c != label_col && !dropped[static_cast<std::size_t>(c)]) feature_cols.push_back(c);
    if (feature_cols.empty())
        throw std::runtime_error("no feature columns remain after drops");

    RawDataset d;
    d.features.resize(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(feature_cols.size()));
    if (has_header) {
        for (const int c : feature_cols)
            d.column_names.emplace_back(trim(rows.front()[static_cast<std::size_t>(c)]));
    }

    std::set<std::string> raw_labels;
    std::vector<std::string> row_labels(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = rows[r + first_data_row];
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            const auto& cell = row[static_cast<std::size_t>(feature_cols[j])];
            const auto value = parse_double(cell);
            if (!value || !std::isfinite(*value))
                throw std::runtime_error("non-numeric feature cell '" + std::string(trim(cell)) +
                                         "' at data row " + std::to_string(r) + ", column " +
                                         std::to_string(feature_cols[j]));
            d.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = *value;
        }
        row_labels[r] = std::string(trim(row[static_cast<std::size_t>(label_col)]));
        if (row_labels[r].empty())
            throw std::runtime_error("empty label cell at data row " + std::to_string(r));
        raw_labels.insert(row_labels[r]);
    }

    const auto encoding = encode_labels(raw_labels);
    d.n_classes = static_cast<int>(encoding.size());
    d.labels.reserve(n);
    for (const auto& raw : row_labels) d.labels.push_back(encoding.at(raw));

    validate(d);
    return d;
}

RawDataset inject_irrelevant_variables(const RawDataset& d, std::size_t count,
                                       Rng& rng, IrrelevantColumns* drawn) {
    if (count < 1) throw std::invalid_argument("irrelevant column count must be >= 1");

    RawDataset out;
    out.labels = d.labels;
    out.n_classes = d.n_classes;
    out.features.resize(d.n(), d.nv() + static_cast<Eigen::Index>(count));
    out.features.leftCols(d.nv()) = d.features;
    if (!d.column_names.empty()) out.column_names = d.column_names;

    IrrelevantColumns columns;
    for (std::size_t j = 0; j < count; ++j) {
        const double alpha = rng.uniform(1.0, 20.0);
        columns.alphas.push_back(alpha);
        const auto col = d.nv() + static_cast<Eigen::Index>(j);
        for (Eigen::Index r = 0; r < d.n(); ++r)
            out.features(r, col) = rng.uniform(0.0, alpha);
        if (!out.column_names.empty())
            out.column_names.push_back("irrelevant_" + std::to_string(j));
    }
    if (drawn) *drawn = std::move(columns);
    return out;
}

namespace {

RawDataset take_rows(const RawDataset& d, const std::vector<Eigen::Index>& indices) {
    RawDataset out;
    out.n_classes = d.n_classes;
    out.column_names = d.column_names;
    out.features.resize(static_cast<Eigen::Index>(indices.size()), d.nv());
    out.labels.reserve(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = d.features.row(indices[i]);
        out.labels.push_back(d.labels[static_cast<std::size_t>(indices[i])]);
    }
    return out;
}

}  // namespace

SplitPair train_test_split(const RawDataset& d, double train_fraction, Rng& rng) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train fraction must be in (0, 1), got " +
                                    format_double(train_fraction));
    const auto n = d.n();
    const auto train_n = static_cast<Eigen::Index>(
        std::floor(train_fraction * static_cast<double>(n)));
    if (train_n < 1 || n - train_n < 1)
        throw std::invalid_argument("degenerate split: " + std::to_string(train_n) + "/" +
                                    std::to_string(n - train_n) + " rows");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    rng.shuffle(order);

    SplitPair pair;
    pair.train_fraction = train_fraction;
    pair.seed = rng.seed();
    pair.train_indices.assign(order.begin(), order.begin() + train_n);
    pair.test_indices.assign(order.begin() + train_n, order.end());
    pair.train = take_rows(d, pair.train_indices);
    pair.test = take_rows(d, pair.test_indices);
    return pair;
}

RawDataset scale_min_max(const RawDataset& d) {
    RawDataset out = d;
    for (Eigen::Index c = 0; c < d.nv(); ++c) {
        const double lo = d.features.col(c).minCoeff();
        const double hi = d.features.col(c).maxCoeff();
        if (hi > lo)
            out.features.col(c) = (d.features.col(c).array() - lo) / (hi - lo);
        else
            out.features.col(c).setZero();
    }
    return out;
}

}  // namespace ctrain
