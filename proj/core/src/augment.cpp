#include "ctrain/augment.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <regex>
#include <stdexcept>

#include "ctrain/text.hpp"

namespace ctrain {

namespace {

const std::regex kSpecGrammar(
    R"(^([0-9]+(\.[0-9]+)?)A/([0-9]+(\.[0-9]+)?)I/([0-9]+(\.[0-9]+)?)$)");

Eigen::Index round_half_up(double x) {
    return static_cast<Eigen::Index>(std::floor(x + 0.5));
}

std::vector<Eigen::Index> draw_without_replacement(Eigen::Index n, Eigen::Index m,
                                                   Rng& rng) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    rng.shuffle(order);
    order.resize(static_cast<std::size_t>(m));
    return order;
}

MaskedSample plain_sample(const RawDataset& d, Eigen::Index row) {
    MaskedSample s;
    s.values.assign(d.features.row(row).begin(), d.features.row(row).end());
    s.mask.assign(static_cast<std::size_t>(d.nv()), std::uint8_t{1});
    s.label = d.labels[static_cast<std::size_t>(row)];
    return s;
}

}  // namespace

AugmentationSpec parse_spec(const std::string& text) {
    std::smatch match;
    if (!std::regex_match(text, match, kSpecGrammar))
        throw std::invalid_argument(
            "malformed augmentation spec '" + text +
            "': expected <ratio>A/<ratio>I/<prob>, e.g. 10A/0I/0.1");

    AugmentationSpec spec;
    spec.artificial_ratio = *parse_double(match[1].str());
    spec.retained_ratio = *parse_double(match[3].str());
    spec.missing_prob = *parse_double(match[5].str());

    if (spec.retained_ratio > 1.0)
        throw std::invalid_argument("retained ratio must be in [0, 1], got " +
                                    match[3].str());
    if (spec.missing_prob > 1.0)
        throw std::invalid_argument("missing probability must be in [0, 1], got " +
                                    match[5].str());
    if (spec.artificial_ratio + spec.retained_ratio <= 0.0)
        throw std::invalid_argument(
            "augmentation spec produces an empty dataset: ratios sum to zero");
    return spec;
}

std::string format_spec(const AugmentationSpec& spec) {
    return format_double(spec.artificial_ratio) + "A/" +
           format_double(spec.retained_ratio) + "I/" +
           format_double(spec.missing_prob);
}

MaskedSample corrupt_sample(const Eigen::Ref<const Eigen::RowVectorXd>& values,
                            int label, double prob, Rng& rng) {
    if (!(prob >= 0.0 && prob <= 1.0))
        throw std::invalid_argument("missing probability must be in [0, 1], got " +
                                    format_double(prob));
    const auto nv = static_cast<std::size_t>(values.size());
    MaskedSample s;
    s.values.resize(nv);
    s.mask.resize(nv);
    s.label = label;
    for (std::size_t j = 0; j < nv; ++j) {
        if (rng.bernoulli(prob)) {
            s.values[j] = 0.0;
            s.mask[j] = 0;
        } else {
            s.values[j] = values(static_cast<Eigen::Index>(j));
            s.mask[j] = 1;
        }
    }
    return s;
}

EncodedDataset build_contingency_dataset(const RawDataset& d,
                                         const AugmentationSpec& spec, Rng& rng) {
    const auto n = d.n();
    const double n_real = static_cast<double>(n);
    const auto artificial_total = round_half_up(spec.artificial_ratio * n_real);
    const auto retained_total = round_half_up(spec.retained_ratio * n_real);
    const auto full_passes = static_cast<Eigen::Index>(std::floor(spec.artificial_ratio));
    const auto extra = artificial_total - full_passes * n;

    EncodedDataset out;
    out.nv = d.nv();
    out.n_classes = d.n_classes;
    out.rows.reserve(static_cast<std::size_t>(artificial_total + retained_total));

    for (Eigen::Index pass = 0; pass < full_passes; ++pass)
        for (Eigen::Index i = 0; i < n; ++i)
            out.rows.push_back(corrupt_sample(d.features.row(i),
                                              d.labels[static_cast<std::size_t>(i)],
                                              spec.missing_prob, rng));

    for (const auto i : draw_without_replacement(n, extra, rng))
        out.rows.push_back(corrupt_sample(d.features.row(i),
                                          d.labels[static_cast<std::size_t>(i)],
                                          spec.missing_prob, rng));

    if (retained_total == n) {
        for (Eigen::Index i = 0; i < n; ++i) out.rows.push_back(plain_sample(d, i));
    } else {
        for (const auto i : draw_without_replacement(n, retained_total, rng))
            out.rows.push_back(plain_sample(d, i));
    }
    return out;
}

EncodedDataset encode_plain(const RawDataset& d) {
    EncodedDataset out;
    out.nv = d.nv();
    out.n_classes = d.n_classes;
    out.rows.reserve(static_cast<std::size_t>(d.n()));
    for (Eigen::Index i = 0; i < d.n(); ++i) out.rows.push_back(plain_sample(d, i));
    return out;
}

Eigen::MatrixXd encoded_inputs(const EncodedDataset& d) {
    Eigen::MatrixXd inputs(static_cast<Eigen::Index>(d.rows.size()), 2 * d.nv);
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
        const auto& row = d.rows[r];
        for (Eigen::Index j = 0; j < d.nv; ++j) {
            inputs(static_cast<Eigen::Index>(r), j) = row.values[static_cast<std::size_t>(j)];
            inputs(static_cast<Eigen::Index>(r), d.nv + j) =
                static_cast<double>(row.mask[static_cast<std::size_t>(j)]);
        }
    }
    return inputs;
}

std::vector<int> encoded_labels(const EncodedDataset& d) {
    std::vector<int> labels;
    labels.reserve(d.rows.size());
    for (const auto& row : d.rows) labels.push_back(row.label);
    return labels;
}

void write_encoded_csv(const std::filesystem::path& path, const EncodedDataset& d) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write encoded dataset: " + path.string());

    for (Eigen::Index j = 0; j < d.nv; ++j) file << "v_" << (j + 1) << ',';
    for (Eigen::Index j = 0; j < d.nv; ++j) file << "m_" << (j + 1) << ',';
    file << "label\n";

    for (const auto& row : d.rows) {
        for (const auto value : row.values) file << format_double(value) << ',';
        for (const auto bit : row.mask) file << (bit ? '1' : '0') << ',';
        file << row.label << '\n';
    }
    if (!file) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace ctrain
