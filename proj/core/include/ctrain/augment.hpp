#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ctrain/dataset.hpp"
#include "ctrain/rng.hpp"

namespace ctrain {

/// Augmentation setting written as "<artificial>A/<retained>I/<prob>",
/// e.g. "10A/0I/0.1": per original sample, ten corrupted copies, zero
/// uncorrupted originals, each value masked with probability 0.1.
struct AugmentationSpec {
    double artificial_ratio = 0.0;  // copies of the original set, >= 0
    double retained_ratio = 0.0;    // fraction of originals kept, in [0, 1]
    double missing_prob = 0.0;      // per-value masking probability, in [0, 1]
};

/// Parses the exact grammar
///   ^([0-9]+(\.[0-9]+)?)A/([0-9]+(\.[0-9]+)?)I/([0-9]+(\.[0-9]+)?)$
/// and range-checks the triple. Throws std::invalid_argument with the
/// offending bound named.
AugmentationSpec parse_spec(const std::string& text);

/// Canonical text form; round-trips through parse_spec.
std::string format_spec(const AugmentationSpec& spec);

/// One sample with explicit missingness: masked positions carry value 0 and
/// mask bit 0; present positions keep their value with mask bit 1.
struct MaskedSample {
    std::vector<double> values;
    std::vector<std::uint8_t> mask;
    int label = 0;

    bool operator==(const MaskedSample&) const = default;
};

struct EncodedDataset {
    std::vector<MaskedSample> rows;
    Eigen::Index nv = 0;  // original variable count; classifier input is 2*nv
    int n_classes = 0;

    bool operator==(const EncodedDataset&) const = default;
};

/// Masks each of the nv positions independently with probability prob.
/// The label is never masked.
MaskedSample corrupt_sample(const Eigen::Ref<const Eigen::RowVectorXd>& values,
                            int label, double prob, Rng& rng);

/// Builds the augmented training set: round(artificial_ratio * n) corrupted
/// samples followed by round(retained_ratio * n) originals with all-ones
/// masks. For artificial_ratio = k + f, every original spawns k corrupted
/// copies and round(f * n) extra sources are drawn uniformly without
/// replacement; this keeps the class marginal of the corrupted part equal
/// to that of its sources.
EncodedDataset build_contingency_dataset(const RawDataset& d,
                                         const AugmentationSpec& spec, Rng& rng);

/// Encodes every row as-is with an all-ones mask. Used for test sets and
/// anywhere a raw dataset meets a mask-trained model.
EncodedDataset encode_plain(const RawDataset& d);

/// Rows stacked as a (n x 2*nv) matrix: values first, mask bits after.
Eigen::MatrixXd encoded_inputs(const EncodedDataset& d);

std::vector<int> encoded_labels(const EncodedDataset& d);

/// Writes columns v_1..v_nv, m_1..m_nv, label. Byte-stable for a given
/// dataset.
void write_encoded_csv(const std::filesystem::path& path, const EncodedDataset& d);

}  // namespace ctrain
