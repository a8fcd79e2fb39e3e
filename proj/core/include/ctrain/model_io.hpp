#pragma once

#include <filesystem>

#include "ctrain/mlp.hpp"

namespace ctrain {

struct ModelFile {
    MlpConfig config;  // layer sizes and loss kind; training knobs are not stored
    MlpParameters parameters;
};

/// Binary format, little-endian: magic "CTRNMLP1", u32 version, u32 n_inputs,
/// u32 n_hidden, u32 n_outputs, u32 loss kind, then the two weight matrices
/// row-major as IEEE f64. Save/load round-trips bit-exactly.
void save_model(const std::filesystem::path& path, const ModelFile& model);

ModelFile load_model(const std::filesystem::path& path);

}  // namespace ctrain
