#pragma once

#include <Eigen/Core>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "ctrain/dataset.hpp"

namespace ctrain::test {

inline std::filesystem::path data_dir() {
    if (const char* env = std::getenv("CTRAIN_DATA_DIR")) return env;
    return CTRAIN_DATA_DIR;
}

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::mt19937_64 naming(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() /
                ("ctrain_test_" + std::to_string(naming()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::filesystem::path write_file(const std::filesystem::path& path,
                                        const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

/// Small deterministic dataset: `n` rows, `nv` features, labels cycling
/// through `n_classes`.
inline RawDataset make_dataset(Eigen::Index n, Eigen::Index nv, int n_classes,
                               std::uint64_t seed = 1) {
    RawDataset d;
    d.features.resize(n, nv);
    Rng rng(seed);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < nv; ++c) d.features(r, c) = rng.uniform(-3.0, 3.0);
    d.n_classes = n_classes;
    for (Eigen::Index r = 0; r < n; ++r)
        d.labels.push_back(static_cast<int>(r % n_classes));
    return d;
}

}  // namespace ctrain::test
