#include "ctrain/model_io.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ctrain {

namespace {

constexpr std::array<char, 8> kMagic = {'C', 'T', 'R', 'N', 'M', 'L', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

std::uint32_t read_u32(std::istream& in) {
    std::uint32_t value = 0;
    in.read(reinterpret_cast<char*>(&value), sizeof(value));
    return value;
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
}

void read_matrix(std::istream& in, Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            double v = 0.0;
            in.read(reinterpret_cast<char*>(&v), sizeof(v));
            m(r, c) = v;
        }
}

}  // namespace

void save_model(const std::filesystem::path& path, const ModelFile& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path.string());

    out.write(kMagic.data(), kMagic.size());
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(model.config.n_inputs));
    write_u32(out, static_cast<std::uint32_t>(model.config.n_hidden));
    write_u32(out, static_cast<std::uint32_t>(model.config.n_outputs));
    write_u32(out, model.config.loss == Loss::SquaredError ? 0u : 1u);
    write_matrix(out, model.parameters.hidden_weights);
    write_matrix(out, model.parameters.output_weights);
    if (!out) throw std::runtime_error("model write failed: " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path.string());

    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || std::memcmp(magic.data(), kMagic.data(), magic.size()) != 0)
        throw std::runtime_error("not a model file: " + path.string());
    const auto version = read_u32(in);
    if (version != kVersion)
        throw std::runtime_error("unsupported model file version " +
                                 std::to_string(version));

    ModelFile model;
    model.config.n_inputs = static_cast<int>(read_u32(in));
    model.config.n_hidden = static_cast<int>(read_u32(in));
    model.config.n_outputs = static_cast<int>(read_u32(in));
    const auto loss = read_u32(in);
    if (loss > 1) throw std::runtime_error("unknown loss kind in model file");
    model.config.loss = loss == 0 ? Loss::SquaredError : Loss::CrossEntropy;
    if (model.config.n_inputs < 1 || model.config.n_hidden < 1 ||
        model.config.n_outputs < 1)
        throw std::runtime_error("corrupt model header: " + path.string());

    model.parameters.hidden_weights.resize(model.config.n_inputs + 1,
                                           model.config.n_hidden);
    model.parameters.output_weights.resize(model.config.n_hidden + 1,
                                           model.config.n_outputs);
    read_matrix(in, model.parameters.hidden_weights);
    read_matrix(in, model.parameters.output_weights);
    if (!in) throw std::runtime_error("truncated model file: " + path.string());
    return model;
}

}  // namespace ctrain
