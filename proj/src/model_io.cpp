#include "dune/model_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dune/errors.hpp"

namespace dune {

namespace {

constexpr char kMagic[4] = {'D', 'U', 'N', 'E'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; add byte swapping for this "
              "platform");

template <typename T>
void write_raw(std::ofstream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in, const char* what) {
    T value;
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
        throw ParseError(std::string("model: truncated file while reading ") +
                         what);
    }
    return value;
}

}  // namespace

void save_model(const std::filesystem::path& path,
                const IntervalParameterSet& intervals,
                const NetworkTopology& topology) {
    if (intervals.size() != topology.parameter_count()) {
        throw ValidationError("model: interval count does not match topology");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ParseError("model: cannot open " + path.string() +
                         " for writing");
    }
    out.write(kMagic, 4);
    write_raw(out, kVersion);
    write_raw(out, static_cast<std::uint64_t>(intervals.size()));
    out.write(reinterpret_cast<const char*>(intervals.lower.data()),
              static_cast<std::streamsize>(intervals.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(intervals.upper.data()),
              static_cast<std::streamsize>(intervals.size() * sizeof(double)));
    write_raw(out, static_cast<std::uint32_t>(topology.layer_sizes.size()));
    for (std::size_t s : topology.layer_sizes) {
        write_raw(out, static_cast<std::uint32_t>(s));
    }
    if (!out) throw ParseError("model: write failed for " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("model: cannot open " + path.string());

    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw ParseError("model: bad magic in " + path.string());
    }
    auto version = read_raw<std::uint32_t>(in, "version");
    if (version != kVersion) {
        throw ParseError("model: unsupported version " +
                         std::to_string(version));
    }
    auto count = read_raw<std::uint64_t>(in, "parameter count");

    ModelFile model;
    model.intervals.lower.resize(count);
    model.intervals.upper.resize(count);
    if (!in.read(reinterpret_cast<char*>(model.intervals.lower.data()),
                 static_cast<std::streamsize>(count * sizeof(double))) ||
        !in.read(reinterpret_cast<char*>(model.intervals.upper.data()),
                 static_cast<std::streamsize>(count * sizeof(double)))) {
        throw ParseError("model: truncated endpoint data");
    }
    auto layers = read_raw<std::uint32_t>(in, "layer count");
    model.topology.layer_sizes.resize(layers);
    for (std::uint32_t i = 0; i < layers; ++i) {
        model.topology.layer_sizes[i] = read_raw<std::uint32_t>(in, "layer size");
    }
    model.topology.validate();
    if (model.topology.parameter_count() != count) {
        throw ParseError("model: stored topology needs " +
                         std::to_string(model.topology.parameter_count()) +
                         " parameters but file holds " +
                         std::to_string(count));
    }
    if (!model.intervals.invariants_hold()) {
        throw ParseError("model: endpoint data violates interval invariants");
    }
    return model;
}

}  // namespace dune
