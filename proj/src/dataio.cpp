#include "dune/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>

#include "dune/errors.hpp"

namespace dune {

namespace {

std::uint32_t read_u32_be(std::ifstream& in, const std::string& what) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
        throw ParseError("idx: truncated file while reading " + what);
    }
    return (std::uint32_t{bytes[0]} << 24) | (std::uint32_t{bytes[1]} << 16) |
           (std::uint32_t{bytes[2]} << 8) | std::uint32_t{bytes[3]};
}

std::vector<std::uint8_t> read_bytes(std::ifstream& in, std::size_t count,
                                     const std::string& what) {
    std::vector<std::uint8_t> bytes(count);
    if (!in.read(reinterpret_cast<char*>(bytes.data()),
                 static_cast<std::streamsize>(count))) {
        throw ParseError("idx: truncated file while reading " + what);
    }
    return bytes;
}

// kind -> {parameter names}; used to reject typos early.
const std::map<std::string, std::set<std::string>>& spec_schema() {
    static const std::map<std::string, std::set<std::string>> schema{
        {"white", {"ns"}},
        {"salt-pepper", {"density"}},
        {"gaussian", {"sigma"}},
        {"stripes-h", {"period", "amplitude"}},
        {"stripes-v", {"period", "amplitude"}},
        {"checkerboard", {"cell", "amplitude"}},
        {"gradient", {"amplitude"}},
        {"border", {"thickness", "value"}},
    };
    return schema;
}

double parse_number(const std::string& text, const std::string& where) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("noise spec: bad number '" + text + "' in " + where);
    }
}

// Blend a mask pattern into the image: x' = (x + amplitude*mask)/(1+amplitude)
// keeps the result in [0,1] for mask values in [0,1].
template <typename MaskFn>
std::vector<double> blend_mask(std::span<const double> image,
                               std::size_t width, double amplitude,
                               MaskFn mask) {
    std::vector<double> out(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        std::size_t row = i / width;
        std::size_t col = i % width;
        out[i] = (image[i] + amplitude * mask(row, col)) / (1.0 + amplitude);
    }
    return out;
}

}  // namespace

LabeledDataset load_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path) {
    std::ifstream images_in(images_path, std::ios::binary);
    if (!images_in) {
        throw ParseError("idx: cannot open " + images_path.string());
    }
    std::ifstream labels_in(labels_path, std::ios::binary);
    if (!labels_in) {
        throw ParseError("idx: cannot open " + labels_path.string());
    }

    std::uint32_t image_magic = read_u32_be(images_in, "image magic");
    if (image_magic != 0x00000803) {
        throw ParseError("idx: bad image magic number");
    }
    std::uint32_t count = read_u32_be(images_in, "image count");
    std::uint32_t rows = read_u32_be(images_in, "row count");
    std::uint32_t cols = read_u32_be(images_in, "column count");

    std::uint32_t label_magic = read_u32_be(labels_in, "label magic");
    if (label_magic != 0x00000801) {
        throw ParseError("idx: bad label magic number");
    }
    std::uint32_t label_count = read_u32_be(labels_in, "label count");
    if (label_count != count) {
        throw ParseError("idx: item count mismatch: " + std::to_string(count) +
                         " images vs " + std::to_string(label_count) +
                         " labels");
    }

    auto pixels = read_bytes(images_in, std::size_t{count} * rows * cols,
                             "pixel data");
    auto raw_labels = read_bytes(labels_in, count, "label data");

    LabeledDataset ds;
    ds.image_width = cols;
    ds.image_height = rows;
    ds.images = Matrix(count, std::size_t{rows} * cols);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        ds.images.data[i] = static_cast<double>(pixels[i]) / 255.0;
    }
    ds.labels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (raw_labels[i] > 9) {
            throw ParseError("idx: label " + std::to_string(raw_labels[i]) +
                             " outside [0,10) at item " + std::to_string(i));
        }
        ds.labels[i] = raw_labels[i];
    }
    return ds;
}

NoiseSpec NoiseSpec::parse(const std::string& text) {
    auto colon = text.find(':');
    std::string kind_name = text.substr(0, colon);
    const auto& schema = spec_schema();
    auto it = schema.find(kind_name);
    if (it == schema.end()) {
        throw ConfigError("noise spec: unknown kind '" + kind_name + "'");
    }

    std::map<std::string, double> params;
    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            std::string item = rest.substr(
                pos, comma == std::string::npos ? std::string::npos
                                                : comma - pos);
            auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw ConfigError("noise spec: expected param=value, got '" +
                                  item + "'");
            }
            std::string key = item.substr(0, eq);
            if (!it->second.contains(key)) {
                throw ConfigError("noise spec: unknown parameter '" + key +
                                  "' for kind '" + kind_name + "'");
            }
            params[key] = parse_number(item.substr(eq + 1), text);
            pos = comma == std::string::npos ? rest.size() : comma + 1;
        }
    }

    auto get = [&](const std::string& key, double fallback) {
        auto found = params.find(key);
        return found == params.end() ? fallback : found->second;
    };
    auto get_int = [&](const std::string& key, int fallback) {
        double v = get(key, fallback);
        if (v != std::floor(v)) {
            throw ConfigError("noise spec: '" + key + "' must be an integer");
        }
        return static_cast<int>(v);
    };

    NoiseSpec spec;
    spec.text = text;
    if (kind_name == "white") {
        spec.kind = NoiseKind::White;
        spec.noise_to_signal = get("ns", 0.0);
        if (spec.noise_to_signal < 0.0) {
            throw ConfigError("noise spec: ns must be >= 0");
        }
    } else if (kind_name == "salt-pepper") {
        spec.kind = NoiseKind::SaltPepper;
        spec.density = get("density", 0.0);
        if (spec.density < 0.0 || spec.density > 1.0) {
            throw ConfigError("noise spec: density must be in [0,1]");
        }
    } else if (kind_name == "gaussian") {
        spec.kind = NoiseKind::Gaussian;
        spec.sigma = get("sigma", 0.0);
        if (spec.sigma < 0.0) throw ConfigError("noise spec: sigma must be >= 0");
    } else if (kind_name == "stripes-h" || kind_name == "stripes-v") {
        spec.kind = kind_name == "stripes-h" ? NoiseKind::StripesH
                                             : NoiseKind::StripesV;
        spec.period = get_int("period", 2);
        spec.amplitude = get("amplitude", 0.0);
        if (spec.period < 1) throw ConfigError("noise spec: period must be >= 1");
        if (spec.amplitude < 0.0) {
            throw ConfigError("noise spec: amplitude must be >= 0");
        }
    } else if (kind_name == "checkerboard") {
        spec.kind = NoiseKind::Checkerboard;
        spec.cell = get_int("cell", 2);
        spec.amplitude = get("amplitude", 0.0);
        if (spec.cell < 1) throw ConfigError("noise spec: cell must be >= 1");
        if (spec.amplitude < 0.0) {
            throw ConfigError("noise spec: amplitude must be >= 0");
        }
    } else if (kind_name == "gradient") {
        spec.kind = NoiseKind::Gradient;
        spec.amplitude = get("amplitude", 0.0);
        if (spec.amplitude < 0.0) {
            throw ConfigError("noise spec: amplitude must be >= 0");
        }
    } else {  // border
        spec.kind = NoiseKind::Border;
        spec.thickness = get_int("thickness", 0);
        spec.value = get("value", 1.0);
        if (spec.thickness < 0) {
            throw ConfigError("noise spec: thickness must be >= 0");
        }
        if (spec.value < 0.0 || spec.value > 1.0) {
            throw ConfigError("noise spec: value must be in [0,1]");
        }
    }
    return spec;
}

bool NoiseSpec::is_identity() const {
    switch (kind) {
        case NoiseKind::White: return noise_to_signal == 0.0;
        case NoiseKind::SaltPepper: return density == 0.0;
        case NoiseKind::Gaussian: return sigma == 0.0;
        case NoiseKind::StripesH:
        case NoiseKind::StripesV:
        case NoiseKind::Checkerboard:
        case NoiseKind::Gradient: return amplitude == 0.0;
        case NoiseKind::Border: return thickness == 0;
    }
    return false;
}

std::vector<double> add_white_noise(std::span<const double> image,
                                    double noise_to_signal, Rng& rng) {
    if (noise_to_signal == 0.0) return {image.begin(), image.end()};
    std::vector<double> out(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        out[i] = white_noise_pixel(image[i], noise_to_signal, rng.uniform());
    }
    return out;
}

std::vector<double> magics(std::span<const double> image, double shift) {
    std::vector<double> out(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        out[i] = (1.0 + 2.0 * shift) * image[i] - shift;
    }
    return out;
}

std::vector<double> magics_inverse(std::span<const double> image,
                                   double shift) {
    std::vector<double> out(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        out[i] = (image[i] + shift) / (1.0 + 2.0 * shift);
    }
    return out;
}

std::vector<double> apply_pattern(std::span<const double> image,
                                  std::size_t width, std::size_t height,
                                  const NoiseSpec& spec, Rng& rng) {
    if (spec.is_identity()) return {image.begin(), image.end()};
    switch (spec.kind) {
        case NoiseKind::White:
            return add_white_noise(image, spec.noise_to_signal, rng);
        case NoiseKind::SaltPepper: {
            std::vector<double> out(image.begin(), image.end());
            for (auto& v : out) {
                if (rng.uniform() < spec.density) {
                    v = rng.uniform() < 0.5 ? 0.0 : 1.0;
                }
            }
            return out;
        }
        case NoiseKind::Gaussian: {
            std::vector<double> out(image.size());
            for (std::size_t i = 0; i < image.size(); ++i) {
                out[i] = std::clamp(image[i] + spec.sigma * rng.gaussian(),
                                    0.0, 1.0);
            }
            return out;
        }
        case NoiseKind::StripesH: {
            std::size_t period = static_cast<std::size_t>(spec.period);
            return blend_mask(image, width, spec.amplitude,
                              [period](std::size_t row, std::size_t) {
                                  return row % period >= (period + 1) / 2
                                             ? 1.0
                                             : 0.0;
                              });
        }
        case NoiseKind::StripesV: {
            std::size_t period = static_cast<std::size_t>(spec.period);
            return blend_mask(image, width, spec.amplitude,
                              [period](std::size_t, std::size_t col) {
                                  return col % period >= (period + 1) / 2
                                             ? 1.0
                                             : 0.0;
                              });
        }
        case NoiseKind::Checkerboard: {
            std::size_t cell = static_cast<std::size_t>(spec.cell);
            return blend_mask(image, width, spec.amplitude,
                              [cell](std::size_t row, std::size_t col) {
                                  return (row / cell + col / cell) % 2 == 1
                                             ? 1.0
                                             : 0.0;
                              });
        }
        case NoiseKind::Gradient: {
            double denom = width > 1 ? static_cast<double>(width - 1) : 1.0;
            return blend_mask(image, width, spec.amplitude,
                              [denom](std::size_t, std::size_t col) {
                                  return static_cast<double>(col) / denom;
                              });
        }
        case NoiseKind::Border: {
            std::vector<double> out(image.begin(), image.end());
            std::size_t t = static_cast<std::size_t>(spec.thickness);
            for (std::size_t row = 0; row < height; ++row) {
                for (std::size_t col = 0; col < width; ++col) {
                    bool edge = row < t || col < t || row + t >= height ||
                                col + t >= width;
                    if (edge) out[row * width + col] = spec.value;
                }
            }
            return out;
        }
    }
    throw ConfigError("noise spec: unhandled kind");
}

std::vector<double> corrupt_then_shift(std::span<const double> image,
                                       std::size_t width, std::size_t height,
                                       const NoiseSpec& spec, double shift,
                                       Rng& rng) {
    auto noisy = apply_pattern(image, width, height, spec, rng);
    return magics(noisy, shift);
}

void write_pgm(std::span<const double> image, std::size_t width,
               std::size_t height, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ParseError("pgm: cannot open " + path.string() + " for writing");
    }
    out << "P5\n" << width << " " << height << "\n255\n";
    for (double v : image) {
        double scaled = std::round(std::clamp(v, 0.0, 1.0) * 255.0);
        out.put(static_cast<char>(static_cast<unsigned char>(scaled)));
    }
    if (!out) throw ParseError("pgm: write failed for " + path.string());
}

}  // namespace dune
