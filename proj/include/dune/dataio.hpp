#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dune/matrix.hpp"
#include "dune/rng.hpp"

namespace dune {

/// Grayscale images as per-pixel reals in [0,1], one integer label each.
struct LabeledDataset {
    Matrix images;  // count x (width*height)
    std::vector<int> labels;
    std::size_t image_width = 28;
    std::size_t image_height = 28;

    std::size_t count() const { return images.rows; }
};

enum class NoiseKind {
    White,         // ns
    SaltPepper,    // density
    Gaussian,      // sigma
    StripesH,      // period, amplitude
    StripesV,      // period, amplitude
    Checkerboard,  // cell, amplitude
    Gradient,      // amplitude
    Border,        // thickness, value
};

/// One test-time corruption. Parsed from "kind:param=value,param=value",
/// e.g. "white:ns=1.5" or "stripes-h:period=4,amplitude=0.5".
struct NoiseSpec {
    NoiseKind kind = NoiseKind::White;
    double noise_to_signal = 0.0;  // white
    double density = 0.0;          // salt-pepper
    double sigma = 0.0;            // gaussian
    double amplitude = 0.0;        // stripes/checkerboard/gradient
    double value = 1.0;            // border
    int period = 2;                // stripes
    int cell = 2;                  // checkerboard
    int thickness = 0;             // border
    std::string text = "white:ns=0";  // spec string as given

    /// Throws ConfigError on unknown kind, unknown parameter or a value
    /// outside its validity range.
    static NoiseSpec parse(const std::string& text);

    /// True when applying this spec returns the image unchanged.
    bool is_identity() const;
};

/// Loads an IDX image/label file pair. Pixels are scaled from byte value v
/// to v/255; labels are checked to lie in [0,10). Throws ParseError on a
/// wrong magic number, a truncated file or an item-count mismatch between
/// the two files.
LabeledDataset load_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path);

/// Eq-style white-noise mix for a single pixel given the uniform draw u.
inline double white_noise_pixel(double x, double noise_to_signal, double u) {
    return x / (noise_to_signal + 1.0) +
           noise_to_signal / (noise_to_signal + 1.0) * u;
}

/// Per-pixel white noise x' = x/(ns+1) + ns/(ns+1)*U(0,1); one fresh draw
/// per pixel. Output stays in [0,1] for any ns >= 0.
std::vector<double> add_white_noise(std::span<const double> image,
                                    double noise_to_signal, Rng& rng);

/// Affine shift x~ = (1+2*hs)*x - hs, mapping [0,1] onto [-hs, 1+hs].
std::vector<double> magics(std::span<const double> image, double shift);

/// Exact inverse of magics: x = (x~ + hs) / (1 + 2*hs).
std::vector<double> magics_inverse(std::span<const double> image,
                                   double shift);

/// Background-pattern corruption. Deterministic given (spec, rng state);
/// output clamped to [0,1]. Dispatches white specs to add_white_noise.
std::vector<double> apply_pattern(std::span<const double> image,
                                  std::size_t width, std::size_t height,
                                  const NoiseSpec& spec, Rng& rng);

/// Noise followed by magics, in that order. The transform never precedes
/// the corruption.
std::vector<double> corrupt_then_shift(std::span<const double> image,
                                       std::size_t width, std::size_t height,
                                       const NoiseSpec& spec, double shift,
                                       Rng& rng);

/// Binary PGM (P5, maxval 255) with pixels rounded from [0,1] to bytes.
void write_pgm(std::span<const double> image, std::size_t width,
               std::size_t height, const std::filesystem::path& path);

}  // namespace dune
