#pragma once

// Small procedurally generated classification datasets for tests that need
// a learnable problem without any external files.

#include <algorithm>
#include <cstdint>

#include "dune/dataio.hpp"
#include "dune/rng.hpp"

namespace dune::testing {

/// Images whose class is encoded as a bright vertical band at a
/// class-dependent position, plus uniform jitter. Linearly separable enough
/// that a small MLP reaches high accuracy in a few epochs.
inline LabeledDataset make_band_dataset(std::size_t count, std::size_t width,
                                        std::size_t height, int classes,
                                        std::uint64_t seed) {
    LabeledDataset ds;
    ds.image_width = width;
    ds.image_height = height;
    ds.images = Matrix(count, width * height);
    ds.labels.resize(count);

    Rng rng(seed);
    std::size_t band = std::max<std::size_t>(1, width / classes);
    for (std::size_t i = 0; i < count; ++i) {
        int label = static_cast<int>(rng.bounded(classes));
        ds.labels[i] = label;
        for (std::size_t row = 0; row < height; ++row) {
            for (std::size_t col = 0; col < width; ++col) {
                bool inside = col / band == static_cast<std::size_t>(label);
                double base = inside ? 0.75 : 0.1;
                double jitter = rng.uniform(-0.08, 0.08);
                ds.images.at(i, row * width + col) =
                    std::clamp(base + jitter, 0.0, 1.0);
            }
        }
    }
    return ds;
}

}  // namespace dune::testing
