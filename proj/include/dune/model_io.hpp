#pragma once

#include <filesystem>

#include "dune/interval_params.hpp"
#include "dune/network.hpp"

namespace dune {

/// Deserialized model file: intervals plus the topology they belong to.
struct ModelFile {
    IntervalParameterSet intervals;
    NetworkTopology topology;
};

// Flat binary layout, little-endian: magic "DUNE", version u32, n u64,
// n f64 lower endpoints, n f64 upper endpoints, layer count u32, then the
// layer sizes as u32. Plain models are stored as zero-width intervals.

void save_model(const std::filesystem::path& path,
                const IntervalParameterSet& intervals,
                const NetworkTopology& topology);

/// Throws ParseError on bad magic, unsupported version, truncation or a
/// parameter count that does not match the stored topology.
ModelFile load_model(const std::filesystem::path& path);

}  // namespace dune
