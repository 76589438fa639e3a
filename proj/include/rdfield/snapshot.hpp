#ifndef RDFIELD_SNAPSHOT_HPP
#define RDFIELD_SNAPSHOT_HPP

#include <string>

#include "rdfield/lattice.hpp"

namespace rdf {

/// Snapshot file: a one-line JSON header (keys: format-version, n_sites,
/// dx, dt, t, kappa, e, mode-tag, z-index) followed by the raw arrays
/// phi, pi, A, E as little-endian 64-bit floats in site-major order.
struct SnapshotData {
  FieldState state;
  PhysicalParams params;
  int z_index = 0;
};

void write_snapshot(const std::string& path, const FieldState& state,
                    const PhysicalParams& params, int z_index);

SnapshotData read_snapshot(const std::string& path);

}  // namespace rdf

#endif
