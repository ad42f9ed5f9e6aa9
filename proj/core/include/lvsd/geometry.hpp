// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "lvsd/grid.hpp"
#include "lvsd/media_io.hpp"

namespace lvsd {

/// Per-pixel horizontal disparity in whole pixels.
struct DisparityMap : Grid<std::int32_t> {
  using Grid::Grid;
};

/// Per-pixel disparity difference, decoded minus original.
struct DeltaMap : Grid<std::int32_t> {
  using Grid::Grid;
};

/// Closed symmetric integer interval [-r, +r] of usable delta levels.
struct LevelRange {
  int r = 0;
  [[nodiscard]] bool contains(int level) const { return level >= -r && level <= r; }
  [[nodiscard]] int clamp(int level) const {
    return level < -r ? -r : (level > r ? r : level);
  }
  friend bool operator==(const LevelRange&, const LevelRange&) = default;
};

/// Converts an 8-bit depth plane to whole-pixel disparities:
///   phi = round( fB * D/255 * (1/z_near - 1/z_far) + fB/z_far ),
/// rounding halfway cases away from zero.
DisparityMap depth_to_disparity(const Plane& depth, double fb, double z_near, double z_far);

/// Element-wise decoded - original.
DeltaMap delta_map(const DisparityMap& original, const DisparityMap& decoded);

/// Usable level bound from the three-sigma rule: sigma is the population
/// standard deviation of all delta values, r = min(ceil(3*sigma), max|delta|).
LevelRange level_range(const DeltaMap& delta);

/// Rounds halfway cases away from zero (the convention used by every
/// rounding step in this library).
inline std::int64_t round_half_away(double x) {
  return static_cast<std::int64_t>(x >= 0.0 ? std::floor(x + 0.5) : std::ceil(x - 0.5));
}

}  // namespace lvsd
