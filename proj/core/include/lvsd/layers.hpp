// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "lvsd/dibr.hpp"
#include "lvsd/geometry.hpp"
#include "lvsd/grid.hpp"

namespace lvsd {

/// Maximal run of consecutive columns of one row, inclusive bounds.
struct RowRun {
  int row = 0;
  int col_begin = 0;
  int col_end = 0;
  friend bool operator==(const RowRun&, const RowRun&) = default;
};

/// The pre-extension layered representation: every pixel of the frame
/// assigned to exactly one delta level (values outside the three-sigma
/// range are clamped into the nearest bound). Base sets partition the
/// frame: disjoint, and cardinalities sum to W*H.
struct LevelBands {
  int width = 0;
  int height = 0;
  LevelRange range;
  std::vector<std::vector<RowRun>> bands;  // bands[level + range.r]

  [[nodiscard]] const std::vector<RowRun>& runs(int level) const {
    return bands[static_cast<std::size_t>(level + range.r)];
  }
  [[nodiscard]] std::size_t cardinality(int level) const;
};

LevelBands layered_representation(const DeltaMap& delta);

/// One matched coordinate pair: (row, col_original) in the original
/// reference view and (row, col_decoded) in the decoded reference view.
struct PixelPair {
  std::int32_t row = 0;
  std::int32_t col_original = 0;
  std::int32_t col_decoded = 0;
  friend auto operator<=>(const PixelPair&, const PixelPair&) = default;
};

/// All pixels of one view sharing one level of disparity shift, after
/// the extension construction. Pairs are sorted by (row, col_original);
/// the original and decoded coordinate sets always have equal size.
struct Layer {
  ViewSide view = ViewSide::Left;
  int level = 0;
  std::vector<PixelPair> pairs;

  [[nodiscard]] std::size_t cardinality() const { return pairs.size(); }
  friend bool operator==(const Layer&, const Layer&) = default;
};

/// The per-view result of either pipeline: one layer per level present
/// in the frame, ascending by level.
struct LayerSet {
  ViewSide view = ViewSide::Left;
  int width = 0;
  int height = 0;
  LevelRange range;
  std::vector<Layer> layers;

  friend bool operator==(const LayerSet&, const LayerSet&) = default;
};

/// Reference pipeline: per level, forward-warp the base set with the
/// original and (effective) decoded disparities, fuse the two warped
/// coordinate sets with a union, and warp the fused set back into both
/// reference views. Warped positions without a source on one side adopt
/// the disparity of their neighbouring in-set pixel. Runs at the
/// granularity of maximal constant-(level, disparity) column runs,
/// where the construction is exact.
LayerSet full_pipeline(const DeltaMap& delta, const DisparityMap& original,
                       const DisparityMap& decoded, ViewSide view);

/// Optimized pipeline: replaces warp-union-inverse-warp with a direct
/// extension of each base run by |level| columns. The original set
/// extends opposite to the warp direction of the shift, the decoded set
/// mirrors it, and pairs are offset by the level. Produces LayerSets
/// identical to full_pipeline on every input.
LayerSet fast_pipeline(const DeltaMap& delta, ViewSide view);

/// Per-layer mean squared texture difference and cardinality.
struct LayerStat {
  ViewSide view = ViewSide::Left;
  int level = 0;
  double value = 0.0;       // L_{k,level}
  std::size_t cardinality = 0;
};

std::vector<LayerStat> layer_stats(const LayerSet& layers, const Plane& tex_original,
                                   const Plane& tex_decoded);

/// Fixed-length feature vector of S-VSD values, ordered left view
/// level -r_max..+r_max then right view, optionally followed by the
/// normalized cardinalities in the same order.
struct SvsdVector {
  int r_max = 0;
  bool with_cardinality = false;
  std::vector<double> values;

  [[nodiscard]] std::size_t levels_per_view() const {
    return static_cast<std::size_t>(2 * r_max + 1);
  }
  [[nodiscard]] std::size_t index(ViewSide view, int level) const;
  [[nodiscard]] bool all_zero() const;
};

/// Assembles the feature vector from both views' layers. Levels absent
/// from the frame hold 0; layers beyond +-r_max are folded into the
/// boundary slot by cardinality-weighted merge.
SvsdVector svsd(const LayerSet& left, const LayerSet& right,
                const Plane& tex_original_left, const Plane& tex_decoded_left,
                const Plane& tex_original_right, const Plane& tex_decoded_right,
                int r_max, bool with_cardinality = false);

/// Column names matching SvsdVector order, e.g. L_left_-6 ... C_right_+6.
std::vector<std::string> svsd_feature_names(int r_max, bool with_cardinality);

}  // namespace lvsd
