// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>

#include "lvsd/geometry.hpp"
#include "lvsd/grid.hpp"
#include "lvsd/media_io.hpp"

namespace lvsd {

/// Which reference view a plane belongs to. With positive fB on both
/// sides, the virtual viewpoint sits between the cameras: left-view
/// sources land at column j - phi, right-view sources at j + phi.
enum class ViewSide { Left, Right };

/// Signed column shift applied when warping `side` into the virtual view.
inline int warp_shift(ViewSide side, std::int32_t disparity) {
  return side == ViewSide::Left ? -disparity : disparity;
}

/// One reference view warped into the virtual viewpoint. A pixel is a
/// hole iff source_col is kNoSource; texture/depth are meaningful only
/// where a source exists.
struct WarpedView {
  static constexpr std::int32_t kNoSource = -1;

  Plane texture;
  Plane depth;
  Grid<std::int32_t> source_col;

  WarpedView(int w, int h)
      : texture(w, h, std::uint8_t{0}),
        depth(w, h, std::uint8_t{0}),
        source_col(w, h, kNoSource) {}

  [[nodiscard]] bool is_hole(int row, int col) const {
    return source_col.at(row, col) == kNoSource;
  }
};

/// Forward-warps one reference view. Competition: when several sources
/// land on one column, the largest depth sample (nearest object) wins;
/// equal depths keep the earlier (leftmost) source. Off-frame targets
/// are discarded.
WarpedView forward_warp(const Plane& texture, const Plane& depth,
                        const DisparityMap& disparity, ViewSide side);

/// Fills the holes of one blended row in place. Each hole takes the value
/// of whichever horizontal nearest non-hole neighbour has the smaller
/// depth sample (background fill); ties prefer the left neighbour.
/// All-hole rows are filled with 128. hole[i] != 0 marks a hole.
void inpaint_row(std::uint8_t* values, const std::uint8_t* depths,
                 const std::uint8_t* hole, int width);

/// Merges two warped views: both visible -> u0*left + u1*right rounded
/// half-away-from-zero; one visible -> that sample; neither -> inpainting.
/// Weights must be non-negative and sum to 1; boundary weights (u0 = 1)
/// are accepted so single-view setups can be expressed.
Plane blend(const WarpedView& left, const WarpedView& right, double u0, double u1,
            int threads = 1);

/// Full DIBR chain for one frame: disparity conversion, both forward
/// warps, blend, inpaint. Row-parallel execution (threads > 1) is
/// bit-identical to sequential.
Plane synthesize(const FrameViews& views, const CameraRig& rig, int threads = 1);

/// Mean squared error over two equally-sized planes.
double frame_mse(const Plane& a, const Plane& b);

/// 10*log10(255^2 / mse); +infinity when mse == 0.
inline double psnr_from_mse(double mse) {
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace lvsd
