// SPDX-License-Identifier: Apache-2.0
#include "lvsd/dibr.hpp"

#include <cmath>
#include <vector>

#include "lvsd/parallel.hpp"

namespace lvsd {
namespace {

void warp_row(const Plane& texture, const Plane& depth, const DisparityMap& disparity,
              ViewSide side, int row, WarpedView& out) {
  const std::uint8_t* tex = texture.row(row);
  const std::uint8_t* dep = depth.row(row);
  const std::int32_t* dis = disparity.row(row);
  std::uint8_t* out_tex = out.texture.row(row);
  std::uint8_t* out_dep = out.depth.row(row);
  std::int32_t* out_src = out.source_col.row(row);
  const int width = texture.width;

  for (int col = 0; col < width; ++col) {
    const int target = col + warp_shift(side, dis[col]);
    if (target < 0 || target >= width) continue;
    if (out_src[target] != WarpedView::kNoSource && out_dep[target] >= dep[col]) continue;
    out_tex[target] = tex[col];
    out_dep[target] = dep[col];
    out_src[target] = col;
  }
}

void blend_row(const WarpedView& left, const WarpedView& right, double u0, double u1,
               int row, Plane& out) {
  const int width = out.width;
  std::uint8_t* values = out.row(row);
  std::vector<std::uint8_t> depths(static_cast<std::size_t>(width), 0);
  std::vector<std::uint8_t> hole(static_cast<std::size_t>(width), 0);
  bool any_hole = false;

  const std::uint8_t* lt = left.texture.row(row);
  const std::uint8_t* ld = left.depth.row(row);
  const std::int32_t* ls = left.source_col.row(row);
  const std::uint8_t* rt = right.texture.row(row);
  const std::uint8_t* rd = right.depth.row(row);
  const std::int32_t* rs = right.source_col.row(row);

  for (int col = 0; col < width; ++col) {
    const bool left_visible = ls[col] != WarpedView::kNoSource;
    const bool right_visible = rs[col] != WarpedView::kNoSource;
    if (left_visible && right_visible) {
      const double mixed = u0 * lt[col] + u1 * rt[col];
      values[col] = static_cast<std::uint8_t>(round_half_away(mixed));
      depths[col] = std::max(ld[col], rd[col]);
    } else if (left_visible) {
      values[col] = lt[col];
      depths[col] = ld[col];
    } else if (right_visible) {
      values[col] = rt[col];
      depths[col] = rd[col];
    } else {
      hole[col] = 1;
      any_hole = true;
    }
  }

  if (any_hole) {
    inpaint_row(values, depths.data(), hole.data(), width);
  }
}

}  // namespace

WarpedView forward_warp(const Plane& texture, const Plane& depth,
                        const DisparityMap& disparity, ViewSide side) {
  require_same_shape(texture, depth, "texture vs depth");
  require_same_shape(texture, disparity, "texture vs disparity");
  WarpedView out(texture.width, texture.height);
  for (int row = 0; row < texture.height; ++row) {
    warp_row(texture, depth, disparity, side, row, out);
  }
  return out;
}

void inpaint_row(std::uint8_t* values, const std::uint8_t* depths,
                 const std::uint8_t* hole, int width) {
  int col = 0;
  while (col < width) {
    if (!hole[col]) {
      ++col;
      continue;
    }
    int end = col;
    while (end < width && hole[end]) ++end;

    const int left_nb = col - 1;
    const int right_nb = end;
    const bool has_left = left_nb >= 0;
    const bool has_right = right_nb < width;

    std::uint8_t fill = 128;
    if (has_left && has_right) {
      fill = depths[left_nb] <= depths[right_nb] ? values[left_nb] : values[right_nb];
    } else if (has_left) {
      fill = values[left_nb];
    } else if (has_right) {
      fill = values[right_nb];
    }
    for (int c = col; c < end; ++c) values[c] = fill;
    col = end;
  }
}

Plane blend(const WarpedView& left, const WarpedView& right, double u0, double u1, int threads) {
  require_same_shape(left.texture, right.texture, "warped views");
  if (u0 < 0.0 || u1 < 0.0 || std::abs(u0 + u1 - 1.0) > 1e-12) {
    fail(ErrorKind::InvariantViolation, "blend weights must be non-negative and sum to 1");
  }
  Plane out(left.texture.width, left.texture.height);
  parallel_for_rows(out.height, threads,
                    [&](int row) { blend_row(left, right, u0, u1, row, out); });
  return out;
}

Plane synthesize(const FrameViews& views, const CameraRig& rig, int threads) {
  views.validate();
  const DisparityMap disp_left =
      depth_to_disparity(views.depth_left, rig.fb_left, rig.z_near, rig.z_far);
  const DisparityMap disp_right =
      depth_to_disparity(views.depth_right, rig.fb_right, rig.z_near, rig.z_far);

  WarpedView left(views.width(), views.height());
  WarpedView right(views.width(), views.height());
  Plane out(views.width(), views.height());
  parallel_for_rows(views.height(), threads, [&](int row) {
    warp_row(views.tex_left, views.depth_left, disp_left, ViewSide::Left, row, left);
    warp_row(views.tex_right, views.depth_right, disp_right, ViewSide::Right, row, right);
    blend_row(left, right, rig.u0, rig.u1, row, out);
  });
  return out;
}

double frame_mse(const Plane& a, const Plane& b) {
  require_same_shape(a, b, "mse operands");
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const std::int64_t diff =
        static_cast<std::int64_t>(a.samples[i]) - static_cast<std::int64_t>(b.samples[i]);
    sum += diff * diff;
  }
  return static_cast<double>(sum) / static_cast<double>(a.samples.size());
}

}  // namespace lvsd
