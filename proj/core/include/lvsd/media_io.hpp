// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lvsd/grid.hpp"

namespace lvsd {

/// On-disk frame layout of a raw video file.
///  - Gray8:      one 8-bit plane per frame (depth maps), stride = W*H.
///  - Yuv420Luma: planar 8-bit 4:2:0 (texture); only the luma plane is
///                read, chroma bytes are skipped. Frame stride = W*H*3/2.
enum class PlaneLayout { Gray8, Yuv420Luma };

/// 1-D parallel camera setup: pre-multiplied focal-length × baseline per
/// reference view, scene depth range, and the blending weights of the
/// two warped views.
struct CameraRig {
  double fb_left = 0.0;
  double fb_right = 0.0;
  double z_near = 0.0;
  double z_far = 0.0;
  double u0 = 0.5;
  double u1 = 0.5;

  void validate() const;
};

/// Loads one plane of frame `frame_index` from a raw 8-bit file.
Plane load_plane(const std::string& path, int width, int height,
                 std::size_t frame_index, PlaneLayout layout);

/// Appends (or overwrites, if append=false) a plane as a raw Gray8 frame.
void save_plane(const Plane& plane, const std::string& path, bool append = false);

/// Reads and validates a JSON rig description with keys
/// fB_left, fB_right, z_near, z_far, u0, u1.
CameraRig load_rig(const std::string& path);

void save_rig(const CameraRig& rig, const std::string& path);

/// The four planes describing one reference-view pair at one instant.
struct FrameViews {
  Plane tex_left;
  Plane depth_left;
  Plane tex_right;
  Plane depth_right;

  void validate() const;
  [[nodiscard]] int width() const { return tex_left.width; }
  [[nodiscard]] int height() const { return tex_left.height; }
};

/// Original and decoded frame lists for one sequence, plus its rig.
struct SequencePair {
  std::vector<FrameViews> original;
  std::vector<FrameViews> decoded;
  CameraRig rig;

  void validate() const;
  [[nodiscard]] std::size_t frames() const { return original.size(); }
};

}  // namespace lvsd
