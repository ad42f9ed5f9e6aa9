// SPDX-License-Identifier: Apache-2.0
#include "lvsd/media_io.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

namespace lvsd {
namespace {

std::size_t frame_stride(int width, int height, PlaneLayout layout) {
  const auto luma = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  return layout == PlaneLayout::Gray8 ? luma : luma + luma / 2;
}

double require_number(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number()) {
    fail(ErrorKind::MissingField, std::string("rig config is missing numeric field '") + key + "'");
  }
  return doc[key].get<double>();
}

}  // namespace

void CameraRig::validate() const {
  if (!(fb_left > 0.0) || !(fb_right > 0.0)) {
    fail(ErrorKind::InvariantViolation, "fB_left and fB_right must be positive");
  }
  if (!(z_near > 0.0) || !(z_near < z_far)) {
    fail(ErrorKind::InvariantViolation, "depth range requires 0 < z_near < z_far");
  }
  if (!(u0 > 0.0) || !(u0 < 1.0) || !(u1 > 0.0) || !(u1 < 1.0)) {
    fail(ErrorKind::InvariantViolation, "blend weights must lie in (0,1)");
  }
  if (std::abs(u0 + u1 - 1.0) > 1e-12) {
    fail(ErrorKind::InvariantViolation, "blend weights must sum to 1");
  }
}

Plane load_plane(const std::string& path, int width, int height,
                 std::size_t frame_index, PlaneLayout layout) {
  if (width < 1 || height < 1) {
    fail(ErrorKind::DimensionMismatch, "plane dimensions must be at least 1x1");
  }
  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec) {
    fail(ErrorKind::FileTooShort, "cannot stat '" + path + "': " + ec.message());
  }

  const std::size_t stride = frame_stride(width, height, layout);
  const std::size_t luma = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t need = (frame_index + 1) * stride;
  // The final frame only needs its luma plane to be present.
  const std::size_t need_min = frame_index * stride + luma;
  if (file_size < need_min) {
    fail(ErrorKind::FileTooShort,
         "'" + path + "' holds " + std::to_string(file_size) + " bytes, frame " +
             std::to_string(frame_index) + " needs " + std::to_string(need));
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::FileTooShort, "cannot open '" + path + "'");
  }
  in.seekg(static_cast<std::streamoff>(frame_index * stride));
  Plane plane(width, height);
  in.read(reinterpret_cast<char*>(plane.samples.data()),
          static_cast<std::streamsize>(luma));
  if (static_cast<std::size_t>(in.gcount()) != luma) {
    fail(ErrorKind::FileTooShort, "short read from '" + path + "'");
  }
  return plane;
}

void save_plane(const Plane& plane, const std::string& path, bool append) {
  std::ofstream out(path, append ? std::ios::binary | std::ios::app : std::ios::binary);
  if (!out) {
    fail(ErrorKind::ParseError, "cannot open '" + path + "' for writing");
  }
  out.write(reinterpret_cast<const char*>(plane.samples.data()),
            static_cast<std::streamsize>(plane.samples.size()));
  if (!out) {
    fail(ErrorKind::ParseError, "short write to '" + path + "'");
  }
}

CameraRig load_rig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::MissingField, "cannot open rig config '" + path + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, "rig config '" + path + "': " + e.what());
  }
  CameraRig rig;
  rig.fb_left = require_number(doc, "fB_left");
  rig.fb_right = require_number(doc, "fB_right");
  rig.z_near = require_number(doc, "z_near");
  rig.z_far = require_number(doc, "z_far");
  rig.u0 = require_number(doc, "u0");
  rig.u1 = require_number(doc, "u1");
  rig.validate();
  return rig;
}

void save_rig(const CameraRig& rig, const std::string& path) {
  nlohmann::json doc{{"fB_left", rig.fb_left}, {"fB_right", rig.fb_right},
                     {"z_near", rig.z_near},   {"z_far", rig.z_far},
                     {"u0", rig.u0},           {"u1", rig.u1}};
  std::ofstream out(path);
  if (!out) {
    fail(ErrorKind::ParseError, "cannot open '" + path + "' for writing");
  }
  out << doc.dump(2) << '\n';
}

void FrameViews::validate() const {
  require_same_shape(tex_left, depth_left, "left texture vs left depth");
  require_same_shape(tex_left, tex_right, "left texture vs right texture");
  require_same_shape(tex_left, depth_right, "left texture vs right depth");
}

void SequencePair::validate() const {
  rig.validate();
  if (original.size() != decoded.size()) {
    fail(ErrorKind::DimensionMismatch, "original and decoded frame counts differ");
  }
  if (original.empty()) {
    fail(ErrorKind::EmptyDataset, "sequence pair has no frames");
  }
  for (std::size_t i = 0; i < original.size(); ++i) {
    original[i].validate();
    decoded[i].validate();
    require_same_shape(original[i].tex_left, decoded[i].tex_left, "original vs decoded frame");
    require_same_shape(original[i].tex_left, original[0].tex_left, "frame size drift");
  }
}

}  // namespace lvsd
