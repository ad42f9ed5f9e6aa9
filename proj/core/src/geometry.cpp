// SPDX-License-Identifier: Apache-2.0
#include "lvsd/geometry.hpp"

#include <cmath>
#include <cstdlib>

namespace lvsd {

DisparityMap depth_to_disparity(const Plane& depth, double fb, double z_near, double z_far) {
  if (!(fb > 0.0)) {
    fail(ErrorKind::InvariantViolation, "fB must be positive");
  }
  if (!(z_near > 0.0) || !(z_near < z_far)) {
    fail(ErrorKind::InvariantViolation, "depth range requires 0 < z_near < z_far");
  }
  const double gain = fb * (1.0 / z_near - 1.0 / z_far) / 255.0;
  const double offset = fb / z_far;

  DisparityMap out(depth.width, depth.height);
  for (std::size_t i = 0; i < depth.samples.size(); ++i) {
    out.samples[i] = static_cast<std::int32_t>(
        round_half_away(gain * static_cast<double>(depth.samples[i]) + offset));
  }
  return out;
}

DeltaMap delta_map(const DisparityMap& original, const DisparityMap& decoded) {
  require_same_shape(original, decoded, "disparity maps");
  DeltaMap out(original.width, original.height);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = decoded.samples[i] - original.samples[i];
  }
  return out;
}

LevelRange level_range(const DeltaMap& delta) {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t max_abs = 0;
  for (const auto v : delta.samples) {
    sum += v;
    sum_sq += static_cast<double>(v) * v;
    max_abs = std::max<std::int64_t>(max_abs, std::abs(static_cast<std::int64_t>(v)));
  }
  if (max_abs == 0) {
    return LevelRange{0};
  }
  const auto n = static_cast<double>(delta.samples.size());
  const double mean = sum / n;
  const double variance = std::max(0.0, sum_sq / n - mean * mean);
  const auto three_sigma = static_cast<std::int64_t>(std::ceil(3.0 * std::sqrt(variance)));
  return LevelRange{static_cast<int>(std::min(three_sigma, max_abs))};
}

}  // namespace lvsd
