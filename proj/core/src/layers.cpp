// SPDX-License-Identifier: Apache-2.0
#include "lvsd/layers.hpp"

#include <algorithm>
#include <cmath>

namespace lvsd {
namespace {

// Signed column shift of the decoded warped set relative to the original
// warped set, for a given level. Same sign rule as warping itself.
int level_shift(ViewSide view, int level) { return warp_shift(view, level); }

void append_run_pairs(int row, int col_begin, int col_end, int shift, int width,
                      std::vector<PixelPair>& out) {
  // Original coordinate c pairs with decoded coordinate c - shift; both
  // must land inside the frame.
  for (int c = std::max(col_begin, 0); c <= std::min(col_end, width - 1); ++c) {
    const int dec = c - shift;
    if (dec < 0 || dec >= width) continue;
    out.push_back(PixelPair{row, c, dec});
  }
}

void sort_dedupe(std::vector<PixelPair>& pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

LayerSet make_layer_set(const LevelBands& bands, ViewSide view) {
  LayerSet set;
  set.view = view;
  set.width = bands.width;
  set.height = bands.height;
  set.range = bands.range;
  return set;
}

}  // namespace

std::size_t LevelBands::cardinality(int level) const {
  std::size_t n = 0;
  for (const auto& run : runs(level)) {
    n += static_cast<std::size_t>(run.col_end - run.col_begin + 1);
  }
  return n;
}

LevelBands layered_representation(const DeltaMap& delta) {
  LevelBands bands;
  bands.width = delta.width;
  bands.height = delta.height;
  bands.range = level_range(delta);
  bands.bands.assign(static_cast<std::size_t>(2 * bands.range.r + 1), {});

  for (int row = 0; row < delta.height; ++row) {
    const std::int32_t* values = delta.row(row);
    int col = 0;
    while (col < delta.width) {
      const int level = bands.range.clamp(values[col]);
      int end = col + 1;
      while (end < delta.width && bands.range.clamp(values[end]) == level) ++end;
      bands.bands[static_cast<std::size_t>(level + bands.range.r)].push_back(
          RowRun{row, col, end - 1});
      col = end;
    }
  }
  return bands;
}

LayerSet full_pipeline(const DeltaMap& delta, const DisparityMap& original,
                       const DisparityMap& decoded, ViewSide view) {
  require_same_shape(delta, original, "delta vs original disparity");
  require_same_shape(delta, decoded, "delta vs decoded disparity");

  const LevelBands bands = layered_representation(delta);
  LayerSet set = make_layer_set(bands, view);

  for (int level = -bands.range.r; level <= bands.range.r; ++level) {
    const auto& runs = bands.runs(level);
    if (runs.empty()) continue;

    Layer layer;
    layer.view = view;
    layer.level = level;
    const int shift = level_shift(view, level);

    for (const auto& run : runs) {
      const std::int32_t* phi = original.row(run.row);
      // Split into maximal sub-runs of constant original disparity; a
      // constant-disparity run warps as a rigid translation, which is
      // the regime where fusion and inverse warping are well defined.
      int begin = run.col_begin;
      while (begin <= run.col_end) {
        int end = begin;
        while (end + 1 <= run.col_end && phi[end + 1] == phi[begin]) ++end;

        // Forward warp the sub-run with its own disparity, and with the
        // effective decoded disparity (clamped level on top of phi).
        const int to_warped = warp_shift(view, phi[begin]);
        std::vector<int> warped_original;
        std::vector<int> warped_decoded;
        for (int c = begin; c <= end; ++c) {
          warped_original.push_back(c + to_warped);
          warped_decoded.push_back(c + to_warped + shift);
        }

        // Fusion: union of the two warped coordinate sets.
        std::vector<int> fused;
        std::set_union(warped_original.begin(), warped_original.end(),
                       warped_decoded.begin(), warped_decoded.end(),
                       std::back_inserter(fused));

        // Inverse warp every fused position into both reference views.
        // Positions missing a source on one side take the disparity of
        // their in-set neighbours, i.e. the sub-run's disparity.
        for (const int j : fused) {
          const int col_orig = j - to_warped;
          const int col_dec = j - to_warped - shift;
          if (col_orig < 0 || col_orig >= set.width) continue;
          if (col_dec < 0 || col_dec >= set.width) continue;
          layer.pairs.push_back(PixelPair{run.row, col_orig, col_dec});
        }
        begin = end + 1;
      }
    }

    sort_dedupe(layer.pairs);
    set.layers.push_back(std::move(layer));
  }
  return set;
}

LayerSet fast_pipeline(const DeltaMap& delta, ViewSide view) {
  const LevelBands bands = layered_representation(delta);
  LayerSet set = make_layer_set(bands, view);

  for (int level = -bands.range.r; level <= bands.range.r; ++level) {
    const auto& runs = bands.runs(level);
    if (runs.empty()) continue;

    Layer layer;
    layer.view = view;
    layer.level = level;
    const int shift = level_shift(view, level);

    // Extension process: the original set of a run [a,b] is the union of
    // the run with its copy translated by the level shift, so it grows
    // by |level| columns toward the shift direction. Runs of one level
    // can overlap after extension; emitting per extended interval and
    // deduplicating keeps set semantics.
    for (const auto& run : runs) {
      const int a = std::min(run.col_begin, run.col_begin + shift);
      const int b = std::max(run.col_end, run.col_end + shift);
      if (std::abs(shift) <= run.col_end - run.col_begin + 1) {
        append_run_pairs(run.row, a, b, shift, set.width, layer.pairs);
      } else {
        // Translated copy detaches from the base run.
        append_run_pairs(run.row, run.col_begin, run.col_end, shift, set.width, layer.pairs);
        append_run_pairs(run.row, run.col_begin + shift, run.col_end + shift, shift,
                         set.width, layer.pairs);
      }
    }

    sort_dedupe(layer.pairs);
    set.layers.push_back(std::move(layer));
  }
  return set;
}

std::vector<LayerStat> layer_stats(const LayerSet& layers, const Plane& tex_original,
                                   const Plane& tex_decoded) {
  if (tex_original.width != layers.width || tex_original.height != layers.height) {
    fail(ErrorKind::DimensionMismatch, "texture does not match layer frame size");
  }
  require_same_shape(tex_original, tex_decoded, "original vs decoded texture");

  std::vector<LayerStat> stats;
  stats.reserve(layers.layers.size());
  for (const auto& layer : layers.layers) {
    LayerStat stat;
    stat.view = layer.view;
    stat.level = layer.level;
    stat.cardinality = layer.cardinality();
    std::int64_t sum = 0;
    for (const auto& pair : layer.pairs) {
      if (pair.row < 0 || pair.row >= layers.height || pair.col_original < 0 ||
          pair.col_original >= layers.width || pair.col_decoded < 0 ||
          pair.col_decoded >= layers.width) {
        fail(ErrorKind::CoordOutOfBounds, "layer pair outside frame (pipeline bug)");
      }
      const std::int64_t diff =
          static_cast<std::int64_t>(tex_original.at(pair.row, pair.col_original)) -
          static_cast<std::int64_t>(tex_decoded.at(pair.row, pair.col_decoded));
      sum += diff * diff;
    }
    stat.value = layer.pairs.empty()
                     ? 0.0
                     : static_cast<double>(sum) / static_cast<double>(layer.pairs.size());
    stats.push_back(stat);
  }
  return stats;
}

std::size_t SvsdVector::index(ViewSide view, int level) const {
  const std::size_t base = view == ViewSide::Left ? 0 : levels_per_view();
  return base + static_cast<std::size_t>(level + r_max);
}

bool SvsdVector::all_zero() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

SvsdVector svsd(const LayerSet& left, const LayerSet& right,
                const Plane& tex_original_left, const Plane& tex_decoded_left,
                const Plane& tex_original_right, const Plane& tex_decoded_right,
                int r_max, bool with_cardinality) {
  if (r_max < 0) {
    fail(ErrorKind::InvariantViolation, "r_max must be non-negative");
  }
  SvsdVector vec;
  vec.r_max = r_max;
  vec.with_cardinality = with_cardinality;
  const std::size_t per_view = vec.levels_per_view();
  vec.values.assign(with_cardinality ? 4 * per_view : 2 * per_view, 0.0);

  const double pixels =
      static_cast<double>(left.width) * static_cast<double>(left.height);
  std::vector<double> sums(2 * per_view, 0.0);
  std::vector<double> counts(2 * per_view, 0.0);

  const auto accumulate = [&](const LayerSet& layers, const Plane& orig, const Plane& dec) {
    for (const auto& stat : layer_stats(layers, orig, dec)) {
      const int slot_level = std::clamp(stat.level, -r_max, r_max);
      const std::size_t slot = vec.index(stat.view, slot_level);
      sums[slot] += stat.value * static_cast<double>(stat.cardinality);
      counts[slot] += static_cast<double>(stat.cardinality);
    }
  };
  accumulate(left, tex_original_left, tex_decoded_left);
  accumulate(right, tex_original_right, tex_decoded_right);

  for (std::size_t slot = 0; slot < 2 * per_view; ++slot) {
    vec.values[slot] = counts[slot] > 0.0 ? sums[slot] / counts[slot] : 0.0;
    if (with_cardinality) {
      vec.values[2 * per_view + slot] = counts[slot] / pixels;
    }
  }
  return vec;
}

std::vector<std::string> svsd_feature_names(int r_max, bool with_cardinality) {
  std::vector<std::string> names;
  const auto emit = [&](const char* prefix) {
    for (const char* side : {"left", "right"}) {
      for (int level = -r_max; level <= r_max; ++level) {
        names.push_back(std::string(prefix) + "_" + side + "_" +
                        (level > 0 ? "+" : "") + std::to_string(level));
      }
    }
  };
  emit("L");
  if (with_cardinality) emit("C");
  return names;
}

}  // namespace lvsd
