// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lvsd/errors.hpp"

namespace lvsd {

/// Row-major W×H sample grid. Rows are the outer dimension: index
/// (row, col) maps to row*width + col.
template <typename T>
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<T> samples;

  Grid() = default;
  Grid(int w, int h, T fill = T{}) : width(w), height(h) {
    if (w < 1 || h < 1) {
      fail(ErrorKind::DimensionMismatch, "grid dimensions must be at least 1x1");
    }
    samples.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
  }
  Grid(int w, int h, std::vector<T> data) : width(w), height(h), samples(std::move(data)) {
    if (w < 1 || h < 1) {
      fail(ErrorKind::DimensionMismatch, "grid dimensions must be at least 1x1");
    }
    if (samples.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h)) {
      fail(ErrorKind::DimensionMismatch, "sample count does not equal width*height");
    }
  }

  [[nodiscard]] T at(int row, int col) const {
    return samples[static_cast<std::size_t>(row) * width + col];
  }
  T& at(int row, int col) {
    return samples[static_cast<std::size_t>(row) * width + col];
  }

  [[nodiscard]] const T* row(int r) const {
    return samples.data() + static_cast<std::size_t>(r) * width;
  }
  T* row(int r) { return samples.data() + static_cast<std::size_t>(r) * width; }

  [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
  [[nodiscard]] bool same_shape(const Grid& other) const noexcept {
    return width == other.width && height == other.height;
  }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// 8-bit texture luma or depth plane.
using Plane = Grid<std::uint8_t>;

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (a.width != b.width || a.height != b.height) {
    fail(ErrorKind::DimensionMismatch, what);
  }
}

}  // namespace lvsd
