#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace normint {

/// Dense row-major 2D grid. Row index u grows downwards, column index v
/// grows to the right.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int height, int width, T fill = T{})
      : height_(height), width_(width),
        data_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill) {}

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int u, int v) {
    assert(u >= 0 && u < height_ && v >= 0 && v < width_);
    return data_[static_cast<std::size_t>(u) * width_ + v];
  }
  const T& operator()(int u, int v) const {
    assert(u >= 0 && u < height_ && v >= 0 && v < width_);
    return data_[static_cast<std::size_t>(u) * width_ + v];
  }

  bool contains(int u, int v) const noexcept {
    return u >= 0 && u < height_ && v >= 0 && v < width_;
  }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  bool same_shape(int h, int w) const noexcept { return h == height_ && w == width_; }
  template <typename U>
  bool same_shape(const Raster<U>& o) const noexcept {
    return o.height() == height_ && o.width() == width_;
  }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

}  // namespace normint
