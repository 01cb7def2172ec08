#pragma once

// Masked reconstruction domain on a regular grid.
//
// Pixels are addressed as (u, v): u is the row index (pointing downwards),
// v the column index (pointing to the right). Unknowns are enumerated
// column-major over the inside pixels, so the linear index of (u, v) grows
// fastest along u.

#include <array>
#include <cstdint>
#include <vector>

#include "normint/raster.hpp"

namespace normint {

struct Pixel {
  int u = 0;
  int v = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

class DomainMask {
 public:
  DomainMask() = default;
  DomainMask(int height, int width);  // all outside
  explicit DomainMask(Raster<std::uint8_t> inside);

  static DomainMask full(int height, int width);

  int height() const noexcept { return inside_.height(); }
  int width() const noexcept { return inside_.width(); }

  bool inside(int u, int v) const noexcept {
    return inside_.contains(u, v) && inside_(u, v) != 0;
  }
  void set(int u, int v, bool in) { inside_(u, v) = in ? 1 : 0; }

  std::size_t count() const noexcept;
  const Raster<std::uint8_t>& raster() const noexcept { return inside_; }

 private:
  Raster<std::uint8_t> inside_;
};

class IndexMap {
 public:
  static constexpr std::int32_t kOutside = -1;

  std::size_t size() const noexcept { return backward_.size(); }
  int height() const noexcept { return forward_.height(); }
  int width() const noexcept { return forward_.width(); }

  /// Linear index of (u, v), or kOutside.
  std::int32_t index(int u, int v) const noexcept {
    return forward_.contains(u, v) ? forward_(u, v) : kOutside;
  }
  Pixel pixel(std::size_t i) const { return backward_.at(i); }
  const std::vector<Pixel>& pixels() const noexcept { return backward_; }

 private:
  friend IndexMap build_index_map(const DomainMask& mask);
  Raster<std::int32_t> forward_;
  std::vector<Pixel> backward_;
};

/// Throws ConfigError("empty domain") when no pixel is inside.
IndexMap build_index_map(const DomainMask& mask);

enum class Sign : std::uint8_t { Plus = 0, Minus = 1 };

/// The four first-order difference directions.
enum class Dir : std::uint8_t { UPlus = 0, UMinus = 1, VPlus = 2, VMinus = 3 };
inline constexpr std::array<Dir, 4> kAllDirs{Dir::UPlus, Dir::UMinus, Dir::VPlus, Dir::VMinus};

constexpr Dir u_dir(Sign s) noexcept { return s == Sign::Plus ? Dir::UPlus : Dir::UMinus; }
constexpr Dir v_dir(Sign s) noexcept { return s == Sign::Plus ? Dir::VPlus : Dir::VMinus; }
constexpr int dir_index(Dir d) noexcept { return static_cast<int>(d); }

/// One of the four discretizations (U, V) of the gradient.
struct Quadrant {
  Sign u;
  Sign v;
};
inline constexpr std::array<Quadrant, 4> kQuadrants{
    Quadrant{Sign::Plus, Sign::Plus}, Quadrant{Sign::Plus, Sign::Minus},
    Quadrant{Sign::Minus, Sign::Plus}, Quadrant{Sign::Minus, Sign::Minus}};

/// Directional neighbourhoods. For each linear index i and direction d,
/// neighbor(d, i) is the index of the pixel one step along d, or kOutside.
/// Pixel i belongs to the sub-domain of direction d iff that neighbour is
/// inside the domain.
class DirectionalSubdomains {
 public:
  std::int32_t neighbor(Dir d, std::size_t i) const noexcept {
    return neighbors_[dir_index(d)][i];
  }
  bool contains(Dir d, std::size_t i) const noexcept {
    return neighbors_[dir_index(d)][i] != IndexMap::kOutside;
  }
  bool contains(Quadrant q, std::size_t i) const noexcept {
    return contains(u_dir(q.u), i) && contains(v_dir(q.v), i);
  }

  /// Sorted linear indices of the members of a directional sub-domain.
  std::vector<std::int32_t> members(Dir d) const;
  std::vector<std::int32_t> members(Quadrant q) const;
  std::size_t count(Dir d) const;

  std::size_t size() const noexcept { return neighbors_[0].size(); }

 private:
  friend DirectionalSubdomains neighbor_subdomains(const DomainMask&, const IndexMap&);
  std::array<std::vector<std::int32_t>, 4> neighbors_;
};

DirectionalSubdomains neighbor_subdomains(const DomainMask& mask, const IndexMap& index);

/// Mask, enumeration and neighbourhoods bundled; immutable once built.
struct Domain {
  DomainMask mask;
  IndexMap index;
  DirectionalSubdomains sub;

  explicit Domain(DomainMask m);

  std::size_t size() const noexcept { return index.size(); }

  /// Connected-component label (4-connectivity) per linear index, and the
  /// number of components.
  std::vector<std::int32_t> components(int* count = nullptr) const;

  /// Pixels without any inside 4-neighbour.
  std::vector<std::int32_t> isolated() const;

  /// Gather raster values at the inside pixels, in linear-index order.
  template <typename T>
  std::vector<double> gather(const Raster<T>& r) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Pixel px = index.pixels()[i];
      out[i] = static_cast<double>(r(px.u, px.v));
    }
    return out;
  }

  /// Scatter a per-index vector back to a raster; outside pixels get `fill`.
  Raster<double> scatter(const std::vector<double>& values, double fill = 0.0) const;
};

}  // namespace normint
