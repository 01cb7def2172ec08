#include "normint/domain.hpp"

#include <algorithm>
#include <stdexcept>

#include "normint/errors.hpp"

namespace normint {

DomainMask::DomainMask(int height, int width) : inside_(height, width, 0) {
  if (height <= 0 || width <= 0) throw ConfigError("mask dimensions must be positive");
}

DomainMask::DomainMask(Raster<std::uint8_t> inside) : inside_(std::move(inside)) {
  if (inside_.height() <= 0 || inside_.width() <= 0)
    throw ConfigError("mask dimensions must be positive");
  for (auto& x : inside_.data()) x = x != 0 ? 1 : 0;
}

DomainMask DomainMask::full(int height, int width) {
  DomainMask m(height, width);
  std::fill(m.inside_.data().begin(), m.inside_.data().end(), std::uint8_t{1});
  return m;
}

std::size_t DomainMask::count() const noexcept {
  return static_cast<std::size_t>(
      std::count(inside_.data().begin(), inside_.data().end(), std::uint8_t{1}));
}

IndexMap build_index_map(const DomainMask& mask) {
  IndexMap map;
  map.forward_ = Raster<std::int32_t>(mask.height(), mask.width(), IndexMap::kOutside);
  map.backward_.reserve(mask.count());
  for (int v = 0; v < mask.width(); ++v) {
    for (int u = 0; u < mask.height(); ++u) {
      if (!mask.inside(u, v)) continue;
      map.forward_(u, v) = static_cast<std::int32_t>(map.backward_.size());
      map.backward_.push_back({u, v});
    }
  }
  if (map.backward_.empty()) throw ConfigError("empty domain");
  return map;
}

DirectionalSubdomains neighbor_subdomains(const DomainMask& mask, const IndexMap& index) {
  (void)mask;
  DirectionalSubdomains sub;
  const std::size_t n = index.size();
  for (auto& nb : sub.neighbors_) nb.assign(n, IndexMap::kOutside);
  for (std::size_t i = 0; i < n; ++i) {
    const Pixel px = index.pixel(i);
    sub.neighbors_[dir_index(Dir::UPlus)][i] = index.index(px.u + 1, px.v);
    sub.neighbors_[dir_index(Dir::UMinus)][i] = index.index(px.u - 1, px.v);
    sub.neighbors_[dir_index(Dir::VPlus)][i] = index.index(px.u, px.v + 1);
    sub.neighbors_[dir_index(Dir::VMinus)][i] = index.index(px.u, px.v - 1);
  }
  return sub;
}

std::vector<std::int32_t> DirectionalSubdomains::members(Dir d) const {
  std::vector<std::int32_t> out;
  const auto& nb = neighbors_[dir_index(d)];
  for (std::size_t i = 0; i < nb.size(); ++i)
    if (nb[i] != IndexMap::kOutside) out.push_back(static_cast<std::int32_t>(i));
  return out;
}

std::vector<std::int32_t> DirectionalSubdomains::members(Quadrant q) const {
  std::vector<std::int32_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (contains(q, i)) out.push_back(static_cast<std::int32_t>(i));
  return out;
}

std::size_t DirectionalSubdomains::count(Dir d) const {
  const auto& nb = neighbors_[dir_index(d)];
  return static_cast<std::size_t>(
      std::count_if(nb.begin(), nb.end(), [](std::int32_t j) { return j != IndexMap::kOutside; }));
}

Domain::Domain(DomainMask m)
    : mask(std::move(m)), index(build_index_map(mask)), sub(neighbor_subdomains(mask, index)) {}

std::vector<std::int32_t> Domain::components(int* count) const {
  const std::size_t n = size();
  std::vector<std::int32_t> label(n, -1);
  std::vector<std::int32_t> stack;
  int next = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (label[seed] >= 0) continue;
    label[seed] = next;
    stack.push_back(static_cast<std::int32_t>(seed));
    while (!stack.empty()) {
      const std::int32_t i = stack.back();
      stack.pop_back();
      for (Dir d : kAllDirs) {
        const std::int32_t j = sub.neighbor(d, static_cast<std::size_t>(i));
        if (j != IndexMap::kOutside && label[j] < 0) {
          label[j] = next;
          stack.push_back(j);
        }
      }
    }
    ++next;
  }
  if (count != nullptr) *count = next;
  return label;
}

std::vector<std::int32_t> Domain::isolated() const {
  std::vector<std::int32_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    bool any = false;
    for (Dir d : kAllDirs) any = any || sub.contains(d, i);
    if (!any) out.push_back(static_cast<std::int32_t>(i));
  }
  return out;
}

Raster<double> Domain::scatter(const std::vector<double>& values, double fill) const {
  if (values.size() != size()) throw std::invalid_argument("scatter: size mismatch");
  Raster<double> r(mask.height(), mask.width(), fill);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Pixel px = index.pixels()[i];
    r(px.u, px.v) = values[i];
  }
  return r;
}

}  // namespace normint
