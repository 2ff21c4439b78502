#include "croploop/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "croploop/errors.hpp"

namespace croploop {

namespace {

std::int64_t round_half_away(double v) { return std::llround(v); }

struct DPoint {
  double x;
  double y;
};

// Innermost presented point -> raw root point, in doubles.
DPoint map_to_root(const FrameChain& chain, DPoint p) {
  const auto& hops = chain.hops();
  for (auto it = hops.rbegin(); it != hops.rend(); ++it) {
    p.x = p.x / it->scale + static_cast<double>(it->crop.x);
    p.y = p.y / it->scale + static_cast<double>(it->crop.y);
  }
  return p;
}

DPoint map_to_local(const FrameChain& chain, DPoint p) {
  for (const auto& hop : chain.hops()) {
    p.x = (p.x - static_cast<double>(hop.crop.x)) * hop.scale;
    p.y = (p.y - static_cast<double>(hop.crop.y)) * hop.scale;
  }
  return p;
}

}  // namespace

double iou(const Region& a, const Region& b) {
  const auto inter = intersect(a, b);
  if (!inter) return 0.0;
  const std::int64_t inter_area = inter->area();
  const std::int64_t union_area = a.area() + b.area() - inter_area;
  return static_cast<double>(inter_area) / static_cast<double>(union_area);
}

bool contains_point(const Region& r, const Point& p) {
  return p.x >= r.x && p.x < r.right() && p.y >= r.y && p.y < r.bottom();
}

bool contains_region(const Region& outer, const Region& inner) {
  return inner.x >= outer.x && inner.right() <= outer.right() &&
         inner.y >= outer.y && inner.bottom() <= outer.bottom();
}

std::optional<Region> intersect(const Region& a, const Region& b) {
  const std::int64_t x1 = std::max(a.x, b.x);
  const std::int64_t y1 = std::max(a.y, b.y);
  const std::int64_t x2 = std::min(a.right(), b.right());
  const std::int64_t y2 = std::min(a.bottom(), b.bottom());
  if (x2 <= x1 || y2 <= y1) return std::nullopt;
  return Region{x1, y1, x2 - x1, y2 - y1};
}

Region clamp_to_frame(const Region& r, const ImageSize& size) {
  const auto inter = intersect(r, full_region(size));
  if (!inter) {
    throw DegenerateRegionError(
        "region (" + std::to_string(r.x) + "," + std::to_string(r.y) + "," +
        std::to_string(r.w) + "," + std::to_string(r.h) +
        ") has no area inside " + std::to_string(size.width) + "x" +
        std::to_string(size.height));
  }
  return *inter;
}

Point clamp_point_to_frame(const Point& p, const ImageSize& size) {
  return {std::clamp<std::int64_t>(p.x, 0, size.width - 1),
          std::clamp<std::int64_t>(p.y, 0, size.height - 1)};
}

double area_ratio(const Region& r, const ImageSize& size) {
  return static_cast<double>(r.area()) / static_cast<double>(size.pixel_count());
}

ImageSize FrameChain::innermost_presented() const {
  const FrameHop& hop = hops_.back();
  return {round_half_away(static_cast<double>(hop.crop.w) * hop.scale),
          round_half_away(static_cast<double>(hop.crop.h) * hop.scale)};
}

FrameChain FrameChain::concat(const FrameChain& other) const {
  std::vector<FrameHop> hops = hops_;
  hops.insert(hops.end(), other.hops().begin(), other.hops().end());
  return FrameChain(std::move(hops));
}

Point to_root_frame(const FrameChain& chain, const Point& local) {
  if (!chain.empty()) {
    const ImageSize bounds = chain.innermost_presented();
    if (local.x < 0 || local.y < 0 || local.x > bounds.width ||
        local.y > bounds.height) {
      throw FrameMismatchError("local point (" + std::to_string(local.x) +
                               "," + std::to_string(local.y) +
                               ") outside innermost frame " +
                               std::to_string(bounds.width) + "x" +
                               std::to_string(bounds.height));
    }
  }
  const DPoint p = map_to_root(
      chain, {static_cast<double>(local.x), static_cast<double>(local.y)});
  return {round_half_away(p.x), round_half_away(p.y)};
}

Region to_root_frame(const FrameChain& chain, const Region& local) {
  const DPoint tl = map_to_root(
      chain, {static_cast<double>(local.x), static_cast<double>(local.y)});
  const DPoint br =
      map_to_root(chain, {static_cast<double>(local.right()),
                          static_cast<double>(local.bottom())});
  const std::int64_t x1 = round_half_away(tl.x);
  const std::int64_t y1 = round_half_away(tl.y);
  return {x1, y1, std::max<std::int64_t>(1, round_half_away(br.x) - x1),
          std::max<std::int64_t>(1, round_half_away(br.y) - y1)};
}

Point to_local_frame(const FrameChain& chain, const Point& root) {
  const DPoint p = map_to_local(
      chain, {static_cast<double>(root.x), static_cast<double>(root.y)});
  return {round_half_away(p.x), round_half_away(p.y)};
}

Region to_local_frame(const FrameChain& chain, const Region& root) {
  const DPoint tl = map_to_local(
      chain, {static_cast<double>(root.x), static_cast<double>(root.y)});
  const DPoint br = map_to_local(chain, {static_cast<double>(root.right()),
                                         static_cast<double>(root.bottom())});
  const std::int64_t x1 = round_half_away(tl.x);
  const std::int64_t y1 = round_half_away(tl.y);
  return {x1, y1, std::max<std::int64_t>(1, round_half_away(br.x) - x1),
          std::max<std::int64_t>(1, round_half_away(br.y) - y1)};
}

Region view_root_region(const FrameChain& chain, const ImageSize& root_size) {
  if (chain.empty()) return full_region(root_size);
  const ImageSize presented = chain.innermost_presented();
  Region root = to_root_frame(chain, full_region(presented));
  return clamp_to_frame(root, root_size);
}

std::optional<Region> visible_in_view(const FrameChain& chain,
                                      const Region& region_root,
                                      const ImageSize& root_size) {
  const Region view_root = view_root_region(chain, root_size);
  const auto visible_root = intersect(view_root, region_root);
  if (!visible_root) return std::nullopt;
  if (chain.empty()) return visible_root;
  Region local = to_local_frame(chain, *visible_root);
  // Projection rounding may poke a pixel outside the presented extent.
  const ImageSize presented = chain.innermost_presented();
  local.x = std::clamp<std::int64_t>(local.x, 0, presented.width - 1);
  local.y = std::clamp<std::int64_t>(local.y, 0, presented.height - 1);
  local.w = std::clamp<std::int64_t>(local.w, 1, presented.width - local.x);
  local.h = std::clamp<std::int64_t>(local.h, 1, presented.height - local.y);
  return local;
}

ResizeResult resize_for_pixel_budget(const ImageSize& size,
                                     std::int64_t min_pixels,
                                     std::int64_t max_pixels) {
  if (min_pixels <= 0 || min_pixels > max_pixels) {
    throw ConfigError("pixel budget requires 0 < min_pixels <= max_pixels");
  }
  const std::int64_t pixels = size.pixel_count();
  if (pixels < min_pixels) {
    const double scale = std::sqrt(static_cast<double>(min_pixels) /
                                   static_cast<double>(pixels));
    ImageSize out{
        static_cast<std::int64_t>(
            std::ceil(static_cast<double>(size.width) * scale - 1e-9)),
        static_cast<std::int64_t>(
            std::ceil(static_cast<double>(size.height) * scale - 1e-9))};
    while (out.pixel_count() < min_pixels) {
      (out.width <= out.height ? out.width : out.height) += 1;
    }
    return {out, scale};
  }
  if (pixels > max_pixels) {
    const double scale = std::sqrt(static_cast<double>(max_pixels) /
                                   static_cast<double>(pixels));
    ImageSize out{
        std::max<std::int64_t>(
            1, static_cast<std::int64_t>(
                   std::floor(static_cast<double>(size.width) * scale + 1e-9))),
        std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::floor(
                   static_cast<double>(size.height) * scale + 1e-9)))};
    while (out.pixel_count() > max_pixels && (out.width > 1 || out.height > 1)) {
      (out.width >= out.height ? out.width : out.height) -= 1;
    }
    return {out, scale};
  }
  return {size, 1.0};
}

}  // namespace croploop
