#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace croploop {

// Integer-pixel rectangle algebra. All coordinates are pixels in some frame;
// a frame is either the root screenshot or a view produced by cropping and
// resizing (see FrameChain). Points use a half-open containment convention,
// region nesting uses a closed one.

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;

  bool operator==(const Point&) const = default;
};

struct ImageSize {
  std::int64_t width = 0;
  std::int64_t height = 0;

  std::int64_t pixel_count() const { return width * height; }
  bool valid() const { return width >= 1 && height >= 1; }

  bool operator==(const ImageSize&) const = default;
};

struct Region {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t w = 0;
  std::int64_t h = 0;

  std::int64_t right() const { return x + w; }
  std::int64_t bottom() const { return y + h; }
  std::int64_t area() const { return w * h; }
  Point center() const { return {x + w / 2, y + h / 2}; }
  ImageSize size() const { return {w, h}; }

  bool operator==(const Region&) const = default;
};

inline Region full_region(const ImageSize& size) {
  return {0, 0, size.width, size.height};
}

// |a∩b| / |a∪b| with exact integer areas; 0 when disjoint.
double iou(const Region& a, const Region& b);

// Half-open: r.x <= p.x < r.x+r.w and same for y.
bool contains_point(const Region& r, const Point& p);

// Closed on edges: outer may share edges with inner.
bool contains_region(const Region& outer, const Region& inner);

// Exact intersection, nullopt when empty or degenerate.
std::optional<Region> intersect(const Region& a, const Region& b);

// Intersects r with (0,0,size.w,size.h). Throws DegenerateRegionError when
// the result has no area.
Region clamp_to_frame(const Region& r, const ImageSize& size);

// Clamps a point into [0,w-1] x [0,h-1].
Point clamp_point_to_frame(const Point& p, const ImageSize& size);

// (r.w*r.h) / (size.w*size.h), r expressed in the root frame of size.
double area_ratio(const Region& r, const ImageSize& size);

// One crop-and-present step. `crop` is the rectangle selected in the parent
// view's coordinate system; `scale` maps crop-local pixels to this view's
// presented pixels (presented extent = crop extent * scale).
struct FrameHop {
  Region crop;
  double scale = 1.0;

  bool operator==(const FrameHop&) const = default;
};

// Ordered crop chain from the root screenshot to the current view. The first
// hop is expressed in root coordinates; each later hop in the presented frame
// of its predecessor. An empty chain denotes the raw root frame.
class FrameChain {
 public:
  FrameChain() = default;
  explicit FrameChain(std::vector<FrameHop> hops) : hops_(std::move(hops)) {}

  void push(const FrameHop& hop) { hops_.push_back(hop); }
  bool empty() const { return hops_.empty(); }
  std::size_t depth() const { return hops_.size(); }
  const std::vector<FrameHop>& hops() const { return hops_; }
  const FrameHop& innermost() const { return hops_.back(); }

  // Presented extent of the innermost view (root extent must be supplied by
  // the caller for an empty chain).
  ImageSize innermost_presented() const;

  // Chain concatenation: other's root frame is this chain's innermost view.
  FrameChain concat(const FrameChain& other) const;

  bool operator==(const FrameChain&) const = default;

 private:
  std::vector<FrameHop> hops_;
};

// Maps a point in the innermost presented frame of `chain` to raw root
// pixels. Composition runs in doubles; the result is rounded half away from
// zero once at the end. Throws FrameMismatchError when the local point lies
// outside the innermost frame.
Point to_root_frame(const FrameChain& chain, const Point& local);

// Region variant; corners are mapped and rounded, extents forced to >= 1 px.
Region to_root_frame(const FrameChain& chain, const Region& local);

// Inverse maps, root pixels -> innermost presented pixels.
Point to_local_frame(const FrameChain& chain, const Point& root);
Region to_local_frame(const FrameChain& chain, const Region& root);

// Root-frame footprint of the innermost view.
Region view_root_region(const FrameChain& chain, const ImageSize& root_size);

// Part of `region_root` visible in the innermost view, in presented
// coordinates. nullopt when the region does not overlap the view.
std::optional<Region> visible_in_view(const FrameChain& chain,
                                      const Region& region_root,
                                      const ImageSize& root_size);

struct ResizeResult {
  ImageSize size;
  double scale = 1.0;
};

// Proportional resize enforcing min_pixels <= w*h <= max_pixels whenever the
// input violates a bound; identity otherwise. Upscales use ceil and
// downscales floor on each axis, so the bound is met exactly while the
// aspect ratio is preserved within a pixel.
ResizeResult resize_for_pixel_budget(const ImageSize& size,
                                     std::int64_t min_pixels,
                                     std::int64_t max_pixels);

}  // namespace croploop
