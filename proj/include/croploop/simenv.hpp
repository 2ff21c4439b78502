#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "croploop/geometry.hpp"
#include "croploop/sample.hpp"

namespace croploop {

struct SimElement {
  Region bbox;
  std::string kind;  // "text" or "icon"
  std::string label;
};

// A procedurally generated GUI screen with full ground truth. Elements are
// pairwise non-overlapping so oracle scoring is never ambiguous.
struct SimScreen {
  std::uint64_t seed = 0;
  ImageSize size;
  std::vector<SimElement> elements;
  int target_index = 0;

  const SimElement& target() const {
    return elements[static_cast<std::size_t>(target_index)];
  }
};

struct SimConfig {
  int rows = 8;
  int cols = 12;
  ImageSize screen{1280, 800};
  std::int64_t min_element_side = 24;
  std::int64_t max_element_side = 96;
  double icon_ratio = 0.35;  // fraction of icon elements, rest are text

  void validate() const;
};

// Deterministic in (cfg, n, seed). Each screen is paired with a
// GroundingSample whose instruction is the target's label and whose gt_bbox
// is the target's box. Image paths follow "screens/<id>.png" relative to the
// output root; rendering happens separately.
std::vector<std::pair<SimScreen, GroundingSample>> generate_screens(
    const SimConfig& cfg, int n, std::uint64_t seed);

// Flat-fill rendering of a screen, encoded as PNG bytes. Pure: the same
// screen always encodes to identical bytes.
std::vector<unsigned char> render_screen_png(const SimScreen& screen);

}  // namespace croploop
