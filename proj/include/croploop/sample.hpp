#pragma once

#include <optional>
#include <string>

#include "croploop/geometry.hpp"

namespace croploop {

// One grounding task: a screenshot, an instruction, and the ground-truth
// element box. The unit every pipeline stage operates on.
struct GroundingSample {
  std::string id;
  std::string image;  // path, relative to the manifest root
  ImageSize size;
  std::string instruction;
  Region gt_bbox;                 // root frame
  std::optional<Point> gt_click;  // inside gt_bbox when present
  std::string domain;
  std::string element_type;  // "text" or "icon"
  std::optional<int> step_hint;
};

}  // namespace croploop
