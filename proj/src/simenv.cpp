#include "croploop/simenv.hpp"

#include <algorithm>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "croploop/errors.hpp"
#include "croploop/rng.hpp"

namespace croploop {

namespace {

// Deterministic label pool; labels are made unique per screen by suffixing
// the element index.
const char* kWords[] = {"Save",   "Open",    "Close",  "Export", "Import",
                        "Undo",   "Redo",    "Print",  "Share",  "Delete",
                        "Rename", "Search",  "Filter", "Sort",   "Zoom",
                        "Help",   "Settings", "Back",  "Next",   "Apply"};

std::string element_label(rng::Rng& rng, int index) {
  const auto word =
      kWords[rng.uniform_int(0, static_cast<std::int64_t>(std::size(kWords)) - 1)];
  return std::string(word) + "-" + std::to_string(index);
}

cv::Scalar kind_color(const std::string& kind, int index) {
  // Muted, index-dependent fills so neighbouring elements differ.
  const int base = 60 + (index * 37) % 120;
  if (kind == "icon") return {static_cast<double>(base), 120, 200};
  return {200, static_cast<double>(base), 90};
}

}  // namespace

void SimConfig::validate() const {
  if (rows < 1 || cols < 1 || rows * cols < 2) {
    throw ConfigError("sim grid must hold at least a target and a distractor");
  }
  if (!screen.valid()) throw ConfigError("sim screen size must be positive");
  if (min_element_side < 4 || max_element_side < min_element_side) {
    throw ConfigError("sim element side range invalid (min >= 4 required)");
  }
  const std::int64_t cell_w = screen.width / cols;
  const std::int64_t cell_h = screen.height / rows;
  if (cell_w <= min_element_side + 2 || cell_h <= min_element_side + 2) {
    throw ConfigError("sim grid cells too small for the element size range");
  }
}

std::vector<std::pair<SimScreen, GroundingSample>> generate_screens(
    const SimConfig& cfg, int n, std::uint64_t seed) {
  cfg.validate();
  std::vector<std::pair<SimScreen, GroundingSample>> out;
  out.reserve(static_cast<std::size_t>(n));
  const std::int64_t cell_w = cfg.screen.width / cfg.cols;
  const std::int64_t cell_h = cfg.screen.height / cfg.rows;

  for (int i = 0; i < n; ++i) {
    const std::uint64_t screen_seed =
        rng::derive(seed, "simenv", std::to_string(i));
    rng::Rng rng(screen_seed);
    SimScreen screen;
    screen.seed = screen_seed;
    screen.size = cfg.screen;

    // One element per grid cell, jittered inside the cell; disjoint cells
    // guarantee non-overlap.
    int index = 0;
    for (int r = 0; r < cfg.rows; ++r) {
      for (int c = 0; c < cfg.cols; ++c) {
        const std::int64_t max_w =
            std::min(cfg.max_element_side, cell_w - 2);
        const std::int64_t max_h =
            std::min(cfg.max_element_side, cell_h - 2);
        const std::int64_t w = rng.uniform_int(
            std::min(cfg.min_element_side, max_w), max_w);
        const std::int64_t h = rng.uniform_int(
            std::min(cfg.min_element_side, max_h), max_h);
        const std::int64_t x =
            c * cell_w + rng.uniform_int(1, std::max<std::int64_t>(1, cell_w - w - 1));
        const std::int64_t y =
            r * cell_h + rng.uniform_int(1, std::max<std::int64_t>(1, cell_h - h - 1));
        SimElement el;
        el.bbox = {x, y, w, h};
        el.kind = rng.bernoulli(cfg.icon_ratio) ? "icon" : "text";
        el.label = element_label(rng, index);
        screen.elements.push_back(std::move(el));
        ++index;
      }
    }
    screen.target_index =
        static_cast<int>(rng.uniform_int(0, index - 1));

    GroundingSample sample;
    sample.id = "sim-" + std::to_string(seed) + "-" + std::to_string(i);
    sample.image = "screens/" + sample.id + ".png";
    sample.size = screen.size;
    sample.instruction = screen.target().label;
    sample.gt_bbox = screen.target().bbox;
    sample.gt_click = screen.target().bbox.center();
    sample.domain = "sim";
    sample.element_type = screen.target().kind;
    out.emplace_back(std::move(screen), std::move(sample));
  }
  return out;
}

std::vector<unsigned char> render_screen_png(const SimScreen& screen) {
  cv::Mat img(static_cast<int>(screen.size.height),
              static_cast<int>(screen.size.width), CV_8UC3,
              cv::Scalar(245, 243, 240));
  int index = 0;
  for (const auto& el : screen.elements) {
    const cv::Rect rect(static_cast<int>(el.bbox.x),
                        static_cast<int>(el.bbox.y),
                        static_cast<int>(el.bbox.w),
                        static_cast<int>(el.bbox.h));
    cv::rectangle(img, rect, kind_color(el.kind, index), cv::FILLED);
    cv::rectangle(img, rect, cv::Scalar(80, 80, 80), 1);
    if (el.kind == "text") {
      const double font_scale =
          std::clamp(static_cast<double>(el.bbox.h) / 40.0, 0.3, 0.8);
      cv::putText(img, el.label,
                  {rect.x + 2, rect.y + rect.height / 2 + 4},
                  cv::FONT_HERSHEY_SIMPLEX, font_scale,
                  cv::Scalar(20, 20, 20), 1, cv::LINE_8);
    } else {
      // Glyph placeholder: a circle over a tick.
      const cv::Point c(rect.x + rect.width / 2, rect.y + rect.height / 2);
      const int rad = std::max(2, std::min(rect.width, rect.height) / 4);
      cv::circle(img, c, rad, cv::Scalar(30, 30, 30), 1, cv::LINE_8);
      cv::line(img, {c.x - rad / 2, c.y}, {c.x, c.y + rad / 2},
               cv::Scalar(30, 30, 30), 1, cv::LINE_8);
    }
    ++index;
  }
  std::vector<unsigned char> buf;
  cv::imencode(".png", img, buf,
               {cv::IMWRITE_PNG_COMPRESSION, 6});
  return buf;
}

}  // namespace croploop
