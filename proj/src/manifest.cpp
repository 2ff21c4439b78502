#include "croploop/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "croploop/errors.hpp"
#include "croploop/image_io.hpp"

namespace croploop {

namespace {

using nlohmann::json;

GroundingSample row_from_json(const json& j, long line_no) {
  for (const char* key : {"id", "image", "width", "height", "instruction", "bbox"}) {
    if (!j.contains(key)) {
      throw SchemaError(std::string("missing field '") + key + "'", line_no);
    }
  }
  GroundingSample s;
  s.id = j.at("id").get<std::string>();
  s.image = j.at("image").get<std::string>();
  s.size = {j.at("width").get<std::int64_t>(),
            j.at("height").get<std::int64_t>()};
  s.instruction = j.at("instruction").get<std::string>();
  const auto& b = j.at("bbox");
  if (!b.is_array() || b.size() != 4) {
    throw SchemaError("bbox must be [x,y,w,h]", line_no);
  }
  s.gt_bbox = {b.at(0).get<std::int64_t>(), b.at(1).get<std::int64_t>(),
               b.at(2).get<std::int64_t>(), b.at(3).get<std::int64_t>()};
  if (!s.size.valid()) throw SchemaError("width/height must be >= 1", line_no);
  if (s.gt_bbox.w <= 0 || s.gt_bbox.h <= 0) {
    throw SchemaError("bbox must have positive extent", line_no);
  }
  if (!contains_region(full_region(s.size), s.gt_bbox)) {
    throw SchemaError("bbox extends past the image bounds", line_no);
  }
  if (j.contains("click") && !j.at("click").is_null()) {
    const auto& c = j.at("click");
    if (!c.is_array() || c.size() != 2) {
      throw SchemaError("click must be [x,y]", line_no);
    }
    s.gt_click = Point{c.at(0).get<std::int64_t>(), c.at(1).get<std::int64_t>()};
    if (!contains_point(s.gt_bbox, *s.gt_click)) {
      throw SchemaError("click must lie inside bbox", line_no);
    }
  }
  s.domain = j.value("domain", std::string("unknown"));
  s.element_type = j.value("element_type", std::string("text"));
  if (s.element_type != "text" && s.element_type != "icon") {
    throw SchemaError("element_type must be 'text' or 'icon'", line_no);
  }
  if (j.contains("step_hint") && !j.at("step_hint").is_null()) {
    s.step_hint = j.at("step_hint").get<int>();
  }
  return s;
}

}  // namespace

std::string Manifest::resolve_image(const GroundingSample& s) const {
  const std::filesystem::path p(s.image);
  if (p.is_absolute()) return s.image;
  return (std::filesystem::path(root) / p).string();
}

Manifest load_manifest(const std::string& path, bool check_images) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest: " + path);
  Manifest m;
  m.root = std::filesystem::path(path).parent_path().string();
  if (m.root.empty()) m.root = ".";

  std::set<std::string> seen;
  std::vector<std::string> missing;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw SchemaError("invalid JSON", line_no);
    GroundingSample s = row_from_json(j, line_no);
    if (!seen.insert(s.id).second) {
      throw SchemaError("duplicate id '" + s.id + "'", line_no);
    }
    if (check_images && !image_io::file_exists(m.resolve_image(s))) {
      missing.push_back(m.resolve_image(s));
    }
    m.entries.push_back(std::move(s));
  }
  if (!missing.empty()) {
    std::string msg = "unresolved image paths:";
    for (const auto& p : missing) msg += "\n  " + p;
    throw MissingImageError(msg);
  }
  return m;
}

void save_manifest(const Manifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write manifest: " + path);
  for (const auto& s : manifest.entries) {
    json j;
    j["id"] = s.id;
    j["image"] = s.image;
    j["width"] = s.size.width;
    j["height"] = s.size.height;
    j["instruction"] = s.instruction;
    j["bbox"] = {s.gt_bbox.x, s.gt_bbox.y, s.gt_bbox.w, s.gt_bbox.h};
    if (s.gt_click) j["click"] = {s.gt_click->x, s.gt_click->y};
    j["domain"] = s.domain;
    j["element_type"] = s.element_type;
    if (s.step_hint) j["step_hint"] = *s.step_hint;
    out << j.dump() << "\n";
  }
}

}  // namespace croploop
