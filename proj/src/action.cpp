#include "croploop/action.hpp"

#include <optional>
#include <regex>
#include <string>

#include <json.hpp>

#include "croploop/errors.hpp"

namespace croploop {

namespace {

using nlohmann::json;

struct Candidate {
  std::size_t pos = 0;
  Action action;
};

const std::regex& call_pattern() {
  static const std::regex re(
      R"((Crop|Click)\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*(?:,\s*(-?\d+)\s*,\s*(-?\d+)\s*)?\))",
      std::regex::icase);
  return re;
}

void scan_calls(std::string_view text, std::vector<Candidate>& out) {
  const char* begin = text.data();
  std::cregex_iterator it(begin, begin + text.size(), call_pattern());
  for (std::cregex_iterator end; it != end; ++it) {
    const std::cmatch& m = *it;
    const std::string name = m[1].str();
    const bool is_crop = (name[0] == 'C' || name[0] == 'c') &&
                         (name[1] == 'r' || name[1] == 'R');
    const bool has_extent = m[4].matched && m[5].matched;
    if (is_crop != has_extent) continue;  // Crop needs 4 args, Click 2
    Candidate c;
    c.pos = static_cast<std::size_t>(m.position(0));
    if (is_crop) {
      c.action = Action::make_crop({std::stoll(m[2].str()),
                                    std::stoll(m[3].str()),
                                    std::stoll(m[4].str()),
                                    std::stoll(m[5].str())});
    } else {
      c.action = Action::make_click(
          {std::stoll(m[2].str()), std::stoll(m[3].str())});
    }
    out.push_back(std::move(c));
  }
}

std::optional<Action> action_from_json(const json& j) {
  if (!j.is_object() || !j.contains("action")) return std::nullopt;
  const auto& act = j.at("action");
  if (!act.is_string()) return std::nullopt;
  const std::string name = act.get<std::string>();
  if (name == "crop" && j.contains("box") && j.at("box").is_array() &&
      j.at("box").size() == 4) {
    const auto& b = j.at("box");
    for (const auto& v : b)
      if (!v.is_number_integer()) return std::nullopt;
    const std::int64_t x1 = b[0].get<std::int64_t>();
    const std::int64_t y1 = b[1].get<std::int64_t>();
    const std::int64_t x2 = b[2].get<std::int64_t>();
    const std::int64_t y2 = b[3].get<std::int64_t>();
    return Action::make_crop({x1, y1, x2 - x1, y2 - y1});
  }
  if (name == "click" && j.contains("point") && j.at("point").is_array() &&
      j.at("point").size() == 2) {
    const auto& p = j.at("point");
    for (const auto& v : p)
      if (!v.is_number_integer()) return std::nullopt;
    return Action::make_click(
        {p[0].get<std::int64_t>(), p[1].get<std::int64_t>()});
  }
  return std::nullopt;
}

// Scans balanced {...} substrings and keeps the ones that parse into an
// action object. CoT text may contain braces; only valid JSON counts.
void scan_json(std::string_view text, std::vector<Candidate>& out) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') continue;
    int depth = 0;
    bool in_string = false;
    for (std::size_t j = i; j < text.size(); ++j) {
      const char c = text[j];
      if (in_string) {
        if (c == '\\') {
          ++j;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        --depth;
        if (depth == 0) {
          const auto doc = json::parse(text.substr(i, j - i + 1), nullptr,
                                       /*allow_exceptions=*/false);
          if (!doc.is_discarded()) {
            if (auto a = action_from_json(doc)) {
              out.push_back({i, *a});
            }
          }
          break;
        }
      }
    }
  }
}

}  // namespace

std::string to_string(ActionKind kind) {
  return kind == ActionKind::Crop ? "crop" : "click";
}

ActionKind action_kind_from_string(std::string_view s) {
  if (s == "crop") return ActionKind::Crop;
  if (s == "click") return ActionKind::Click;
  throw ParseFailureError("unknown action kind: " + std::string(s));
}

std::string format_action(const Action& a) {
  if (a.is_crop()) {
    const Region& r = a.crop();
    return "Crop(" + std::to_string(r.x) + ", " + std::to_string(r.y) + ", " +
           std::to_string(r.w) + ", " + std::to_string(r.h) + ")";
  }
  const Point& p = a.click();
  return "Click(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

Action parse_action(std::string_view raw_text, ActionKind expected,
                    const ImageSize& view, bool allow_early_click) {
  std::vector<Candidate> candidates;
  scan_calls(raw_text, candidates);
  scan_json(raw_text, candidates);
  if (candidates.empty()) {
    throw ParseFailureError("no action expression in policy output");
  }
  const Candidate* last = &candidates.front();
  for (const auto& c : candidates) {
    if (c.pos >= last->pos) last = &c;
  }
  const Action& a = last->action;
  Action clamped = a;
  if (a.is_crop()) {
    if (a.crop().w <= 0 || a.crop().h <= 0) {
      throw DegenerateRegionError("crop action has non-positive extent");
    }
    clamped = Action::make_crop(clamp_to_frame(a.crop(), view));
  } else {
    clamped = Action::make_click(clamp_point_to_frame(a.click(), view));
  }
  if (a.kind() != expected &&
      !(allow_early_click && expected == ActionKind::Crop &&
        a.kind() == ActionKind::Click)) {
    throw KindMismatchError("expected " + to_string(expected) +
                                ", policy returned " + to_string(a.kind()),
                            clamped);
  }
  return clamped;
}

}  // namespace croploop
