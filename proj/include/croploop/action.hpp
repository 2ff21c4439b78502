#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "croploop/errors.hpp"
#include "croploop/geometry.hpp"

namespace croploop {

enum class ActionKind { Crop, Click };

std::string to_string(ActionKind kind);
ActionKind action_kind_from_string(std::string_view s);

// A policy output in the coordinate frame of the view it was asked about.
struct Action {
  std::variant<Region, Point> payload;

  ActionKind kind() const {
    return std::holds_alternative<Region>(payload) ? ActionKind::Crop
                                                   : ActionKind::Click;
  }
  bool is_crop() const { return kind() == ActionKind::Crop; }
  const Region& crop() const { return std::get<Region>(payload); }
  const Point& click() const { return std::get<Point>(payload); }

  static Action make_crop(const Region& r) { return {r}; }
  static Action make_click(const Point& p) { return {p}; }

  bool operator==(const Action&) const = default;
};

// Canonical text forms: "Crop(x, y, w, h)" and "Click(x, y)".
std::string format_action(const Action& a);

// Raised when the policy answered with the wrong action kind. Carries what
// was actually parsed so the episode runner can decide whether the answer is
// still usable (e.g. a crop on the final, click-prompted step).
class KindMismatchError : public Error {
 public:
  KindMismatchError(const std::string& msg, Action parsed)
      : Error(msg), parsed_(std::move(parsed)) {}
  const Action& parsed() const { return parsed_; }

 private:
  Action parsed_;
};

// Extracts the LAST well-formed action expression from free-form policy
// text. Accepts the canonical function-call grammar and the bracketed JSON
// forms {"action":"crop","box":[x1,y1,x2,y2]} and
// {"action":"click","point":[x,y]} (corners are converted to extents).
// The result is clamped to the view. Throws ParseFailureError when no
// candidate parses, KindMismatchError when the last action has the wrong
// kind (a click is tolerated in place of a crop iff allow_early_click), and
// DegenerateRegionError when a crop has no area inside the view.
Action parse_action(std::string_view raw_text, ActionKind expected,
                    const ImageSize& view, bool allow_early_click = false);

}  // namespace croploop
