#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "croploop/action.hpp"
#include "croploop/geometry.hpp"
#include "croploop/policy.hpp"
#include "croploop/sample.hpp"

namespace croploop {

enum class StopReason { Clicked, MaxSteps, PolicyError };

std::string to_string(StopReason r);
StopReason stop_reason_from_string(std::string_view s);

struct TrajectoryStep {
  FrameChain view;         // chain state before the action
  ImageSize presented;     // view extent as shown to the policy
  Action action;           // in presented coordinates
  std::string cot;         // raw policy text when it carried more than the action
};

struct Trajectory {
  std::string sample_id;
  std::vector<TrajectoryStep> steps;
  std::optional<Point> final_click_root;  // present iff stop_reason == Clicked
  bool correct = false;
  StopReason stop_reason = StopReason::PolicyError;
  std::string error;  // diagnostic for PolicyError

  std::size_t crop_count() const;
  // Root-frame area ratio of the innermost view before the final action
  // (1.0 when the policy never cropped).
  double final_region_area_ratio(const ImageSize& root) const;
};

struct EpisodeConfig {
  int max_steps = 2;
  std::int64_t min_pixels = 3136;
  std::int64_t max_pixels = 2'408'448;
  DecodingParams decoding;

  // The min-pixels ablation sweeps the floor past the default cap; the cap
  // yields rather than rejecting the config.
  std::int64_t effective_max_pixels() const {
    return std::max(min_pixels, max_pixels);
  }
};

// Runs one perception episode: iterated crops, then a click on the final
// permitted step (the only step when max_steps == 1). Steps are
// context-independent: every request carries just the current view and the
// instruction. When base_region is given the episode starts from that
// root-frame region instead of the whole screenshot (used by MC scoring,
// the region probe and multi-step correction).
Trajectory run_episode(Policy& policy, const GroundingSample& sample,
                       const EpisodeConfig& cfg,
                       std::optional<Region> base_region = std::nullopt);

bool is_click_correct(const Point& click_root, const GroundingSample& sample);

// Root-frame containment of the ground truth by the crop taken at `step`.
// Throws IndexErrorEx when the step is out of range or not a crop.
bool crop_contains_target(const Trajectory& traj,
                          const GroundingSample& sample, std::size_t step);

nlohmann::json frame_chain_to_json(const FrameChain& chain);
FrameChain frame_chain_from_json(const nlohmann::json& j);
nlohmann::json trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const nlohmann::json& j);

}  // namespace croploop
