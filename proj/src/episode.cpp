#include "croploop/episode.hpp"

#include <algorithm>

#include "croploop/errors.hpp"
#include "croploop/rng.hpp"

namespace croploop {

namespace {

using nlohmann::json;

struct ViewState {
  FrameChain chain;
  ImageSize presented;
};

}  // namespace

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Clicked:
      return "clicked";
    case StopReason::MaxSteps:
      return "max_steps";
    default:
      return "policy_error";
  }
}

StopReason stop_reason_from_string(std::string_view s) {
  if (s == "clicked") return StopReason::Clicked;
  if (s == "max_steps") return StopReason::MaxSteps;
  if (s == "policy_error") return StopReason::PolicyError;
  throw SchemaError("unknown stop_reason: " + std::string(s));
}

std::size_t Trajectory::crop_count() const {
  std::size_t n = 0;
  for (const auto& s : steps) {
    if (s.action.is_crop()) ++n;
  }
  return n;
}

double Trajectory::final_region_area_ratio(const ImageSize& root) const {
  if (steps.empty()) return 1.0;
  const FrameChain& chain = steps.back().view;
  if (chain.depth() <= 1) return 1.0;  // only the root presentation hop
  const Region region = view_root_region(chain, root);
  return area_ratio(region, root);
}

bool is_click_correct(const Point& click_root, const GroundingSample& sample) {
  return contains_point(sample.gt_bbox, click_root);
}

bool crop_contains_target(const Trajectory& traj,
                          const GroundingSample& sample, std::size_t step) {
  if (step >= traj.steps.size()) {
    throw IndexErrorEx("step " + std::to_string(step) + " out of range");
  }
  const TrajectoryStep& s = traj.steps[step];
  if (!s.action.is_crop()) {
    throw IndexErrorEx("step " + std::to_string(step) + " is not a crop");
  }
  const Region crop_root = to_root_frame(s.view, s.action.crop());
  return contains_region(crop_root, sample.gt_bbox);
}

namespace {

ViewState initial_view(const GroundingSample& sample,
                       const EpisodeConfig& cfg,
                       const std::optional<Region>& base_region) {
  Region base = base_region.value_or(full_region(sample.size));
  base = clamp_to_frame(base, sample.size);
  const ResizeResult rz = resize_for_pixel_budget(
      base.size(), cfg.min_pixels, cfg.effective_max_pixels());
  ViewState v;
  v.chain.push({base, rz.scale});
  v.presented = rz.size;
  return v;
}

void push_crop(ViewState& v, const Region& crop_presented,
               const GroundingSample& sample, const EpisodeConfig& cfg) {
  const Region crop_root = clamp_to_frame(
      to_root_frame(v.chain, crop_presented), sample.size);
  const ResizeResult rz = resize_for_pixel_budget(
      crop_root.size(), cfg.min_pixels, cfg.effective_max_pixels());
  const double hop_scale = static_cast<double>(rz.size.width) /
                           static_cast<double>(crop_presented.w);
  v.chain.push({crop_presented, hop_scale});
  v.presented = rz.size;
}

Point map_click_to_root(const ViewState& v, const Point& click,
                        const GroundingSample& sample) {
  Point root = to_root_frame(v.chain, click);
  // A click on the view physically lies inside the view's root footprint;
  // pin rounding spill back inside, then inside the image.
  const Region footprint = view_root_region(v.chain, sample.size);
  root.x = std::clamp(root.x, footprint.x, footprint.right() - 1);
  root.y = std::clamp(root.y, footprint.y, footprint.bottom() - 1);
  return clamp_point_to_frame(root, sample.size);
}

}  // namespace

Trajectory run_episode(Policy& policy, const GroundingSample& sample,
                       const EpisodeConfig& cfg,
                       std::optional<Region> base_region) {
  Trajectory traj;
  traj.sample_id = sample.id;
  if (cfg.max_steps < 1) {
    traj.stop_reason = StopReason::PolicyError;
    traj.error = "max_steps must be >= 1";
    return traj;
  }

  ViewState view;
  try {
    view = initial_view(sample, cfg, base_region);
  } catch (const Error& e) {
    traj.stop_reason = StopReason::PolicyError;
    traj.error = e.what();
    return traj;
  }

  for (int step = 1; step <= cfg.max_steps; ++step) {
    const bool final_step = step == cfg.max_steps;
    PolicyRequest req;
    req.kind = final_step ? ActionKind::Click : ActionKind::Crop;
    req.view = {sample.image, sample.size, view.chain, view.presented};
    req.instruction = sample.instruction;
    req.decoding = cfg.decoding;
    req.sample_id = sample.id;
    req.rollout_index = static_cast<std::uint64_t>(step);
    req.allow_early_click = !final_step;

    Action action;
    std::string raw;
    bool budget_exhausted = false;
    try {
      const PolicyResponse resp = policy.complete(req);
      action = resp.action;
      raw = resp.raw_text;
    } catch (const KindMismatchError& e) {
      if (final_step && e.parsed().is_crop()) {
        // The policy kept cropping on the click-prompted step: record the
        // crop and stop with an exhausted budget.
        action = e.parsed();
        budget_exhausted = true;
      } else {
        traj.stop_reason = StopReason::PolicyError;
        traj.error = e.what();
        return traj;
      }
    } catch (const std::exception& e) {
      traj.stop_reason = StopReason::PolicyError;
      traj.error = e.what();
      return traj;
    }

    TrajectoryStep ts;
    ts.view = view.chain;
    ts.presented = view.presented;
    ts.action = action;
    if (!raw.empty() && raw != format_action(action)) ts.cot = raw;
    traj.steps.push_back(std::move(ts));

    if (action.is_crop()) {
      if (budget_exhausted) {
        traj.stop_reason = StopReason::MaxSteps;
        return traj;
      }
      try {
        push_crop(view, action.crop(), sample, cfg);
      } catch (const Error& e) {
        traj.stop_reason = StopReason::PolicyError;
        traj.error = e.what();
        return traj;
      }
      continue;
    }

    traj.final_click_root = map_click_to_root(view, action.click(), sample);
    traj.correct = is_click_correct(*traj.final_click_root, sample);
    traj.stop_reason = StopReason::Clicked;
    return traj;
  }

  traj.stop_reason = StopReason::MaxSteps;
  return traj;
}

json frame_chain_to_json(const FrameChain& chain) {
  json hops = json::array();
  for (const auto& hop : chain.hops()) {
    hops.push_back({{"crop", {hop.crop.x, hop.crop.y, hop.crop.w, hop.crop.h}},
                    {"scale", hop.scale}});
  }
  return hops;
}

FrameChain frame_chain_from_json(const json& j) {
  FrameChain chain;
  for (const auto& h : j) {
    const auto& c = h.at("crop");
    chain.push({{c.at(0).get<std::int64_t>(), c.at(1).get<std::int64_t>(),
                 c.at(2).get<std::int64_t>(), c.at(3).get<std::int64_t>()},
                h.at("scale").get<double>()});
  }
  return chain;
}

json trajectory_to_json(const Trajectory& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    json step;
    step["frame_chain"] = frame_chain_to_json(s.view);
    step["presented_size"] = {s.presented.width, s.presented.height};
    step["action"] = format_action(s.action);
    if (!s.cot.empty()) step["cot"] = s.cot;
    steps.push_back(std::move(step));
  }
  json j;
  j["sample_id"] = t.sample_id;
  j["steps"] = std::move(steps);
  if (t.final_click_root) {
    j["final_click_root"] = {t.final_click_root->x, t.final_click_root->y};
  } else {
    j["final_click_root"] = nullptr;
  }
  j["correct"] = t.correct;
  j["stop_reason"] = to_string(t.stop_reason);
  if (!t.error.empty()) j["error"] = t.error;
  return j;
}

Trajectory trajectory_from_json(const json& j) {
  Trajectory t;
  t.sample_id = j.at("sample_id").get<std::string>();
  for (const auto& s : j.at("steps")) {
    TrajectoryStep step;
    step.view = frame_chain_from_json(s.at("frame_chain"));
    step.presented = {s.at("presented_size").at(0).get<std::int64_t>(),
                      s.at("presented_size").at(1).get<std::int64_t>()};
    step.action = parse_action(s.at("action").get<std::string>(),
                               ActionKind::Crop, step.presented,
                               /*allow_early_click=*/true);
    if (s.contains("cot")) step.cot = s.at("cot").get<std::string>();
    t.steps.push_back(std::move(step));
  }
  if (j.contains("final_click_root") && !j.at("final_click_root").is_null()) {
    t.final_click_root = Point{j.at("final_click_root").at(0).get<std::int64_t>(),
                               j.at("final_click_root").at(1).get<std::int64_t>()};
  }
  t.correct = j.at("correct").get<bool>();
  t.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
  if (j.contains("error")) t.error = j.at("error").get<std::string>();
  return t;
}

}  // namespace croploop
