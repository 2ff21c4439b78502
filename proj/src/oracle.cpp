#include "croploop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "croploop/errors.hpp"
#include "croploop/rng.hpp"

namespace croploop {

namespace {

using nlohmann::json;

struct ViewContext {
  Region view_root;                  // root-frame footprint of the view
  std::optional<Region> target_vis;  // visible target, presented coords
  std::optional<Region> target_vis_root;
};

ViewContext resolve_view(const PolicyRequest& req,
                         const OracleWorld::Entry& entry) {
  ViewContext ctx;
  ctx.view_root = view_root_region(req.view.chain, entry.size);
  ctx.target_vis_root = intersect(ctx.view_root, entry.gt_bbox);
  if (ctx.target_vis_root) {
    ctx.target_vis =
        visible_in_view(req.view.chain, entry.gt_bbox, entry.size);
  }
  return ctx;
}

// Uniform placement of a w x h crop that fully contains `target`; falls back
// to centering on the target when containment is impossible.
Region place_containing(rng::Rng& rng, const ImageSize& view,
                        const Region& target, std::int64_t w,
                        std::int64_t h) {
  const std::int64_t xlo = std::max<std::int64_t>(0, target.right() - w);
  const std::int64_t xhi = std::min(target.x, view.width - w);
  const std::int64_t ylo = std::max<std::int64_t>(0, target.bottom() - h);
  const std::int64_t yhi = std::min(target.y, view.height - h);
  if (xlo <= xhi && ylo <= yhi) {
    return {rng.uniform_int(xlo, xhi), rng.uniform_int(ylo, yhi), w, h};
  }
  const Point c = target.center();
  return {std::clamp<std::int64_t>(c.x - w / 2, 0, std::max<std::int64_t>(0, view.width - w)),
          std::clamp<std::int64_t>(c.y - h / 2, 0, std::max<std::int64_t>(0, view.height - h)),
          std::min(w, view.width), std::min(h, view.height)};
}

// Placement with no overlap with `target`; may shrink the crop when the
// target leaves no room. Returns nullopt when every strip is degenerate.
std::optional<Region> place_missing(rng::Rng& rng, const ImageSize& view,
                                    const Region& target, std::int64_t w,
                                    std::int64_t h) {
  struct Mode {
    char side;
    std::int64_t capacity;
  };
  std::vector<Mode> modes;
  if (target.x >= 1) modes.push_back({'L', target.x});
  if (view.width - target.right() >= 1)
    modes.push_back({'R', view.width - target.right()});
  if (target.y >= 1) modes.push_back({'T', target.y});
  if (view.height - target.bottom() >= 1)
    modes.push_back({'B', view.height - target.bottom()});
  if (modes.empty()) return std::nullopt;
  const Mode mode =
      modes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(modes.size()) - 1))];
  Region r{0, 0, w, h};
  switch (mode.side) {
    case 'L':
      r.w = std::min(w, mode.capacity);
      r.x = rng.uniform_int(0, target.x - r.w);
      r.y = rng.uniform_int(0, std::max<std::int64_t>(0, view.height - r.h));
      break;
    case 'R':
      r.w = std::min(w, mode.capacity);
      r.x = rng.uniform_int(target.right(), view.width - r.w);
      r.y = rng.uniform_int(0, std::max<std::int64_t>(0, view.height - r.h));
      break;
    case 'T':
      r.h = std::min(h, mode.capacity);
      r.y = rng.uniform_int(0, target.y - r.h);
      r.x = rng.uniform_int(0, std::max<std::int64_t>(0, view.width - r.w));
      break;
    default:
      r.h = std::min(h, mode.capacity);
      r.y = rng.uniform_int(target.bottom(), view.height - r.h);
      r.x = rng.uniform_int(0, std::max<std::int64_t>(0, view.width - r.w));
      break;
  }
  r.w = std::min(r.w, view.width - r.x);
  r.h = std::min(r.h, view.height - r.y);
  if (r.w < 1 || r.h < 1) return std::nullopt;
  return r;
}

}  // namespace

const OracleWorld::Entry& OracleWorld::lookup(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw Error("oracle world has no ground truth for sample: " + id);
  }
  return it->second;
}

OracleWorld OracleWorld::from_screens(
    std::span<const std::pair<SimScreen, GroundingSample>> screens) {
  OracleWorld world;
  for (const auto& [screen, sample] : screens) {
    Entry entry;
    entry.size = screen.size;
    entry.gt_bbox = sample.gt_bbox;
    for (int i = 0; i < static_cast<int>(screen.elements.size()); ++i) {
      if (i == screen.target_index) continue;
      entry.distractors.push_back(screen.elements[static_cast<std::size_t>(i)].bbox);
    }
    world.add(sample.id, std::move(entry));
  }
  return world;
}

OracleWorld OracleWorld::from_samples(
    std::span<const GroundingSample> samples) {
  OracleWorld world;
  for (const auto& s : samples) {
    world.add(s.id, {s.size, s.gt_bbox, {}});
  }
  return world;
}

void OracleWorld::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write oracle world: " + path);
  for (const auto& [id, e] : entries_) {
    json j;
    j["id"] = id;
    j["size"] = {e.size.width, e.size.height};
    j["gt_bbox"] = {e.gt_bbox.x, e.gt_bbox.y, e.gt_bbox.w, e.gt_bbox.h};
    json ds = json::array();
    for (const auto& d : e.distractors) ds.push_back({d.x, d.y, d.w, d.h});
    j["distractors"] = std::move(ds);
    out << j.dump() << "\n";
  }
}

OracleWorld OracleWorld::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read oracle world: " + path);
  OracleWorld world;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw SchemaError("invalid JSON", line_no);
    Entry e;
    e.size = {j.at("size").at(0).get<std::int64_t>(),
              j.at("size").at(1).get<std::int64_t>()};
    const auto& b = j.at("gt_bbox");
    e.gt_bbox = {b.at(0).get<std::int64_t>(), b.at(1).get<std::int64_t>(),
                 b.at(2).get<std::int64_t>(), b.at(3).get<std::int64_t>()};
    for (const auto& d : j.at("distractors")) {
      e.distractors.push_back({d.at(0).get<std::int64_t>(),
                               d.at(1).get<std::int64_t>(),
                               d.at(2).get<std::int64_t>(),
                               d.at(3).get<std::int64_t>()});
    }
    world.add(j.at("id").get<std::string>(), std::move(e));
  }
  return world;
}

double oracle_click_probability(const OracleKnobs& knobs,
                                std::int64_t visible_target_area,
                                std::int64_t view_area,
                                std::int64_t target_area) {
  if (visible_target_area <= 0) return 0.0;
  double logit = knobs.k0 +
                 knobs.k1 * std::log(static_cast<double>(visible_target_area) /
                                     static_cast<double>(view_area));
  if (knobs.k2 > 0.0) {
    const double context = std::log(
        static_cast<double>(view_area) /
        (knobs.context_ratio * static_cast<double>(target_area)));
    logit += knobs.k2 * std::min(0.0, context);
  }
  return 1.0 / (1.0 + std::exp(-logit));
}

PolicyResponse OraclePolicy::complete(const PolicyRequest& req) {
  const OracleWorld::Entry& entry = world_.lookup(req.sample_id);
  const std::uint64_t seed =
      rng::derive({req.decoding.seed.value_or(knobs_.default_seed),
                   rng::fnv1a(req.sample_id), req.rollout_index});
  rng::Rng rng(seed);
  const ImageSize view = req.view.presented;
  const ViewContext ctx = resolve_view(req, entry);

  ActionKind kind = req.kind;
  if (kind == ActionKind::Crop && req.allow_early_click &&
      knobs_.early_click_ratio > 0.0 && ctx.target_vis) {
    const double limit =
        knobs_.early_click_ratio * static_cast<double>(entry.gt_bbox.area());
    if (static_cast<double>(ctx.view_root.area()) <= limit) {
      kind = ActionKind::Click;
    }
  }

  std::string raw;
  if (kind == ActionKind::Crop) {
    Region crop;
    if (!ctx.target_vis) {
      // Target gone; behave like a lost policy poking at a plausible area.
      const std::int64_t w = std::max<std::int64_t>(1, view.width / 2);
      const std::int64_t h = std::max<std::int64_t>(1, view.height / 2);
      crop = {rng.uniform_int(0, view.width - w),
              rng.uniform_int(0, view.height - h), w, h};
    } else {
      const Region& t = *ctx.target_vis;
      const double log_scale = std::log(std::max(1e-6, knobs_.crop_scale));
      std::int64_t w = std::clamp<std::int64_t>(
          std::llround(static_cast<double>(t.w) *
                       rng.lognormal(log_scale, knobs_.crop_sigma)),
          1, view.width);
      std::int64_t h = std::clamp<std::int64_t>(
          std::llround(static_cast<double>(t.h) *
                       rng.lognormal(log_scale, knobs_.crop_sigma)),
          1, view.height);
      if (rng.bernoulli(knobs_.miss_rate)) {
        crop = place_missing(rng, view, t, w, h)
                   .value_or(place_containing(rng, view, t, w, h));
      } else {
        crop = place_containing(rng, view, t, w, h);
      }
    }
    raw = format_action(Action::make_crop(crop));
  } else {
    Point click;
    const double p =
        ctx.target_vis_root
            ? oracle_click_probability(knobs_, ctx.target_vis_root->area(),
                                       ctx.view_root.area(),
                                       entry.gt_bbox.area())
            : 0.0;
    if (ctx.target_vis && rng.bernoulli(p)) {
      click = ctx.target_vis->center();
    } else {
      // Wrong answer: a visible distractor center, else a point safely away
      // from the target.
      std::vector<Point> candidates;
      for (const auto& d : entry.distractors) {
        const Point c = d.center();
        if (!contains_point(ctx.view_root, c)) continue;
        if (contains_point(entry.gt_bbox, c)) continue;
        Point local = to_local_frame(req.view.chain, c);
        local = clamp_point_to_frame(local, view);
        candidates.push_back(local);
      }
      if (!candidates.empty()) {
        click = candidates[static_cast<std::size_t>(rng.uniform_int(
            0, static_cast<std::int64_t>(candidates.size()) - 1))];
      } else {
        // Reject points within 2 px of the visible target so root-frame
        // rounding cannot turn a miss into a hit.
        Region avoid{0, 0, 0, 0};
        if (ctx.target_vis) {
          avoid = {ctx.target_vis->x - 2, ctx.target_vis->y - 2,
                   ctx.target_vis->w + 4, ctx.target_vis->h + 4};
        }
        bool found = false;
        for (int attempt = 0; attempt < 32 && !found; ++attempt) {
          const Point cand{rng.uniform_int(0, view.width - 1),
                           rng.uniform_int(0, view.height - 1)};
          if (ctx.target_vis && contains_point(avoid, cand)) continue;
          click = cand;
          found = true;
        }
        if (!found) {
          click = ctx.target_vis ? ctx.target_vis->center()
                                 : Point{view.width / 2, view.height / 2};
        }
      }
    }
    raw = format_action(Action::make_click(click));
  }

  PolicyResponse resp;
  resp.raw_text = raw;
  resp.action =
      parse_action(raw, req.kind, view, /*allow_early_click=*/true);
  return resp;
}

}  // namespace croploop
