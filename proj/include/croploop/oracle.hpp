#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "croploop/policy.hpp"
#include "croploop/sample.hpp"
#include "croploop/simenv.hpp"

namespace croploop {

// Tunable behaviour of the simulated policy. The click model is a logistic
// curve over how much of the view the target occupies:
//
//   p = sigmoid(k0 + k1*log(visible_target_area / view_area)
//                  + k2*min(0, log(view_area / (context_ratio*target_area))))
//
// k1 > 0 makes background noise hurt; k2 > 0 penalizes views cropped so
// tight that surrounding context is lost (0 disables the term, making
// accuracy monotone in target/view ratio). Probability is exactly 0 when the
// target is absent from the view.
struct OracleKnobs {
  double crop_scale = 3.0;   // median crop side = crop_scale * target side
  double crop_sigma = 0.35;  // lognormal sigma of the side multiplier
  double miss_rate = 0.1;    // P(crop excludes the target entirely)
  double k0 = 2.0;
  double k1 = 0.7;
  double k2 = 0.0;
  double context_ratio = 6.0;
  // When > 0 and the view already concentrates the target
  // (view_area <= early_click_ratio * target_area), a crop request is
  // answered with a click instead, if the episode allows it.
  double early_click_ratio = 0.0;
  std::uint64_t default_seed = 0;
};

// Ground truth the oracle consults: target boxes plus distractor centers for
// plausible failure clicks.
class OracleWorld {
 public:
  struct Entry {
    ImageSize size;
    Region gt_bbox;
    std::vector<Region> distractors;
  };

  void add(const std::string& id, Entry entry) {
    entries_[id] = std::move(entry);
  }
  const Entry& lookup(const std::string& id) const;
  bool contains(const std::string& id) const { return entries_.count(id) > 0; }
  std::size_t size() const { return entries_.size(); }

  static OracleWorld from_screens(
      std::span<const std::pair<SimScreen, GroundingSample>> screens);
  static OracleWorld from_samples(std::span<const GroundingSample> samples);

  // Sidecar persistence (JSON-lines), so `gen-sim` output can back an oracle
  // run in a later process.
  void save(const std::string& path) const;
  static OracleWorld load(const std::string& path);

 private:
  std::map<std::string, Entry> entries_;
};

class OraclePolicy final : public Policy {
 public:
  OraclePolicy(OracleWorld world, OracleKnobs knobs)
      : world_(std::move(world)), knobs_(knobs) {}

  PolicyResponse complete(const PolicyRequest& req) override;
  std::string name() const override { return "oracle"; }

  const OracleKnobs& knobs() const { return knobs_; }

 private:
  OracleWorld world_;
  OracleKnobs knobs_;
};

// Exposed for tests: the click-success probability for a given view.
double oracle_click_probability(const OracleKnobs& knobs,
                                std::int64_t visible_target_area,
                                std::int64_t view_area,
                                std::int64_t target_area);

}  // namespace croploop
