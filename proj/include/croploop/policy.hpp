#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "croploop/action.hpp"
#include "croploop/geometry.hpp"

namespace croploop {

struct DecodingParams {
  double temperature = 1.0;
  int max_tokens = 256;
  std::optional<std::uint64_t> seed;
};

// What the policy sees: the root screenshot narrowed by a crop chain and
// presented at `presented` pixels. The pixels themselves are derived lazily;
// geometry travels with the request so both real adapters and the simulated
// oracle can resolve the view.
struct View {
  std::string image;  // root screenshot path ("" for synthetic-only views)
  ImageSize root_size;
  FrameChain chain;  // includes the root presentation hop
  ImageSize presented;
};

struct PolicyRequest {
  ActionKind kind = ActionKind::Crop;
  View view;
  std::string instruction;
  DecodingParams decoding;
  std::string sample_id;
  std::uint64_t rollout_index = 0;
  // On non-final steps the episode runner accepts a click where a crop was
  // requested (adaptive depth); adapters enforce the kind otherwise.
  bool allow_early_click = false;
};

struct PolicyResponse {
  std::string raw_text;
  Action action;  // kind matches the request unless an early click was allowed
  double latency_s = 0.0;
};

// Uniform policy surface. Implementations must be callable from many worker
// threads at once; any per-call randomness derives from
// (decoding.seed, sample_id, rollout_index) so results are independent of
// scheduling order.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyResponse complete(const PolicyRequest& req) = 0;
  virtual std::string name() const = 0;
};

}  // namespace croploop
