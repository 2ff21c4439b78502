#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>

#include "croploop/policy.hpp"
#include "croploop/prompts.hpp"

namespace croploop {

struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8000/v1";
  std::string model = "default";
  std::string auth_env = "CROPLOOP_API_TOKEN";  // env var holding the token
  double timeout_s = 120.0;
  int retries = 3;          // attempts on transport errors
  int concurrency = 4;      // max in-flight requests
  int resample_on_parse_failure = 0;  // extra completions when unparseable
  double backoff_ms = 500.0;          // exponential backoff base
};

// Chat-completion adapter: one round trip per request carrying the rendered
// view as a base64 PNG image part plus the prompt for the requested action
// kind. Transport failures are retried with exponential backoff; parse
// failures are surfaced unless resampling is enabled.
class RemotePolicy final : public Policy {
 public:
  RemotePolicy(EndpointConfig cfg, PromptTemplates prompts);
  ~RemotePolicy() override;

  PolicyResponse complete(const PolicyRequest& req) override;
  std::string name() const override { return "remote:" + cfg_.model; }

 private:
  std::string post_once(const std::string& body, std::string& error) const;

  EndpointConfig cfg_;
  PromptTemplates prompts_;
  std::string origin_;       // scheme://host:port
  std::string path_prefix_;  // e.g. /v1

  // Bounded in-flight requests.
  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;
  mutable int slots_;
};

}  // namespace croploop
