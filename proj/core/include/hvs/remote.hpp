#pragma once

#include <atomic>
#include <memory>
#include <string>

#include "hvs/actor.hpp"
#include "hvs/imagination.hpp"

namespace hvs {

/// Connection settings for the HTTP backends. from_env() applies the
/// HVS_API_TOKEN, HVS_TIMEOUT_MS and HVS_CONCURRENCY overrides.
struct RemoteConfig {
  std::string base_url;      // e.g. http://127.0.0.1:8088
  std::string auth_token;    // sent as Authorization: Bearer <token> when set
  int timeout_ms = 30000;
  int max_retries = 3;       // transport/5xx retries beyond the first attempt
  int backoff_ms = 50;       // doubled per retry
  int max_concurrency = 8;   // cap on in-flight requests per backend

  static RemoteConfig from_env(std::string base_url);
};

/// POST /v1/imagine client. Requests carry the instruction, the view
/// history (poses + PNG base64) and the sampling settings; the reply's
/// "text" field is parsed with parse_imagination. Transport failures and
/// 5xx are retried with capped exponential backoff; 4xx and malformed
/// replies fail fast (WireError / ParseError).
class RemoteImaginator : public ImaginatorBackend {
 public:
  explicit RemoteImaginator(RemoteConfig cfg);
  ~RemoteImaginator() override;

  ImaginationOutput imagine(const ImagineRequest& req) override;
  bool supports_concurrent_calls() const override { return true; }

  /// Retries spent by the most recent successful call (for logs/tests).
  int last_retries() const { return last_retries_.load(); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::atomic<int> last_retries_{0};
};

/// POST /v1/act client. Same transport policy as RemoteImaginator; the
/// reply's "text" is parsed with parse_actor_reply.
class RemoteActor : public ActorBackend {
 public:
  explicit RemoteActor(RemoteConfig cfg);
  ~RemoteActor() override;

  ActorReply act(const ActorContext& ctx) override;
  int last_retries() const { return last_retries_.load(); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::atomic<int> last_retries_{0};
};

}  // namespace hvs
