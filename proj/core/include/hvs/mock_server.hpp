#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "hvs/actor.hpp"
#include "hvs/imagination.hpp"

namespace hvs {

/// Deterministic loopback implementation of the /v1/imagine and /v1/act
/// endpoints, backed by scene truth from a manifest. Scenes are resolved by
/// matching the request instruction against target instructions.
struct MockServerConfig {
  std::filesystem::path manifest;
  uint64_t seed = 0;            // fallback stream for requests without a seed
  double sigma0 = 20.0;
  SamplingSchedule schedule;    // t1 for the oracle noise scale
  int width = 960;              // view geometry implied for FoV derivation
  int height = 720;
  double fov_phi = 100.0;
  std::string actor_mode = "follower";  // follower | sweep
  SweepConfig sweep;
  std::string prompt_template;  // "" : built-in template
  int fail_first = 0;           // reply 500 to this many requests (retry tests)
};

class MockServer {
 public:
  explicit MockServer(MockServerConfig cfg);  // loads the manifest eagerly
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  /// Bind 127.0.0.1 and serve on a background thread. port 0 picks a free
  /// port. Throws Error when binding fails.
  void start(int port = 0);
  void stop();

  int port() const;
  std::string url() const;  // http://127.0.0.1:<port>

  /// Serve on the calling thread until stop() (CLI entry point).
  void run_blocking(int port);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hvs
