#include "hvs/remote.hpp"

#include <chrono>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hvs/errors.hpp"
#include "hvs/util.hpp"

namespace hvs {

using nlohmann::json;

RemoteConfig RemoteConfig::from_env(std::string base_url) {
  RemoteConfig cfg;
  cfg.base_url = std::move(base_url);
  cfg.auth_token = env_or("HVS_API_TOKEN", "");
  cfg.timeout_ms = env_int_or("HVS_TIMEOUT_MS", cfg.timeout_ms);
  cfg.max_concurrency = env_int_or("HVS_CONCURRENCY", cfg.max_concurrency);
  if (cfg.timeout_ms < 1) cfg.timeout_ms = 1;
  if (cfg.max_concurrency < 1) cfg.max_concurrency = 1;
  return cfg;
}

namespace {

/// Shared POST machinery: bounded concurrency, retries on transport
/// failures and 5xx with capped exponential backoff, fail fast on 4xx and
/// non-JSON bodies.
class Poster {
 public:
  explicit Poster(RemoteConfig cfg)
      : cfg_(std::move(cfg)), slots_(std::max(1, cfg_.max_concurrency)) {}

  json post(const std::string& path, const json& body, int* retries_out) {
    slots_.acquire();
    struct Release {
      std::counting_semaphore<256>& s;
      ~Release() { s.release(); }
    } release{slots_};

    std::string payload = body.dump();
    int attempts = 0;
    for (;;) {
      ++attempts;
      httplib::Client client(cfg_.base_url);
      client.set_connection_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
      client.set_read_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
      client.set_write_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
      httplib::Headers headers;
      if (!cfg_.auth_token.empty())
        headers.emplace("Authorization", "Bearer " + cfg_.auth_token);

      httplib::Result res = client.Post(path, headers, payload, "application/json");
      bool transport_failed = !res;
      bool server_failed = res && res->status >= 500;
      if (transport_failed || server_failed) {
        if (attempts <= cfg_.max_retries) {
          std::this_thread::sleep_for(
              std::chrono::milliseconds(cfg_.backoff_ms << (attempts - 1)));
          continue;
        }
        if (transport_failed)
          throw WireError(WireErrorKind::transport,
                          "POST " + cfg_.base_url + path + ": " + to_string(res.error()) +
                              " after " + std::to_string(attempts) + " attempts",
                          0, attempts);
        throw WireError(WireErrorKind::status,
                        "POST " + cfg_.base_url + path + ": HTTP " +
                            std::to_string(res->status) + " after " +
                            std::to_string(attempts) + " attempts",
                        res->status, attempts);
      }
      if (res->status < 200 || res->status >= 300)
        throw WireError(WireErrorKind::status,
                        "POST " + cfg_.base_url + path + ": HTTP " +
                            std::to_string(res->status) + ": " + res->body,
                        res->status, attempts);

      json reply = json::parse(res->body, nullptr, false);
      if (reply.is_discarded() || !reply.is_object())
        throw WireError(WireErrorKind::bad_reply,
                        "POST " + cfg_.base_url + path + ": reply is not a JSON object",
                        res->status, attempts);
      if (retries_out) *retries_out = attempts - 1;
      return reply;
    }
  }

  const RemoteConfig& config() const { return cfg_; }

 private:
  RemoteConfig cfg_;
  std::counting_semaphore<256> slots_;
};

std::string require_text_field(const json& reply, const std::string& where) {
  auto it = reply.find("text");
  if (it == reply.end() || !it->is_string())
    throw WireError(WireErrorKind::bad_reply, where + ": reply lacks a string \"text\" field");
  return it->get<std::string>();
}

json pose_json(const ViewPose& p) { return {{"phi", p.phi}, {"gamma", p.gamma}}; }

}  // namespace

struct RemoteImaginator::Impl {
  Poster poster;
  explicit Impl(RemoteConfig cfg) : poster(std::move(cfg)) {}
};

RemoteImaginator::RemoteImaginator(RemoteConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(cfg))) {}
RemoteImaginator::~RemoteImaginator() = default;

ImaginationOutput RemoteImaginator::imagine(const ImagineRequest& req) {
  if (req.history.empty()) throw Error("remote imaginator: empty view history");
  json body;
  body["instruction"] = req.instruction;
  json views = json::array();
  for (size_t i = 0; i < req.history.size(); ++i) {
    json v = pose_json(req.history[i]);
    v["image_png_base64"] =
        i < req.images.size() ? base64_encode(encode_png(req.images[i])) : "";
    views.push_back(std::move(v));
  }
  body["views"] = std::move(views);
  // "seed" rides along so deterministic servers can reproduce sampling; the
  // endpoint contract treats it as optional.
  body["sampling"] = {{"temperature", req.temperature}, {"top_k", req.top_k},
                      {"seed", req.seed}};

  int retries = 0;
  json reply = impl_->poster.post("/v1/imagine", body, &retries);
  last_retries_.store(retries);
  return parse_imagination(require_text_field(reply, "/v1/imagine"));
}

struct RemoteActor::Impl {
  Poster poster;
  explicit Impl(RemoteConfig cfg) : poster(std::move(cfg)) {}
};

RemoteActor::RemoteActor(RemoteConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}
RemoteActor::~RemoteActor() = default;

ActorReply RemoteActor::act(const ActorContext& ctx) {
  if (!ctx.observation) throw Error("remote actor: missing current observation");
  json body;
  body["instruction"] = ctx.instruction;
  json view = pose_json(ctx.observation->pose);
  view["image_png_base64"] = base64_encode(encode_png(ctx.observation->image));
  body["current_view"] = std::move(view);
  json memory = json::array();
  for (const ViewPose& p : ctx.memory) memory.push_back(pose_json(p));
  body["memory"] = std::move(memory);
  body["suggestions_text"] = ctx.suggestions_text;
  body["step"] = ctx.step;

  int retries = 0;
  json reply = impl_->poster.post("/v1/act", body, &retries);
  last_retries_.store(retries);
  return parse_actor_reply(require_text_field(reply, "/v1/act"));
}

}  // namespace hvs
