#include "hvs/mock_server.hpp"

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hvs/converter.hpp"
#include "hvs/errors.hpp"
#include "hvs/scene.hpp"
#include "hvs/util.hpp"

namespace hvs {

using nlohmann::json;

struct MockServer::Impl {
  MockServerConfig cfg;
  FoVSpec fov;
  std::vector<SceneAnnotation> scenes;
  httplib::Server server;
  std::thread serve_thread;
  int port = 0;
  std::atomic<int> remaining_failures{0};
  std::atomic<uint64_t> fallback_seed_counter{0};

  explicit Impl(MockServerConfig config)
      : cfg(std::move(config)),
        fov(cfg.fov_phi, derive_vertical_fov(cfg.fov_phi, cfg.width, cfg.height)) {
    scenes = load_manifest(cfg.manifest);
    if (scenes.empty()) throw Error("mock server: manifest lists no scenes");
    if (cfg.actor_mode != "follower" && cfg.actor_mode != "sweep")
      throw Error("mock server: unknown actor mode \"" + cfg.actor_mode + "\"");
    remaining_failures.store(cfg.fail_first);
    route();
  }

  /// Scene owning a target with this instruction; first scene otherwise.
  const SceneAnnotation& scene_for(const std::string& instruction,
                                   const TargetSpec** target_out) const {
    for (const SceneAnnotation& s : scenes)
      for (const TargetSpec& t : s.targets)
        if (t.instruction == instruction) {
          if (target_out) *target_out = &t;
          return s;
        }
    if (target_out) *target_out = nullptr;
    return scenes.front();
  }

  static void reply_error(httplib::Response& res, int status, const std::string& msg) {
    json body{{"error", msg}};
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  bool maybe_inject_failure(httplib::Response& res) {
    int left = remaining_failures.load();
    while (left > 0) {
      if (remaining_failures.compare_exchange_weak(left, left - 1)) {
        reply_error(res, 500, "injected failure");
        return true;
      }
    }
    return false;
  }

  void handle_imagine(const httplib::Request& req, httplib::Response& res) {
    if (maybe_inject_failure(res)) return;
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object())
      return reply_error(res, 400, "body is not a JSON object");
    if (!body.contains("instruction") || !body["instruction"].is_string())
      return reply_error(res, 400, "missing string field \"instruction\"");
    if (!body.contains("views") || !body["views"].is_array() || body["views"].empty())
      return reply_error(res, 400, "\"views\" must be a non-empty array");

    ImagineRequest ireq;
    ireq.instruction = body["instruction"].get<std::string>();
    for (const json& v : body["views"]) {
      if (!v.is_object() || !v.contains("phi") || !v.contains("gamma") ||
          !v["phi"].is_number() || !v["gamma"].is_number())
        return reply_error(res, 400, "each view needs numeric \"phi\" and \"gamma\"");
      if (v.contains("image_png_base64") && !v["image_png_base64"].is_string())
        return reply_error(res, 400, "\"image_png_base64\" must be a string");
      ireq.history.emplace_back(v["phi"].get<double>(), v["gamma"].get<double>());
    }
    const json* sampling = body.contains("sampling") ? &body["sampling"] : nullptr;
    if (!sampling || !sampling->is_object() || !sampling->contains("temperature") ||
        !(*sampling)["temperature"].is_number() || !sampling->contains("top_k") ||
        !(*sampling)["top_k"].is_number_integer())
      return reply_error(res, 400, "\"sampling\" needs \"temperature\" and \"top_k\"");
    ireq.temperature = (*sampling)["temperature"].get<double>();
    ireq.top_k = (*sampling)["top_k"].get<int>();
    if (ireq.temperature < 0.0) return reply_error(res, 400, "negative temperature");
    if (sampling->contains("seed") && (*sampling)["seed"].is_number_unsigned())
      ireq.seed = (*sampling)["seed"].get<uint64_t>();
    else
      ireq.seed = mix_seed(cfg.seed, fallback_seed_counter.fetch_add(1));

    try {
      const SceneAnnotation& scene = scene_for(ireq.instruction, nullptr);
      OracleImaginator oracle(scene, fov, cfg.sigma0, cfg.schedule.t1);
      json reply{{"text", format_imagination(oracle.imagine(ireq))}};
      res.set_content(reply.dump(), "application/json");
    } catch (const std::exception& e) {
      reply_error(res, 422, e.what());
    }
  }

  void handle_act(const httplib::Request& req, httplib::Response& res) {
    if (maybe_inject_failure(res)) return;
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object())
      return reply_error(res, 400, "body is not a JSON object");
    for (const char* field : {"instruction", "suggestions_text"})
      if (!body.contains(field) || !body[field].is_string())
        return reply_error(res, 400, std::string("missing string field \"") + field + "\"");
    if (!body.contains("current_view") || !body["current_view"].is_object() ||
        !body["current_view"].contains("phi") || !body["current_view"]["phi"].is_number() ||
        !body["current_view"].contains("gamma") ||
        !body["current_view"]["gamma"].is_number())
      return reply_error(res, 400, "\"current_view\" needs numeric \"phi\" and \"gamma\"");
    if (!body.contains("memory") || !body["memory"].is_array())
      return reply_error(res, 400, "\"memory\" must be an array");
    if (!body.contains("step") || !body["step"].is_number_integer())
      return reply_error(res, 400, "missing integer field \"step\"");

    std::string instruction = body["instruction"].get<std::string>();
    ViewPose pose(body["current_view"]["phi"].get<double>(),
                  body["current_view"]["gamma"].get<double>());
    std::vector<ViewPose> memory;
    for (const json& m : body["memory"]) {
      if (!m.is_object() || !m.contains("phi") || !m["phi"].is_number() ||
          !m.contains("gamma") || !m["gamma"].is_number())
        return reply_error(res, 400, "each memory entry needs numeric \"phi\" and \"gamma\"");
      memory.emplace_back(m["phi"].get<double>(), m["gamma"].get<double>());
    }
    std::string suggestions_text = body["suggestions_text"].get<std::string>();
    int step = body["step"].get<int>();

    // Render the prompt a model-backed server would consume; the scripted
    // policies below ignore it, but it keeps the template path exercised.
    const std::string& tmpl =
        cfg.prompt_template.empty() ? default_actor_prompt_template() : cfg.prompt_template;
    (void)render_actor_prompt(tmpl, instruction, memory, suggestions_text, step);

    try {
      ActorReply reply;
      if (cfg.actor_mode == "follower") {
        if (suggestions_text.empty())
          return reply_error(res, 422, "follower mode needs a suggestion block");
        std::vector<Action> actions = parse_suggestion_block(suggestions_text);
        reply = {"", actions.front()};
      } else {
        const TargetSpec* target = nullptr;
        scene_for(instruction, &target);
        if (!target)
          return reply_error(res, 422, "no target matches instruction \"" + instruction + "\"");
        bool seen = cfg.sweep.detection && within_fov(target->coord, pose, fov);
        reply = seen ? ActorReply{"", Action::sub(pose.phi, pose.gamma)}
                     : ActorReply{"", Action::rot(cfg.sweep.stride_deg, 0.0)};
      }
      json out{{"text", format_actor_reply(reply)}};
      res.set_content(out.dump(), "application/json");
    } catch (const ParseError& e) {
      reply_error(res, 422, e.what());
    }
  }

  void route() {
    server.Post("/v1/imagine", [this](const httplib::Request& req, httplib::Response& res) {
      handle_imagine(req, res);
    });
    server.Post("/v1/act", [this](const httplib::Request& req, httplib::Response& res) {
      handle_act(req, res);
    });
  }
};

MockServer::MockServer(MockServerConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}

MockServer::~MockServer() { stop(); }

void MockServer::start(int port) {
  Impl& im = *impl_;
  if (im.serve_thread.joinable()) throw Error("mock server: already running");
  if (port == 0) {
    im.port = im.server.bind_to_any_port("127.0.0.1");
    if (im.port <= 0) throw Error("mock server: cannot bind a free port");
  } else {
    if (!im.server.bind_to_port("127.0.0.1", port))
      throw Error("mock server: cannot bind port " + std::to_string(port));
    im.port = port;
  }
  im.serve_thread = std::thread([&im] { im.server.listen_after_bind(); });
  im.server.wait_until_ready();
}

void MockServer::stop() {
  if (!impl_) return;
  Impl& im = *impl_;
  if (im.serve_thread.joinable()) {
    im.server.stop();
    im.serve_thread.join();
  }
}

int MockServer::port() const { return impl_->port; }

std::string MockServer::url() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port);
}

void MockServer::run_blocking(int port) {
  Impl& im = *impl_;
  im.port = port;
  if (!im.server.listen("127.0.0.1", port))
    throw Error("mock server: cannot listen on port " + std::to_string(port));
}

}  // namespace hvs
