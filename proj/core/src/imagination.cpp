#include "hvs/imagination.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <thread>

#include "hvs/errors.hpp"
#include "hvs/util.hpp"

namespace hvs {

namespace {

std::string_view trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

/// "[observed]" / "[ Imagined ]" etc., case-insensitive.
bool is_header(std::string_view line, const char* name) {
  if (line.size() < 2 || line.front() != '[' || line.back() != ']') return false;
  return lower(trim(line.substr(1, line.size() - 2))) == name;
}

bool parse_coord_pair(std::string_view s, double& a, double& b) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
  s = s.substr(1, s.size() - 2);
  size_t comma = s.find(',');
  if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
    return false;
  return parse_angle(trim(s.substr(0, comma)), a) && parse_angle(trim(s.substr(comma + 1)), b);
}

Direction make_direction(double phi, double mu, bool& clamped) {
  if (mu < -90.0) {
    mu = -90.0;
    clamped = true;
  } else if (mu > 90.0) {
    mu = 90.0;
    clamped = true;
  }
  return Direction(wrap_azimuth(phi), mu);
}

/// True for "Suggest Check (...)" up to keyword case; extracts the pair text.
bool split_suggest_line(std::string_view line, std::string_view& pair_part) {
  size_t paren = line.find('(');
  if (paren == std::string_view::npos) return false;
  std::string head = lower(trim(line.substr(0, paren)));
  // Collapse interior whitespace so "suggest   check" still matches.
  std::string words;
  bool in_space = false;
  for (char c : head) {
    if (c == ' ' || c == '\t') {
      in_space = true;
    } else {
      if (in_space && !words.empty()) words += ' ';
      in_space = false;
      words += c;
    }
  }
  if (words != "suggest check") return false;
  pair_part = line.substr(paren);
  return true;
}

}  // namespace

ImaginationOutput parse_imagination(std::string_view text) {
  ImaginationOutput out;
  int section = 0;  // 0: preamble, 1: [Observed], 2: [Imagined]
  bool suggest_seen = false;

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (is_header(line, "observed")) {
      if (section != 0) throw ParseError("unexpected [Observed] header", line_no);
      section = 1;
      continue;
    }
    if (is_header(line, "imagined")) {
      if (section != 1)
        throw ParseError("[Imagined] must follow the [Observed] section", line_no);
      section = 2;
      continue;
    }
    if (suggest_seen) throw ParseError("content after the Suggest Check line", line_no);

    if (line.front() == '-') {
      if (section == 0) throw ParseError("entity line before [Observed]", line_no);
      std::string_view body = trim(line.substr(1));
      size_t colon = body.rfind(':');
      if (colon == std::string_view::npos)
        throw ParseError("entity line needs \"<label>: (<phi>, <mu>)\"", line_no);
      std::string label(trim(body.substr(0, colon)));
      double phi, mu;
      if (label.empty() || !parse_coord_pair(body.substr(colon + 1), phi, mu))
        throw ParseError("unparseable entity coordinate", line_no);
      LabeledCoord lc{std::move(label), make_direction(phi, mu, out.mu_clamped)};
      (section == 1 ? out.observed : out.imagined).push_back(std::move(lc));
      continue;
    }

    std::string_view pair_part;
    if (split_suggest_line(line, pair_part)) {
      if (section != 2)
        throw ParseError("Suggest Check must follow the [Imagined] section", line_no);
      double phi, mu;
      if (!parse_coord_pair(pair_part, phi, mu))
        throw ParseError("unparseable Suggest Check coordinate", line_no);
      out.suggest = make_direction(phi, mu, out.mu_clamped);
      suggest_seen = true;
      continue;
    }

    throw ParseError("unrecognized line \"" + std::string(line) + "\"", line_no);
  }

  if (!suggest_seen) throw ParseError("missing final \"Suggest Check (<phi>, <mu>)\" line");
  return out;
}

namespace {
void check_label(const std::string& label) {
  if (label.empty() || label.find('\n') != std::string::npos ||
      trim(label).size() != label.size())
    throw std::invalid_argument("entity label \"" + label + "\" cannot round-trip");
}
}  // namespace

std::string format_imagination(const ImaginationOutput& out) {
  std::string text = "[Observed]";
  for (const LabeledCoord& e : out.observed) {
    check_label(e.label);
    text += "\n- " + e.label + ": (" + format_angle(e.coord.phi) + ", " +
            format_angle(e.coord.mu) + ")";
  }
  text += "\n[Imagined]";
  for (const LabeledCoord& e : out.imagined) {
    check_label(e.label);
    text += "\n- " + e.label + ": (" + format_angle(e.coord.phi) + ", " +
            format_angle(e.coord.mu) + ")";
  }
  text += "\nSuggest Check (" + format_angle(out.suggest.phi) + ", " +
          format_angle(out.suggest.mu) + ")";
  return text;
}

std::vector<double> schedule_temperatures(int step, const SamplingSchedule& s) {
  if (step < 1) throw std::invalid_argument("schedule_temperatures: step is 1-based");
  if (s.k_candidates < 1 || !(s.t1 >= 0.0) || !(s.decay > 0.0 && s.decay <= 1.0) ||
      s.stochastic_steps < 0 || s.top_k < 1)
    throw std::invalid_argument("invalid sampling schedule");
  std::vector<double> temps{0.0};
  if (step <= s.stochastic_steps) {
    double t = s.t1 * std::pow(s.decay, step - 1);
    temps.insert(temps.end(), static_cast<size_t>(s.k_candidates - 1), t);
  }
  return temps;
}

OracleImaginator::OracleImaginator(SceneAnnotation scene, FoVSpec fov, double sigma0, double t1)
    : scene_(std::move(scene)), fov_(fov), sigma0_(sigma0), t1_(t1) {
  if (!(sigma0 >= 0.0)) throw std::invalid_argument("OracleImaginator: sigma0 must be >= 0");
  if (!(t1 > 0.0)) throw std::invalid_argument("OracleImaginator: t1 must be > 0");
}

ImaginationOutput OracleImaginator::imagine(const ImagineRequest& req) {
  if (scene_.entities.empty())
    throw Error("oracle imaginator: scene \"" + scene_.scene_id + "\" has no entities");
  if (req.history.empty()) throw Error("oracle imaginator: empty view history");

  ImaginationOutput out;
  EntityPartition part = partition_entities(scene_.entities, req.history, fov_);
  for (const SemanticEntity& e : part.visible) out.observed.push_back({e.label, e.coord});
  for (const SemanticEntity& e : part.hidden) out.imagined.push_back({e.label, e.coord});

  const Direction* goal = nullptr;
  for (const TargetSpec& t : scene_.targets)
    if (t.instruction == req.instruction) {
      goal = &t.coord;
      break;
    }
  Direction coord;
  if (goal) {
    coord = *goal;
  } else {
    // No matching target: point at the most salient entity we have not
    // covered yet (any entity if everything is covered).
    const SemanticEntity* pick = nullptr;
    for (const SemanticEntity& e : part.hidden)
      if (!pick || e.salience > pick->salience) pick = &e;
    if (!pick)
      for (const SemanticEntity& e : scene_.entities)
        if (!pick || e.salience > pick->salience) pick = &e;
    coord = pick->coord;
  }

  if (req.temperature > 0.0 && sigma0_ > 0.0) {
    std::mt19937_64 rng(req.seed);
    std::normal_distribution<double> noise(0.0, sigma0_ * req.temperature / t1_);
    double dphi = noise(rng);
    double dmu = noise(rng);
    coord = Direction(wrap_azimuth(coord.phi + dphi), clamp_pitch(coord.mu + dmu));
  }
  out.suggest = coord;
  return out;
}

std::vector<CoordHypothesis> HypothesisSet::coords() const {
  std::vector<CoordHypothesis> out;
  out.reserve(hypotheses.size());
  for (const Hypothesis& h : hypotheses) out.push_back({h.output.suggest, h.temperature});
  return out;
}

HypothesisSet imagine_step(ImaginatorBackend& backend, const ImagineContext& ctx, int step,
                           const SamplingSchedule& schedule, uint64_t seed) {
  std::vector<double> temps = schedule_temperatures(step, schedule);
  size_t n = temps.size();

  std::vector<ImaginationOutput> outputs(n);
  std::vector<std::exception_ptr> failures(n);
  auto run_slot = [&](size_t i) {
    ImagineRequest req;
    req.instruction = ctx.instruction;
    req.history = ctx.history;
    req.images = ctx.images;
    req.temperature = temps[i];
    req.top_k = schedule.top_k;
    req.seed = mix_seed(mix_seed(seed, static_cast<uint64_t>(step)), i);
    try {
      outputs[i] = backend.imagine(req);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };

  if (n > 1 && backend.supports_concurrent_calls()) {
    std::vector<std::thread> workers;
    workers.reserve(n);
    for (size_t i = 0; i < n; ++i) workers.emplace_back(run_slot, i);
    for (std::thread& t : workers) t.join();
  } else {
    for (size_t i = 0; i < n; ++i) run_slot(i);
  }

  // The greedy anchor is load-bearing; stochastic extras are best-effort.
  if (failures[0]) std::rethrow_exception(failures[0]);

  HypothesisSet set;
  set.step = step;
  for (size_t i = 0; i < n; ++i) {
    if (failures[i]) {
      ++set.dropped;
      try {
        std::rethrow_exception(failures[i]);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "imagine step %d: dropped hypothesis %zu: %s\n", step, i,
                     e.what());
      }
      continue;
    }
    set.hypotheses.push_back({std::move(outputs[i]), temps[i]});
  }
  return set;
}

}  // namespace hvs
