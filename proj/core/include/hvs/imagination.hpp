#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hvs/angles.hpp"
#include "hvs/converter.hpp"
#include "hvs/image.hpp"
#include "hvs/render.hpp"
#include "hvs/scene.hpp"

namespace hvs {

struct LabeledCoord {
  std::string label;
  Direction coord;

  bool operator==(const LabeledCoord& o) const { return label == o.label && coord == o.coord; }
};

/// Structured output of one imagination call: entities the views already
/// covered, entities inferred beyond them, and the coordinate to check next.
struct ImaginationOutput {
  std::vector<LabeledCoord> observed;
  std::vector<LabeledCoord> imagined;
  Direction suggest;
  bool mu_clamped = false;  // parser clamped an out-of-range pitch

  bool operator==(const ImaginationOutput& o) const {
    return observed == o.observed && imagined == o.imagined && suggest == o.suggest &&
           mu_clamped == o.mu_clamped;
  }
};

/// Parse the structured imagination text:
///   [Observed]
///   - <label>: (<phi>, <mu>)
///   [Imagined]
///   - <label>: (<phi>, <mu>)
///   Suggest Check (<phi>, <mu>)
/// Section headers are whitespace- and case-tolerant; coordinates are
/// strict. Azimuths wrap, out-of-range pitches clamp (flagged). A missing
/// final Suggest line is a ParseError. Errors carry 1-based line numbers.
ImaginationOutput parse_imagination(std::string_view text);

/// Inverse of parse_imagination on well-formed outputs; emits the exact
/// grammar with shortest-round-trip numbers and no trailing newline.
/// Throws std::invalid_argument on labels that cannot survive a round trip
/// (empty, containing a newline, or padded with outer whitespace).
std::string format_imagination(const ImaginationOutput& out);

/// Temperature policy: stochastic sampling is enabled for the first
/// stochastic_steps steps and decays per step; later steps are greedy-only.
struct SamplingSchedule {
  int k_candidates = 3;     // hypotheses per stochastic step (1 greedy + k-1 sampled)
  double t1 = 0.7;          // first-step temperature
  double decay = 0.85;      // per-step multiplier
  int stochastic_steps = 3; // steps > this are greedy-only
  int top_k = 50;           // forwarded to remote backends
};

/// Temperatures for a step (1-based): greedy 0 first, then k-1 copies of
/// t1 * decay^(step-1) while step <= stochastic_steps; just {0} afterwards.
/// Throws std::invalid_argument on step < 1 or an invalid schedule.
std::vector<double> schedule_temperatures(int step, const SamplingSchedule& schedule);

/// One imagination request as a backend sees it.
struct ImagineRequest {
  std::string instruction;
  std::vector<ViewPose> history;     // poses visited so far, current last
  std::span<const Image> images;     // matching rendered views (may be empty)
  double temperature = 0.0;
  int top_k = 50;
  uint64_t seed = 0;                 // drives stochastic sampling
};

class ImaginatorBackend {
 public:
  virtual ~ImaginatorBackend() = default;
  virtual ImaginationOutput imagine(const ImagineRequest& req) = 0;
  /// True when imagine() may be called from several threads at once
  /// (remote backends fan hypothesis requests out concurrently).
  virtual bool supports_concurrent_calls() const { return false; }
};

/// Scene-truth imaginator: observed/imagined reproduce the entity partition
/// for the request history, and the suggested coordinate is the target
/// matching the instruction (fallback: most salient hidden entity), blurred
/// with sigma = sigma0 * temperature / t1 when temperature > 0.
class OracleImaginator : public ImaginatorBackend {
 public:
  OracleImaginator(SceneAnnotation scene, FoVSpec fov, double sigma0 = 20.0, double t1 = 0.7);
  ImaginationOutput imagine(const ImagineRequest& req) override;

 private:
  SceneAnnotation scene_;
  FoVSpec fov_;
  double sigma0_;
  double t1_;
};

struct Hypothesis {
  ImaginationOutput output;
  double temperature = 0.0;
};

/// All hypotheses produced for one step, greedy first.
struct HypothesisSet {
  int step = 0;
  std::vector<Hypothesis> hypotheses;
  int dropped = 0;  // stochastic calls that failed and were skipped

  std::vector<CoordHypothesis> coords() const;
};

struct ImagineContext {
  std::string instruction;
  std::vector<ViewPose> history;
  std::span<const Image> images;
};

/// Run the schedule for one step: one greedy call plus the stochastic
/// fan-out, concurrent when the backend allows it. Per-call seeds derive
/// from (seed, step, slot) so reruns are bit-identical. A greedy failure
/// propagates; a stochastic failure drops that hypothesis and is counted.
HypothesisSet imagine_step(ImaginatorBackend& backend, const ImagineContext& ctx, int step,
                           const SamplingSchedule& schedule, uint64_t seed);

}  // namespace hvs
