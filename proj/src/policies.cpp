#include "ncc/chase.hpp"

namespace ncc {

Vec greedy_respond(const ChaseState& state) {
  try {
    return project_point(state.current_point(), state.body(), state.norm()).y;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::empty_body) throw Error(ErrorKind::violated_nesting, "greedy: body became empty");
    throw;
  }
}

Vec naive_centroid_respond(const ChaseState& state, const PolicyConfig& cfg, RngStream& rng, RecursionTrace* trace) {
  const Polytope& k = state.body();
  const std::size_t d = k.dim();
  try {
    const BodySample s = sample_projection(k, Mat(d, 0), cfg.sampler(), rng);
    Vec mu = centroid_and_covariance(s).mu;
    if (state.feasible(mu)) return mu;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_body) throw;
  }
  if (trace) trace->log(0, static_cast<int>(d), 0, TraceEvent::fallback);
  const ChebyshevBall ball = chebyshev_ball(k);
  if (ball.radius < -kTolFeas) throw Error(ErrorKind::violated_nesting, "naive-centroid: body became empty");
  return ball.center;
}

std::string_view to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::greedy: return "greedy";
    case PolicyKind::naive_centroid: return "naive-centroid";
    case PolicyKind::tighten: return "tighten";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy(std::string_view s) {
  if (s == "greedy") return PolicyKind::greedy;
  if (s == "naive-centroid" || s == "naive") return PolicyKind::naive_centroid;
  if (s == "tighten") return PolicyKind::tighten;
  return std::nullopt;
}

void play(PolicyKind policy, ChaseState& state, const PolicyConfig& cfg, RecursionTrace& trace) {
  try {
    switch (policy) {
      case PolicyKind::greedy:
        for (;;) state.respond(greedy_respond(state));
      case PolicyKind::naive_centroid: {
        RngStream base(cfg.seed);
        for (std::uint64_t i = 0;; ++i) {
          RngStream rng = base.split(i);
          state.respond(naive_centroid_respond(state, cfg, rng, &trace));
        }
      }
      case PolicyKind::tighten:
        general_chase(state, cfg, trace);
        return;
    }
  } catch (const GameOver&) {
  }
}

}  // namespace ncc
