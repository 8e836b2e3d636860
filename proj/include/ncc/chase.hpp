#pragma once

// Chasing policies and the online protocol they play against.
//
// ChaseState owns the cumulative body. A policy answers with respond(x);
// respond emits x for the pending request and keeps pulling requests while x
// stays feasible, so control comes back only when the policy has to move.
// When the stream ends respond throws GameOver, which unwinds any recursion.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ncc/convexgeom.hpp"
#include "ncc/request.hpp"

namespace ncc {

struct GameOver {};

class ChaseState {
 public:
  ChaseState(RequestSource& source, NormSpec norm, Vec x0, int step_budget);

  /// Pulls the first request; false when the stream is empty.
  bool open();

  const NormSpec& norm() const noexcept { return norm_; }
  const Vec& x0() const noexcept { return x0_; }
  const Vec& current_point() const noexcept { return current_; }
  /// Cumulative body with redundant rows removed (what policies see).
  const Polytope& body() const noexcept { return view_; }
  /// Every row received so far, used for the audit.
  const Polytope& full_body() const noexcept { return full_; }
  std::size_t step_index() const noexcept { return per_step_cost_.size(); }
  /// Number of requests received; changes whenever the body does.
  std::uint64_t version() const noexcept { return requests_.size(); }
  double movement_total() const noexcept { return movement_total_; }

  bool feasible(std::span<const double> x) const;

  /// Emits x (audited against the full body) and advances until x is cut off.
  void respond(std::span<const double> x);

  const std::vector<Vec>& trajectory() const noexcept { return trajectory_; }
  const std::vector<double>& per_step_cost() const noexcept { return per_step_cost_; }
  const std::vector<Request>& requests() const noexcept { return requests_; }

 private:
  void pull();

  RequestSource& source_;
  NormSpec norm_;
  Vec x0_;
  Vec current_;
  int step_budget_;
  Polytope full_;
  Polytope view_;
  bool pending_ = false;
  double movement_total_ = 0.0;
  std::vector<Vec> trajectory_;
  std::vector<double> per_step_cost_;
  std::vector<Request> requests_;
};

/// Removes rows implied by the others (one LP per row).
Polytope prune_redundant(const Polytope& k);

struct PolicyConfig {
  double delta_c = 0.01;
  int sample_n = 4000;
  int burn = 1000;
  int thin = 5;
  int max_recursion_depth = 16;
  std::uint64_t seed = 0;

  SamplerOptions sampler() const { return {sample_n, burn, thin}; }
};

enum class TraceEvent { centroid_move, recurse, grow_skinny, terminate, empty_slice, epoch, fallback };

std::string_view to_string(TraceEvent e);

struct TraceEntry {
  int depth;
  int frame_dim;
  int iteration;
  TraceEvent event;
  double cost_delta;
};

/// Outer-loop iteration count of one tighten call.
struct TightenCall {
  int depth;
  int frame_dim;
  int iterations;
};

class RecursionTrace {
 public:
  void log(int depth, int frame_dim, int iteration, TraceEvent event, double cost_delta = 0.0) {
    entries_.push_back({depth, frame_dim, iteration, event, cost_delta});
  }
  std::size_t open_call(int depth, int frame_dim) {
    calls_.push_back({depth, frame_dim, 0});
    return calls_.size() - 1;
  }
  void count_iteration(std::size_t call) { ++calls_[call].iterations; }

  const std::vector<TraceEntry>& entries() const noexcept { return entries_; }
  const std::vector<TightenCall>& calls() const noexcept { return calls_; }
  int max_iterations() const;
  int epochs() const;
  int fallbacks() const;

 private:
  std::vector<TraceEntry> entries_;
  std::vector<TightenCall> calls_;
};

// --- single responses -------------------------------------------------------

/// Closest point of the body to the current point.
Vec greedy_respond(const ChaseState& state);

/// Sampled centroid of the body (Chebyshev centre when sampling degenerates;
/// flagged in the trace).
Vec naive_centroid_respond(const ChaseState& state, const PolicyConfig& cfg, RngStream& rng,
                           RecursionTrace* trace = nullptr);

// --- the recursive stack ------------------------------------------------------

/// Shared state of one tighten-stack run: the game, an optional truncation
/// ball and the sampling stream.
class ChaseContext {
 public:
  ChaseContext(ChaseState& state, const PolicyConfig& cfg, RecursionTrace& trace);

  ChaseState& state;
  const PolicyConfig& cfg;
  RecursionTrace& trace;
  int depth = 0;

  /// Body the recursion works on: game body, intersected with the truncation
  /// ball when one is set. Cached per request.
  const Polytope& body();
  void set_truncation(std::optional<Polytope> ball);
  RngStream next_stream() { return rng_.split(stream_counter_++); }
  /// Emits x and logs the cost under the given event.
  void respond(std::span<const double> x, int frame_dim, int iteration, TraceEvent ev);

 private:
  std::optional<Polytope> ball_;
  Polytope cached_;
  std::uint64_t cached_version_ = ~std::uint64_t{0};
  RngStream rng_;
  std::uint64_t stream_counter_ = 0;
};

enum class TightenOutcome { certified, emptied };
enum class BoundedOutcome { emptied };

/// One r-tightening pass on the slice of the body by frame: every direction
/// of the frame ends with certified width at most delta * r, or the slice
/// becomes empty.
TightenOutcome tighten(const AffineFrame& frame, double r, ChaseContext& ctx);

/// Repeats tighten at r, r/2, r/4, ... until the slice is empty.
BoundedOutcome bounded(const AffineFrame& frame, double r, ChaseContext& ctx);

/// Guess-and-double wrapper around bounded. Runs until the stream ends.
void general_chase(ChaseState& state, const PolicyConfig& cfg, RecursionTrace& trace);

/// Threshold delta for a frame of dimension k (before scaling by r).
double tighten_delta(double delta_c, std::size_t k);

// --- whole-game drivers -----------------------------------------------------

enum class PolicyKind { greedy, naive_centroid, tighten };

std::string_view to_string(PolicyKind p);
std::optional<PolicyKind> parse_policy(std::string_view s);

/// Plays the policy until the stream ends.
void play(PolicyKind policy, ChaseState& state, const PolicyConfig& cfg, RecursionTrace& trace);

}  // namespace ncc
