#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ncc/chase.hpp"

namespace ncc {
namespace {

struct DepthGuard {
  explicit DepthGuard(ChaseContext& c) : ctx(c) {
    if (++ctx.depth > ctx.cfg.max_recursion_depth)
      throw Error(ErrorKind::depth_exceeded, "tighten: recursion depth exceeded");
  }
  ~DepthGuard() { --ctx.depth; }
  ChaseContext& ctx;
};

Mat append_column(const Mat& s, std::span<const double> v) {
  Mat out(s.rows(), s.cols() + 1);
  for (std::size_t r = 0; r < s.rows(); ++r) {
    for (std::size_t c = 0; c < s.cols(); ++c) out(r, c) = s(r, c);
    out(r, s.cols()) = v[r];
  }
  return out;
}

// Greedy on a frame of dimension 0 or 1, until the slice is empty.
void greedy_on_frame(const AffineFrame& frame, ChaseContext& ctx) {
  const int k = static_cast<int>(frame.dim());
  for (int step = 1;; ++step) {
    const Polytope& body = ctx.body();
    Vec x;
    if (k == 0) {
      if (!body.contains(frame.origin())) return;
      x = frame.origin();
    } else {
      const Polytope s = slice(body, frame);
      if (s.known_empty()) return;
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < s.rows(); ++i) {
        const double a = s.a()(i, 0);
        if (a > 0.0)
          hi = std::min(hi, s.b()[i] / a);
        else
          lo = std::max(lo, s.b()[i] / a);
      }
      if (!std::isfinite(lo) || !std::isfinite(hi))
        throw Error(ErrorKind::unbounded_body, "greedy: slice is unbounded");
      const double u = frame.coords(ctx.state.current_point())[0];
      x = frame.lift(Vec{std::clamp(u, lo, std::max(lo, hi))});
      if (!body.contains(x)) {
        const std::optional<Vec> p = feasible_point(body, frame);
        if (!p) return;
        x = *p;
      }
    }
    ctx.respond(x, k, step, TraceEvent::centroid_move);
  }
}

BodySample robust_sample(const Polytope& sl, const Mat& s, ChaseContext& ctx, int frame_dim, int it) {
  RngStream rng = ctx.next_stream();
  try {
    return sample_projection(sl, s, ctx.cfg.sampler(), rng);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_body) throw;
  }
  ctx.trace.log(ctx.depth, frame_dim, it, TraceEvent::fallback);
  // A single interior point projected onto the complement: zero covariance
  // sends every direction to the LP width check.
  const ChebyshevBall ball = chebyshev_center(sl);
  const Mat q = orthogonal_complement(s, sl.dim());
  BodySample out;
  out.dim = sl.dim();
  out.n = 1;
  out.points = q * mul_transpose(q, ball.center);
  return out;
}

std::optional<Vec> fiber_point(const Polytope& sl, const Vec& c, const Mat& s, const BodySample& sample) {
  if (auto p = feasible_point(sl, AffineFrame(c, s))) return p;
  // The sampled centroid can miss the projection by estimation error; fall
  // back to the nearest sample points, which are in the projection.
  std::vector<std::size_t> order(sample.n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(sample.n);
  for (std::size_t i = 0; i < sample.n; ++i) dist[i] = norm2(sub(sample.point(i), c));
  const std::size_t tries = std::min<std::size_t>(sample.n, 16);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(tries), order.end(),
                    [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  for (std::size_t t = 0; t < tries; ++t) {
    const auto pt = sample.point(order[t]);
    if (auto p = feasible_point(sl, AffineFrame(Vec(pt.begin(), pt.end()), s))) return p;
  }
  return std::nullopt;
}

}  // namespace

ChaseContext::ChaseContext(ChaseState& st, const PolicyConfig& c, RecursionTrace& tr)
    : state(st), cfg(c), trace(tr), rng_(c.seed) {}

const Polytope& ChaseContext::body() {
  if (cached_version_ != state.version()) {
    cached_ = ball_ ? prune_redundant(state.body().intersect(*ball_)) : state.body();
    cached_version_ = state.version();
  }
  return cached_;
}

void ChaseContext::set_truncation(std::optional<Polytope> ball) {
  ball_ = std::move(ball);
  cached_version_ = ~std::uint64_t{0};
}

void ChaseContext::respond(std::span<const double> x, int frame_dim, int iteration, TraceEvent ev) {
  const double before = state.movement_total();
  try {
    state.respond(x);
  } catch (const GameOver&) {
    trace.log(depth, frame_dim, iteration, ev, state.movement_total() - before);
    throw;
  }
  trace.log(depth, frame_dim, iteration, ev, state.movement_total() - before);
}

double tighten_delta(double delta_c, std::size_t k) {
  require(k >= 2, "tighten_delta: frame dimension must be at least 2");
  const double kd = static_cast<double>(k);
  return delta_c / (kd * kd * kd * std::log(kd));
}

TightenOutcome tighten(const AffineFrame& frame, double r, ChaseContext& ctx) {
  const DepthGuard guard(ctx);
  const std::size_t k = frame.dim();
  const int kd = static_cast<int>(k);
  const std::size_t call = ctx.trace.open_call(ctx.depth, kd);
  if (k <= 1) {
    greedy_on_frame(frame, ctx);
    ctx.trace.log(ctx.depth, kd, 0, TraceEvent::empty_slice);
    return TightenOutcome::emptied;
  }
  const double delta = tighten_delta(ctx.cfg.delta_c, k) * r;
  const double ambient_root = std::sqrt(static_cast<double>(frame.ambient_dim()));
  Mat s(k, 0);
  for (int it = 0;;) {
    const Polytope sl = slice(ctx.body(), frame);
    if (sl.known_empty() || chebyshev_ball(sl).radius < -1e-10 || !feasible_point(sl, AffineFrame::full(k))) {
      ctx.trace.log(ctx.depth, kd, it, TraceEvent::empty_slice);
      return TightenOutcome::emptied;
    }
    BodySample sample = robust_sample(sl, s, ctx, kd, it);
    bool grew = false;
    while (auto v = skinny_direction(sl, s, delta, sample)) {
      s = append_column(s, v->v);
      grew = true;
      ctx.trace.log(ctx.depth, kd, it, TraceEvent::grow_skinny);
    }
    if (s.cols() == k) {
      ctx.trace.log(ctx.depth, kd, it, TraceEvent::terminate);
      return TightenOutcome::certified;
    }
    if (grew) sample = robust_sample(sl, s, ctx, kd, it);

    const Vec c = centroid_and_covariance(sample).mu;
    std::optional<Vec> xk = fiber_point(sl, c, s, sample);
    if (!xk) {
      ctx.trace.log(ctx.depth, kd, it, TraceEvent::fallback);
      xk = feasible_point(sl, AffineFrame::full(k));
      if (!xk) throw Error(ErrorKind::estimation_failure, "tighten: no feasible point near the centroid fiber");
    }
    ++it;
    ctx.trace.count_iteration(call);
    const Vec x = frame.lift(*xk);
    ctx.respond(x, kd, it, TraceEvent::centroid_move);

    const AffineFrame sub(x, frame.basis() * s);
    const double r_sub = ambient_root * std::sqrt(static_cast<double>(s.cols())) * delta;
    ctx.trace.log(ctx.depth, kd, it, TraceEvent::recurse);
    if (s.cols() > 0) bounded(sub, r_sub, ctx);
  }
}

BoundedOutcome bounded(const AffineFrame& frame, double r, ChaseContext& ctx) {
  require(r > 0.0, "bounded: radius must be positive");
  const double r_init = r;
  const int kd = static_cast<int>(frame.dim());
  for (;;) {
    if (!feasible_point(ctx.body(), frame)) return BoundedOutcome::emptied;
    if (frame.dim() <= 1) {
      const DepthGuard guard(ctx);
      greedy_on_frame(frame, ctx);
      return BoundedOutcome::emptied;
    }
    const std::uint64_t v0 = ctx.state.version();
    if (tighten(frame, r, ctx) == TightenOutcome::emptied) return BoundedOutcome::emptied;
    if (ctx.state.version() == v0) {
      // Certified without moving: settle inside the (now small) slice.
      const std::optional<Vec> p = feasible_point(ctx.body(), frame);
      if (!p) return BoundedOutcome::emptied;
      ctx.respond(*p, kd, 0, TraceEvent::terminate);
    }
    r *= 0.5;
    if (r < 1e-12 * r_init) throw Error(ErrorKind::scale_underflow, "bounded: radius underflow");
  }
}

void general_chase(ChaseState& state, const PolicyConfig& cfg, RecursionTrace& trace) {
  try {
    if (state.feasible(state.current_point())) state.respond(Vec(state.current_point()));
    ChaseContext ctx(state, cfg, trace);
    const NormSpec& nm = state.norm();
    const std::size_t d = state.x0().size();
    const double r0 = nm.scale() * project_point(state.x0(), state.body(), nm).dist;
    const double widen = 1.0 + 1e-9;
    for (int k = 0;; ++k) {
      if (k > 1000) throw Error(ErrorKind::numerical_failure, "general_chase: doubling did not reach the body");
      const double rk = std::ldexp(r0, k);
      trace.log(0, static_cast<int>(d), k, TraceEvent::epoch);
      ctx.set_truncation(norm_ball(nm, state.x0(), rk * widen / nm.scale()));
      if (!feasible_point(ctx.body(), AffineFrame::full(d))) continue;
      bounded(AffineFrame::full(d), rk * widen * (1.0 + nm.ball_eps()), ctx);
    }
  } catch (const GameOver&) {
  }
}

}  // namespace ncc
