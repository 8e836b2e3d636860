#include <algorithm>
#include <cstdio>

#include "ncc/chase.hpp"

namespace ncc {

ChaseState::ChaseState(RequestSource& source, NormSpec norm, Vec x0, int step_budget)
    : source_(source),
      norm_(std::move(norm)),
      x0_(std::move(x0)),
      current_(x0_),
      step_budget_(step_budget),
      full_(x0_.size()),
      view_(x0_.size()) {
  require(source.dim() == x0_.size(), "ChaseState: x0 dimension differs from the source");
  require(norm_.dim() == x0_.size(), "ChaseState: norm dimension differs from x0");
  require(step_budget >= 0, "ChaseState: negative step budget");
}

bool ChaseState::open() {
  require(requests_.empty(), "ChaseState::open called twice");
  try {
    pull();
  } catch (const GameOver&) {
    return false;
  }
  return true;
}

void ChaseState::pull() {
  if (static_cast<int>(requests_.size()) >= step_budget_) throw GameOver{};
  std::optional<Request> req = source_.next(current_, view_);
  if (!req) throw GameOver{};
  require(req->rows.cols() == x0_.size() && req->rows.rows() == req->bounds.size(),
          "ChaseState: malformed request batch");
  full_ = full_.with_rows(req->rows, req->bounds);
  view_ = prune_redundant(view_.with_rows(req->rows, req->bounds));
  requests_.push_back(std::move(*req));
  pending_ = true;
}

bool ChaseState::feasible(std::span<const double> x) const { return full_.contains(x, kTolFeas); }

void ChaseState::respond(std::span<const double> x) {
  require(pending_, "ChaseState::respond without a pending request");
  require(x.size() == x0_.size(), "ChaseState::respond: dimension mismatch");
  if (!all_finite(x) || !feasible(x)) {
    std::size_t worst = 0;
    double res = -1.0;
    for (std::size_t i = 0; i < full_.rows(); ++i) {
      const double r = dot(full_.a().row(i), x) - full_.b()[i];
      if (r > res) {
        res = r;
        worst = i;
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "emitted point violates row %zu by %.3e at step %zu", worst, res,
                  per_step_cost_.size() + 1);
    throw Error(ErrorKind::feasibility_violation, buf);
  }
  for (;;) {
    Vec xv(x.begin(), x.end());
    const double cost = norm_.dist(current_, xv);
    per_step_cost_.push_back(cost);
    movement_total_ += cost;
    current_ = xv;
    trajectory_.push_back(std::move(xv));
    pending_ = false;
    pull();
    if (!feasible(current_)) return;
  }
}

Polytope prune_redundant(const Polytope& k) {
  if (k.known_empty() || k.rows() <= 1) return k;
  const std::size_t m = k.rows();
  std::vector<bool> keep(m, true);
  for (std::size_t i = 0; i < m; ++i) {
    Mat a(0, k.dim());
    Vec b;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i || !keep[j]) continue;
      a.append_row(k.a().row(j));
      b.push_back(k.b()[j]);
    }
    const Vec obj(k.a().row(i).begin(), k.a().row(i).end());
    const LpOutcome out = lp_solve({obj, a, b, Sense::maximize});
    if (out.status == LpStatus::infeasible) return k;
    if (out.status == LpStatus::optimal && *out.value <= k.b()[i] + 1e-10) keep[i] = false;
  }
  Mat a(0, k.dim());
  Vec b;
  for (std::size_t i = 0; i < m; ++i)
    if (keep[i]) {
      a.append_row(k.a().row(i));
      b.push_back(k.b()[i]);
    }
  return b.empty() ? Polytope(k.dim()) : Polytope(a, b);
}

std::string_view to_string(TraceEvent e) {
  switch (e) {
    case TraceEvent::centroid_move: return "centroid-move";
    case TraceEvent::recurse: return "recurse";
    case TraceEvent::grow_skinny: return "grow-skinny";
    case TraceEvent::terminate: return "terminate";
    case TraceEvent::empty_slice: return "empty-slice";
    case TraceEvent::epoch: return "epoch";
    case TraceEvent::fallback: return "fallback";
  }
  return "?";
}

int RecursionTrace::max_iterations() const {
  int best = 0;
  for (const TightenCall& c : calls_) best = std::max(best, c.iterations);
  return best;
}

int RecursionTrace::epochs() const {
  return static_cast<int>(std::count_if(entries_.begin(), entries_.end(),
                                        [](const TraceEntry& e) { return e.event == TraceEvent::epoch; }));
}

int RecursionTrace::fallbacks() const {
  return static_cast<int>(std::count_if(entries_.begin(), entries_.end(),
                                        [](const TraceEntry& e) { return e.event == TraceEvent::fallback; }));
}

}  // namespace ncc
