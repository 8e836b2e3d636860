#include "ncc/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncc {
namespace {

Request box_request(const Vec& lo, const Vec& hi) {
  const Polytope box = Polytope::box(lo, hi);
  return {box.a(), box.b()};
}

Request single_row(const Vec& a, double b) {
  Mat m(0, a.size());
  m.append_row(a);
  return {m, Vec{b}};
}

// Interval of t with x + t u inside K.
std::pair<double, double> chord(const Polytope& k, std::span<const double> x, const Vec& u) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k.rows(); ++i) {
    const double au = dot(k.a().row(i), u);
    const double slack = k.b()[i] - dot(k.a().row(i), x);
    if (std::abs(au) <= 1e-14) {
      if (slack < -kTolFeas) return {1.0, -1.0};
      continue;
    }
    if (au > 0.0)
      hi = std::min(hi, slack / au);
    else
      lo = std::max(lo, slack / au);
  }
  return {lo, hi};
}

class HypercubeFaces final : public RequestSource {
 public:
  HypercubeFaces(std::size_t d, RngStream rng) : d_(d), rng_(rng) {
    for (std::size_t i = 0; i < d; ++i) unfixed_.push_back(i);
  }
  std::size_t dim() const override { return d_; }
  std::optional<Request> next(std::span<const double> x, const Polytope&) override {
    if (!started_) {
      started_ = true;
      return box_request(Vec(d_, 0.0), Vec(d_, 1.0));
    }
    if (unfixed_.empty()) return std::nullopt;
    const auto pick = std::min(unfixed_.size() - 1, static_cast<std::size_t>(rng_.next_unit() * unfixed_.size()));
    const std::size_t i = unfixed_[pick];
    unfixed_.erase(unfixed_.begin() + static_cast<std::ptrdiff_t>(pick));
    const double v = x[i] <= 0.5 ? 1.0 : 0.0;
    Mat a(2, d_);
    a(0, i) = 1.0;
    a(1, i) = -1.0;
    return Request{a, Vec{v, -v}};
  }

 private:
  std::size_t d_;
  RngStream rng_;
  std::vector<std::size_t> unfixed_;
  bool started_ = false;
};

class RandomCuts final : public RequestSource {
 public:
  RandomCuts(std::size_t d, double density, RngStream rng) : d_(d), density_(density), rng_(rng) {
    require(density >= 0.0 && density <= 1.0, "gen_random_cuts: density must lie in [0, 1]");
  }
  std::size_t dim() const override { return d_; }
  std::optional<Request> next(std::span<const double> x, const Polytope& body) override {
    if (!started_) {
      started_ = true;
      return box_request(Vec(d_, 0.0), Vec(d_, 1.0));
    }
    const ChebyshevBall cb = chebyshev_ball(body);
    if (cb.radius < 1e-6) return std::nullopt;
    Vec mu = cb.center;
    RngStream srng = rng_.split(++step_);
    try {
      mu = centroid_and_covariance(sample_projection(body, Mat(d_, 0), {1000, 200, 2}, srng)).mu;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_body) throw;
    }
    Vec a = rng_.gaussian_dir(static_cast<int>(d_));
    if (dot(a, sub(x, mu)) < 0.0) a = scaled(a, -1.0);
    Vec p(x.begin(), x.end());
    axpy(density_, sub(mu, x), p);
    return single_row(a, dot(a, p));
  }

 private:
  std::size_t d_;
  double density_;
  RngStream rng_;
  bool started_ = false;
  std::uint64_t step_ = 0;
};

// Slab of width delta along v inside [-1,1]^d. Each later cut halves the
// fiber through x and is tilted along a fat direction u so that whole fibers
// survive: the shadow on the fat subspace never shrinks, the mass does. Ends
// once the fiber at x is too thin to cut.
class Pancake final : public RequestSource {
 public:
  Pancake(std::size_t d, double delta, RngStream rng) : d_(d), delta_(delta), rng_(rng) {
    require(d >= 2, "gen_pancake: dimension must be at least 2");
    require(delta > 0.0 && delta < 0.1, "gen_pancake: delta must lie in (0, 0.1)");
    v_ = rng_.gaussian_dir(static_cast<int>(d));
  }
  std::size_t dim() const override { return d_; }
  std::optional<Request> next(std::span<const double> x, const Polytope& body) override {
    if (!started_) {
      started_ = true;
      Request r = box_request(Vec(d_, -1.0), Vec(d_, 1.0));
      r.rows.append_row(v_);
      r.bounds.push_back(delta_ / 2);
      r.rows.append_row(scaled(v_, -1.0));
      r.bounds.push_back(delta_ / 2);
      return r;
    }
    // A fresh fat direction u orthogonal to the thin axis v.
    Vec u = rng_.gaussian_dir(static_cast<int>(d_));
    axpy(-dot(u, v_), v_, u);
    u = scaled(u, 1.0 / norm2(u));
    const double s_x = dot(u, x);
    const double s_max = support(body, u).value;

    auto [zb, zt] = chord(body, x, v_);
    const double z_x = dot(v_, x);
    if (zb <= zt && s_max - s_x > 1e-9) {
      zb += z_x;
      zt += z_x;
      // Keep the half of the longer fiber end away from x.
      const double sigma = (z_x - zb) < (zt - z_x) ? -1.0 : 1.0;
      const double zz_x = sigma * z_x;
      const double bottom = sigma > 0 ? zb : -zt;
      if (zz_x - bottom > 1e-12) {
        const double z_cut = 0.5 * (bottom + zz_x);
        const Vec sv = scaled(v_, sigma);
        const double z_hi = support(body, sv).value;
        const double tau = std::max(0.0, z_hi - z_cut) / (s_max - s_x);
        Vec a = sv;
        axpy(-tau, u, a);
        if (zz_x - z_cut > 10.0 * kTolFeas * norm2(a)) return single_row(a, z_cut - tau * s_x);
      }
    }
    return std::nullopt;
  }

 private:
  std::size_t d_;
  double delta_;
  RngStream rng_;
  Vec v_;
  bool started_ = false;
};

class ShrinkingBall final : public RequestSource {
 public:
  ShrinkingBall(std::size_t d, double rho, double drift, const NormSpec& norm, RngStream rng)
      : d_(d), rho_(rho), drift_(drift), norm_(norm), rng_(rng), center_(d, 0.0) {
    require(rho > 0.0 && rho < 1.0, "gen_shrinking_ball: rho must lie in (0, 1)");
    require(drift >= 0.0, "gen_shrinking_ball: drift must be nonnegative");
  }
  std::size_t dim() const override { return d_; }
  std::optional<Request> next(std::span<const double>, const Polytope& body) override {
    const double radius = std::pow(rho_, static_cast<double>(t_));
    if (radius < 1e-6) return std::nullopt;
    for (int attempt = 0; attempt < 50; ++attempt) {
      Vec c = center_;
      if (t_ > 0 && drift_ > 0.0) axpy(drift_ * radius, rng_.gaussian_dir(static_cast<int>(d_)), c);
      const Polytope ball = norm_ball(norm_, c, radius);
      if (t_ > 0 && chebyshev_ball(body.intersect(ball)).radius <= 1e-12) continue;
      ++t_;
      center_ = std::move(c);
      return Request{ball.a(), ball.b()};
    }
    return std::nullopt;
  }

 private:
  std::size_t d_;
  double rho_, drift_;
  NormSpec norm_;
  RngStream rng_;
  Vec center_;
  int t_ = 0;
};

class Replay final : public RequestSource {
 public:
  Replay(std::size_t d, std::vector<Request> reqs) : d_(d), reqs_(std::move(reqs)) {}
  std::size_t dim() const override { return d_; }
  std::optional<Request> next(std::span<const double>, const Polytope&) override {
    if (i_ >= reqs_.size()) return std::nullopt;
    return reqs_[i_++];
  }

 private:
  std::size_t d_;
  std::vector<Request> reqs_;
  std::size_t i_ = 0;
};

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::hypercube_faces: return "hypercube-faces";
    case Family::random_cuts: return "random-cuts";
    case Family::pancake: return "pancake";
    case Family::shrinking_ball: return "shrinking-ball";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view s) {
  for (Family f : kAllFamilies)
    if (to_string(f) == s) return f;
  return std::nullopt;
}

int default_steps(Family f, std::size_t d) {
  switch (f) {
    case Family::hypercube_faces: return static_cast<int>(d) + 1;
    case Family::random_cuts: return 30;
    case Family::pancake: return 50;
    case Family::shrinking_ball: return 25;
  }
  return 30;
}

Vec pancake_axis(std::size_t d, RngStream rng) { return rng.gaussian_dir(static_cast<int>(d)); }

Instance make_instance(Family f, std::size_t d, NormKind norm, std::uint64_t seed, int steps,
                       const GeneratorParams& params) {
  require(d >= 1, "make_instance: dimension must be positive");
  Instance inst;
  inst.dim = d;
  inst.norm = norm;
  inst.mode = Instance::Mode::scripted;
  inst.family = f;
  inst.params = params;
  inst.seed = seed;
  inst.step_budget = steps < 0 ? default_steps(f, d) : steps;
  switch (f) {
    case Family::hypercube_faces: inst.x0 = Vec(d, 0.5); break;
    case Family::random_cuts:
      inst.x0 = Vec(d, 0.5);
      inst.x0[0] = -1.0;
      break;
    case Family::pancake: inst.x0 = scaled(pancake_axis(d, RngStream(seed)), 0.25); break;
    case Family::shrinking_ball:
      inst.x0 = Vec(d, 0.0);
      inst.x0[0] = 2.0;
      break;
  }
  return inst;
}

std::unique_ptr<RequestSource> gen_hypercube_faces(std::size_t d, RngStream rng) {
  require(d >= 1, "gen_hypercube_faces: dimension must be positive");
  return std::make_unique<HypercubeFaces>(d, rng);
}
std::unique_ptr<RequestSource> gen_random_cuts(std::size_t d, double density, RngStream rng) {
  return std::make_unique<RandomCuts>(d, density, rng);
}
std::unique_ptr<RequestSource> gen_pancake(std::size_t d, double delta, RngStream rng) {
  return std::make_unique<Pancake>(d, delta, rng);
}
std::unique_ptr<RequestSource> gen_shrinking_ball(std::size_t d, double rho, double drift, const NormSpec& norm,
                                                  RngStream rng) {
  return std::make_unique<ShrinkingBall>(d, rho, drift, norm, rng);
}
std::unique_ptr<RequestSource> replay_source(std::size_t d, std::vector<Request> requests) {
  return std::make_unique<Replay>(d, std::move(requests));
}

std::unique_ptr<RequestSource> make_source(const Instance& inst) {
  if (inst.mode == Instance::Mode::oblivious) return replay_source(inst.dim, inst.requests);
  const RngStream rng(inst.seed);
  switch (inst.family) {
    case Family::hypercube_faces: return gen_hypercube_faces(inst.dim, rng);
    case Family::random_cuts: return gen_random_cuts(inst.dim, inst.params.density, rng);
    case Family::pancake: return gen_pancake(inst.dim, inst.params.delta, rng);
    case Family::shrinking_ball:
      return gen_shrinking_ball(inst.dim, inst.params.rho, inst.params.drift, NormSpec(inst.norm, inst.dim), rng);
  }
  return nullptr;
}

double compute_opt(std::span<const double> x0, const Polytope& final_body, const NormSpec& norm) {
  try {
    return project_point(x0, final_body, norm).dist;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::empty_body) throw Error(ErrorKind::violated_nesting, "compute_opt: final body is empty");
    throw;
  }
}

}  // namespace ncc
