#include "ncc/convexgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ncc {

// ---------------------------------------------------------------------------
// Polytope

Polytope::Polytope(const Mat& a, const Vec& b) : a_(0, a.cols()), dim_(a.cols()) {
  require(a.rows() == b.size(), "Polytope: row count differs from bound count");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double nr = norm2(a.row(i));
    if (nr < 1e-14) {
      if (b[i] < -kTolFeas) known_empty_ = true;
      continue;
    }
    Vec r(a.row(i).begin(), a.row(i).end());
    for (double& v : r) v /= nr;
    a_.append_row(r);
    b_.push_back(b[i] / nr);
  }
}

Polytope Polytope::box(std::span<const double> lo, std::span<const double> hi) {
  const std::size_t d = lo.size();
  Mat a(2 * d, d);
  Vec b(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    a(2 * i, i) = 1.0;
    b[2 * i] = hi[i];
    a(2 * i + 1, i) = -1.0;
    b[2 * i + 1] = -lo[i];
  }
  return Polytope(a, b);
}

Polytope Polytope::unit_cube(std::size_t dim) {
  return box(Vec(dim, 0.0), Vec(dim, 1.0));
}

Polytope Polytope::intersect(const Polytope& other) const {
  require(other.dim_ == dim_, "Polytope::intersect: dimension mismatch");
  Polytope out = *this;
  for (std::size_t i = 0; i < other.rows(); ++i) {
    out.a_.append_row(other.a_.row(i));
    out.b_.push_back(other.b_[i]);
  }
  out.known_empty_ = known_empty_ || other.known_empty_;
  return out;
}

Polytope Polytope::with_rows(const Mat& a, const Vec& b) const {
  return intersect(Polytope(a.rows() == 0 ? Mat(0, dim_) : a, b));
}

double Polytope::max_residual(std::span<const double> x) const {
  require(x.size() == dim_, "Polytope::max_residual: dimension mismatch");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows(); ++i) worst = std::max(worst, dot(a_.row(i), x) - b_[i]);
  return worst;
}

bool Polytope::contains(std::span<const double> x, double tol) const {
  return !known_empty_ && max_residual(x) <= tol;
}

// ---------------------------------------------------------------------------
// AffineFrame

AffineFrame::AffineFrame(Vec origin, Mat basis) : origin_(std::move(origin)), basis_(std::move(basis)) {
  if (basis_.rows() == 0 && basis_.cols() == 0) basis_ = Mat(origin_.size(), 0);
  require(basis_.rows() == origin_.size(), "AffineFrame: basis rows differ from origin dimension");
  for (std::size_t i = 0; i < basis_.cols(); ++i)
    for (std::size_t j = i; j < basis_.cols(); ++j) {
      double g = 0.0;
      for (std::size_t r = 0; r < basis_.rows(); ++r) g += basis_(r, i) * basis_(r, j);
      require(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-9, "AffineFrame: basis is not orthonormal");
    }
}

AffineFrame AffineFrame::full(std::size_t dim) { return AffineFrame(Vec(dim, 0.0), Mat::identity(dim)); }

AffineFrame AffineFrame::point(Vec x) {
  const std::size_t d = x.size();
  return AffineFrame(std::move(x), Mat(d, 0));
}

Vec AffineFrame::lift(std::span<const double> u) const {
  require(u.size() == dim(), "AffineFrame::lift: coordinate count mismatch");
  Vec x = origin_;
  for (std::size_t r = 0; r < x.size(); ++r)
    for (std::size_t c = 0; c < u.size(); ++c) x[r] += basis_(r, c) * u[c];
  return x;
}

Vec AffineFrame::coords(std::span<const double> x) const {
  return mul_transpose(basis_, sub(x, origin_));
}

// ---------------------------------------------------------------------------
// NormSpec

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "L1";
    case NormKind::L2: return "L2";
    case NormKind::Linf: return "Linf";
  }
  return "L2";
}

std::optional<NormKind> parse_norm(std::string_view s) {
  if (s == "L1" || s == "l1") return NormKind::L1;
  if (s == "L2" || s == "l2") return NormKind::L2;
  if (s == "Linf" || s == "linf" || s == "LINF" || s == "inf") return NormKind::Linf;
  return std::nullopt;
}

namespace {

std::vector<Vec> l2_ball_directions(std::size_t d, int facets) {
  std::vector<Vec> dirs;
  if (d == 1) return {Vec{1.0}, Vec{-1.0}};
  if (d == 2) {
    const int n = std::max(facets, 4);
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * std::numbers::pi * (i + 0.5) / n;
      dirs.push_back({std::cos(t), std::sin(t)});
    }
    return dirs;
  }
  // Axes, pair diagonals and (for d <= 8) full diagonals.
  for (std::size_t i = 0; i < d; ++i)
    for (double s : {1.0, -1.0}) {
      Vec v(d, 0.0);
      v[i] = s;
      dirs.push_back(v);
    }
  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (double si : {1.0, -1.0})
        for (double sj : {1.0, -1.0}) {
          Vec v(d, 0.0);
          v[i] = si * h;
          v[j] = sj * h;
          dirs.push_back(v);
        }
  if (d <= 8) {
    const double q = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      Vec v(d);
      for (std::size_t i = 0; i < d; ++i) v[i] = (mask >> i & 1U) ? -q : q;
      dirs.push_back(v);
    }
  }
  // Extra budget beyond the structured set is filled with fixed pseudo-random normals.
  RngStream rng(0x6e6f726dULL);
  while (static_cast<int>(dirs.size()) < facets) dirs.push_back(rng.gaussian_dir(static_cast<int>(d)));
  return dirs;
}

// Covering-radius estimate of a direction set: the polytope {u.x <= 1} has
// circumradius 1/cos(theta) where theta is the largest angle from a sphere
// point to its nearest facet normal.
double ball_eps_estimate(const std::vector<Vec>& dirs, std::size_t d) {
  if (d == 2) {
    return 1.0 / std::cos(std::numbers::pi / static_cast<double>(dirs.size())) - 1.0;
  }
  RngStream rng(0x65707331ULL);
  double worst_cos = 1.0;
  for (int s = 0; s < 20000; ++s) {
    Vec w = rng.gaussian_dir(static_cast<int>(d));
    // Climb towards a local maximiser of the nearest-normal angle.
    for (int it = 0; it < 30; ++it) {
      double best = -2.0;
      std::size_t arg = 0;
      for (std::size_t k = 0; k < dirs.size(); ++k) {
        const double c = dot(w, dirs[k]);
        if (c > best) {
          best = c;
          arg = k;
        }
      }
      if (it == 29) {
        worst_cos = std::min(worst_cos, best);
        break;
      }
      axpy(-0.05, dirs[arg], w);
      const double nw = norm2(w);
      for (double& x : w) x /= nw;
    }
  }
  return 1.0 / worst_cos - 1.0;
}

}  // namespace

NormSpec::NormSpec(NormKind kind, std::size_t dim, int l2_ball_facets)
    : kind_(kind), dim_(dim), l2_ball_facets_(l2_ball_facets) {
  require(dim >= 1, "NormSpec: dimension must be positive");
  sandwich_hi_ = std::sqrt(static_cast<double>(dim));
  scale_ = kind == NormKind::Linf ? std::sqrt(static_cast<double>(dim)) : 1.0;
  if (kind == NormKind::L2) {
    l2_dirs_ = l2_ball_directions(dim, l2_ball_facets);
    ball_eps_ = dim == 1 ? 0.0 : ball_eps_estimate(l2_dirs_, dim);
  }
}

double NormSpec::norm(std::span<const double> x) const {
  switch (kind_) {
    case NormKind::L1: return norm1(x);
    case NormKind::L2: return norm2(x);
    case NormKind::Linf: return norm_inf(x);
  }
  return norm2(x);
}

double NormSpec::dist(std::span<const double> x, std::span<const double> y) const { return norm(sub(x, y)); }

Polytope norm_ball(const NormSpec& norm, std::span<const double> center, double r) {
  require(r > 0.0, "norm_ball: radius must be positive");
  const std::size_t d = center.size();
  require(d == norm.dim(), "norm_ball: centre dimension differs from norm dimension");
  Mat a(0, d);
  Vec b;
  auto add_row = [&](const Vec& n, double rhs) {
    a.append_row(n);
    b.push_back(rhs);
  };
  switch (norm.kind()) {
    case NormKind::Linf:
      for (std::size_t i = 0; i < d; ++i) {
        Vec e(d, 0.0);
        e[i] = 1.0;
        add_row(e, center[i] + r);
        e[i] = -1.0;
        add_row(e, -center[i] + r);
      }
      break;
    case NormKind::L1: {
      if (d > 12) throw Error(ErrorKind::facet_budget, "norm_ball: L1 ball needs 2^d facets, d > 12");
      for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        Vec s(d);
        for (std::size_t i = 0; i < d; ++i) s[i] = (mask >> i & 1U) ? -1.0 : 1.0;
        add_row(s, dot(s, center) + r);
      }
      break;
    }
    case NormKind::L2:
      for (const Vec& u : norm.l2_directions()) add_row(u, dot(u, center) + r);
      break;
  }
  return Polytope(a, b);
}

Mat orthogonal_complement(const Mat& s, std::size_t dim) {
  std::vector<Vec> vecs;
  for (std::size_t j = 0; j < s.cols(); ++j) vecs.push_back(s.column(j));
  const std::size_t j0 = orthonormalize(vecs).size();
  for (std::size_t i = 0; i < dim; ++i) {
    Vec e(dim, 0.0);
    e[i] = 1.0;
    vecs.push_back(e);
  }
  std::vector<Vec> basis = orthonormalize(vecs, 1e-6);
  basis.erase(basis.begin(), basis.begin() + static_cast<std::ptrdiff_t>(j0));
  return Mat::from_columns(dim, basis);
}

// ---------------------------------------------------------------------------
// LP oracles

Support support(const Polytope& k, std::span<const double> v) {
  if (k.known_empty()) throw Error(ErrorKind::empty_body, "support: body is empty");
  LpProblem p{Vec(v.begin(), v.end()), k.a(), k.b(), Sense::maximize};
  if (k.rows() == 0) p.constraints = Mat(0, k.dim());
  const LpOutcome out = lp_solve(p);
  if (out.status == LpStatus::infeasible) throw Error(ErrorKind::empty_body, "support: body is empty");
  if (out.status == LpStatus::unbounded) throw Error(ErrorKind::unbounded_body, "support: body is unbounded");
  return {*out.value, *out.point};
}

double directional_width(const Polytope& k, std::span<const double> v) {
  require(std::abs(norm2(v) - 1.0) <= 1e-9, "directional_width: direction must be a unit vector");
  const double hi = support(k, v).value;
  const double lo = -support(k, scaled(v, -1.0)).value;
  return std::max(0.0, hi - lo);
}

ChebyshevBall chebyshev_ball(const Polytope& k) {
  const std::size_t d = k.dim();
  if (k.known_empty()) return {Vec(d, 0.0), -1.0};
  if (d == 0) {
    double r = std::numeric_limits<double>::infinity();
    for (double bi : k.b()) r = std::min(r, bi);
    return {Vec{}, r};
  }
  // max r  s.t.  a_i.x + r <= b_i  (rows are unit norm).
  Mat a(k.rows(), d + 1);
  for (std::size_t i = 0; i < k.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) a(i, j) = k.a()(i, j);
    a(i, d) = 1.0;
  }
  Vec c(d + 1, 0.0);
  c[d] = 1.0;
  const LpOutcome out = lp_solve({c, a, k.b(), Sense::maximize});
  if (out.status == LpStatus::unbounded) throw Error(ErrorKind::unbounded_body, "chebyshev: body is unbounded");
  if (out.status == LpStatus::infeasible) return {Vec(d, 0.0), -1.0};
  Vec center(out.point->begin(), out.point->begin() + static_cast<std::ptrdiff_t>(d));
  return {std::move(center), (*out.point)[d]};
}

ChebyshevBall chebyshev_center(const Polytope& k) {
  ChebyshevBall ball = chebyshev_ball(k);
  if (ball.radius < -kTolFeas) throw Error(ErrorKind::empty_body, "chebyshev_center: body is empty");
  ball.radius = std::max(ball.radius, 0.0);
  return ball;
}

Polytope slice(const Polytope& k, const AffineFrame& f) {
  require(f.ambient_dim() == k.dim(), "slice: frame dimension differs from body dimension");
  const Mat& q = f.basis();
  Mat a(k.rows(), q.cols());
  Vec b(k.rows());
  for (std::size_t i = 0; i < k.rows(); ++i) {
    const auto row = k.a().row(i);
    for (std::size_t c = 0; c < q.cols(); ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < q.rows(); ++r) s += row[r] * q(r, c);
      a(i, c) = s;
    }
    b[i] = k.b()[i] - dot(row, f.origin());
  }
  if (k.known_empty()) {
    Mat z(1, q.cols());
    return Polytope(z, Vec{-1.0});
  }
  // Rows that are numerically parallel to the frame become zero rows; keep
  // the decision at feasibility tolerance.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (norm2(a.row(i)) < 1e-12)
      for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = 0.0;
  }
  return Polytope(a, b);
}

std::optional<Vec> feasible_point(const Polytope& k, const AffineFrame& f) {
  const Polytope s = slice(k, f);
  if (s.known_empty()) return std::nullopt;
  const ChebyshevBall ball = chebyshev_ball(s);
  if (ball.radius < -1e-10) return std::nullopt;
  Vec x = f.lift(ball.center);
  if (k.max_residual(x) > kTolFeas) return std::nullopt;
  return x;
}

// ---------------------------------------------------------------------------
// Projection

namespace {

// Equality-constrained projection onto the active rows followed by a
// primal-dual active-set loop. Returns nullopt when it fails to settle.
std::optional<Vec> active_set_projection(std::span<const double> x, const Polytope& k, std::vector<std::size_t> active) {
  const std::size_t d = k.dim();
  for (int iter = 0; iter < 200; ++iter) {
    Vec y(x.begin(), x.end());
    Vec lambda;
    if (!active.empty()) {
      const std::size_t na = active.size();
      Mat g(na, na);
      Vec rhs(na);
      for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) g(i, j) = dot(k.a().row(active[i]), k.a().row(active[j]));
        rhs[i] = dot(k.a().row(active[i]), x) - k.b()[active[i]];
      }
      auto sol = solve_linear(g, rhs);
      if (!sol) {
        // Dependent active rows: drop the last one and retry.
        active.pop_back();
        continue;
      }
      lambda = std::move(*sol);
      for (std::size_t i = 0; i < na; ++i) axpy(-lambda[i], k.a().row(active[i]), y);
      // Remove the most negative multiplier.
      std::size_t worst = na;
      double most = -1e-12;
      for (std::size_t i = 0; i < na; ++i)
        if (lambda[i] < most) {
          most = lambda[i];
          worst = i;
        }
      if (worst < na) {
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
        continue;
      }
    }
    // Add the most violated row.
    std::size_t viol = k.rows();
    double worst_res = kTolFeas * 0.01;
    for (std::size_t i = 0; i < k.rows(); ++i) {
      const double r = dot(k.a().row(i), y) - k.b()[i];
      if (r > worst_res) {
        worst_res = r;
        viol = i;
      }
    }
    if (viol == k.rows()) return y;
    if (std::find(active.begin(), active.end(), viol) != active.end()) return std::nullopt;
    if (active.size() >= d) active.erase(active.begin());
    active.push_back(viol);
  }
  return std::nullopt;
}

// Dual active-set method for  min 1/2 |y - x|^2  s.t.  A y <= b: start from
// the unconstrained minimiser and add violated rows one at a time, dropping
// rows whose multiplier would turn negative. Terminates finitely.
std::optional<Vec> dual_active_set(std::span<const double> x, const Polytope& k) {
  const std::size_t d = k.dim();
  Vec y(x.begin(), x.end());
  std::vector<std::size_t> act;
  Vec u;
  auto direction = [&](std::size_t p, Vec& z, Vec& r) {
    // z: component of -a_p orthogonal to the active normals; r: its expansion in them.
    const Vec np = scaled(k.a().row(p), -1.0);
    const std::size_t na = act.size();
    r.assign(na, 0.0);
    z = np;
    if (na == 0) return true;
    Mat g(na, na);
    Vec rhs(na);
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < na; ++j) g(i, j) = dot(k.a().row(act[i]), k.a().row(act[j]));
      rhs[i] = dot(k.a().row(act[i]), np) * -1.0;
    }
    auto sol = solve_linear(g, rhs);
    if (!sol) return false;
    r = *sol;
    for (std::size_t i = 0; i < na; ++i) axpy(r[i], k.a().row(act[i]), z);
    return true;
  };
  const int budget = static_cast<int>(20 * (k.rows() + d) + 100);
  for (int outer = 0; outer < budget; ++outer) {
    std::size_t p = k.rows();
    double worst = 1e-13;
    for (std::size_t i = 0; i < k.rows(); ++i) {
      const double res = dot(k.a().row(i), y) - k.b()[i];
      if (res > worst && std::find(act.begin(), act.end(), i) == act.end()) {
        worst = res;
        p = i;
      }
    }
    if (p == k.rows()) return y;
    double up = 0.0;
    for (int inner = 0; inner < budget; ++inner) {
      Vec z, r;
      if (!direction(p, z, r)) return std::nullopt;
      // Partial step limit from active multipliers.
      double t1 = std::numeric_limits<double>::infinity();
      std::size_t drop = act.size();
      for (std::size_t j = 0; j < act.size(); ++j)
        if (r[j] > 1e-14 && u[j] / r[j] < t1) {
          t1 = u[j] / r[j];
          drop = j;
        }
      const double zn = norm2(z);
      const double slack = k.b()[p] - dot(k.a().row(p), y);  // negative while violated
      double t2 = std::numeric_limits<double>::infinity();
      if (zn > 1e-9 && act.size() < d) t2 = slack / dot(z, k.a().row(p));
      if (!std::isfinite(t1) && !std::isfinite(t2)) return std::nullopt;  // infeasible
      const double t = std::min(t1, t2);
      if (std::isfinite(t2)) axpy(t, z, y);
      for (std::size_t j = 0; j < act.size(); ++j) u[j] -= t * r[j];
      up += t;
      if (t2 <= t1) {
        act.push_back(p);
        u.push_back(up);
        break;
      }
      act.erase(act.begin() + static_cast<std::ptrdiff_t>(drop));
      u.erase(u.begin() + static_cast<std::ptrdiff_t>(drop));
    }
  }
  return std::nullopt;
}

Projection project_l2(std::span<const double> x, const Polytope& k) {
  const std::size_t d = k.dim();
  const std::size_t m = k.rows();
  Vec y(x.begin(), x.end());
  std::vector<Vec> incr(m, Vec(d, 0.0));
  // A short Dykstra run identifies the active rows on well-conditioned
  // bodies; thin bodies go to the exact dual active-set solve.
  const int sweeps = 400;
  for (int iter = 1; iter <= sweeps; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      Vec z = add(y, incr[i]);
      const double viol = dot(k.a().row(i), z) - k.b()[i];
      Vec yn = z;
      if (viol > 0.0) axpy(-viol, k.a().row(i), yn);
      incr[i] = sub(z, yn);
      change = std::max(change, norm_inf(sub(yn, y)));
      y = std::move(yn);
    }
    if (iter == 1 || iter % 16 == 0 || change < 1e-15) {
      std::vector<std::size_t> active;
      for (std::size_t i = 0; i < m; ++i)
        if (dot(k.a().row(i), y) - k.b()[i] > -1e-7 && norm2(incr[i]) > 0.0) active.push_back(i);
      if (auto exact = active_set_projection(x, k, active)) return {*exact, norm2(sub(x, *exact))};
    }
    if (change < 1e-15 && k.max_residual(y) <= kTolFeas) return {y, norm2(sub(x, y))};
  }
  if (auto exact = dual_active_set(x, k); exact && k.max_residual(*exact) <= kTolFeas)
    return {*exact, norm2(sub(x, *exact))};
  throw Error(ErrorKind::numerical_failure, "project_point: projection did not converge");
}

Projection project_lp(std::span<const double> x, const Polytope& k, const NormSpec& norm) {
  // Variables (y, s): s is a scalar bound (Linf) or per-coordinate bounds (L1).
  const std::size_t d = k.dim();
  const bool l1 = norm.kind() == NormKind::L1;
  const std::size_t ns = l1 ? d : 1;
  const std::size_t nv = d + ns;
  Mat a(0, nv);
  Vec b;
  for (std::size_t i = 0; i < k.rows(); ++i) {
    Vec r(nv, 0.0);
    for (std::size_t j = 0; j < d; ++j) r[j] = k.a()(i, j);
    a.append_row(r);
    b.push_back(k.b()[i]);
  }
  for (std::size_t j = 0; j < d; ++j)
    for (double sgn : {1.0, -1.0}) {
      Vec r(nv, 0.0);
      r[j] = sgn;
      r[d + (l1 ? j : 0)] = -1.0;
      a.append_row(r);
      b.push_back(sgn * x[j]);
    }
  Vec c(nv, 0.0);
  for (std::size_t j = d; j < nv; ++j) c[j] = 1.0;
  const LpOutcome out = lp_solve({c, a, b, Sense::minimize});
  if (out.status != LpStatus::optimal) throw Error(ErrorKind::empty_body, "project_point: body is empty");
  Vec y(out.point->begin(), out.point->begin() + static_cast<std::ptrdiff_t>(d));
  return {y, norm.dist(x, y)};
}

}  // namespace

Projection project_point(std::span<const double> x, const Polytope& k, const NormSpec& norm) {
  require(x.size() == k.dim(), "project_point: dimension mismatch");
  if (k.known_empty()) throw Error(ErrorKind::empty_body, "project_point: body is empty");
  if (k.contains(x, 0.0)) return {Vec(x.begin(), x.end()), 0.0};
  if (norm.kind() != NormKind::L2) return project_lp(x, k, norm);
  if (chebyshev_ball(k).radius < -kTolFeas) throw Error(ErrorKind::empty_body, "project_point: body is empty");
  return project_l2(x, k);
}

}  // namespace ncc
