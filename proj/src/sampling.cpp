#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ncc/convexgeom.hpp"
#include "ncc/kernels.hpp"

namespace ncc {
namespace {

struct Chord {
  double lo;
  double hi;
};

using ChordFn = std::function<Chord(const Vec& w, const Vec& u)>;

// Chord of {A x <= b} through x along u. Rows nearly orthogonal to u are
// skipped; negative slack (from drift) is treated as zero.
Chord polytope_chord(const Mat& a, const Vec& b, const Vec& x, const Vec& u) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double au = dot(a.row(i), u);
    if (std::abs(au) <= 1e-12) continue;
    const double slack = std::max(0.0, b[i] - dot(a.row(i), x));
    const double t = slack / au;
    if (au > 0.0)
      hi = std::min(hi, t);
    else
      lo = std::max(lo, t);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorKind::unbounded_body, "hit_and_run: chord is unbounded");
  return {std::min(lo, 0.0), std::max(hi, 0.0)};
}

// Lower-triangular-ish factor L with L L^T = sigma, dropping directions whose
// variance is negligible relative to the largest.
Mat shape_factor(const Mat& sigma) {
  const SymEigen eig = sym_eigen(sigma);
  const std::size_t d = sigma.rows();
  const double top = eig.values.empty() ? 0.0 : eig.values.back();
  Mat l(d, d);
  if (top <= 1e-300) return l;
  for (std::size_t k = 0; k < d; ++k) {
    const double lam = eig.values[k];
    if (lam <= 1e-14 * top) continue;
    const double s = std::sqrt(lam);
    for (std::size_t r = 0; r < d; ++r) l(r, k) = eig.vectors(r, k) * s;
  }
  return l;
}

bool is_zero(const Mat& m) { return m.max_abs() == 0.0; }

Vec draw_direction(const Mat& shape, RngStream& rng) {
  const std::size_t d = shape.rows();
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec g(d);
    for (double& v : g) v = rng.gaussian();
    Vec u = shape * g;
    const double nu = norm2(u);
    if (nu > 1e-300) {
      for (double& v : u) v /= nu;
      return u;
    }
  }
  throw Error(ErrorKind::degenerate_body, "hit_and_run: direction shape is singular");
}

// Core chain. Returns n points (flat) after burn steps, keeping every thin-th.
std::vector<double> run_chain(const ChordFn& chord, Vec x, int n, int burn, int thin, RngStream& rng, Mat shape,
                              const std::function<Mat(const std::vector<double>&)>* reshape) {
  const std::size_t d = x.size();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) * d);
  int tiny = 0;
  std::vector<double> burn_pts;
  auto step = [&]() {
    const Vec u = draw_direction(shape, rng);
    const Chord c = chord(x, u);
    if (c.hi - c.lo < 1e-14) {
      if (++tiny >= 50) throw Error(ErrorKind::degenerate_body, "hit_and_run: chord length vanished");
      return;
    }
    tiny = 0;
    const double t = c.lo + (c.hi - c.lo) * rng.next_unit();
    axpy(t, u, x);
  };
  for (int s = 0; s < burn; ++s) {
    step();
    if (reshape && s >= burn / 2) burn_pts.insert(burn_pts.end(), x.begin(), x.end());
  }
  if (reshape && burn_pts.size() >= 2 * d * d + 2 * d) shape = (*reshape)(burn_pts);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < std::max(thin, 1); ++s) step();
    out.insert(out.end(), x.begin(), x.end());
  }
  return out;
}

}  // namespace

BodySample hit_and_run_sample(const Polytope& k, std::span<const double> start, int n, int burn, int thin,
                              RngStream& rng, const Mat& shape) {
  const std::size_t d = k.dim();
  require(start.size() == d, "hit_and_run: start dimension mismatch");
  require(shape.rows() == d && shape.cols() == d, "hit_and_run: shape must be dim x dim");
  require(n >= 0 && burn >= 0 && thin >= 1, "hit_and_run: n, burn must be nonnegative and thin positive");
  require(!k.known_empty() && k.max_residual(start) <= -1e-9, "hit_and_run: start is not strictly feasible");
  BodySample s;
  s.dim = d;
  s.seed = rng.seed();
  s.n = static_cast<std::size_t>(n);
  const Mat& a = k.a();
  const Vec& b = k.b();
  const ChordFn chord = [&](const Vec& x, const Vec& u) { return polytope_chord(a, b, x, u); };
  s.points = run_chain(chord, Vec(start.begin(), start.end()), n, burn, thin, rng, shape, nullptr);
  return s;
}

BodySample hit_and_run_sample(const Polytope& k, std::span<const double> start, int n, int burn, int thin,
                              RngStream& rng) {
  return hit_and_run_sample(k, start, n, burn, thin, rng, Mat::identity(k.dim()));
}

BodySample sample_projection(const Polytope& k, const Mat& s, const SamplerOptions& opts, RngStream& rng) {
  const std::size_t d = k.dim();
  const std::size_t j = s.cols();
  require(s.rows() == d || j == 0, "sample_projection: basis row count differs from dimension");
  const Mat q = orthogonal_complement(j == 0 ? Mat(d, 0) : s, d);
  const std::size_t p = q.cols();
  BodySample out;
  out.dim = d;
  out.seed = rng.seed();
  out.n = static_cast<std::size_t>(opts.n);
  if (p == 0) {
    out.points.assign(out.n * d, 0.0);
    return out;
  }

  // Extreme points of the projection along +- each complement axis.
  std::vector<Vec> ext;
  for (std::size_t i = 0; i < p; ++i) {
    const Vec qi = q.column(i);
    for (double sg : {1.0, -1.0}) ext.push_back(mul_transpose(q, support(k, scaled(qi, sg)).argmax));
  }
  auto spread = [&](const std::vector<Vec>& pts, Vec& mean) {
    mean.assign(p, 0.0);
    for (const Vec& e : pts) axpy(1.0 / static_cast<double>(pts.size()), e, mean);
    Mat cov(p, p);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      const Vec diff = sub(pts[i], pts[i + 1]);
      for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < p; ++c) cov(r, c) += diff[r] * diff[c];
    }
    return cov;
  };
  Vec start;
  Mat ext_cov = spread(ext, start);
  {
    // Second round along all principal axes of the first spread, null ones included.
    const SymEigen eig = sym_eigen(ext_cov);
    const double top = eig.values.back();
    if (top > 1e-300) {
      std::vector<Vec> more;
      for (std::size_t c = 0; c < p; ++c) {
        const Vec dir = q * eig.vectors.column(c);
        for (double sg : {1.0, -1.0}) more.push_back(mul_transpose(q, support(k, scaled(dir, sg)).argmax));
      }
      more.insert(more.end(), ext.begin(), ext.end());
      ext_cov = spread(more, start);
    }
  }
  // Extreme points can all sit on one facet (a triangle's hypotenuse), so the
  // start is pulled toward the projected Chebyshev centre and the shape gets
  // the inscribed ball added to it.
  const ChebyshevBall cb = chebyshev_ball(k);
  Mat shape_cov = ext_cov;
  if (cb.radius > 0.0 && !is_zero(ext_cov)) {
    const Vec cq = mul_transpose(q, cb.center);
    for (std::size_t i = 0; i < p; ++i) {
      start[i] = 0.5 * (start[i] + cq[i]);
      shape_cov(i, i) += cb.radius * cb.radius;
    }
  }
  const Mat shape0 = shape_factor(shape_cov);
  auto lift_all = [&](const std::vector<double>& w) {
    const std::size_t cnt = w.size() / p;
    std::vector<double> pts(cnt * d);
    for (std::size_t i = 0; i < cnt; ++i) {
      const Vec x = q * std::span<const double>(w.data() + i * p, p);
      std::copy(x.begin(), x.end(), pts.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
    return pts;
  };
  if (is_zero(shape0)) {
    const Vec x = q * start;
    for (std::size_t i = 0; i < out.n; ++i) out.points.insert(out.points.end(), x.begin(), x.end());
    return out;
  }

  const std::function<Mat(const std::vector<double>&)> reshape = [&](const std::vector<double>& pts) {
    const kernels::Moments m = kernels::moments_parallel(pts, p);
    Mat cov = m.covariance;
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t c = 0; c < p; ++c) cov(r, c) += 1e-6 * ext_cov(r, c);
    return shape_factor(cov);
  };

  ChordFn chord;
  Mat ap;
  Mat as;
  Polytope kq;
  if (j == 0) {
    kq = slice(k, AffineFrame(Vec(d, 0.0), q));
    chord = [&](const Vec& w, const Vec& u) { return polytope_chord(kq.a(), kq.b(), w, u); };
  } else {
    ap = k.a() * q;
    as = k.a() * s;
    chord = [&](const Vec& w, const Vec& u) {
      // max / min lambda  s.t.  (AQ u) lambda + (AS) t <= b - AQ w.
      const std::size_t m = k.rows();
      Mat a(m, 1 + j);
      Vec bb(m);
      const Vec apu = ap * u;
      const Vec apw = ap * w;
      for (std::size_t i = 0; i < m; ++i) {
        a(i, 0) = apu[i];
        for (std::size_t c = 0; c < j; ++c) a(i, 1 + c) = as(i, c);
        bb[i] = k.b()[i] - apw[i];
      }
      Vec obj(1 + j, 0.0);
      obj[0] = 1.0;
      const LpOutcome hi = lp_solve({obj, a, bb, Sense::maximize});
      const LpOutcome lo = lp_solve({obj, a, bb, Sense::minimize});
      if (hi.status == LpStatus::unbounded || lo.status == LpStatus::unbounded)
        throw Error(ErrorKind::unbounded_body, "sample_projection: projection is unbounded");
      if (hi.status != LpStatus::optimal || lo.status != LpStatus::optimal) return Chord{0.0, 0.0};
      return Chord{std::min(*lo.value, 0.0), std::max(*hi.value, 0.0)};
    };
  }
  const std::vector<double> w = run_chain(chord, start, opts.n, opts.burn, opts.thin, rng, shape0, &reshape);
  out.points = lift_all(w);
  return out;
}

Moments centroid_and_covariance(const BodySample& sample) {
  require(sample.dim > 0, "centroid_and_covariance: empty dimension");
  kernels::Moments m = kernels::moments_parallel(sample.points, sample.dim);
  return {std::move(m.mean), std::move(m.covariance)};
}

std::optional<SkinnyDirection> skinny_direction(const Polytope& k, const Mat& s, double delta,
                                                const BodySample& sample) {
  const std::size_t d = k.dim();
  const Mat q = orthogonal_complement(s.cols() == 0 ? Mat(d, 0) : s, d);
  const std::size_t p = q.cols();
  if (p == 0) return std::nullopt;
  Mat sig(p, p);
  if (sample.n > 0) {
    const Moments m = centroid_and_covariance(sample);
    sig = q.transpose() * (m.sigma * q);
  }
  const SymEigen eig = sym_eigen(sig);
  std::optional<SkinnyDirection> best;
  for (std::size_t c = 0; c < p; ++c) {
    // The body spans at least 2 sqrt(lambda) along an eigenvector.
    if (std::sqrt(std::max(0.0, eig.values[c])) > delta) break;
    Vec v = q * eig.vectors.column(c);
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
    const double w = directional_width(k, v);
    if (w <= delta * (1.0 + 1e-9) + 1e-12 && (!best || w < best->width)) best = SkinnyDirection{v, w};
  }
  return best;
}

}  // namespace ncc
