#pragma once

// Convex bodies as H-polytopes and the geometric oracles the chasing
// policies need. Every oracle reduces to LPs (widths, feasibility, Chebyshev
// centres, L1/Linf projections) or to chord computations (hit-and-run).

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ncc/numkit.hpp"

namespace ncc {

/// {x : A x <= b} with unit-norm rows. Immutable once built.
class Polytope {
 public:
  Polytope() = default;
  /// The whole space R^dim (no rows).
  explicit Polytope(std::size_t dim) : a_(0, dim), dim_(dim) {}
  /// Normalises rows; zero rows are dropped, or mark the body empty when
  /// their bound is negative.
  Polytope(const Mat& a, const Vec& b);

  static Polytope box(std::span<const double> lo, std::span<const double> hi);
  static Polytope unit_cube(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rows() const noexcept { return a_.rows(); }
  const Mat& a() const noexcept { return a_; }
  const Vec& b() const noexcept { return b_; }
  /// Set when a constraint 0 . x <= negative was seen.
  bool known_empty() const noexcept { return known_empty_; }

  /// Rows of this body followed by the rows of the other.
  Polytope intersect(const Polytope& other) const;
  Polytope with_rows(const Mat& a, const Vec& b) const;

  /// max_i (a_i . x - b_i); -inf for no rows.
  double max_residual(std::span<const double> x) const;
  bool contains(std::span<const double> x, double tol = kTolFeas) const;

 private:
  Mat a_;
  Vec b_;
  std::size_t dim_ = 0;
  bool known_empty_ = false;
};

/// origin + span(basis); basis columns are orthonormal. k = 0 is a point.
class AffineFrame {
 public:
  AffineFrame() = default;
  AffineFrame(Vec origin, Mat basis);

  static AffineFrame full(std::size_t dim);
  static AffineFrame point(Vec x);

  std::size_t ambient_dim() const noexcept { return origin_.size(); }
  std::size_t dim() const noexcept { return basis_.cols(); }
  const Vec& origin() const noexcept { return origin_; }
  const Mat& basis() const noexcept { return basis_; }

  Vec lift(std::span<const double> u) const;
  /// Frame coordinates of the orthogonal projection of x onto the frame.
  Vec coords(std::span<const double> x) const;

 private:
  Vec origin_;
  Mat basis_;
};

enum class NormKind { L1, L2, Linf };

std::string_view to_string(NormKind kind);
std::optional<NormKind> parse_norm(std::string_view s);

/// The movement-cost norm. Distances are reported in the user's norm; the
/// algorithm's threshold logic uses the rescaled norm scale() * ||.||, which
/// satisfies ||x||_2 <= scale()*||x|| <= sqrt(d) ||x||_2.
class NormSpec {
 public:
  NormSpec() = default;
  NormSpec(NormKind kind, std::size_t dim, int l2_ball_facets = 16);

  NormKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  int l2_ball_facets() const noexcept { return l2_ball_facets_; }
  double sandwich_hi() const noexcept { return sandwich_hi_; }
  double scale() const noexcept { return scale_; }

  double norm(std::span<const double> x) const;
  double dist(std::span<const double> x, std::span<const double> y) const;
  double scaled_dist(std::span<const double> x, std::span<const double> y) const { return scale_ * dist(x, y); }

  /// Facet normals of the polytopal L2 ball (empty for the other norms).
  const std::vector<Vec>& l2_directions() const noexcept { return l2_dirs_; }
  /// The L2 ball polytope lies between B2(r) and B2(r * (1 + ball_eps())).
  double ball_eps() const noexcept { return ball_eps_; }

 private:
  NormKind kind_ = NormKind::L2;
  std::size_t dim_ = 0;
  int l2_ball_facets_ = 16;
  double sandwich_hi_ = 1.0;
  double scale_ = 1.0;
  std::vector<Vec> l2_dirs_;
  double ball_eps_ = 0.0;
};

/// Points drawn from a body, stored flat (n x dim).
struct BodySample {
  std::vector<double> points;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;

  std::span<const double> point(std::size_t i) const { return {points.data() + i * dim, dim}; }
};

struct Support {
  double value;
  Vec argmax;
};

/// max v . x over K. Throws empty_body / unbounded_body.
Support support(const Polytope& k, std::span<const double> v);

/// max v.x - min v.x over K; v must be a unit vector.
double directional_width(const Polytope& k, std::span<const double> v);

struct ChebyshevBall {
  Vec center;
  double radius;
};

/// Largest inscribed L2 ball. The radius is negative when K is empty; use
/// chebyshev_center() for the throwing variant.
ChebyshevBall chebyshev_ball(const Polytope& k);
ChebyshevBall chebyshev_center(const Polytope& k);

/// Polytope of the slice K ∩ F in frame coordinates.
Polytope slice(const Polytope& k, const AffineFrame& f);

/// Chebyshev centre of K ∩ F lifted back to ambient coordinates, or nullopt
/// when the slice is empty.
std::optional<Vec> feasible_point(const Polytope& k, const AffineFrame& f);

struct Projection {
  Vec y;
  double dist;
};

inline constexpr double kTolProj = 1e-6;

/// Closest point of K to x in the given norm.
Projection project_point(std::span<const double> x, const Polytope& k, const NormSpec& norm);

/// Ball of radius r (in the user's norm) as a polytope.
Polytope norm_ball(const NormSpec& norm, std::span<const double> center, double r);

/// Orthonormal basis of the orthogonal complement of span(columns of s) in R^dim.
Mat orthogonal_complement(const Mat& s, std::size_t dim);

// ---------------------------------------------------------------------------
// Sampling

struct SamplerOptions {
  int n = 4000;
  int burn = 1000;
  int thin = 5;
};

/// Hit-and-run from a strictly feasible start with isotropic directions.
BodySample hit_and_run_sample(const Polytope& k, std::span<const double> start, int n, int burn, int thin,
                              RngStream& rng);

/// Same chain with directions drawn from N(0, shape * shape^T); shape must be
/// square of size dim. Uniformity is unaffected, mixing on elongated bodies
/// improves.
BodySample hit_and_run_sample(const Polytope& k, std::span<const double> start, int n, int burn, int thin,
                              RngStream& rng, const Mat& shape);

/// Uniform sample of the projection of K onto the orthogonal complement of
/// span(s) (s is dim x j with orthonormal columns, j may be 0). Points are
/// returned in ambient coordinates and lie in that complement. The chain
/// starts from the mean of LP extreme points and is preconditioned by their
/// spread, so flat and elongated bodies are handled.
BodySample sample_projection(const Polytope& k, const Mat& s, const SamplerOptions& opts, RngStream& rng);

struct Moments {
  Vec mu;
  Mat sigma;
};

/// Sample mean and covariance (divisor n).
Moments centroid_and_covariance(const BodySample& sample);

struct SkinnyDirection {
  Vec v;
  double width;
};

/// A unit direction orthogonal to span(s) whose LP-verified width is at most
/// delta, chosen among the eigenvectors of the sample covariance restricted to
/// the complement of s (smallest verified width wins).
std::optional<SkinnyDirection> skinny_direction(const Polytope& k, const Mat& s, double delta,
                                                const BodySample& sample);

}  // namespace ncc
