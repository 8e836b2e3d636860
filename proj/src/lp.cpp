// Dense simplex for  max c.x  s.t.  A x <= b  (x free).
//
// The problem is solved through its dual  min b.y  s.t.  A^T y = c, y >= 0,
// which is in standard form with only d = dim(x) equality rows. With the
// shapes used here (d <= 16, m up to a few hundred) the tableau is d x (m + d),
// so every pivot is cheap. The primal point is read off the final basis.

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncc/numkit.hpp"

namespace ncc {
namespace {

enum class PhaseResult { optimal, unbounded };

class DualTableau {
 public:
  // rows: one per primal variable; columns: m dual variables, n artificials, rhs.
  DualTableau(const Mat& a, const Vec& c) : n_(a.cols()), m_(a.rows()), width_(m_ + n_ + 1) {
    t_.assign((n_ + 1) * width_, 0.0);
    sign_.assign(n_, 1.0);
    basis_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      sign_[i] = c[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < m_; ++j) at(i, j) = sign_[i] * a(j, i);
      at(i, m_ + i) = 1.0;
      at(i, width_ - 1) = sign_[i] * c[i];
      basis_[i] = m_ + i;
    }
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }

  // Installs the cost vector (size m + n) as the reduced-cost row.
  void set_costs(const Vec& w) {
    cost_ = w;
    double* z = &at(n_, 0);
    for (std::size_t j = 0; j + 1 < width_; ++j) z[j] = w[j];
    z[width_ - 1] = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double wb = w[basis_[i]];
      if (wb == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) z[j] -= wb * at(i, j);
    }
    cost_scale_ = std::max(1.0, norm_inf(w));
  }

  double objective() const { return -at(n_, width_ - 1); }

  PhaseResult run(bool allow_artificial, int& pivots, int max_pivots) {
    const double eps_opt = 1e-11 * cost_scale_;
    const double eps_piv = 1e-9;
    const std::size_t ncols = allow_artificial ? m_ + n_ : m_;
    bool bland = false;
    int degenerate = 0;
    for (;;) {
      // Entering column.
      std::size_t enter = ncols;
      double best = -eps_opt;
      for (std::size_t j = 0; j < ncols; ++j) {
        const double zj = at(n_, j);
        if (zj < best) {
          enter = j;
          if (bland) break;
          best = zj;
        }
      }
      if (enter == ncols) return PhaseResult::optimal;

      // Ratio test.
      std::size_t leave = n_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n_; ++i) {
        const double tie = at(i, enter);
        if (tie <= eps_piv) continue;
        const double ratio = std::max(0.0, at(i, width_ - 1)) / tie;
        if (leave == n_ || ratio < best_ratio - 1e-12 * (1.0 + best_ratio)) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio)) {
          const bool prefer = bland ? basis_[i] < basis_[leave] : tie > at(leave, enter);
          if (prefer) {
            leave = i;
            best_ratio = std::min(best_ratio, ratio);
          }
        }
      }
      if (leave == n_) return PhaseResult::unbounded;

      if (++pivots > max_pivots)
        throw Error(ErrorKind::numerical_failure, "lp_solve: pivot budget exhausted (cycling guard)");
      if (best_ratio <= 1e-12) {
        if (++degenerate > 25) bland = true;
      } else {
        degenerate = 0;
      }
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t e) {
    double* pr = &at(r, 0);
    const double inv = 1.0 / pr[e];
    for (std::size_t j = 0; j < width_; ++j) pr[j] *= inv;
    pr[e] = 1.0;
    for (std::size_t i = 0; i <= n_; ++i) {
      if (i == r) continue;
      double* pi = &at(i, 0);
      const double f = pi[e];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) pi[j] -= f * pr[j];
      pi[e] = 0.0;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      double& rhs = at(i, width_ - 1);
      if (rhs < 0.0 && rhs > -1e-12) rhs = 0.0;
    }
    basis_[r] = e;
  }

  // Pivots zero-level artificials out of the basis where a real column allows it.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < n_; ++i) {
      if (basis_[i] < m_) continue;
      std::size_t best = m_;
      double mag = 1e-9;
      for (std::size_t j = 0; j < m_; ++j) {
        if (std::abs(at(i, j)) > mag) {
          mag = std::abs(at(i, j));
          best = j;
        }
      }
      if (best < m_) pivot(i, best);
    }
  }

  // Simplex multipliers of the dual, mapped back to primal coordinates.
  Vec multipliers() const {
    Vec x(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double pi = 0.0;
      for (std::size_t k = 0; k < n_; ++k) pi += cost_[basis_[k]] * at(k, m_ + i);
      x[i] = sign_[i] * pi;
    }
    return x;
  }

  const std::vector<std::size_t>& basis() const { return basis_; }

 private:
  double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }

  std::size_t n_, m_, width_;
  std::vector<double> t_;
  Vec sign_;
  Vec cost_;
  double cost_scale_ = 1.0;
  std::vector<std::size_t> basis_;
};

struct Normalized {
  Mat a;
  Vec b;
  bool trivially_infeasible = false;
};

Normalized normalize_rows(const Mat& a, const Vec& b) {
  Normalized out;
  out.a = Mat(0, a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double nr = norm2(a.row(i));
    if (nr < 1e-14) {
      if (b[i] < -kTolFeas) out.trivially_infeasible = true;
      continue;
    }
    Vec r(a.row(i).begin(), a.row(i).end());
    for (double& v : r) v /= nr;
    out.a.append_row(r);
    out.b.push_back(b[i] / nr);
  }
  return out;
}

LpOutcome solve_normalized(const Mat& a, const Vec& b, const Vec& c, int depth);

LpOutcome classify_dual_infeasible(const Mat& a, const Vec& b, int depth) {
  // Dual infeasible: the primal is unbounded when feasible, infeasible otherwise.
  LpOutcome out;
  if (depth > 0) {
    out.status = LpStatus::infeasible;
    return out;
  }
  const LpOutcome feas = solve_normalized(a, b, Vec(a.cols(), 0.0), depth + 1);
  out.pivots = feas.pivots;
  if (feas.status == LpStatus::optimal) {
    out.status = LpStatus::unbounded;
  } else {
    out.status = LpStatus::infeasible;
    out.farkas_certificate = feas.farkas_certificate;
  }
  return out;
}

LpOutcome solve_normalized(const Mat& a, const Vec& b, const Vec& c, int depth) {
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  LpOutcome out;
  const int max_pivots = static_cast<int>(50 * (m + n) + 1000);

  if (n == 0) {
    // Zero-dimensional problem: feasible iff b >= 0.
    const bool ok = std::all_of(b.begin(), b.end(), [](double v) { return v >= -kTolFeas; });
    out.status = ok ? LpStatus::optimal : LpStatus::infeasible;
    if (ok) {
      out.point = Vec{};
      out.value = 0.0;
    } else {
      out.farkas_certificate = true;
    }
    return out;
  }

  DualTableau tab(a, c);

  // Phase I: minimise the sum of artificials.
  Vec w1(m + n, 0.0);
  for (std::size_t i = 0; i < n; ++i) w1[m + i] = 1.0;
  tab.set_costs(w1);
  int pivots = 0;
  tab.run(true, pivots, max_pivots);
  const double infeas = tab.objective();
  if (infeas > 1e-9 * std::max(1.0, norm_inf(c))) {
    out = classify_dual_infeasible(a, b, depth);
    out.pivots += pivots;
    return out;
  }
  tab.drive_out_artificials();

  // Phase II: minimise b.y with artificials barred from re-entering.
  Vec w2(m + n, 0.0);
  for (std::size_t j = 0; j < m; ++j) w2[j] = b[j];
  tab.set_costs(w2);
  if (tab.run(false, pivots, max_pivots) == PhaseResult::unbounded) {
    out.status = LpStatus::infeasible;
    out.farkas_certificate = true;
    out.pivots = pivots;
    return out;
  }

  Vec x = tab.multipliers();
  std::vector<std::size_t> real;
  for (std::size_t col : tab.basis())
    if (col < m) real.push_back(col);
  if (real.size() == n) {
    Mat ab(n, n);
    Vec bb(n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) ab(k, j) = a(real[k], j);
      bb[k] = b[real[k]];
    }
    if (auto exact = solve_linear(std::move(ab), std::move(bb))) {
      double worst_exact = -std::numeric_limits<double>::infinity();
      double worst_mult = worst_exact;
      for (std::size_t i = 0; i < m; ++i) {
        worst_exact = std::max(worst_exact, dot(a.row(i), *exact) - b[i]);
        worst_mult = std::max(worst_mult, dot(a.row(i), x) - b[i]);
      }
      if (worst_exact <= std::max(worst_mult, kTolFeas)) x = std::move(*exact);
    }
  }
  out.status = LpStatus::optimal;
  out.value = dot(c, x);
  out.point = std::move(x);
  out.pivots = pivots;
  return out;
}

}  // namespace

LpOutcome lp_solve(const LpProblem& p) {
  const std::size_t n = p.objective.size();
  require(p.constraints.rows() == p.bounds.size(), "lp_solve: bounds length differs from constraint rows");
  require(p.constraints.rows() == 0 || p.constraints.cols() == n, "lp_solve: constraint width differs from objective");
  require(all_finite(p.objective) && all_finite(p.bounds) && all_finite(p.constraints.data()),
          "lp_solve: non-finite input");

  Mat a = p.constraints;
  if (a.rows() == 0) a = Mat(0, n);
  const Normalized norm = normalize_rows(a, p.bounds);
  LpOutcome out;
  if (norm.trivially_infeasible) {
    out.status = LpStatus::infeasible;
    out.farkas_certificate = true;
    return out;
  }
  const double sgn = p.sense == Sense::maximize ? 1.0 : -1.0;
  Vec c = scaled(p.objective, sgn);
  out = solve_normalized(norm.a, norm.b, c, 0);
  if (out.status == LpStatus::optimal) out.value = dot(p.objective, *out.point);
  return out;
}

}  // namespace ncc
