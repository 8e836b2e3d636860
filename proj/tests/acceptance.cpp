// Acceptance checks, one PASS/FAIL line each. `acceptance --calibrate`
// recomputes the frozen constants below from held-out seeds (100..109) and
// prints them; the checks themselves use seeds 0..9.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ncc/harness.hpp"
#include "ncc/kernels.hpp"
#include "oracles.hpp"

using namespace ncc;

namespace {

// Frozen calibration (acceptance --calibrate, seeds 100..109).
constexpr double kIterC = 1.7;
constexpr double kIterC0 = 28.0;
const std::map<std::size_t, double> kRatioCeiling = {{2, 3.0}, {3, 4.0}, {4, 4.1}, {5, 4.3}, {6, 5.1}};
constexpr double kWrapperConst = 1.46;

constexpr std::uint64_t kCalibSeed = 100;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RunConfig config(PolicyKind p, Family f, std::size_t d, std::uint64_t seed, NormKind n = NormKind::L2) {
  RunConfig c;
  c.policy = p;
  c.instance = make_instance(f, d, n, seed);
  c.policy_config.seed = seed;
  return c;
}

constexpr PolicyKind kPolicies[] = {PolicyKind::greedy, PolicyKind::naive_centroid, PolicyKind::tighten};

std::vector<RunReport> regression_sweep(std::uint64_t first_seed) {
  std::vector<RunConfig> cs;
  for (PolicyKind p : kPolicies)
    for (Family f : kAllFamilies)
      for (std::size_t d = 2; d <= 5; ++d)
        for (std::uint64_t s = 0; s < 10; ++s) cs.push_back(config(p, f, d, first_seed + s));
  return sweep(cs, kernels::max_threads());
}

// Least-squares line y = a + b x.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {(sy - b * sx) / n, b};
}

double iter_scale(int k) { return k * std::log(k + 1.0); }

// --- 1, 2, 4: the regression sweep --------------------------------------------

Outcome feasibility(const std::vector<RunReport>& reps, double seconds) {
  int bad = 0, errors = 0;
  for (const RunReport& r : reps) {
    bad += r.violations;
    if (r.error) ++errors;
  }
  return {bad == 0 && errors == 0 && seconds < 600,
          fmt("%zu runs, %d audited violations, %d failed runs, %.0f s", reps.size(), bad, errors, seconds)};
}

Outcome iteration_bound(const std::vector<RunReport>& reps) {
  int calls = 0, over = 0, worst = 0, worst_k = 0;
  for (const RunReport& r : reps)
    for (const TightenCall& c : r.tighten_calls) {
      if (c.frame_dim < 2) continue;
      ++calls;
      if (c.iterations > kIterC * iter_scale(c.frame_dim) + kIterC0) ++over;
      if (c.iterations > worst) {
        worst = c.iterations;
        worst_k = c.frame_dim;
      }
    }
  return {over == 0, fmt("%d tighten calls, %d above %.2f*k*ln(k+1)+%.1f, max %d iterations (k=%d)", calls, over,
                         kIterC, kIterC0, worst, worst_k)};
}

Outcome greedy_contraction(const std::vector<RunReport>& reps) {
  int runs = 0, bad = 0;
  double worst = 0;
  for (const RunReport& r : reps) {
    if (r.policy != "greedy" || r.norm != NormKind::L2 || r.requests.empty()) continue;
    ++runs;
    Polytope body(r.dim);
    for (const Request& q : r.requests) body = body.with_rows(q.rows, q.bounds);
    const Vec y = project_point(r.x0, body, NormSpec(NormKind::L2, r.dim)).y;
    double prev = norm2(sub(y, r.x0));
    bool ok = true;
    for (const Vec& x : r.trajectory) {
      const double cur = norm2(sub(y, x));
      worst = std::max(worst, cur - prev);
      if (cur > prev + 1e-7) ok = false;
      prev = cur;
    }
    if (!ok) ++bad;
  }
  return {runs > 0 && bad == 0, fmt("%d L2 greedy runs, %d non-monotone, largest increase %.2e", runs, bad, worst)};
}

// --- 3: ratio trend on random cuts -------------------------------------------

std::map<std::size_t, std::vector<double>> random_cut_ratios(std::uint64_t first_seed) {
  std::vector<RunConfig> cs;
  for (std::size_t d = 2; d <= 6; ++d)
    for (std::uint64_t s = 0; s < 10; ++s) cs.push_back(config(PolicyKind::tighten, Family::random_cuts, d, first_seed + s));
  std::map<std::size_t, std::vector<double>> out;
  for (const RunReport& r : sweep(cs, kernels::max_threads())) out[r.dim].push_back(r.ok() ? r.ratio : INFINITY);
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

Outcome ratio_trend() {
  const auto ratios = random_cut_ratios(0);
  std::vector<double> lx, ly;
  bool below = true;
  std::string table;
  for (const auto& [d, rs] : ratios) {
    const double dd = static_cast<double>(d);
    lx.push_back(std::log(dd * std::log(dd)));
    ly.push_back(std::log(mean(rs)));
    const double mx = *std::max_element(rs.begin(), rs.end());
    if (!(mx < kRatioCeiling.at(d))) below = false;
    table += fmt(" d%zu mean %.2f max %.2f/%.1f", d, mean(rs), mx, kRatioCeiling.at(d));
  }
  const double slope = fit_line(lx, ly).second;
  return {slope <= 1.25 && below, fmt("exponent %.2f;", slope) + table};
}

// --- 5: hypercube faces under Linf ---------------------------------------------

Outcome hypercube_growth() {
  std::vector<RunConfig> cs;
  for (PolicyKind p : kPolicies)
    for (std::size_t d = 2; d <= 6; ++d)
      for (std::uint64_t s = 0; s < 10; ++s) cs.push_back(config(p, Family::hypercube_faces, d, s, NormKind::Linf));
  std::map<std::string, std::map<std::size_t, std::vector<double>>> by;
  bool ok = true;
  for (const RunReport& r : sweep(cs, kernels::max_threads())) {
    if (!r.ok()) ok = false;
    by[r.policy][r.dim].push_back(r.ratio);
  }
  std::string detail;
  for (const auto& [p, per_d] : by) {
    std::vector<double> x, y;
    for (const auto& [d, rs] : per_d) {
      x.push_back(static_cast<double>(d));
      y.push_back(mean(rs));
    }
    const double slope = fit_line(x, y).second;
    if (!(slope >= 0.8)) ok = false;
    detail += fmt("%s slope %.2f (d=6 ratio %.2f) ", p.c_str(), slope, y.back());
  }
  return {ok, detail};
}

// --- 6: centroid cuts keep a constant fraction -----------------------------------

Outcome centroid_cut_fraction() {
  RngStream rng(2024);
  const double floor = 1.0 / std::exp(1.0) - 0.06;
  double worst = 1.0;
  for (int t = 0; t < 50; ++t) {
    const Polytope k = oracle::random_polytope(3, 6, rng);
    const Vec start = chebyshev_center(k).center;
    RngStream a = rng.split(2 * static_cast<std::uint64_t>(t)), b = rng.split(2 * static_cast<std::uint64_t>(t) + 1);
    const Vec mu = centroid_and_covariance(hit_and_run_sample(k, start, 5000, 1000, 5, a)).mu;
    const BodySample fresh = hit_and_run_sample(k, start, 5000, 1000, 5, b);
    const Vec u = rng.gaussian_dir(3);
    const double f = static_cast<double>(kernels::count_below_parallel(fresh.points, u, dot(u, mu))) / 5000.0;
    worst = std::min({worst, f, 1 - f});
  }
  return {worst >= floor, fmt("50 polytopes, smallest side %.3f (floor %.3f)", worst, floor)};
}

// --- 7: geometry against brute force ---------------------------------------------

Outcome geometry_oracles() {
  RngStream rng(77);
  int lp_bad = 0, lp_infeasible = 0;
  double lp_err = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + static_cast<std::size_t>(t % 3);
    Mat a(0, d);
    Vec b;
    for (std::size_t i = 0; i < d; ++i) {
      Vec e(d, 0.0);
      e[i] = 1;
      a.append_row(e);
      b.push_back(5);
      e[i] = -1;
      a.append_row(e);
      b.push_back(5);
    }
    for (int i = 0; i < 6; ++i) {
      a.append_row(rng.gaussian_dir(static_cast<int>(d)));
      b.push_back(rng.uniform(-0.5, 1.5));
    }
    const Vec c = rng.gaussian_dir(static_cast<int>(d));
    const auto ref = oracle::vertex_max(a, b, c);
    const LpOutcome out = lp_solve({c, a, b, Sense::maximize});
    if (!ref) {
      ++lp_infeasible;
      if (out.status != LpStatus::infeasible) ++lp_bad;
      continue;
    }
    if (out.status != LpStatus::optimal) {
      ++lp_bad;
      continue;
    }
    lp_err = std::max(lp_err, std::abs(*out.value - *ref));
    if (std::abs(*out.value - *ref) > 1e-6) ++lp_bad;
  }

  int kkt_bad = 0;
  double kkt_worst = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 3);
    const Polytope k = oracle::random_polytope(d, 6, rng);
    Vec x = rng.gaussian_dir(static_cast<int>(d));
    for (double& v : x) v *= rng.uniform(0.5, 4);
    const Projection p = project_point(x, k, NormSpec(NormKind::L2, d));
    std::vector<Vec> act;
    for (std::size_t i = 0; i < k.rows(); ++i)
      if (dot(k.a().row(i), p.y) - k.b()[i] >= -1e-6) act.emplace_back(k.a().row(i).begin(), k.a().row(i).end());
    const double res = oracle::cone_residual(act, sub(x, p.y));
    kkt_worst = std::max(kkt_worst, res);
    if (res > 1e-5 || k.max_residual(p.y) > 1e-7) ++kkt_bad;
  }

  int box_bad = 0;
  double box_margin = INFINITY;
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 4);
    Vec lo(d), hi(d);
    double shortest = INFINITY;
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = rng.uniform(-2, 0);
      hi[i] = lo[i] + rng.uniform(0.05, 3);
      shortest = std::min(shortest, hi[i] - lo[i]);
    }
    const Vec centre = scaled(add(lo, hi), 0.5);
    const Vec u = rng.gaussian_dir(static_cast<int>(d));
    Mat cut(0, d);
    cut.append_row(u);
    const Polytope k = Polytope::box(lo, hi).with_rows(cut, {dot(u, centre)});
    const double r = chebyshev_center(k).radius;
    const double need = shortest / (4.0 * static_cast<double>(d));
    box_margin = std::min(box_margin, r / need);
    if (r < need) ++box_bad;
  }
  return {lp_bad == 0 && kkt_bad == 0 && box_bad == 0,
          fmt("lp %d/200 mismatched (%d infeasible, max err %.1e); kkt %d/200 (worst %.1e); boxes %d/200 "
              "(min radius/bound %.2f)",
              lp_bad, lp_infeasible, lp_err, kkt_bad, kkt_worst, box_bad, box_margin)};
}

// --- 8: guess-and-double accounting -------------------------------------------------

struct TwoBody {
  std::size_t d;
  NormKind norm;
  double r0, R;
};

// x0 = 0; K1 = [r0, R+1] x [-1,1]^(d-1) at distance r0, then K2 = K1 with x1 >= R.
RunReport two_body(const TwoBody& tb) {
  Instance inst;
  inst.dim = tb.d;
  inst.norm = tb.norm;
  inst.x0 = Vec(tb.d, 0.0);
  inst.mode = Instance::Mode::oblivious;
  inst.step_budget = 10;
  Vec lo(tb.d, -1.0), hi(tb.d, 1.0);
  lo[0] = tb.r0;
  hi[0] = tb.R + 1;
  const Polytope k1 = Polytope::box(lo, hi);
  inst.requests.push_back({k1.a(), k1.b()});
  Vec e(tb.d, 0.0);
  e[0] = -1;
  Mat row(0, tb.d);
  row.append_row(e);
  inst.requests.push_back({row, {-tb.R}});
  RunConfig c;
  c.policy = PolicyKind::tighten;
  c.instance = inst;
  return run(c);
}

int expected_epochs(double R, double r0) { return static_cast<int>(std::ceil(std::log2(R / r0))) + 1; }

std::vector<TwoBody> two_body_cases(bool calibration) {
  std::vector<TwoBody> out;
  const std::vector<std::pair<double, double>> pairs =
      calibration ? std::vector<std::pair<double, double>>{{0.5, 3}, {0.3, 7}, {1.1, 12}}
                  : std::vector<std::pair<double, double>>{{0.3, 5}, {0.7, 10}, {0.25, 6.5}, {1.3, 20}};
  for (std::size_t d : {2u, 3u})
    for (NormKind n : {NormKind::L2, NormKind::Linf})
      for (const auto& [r0, R] : pairs) out.push_back({d, n, r0, R});
  return out;
}

Outcome doubling() {
  int bad_epochs = 0, bad_cost = 0, failed = 0;
  double worst = 0;
  const auto cases = two_body_cases(false);
  for (const TwoBody& tb : cases) {
    const RunReport r = two_body(tb);
    if (!r.ok()) ++failed;
    if (r.epochs != expected_epochs(tb.R, tb.r0)) ++bad_epochs;
    worst = std::max(worst, r.total_cost / tb.R);
    if (r.total_cost > kWrapperConst * tb.R) ++bad_cost;
    if (std::abs(r.opt - tb.R) > 1e-6 * tb.R) ++failed;
  }
  return {bad_epochs == 0 && bad_cost == 0 && failed == 0,
          fmt("%zu instances, %d epoch mismatches, %d over %.2f*R (worst %.2f*R), %d failed", cases.size(), bad_epochs,
              bad_cost, kWrapperConst, worst, failed)};
}

// --- 9: naive centroid on the pancake ----------------------------------------------

Outcome pancake_separation() {
  std::vector<RunConfig> cs;
  for (std::uint64_t s = 0; s < 10; ++s) {
    cs.push_back(config(PolicyKind::naive_centroid, Family::pancake, 3, s));
    cs.push_back(config(PolicyKind::tighten, Family::pancake, 3, s));
  }
  const auto reps = sweep(cs, kernels::max_threads());
  double worst = INFINITY;
  bool ok = true;
  for (std::size_t i = 0; i < reps.size(); i += 2) {
    if (!reps[i].ok() || !reps[i + 1].ok()) ok = false;
    worst = std::min(worst, reps[i].total_cost / reps[i + 1].total_cost);
  }
  return {ok && worst >= 3.0, fmt("smallest naive/tighten cost ratio over seeds 0..9: %.2f", worst)};
}

// --- calibration -------------------------------------------------------------------

int calibrate() {
  const auto reps = regression_sweep(kCalibSeed);
  std::map<int, int> peak;
  for (const RunReport& r : reps)
    for (const TightenCall& c : r.tighten_calls)
      if (c.frame_dim >= 2) peak[c.frame_dim] = std::max(peak[c.frame_dim], c.iterations);
  std::vector<double> x, y;
  for (const auto& [k, m] : peak) {
    x.push_back(iter_scale(k));
    y.push_back(m);
    std::printf("iterations: k=%d max %d\n", k, m);
  }
  auto [a, b] = fit_line(x, y);
  double shift = 0;
  for (std::size_t i = 0; i < x.size(); ++i) shift = std::max(shift, y[i] - (a + b * x[i]));
  std::printf("iteration bound: C = %.2f, C' = %.1f (least squares, lifted over every point, x1.25)\n", 1.25 * b,
              1.25 * (a + shift));

  for (const auto& [d, rs] : random_cut_ratios(kCalibSeed))
    std::printf("random-cuts d=%zu: max ratio %.3f -> ceiling %.1f\n", d, *std::max_element(rs.begin(), rs.end()),
                std::ceil(15 * *std::max_element(rs.begin(), rs.end())) / 10);

  double worst = 0;
  for (const TwoBody& tb : two_body_cases(true)) {
    const RunReport r = two_body(tb);
    std::printf("two-body d=%zu %s r0=%.2f R=%.1f: cost/R %.3f epochs %d (expected %d)\n", tb.d,
                std::string(to_string(tb.norm)).c_str(), tb.r0, tb.R, r.total_cost / tb.R, r.epochs,
                expected_epochs(tb.R, tb.r0));
    worst = std::max(worst, r.total_cost / tb.R);
  }
  std::printf("wrapper constant: %.2f (max cost/R x1.25)\n", 1.25 * worst);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::strcmp(argv[1], "--calibrate") == 0) return calibrate();
  int only = 0;
  if (argc > 2 && std::strcmp(argv[1], "--only") == 0) only = std::atoi(argv[2]);

  std::vector<RunReport> reps;
  double sweep_seconds = 0;
  auto need_sweep = [&] {
    if (!reps.empty()) return;
    const auto t0 = std::chrono::steady_clock::now();
    reps = regression_sweep(0);
    sweep_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"feasibility audit over the regression sweep", [&] { need_sweep(); return feasibility(reps, sweep_seconds); }},
      {"tighten iteration bound", [&] { need_sweep(); return iteration_bound(reps); }},
      {"competitive ratio trend on random cuts", ratio_trend},
      {"greedy self-contraction", [&] { need_sweep(); return greedy_contraction(reps); }},
      {"hypercube faces grow linearly in d", hypercube_growth},
      {"centroid cut volume fraction", centroid_cut_fraction},
      {"geometry oracles against brute force", geometry_oracles},
      {"guess-and-double accounting", doubling},
      {"naive centroid separation on the pancake", pancake_separation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, checks[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
