#pragma once

// Run loop, reports and sweeps.

#include <optional>
#include <string>
#include <vector>

#include "ncc/chase.hpp"
#include "ncc/instances.hpp"

namespace ncc {

struct RunConfig {
  PolicyKind policy = PolicyKind::tighten;
  Instance instance;
  PolicyConfig policy_config;
  std::string label;  ///< family name or instance path, echoed in reports
};

struct RunReport {
  std::string policy;
  std::string label;
  std::size_t dim = 0;
  NormKind norm = NormKind::L2;
  std::uint64_t seed = 0;
  Vec x0;

  std::vector<Vec> trajectory;
  std::vector<double> per_step_cost;
  std::vector<Request> requests;
  double total_cost = 0.0;
  double opt = 0.0;
  double ratio = 1.0;

  std::vector<TightenCall> tighten_calls;
  int max_iterations = 0;
  int epochs = 0;
  int fallbacks = 0;
  /// Emitted points found outside the body by the post-run audit.
  int violations = 0;
  double wall_time = 0.0;

  std::optional<ErrorKind> error;
  std::string message;

  bool ok() const { return !error && violations == 0; }
};

/// total / opt, with the empty-game and zero-opt conventions.
double competitive_ratio(double total, double opt);

RunReport run(const RunConfig& config);

/// Runs configs in parallel (per-run seeding keeps the result independent of
/// the thread count). Failures are recorded per report.
std::vector<RunReport> sweep(const std::vector<RunConfig>& configs, int parallelism);

/// Columns: policy,family,d,seed,total,opt,ratio,iters,time,status.
std::string sweep_csv(const std::vector<RunReport>& reports);

std::string format_report(const RunReport& r);
RunReport parse_report(std::string_view text);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

struct CsvRow {
  std::string policy, family;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  double total = 0, opt = 0, ratio = 0, time = 0;
  int iters = 0;
  std::string status;
};
std::vector<CsvRow> parse_sweep_csv(std::string_view text);

// --- plots --------------------------------------------------------------------

/// Trajectory projected on coordinates (i, j); one class="cut" element per request.
std::string trajectory_svg(const RunReport& r, std::size_t i = 0, std::size_t j = 1);
/// Ratio against d; one class="marker" element per row.
std::string ratio_svg(const std::vector<CsvRow>& rows);
std::string trajectory_dat(const RunReport& r);
std::string ratio_dat(const std::vector<CsvRow>& rows);

}  // namespace ncc
