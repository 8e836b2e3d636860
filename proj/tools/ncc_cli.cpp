// ncc: run chasing policies, sweep them, write instances and plots.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncc/harness.hpp"

namespace {

using namespace ncc;

constexpr int kExitOk = 0, kExitConfig = 2, kExitFeasibility = 3, kExitNumerical = 4;

int exit_code(const RunReport& r) {
  if (r.violations > 0 || r.error == ErrorKind::feasibility_violation) return kExitFeasibility;
  if (!r.error) return kExitOk;
  if (*r.error == ErrorKind::config_error || *r.error == ErrorKind::parse_error ||
      *r.error == ErrorKind::contract_violation)
    return kExitConfig;
  return kExitNumerical;
}

struct Common {
  std::string policy = "tighten";
  std::string instance;
  std::string family = "random-cuts";
  std::string dims = "3";
  std::string norm = "L2";
  std::uint64_t seed = 0;
  int seeds = 10;
  int steps = -1;
  double delta_c = 0.01;
  int samples = -1;
  int burn = -1;
  int thin = -1;
  std::string out;
  int parallel = 1;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// "3", "2,4" or "2..6".
std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> out;
  for (const std::string& part : split_list(s)) {
    const auto dots = part.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoul(part));
      } else {
        const std::size_t lo = std::stoul(part.substr(0, dots)), hi = std::stoul(part.substr(dots + 2));
        for (std::size_t d = lo; d <= hi; ++d) out.push_back(d);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::config_error, "bad --d value '" + part + "'");
    }
  }
  for (std::size_t d : out)
    if (d < 1 || d > 16) throw Error(ErrorKind::config_error, "--d must lie in 1..16");
  return out;
}

PolicyConfig policy_config(const Common& c, std::uint64_t seed) {
  PolicyConfig pc;
  if (c.delta_c <= 0.0) throw Error(ErrorKind::config_error, "--delta-c must be positive");
  pc.delta_c = c.delta_c;
  if (c.samples > 0) {
    pc.sample_n = c.samples;
    pc.burn = std::max(50, c.samples / 4);
  }
  if (c.burn >= 0) pc.burn = c.burn;
  if (c.thin > 0) pc.thin = c.thin;
  pc.seed = seed;
  return pc;
}

NormKind norm_of(const Common& c) {
  const auto n = parse_norm(c.norm);
  if (!n) throw Error(ErrorKind::config_error, "unknown norm '" + c.norm + "'");
  return *n;
}

PolicyKind policy_of(const std::string& s) {
  const auto p = parse_policy(s);
  if (!p) throw Error(ErrorKind::config_error, "unknown policy '" + s + "'");
  return *p;
}

Family family_of(const std::string& s) {
  const auto f = parse_family(s);
  if (!f) throw Error(ErrorKind::config_error, "unknown family '" + s + "'");
  return *f;
}

void print_summary(const RunReport& r) {
  std::printf("policy %s  family %s  d %zu  seed %llu\n", r.policy.c_str(), r.label.c_str(), r.dim,
              static_cast<unsigned long long>(r.seed));
  std::printf("steps %zu  total %.6g  opt %.6g  ratio %.6g  tighten-iters %d  time %.3fs\n", r.trajectory.size(),
              r.total_cost, r.opt, r.ratio, r.max_iterations, r.wall_time);
  if (r.error) std::printf("error: %s\n", r.message.c_str());
  if (r.violations > 0) std::printf("audit: %d emitted points outside the body\n", r.violations);
}

int cmd_run(const Common& c) {
  RunConfig cfg;
  cfg.policy = policy_of(c.policy);
  if (!c.instance.empty()) {
    cfg.instance = load_instance(c.instance);
    cfg.label = c.instance;
  } else {
    const auto dims = parse_dims(c.dims);
    if (dims.size() != 1) throw Error(ErrorKind::config_error, "run takes a single --d");
    cfg.instance = make_instance(family_of(c.family), dims[0], norm_of(c), c.seed, c.steps);
  }
  if (c.steps >= 0) cfg.instance.step_budget = c.steps;
  cfg.policy_config = policy_config(c, c.seed);
  const RunReport r = run(cfg);
  print_summary(r);
  if (!c.out.empty()) write_text(c.out, format_report(r));
  return exit_code(r);
}

int cmd_sweep(const Common& c) {
  std::vector<std::string> policies = c.policy == "all" ? std::vector<std::string>{"greedy", "naive-centroid", "tighten"}
                                                        : split_list(c.policy);
  std::vector<std::string> families;
  if (c.family == "all")
    for (Family f : kAllFamilies) families.emplace_back(to_string(f));
  else
    families = split_list(c.family);
  const auto dims = parse_dims(c.dims);
  const NormKind norm = norm_of(c);
  std::vector<RunConfig> configs;
  for (const std::string& p : policies)
    for (const std::string& f : families)
      for (std::size_t d : dims)
        for (int s = 0; s < c.seeds; ++s) {
          const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(s);
          RunConfig cfg;
          cfg.policy = policy_of(p);
          const Family fam = family_of(f);
          cfg.instance = make_instance(fam, d, norm, seed, c.steps);
          cfg.policy_config = policy_config(c, seed);
          configs.push_back(std::move(cfg));
        }
  const std::vector<RunReport> reports = sweep(configs, c.parallel);
  const std::string csv = sweep_csv(reports);
  if (c.out.empty())
    std::cout << csv;
  else
    write_text(c.out, csv);
  int code = kExitOk;
  int failed = 0;
  for (const RunReport& r : reports) {
    const int e = exit_code(r);
    if (e != kExitOk) ++failed;
    if (e == kExitFeasibility || (e != kExitOk && code == kExitOk)) code = e;
  }
  std::fprintf(stderr, "%zu runs, %d failed\n", reports.size(), failed);
  return code;
}

int cmd_gen(const Common& c) {
  const auto dims = parse_dims(c.dims);
  if (dims.size() != 1) throw Error(ErrorKind::config_error, "gen takes a single --d");
  if (c.out.empty()) throw Error(ErrorKind::config_error, "gen needs --out");
  save_instance(make_instance(family_of(c.family), dims[0], norm_of(c), c.seed, c.steps), c.out);
  return kExitOk;
}

int cmd_plot(const Common& c, const std::string& report, const std::string& csv) {
  if (c.out.empty()) throw Error(ErrorKind::config_error, "plot needs --out (file prefix)");
  if (!report.empty()) {
    const RunReport r = parse_report(read_text(report));
    write_text(c.out + ".svg", trajectory_svg(r));
    write_text(c.out + ".dat", trajectory_dat(r));
  } else if (!csv.empty()) {
    const auto rows = parse_sweep_csv(read_text(csv));
    write_text(c.out + ".svg", ratio_svg(rows));
    write_text(c.out + ".dat", ratio_dat(rows));
  } else {
    throw Error(ErrorKind::config_error, "plot needs --report or --csv");
  }
  return kExitOk;
}

void add_common(CLI::App* app, Common& c, bool multi) {
  app->add_option("--policy", c.policy, multi ? "greedy|naive-centroid|tighten, comma list or all" : "policy");
  app->add_option("--instance", c.instance, "instance file (.nci)");
  app->add_option("--family", c.family, multi ? "family, comma list or all" : "generator family");
  app->add_option("--d", c.dims, multi ? "dimensions: 3, 2,4 or 2..6" : "dimension");
  app->add_option("--norm", c.norm, "L1|L2|Linf");
  app->add_option("--seed", c.seed, multi ? "first seed" : "seed");
  app->add_option("--steps", c.steps, "step budget (default per family)");
  app->add_option("--delta-c", c.delta_c, "constant c in the skinny threshold");
  app->add_option("--samples", c.samples, "hit-and-run sample count");
  app->add_option("--burn", c.burn, "hit-and-run burn-in");
  app->add_option("--thin", c.thin, "hit-and-run thinning");
  app->add_option("--out", c.out, "output path");
  app->add_option("--parallel", c.parallel, "concurrent runs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nested convex body chasing"};
  app.require_subcommand(1);
  Common run_c, sweep_c, gen_c, plot_c;
  std::string report, csv;
  CLI::App* run_cmd = app.add_subcommand("run", "play one policy on one instance");
  add_common(run_cmd, run_c, false);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "policies x families x d x seeds, CSV out");
  add_common(sweep_cmd, sweep_c, true);
  sweep_cmd->add_option("--seeds", sweep_c.seeds, "number of seeds");
  CLI::App* gen_cmd = app.add_subcommand("gen", "write a scripted instance file");
  add_common(gen_cmd, gen_c, false);
  CLI::App* plot_cmd = app.add_subcommand("plot", "SVG and .dat from a report or a sweep CSV");
  plot_cmd->add_option("--report", report, "run report (.ncr)");
  plot_cmd->add_option("--csv", csv, "sweep CSV");
  plot_cmd->add_option("--out", plot_c.out, "output prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  try {
    if (*run_cmd) return cmd_run(run_c);
    if (*sweep_cmd) return cmd_sweep(sweep_c);
    if (*gen_cmd) return cmd_gen(gen_c);
    if (*plot_cmd) return cmd_plot(plot_c, report, csv);
  } catch (const Error& e) {
    std::fprintf(stderr, "ncc: %s\n", e.what());
    switch (e.kind()) {
      case ErrorKind::config_error:
      case ErrorKind::parse_error:
      case ErrorKind::contract_violation: return kExitConfig;
      case ErrorKind::feasibility_violation: return kExitFeasibility;
      default: return kExitNumerical;
    }
  }
  return kExitOk;
}
