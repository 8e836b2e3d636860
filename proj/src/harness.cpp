#include "ncc/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace ncc {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

std::string token(ErrorKind k) {
  std::string s(to_string(k));
  for (char& c : s)
    if (c == ' ') c = '_';
  return s;
}

// Re-checks emission t against every row of requests 0..t.
int audit(const std::vector<Vec>& traj, const std::vector<Request>& reqs) {
  int bad = 0;
  for (std::size_t t = 0; t < traj.size(); ++t) {
    bool ok = t < reqs.size();
    for (std::size_t q = 0; ok && q <= t; ++q) {
      const Request& r = reqs[q];
      for (std::size_t i = 0; i < r.rows.rows(); ++i) {
        const double nr = norm2(r.rows.row(i));
        if (dot(r.rows.row(i), traj[t]) - r.bounds[i] > kTolFeas * nr) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) ++bad;
  }
  return bad;
}

}  // namespace

double competitive_ratio(double total, double opt) {
  if (opt < 1e-12) return total < 1e-12 ? 1.0 : std::numeric_limits<double>::infinity();
  return total / opt;
}

RunReport run(const RunConfig& config) {
  const Instance& inst = config.instance;
  RunReport rep;
  rep.policy = std::string(to_string(config.policy));
  rep.label = config.label.empty() ? std::string(to_string(inst.family)) : config.label;
  rep.dim = inst.dim;
  rep.norm = inst.norm;
  rep.seed = inst.seed;
  rep.x0 = inst.x0;

  const auto t0 = std::chrono::steady_clock::now();
  RecursionTrace trace;
  try {
    const NormSpec norm(inst.norm, inst.dim);
    std::unique_ptr<RequestSource> src = make_source(inst);
    ChaseState state(*src, norm, inst.x0, inst.step_budget);
    try {
      if (state.open()) play(config.policy, state, config.policy_config, trace);
    } catch (const Error& e) {
      rep.error = e.kind();
      rep.message = e.what();
    }
    rep.trajectory = state.trajectory();
    rep.per_step_cost = state.per_step_cost();
    rep.requests = state.requests();
    rep.total_cost = 0.0;
    for (double c : rep.per_step_cost) rep.total_cost += c;
    if (!rep.requests.empty()) rep.opt = compute_opt(inst.x0, state.full_body(), norm);
  } catch (const Error& e) {
    if (!rep.error) {
      rep.error = e.kind();
      rep.message = e.what();
    }
  }
  rep.ratio = competitive_ratio(rep.total_cost, rep.opt);
  rep.violations = audit(rep.trajectory, rep.requests);
  rep.tighten_calls = trace.calls();
  rep.max_iterations = trace.max_iterations();
  rep.epochs = trace.epochs();
  rep.fallbacks = trace.fallbacks();
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<RunReport> sweep(const std::vector<RunConfig>& configs, int parallelism) {
  std::vector<RunReport> out(configs.size());
  const auto n = static_cast<long long>(configs.size());
  const int threads = std::max(1, parallelism);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = run(configs[static_cast<std::size_t>(i)]);
  (void)threads;
  return out;
}

std::string sweep_csv(const std::vector<RunReport>& reports) {
  std::ostringstream os;
  os << "policy,family,d,seed,total,opt,ratio,iters,time,status\n";
  for (const RunReport& r : reports) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%d,%.6f,", r.total_cost, r.opt, r.ratio, r.max_iterations,
                  r.wall_time);
    std::string status = "ok";
    if (r.error)
      status = token(*r.error);
    else if (r.violations > 0)
      status = "feasibility_violation";
    os << r.policy << ',' << r.label << ',' << r.dim << ',' << r.seed << ',' << buf << status << "\n";
  }
  return os.str();
}

std::vector<CsvRow> parse_sweep_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() < 9) throw Error(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": expected 9+ columns");
    try {
      CsvRow r;
      r.policy = f[0];
      r.family = f[1];
      r.d = std::stoul(f[2]);
      r.seed = std::stoull(f[3]);
      r.total = parse_double(f[4]);
      r.opt = parse_double(f[5]);
      r.ratio = parse_double(f[6]);
      r.iters = std::stoi(f[7]);
      r.time = parse_double(f[8]);
      r.status = f.size() > 9 ? f[9] : "ok";
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": malformed field");
    }
  }
  return rows;
}

std::string format_report(const RunReport& r) {
  std::ostringstream os;
  os << "ncr 1\n";
  os << "policy " << r.policy << "\n";
  os << "label " << r.label << "\n";
  os << "dim " << r.dim << "\n";
  os << "norm " << to_string(r.norm) << "\n";
  os << "seed " << r.seed << "\n";
  os << "status " << (r.error ? token(*r.error) : "ok") << "\n";
  if (!r.message.empty()) os << "message " << r.message << "\n";
  os << "total " << num(r.total_cost) << "\n";
  os << "opt " << num(r.opt) << "\n";
  os << "ratio " << num(r.ratio) << "\n";
  os << "violations " << r.violations << "\n";
  os << "max_iterations " << r.max_iterations << "\n";
  os << "epochs " << r.epochs << "\n";
  os << "wall_time " << num(r.wall_time) << "\n";
  os << "x0";
  for (double v : r.x0) os << ' ' << num(v);
  os << "\n";
  for (const TightenCall& c : r.tighten_calls)
    os << "tighten_call " << c.depth << ' ' << c.frame_dim << ' ' << c.iterations << "\n";
  for (const Request& q : r.requests) {
    os << "request " << q.rows.rows() << "\n";
    for (std::size_t i = 0; i < q.rows.rows(); ++i) {
      for (std::size_t j = 0; j < q.rows.cols(); ++j) os << num(q.rows(i, j)) << ' ';
      os << num(q.bounds[i]) << "\n";
    }
  }
  for (std::size_t t = 0; t < r.trajectory.size(); ++t) {
    os << "step " << num(r.per_step_cost[t]);
    for (double v : r.trajectory[t]) os << ' ' << num(v);
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

RunReport parse_report(std::string_view text) {
  RunReport r;
  std::istringstream all{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::size_t rows_left = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": " + what);
  };
  auto nums = [&](std::istringstream& in) {
    Vec v;
    std::string tok;
    while (in >> tok) {
      try {
        v.push_back(parse_double(tok));
      } catch (const std::logic_error&) {
        fail("malformed number '" + tok + "'");
      }
    }
    return v;
  };
  while (std::getline(all, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream in(line);
    if (rows_left > 0) {
      const Vec v = nums(in);
      if (v.size() != r.dim + 1) fail("request row has the wrong length");
      r.requests.back().rows.append_row(std::span<const double>(v.data(), r.dim));
      r.requests.back().bounds.push_back(v.back());
      --rows_left;
      continue;
    }
    std::string key;
    in >> key;
    if (lineno == 1) {
      if (key != "ncr") fail("expected header 'ncr 1'");
      continue;
    }
    std::string val;
    if (key == "policy") {
      in >> r.policy;
    } else if (key == "label") {
      in >> r.label;
    } else if (key == "dim") {
      in >> r.dim;
    } else if (key == "norm") {
      in >> val;
      if (auto n = parse_norm(val)) r.norm = *n;
      else fail("unknown norm");
    } else if (key == "seed") {
      in >> r.seed;
    } else if (key == "total") {
      r.total_cost = nums(in).at(0);
    } else if (key == "opt") {
      r.opt = nums(in).at(0);
    } else if (key == "ratio") {
      r.ratio = nums(in).at(0);
    } else if (key == "violations") {
      in >> r.violations;
    } else if (key == "max_iterations") {
      in >> r.max_iterations;
    } else if (key == "epochs") {
      in >> r.epochs;
    } else if (key == "wall_time") {
      r.wall_time = nums(in).at(0);
    } else if (key == "x0") {
      r.x0 = nums(in);
    } else if (key == "tighten_call") {
      TightenCall c{};
      in >> c.depth >> c.frame_dim >> c.iterations;
      r.tighten_calls.push_back(c);
    } else if (key == "request") {
      in >> rows_left;
      r.requests.push_back({Mat(0, r.dim), {}});
    } else if (key == "step") {
      Vec v = nums(in);
      if (v.size() != r.dim + 1) fail("step has the wrong length");
      r.per_step_cost.push_back(v[0]);
      r.trajectory.emplace_back(v.begin() + 1, v.end());
    } else if (key == "status" || key == "message" || key == "end") {
      if (key == "status") {
        in >> val;
        for (int k = 0; k <= static_cast<int>(ErrorKind::config_error); ++k)
          if (token(static_cast<ErrorKind>(k)) == val) r.error = static_cast<ErrorKind>(k);
      }
      if (key == "message") std::getline(in >> std::ws, r.message);
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::config_error, "cannot write " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config_error, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ncc
