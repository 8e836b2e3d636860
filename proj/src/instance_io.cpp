// .nci: line-oriented "key value..." text. Numbers are written with 17
// significant digits so a save/load round trip is bit-exact.

#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ncc/instances.hpp"

namespace ncc {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::parse_error, "line " + std::to_string(line) + ": " + what);
}

double parse_num(const std::string& tok, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    fail(line, "malformed number '" + tok + "'");
  return v;
}

Vec parse_nums(std::istringstream& in, std::size_t line) {
  Vec out;
  std::string tok;
  while (in >> tok) out.push_back(parse_num(tok, line));
  return out;
}

}  // namespace

std::string format_instance(const Instance& inst) {
  std::ostringstream os;
  os << "nci 1\n";
  os << "dim " << inst.dim << "\n";
  os << "norm " << to_string(inst.norm) << "\n";
  os << "x0";
  for (double v : inst.x0) os << ' ' << num(v);
  os << "\n";
  os << "steps " << inst.step_budget << "\n";
  if (inst.mode == Instance::Mode::scripted) {
    os << "mode scripted\n";
    os << "family " << to_string(inst.family) << "\n";
    os << "seed " << inst.seed << "\n";
    os << "density " << num(inst.params.density) << "\n";
    os << "delta " << num(inst.params.delta) << "\n";
    os << "rho " << num(inst.params.rho) << "\n";
    os << "drift " << num(inst.params.drift) << "\n";
  } else {
    os << "mode oblivious\n";
    for (const Request& r : inst.requests) {
      os << "request " << r.rows.rows() << "\n";
      for (std::size_t i = 0; i < r.rows.rows(); ++i) {
        for (std::size_t j = 0; j < r.rows.cols(); ++j) os << num(r.rows(i, j)) << ' ';
        os << num(r.bounds[i]) << "\n";
      }
    }
  }
  os << "end\n";
  return os.str();
}

Instance parse_instance(std::string_view text) {
  Instance inst;
  std::istringstream all{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  bool header = false, have_dim = false, have_mode = false, done = false;
  std::size_t rows_left = 0;
  while (std::getline(all, raw)) {
    ++line;
    if (raw.empty() || raw[0] == '#') continue;
    if (done) fail(line, "content after 'end'");
    std::istringstream in(raw);
    if (rows_left > 0) {
      const Vec v = parse_nums(in, line);
      if (v.size() != inst.dim + 1)
        fail(line, "expected " + std::to_string(inst.dim + 1) + " numbers in a request row, got " +
                       std::to_string(v.size()));
      Request& r = inst.requests.back();
      r.rows.append_row(std::span<const double>(v.data(), inst.dim));
      r.bounds.push_back(v.back());
      --rows_left;
      continue;
    }
    std::string key;
    in >> key;
    if (!header) {
      std::string ver;
      in >> ver;
      if (key != "nci" || ver != "1") fail(line, "expected header 'nci 1'");
      header = true;
      continue;
    }
    std::string val;
    if (key == "dim") {
      long long d = 0;
      if (!(in >> d) || d < 1) fail(line, "dim must be a positive integer");
      inst.dim = static_cast<std::size_t>(d);
      have_dim = true;
    } else if (key == "norm") {
      in >> val;
      const auto n = parse_norm(val);
      if (!n) fail(line, "unknown norm '" + val + "'");
      inst.norm = *n;
    } else if (key == "x0") {
      if (!have_dim) fail(line, "x0 before dim");
      inst.x0 = parse_nums(in, line);
      if (inst.x0.size() != inst.dim)
        fail(line, "x0 has " + std::to_string(inst.x0.size()) + " entries, dim is " + std::to_string(inst.dim));
    } else if (key == "steps") {
      if (!(in >> inst.step_budget) || inst.step_budget < 0) fail(line, "steps must be a nonnegative integer");
    } else if (key == "mode") {
      in >> val;
      if (val == "scripted")
        inst.mode = Instance::Mode::scripted;
      else if (val == "oblivious")
        inst.mode = Instance::Mode::oblivious;
      else
        fail(line, "unknown mode '" + val + "'");
      have_mode = true;
    } else if (key == "family") {
      in >> val;
      const auto f = parse_family(val);
      if (!f) fail(line, "unknown family '" + val + "'");
      inst.family = *f;
    } else if (key == "seed") {
      in >> val;
      char* end = nullptr;
      errno = 0;
      const unsigned long long s = std::strtoull(val.c_str(), &end, 10);
      if (val.empty() || *end != '\0' || errno == ERANGE) fail(line, "malformed seed '" + val + "'");
      inst.seed = s;
    } else if (key == "density" || key == "delta" || key == "rho" || key == "drift") {
      in >> val;
      const double v = parse_num(val, line);
      (key == "density" ? inst.params.density
       : key == "delta" ? inst.params.delta
       : key == "rho"   ? inst.params.rho
                        : inst.params.drift) = v;
    } else if (key == "request") {
      if (!have_dim) fail(line, "request before dim");
      long long k = 0;
      if (!(in >> k) || k < 1) fail(line, "request needs a positive row count");
      inst.requests.push_back({Mat(0, inst.dim), {}});
      rows_left = static_cast<std::size_t>(k);
    } else if (key == "end") {
      done = true;
    } else {
      fail(line, "unknown key '" + key + "'");
    }
    std::string extra;
    if (key != "x0" && in >> extra) fail(line, "unexpected trailing field '" + extra + "'");
  }
  if (!header) fail(line, "missing header 'nci 1'");
  if (rows_left > 0) fail(line, "file ends inside a request block");
  if (!done) fail(line, "missing 'end'");
  if (!have_dim) fail(line, "missing dim");
  if (!have_mode) fail(line, "missing mode");
  if (inst.x0.size() != inst.dim) fail(line, "missing x0");
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config_error, "cannot open instance file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::config_error, "cannot write instance file " + path);
  out << format_instance(inst);
}

}  // namespace ncc
