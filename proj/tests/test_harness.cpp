#include <cmath>
#include <string>

#include "doctest.h"
#include "ncc/harness.hpp"

using namespace ncc;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

RunConfig config(PolicyKind p, Family f, std::size_t d, std::uint64_t seed, NormKind n = NormKind::L2) {
  RunConfig c;
  c.policy = p;
  c.instance = make_instance(f, d, n, seed);
  c.policy_config.sample_n = 1500;
  c.policy_config.burn = 400;
  c.policy_config.seed = seed;
  return c;
}

// CSV with the time column blanked.
std::string without_time(const std::string& csv) {
  std::string out;
  std::size_t start = 0;
  while (start < csv.size()) {
    const std::size_t end = csv.find('\n', start);
    std::string line = csv.substr(start, end - start);
    std::size_t commas = 0, a = 0, b = 0;
    for (std::size_t i = 0; i < line.size(); ++i)
      if (line[i] == ',') {
        ++commas;
        if (commas == 8) a = i;
        if (commas == 9) b = i;
      }
    if (a && b) line = line.substr(0, a + 1) + line.substr(b);
    out += line + "\n";
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("ratio conventions") {
    CHECK(competitive_ratio(0, 0) == 1.0);
    CHECK(std::isinf(competitive_ratio(1, 0)));
    CHECK(competitive_ratio(3, 1.5) == doctest::Approx(2));
  }

  TEST_CASE("empty stream reports cost 0, opt 0, ratio 1") {
    RunConfig c = config(PolicyKind::tighten, Family::random_cuts, 2, 0);
    c.instance.step_budget = 0;
    const RunReport r = run(c);
    CHECK(r.ok());
    CHECK(r.trajectory.empty());
    CHECK(r.total_cost == 0.0);
    CHECK(r.opt == 0.0);
    CHECK(r.ratio == 1.0);
  }

  TEST_CASE("every policy ends feasible and pays at least opt") {
    for (PolicyKind p : {PolicyKind::greedy, PolicyKind::naive_centroid, PolicyKind::tighten})
      for (Family f : kAllFamilies) {
        const RunReport r = run(config(p, f, 2, 3));
        CHECK_MESSAGE(r.ok(), to_string(p), " ", to_string(f), " ", r.message);
        CHECK(r.violations == 0);
        CHECK(r.opt <= r.total_cost + 1e-6);
      }
  }

  TEST_CASE("greedy on concentric balls is near optimal") {
    RunConfig c = config(PolicyKind::greedy, Family::shrinking_ball, 2, 0);
    c.instance.params.drift = 0.0;
    const RunReport r = run(c);
    REQUIRE(r.ok());
    CHECK(r.ratio >= 1 - 1e-9);
    CHECK(r.ratio <= 2);
  }

  TEST_CASE("replaying a scripted instance reproduces the report") {
    const RunConfig c = config(PolicyKind::tighten, Family::random_cuts, 3, 5);
    const RunReport a = run(c);
    const RunConfig c2 = {c.policy, parse_instance(format_instance(c.instance)), c.policy_config, ""};
    const RunReport b = run(c2);
    CHECK(a.trajectory == b.trajectory);
    CHECK(a.per_step_cost == b.per_step_cost);
    CHECK(a.total_cost == b.total_cost);
    CHECK(a.opt == b.opt);
  }

  TEST_CASE("sweep output does not depend on parallelism") {
    std::vector<RunConfig> cs;
    for (PolicyKind p : {PolicyKind::greedy, PolicyKind::tighten})
      for (std::uint64_t s = 0; s < 3; ++s) cs.push_back(config(p, Family::random_cuts, 2, s));
    const std::string one = sweep_csv(sweep(cs, 1)), eight = sweep_csv(sweep(cs, 8));
    CHECK(without_time(one) == without_time(eight));
  }

  TEST_CASE("sweep cardinality and csv parsing") {
    std::vector<RunConfig> cs;
    for (PolicyKind p : {PolicyKind::greedy, PolicyKind::naive_centroid, PolicyKind::tighten})
      for (std::size_t d = 2; d <= 5; ++d)
        for (std::uint64_t s = 0; s < 10; ++s) cs.push_back(config(p, Family::hypercube_faces, d, s));
    const std::string csv = sweep_csv(sweep(cs, 1));
    CHECK(count(csv, "\n") == 121);
    CHECK(csv.rfind("policy,family,d,seed,total,opt,ratio,iters,time,status\n", 0) == 0);
    const auto rows = parse_sweep_csv(csv);
    REQUIRE(rows.size() == 120);
    CHECK(rows[0].family == "hypercube-faces");
    for (const CsvRow& r : rows) CHECK(r.status == "ok");
    CHECK(count(ratio_svg(rows), "class=\"marker\"") == 120);
    CHECK(count(ratio_dat(rows), "\n") == 121);
  }

  TEST_CASE("malformed csv rows are parse errors") {
    CHECK_THROWS_AS(parse_sweep_csv("h\ngreedy,x,2\n"), Error);
    CHECK_THROWS_AS(parse_sweep_csv("h\ngreedy,x,two,0,1,1,1,0,0,ok\n"), Error);
  }

  TEST_CASE("trajectory plot draws one cut group per request") {
    const RunReport r = run(config(PolicyKind::greedy, Family::random_cuts, 2, 1));
    REQUIRE(r.ok());
    const std::string svg = trajectory_svg(r);
    CHECK(count(svg, "class=\"cut\"") == r.requests.size());
    CHECK(count(svg, "<polyline") == 1);
    CHECK(count(trajectory_dat(r), "\n") == r.trajectory.size() + 1);
  }

  TEST_CASE("empty report plots empty axes") {
    const RunReport r;
    const std::string svg = trajectory_svg(r);
    CHECK(count(svg, "<svg") == 1);
    CHECK(count(svg, "class=\"axes\"") == 1);
    CHECK(count(svg, "class=\"cut\"") == 0);
    CHECK(count(ratio_svg({}), "class=\"marker\"") == 0);
  }

  TEST_CASE("report files round trip") {
    const RunReport r = run(config(PolicyKind::naive_centroid, Family::hypercube_faces, 3, 2));
    const RunReport b = parse_report(format_report(r));
    CHECK(b.policy == r.policy);
    CHECK(b.dim == r.dim);
    CHECK(b.total_cost == r.total_cost);
    CHECK(b.trajectory == r.trajectory);
    CHECK(b.requests.size() == r.requests.size());
    CHECK(b.error.has_value() == r.error.has_value());
    CHECK_THROWS_AS(parse_report("ncr 1\ndim 2\nbogus 3\n"), Error);
  }
}
