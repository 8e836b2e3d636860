#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ncc/harness.hpp"

namespace ncc {
namespace {

constexpr double kW = 480, kH = 480, kPad = 40;

struct Box {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  void fit(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    if (!init) {
      x0 = x1 = x;
      y0 = y1 = y;
      init = true;
      return;
    }
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  void pad() {
    const double dx = std::max(x1 - x0, 1e-9), dy = std::max(y1 - y0, 1e-9);
    x0 -= 0.05 * dx;
    x1 += 0.05 * dx;
    y0 -= 0.05 * dy;
    y1 += 0.05 * dy;
  }
  double px(double x) const { return kPad + (x - x0) / (x1 - x0) * (kW - 2 * kPad); }
  double py(double y) const { return kH - kPad - (y - y0) / (y1 - y0) * (kH - 2 * kPad); }
  bool init = false;
};

std::string header(const Box& b, const std::string& xl, const std::string& yl) {
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" viewBox=\"0 0 %g %g\">\n"
                "<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n"
                "<g class=\"axes\" stroke=\"black\" fill=\"none\">"
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\"/><line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\"/></g>\n"
                "<text x=\"%g\" y=\"%g\" font-size=\"12\">%s [%.3g, %.3g]</text>\n"
                "<text x=\"4\" y=\"14\" font-size=\"12\">%s [%.3g, %.3g]</text>\n",
                kW, kH, kW, kH, kPad, kH - kPad, kW - kPad, kH - kPad, kPad, kH - kPad, kPad, kPad, kPad, kH - 10,
                xl.c_str(), b.x0, b.x1, yl.c_str(), b.y0, b.y1);
  return buf;
}

}  // namespace

std::string trajectory_svg(const RunReport& r, std::size_t i, std::size_t j) {
  Box b;
  const bool usable = r.dim > std::max(i, j);
  if (usable) {
    if (!r.x0.empty()) b.fit(r.x0[i], r.x0[j]);
    for (const Vec& p : r.trajectory) b.fit(p[i], p[j]);
  }
  b.pad();
  std::ostringstream os;
  os << header(b, "x" + std::to_string(i), "x" + std::to_string(j));
  if (usable) {
    // Each request's halfspace boundaries, restricted to the plot window.
    for (const Request& q : r.requests) {
      os << "<g class=\"cut\" stroke=\"#bbb\" stroke-width=\"0.7\">";
      for (std::size_t k = 0; k < q.rows.rows(); ++k) {
        const double a = q.rows(k, i), c = q.rows(k, j), rhs = q.bounds[k];
        double xs[2], ys[2];
        if (std::abs(c) >= std::abs(a) && c != 0.0) {
          xs[0] = b.x0;
          xs[1] = b.x1;
          for (int e = 0; e < 2; ++e) ys[e] = (rhs - a * xs[e]) / c;
        } else if (a != 0.0) {
          ys[0] = b.y0;
          ys[1] = b.y1;
          for (int e = 0; e < 2; ++e) xs[e] = (rhs - c * ys[e]) / a;
        } else {
          continue;
        }
        char buf[200];
        std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/>",
                      std::clamp(b.px(xs[0]), -1e4, 1e4), std::clamp(b.py(ys[0]), -1e4, 1e4),
                      std::clamp(b.px(xs[1]), -1e4, 1e4), std::clamp(b.py(ys[1]), -1e4, 1e4));
        os << buf;
      }
      os << "</g>\n";
    }
    os << "<polyline class=\"trajectory\" fill=\"none\" stroke=\"#c03\" points=\"";
    if (!r.x0.empty()) os << b.px(r.x0[i]) << ',' << b.py(r.x0[j]) << ' ';
    for (const Vec& p : r.trajectory) os << b.px(p[i]) << ',' << b.py(p[j]) << ' ';
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string ratio_svg(const std::vector<CsvRow>& rows) {
  Box b;
  double finite_max = 1.0;
  for (const CsvRow& r : rows)
    if (std::isfinite(r.ratio)) finite_max = std::max(finite_max, r.ratio);
  for (const CsvRow& r : rows) b.fit(static_cast<double>(r.d), std::isfinite(r.ratio) ? r.ratio : finite_max);
  b.pad();
  std::ostringstream os;
  os << header(b, "d", "ratio");
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::vector<std::string> policies;
  for (const CsvRow& r : rows) {
    auto it = std::find(policies.begin(), policies.end(), r.policy);
    std::size_t idx = static_cast<std::size_t>(it - policies.begin());
    if (it == policies.end()) policies.push_back(r.policy);
    const double y = std::isfinite(r.ratio) ? r.ratio : finite_max;
    char buf[200];
    std::snprintf(buf, sizeof buf, "<circle class=\"marker\" cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n",
                  b.px(static_cast<double>(r.d)), b.py(y), colors[idx % 4]);
    os << buf;
  }
  for (std::size_t k = 0; k < policies.size(); ++k)
    os << "<text x=\"" << kW - 130 << "\" y=\"" << 20 + 14 * k << "\" font-size=\"12\" fill=\"" << colors[k % 4]
       << "\">" << policies[k] << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string trajectory_dat(const RunReport& r) {
  std::ostringstream os;
  os << "# step cost";
  for (std::size_t k = 0; k < r.dim; ++k) os << " x" << k;
  os << "\n";
  char buf[40];
  for (std::size_t t = 0; t < r.trajectory.size(); ++t) {
    os << t + 1;
    std::snprintf(buf, sizeof buf, " %.17g", r.per_step_cost[t]);
    os << buf;
    for (double v : r.trajectory[t]) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

std::string ratio_dat(const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << "# policy family d seed ratio\n";
  for (const CsvRow& r : rows) os << r.policy << ' ' << r.family << ' ' << r.d << ' ' << r.seed << ' ' << r.ratio << "\n";
  return os.str();
}

}  // namespace ncc
