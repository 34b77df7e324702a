#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace etm::svg {

// Minimal SVG 1.1 writer: enough for a scatter over polylines in [0,1]^2.
class Plot {
 public:
  Plot(double width = 640, double height = 480, double margin = 40)
      : w_(width), h_(height), m_(margin) {}

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                double stroke = 1.5) {
    if (pts.size() < 2) return;
    std::string d = "    <polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                    fmt(stroke) + "\" points=\"";
    for (const auto& [x, y] : pts) d += fmt(sx(x)) + "," + fmt(sy(y)) + " ";
    d += "\"/>\n";
    body_ += d;
  }

  void points(const std::vector<std::pair<double, double>>& pts, const std::string& color,
              double radius = 2.5) {
    for (const auto& [x, y] : pts) {
      body_ += "    <circle cx=\"" + fmt(sx(x)) + "\" cy=\"" + fmt(sy(y)) + "\" r=\"" +
               fmt(radius) + "\" fill=\"" + color + "\"/>\n";
    }
  }

  void write(std::ostream& os) const {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(w_)
       << "\" height=\"" << fmt(h_) << "\">\n"
       << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "  <g>\n"
       // axes box for the unit square
       << "    <rect x=\"" << fmt(sx(0)) << "\" y=\"" << fmt(sy(1)) << "\" width=\""
       << fmt(sx(1) - sx(0)) << "\" height=\"" << fmt(sy(0) - sy(1))
       << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n"
       << body_ << "  </g>\n</svg>\n";
  }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }
  double sx(double x) const { return m_ + x * (w_ - 2 * m_); }
  double sy(double y) const { return h_ - m_ - y * (h_ - 2 * m_); }

  double w_, h_, m_;
  std::string body_;
};

}  // namespace etm::svg
