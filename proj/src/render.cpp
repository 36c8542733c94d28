#include "flatmink/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "flatmink/incidence.hpp"

namespace flatmink {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

double chart_of(double t) { return std::atan(t) / std::numbers::pi + 0.5; }

class Canvas {
 public:
  explicit Canvas(int size) : size_(size) {}

  double px(double u) const { return u * size_; }
  double py(double v) const { return (1.0 - v) * size_; }

  // Splits at the chart seam so a branch running off to infinity is not
  // joined across the square.
  void polyline(const std::vector<std::pair<double, double>>& uv, const char* colour) {
    std::vector<std::pair<double, double>> run;
    auto flush = [&] {
      if (run.size() >= 2) {
        out_ << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.6\" points=\"";
        for (const auto& [u, v] : run) out_ << px(u) << ',' << py(v) << ' ';
        out_ << "\"/>\n";
      }
      run.clear();
    };
    for (const auto& p : uv) {
      if (!run.empty() && (std::abs(p.first - run.back().first) > 0.5 || std::abs(p.second - run.back().second) > 0.5)) {
        flush();
      }
      run.push_back(p);
    }
    flush();
  }

  void dot(double u, double v, const char* colour) {
    out_ << "<circle cx=\"" << px(u) << "\" cy=\"" << py(v) << "\" r=\"4\" fill=\"" << colour << "\"/>\n";
  }

  void grid_line(double u, bool vertical) {
    out_ << "<line stroke=\"#cccccc\" stroke-width=\"0.8\" ";
    if (vertical) {
      out_ << "x1=\"" << px(u) << "\" y1=\"0\" x2=\"" << px(u) << "\" y2=\"" << size_ << "\"/>\n";
    } else {
      out_ << "x1=\"0\" y1=\"" << py(u) << "\" x2=\"" << size_ << "\" y2=\"" << py(u) << "\"/>\n";
    }
  }

  std::string finish() {
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size_ << "\" height=\"" << size_
        << "\" viewBox=\"0 0 " << size_ << ' ' << size_ << "\">\n"
        << "<rect width=\"" << size_ << "\" height=\"" << size_ << "\" fill=\"white\" stroke=\"black\"/>\n"
        << out_.str() << "</svg>\n";
    return svg.str();
  }

 private:
  int size_;
  std::ostringstream out_;
};

// Finite x on one side of `start`, spaced evenly in the chart.
std::vector<double> chart_samples(double start, int side, int n) {
  std::vector<double> xs;
  const double u0 = chart_of(start);
  const double u1 = side > 0 ? 1.0 : 0.0;
  for (int k = 1; k < n; ++k) {
    const double u = u0 + (u1 - u0) * k / n;
    xs.push_back(std::tan((u - 0.5) * std::numbers::pi));
  }
  return xs;
}

}  // namespace

double chart_coordinate(const ExtendedReal& t) noexcept {
  if (t.is_infinite()) return 0.0;
  return chart_of(t.value());
}

std::string render_svg(const std::vector<Circle>& circles, const RenderOptions& opts) {
  Canvas canvas(opts.size);
  for (double g : opts.grid) {
    canvas.grid_line(chart_of(g), true);
    canvas.grid_line(chart_of(g), false);
  }
  int index = 0;
  for (const Circle& c : circles) {
    const char* colour = kPalette[index++ % std::size(kPalette)];
    const auto cut = branch_point(c);
    std::vector<std::vector<double>> branches;
    if (cut) {
      branches.push_back(chart_samples(*cut, +1, opts.samples_per_branch));
      branches.push_back(chart_samples(*cut, -1, opts.samples_per_branch));
    } else {
      std::vector<double> xs = chart_samples(0.0, -1, opts.samples_per_branch);
      std::reverse(xs.begin(), xs.end());
      xs.push_back(0.0);
      for (double x : chart_samples(0.0, +1, opts.samples_per_branch)) xs.push_back(x);
      branches.push_back(std::move(xs));
    }
    for (const auto& xs : branches) {
      std::vector<std::pair<double, double>> uv;
      for (double x : xs) {
        const double y = eval_finite(c, x);
        if (std::isfinite(y)) uv.emplace_back(chart_of(x), chart_of(y));
      }
      canvas.polyline(uv, colour);
    }
    for (const TorusPoint& p : infinite_points(c)) canvas.dot(chart_coordinate(p.x), chart_coordinate(p.y), colour);
  }
  return canvas.finish();
}

}  // namespace flatmink
