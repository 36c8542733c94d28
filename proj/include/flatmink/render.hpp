#pragma once

// SVG pictures of circles in the square chart [0,1)^2 of the torus: each axis
// goes through t -> atan(t)/pi + 1/2, so infinity sits on the edges.

#include <string>
#include <vector>

#include "flatmink/circles.hpp"

namespace flatmink {

struct RenderOptions {
  int size = 640;  // pixels per side
  int samples_per_branch = 600;
  /// Verticals x = g and horizontals y = g drawn as parallel classes.
  std::vector<double> grid{-10, -3, -1, 0, 1, 3, 10};
};

/// Chart coordinate in [0, 1) of a point of S^1.
double chart_coordinate(const ExtendedReal& t) noexcept;

/// One polyline per branch, infinite points marked with dots.
std::string render_svg(const std::vector<Circle>& circles, const RenderOptions& opts = {});

}  // namespace flatmink
