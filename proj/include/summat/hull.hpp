#pragma once

#include <vector>

namespace summat {

struct HullProjection {
  /// Closest point of the hull found.
  std::vector<double> point;
  /// Euclidean distance from the target to point.
  double distance = 0.0;
  /// Final duality gap 2<u - y, u - v> of the last linear step.
  double gap = 0.0;
  int iterations = 0;
};

/// Euclidean projection of y onto conv(vertices) by conditional-gradient
/// iterations with exact line search. Starts at the vertex closest to y and
/// stops once the duality gap drops below gap_tol.
HullProjection hull_project(const std::vector<std::vector<double>>& vertices,
                            const std::vector<double>& y, int max_iter = 500,
                            double gap_tol = 1e-8);

}  // namespace summat
