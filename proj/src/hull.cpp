#include "summat/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "summat/scalar.hpp"

namespace summat {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

HullProjection hull_project(const std::vector<std::vector<double>>& vertices,
                            const std::vector<double>& y, int max_iter, double gap_tol) {
  if (vertices.empty()) throw DomainError("hull projection needs at least one vertex");
  for (const auto& v : vertices) {
    if (v.size() != y.size()) throw DimensionError("hull vertex and target differ in dimension");
  }
  std::size_t start = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    double d = dist2(vertices[i], y);
    if (d < best) {
      best = d;
      start = i;
    }
  }
  HullProjection out;
  std::vector<double> u = vertices[start];
  std::vector<double> g(y.size());
  for (int it = 0; it < max_iter; ++it) {
    // Gradient of |u - y|^2 / 2 is g = u - y; the linear oracle minimizes <g, v>.
    for (std::size_t i = 0; i < y.size(); ++i) g[i] = u[i] - y[i];
    std::size_t s = 0;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      double v = dot(g, vertices[i]);
      if (v < lo) {
        lo = v;
        s = i;
      }
    }
    const auto& vs = vertices[s];
    out.gap = 2.0 * (dot(g, u) - lo);
    out.iterations = it;
    if (out.gap < gap_tol) break;
    double denom = dist2(u, vs);
    if (denom == 0.0) break;
    double gamma = std::clamp((dot(g, u) - lo) / denom, 0.0, 1.0);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += gamma * (vs[i] - u[i]);
    out.iterations = it + 1;
  }
  out.distance = std::sqrt(dist2(u, y));
  out.point = std::move(u);
  return out;
}

}  // namespace summat
