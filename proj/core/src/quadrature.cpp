#include "hdgdd/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

#include "hdgdd/error.hpp"

namespace hdgdd {

void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights) {
  points.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 1) {
    points[0] = 0.5;
    weights[0] = 1.0;
    return;
  }
  for (int i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1,1] -> [0,1], ascending order.
    points[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (x + 1.0);
    weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
  }
}

namespace {

void check_exactness(int exactness) {
  if (exactness < 0 || exactness > max_quadrature_exactness) {
    throw InputError(fmt::format("quadrature exactness {} unsupported (max supported {})", exactness,
                                 max_quadrature_exactness));
  }
}

SegmentQuadrature make_segment(int exactness) {
  SegmentQuadrature q;
  q.exactness = exactness;
  const int n = std::max(1, (exactness + 2) / 2);
  gauss_legendre(n, q.points, q.weights);
  return q;
}

// Collapsed (Duffy) product rule: x = s (1 - t), y = t, dA = (1 - t) ds dt.
// The extra (1 - t) factor raises the degree in t by one.
TriangleQuadrature make_triangle(int exactness) {
  TriangleQuadrature q;
  q.exactness = exactness;
  const int n = std::max(1, (exactness + 3) / 2);
  std::vector<double> gp;
  std::vector<double> gw;
  gauss_legendre(n, gp, gw);
  q.points.reserve(static_cast<std::size_t>(n * n));
  q.weights.reserve(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) {
    const double t = gp[static_cast<std::size_t>(j)];
    for (int i = 0; i < n; ++i) {
      const double s = gp[static_cast<std::size_t>(i)];
      q.points.push_back({s * (1.0 - t), t});
      q.weights.push_back(gw[static_cast<std::size_t>(i)] * gw[static_cast<std::size_t>(j)] * (1.0 - t));
    }
  }
  return q;
}

template <class Rule, class Factory>
const Rule& cached(std::map<int, std::unique_ptr<Rule>>& cache, std::mutex& mutex, int exactness,
                   Factory make) {
  check_exactness(exactness);
  std::lock_guard lock(mutex);
  auto& slot = cache[exactness];
  if (!slot) {
    slot = std::make_unique<Rule>(make(exactness));
  }
  return *slot;
}

} // namespace

const TriangleQuadrature& triangle_quadrature(int exactness) {
  static std::map<int, std::unique_ptr<TriangleQuadrature>> cache;
  static std::mutex mutex;
  return cached(cache, mutex, exactness, make_triangle);
}

const SegmentQuadrature& segment_quadrature(int exactness) {
  static std::map<int, std::unique_ptr<SegmentQuadrature>> cache;
  static std::mutex mutex;
  return cached(cache, mutex, exactness, make_segment);
}

} // namespace hdgdd
