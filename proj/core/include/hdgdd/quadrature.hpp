#pragma once

#include <array>
#include <vector>

namespace hdgdd {

/// Rule on the reference triangle {(0,0),(1,0),(0,1)}; weights sum to 1/2.
struct TriangleQuadrature {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int exactness = 0;

  [[nodiscard]] int size() const { return static_cast<int>(weights.size()); }
};

/// Rule on [0,1]; weights sum to 1.
struct SegmentQuadrature {
  std::vector<double> points;
  std::vector<double> weights;
  int exactness = 0;

  [[nodiscard]] int size() const { return static_cast<int>(weights.size()); }
};

inline constexpr int max_quadrature_exactness = 40;

/// Cached rule exact for total degree <= exactness. Throws InputError above
/// max_quadrature_exactness.
[[nodiscard]] const TriangleQuadrature& triangle_quadrature(int exactness);
[[nodiscard]] const SegmentQuadrature& segment_quadrature(int exactness);

/// n-point Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights);

} // namespace hdgdd
