#include "hdgdd/basis.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <fmt/format.h>

#include "hdgdd/error.hpp"
#include "hdgdd/quadrature.hpp"

namespace hdgdd {

namespace {

constexpr double centre = 1.0 / 3.0;

Eigen::VectorXd monomials(int degree, double xi, double eta) {
  Eigen::VectorXd m(triangle_dim(degree));
  const double x = xi - centre;
  const double y = eta - centre;
  int idx = 0;
  for (int d = 0; d <= degree; ++d) {
    for (int a = d; a >= 0; --a) {
      m[idx++] = std::pow(x, a) * std::pow(y, d - a);
    }
  }
  return m;
}

Eigen::MatrixX2d monomial_gradients(int degree, double xi, double eta) {
  Eigen::MatrixX2d g(triangle_dim(degree), 2);
  const double x = xi - centre;
  const double y = eta - centre;
  int idx = 0;
  for (int d = 0; d <= degree; ++d) {
    for (int a = d; a >= 0; --a) {
      const int b = d - a;
      g(idx, 0) = a > 0 ? a * std::pow(x, a - 1) * std::pow(y, b) : 0.0;
      g(idx, 1) = b > 0 ? b * std::pow(x, a) * std::pow(y, b - 1) : 0.0;
      ++idx;
    }
  }
  return g;
}

} // namespace

TriangleBasis::TriangleBasis(int degree) : degree_(degree), dim_(triangle_dim(degree)) {
  if (degree < 0) {
    throw InputError(fmt::format("basis degree {} must be non-negative", degree));
  }
  const auto& rule = triangle_quadrature(2 * degree);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int q = 0; q < rule.size(); ++q) {
    const auto& p = rule.points[static_cast<std::size_t>(q)];
    const Eigen::VectorXd m = monomials(degree, p[0], p[1]);
    gram.noalias() += 2.0 * rule.weights[static_cast<std::size_t>(q)] * m * m.transpose();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SolverError(fmt::format("monomial Gram matrix of degree {} not positive definite", degree));
  }
  // phi = L^{-1} m  => coefficient rows of L^{-1}.
  const Eigen::MatrixXd lower = llt.matrixL();
  coefficients_ = lower.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(dim_, dim_));
}

Eigen::VectorXd TriangleBasis::values(double xi, double eta) const {
  return coefficients_ * monomials(degree_, xi, eta);
}

Eigen::MatrixX2d TriangleBasis::gradients(double xi, double eta) const {
  return coefficients_ * monomial_gradients(degree_, xi, eta);
}

Eigen::VectorXd SegmentBasis::values(double s) const {
  Eigen::VectorXd v(dim());
  const double x = 2.0 * s - 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int a = 0; a <= degree_; ++a) {
    double pa = 0.0;
    if (a == 0) {
      pa = 1.0;
    } else if (a == 1) {
      pa = x;
    } else {
      pa = ((2.0 * a - 1.0) * x * p1 - (a - 1.0) * p0) / a;
      p0 = p1;
      p1 = pa;
    }
    v[a] = std::sqrt(2.0 * a + 1.0) * pa;
  }
  return v;
}

Eigen::VectorXd SegmentBasis::derivatives(double s) const {
  // P'_a = a (x P_a - P_{a-1}) / (x^2 - 1) is singular at the ends; use the
  // recurrence P'_{a} = P'_{a-2} + (2a-1) P_{a-1} instead.
  Eigen::VectorXd d(dim());
  const double x = 2.0 * s - 1.0;
  std::vector<double> p(static_cast<std::size_t>(degree_ + 1));
  std::vector<double> dp(static_cast<std::size_t>(degree_ + 1));
  for (int a = 0; a <= degree_; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    if (a == 0) {
      p[0] = 1.0;
      dp[0] = 0.0;
    } else if (a == 1) {
      p[1] = x;
      dp[1] = 1.0;
    } else {
      p[ua] = ((2.0 * a - 1.0) * x * p[ua - 1] - (a - 1.0) * p[ua - 2]) / a;
      dp[ua] = dp[ua - 2] + (2.0 * a - 1.0) * p[ua - 1];
    }
    d[a] = std::sqrt(2.0 * a + 1.0) * 2.0 * dp[ua];
  }
  return d;
}

const TriangleBasis& triangle_basis(int degree) {
  static std::map<int, std::unique_ptr<TriangleBasis>> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto& slot = cache[degree];
  if (!slot) {
    slot = std::make_unique<TriangleBasis>(degree);
  }
  return *slot;
}

std::array<double, 2> reference_face_point(int local_face, double s) {
  switch (local_face) {
    case 0: return {s, 0.0};
    case 1: return {1.0 - s, s};
    case 2: return {0.0, 1.0 - s};
    default: throw MeshError(fmt::format("local face {} out of range", local_face));
  }
}

const VolumeTable& volume_table(int degree, int exactness) {
  static std::map<std::pair<int, int>, std::unique_ptr<VolumeTable>> cache;
  static std::mutex mutex;
  const auto& basis = triangle_basis(degree);
  const auto& rule = triangle_quadrature(exactness);
  std::lock_guard lock(mutex);
  auto& slot = cache[{degree, exactness}];
  if (!slot) {
    auto table = std::make_unique<VolumeTable>();
    const int nq = rule.size();
    table->values.resize(nq, basis.dim());
    table->d_xi.resize(nq, basis.dim());
    table->d_eta.resize(nq, basis.dim());
    for (int q = 0; q < nq; ++q) {
      const auto& p = rule.points[static_cast<std::size_t>(q)];
      table->values.row(q) = basis.values(p[0], p[1]).transpose();
      const Eigen::MatrixX2d g = basis.gradients(p[0], p[1]);
      table->d_xi.row(q) = g.col(0).transpose();
      table->d_eta.row(q) = g.col(1).transpose();
    }
    slot = std::move(table);
  }
  return *slot;
}

const FaceTable& face_table(int volume_degree, int trace_degree, int exactness) {
  static std::map<std::tuple<int, int, int>, std::unique_ptr<FaceTable>> cache;
  static std::mutex mutex;
  const auto& basis = triangle_basis(volume_degree);
  const auto& rule = segment_quadrature(exactness);
  std::lock_guard lock(mutex);
  auto& slot = cache[{volume_degree, trace_degree, exactness}];
  if (!slot) {
    auto table = std::make_unique<FaceTable>();
    const SegmentBasis trace(trace_degree);
    const int nq = rule.size();
    table->trace_values.resize(nq, trace.dim());
    table->trace_values_reversed.resize(nq, trace.dim());
    for (int f = 0; f < 3; ++f) {
      table->volume_values[static_cast<std::size_t>(f)].resize(nq, basis.dim());
    }
    for (int q = 0; q < nq; ++q) {
      const double s = rule.points[static_cast<std::size_t>(q)];
      table->trace_values.row(q) = trace.values(s).transpose();
      table->trace_values_reversed.row(q) = trace.values(1.0 - s).transpose();
      for (int f = 0; f < 3; ++f) {
        const auto p = reference_face_point(f, s);
        table->volume_values[static_cast<std::size_t>(f)].row(q) = basis.values(p[0], p[1]).transpose();
      }
    }
    slot = std::move(table);
  }
  return *slot;
}

} // namespace hdgdd
