#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <hdgdd/basis.hpp>
#include <hdgdd/error.hpp>
#include <hdgdd/local_matrices.hpp>
#include <hdgdd/mesh.hpp>
#include <hdgdd/quadrature.hpp>

#include "oracle.hpp"

using namespace hdgdd;

namespace {

double apply(const TriangleQuadrature& rule, const std::function<double(double, double)>& f) {
  double s = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    const auto& p = rule.points[static_cast<std::size_t>(q)];
    s += rule.weights[static_cast<std::size_t>(q)] * f(p[0], p[1]);
  }
  return s;
}

double apply(const SegmentQuadrature& rule, const std::function<double(double)>& f) {
  double s = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    s += rule.weights[static_cast<std::size_t>(q)] * f(rule.points[static_cast<std::size_t>(q)]);
  }
  return s;
}

Mesh single(Point a, Point b, Point c) { return Mesh({a, b, c}, {Element{{0, 1, 2}}}); }

} // namespace

TEST(TriangleQuadrature, Examples) {
  const auto& r = triangle_quadrature(4);
  EXPECT_NEAR(apply(r, [](double, double) { return 1.0; }), 0.5, 1e-15);
  EXPECT_NEAR(apply(r, [](double x, double) { return x; }), 1.0 / 6, 1e-15);
  const double x2y = oracle::integrate_reference_triangle([](double x, double y) { return x * x * y; });
  EXPECT_NEAR(x2y, 1.0 / 60, 1e-15);
  EXPECT_NEAR(apply(r, [](double x, double y) { return x * x * y; }), x2y, 1e-15);
}

TEST(TriangleQuadrature, MonomialLadder) {
  for (int p : {0, 1, 2, 3, 5, 8, 12, 16, 24, 40}) {
    const auto& r = triangle_quadrature(p);
    EXPECT_GE(r.exactness, p);
    double wsum = 0.0;
    for (double w : r.weights) {
      EXPECT_GT(w, 0.0);
      wsum += w;
    }
    EXPECT_NEAR(wsum, 0.5, 1e-14);
    for (int a = 0; a <= p; ++a) {
      for (int b = 0; a + b <= p; ++b) {
        const double exact = oracle::monomial_integral(a, b);
        const double got = apply(r, [&](double x, double y) { return std::pow(x, a) * std::pow(y, b); });
        EXPECT_NEAR(got, exact, 1e-13 * exact) << "exactness " << p << " monomial " << a << "," << b;
      }
    }
  }
}

TEST(TriangleQuadrature, Errors) {
  EXPECT_THROW((void)triangle_quadrature(41), InputError);
  EXPECT_THROW((void)triangle_quadrature(-1), InputError);
  try {
    (void)triangle_quadrature(60);
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("40"), std::string::npos);
  }
}

TEST(SegmentQuadrature, Examples) {
  EXPECT_NEAR(apply(segment_quadrature(0), [](double) { return 1.0; }), 1.0, 1e-15);
  EXPECT_NEAR(apply(segment_quadrature(3), [](double x) { return x * x * x; }), 0.25, 1e-15);
  EXPECT_NEAR(apply(segment_quadrature(6), [](double x) { return std::pow(x, 6); }), 1.0 / 7, 1e-15);
}

TEST(SegmentQuadrature, LadderAgainstGolubWelsch) {
  const auto gw = oracle::golub_welsch(30);
  for (int p = 0; p <= 40; ++p) {
    const auto& r = segment_quadrature(p);
    for (int a = 0; a <= p; ++a) {
      const double exact = 1.0 / (a + 1);
      double ref = 0.0;
      for (std::size_t i = 0; i < gw.x.size(); ++i) {
        ref += gw.w[i] * std::pow(gw.x[i], a);
      }
      EXPECT_NEAR(ref, exact, 1e-13 * exact);
      EXPECT_NEAR(apply(r, [&](double x) { return std::pow(x, a); }), exact, 1e-13 * exact) << p << " " << a;
    }
  }
  EXPECT_THROW((void)segment_quadrature(41), InputError);
}

TEST(TriangleBasis, DimensionAndErrors) {
  for (int k = 0; k <= 5; ++k) {
    EXPECT_EQ(triangle_basis(k).dim(), (k + 1) * (k + 2) / 2);
  }
  EXPECT_THROW(TriangleBasis(-1), InputError);
}

TEST(TriangleBasis, GramIsScaledIdentity) {
  for (int k = 0; k <= 4; ++k) {
    const TriangleBasis& b = triangle_basis(k);
    Eigen::MatrixXd g(b.dim(), b.dim());
    for (int i = 0; i < b.dim(); ++i) {
      for (int j = 0; j < b.dim(); ++j) {
        g(i, j) = oracle::integrate_reference_triangle([&](double x, double y) {
          const Eigen::VectorXd v = b.values(x, y);
          return v[i] * v[j];
        });
      }
    }
    EXPECT_LT((2.0 * g - Eigen::MatrixXd::Identity(b.dim(), b.dim())).cwiseAbs().maxCoeff(), 1e-12) << k;
    EXPECT_NEAR(b.values(0.3, 0.2)[0], 1.0, 1e-14);
  }
}

TEST(TriangleBasis, MonomialReproduction) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k <= 4; ++k) {
    const TriangleBasis& b = triangle_basis(k);
    for (int a = 0; a <= k; ++a) {
      for (int c = 0; a + c <= k; ++c) {
        const auto m = [&](double x, double y) { return std::pow(x, a) * std::pow(y, c); };
        Eigen::VectorXd coeff(b.dim());
        for (int i = 0; i < b.dim(); ++i) {
          coeff[i] = 2.0 * oracle::integrate_reference_triangle([&](double x, double y) { return b.values(x, y)[i] * m(x, y); });
        }
        double err = 0.0;
        for (int s = 0; s < 20; ++s) {
          double x = u(rng);
          double y = u(rng);
          if (x + y > 1) {
            x = 1 - x;
            y = 1 - y;
          }
          err = std::max(err, std::abs(b.values(x, y).dot(coeff) - m(x, y)));
        }
        EXPECT_LE(err, 1e-10) << "k=" << k << " x^" << a << " y^" << c;
      }
    }
  }
}

TEST(TriangleBasis, GradientsMatchFiniteDifferences) {
  for (int k = 0; k <= 4; ++k) {
    const TriangleBasis& b = triangle_basis(k);
    for (const auto& p : std::vector<std::array<double, 2>>{{0.2, 0.3}, {0.6, 0.1}, {0.05, 0.9}}) {
      const Eigen::MatrixX2d g = b.gradients(p[0], p[1]);
      for (int i = 0; i < b.dim(); ++i) {
        const auto f = [&](double x, double y) { return b.values(x, y)[i]; };
        EXPECT_NEAR(g(i, 0), oracle::central_difference(f, p[0], p[1], 0, 1e-6), 1e-5);
        EXPECT_NEAR(g(i, 1), oracle::central_difference(f, p[0], p[1], 1, 1e-6), 1e-5);
      }
    }
  }
}

TEST(TriangleBasis, TablesMatchDirectEvaluation) {
  const auto& rule = triangle_quadrature(9);
  const auto& t = volume_table(3, 9);
  ASSERT_EQ(t.values.rows(), rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    const auto& p = rule.points[static_cast<std::size_t>(q)];
    EXPECT_LT((t.values.row(q).transpose() - triangle_basis(3).values(p[0], p[1])).norm(), 1e-14);
    EXPECT_LT((t.d_xi.row(q).transpose() - triangle_basis(3).gradients(p[0], p[1]).col(0)).norm(), 1e-12);
  }
}

TEST(SegmentBasis, OrthonormalAndDerivatives) {
  for (int k = 0; k <= 5; ++k) {
    const SegmentBasis b(k);
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; j <= k; ++j) {
        const double g = oracle::integrate_segment([&](double s) { return b.values(s)[i] * b.values(s)[j]; });
        EXPECT_NEAR(g, i == j ? 1.0 : 0.0, 1e-13);
      }
      const double h = 1e-6;
      const double fd = (b.values(0.37 + h)[i] - b.values(0.37 - h)[i]) / (2 * h);
      EXPECT_NEAR(b.derivatives(0.37)[i], fd, 1e-5);
    }
  }
}

TEST(ReferenceFaces, Parametrization) {
  // face f runs from vertex f to vertex f+1
  const auto a = reference_face_point(0, 0.25);
  EXPECT_DOUBLE_EQ(a[0], 0.25);
  EXPECT_DOUBLE_EQ(a[1], 0.0);
  const auto b = reference_face_point(1, 0.25);
  EXPECT_DOUBLE_EQ(b[0], 0.75);
  EXPECT_DOUBLE_EQ(b[1], 0.25);
  const auto c = reference_face_point(2, 0.25);
  EXPECT_DOUBLE_EQ(c[0], 0.0);
  EXPECT_DOUBLE_EQ(c[1], 0.75);
  EXPECT_THROW((void)reference_face_point(3, 0.5), MeshError);
}

TEST(LocalMass, PiecewiseConstant) {
  const Mesh m = single({0.1, 0.2}, {0.9, 0.3}, {0.4, 0.8});
  const Eigen::MatrixXd mass = local_mass_matrix(triangle_basis(0), m.geometry(0));
  ASSERT_EQ(mass.rows(), 1);
  const double area = 0.5 * ((0.9 - 0.1) * (0.8 - 0.2) - (0.4 - 0.1) * (0.3 - 0.2));
  EXPECT_NEAR(mass(0, 0), area, 1e-15);
}

TEST(LocalMass, SymmetricPositiveAndTraceOracle) {
  const Mesh m = oracle::perturbed_unit_square(2, 0.2, 3);
  for (int k = 0; k <= 3; ++k) {
    const TriangleBasis& b = triangle_basis(k);
    for (int e = 0; e < m.num_elements(); ++e) {
      const Eigen::MatrixXd mass = local_mass_matrix(b, m.geometry(e));
      EXPECT_LT((mass - mass.transpose()).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(mass).eigenvalues().minCoeff(), 0.0);
    }
  }
  // k=1 on the reference triangle, trace against an exactness-10 rule
  const Mesh ref = single({0, 0}, {1, 0}, {0, 1});
  const Eigen::MatrixXd mass = local_mass_matrix(triangle_basis(1), ref.geometry(0));
  const auto& r10 = triangle_quadrature(10);
  const double tr = apply(r10, [](double x, double y) { return triangle_basis(1).values(x, y).squaredNorm(); });
  EXPECT_NEAR(mass.trace(), tr, 1e-14);
  EXPECT_NEAR(mass.trace(), 1.5, 1e-14);
}

TEST(LocalMass, Errors) {
  const Mesh m = single({0, 0}, {1, 0}, {0, 1});
  ElementGeometry g = m.geometry(0);
  EXPECT_THROW((void)local_mass_matrix(triangle_basis(2), g, 3), InputError);
  g.det = 0.0;
  EXPECT_THROW((void)local_mass_matrix(triangle_basis(1), g), MeshError);
}

TEST(LocalFaceMass, Segments) {
  const Eigen::MatrixXd c = local_face_mass(SegmentBasis(0), SegmentBasis(0), 2.5);
  EXPECT_NEAR(c(0, 0), 2.5, 1e-15);
  const Eigen::MatrixXd m = local_face_mass(SegmentBasis(3), SegmentBasis(3), 0.7);
  EXPECT_LT((m - 0.7 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW((void)local_face_mass(SegmentBasis(1), SegmentBasis(1), 0.0), MeshError);
}

TEST(LocalFaceMass, TriangleAgainstSegment) {
  const Mesh m = single({0, 0}, {1, 0}, {0, 1});
  for (int k = 0; k <= 2; ++k) {
    const Eigen::MatrixXd b = local_face_mass(triangle_basis(k + 1), 0, SegmentBasis(k), m.geometry(0));
    EXPECT_EQ(b.rows(), triangle_dim(k + 1));
    EXPECT_EQ(b.cols(), k + 1);
  }
  // ∫_e x ds on the unit bottom face: x = c·φ with c the moments of x
  const TriangleBasis& b1 = triangle_basis(1);
  Eigen::VectorXd cx(3);
  for (int i = 0; i < 3; ++i) {
    cx[i] = 2.0 * oracle::integrate_reference_triangle([&](double x, double y) { return b1.values(x, y)[i] * x; });
  }
  const Eigen::MatrixXd fm = local_face_mass(b1, 0, SegmentBasis(0), m.geometry(0));
  EXPECT_NEAR(cx.dot(fm.col(0)), 0.5, 1e-14);
  // reversed orientation on a hypotenuse still integrates to the oracle value
  const Eigen::MatrixXd fr = local_face_mass(b1, 1, SegmentBasis(1), m.geometry(0), true);
  const double got = cx.dot(fr.col(1));
  const double want = oracle::integrate_edge({0, 1}, {1, 0}, [](double x, double, double s) {
    return x * std::sqrt(3.0) * (2 * s - 1);
  });
  EXPECT_NEAR(got, want, 1e-13);
}
