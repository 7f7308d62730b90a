#include "sasakian/hypersurface.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sasakian/sampling.hpp"

namespace sasakian {
namespace {

using testing::euclidean;

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

TEST(InducedMetric, FlatPlaneIsIdentity) {
  const Embedding e(testing::plane_map(1, 0.0), euclidean(3));
  const Eigen::MatrixXd g = induced_metric(e).at(Point({0.3, -0.8}));
  EXPECT_EQ(g, Eigen::Matrix2d::Identity());
}

TEST(InducedMetric, PullbackAgreesWithFiniteDifferenceJacobian) {
  const Embedding e = testing::plane_in_sasakian(1, 0.4);
  const Point p({0.5, -0.3});
  const Eigen::MatrixXd g = induced_metric(e).at(p);

  const double step = 1e-5;
  Eigen::MatrixXd b(3, 2);
  for (int i = 0; i < 2; ++i) {
    std::vector<double> lo(p.coords().begin(), p.coords().end());
    std::vector<double> hi = lo;
    lo[static_cast<std::size_t>(i)] -= step;
    hi[static_cast<std::size_t>(i)] += step;
    const std::vector<double> yl = e.map()(std::span<const double>(lo));
    const std::vector<double> yh = e.map()(std::span<const double>(hi));
    for (int a = 0; a < 3; ++a) b(a, i) = (yh[static_cast<std::size_t>(a)] - yl[static_cast<std::size_t>(a)]) / (2 * step);
  }
  const Eigen::MatrixXd gt = e.ambient_metric().at(e.image(p));
  EXPECT_LE(max_abs(g - b.transpose() * gt * b), 1e-6);
}

TEST(InducedMetric, PositiveOnRandomVectors) {
  const Embedding e = testing::quadric_in_sasakian(1);
  Sampler rng(19);
  const MetricField g = induced_metric(e);
  for (int i = 0; i < 100; ++i) {
    const Eigen::MatrixXd gm = g.at(rng.point(2, -1.0, 1.0));
    const Eigen::VectorXd x = rng.vector(2);
    EXPECT_GT(x.dot(gm * x), 0.0);
  }
}

TEST(UnitNormal, FlatPlanePositiveOrientation) {
  const Embedding e(testing::plane_map(1, 0.0), euclidean(3));
  const Eigen::VectorXd n = unit_normal(e, Point({0.2, 0.7}));
  EXPECT_NEAR(n(0), 0.0, 1e-15);
  EXPECT_NEAR(n(1), 0.0, 1e-15);
  EXPECT_NEAR(n(2), 1.0, 1e-15);
}

TEST(UnitNormal, SphereInwardFlag) {
  const Embedding e(testing::sphere_map(2.0), euclidean(3));
  const Eigen::VectorXd in = unit_normal(e, Point({0.0, 0.0}), Orientation::negative);
  EXPECT_NEAR(in(0), -1.0, 1e-15);
  EXPECT_NEAR(in(1), 0.0, 1e-15);
  EXPECT_NEAR(in(2), 0.0, 1e-15);
}

TEST(UnitNormal, SatisfiesDefiningEquationsOnSasakianPlane) {
  const Embedding e = testing::plane_in_sasakian(1, 0.1);
  Sampler rng(23);
  for (int k = 0; k < 20; ++k) {
    Point p = rng.point(2, -1.0, 1.0);
    if (std::abs(p[1]) < 0.1) continue;
    const Eigen::VectorXd n = unit_normal(e, p);
    const Eigen::MatrixXd gt = e.ambient_metric().at(e.image(p));
    const Eigen::MatrixXd b = e.jacobian(p);
    EXPECT_LE((b.transpose() * gt * n).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(n.dot(gt * n), 1.0, 1e-10);
    Eigen::Matrix3d frame;
    frame << b, n;
    EXPECT_GT(frame.determinant(), 0.0);
  }
}

TEST(Embedding, RejectsWrongArityAndRankDeficiency) {
  const ChartMap two = ChartMap::generic(2, 2, [](auto s) {
    using T = scalar_of<decltype(s)>;
    return std::vector<T>{s[0], s[1]};
  });
  try {
    (void)Embedding(two, euclidean(3));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::dimension_mismatch);
  }

  const ChartMap folded = ChartMap::generic(2, 3, [](auto s) {
    using T = scalar_of<decltype(s)>;
    return std::vector<T>{s[0], s[0], T(2.0) * s[0]};
  });
  const Embedding e(folded, euclidean(3));
  try {
    (void)gauss_weingarten(e, NormalField{}, Point({0.1, 0.2}));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::rank_deficient);
  }
}

TEST(GaussWeingarten, FlatPlaneIsTotallyGeodesic) {
  const Embedding e(testing::plane_map(1, 0.0), euclidean(3));
  const GaussWeingartenData gw = gauss_weingarten(e, NormalField{}, Point({0.4, -0.1}));
  EXPECT_EQ(max_abs(gw.h), 0.0);
  EXPECT_EQ(max_abs(gw.shape_w), 0.0);
  EXPECT_EQ(gw.w.cwiseAbs().maxCoeff(), 0.0);
  const std::vector<Point> pts{Point({0.1, 0.2}), Point({-0.5, 0.9})};
  EXPECT_EQ(second_fundamental_symmetry(e, NormalField{}, pts), 0.0);
}

TEST(GaussWeingarten, SphereInwardNormal) {
  for (double r : {2.0, 3.5}) {
    const Embedding e(testing::sphere_map(r), euclidean(3));
    const NormalField inward{Orientation::negative, std::nullopt};
    Sampler rng(29);
    for (int k = 0; k < 20; ++k) {
      const Point p = rng.point(2, -1.0, 1.0);
      const GaussWeingartenData gw = gauss_weingarten(e, inward, p);
      EXPECT_LE(max_abs(gw.h - gw.metric / r), 1e-6);
      EXPECT_LE(max_abs(gw.shape_h - Eigen::Matrix2d::Identity() / r), 1e-6);
    }
  }
}

TEST(GaussWeingarten, ReconstructionAndMetricityOnSasakianHypersurfaces) {
  for (int n : {1, 2}) {
    for (const Embedding& e : {testing::plane_in_sasakian(n, 0.1), testing::quadric_in_sasakian(n)}) {
      const MetricField g = induced_metric(e);
      Sampler rng(31);
      for (int k = 0; k < 20; ++k) {
        const Point p = rng.point(2 * n, -1.0, 1.0);
        const GaussWeingartenData gw = gauss_weingarten(e, NormalField{}, p);
        EXPECT_LE(gw.gauss_residual, 1e-6);
        EXPECT_LE(gw.weingarten_residual, 1e-6);
        // The tangential part of the ambient connection is Levi-Civita of g.
        const ChristoffelSymbols lc = christoffel(g, p);
        for (int a = 0; a < 2 * n; ++a)
          for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < 2 * n; ++j) EXPECT_NEAR(gw.connection(a, i, j), lc(a, i, j), 1e-6);
        // Unit normal: w = 0 and g(H_w X, Y) = -h(X, Y).
        EXPECT_LE(gw.w.cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LE(max_abs(gw.metric * gw.shape_w + gw.h), 1e-6);
        EXPECT_NEAR(gw.normal_norm_sq, 1.0, 1e-10);
      }
    }
  }
}

TEST(GaussWeingarten, ScaledNormalProductRule) {
  const Embedding e = testing::quadric_in_sasakian(1);
  NormalField scaled;
  scaled.scaling = TensorField::generic(Valence{0, 0}, 2, [](auto s) {
    using std::exp;
    using T = scalar_of<decltype(s)>;
    return std::vector<T>{exp(s[0] + s[1])};
  });
  Sampler rng(37);
  for (int k = 0; k < 20; ++k) {
    const Point p = rng.point(2, -1.0, 1.0);
    const double rho = std::exp(p[0] + p[1]);
    const GaussWeingartenData unit = gauss_weingarten(e, NormalField{}, p);
    const GaussWeingartenData gw = gauss_weingarten(e, scaled, p);
    // D(rho N) = d(rho) N + rho D N, so w = d log rho and H_w = rho H_w(unit).
    EXPECT_NEAR(gw.w(0), 1.0, 1e-6);
    EXPECT_NEAR(gw.w(1), 1.0, 1e-6);
    EXPECT_LE(max_abs(gw.shape_w - rho * unit.shape_w), 1e-6);
    EXPECT_LE(max_abs(gw.h - unit.h / rho), 1e-6);
    EXPECT_LE(gw.gauss_residual, 1e-6);
    EXPECT_LE(gw.weingarten_residual, 1e-6);
  }
}

TEST(GaussWeingarten, OrientationFlip) {
  const Embedding e = testing::quadric_in_sasakian(1);
  const Point p({0.3, -0.6});
  const GaussWeingartenData a = gauss_weingarten(e, NormalField{}, p);
  const GaussWeingartenData b = gauss_weingarten(e, NormalField{}.flipped(), p);
  EXPECT_LE(max_abs(a.h + b.h), 1e-12);
  EXPECT_LE(max_abs(a.shape_h + b.shape_h), 1e-12);
  EXPECT_LE(max_abs(a.shape_w + b.shape_w), 1e-12);
  EXPECT_LE((a.w - b.w).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GaussWeingarten, QuadricSymmetry) {
  const Embedding e = testing::quadric_in_sasakian(1);
  Sampler rng(41);
  const std::vector<Point> pts = rng.points(50, 2, -1.0, 1.0);
  EXPECT_LE(second_fundamental_symmetry(e, NormalField{}, pts), 1e-6);
}

}  // namespace
}  // namespace sasakian
