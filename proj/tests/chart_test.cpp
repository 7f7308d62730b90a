#include "sasakian/chart.hpp"

#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "sasakian/contact.hpp"
#include "sasakian/sampling.hpp"

namespace sasakian {
namespace {

TensorField scalar(int dim, auto f) {
  return TensorField::generic(Valence{0, 0}, dim, [f](auto x) {
    using T = scalar_of<decltype(x)>;
    return std::vector<T>{f(x)};
  });
}

TEST(Evaluate, ConstantAndIdentity) {
  const TensorField c = constant_field(Valence{0, 1}, 3, {1.5, -2.0, 0.25});
  const Tensor t = evaluate(c, Point({0.3, 0.1, -9.0}));
  EXPECT_EQ(t[0], 1.5);
  EXPECT_EQ(t[1], -2.0);
  EXPECT_EQ(t[2], 0.25);

  const Tensor id = evaluate(identity_field(3), Point({1.0, 2.0, 3.0}));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) EXPECT_EQ(id(a, b), a == b ? 1.0 : 0.0);
}

TEST(Evaluate, ContactFormReadOff) {
  // eta = (dz - y dx)/2 at y = 2
  const auto s = standard_sasakian(1);
  const Tensor eta = evaluate(s.eta, Point({1.0, 2.0, 0.0}));
  EXPECT_DOUBLE_EQ(eta[0], -1.0);
  EXPECT_DOUBLE_EQ(eta[1], 0.0);
  EXPECT_DOUBLE_EQ(eta[2], 0.5);
}

TEST(Evaluate, DimensionMismatch) {
  const TensorField c = constant_field(Valence{1, 0}, 3, {1, 2, 3});
  try {
    (void)evaluate(c, Point({1.0, 2.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
}

TEST(Evaluate, NonFiniteNamesComponent) {
  const TensorField f = TensorField::generic(Valence{1, 0}, 2, [](auto x) {
    using T = scalar_of<decltype(x)>;
    return std::vector<T>{x[0], T(1.0) / x[1]};
  });
  try {
    (void)evaluate(f, Point({1.0, 0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::non_finite);
    EXPECT_NE(std::strstr(e.what(), "component 1"), nullptr);
  }
}

TEST(Jet, PolynomialByHand) {
  const TensorField f = scalar(2, [](auto x) { return x[0] * x[0] * x[1]; });
  const Jet j = jet(f, Point({1.0, 2.0}), 2);
  EXPECT_EQ(j.value[0], 2.0);
  EXPECT_EQ(j.partial(0, 0), 4.0);
  EXPECT_EQ(j.partial(0, 1), 1.0);
  EXPECT_EQ(j.second(0, 0, 0), 4.0);
  EXPECT_EQ(j.second(0, 0, 1), 2.0);
  EXPECT_EQ(j.second(0, 1, 0), 2.0);
  EXPECT_EQ(j.second(0, 1, 1), 0.0);
}

TEST(Jet, ConstantHasZeroPartials) {
  const Jet j = jet(constant_field(Valence{0, 2}, 2, {1, 2, 3, 4}), Point({0.5, 0.5}));
  for (double p : j.partials) EXPECT_EQ(p, 0.0);
}

TEST(Jet, DivisionByZeroInsideDual) {
  const TensorField f = scalar(1, [](auto x) { return 1.0 / x[0]; });
  try {
    (void)jet(f, Point({0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dual_division_by_zero);
  }
}

// Random cubic in three variables; coefficients drawn once per test.
struct Cubic {
  std::vector<double> c;
  template <class T>
  T operator()(std::span<const T> x) const {
    T s(c[0]);
    std::size_t k = 1;
    for (int i = 0; i < 3; ++i) s += c[k++] * x[i];
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) s += c[k++] * x[i] * x[j];
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        for (int l = j; l < 3; ++l) s += c[k++] * x[i] * x[j] * x[l];
    return s;
  }
};

TEST(Jet, CubicAgreesWithFiniteDifferences) {
  Sampler rng(11);
  Cubic poly;
  for (int i = 0; i < 20; ++i) poly.c.push_back(rng.uniform(-2.0, 2.0));
  const TensorField f = scalar(3, [poly](auto x) { return poly(x); });
  for (int trial = 0; trial < 20; ++trial) {
    const Point p = rng.point(3, -1.0, 1.0);
    const Jet ad = jet(f, p);
    const Jet fd = fd_derivative(f, p, 1e-5);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(ad.partial(0, k), fd.partial(0, k), 1e-6);
  }
}

TEST(Jet, QuadraticsExactByHand) {
  // q(x) = a + b.x + x^T C x with symmetric C has gradient b + 2 C x.
  Sampler rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = rng.uniform(-1, 1);
    Eigen::Vector3d b;
    for (int i = 0; i < 3; ++i) b(i) = rng.uniform(-1, 1);
    Eigen::Matrix3d c;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j) c(i, j) = c(j, i) = rng.uniform(-1, 1);
    const TensorField f = scalar(3, [a, b, c](auto x) {
      using T = scalar_of<decltype(x)>;
      T s(a);
      for (int i = 0; i < 3; ++i) {
        s += b(i) * x[i];
        for (int j = 0; j < 3; ++j) s += c(i, j) * x[i] * x[j];
      }
      return s;
    });
    const Point p = rng.point(3, -1.0, 1.0);
    const Eigen::Vector3d x(p[0], p[1], p[2]);
    const Eigen::Vector3d grad = b + 2.0 * c * x;
    const Jet j = jet(f, p);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(j.partial(0, k), grad(k), 1e-12);
  }
}

TEST(FdDerivative, SquareAtThree) {
  const TensorField f = scalar(1, [](auto x) { return x[0] * x[0]; });
  const Jet j = fd_derivative(f, Point({3.0}), 1e-5);
  EXPECT_NEAR(j.partial(0, 0), 6.0, 1e-9);
}

TEST(FdDerivative, ConstantIsZero) {
  const Jet j = fd_derivative(constant_field(Valence{0, 0}, 2, {4.0}), Point({1.0, 1.0}));
  EXPECT_EQ(j.partial(0, 0), 0.0);
  EXPECT_EQ(j.partial(0, 1), 0.0);
}

TEST(FdDerivative, RejectsBadStepAndStencilOutsideDomain) {
  const TensorField f(Valence{0, 0},
                      ChartMap::generic(1, 1, [](auto x) {
                        using T = scalar_of<decltype(x)>;
                        return std::vector<T>{x[0]};
                      }).with_domain([](std::span<const double> x) { return x[0] > 0.0; }));
  EXPECT_THROW((void)fd_derivative(f, Point({1.0}), 0.0), Error);
  try {
    (void)fd_derivative(f, Point({1e-6}), 1e-5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::outside_domain);
  }
}

TEST(FdDerivative, AgreesWithJetOnSasakianMetric) {
  for (int n : {1, 2}) {
    const auto s = standard_sasakian(n);
    Sampler rng(3);
    for (int i = 0; i < 50; ++i) {
      const Point p = rng.point(s.dim(), -1.0, 1.0);
      const Jet ad = jet(s.g.field(), p);
      const Jet fd = fd_derivative(s.g.field(), p);
      for (std::size_t k = 0; k < ad.partials.size(); ++k)
        EXPECT_NEAR(ad.partials[k], fd.partials[k], 1e-6);
    }
  }
}

TEST(Purity, RepeatedEvaluationIsBitwiseIdentical) {
  const auto s = standard_sasakian(2);
  const Point p({0.1, -0.4, 0.7, 0.2, -0.9});
  const Jet a = jet(s.g.field(), p, 2);
  const Jet b = jet(s.g.field(), p, 2);
  ASSERT_EQ(a.partials.size(), b.partials.size());
  EXPECT_EQ(std::memcmp(a.partials.data(), b.partials.data(), a.partials.size() * sizeof(double)), 0);
  EXPECT_EQ(std::memcmp(a.second_partials.data(), b.second_partials.data(),
                        a.second_partials.size() * sizeof(double)),
            0);
}

TEST(Point, RejectsNonFinite) {
  EXPECT_THROW(Point({1.0, std::nan("")}), Error);
}

}  // namespace
}  // namespace sasakian
