#pragma once

// Embeddings shared by the geometry tests.

#include <cmath>
#include <memory>
#include <vector>

#include "sasakian/contact.hpp"
#include "sasakian/hypersurface.hpp"

namespace sasakian::testing {

inline MetricField euclidean(int d) {
  std::vector<double> id(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) id[static_cast<std::size_t>(i * d + i)] = 1.0;
  return MetricField(constant_field(Valence{0, 2}, d, id));
}

inline std::shared_ptr<const AlmostContactMetricStructure> sasakian_ambient(int n) {
  return std::make_shared<const AlmostContactMetricStructure>(standard_sasakian(n));
}

// (s^1..s^2n) -> (s^1..s^2n, c)
inline ChartMap plane_map(int n, double c) {
  const int m = 2 * n;
  return ChartMap::generic(m, m + 1, [c](auto s) {
    using T = scalar_of<decltype(s)>;
    std::vector<T> x(s.begin(), s.end());
    x.push_back(T(c));
    return x;
  });
}

// (s^1..s^2n) -> (s^1..s^2n, |s|^2 / 2)
inline ChartMap quadric_map(int n) {
  const int m = 2 * n;
  return ChartMap::generic(m, m + 1, [](auto s) {
    using T = scalar_of<decltype(s)>;
    std::vector<T> x(s.begin(), s.end());
    T z(0.0);
    for (const T& v : s) z += 0.5 * v * v;
    x.push_back(z);
    return x;
  });
}

// (theta, phi) -> r (cos theta cos phi, sin theta cos phi, sin phi)
inline ChartMap sphere_map(double r) {
  return ChartMap::generic(2, 3, [r](auto s) {
    using std::cos;
    using std::sin;
    using T = scalar_of<decltype(s)>;
    return std::vector<T>{r * cos(s[0]) * cos(s[1]), r * sin(s[0]) * cos(s[1]), r * sin(s[1])};
  });
}

inline Embedding plane_in_sasakian(int n, double c) { return Embedding(plane_map(n, c), sasakian_ambient(n)); }
inline Embedding quadric_in_sasakian(int n) { return Embedding(quadric_map(n), sasakian_ambient(n)); }

}  // namespace sasakian::testing
