#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sasakian/chart.hpp"

namespace sasakian {

inline constexpr std::uint64_t kDefaultSeed = 7;

// Seeded sampler. Uniform variates are built from raw mt19937_64 output
// rather than std::uniform_real_distribution, whose algorithm differs between
// standard libraries; reports stay bit-identical across toolchains.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  Point point(int dim, double lo, double hi) {
    std::vector<double> c(static_cast<std::size_t>(dim));
    for (double& x : c) x = uniform(lo, hi);
    return Point(std::move(c));
  }

  std::vector<Point> points(std::size_t count, int dim, double lo, double hi) {
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(point(dim, lo, hi));
    return out;
  }

  // Nonzero vector with entries in [-1, 1].
  Eigen::VectorXd vector(int dim) {
    Eigen::VectorXd v(dim);
    do {
      for (int i = 0; i < dim; ++i) v(i) = uniform(-1.0, 1.0);
    } while (v.norm() < 1e-3);
    return v;
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sasakian
