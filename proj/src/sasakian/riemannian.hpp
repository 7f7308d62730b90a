#pragma once

// Levi-Civita connection of a metric on a chart and covariant derivatives of
// the tensor valences the engine works with: (0,0), (1,0), (0,1), (1,1), (0,2).

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sasakian/chart.hpp"

namespace sasakian {

inline constexpr double kSingularMetricDet = 1e-12;
inline constexpr double kMetricSymmetryTol = 1e-12;

class MetricField {
 public:
  explicit MetricField(TensorField g);

  [[nodiscard]] const TensorField& field() const noexcept { return g_; }
  [[nodiscard]] int dim() const noexcept { return g_.dim(); }

  // Components at p as a matrix; validates symmetry and positive definiteness.
  [[nodiscard]] Eigen::MatrixXd at(const Point& p) const;

 private:
  TensorField g_;
};

// Throws unless g is symmetric (to kMetricSymmetryTol) with positive leading
// principal minors.
void require_riemannian(const Eigen::MatrixXd& g);

Eigen::MatrixXd to_matrix(const Tensor& t);
Eigen::VectorXd to_vector(const Tensor& t);

class ChristoffelSymbols {
 public:
  explicit ChristoffelSymbols(int dim) : dim_(dim), gamma_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}

  [[nodiscard]] int dim() const noexcept { return dim_; }

  // Gamma^k_ij
  double& operator()(int k, int i, int j) { return gamma_[index(k, i, j)]; }
  double operator()(int k, int i, int j) const { return gamma_[index(k, i, j)]; }

  // Gamma^k_ij X^i Y^j
  [[nodiscard]] Eigen::VectorXd contract(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

 private:
  [[nodiscard]] std::size_t index(int k, int i, int j) const {
    return static_cast<std::size_t>((k * dim_ + i) * dim_ + j);
  }
  int dim_;
  std::vector<double> gamma_;
};

// Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij) from a metric jet.
ChristoffelSymbols christoffel_from_jet(const Jet& metric_jet);

ChristoffelSymbols christoffel(const MetricField& metric, const Point& p);

// Same formula with metric partials taken by central differences.
ChristoffelSymbols christoffel_fd(const MetricField& metric, const Point& p,
                                  double step = kDefaultFdStep);

// Full covariant differential: components of nabla T with one extra trailing
// covariant index, i.e. (nabla_k T)[c] at c*dim + k.
std::vector<double> covariant_differential(const ChristoffelSymbols& gamma, const Jet& field_jet);

// nabla_X T for the direction X at the point.
Tensor contract_direction(const std::vector<double>& differential, Valence valence, int dim,
                          const Eigen::VectorXd& x);

// (nabla_X Y)^k = X^i (d_i Y^k + Gamma^k_ij Y^j)
Eigen::VectorXd covariant_derivative_vector(const MetricField& metric, const TensorField& x,
                                            const TensorField& y, const Point& p);

Tensor covariant_derivative_tensor(const MetricField& metric, const TensorField& t,
                                   const TensorField& x, const Point& p);

// max over points and directions of the largest component of nabla_X field.
double parallel_residual(const MetricField& metric, const TensorField& field,
                         std::span<const Point> points, std::span<const TensorField> directions);

}  // namespace sasakian
