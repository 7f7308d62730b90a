#include "sasakian/riemannian.hpp"

#include <algorithm>
#include <cmath>

namespace sasakian {

MetricField::MetricField(TensorField g) : g_(std::move(g)) {
  if (!(g_.valence() == Valence{0, 2}))
    throw Error(ErrorCode::unsupported_valence,
                "metric must have valence (0,2), got " + to_string(g_.valence()));
}

Eigen::MatrixXd MetricField::at(const Point& p) const {
  Eigen::MatrixXd g = to_matrix(evaluate(g_, p));
  require_riemannian(g);
  return g;
}

void require_riemannian(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(g(i, j) - g(j, i)) > kMetricSymmetryTol)
        throw Error(ErrorCode::singular_metric, "metric is not symmetric");
  for (Eigen::Index k = 1; k <= n; ++k) {
    const double minor = g.topLeftCorner(k, k).determinant();
    if (!(minor > 0.0))
      throw Error(ErrorCode::singular_metric,
                  "metric is not positive definite (leading minor " + std::to_string(k) + ")");
  }
  if (g.determinant() < kSingularMetricDet)
    throw Error(ErrorCode::singular_metric, "metric determinant below 1e-12");
}

Eigen::MatrixXd to_matrix(const Tensor& t) {
  const int d = t.dim();
  if (t.valence().rank() != 2) throw Error(ErrorCode::unsupported_valence, "expected a rank-2 tensor");
  Eigen::MatrixXd m(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) m(a, b) = t(a, b);
  return m;
}

Eigen::VectorXd to_vector(const Tensor& t) {
  if (t.valence().rank() != 1) throw Error(ErrorCode::unsupported_valence, "expected a rank-1 tensor");
  return Eigen::Map<const Eigen::VectorXd>(t.values().data(), static_cast<Eigen::Index>(t.size()));
}

Eigen::VectorXd ChristoffelSymbols::contract(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(dim_);
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) r(k) += (*this)(k, i, j) * x(i) * y(j);
  return r;
}

ChristoffelSymbols christoffel_from_jet(const Jet& metric_jet) {
  const int d = metric_jet.value.dim();
  const Eigen::MatrixXd g = to_matrix(metric_jet.value);
  require_riemannian(g);
  const Eigen::MatrixXd ginv = g.inverse();
  auto dg = [&](int a, int b, int k) {
    return metric_jet.partial(static_cast<std::size_t>(a * d + b), k);
  };
  // first kind: Gamma_{ij,l}
  std::vector<double> first(static_cast<std::size_t>(d * d * d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l)
        first[static_cast<std::size_t>((i * d + j) * d + l)] =
            0.5 * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
  ChristoffelSymbols gamma(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += ginv(k, l) * first[static_cast<std::size_t>((i * d + j) * d + l)];
        gamma(k, i, j) = s;
        gamma(k, j, i) = s;
      }
  return gamma;
}

ChristoffelSymbols christoffel(const MetricField& metric, const Point& p) {
  return christoffel_from_jet(jet(metric.field(), p));
}

ChristoffelSymbols christoffel_fd(const MetricField& metric, const Point& p, double step) {
  return christoffel_from_jet(fd_derivative(metric.field(), p, step));
}

std::vector<double> covariant_differential(const ChristoffelSymbols& gamma, const Jet& field_jet) {
  const Valence v = field_jet.value.valence();
  const int d = field_jet.value.dim();
  if (gamma.dim() != d) throw Error(ErrorCode::dimension_mismatch, "connection and field dimensions differ");
  const auto& t = field_jet.value;
  const auto ud = static_cast<std::size_t>(d);
  std::vector<double> out(t.size() * ud);
  for (std::size_t c = 0; c < t.size(); ++c)
    for (int k = 0; k < d; ++k) out[c * ud + static_cast<std::size_t>(k)] = field_jet.partial(c, k);
  auto at = [&](std::size_t c, int k) -> double& { return out[c * ud + static_cast<std::size_t>(k)]; };

  if (v == Valence{0, 0}) {
    // plain differential
  } else if (v == Valence{1, 0}) {
    for (int a = 0; a < d; ++a)
      for (int k = 0; k < d; ++k)
        for (int c = 0; c < d; ++c) at(static_cast<std::size_t>(a), k) += gamma(a, k, c) * t[static_cast<std::size_t>(c)];
  } else if (v == Valence{0, 1}) {
    for (int a = 0; a < d; ++a)
      for (int k = 0; k < d; ++k)
        for (int c = 0; c < d; ++c) at(static_cast<std::size_t>(a), k) -= gamma(c, k, a) * t[static_cast<std::size_t>(c)];
  } else if (v == Valence{1, 1}) {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int k = 0; k < d; ++k) {
          double s = 0.0;
          for (int c = 0; c < d; ++c) s += gamma(a, k, c) * t(c, b) - gamma(c, k, b) * t(a, c);
          at(static_cast<std::size_t>(a * d + b), k) += s;
        }
  } else if (v == Valence{0, 2}) {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int k = 0; k < d; ++k) {
          double s = 0.0;
          for (int c = 0; c < d; ++c) s += gamma(c, k, a) * t(c, b) + gamma(c, k, b) * t(a, c);
          at(static_cast<std::size_t>(a * d + b), k) -= s;
        }
  } else {
    throw Error(ErrorCode::unsupported_valence,
                "covariant derivative of valence " + to_string(v) + " is not supported");
  }
  return out;
}

Tensor contract_direction(const std::vector<double>& differential, Valence valence, int dim,
                          const Eigen::VectorXd& x) {
  Tensor r(valence, dim);
  const auto ud = static_cast<std::size_t>(dim);
  for (std::size_t c = 0; c < r.size(); ++c) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += differential[c * ud + static_cast<std::size_t>(k)] * x(k);
    r[c] = s;
  }
  return r;
}

Eigen::VectorXd covariant_derivative_vector(const MetricField& metric, const TensorField& x,
                                            const TensorField& y, const Point& p) {
  if (!(x.valence() == Valence{1, 0}) || !(y.valence() == Valence{1, 0}))
    throw Error(ErrorCode::unsupported_valence, "covariant_derivative_vector needs two vector fields");
  return to_vector(covariant_derivative_tensor(metric, y, x, p));
}

Tensor covariant_derivative_tensor(const MetricField& metric, const TensorField& t,
                                   const TensorField& x, const Point& p) {
  if (metric.dim() != t.dim() || metric.dim() != x.dim())
    throw Error(ErrorCode::dimension_mismatch, "metric, field and direction live on different charts");
  const ChristoffelSymbols gamma = christoffel(metric, p);
  const std::vector<double> diff = covariant_differential(gamma, jet(t, p));
  return contract_direction(diff, t.valence(), t.dim(), to_vector(evaluate(x, p)));
}

double parallel_residual(const MetricField& metric, const TensorField& field,
                         std::span<const Point> points, std::span<const TensorField> directions) {
  double worst = 0.0;
  for (const Point& p : points) {
    const ChristoffelSymbols gamma = christoffel(metric, p);
    const std::vector<double> diff = covariant_differential(gamma, jet(field, p));
    for (const TensorField& x : directions) {
      const Tensor r = contract_direction(diff, field.valence(), field.dim(), to_vector(evaluate(x, p)));
      for (double c : r.values()) worst = std::max(worst, std::abs(c));
    }
  }
  return worst;
}

}  // namespace sasakian
