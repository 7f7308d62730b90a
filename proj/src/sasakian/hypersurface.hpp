#pragma once

// Parametric hypersurfaces b: R^m -> R^(m+1), their normals, and the Gauss and
// Weingarten decompositions of the ambient connection along them.
//
// frame_at<T> is generic so the same code yields values (T = double) and
// exact first partials along M (T = D1, which evaluates b at D2).

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sasakian/chart.hpp"
#include "sasakian/contact.hpp"
#include "sasakian/riemannian.hpp"
#include "sasakian/small_matrix.hpp"

namespace sasakian {

inline constexpr double kMinSingularValue = 1e-8;
inline constexpr double kMaxConditionNumber = 1e12;

class Embedding {
 public:
  // Ambient is a bare Riemannian chart (used for Euclidean regressions).
  Embedding(ChartMap map, MetricField ambient_metric);
  // Ambient carries a contact metric structure; its metric is used.
  Embedding(ChartMap map, std::shared_ptr<const AlmostContactMetricStructure> ambient);

  [[nodiscard]] int dim() const noexcept { return map_.in_dim(); }
  [[nodiscard]] int ambient_dim() const noexcept { return map_.out_size(); }
  [[nodiscard]] const ChartMap& map() const noexcept { return map_; }
  [[nodiscard]] const MetricField& ambient_metric() const noexcept { return metric_; }
  [[nodiscard]] const AlmostContactMetricStructure* contact() const noexcept { return contact_.get(); }

  [[nodiscard]] Point image(const Point& p) const;

  // Image and Jacobian B (ambient_dim x dim) at coordinates s.
  template <class T>
  void image_and_jacobian(std::span<const T> s, std::vector<T>& image, SmallMatrix<T>& b) const {
    const std::vector<Dual<T>> x = seed(s);
    const std::vector<Dual<T>> y = map_(std::span<const Dual<T>>(x));
    const auto m = s.size();
    image.resize(y.size());
    b = SmallMatrix<T>(y.size(), m);
    for (std::size_t a = 0; a < y.size(); ++a) {
      image[a] = y[a].value();
      for (std::size_t i = 0; i < m; ++i) b(a, i) = y[a].partial(i);
    }
  }

  [[nodiscard]] Eigen::MatrixXd jacobian(const Point& p) const;

 private:
  void validate() const;

  ChartMap map_;
  MetricField metric_;
  std::shared_ptr<const AlmostContactMetricStructure> contact_;
};

enum class Orientation { positive, negative };

// N = rho * N_unit. N_unit is g~-unit, g~-orthogonal to the image of B, and
// oriented so det[B | N_unit] > 0 (or < 0 for Orientation::negative).
struct NormalField {
  Orientation orientation = Orientation::positive;
  std::optional<ScalarField> scaling;  // rho on M; unit normal when empty

  [[nodiscard]] double sign() const noexcept { return orientation == Orientation::positive ? 1.0 : -1.0; }
  [[nodiscard]] NormalField flipped() const {
    NormalField f = *this;
    f.orientation = orientation == Orientation::positive ? Orientation::negative : Orientation::positive;
    return f;
  }
};

template <class T>
struct Frame {
  std::vector<T> image;
  SmallMatrix<T> b;
  SmallMatrix<T> ambient_g;
  std::vector<T> unit_normal;
  T rho{1.0};
  std::vector<T> normal;

  // [B | N], square.
  [[nodiscard]] SmallMatrix<T> full() const {
    const std::size_t d = b.rows();
    SmallMatrix<T> f(d, d);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t i = 0; i + 1 < d; ++i) f(a, i) = b(a, i);
      f(a, d - 1) = normal[a];
    }
    return f;
  }
};

namespace detail {

template <class T>
SmallMatrix<T> as_matrix(const std::vector<T>& v, std::size_t rows, std::size_t cols) {
  SmallMatrix<T> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = v[i * cols + j];
  return m;
}

// nu_a = det[B | e_a], so det[B | X] = nu(X) for every ambient X.
template <class T>
std::vector<T> cofactor_covector(const SmallMatrix<T>& b) {
  const std::size_t d = b.rows();
  const std::size_t m = b.cols();
  std::vector<T> nu(d);
  for (std::size_t a = 0; a < d; ++a) {
    SmallMatrix<T> minor(m, m);
    std::size_t r = 0;
    for (std::size_t row = 0; row < d; ++row) {
      if (row == a) continue;
      for (std::size_t j = 0; j < m; ++j) minor(r, j) = b(row, j);
      ++r;
    }
    const T det = determinant(std::move(minor));
    nu[a] = ((a + m) % 2 == 0) ? det : -det;
  }
  return nu;
}

}  // namespace detail

template <class T>
Frame<T> frame_at(const Embedding& e, const NormalField& nf, std::span<const T> s) {
  using std::sqrt;
  Frame<T> f;
  e.image_and_jacobian(s, f.image, f.b);
  const auto d = f.image.size();
  f.ambient_g = detail::as_matrix(e.ambient_metric().field().template at<T>(std::span<const T>(f.image)), d, d);

  const std::vector<T> nu = detail::cofactor_covector(f.b);
  const std::vector<T> raised = solve(f.ambient_g, std::span<const T>(nu));
  const T q = dot(std::span<const T>(nu), std::span<const T>(raised));
  if (!(value_of(q) > 0.0))
    throw Error(ErrorCode::rank_deficient, "Jacobian has no well-defined normal direction");
  const T scale = T(nf.sign()) / sqrt(q);
  f.unit_normal.resize(d);
  for (std::size_t a = 0; a < d; ++a) f.unit_normal[a] = scale * raised[a];

  if (nf.scaling) {
    f.rho = nf.scaling->template at<T>(s)[0];
    if (!(value_of(f.rho) > 0.0))
      throw Error(ErrorCode::invalid_argument, "normal scaling must be positive");
  } else {
    f.rho = T(1.0);
  }
  f.normal.resize(d);
  for (std::size_t a = 0; a < d; ++a) f.normal[a] = f.rho * f.unit_normal[a];
  return f;
}

// Values of a generic matrix/vector as Eigen objects.
template <class T>
Eigen::MatrixXd values(const SmallMatrix<T>& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value_of(m(i, j));
  return out;
}
template <class T>
Eigen::VectorXd values(const std::vector<T>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = value_of(v[i]);
  return out;
}

// Throws rank_deficient unless the smallest singular value exceeds
// kMinSingularValue.
void require_full_rank(const Eigen::MatrixXd& b);

// g(X, Y) = g~(BX, BY). Evaluable at double and D1.
MetricField induced_metric(const Embedding& e);

Eigen::VectorXd unit_normal(const Embedding& e, const Point& p,
                            Orientation orientation = Orientation::positive);

// Orientation making eta(N) >= 0 at the base point. Needs a contact ambient.
NormalField orient_lambda_nonnegative(const Embedding& e, NormalField n, const Point& base);

struct GaussWeingartenData {
  Eigen::MatrixXd jacobian;
  Eigen::VectorXd normal;
  double normal_norm_sq = 0.0;  // g~(N, N)
  Eigen::MatrixXd metric;
  ChristoffelSymbols connection{0};  // tangential part of D_X(BY)
  Eigen::MatrixXd h;              // h(e_i, e_j)
  Eigen::MatrixXd shape_w;        // column i is H_w e_i
  Eigen::VectorXd w;
  Eigen::MatrixXd shape_h;  // g^-1 h
  double gauss_residual = 0.0;
  double weingarten_residual = 0.0;
  double condition_number = 0.0;
};

GaussWeingartenData gauss_weingarten(const Embedding& e, const NormalField& n, const Point& p);

// max |h(e_i, e_j) - h(e_j, e_i)| over the points.
double second_fundamental_symmetry(const Embedding& e, const NormalField& n,
                                   std::span<const Point> points);

}  // namespace sasakian
