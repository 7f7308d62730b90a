#include "sasakian/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sasakian {

Embedding::Embedding(ChartMap map, MetricField ambient_metric)
    : map_(std::move(map)), metric_(std::move(ambient_metric)) {
  validate();
}

Embedding::Embedding(ChartMap map, std::shared_ptr<const AlmostContactMetricStructure> ambient)
    : map_(std::move(map)),
      metric_(ambient ? ambient->g : throw Error(ErrorCode::invalid_argument, "null ambient structure")),
      contact_(std::move(ambient)) {
  validate();
}

void Embedding::validate() const {
  if (map_.in_dim() < 1)
    throw Error(ErrorCode::invalid_argument, "embedding needs at least one coordinate");
  if (map_.out_size() != map_.in_dim() + 1)
    throw Error(ErrorCode::dimension_mismatch,
                "hypersurface map from " + std::to_string(map_.in_dim()) + " coordinates must have " +
                    std::to_string(map_.in_dim() + 1) + " components, got " +
                    std::to_string(map_.out_size()));
  if (metric_.dim() != map_.out_size())
    throw Error(ErrorCode::dimension_mismatch,
                "ambient of dimension " + std::to_string(metric_.dim()) + " for a map into R^" +
                    std::to_string(map_.out_size()));
  if (!map_.supports<D2>())
    throw Error(ErrorCode::not_differentiable, "embedding map must be twice differentiable");
}

Point Embedding::image(const Point& p) const { return Point(map_(p.coords())); }

Eigen::MatrixXd Embedding::jacobian(const Point& p) const {
  std::vector<double> img;
  SmallMatrix<double> b;
  image_and_jacobian(p.coords(), img, b);
  return values(b);
}

void require_full_rank(const Eigen::MatrixXd& b) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smallest = sv.size() == 0 ? 0.0 : sv(sv.size() - 1);
  if (!(smallest > kMinSingularValue))
    throw Error(ErrorCode::rank_deficient,
                "Jacobian is rank deficient (smallest singular value " + std::to_string(smallest) + ")");
}

MetricField induced_metric(const Embedding& e) {
  const int m = e.dim();
  const auto um = static_cast<std::size_t>(m);
  return MetricField(TensorField(
      Valence{0, 2}, ChartMap::generic_first_order(m, m * m, [e, um](auto s) {
        using T = scalar_of<decltype(s)>;
        std::vector<T> img;
        SmallMatrix<T> b;
        e.image_and_jacobian(s, img, b);
        const auto d = img.size();
        const auto gt = detail::as_matrix(e.ambient_metric().field().template at<T>(std::span<const T>(img)), d, d);
        std::vector<T> g(um * um, T(0.0));
        for (std::size_t i = 0; i < um; ++i)
          for (std::size_t j = 0; j < um; ++j)
            for (std::size_t a = 0; a < d; ++a)
              for (std::size_t c = 0; c < d; ++c) g[i * um + j] += b(a, i) * gt(a, c) * b(c, j);
        return g;
      })));
}

Eigen::VectorXd unit_normal(const Embedding& e, const Point& p, Orientation orientation) {
  require_full_rank(e.jacobian(p));
  NormalField nf;
  nf.orientation = orientation;
  return values(frame_at(e, nf, p.coords()).unit_normal);
}

NormalField orient_lambda_nonnegative(const Embedding& e, NormalField n, const Point& base) {
  if (e.contact() == nullptr)
    throw Error(ErrorCode::invalid_argument, "lambda orientation needs a contact ambient");
  const Frame<double> f = frame_at(e, n, base.coords());
  const Eigen::VectorXd eta = to_vector(evaluate(e.contact()->eta, Point(f.image)));
  if (eta.dot(values(f.normal)) < 0.0) return n.flipped();
  return n;
}

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

GaussWeingartenData gauss_weingarten(const Embedding& e, const NormalField& n, const Point& p) {
  const int m = e.dim();
  const int d = e.ambient_dim();
  if (p.dim() != m)
    throw Error(ErrorCode::dimension_mismatch, "point dimension does not match the hypersurface chart");

  const std::vector<D1> s = seed(p.coords());
  const Frame<D1> f = frame_at(e, n, std::span<const D1>(s));

  GaussWeingartenData out;
  out.connection = ChristoffelSymbols(m);
  out.jacobian = values(f.b);
  require_full_rank(out.jacobian);
  out.normal = values(f.normal);

  const Eigen::MatrixXd gt = values(f.ambient_g);
  out.normal_norm_sq = out.normal.dot(gt * out.normal);
  out.metric = out.jacobian.transpose() * gt * out.jacobian;

  Eigen::MatrixXd frame(d, d);
  frame << out.jacobian, out.normal;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(frame);
  const Eigen::VectorXd sv = svd.singularValues();
  out.condition_number = sv(d - 1) > 0.0 ? sv(0) / sv(d - 1) : INFINITY;
  if (!(out.condition_number <= kMaxConditionNumber))
    throw Error(ErrorCode::ill_conditioned,
                "frame [B | N] has condition number " + std::to_string(out.condition_number));
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(frame);

  std::vector<double> img(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) img[static_cast<std::size_t>(a)] = value_of(f.image[static_cast<std::size_t>(a)]);
  const ChristoffelSymbols ambient = christoffel(e.ambient_metric(), Point(img));

  // d_k of column j of B and of N, as ambient vectors.
  auto partial_b = [&](int j, int k) {
    Eigen::VectorXd v(d);
    for (int a = 0; a < d; ++a) v(a) = f.b(static_cast<std::size_t>(a), static_cast<std::size_t>(j)).partial(static_cast<std::size_t>(k));
    return v;
  };
  auto partial_n = [&](int k) {
    Eigen::VectorXd v(d);
    for (int a = 0; a < d; ++a) v(a) = f.normal[static_cast<std::size_t>(a)].partial(static_cast<std::size_t>(k));
    return v;
  };

  out.h = Eigen::MatrixXd::Zero(m, m);
  out.shape_w = Eigen::MatrixXd::Zero(m, m);
  out.w = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXd bi = out.jacobian.col(i);
    for (int j = 0; j < m; ++j) {
      // D_{e_i}(B e_j) = d_i(B e_j) + Gamma~(B e_i, B e_j)
      const Eigen::VectorXd target = partial_b(j, i) + ambient.contract(bi, out.jacobian.col(j));
      const Eigen::VectorXd c = lu.solve(target);
      out.gauss_residual = std::max(out.gauss_residual, max_abs(frame * c - target));
      for (int k = 0; k < m; ++k) out.connection(k, i, j) = c(k);
      out.h(i, j) = c(m);
    }
    const Eigen::VectorXd target = partial_n(i) + ambient.contract(bi, out.normal);
    const Eigen::VectorXd c = lu.solve(target);
    out.weingarten_residual = std::max(out.weingarten_residual, max_abs(frame * c - target));
    out.shape_w.col(i) = c.head(m);
    out.w(i) = c(m);
  }
  out.shape_h = out.metric.inverse() * out.h;
  return out;
}

double second_fundamental_symmetry(const Embedding& e, const NormalField& n,
                                   std::span<const Point> points) {
  double worst = 0.0;
  for (const Point& p : points) {
    const GaussWeingartenData gw = gauss_weingarten(e, n, p);
    worst = std::max(worst, max_abs(gw.h - gw.h.transpose()));
  }
  return worst;
}

}  // namespace sasakian
