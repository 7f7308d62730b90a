#include "sasakian/chart.hpp"

#include <cmath>
#include <sstream>

namespace sasakian {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::dual_division_by_zero: return "dual_division_by_zero";
    case ErrorCode::outside_domain: return "outside_domain";
    case ErrorCode::not_differentiable: return "not_differentiable";
    case ErrorCode::singular_metric: return "singular_metric";
    case ErrorCode::unsupported_valence: return "unsupported_valence";
    case ErrorCode::rank_deficient: return "rank_deficient";
    case ErrorCode::ill_conditioned: return "ill_conditioned";
    case ErrorCode::not_tangent: return "not_tangent";
    case ErrorCode::not_sasakian: return "not_sasakian";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::config_error: return "config_error";
    case ErrorCode::all_excluded: return "all_excluded";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

std::string to_string(Valence v) {
  return "(" + std::to_string(v.contravariant) + "," + std::to_string(v.covariant) + ")";
}

std::size_t component_count(Valence v, int dim) {
  std::size_t n = 1;
  for (int i = 0; i < v.rank(); ++i) n *= static_cast<std::size_t>(dim);
  return n;
}

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw Error(ErrorCode::invalid_argument, "point must have dimension >= 1");
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (!std::isfinite(coords_[i]))
      throw Error(ErrorCode::non_finite, "point coordinate " + std::to_string(i) + " is not finite");
}

ChartMap::ChartMap(int in_dim, int out_size, Fn<double> f0, Fn<D1> f1, Fn<D2> f2)
    : in_dim_(in_dim), out_size_(out_size), f0_(std::move(f0)), f1_(std::move(f1)),
      f2_(std::move(f2)) {
  if (in_dim <= 0 || out_size <= 0)
    throw Error(ErrorCode::invalid_argument, "chart map dimensions must be positive");
  if (static_cast<std::size_t>(in_dim) > kMaxDualVars)
    throw Error(ErrorCode::invalid_argument,
                "chart dimension " + std::to_string(in_dim) + " exceeds dual capacity " +
                    std::to_string(kMaxDualVars));
  if (!f0_) throw Error(ErrorCode::invalid_argument, "chart map needs a value evaluator");
}

Tensor::Tensor(Valence valence, int dim, std::vector<double> values)
    : valence_(valence), dim_(dim), values_(std::move(values)) {
  if (values_.size() != component_count(valence, dim))
    throw Error(ErrorCode::dimension_mismatch,
                "tensor of valence " + to_string(valence) + " in dimension " +
                    std::to_string(dim) + " needs " +
                    std::to_string(component_count(valence, dim)) + " components, got " +
                    std::to_string(values_.size()));
}

Tensor::Tensor(Valence valence, int dim)
    : Tensor(valence, dim, std::vector<double>(component_count(valence, dim), 0.0)) {}

TensorField::TensorField(Valence valence, ChartMap map) : valence_(valence), map_(std::move(map)) {
  if (valence.contravariant < 0 || valence.covariant < 0)
    throw Error(ErrorCode::unsupported_valence, "negative valence " + to_string(valence));
  if (static_cast<std::size_t>(map_.out_size()) != component_count(valence, map_.in_dim()))
    throw Error(ErrorCode::dimension_mismatch,
                "field of valence " + to_string(valence) + " on a " +
                    std::to_string(map_.in_dim()) + "-dimensional chart must have " +
                    std::to_string(component_count(valence, map_.in_dim())) + " components");
}

namespace {

void check_point(const TensorField& field, const Point& p) {
  if (p.dim() != field.dim())
    throw Error(ErrorCode::dimension_mismatch,
                "point of dimension " + std::to_string(p.dim()) + " for a field on a " +
                    std::to_string(field.dim()) + "-dimensional chart");
  if (!field.map().in_domain(p.coords()))
    throw Error(ErrorCode::outside_domain, "point lies outside the field's chart domain");
}

void check_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i])) {
      std::ostringstream os;
      os << what << " component " << i << " is not finite (" << values[i] << ")";
      throw Error(ErrorCode::non_finite, os.str());
    }
}

}  // namespace

Tensor evaluate(const TensorField& field, const Point& p) {
  check_point(field, p);
  std::vector<double> v = field.at<double>(p.coords());
  check_finite(v, "field");
  return Tensor(field.valence(), field.dim(), std::move(v));
}

Jet jet(const TensorField& field, const Point& p, int order) {
  check_point(field, p);
  const auto d = static_cast<std::size_t>(field.dim());
  const std::size_t nc = field.size();
  std::vector<double> value(nc);
  std::vector<double> partials(nc * d);
  std::vector<double> second;
  if (order == 1) {
    const std::vector<D1> x = seed(p.coords());
    const std::vector<D1> out = field.at<D1>(x);
    for (std::size_t c = 0; c < nc; ++c) {
      value[c] = out[c].value();
      for (std::size_t k = 0; k < d; ++k) partials[c * d + k] = out[c].partial(k);
    }
  } else if (order == 2) {
    const std::vector<D1> inner = seed(p.coords());
    const std::vector<D2> x = seed<D1>(inner);
    const std::vector<D2> out = field.at<D2>(x);
    second.resize(nc * d * d);
    for (std::size_t c = 0; c < nc; ++c) {
      value[c] = out[c].value().value();
      for (std::size_t k = 0; k < d; ++k) {
        partials[c * d + k] = out[c].partial(k).value();
        for (std::size_t l = 0; l < d; ++l) second[(c * d + k) * d + l] = out[c].partial(k).partial(l);
      }
    }
    check_finite(second, "second partial");
  } else {
    throw Error(ErrorCode::invalid_argument, "jet order must be 1 or 2");
  }
  check_finite(value, "field");
  check_finite(partials, "partial");
  return Jet{Tensor(field.valence(), field.dim(), std::move(value)), std::move(partials),
             std::move(second)};
}

Jet fd_derivative(const TensorField& field, const Point& p, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::invalid_argument, "finite-difference step must be positive");
  const Tensor center = evaluate(field, p);
  const auto d = static_cast<std::size_t>(field.dim());
  const std::size_t nc = field.size();
  std::vector<double> partials(nc * d);
  std::vector<double> x(p.coords().begin(), p.coords().end());
  for (std::size_t k = 0; k < d; ++k) {
    const double x0 = x[k];
    x[k] = x0 + step;
    if (!field.map().in_domain(x))
      throw Error(ErrorCode::outside_domain, "finite-difference stencil leaves the chart domain");
    const std::vector<double> plus = field.at<double>(x);
    x[k] = x0 - step;
    if (!field.map().in_domain(x))
      throw Error(ErrorCode::outside_domain, "finite-difference stencil leaves the chart domain");
    const std::vector<double> minus = field.at<double>(x);
    x[k] = x0;
    for (std::size_t c = 0; c < nc; ++c) partials[c * d + k] = (plus[c] - minus[c]) / (2.0 * step);
  }
  check_finite(partials, "finite-difference partial");
  return Jet{center, std::move(partials), {}};
}

TensorField constant_field(Valence valence, int dim, std::vector<double> values) {
  if (values.size() != component_count(valence, dim))
    throw Error(ErrorCode::dimension_mismatch, "constant field has the wrong number of components");
  return TensorField::generic(valence, dim, [values](auto x) {
    using T = scalar_of<decltype(x)>;
    return std::vector<T>(values.begin(), values.end());
  });
}

TensorField identity_field(int dim) {
  std::vector<double> delta(static_cast<std::size_t>(dim * dim), 0.0);
  for (int i = 0; i < dim; ++i) delta[static_cast<std::size_t>(i * dim + i)] = 1.0;
  return constant_field(Valence{1, 1}, dim, std::move(delta));
}

}  // namespace sasakian
