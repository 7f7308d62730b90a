#pragma once

// Pointwise evaluation and differentiation of fields on coordinate charts.
//
// A field is a closure over coordinates evaluable at plain doubles and at
// first- and second-order dual numbers. The dual evaluators give exact
// partials by forward propagation; fd_derivative is the independent
// central-difference route used to cross-check them.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "sasakian/dual.hpp"
#include "sasakian/error.hpp"

namespace sasakian {

inline constexpr double kDefaultFdStep = 1e-5;

struct Valence {
  int contravariant = 0;
  int covariant = 0;

  [[nodiscard]] int rank() const noexcept { return contravariant + covariant; }
  friend bool operator==(const Valence&, const Valence&) = default;
};

std::string to_string(Valence v);

// d^(r+s)
std::size_t component_count(Valence v, int dim);

class Point {
 public:
  explicit Point(std::vector<double> coords);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(coords_.size()); }
  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
  [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }

 private:
  std::vector<double> coords_;
};

// Element type of the span a generic field body is called with.
template <class Span>
using scalar_of = std::remove_cv_t<typename Span::element_type>;

// Smooth map from an open subset of R^in_dim into R^out_size.
class ChartMap {
 public:
  template <class T>
  using Fn = std::function<std::vector<T>(std::span<const T>)>;
  using DomainFn = std::function<bool(std::span<const double>)>;

  ChartMap() = default;
  ChartMap(int in_dim, int out_size, Fn<double> f0, Fn<D1> f1, Fn<D2> f2 = {});

  // Wraps a generic callable `f(std::span<const T>) -> std::vector<T>` for all
  // supported scalar types.
  template <class F>
  static ChartMap generic(int in_dim, int out_size, F f) {
    return ChartMap(
        in_dim, out_size, [f](std::span<const double> x) { return f(x); },
        [f](std::span<const D1> x) { return f(x); },
        [f](std::span<const D2> x) { return f(x); });
  }

  // For bodies that cannot be instantiated at second-order duals, e.g. ones
  // that already differentiate internally.
  template <class F>
  static ChartMap generic_first_order(int in_dim, int out_size, F f) {
    return ChartMap(
        in_dim, out_size, [f](std::span<const double> x) { return f(x); },
        [f](std::span<const D1> x) { return f(x); });
  }

  [[nodiscard]] int in_dim() const noexcept { return in_dim_; }
  [[nodiscard]] int out_size() const noexcept { return out_size_; }

  template <class T>
  [[nodiscard]] bool supports() const noexcept {
    if constexpr (std::is_same_v<T, double>) return static_cast<bool>(f0_);
    else if constexpr (std::is_same_v<T, D1>) return static_cast<bool>(f1_);
    else if constexpr (std::is_same_v<T, D2>) return static_cast<bool>(f2_);
    else return false;
  }

  template <class T>
  std::vector<T> operator()(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != in_dim_)
      throw Error(ErrorCode::dimension_mismatch,
                  "chart map expects " + std::to_string(in_dim_) + " coordinates, got " +
                      std::to_string(x.size()));
    if (!supports<T>())
      throw Error(ErrorCode::not_differentiable,
                  "field has no evaluator at the requested derivative order");
    std::vector<T> out;
    if constexpr (std::is_same_v<T, double>) out = f0_(x);
    else if constexpr (std::is_same_v<T, D1>) out = f1_(x);
    else if constexpr (std::is_same_v<T, D2>) out = f2_(x);
    else static_assert(std::is_same_v<T, D2>, "unsupported scalar type");
    if (static_cast<int>(out.size()) != out_size_)
      throw Error(ErrorCode::dimension_mismatch,
                  "chart map produced " + std::to_string(out.size()) + " components, expected " +
                      std::to_string(out_size_));
    return out;
  }

  [[nodiscard]] bool in_domain(std::span<const double> x) const {
    return !domain_ || domain_(x);
  }
  [[nodiscard]] ChartMap with_domain(DomainFn domain) const {
    ChartMap copy = *this;
    copy.domain_ = std::move(domain);
    return copy;
  }

 private:
  int in_dim_ = 0;
  int out_size_ = 0;
  Fn<double> f0_;
  Fn<D1> f1_;
  Fn<D2> f2_;
  DomainFn domain_;
};

// Components of a tensor at one point in the coordinate basis. Contravariant
// indices come first, row-major: a (1,1) tensor T^a_b lives at a*dim + b.
class Tensor {
 public:
  Tensor(Valence valence, int dim, std::vector<double> values);
  Tensor(Valence valence, int dim);

  [[nodiscard]] Valence valence() const noexcept { return valence_; }
  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator()(int a, int b) { return values_[static_cast<std::size_t>(a * dim_ + b)]; }
  double operator()(int a, int b) const { return values_[static_cast<std::size_t>(a * dim_ + b)]; }

 private:
  Valence valence_;
  int dim_;
  std::vector<double> values_;
};

class TensorField {
 public:
  TensorField(Valence valence, ChartMap map);

  template <class F>
  static TensorField generic(Valence valence, int dim, F f) {
    return TensorField(valence,
                       ChartMap::generic(dim, static_cast<int>(component_count(valence, dim)),
                                         std::move(f)));
  }

  [[nodiscard]] Valence valence() const noexcept { return valence_; }
  [[nodiscard]] int dim() const noexcept { return map_.in_dim(); }
  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(map_.out_size()); }
  [[nodiscard]] const ChartMap& map() const noexcept { return map_; }

  template <class T>
  std::vector<T> at(std::span<const T> x) const {
    return map_(x);
  }

 private:
  Valence valence_;
  ChartMap map_;
};

// A scalar field is a (0,0) tensor field with one component.
using ScalarField = TensorField;

struct Jet {
  Tensor value;
  // d(component c)/dx^k at c*dim + k.
  std::vector<double> partials;
  // d^2(component c)/dx^k dx^l at (c*dim + k)*dim + l; empty unless requested.
  std::vector<double> second_partials;

  [[nodiscard]] double partial(std::size_t component, int k) const {
    return partials[component * static_cast<std::size_t>(value.dim()) + static_cast<std::size_t>(k)];
  }
  [[nodiscard]] double second(std::size_t component, int k, int l) const {
    const auto d = static_cast<std::size_t>(value.dim());
    return second_partials[(component * d + static_cast<std::size_t>(k)) * d +
                           static_cast<std::size_t>(l)];
  }
};

Tensor evaluate(const TensorField& field, const Point& p);

// Exact partials by dual propagation; order 2 also fills second_partials.
Jet jet(const TensorField& field, const Point& p, int order = 1);

// Central differences, O(step^2). Only first partials.
Jet fd_derivative(const TensorField& field, const Point& p, double step = kDefaultFdStep);

// Seeds every coordinate of x as an independent dual variable.
template <class T>
std::vector<Dual<T>> seed(std::span<const T> x) {
  std::vector<Dual<T>> s;
  s.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s.push_back(Dual<T>::variable(x[i], i, x.size()));
  return s;
}

TensorField constant_field(Valence valence, int dim, std::vector<double> values);
TensorField identity_field(int dim);

}  // namespace sasakian
