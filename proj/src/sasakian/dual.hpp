#pragma once

// Forward-mode dual numbers with a small fixed gradient capacity. Nesting
// (Dual<Dual<double>>) yields exact second derivatives.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>

#include "sasakian/error.hpp"

namespace sasakian {

inline constexpr std::size_t kMaxDualVars = 8;

template <class T>
class Dual;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

// Innermost real value of a (possibly nested) dual.
inline double value_of(double x) noexcept { return x; }
template <class T>
double value_of(const Dual<T>& x) noexcept {
  return value_of(x.value());
}

template <class T>
class Dual {
 public:
  Dual() : v_(0.0), d_{}, n_(0) { d_.fill(T(0.0)); }

  Dual(double c)  // NOLINT(google-explicit-constructor)
    requires(!std::is_same_v<T, double>)
      : Dual() {
    v_ = T(c);
  }

  Dual(const T& v)  // NOLINT(google-explicit-constructor)
      : Dual() {
    v_ = v;
  }

  // Independent variable `index` out of `count`.
  static Dual variable(const T& v, std::size_t index, std::size_t count) {
    if (count > kMaxDualVars || index >= count)
      throw Error(ErrorCode::invalid_argument,
                  "dual seed index " + std::to_string(index) + " of " +
                      std::to_string(count) + " exceeds capacity");
    Dual r(v);
    r.n_ = count;
    r.d_[index] = T(1.0);
    return r;
  }

  [[nodiscard]] const T& value() const noexcept { return v_; }
  [[nodiscard]] const T& partial(std::size_t i) const noexcept { return d_[i]; }
  [[nodiscard]] std::size_t size() const noexcept { return n_; }

  Dual& operator+=(const Dual& b) {
    v_ += b.v_;
    n_ = std::max(n_, b.n_);
    for (std::size_t i = 0; i < b.n_; ++i) d_[i] += b.d_[i];
    return *this;
  }
  Dual& operator-=(const Dual& b) {
    v_ -= b.v_;
    n_ = std::max(n_, b.n_);
    for (std::size_t i = 0; i < b.n_; ++i) d_[i] -= b.d_[i];
    return *this;
  }
  Dual& operator*=(const Dual& b) { return *this = *this * b; }
  Dual& operator/=(const Dual& b) { return *this = *this / b; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator-(const Dual& a) {
    Dual r;
    r.v_ = -a.v_;
    r.n_ = a.n_;
    for (std::size_t i = 0; i < a.n_; ++i) r.d_[i] = -a.d_[i];
    return r;
  }
  friend Dual operator+(const Dual& a) { return a; }

  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.v_ = a.v_ * b.v_;
    r.n_ = std::max(a.n_, b.n_);
    for (std::size_t i = 0; i < r.n_; ++i) r.d_[i] = a.v_ * b.d_[i] + a.d_[i] * b.v_;
    return r;
  }

  friend Dual operator/(const Dual& a, const Dual& b) {
    if (value_of(b) == 0.0)
      throw Error(ErrorCode::dual_division_by_zero,
                  "division by a dual number with zero real part");
    Dual r;
    r.v_ = a.v_ / b.v_;
    r.n_ = std::max(a.n_, b.n_);
    for (std::size_t i = 0; i < r.n_; ++i)
      r.d_[i] = (a.d_[i] - r.v_ * b.d_[i]) / b.v_;
    return r;
  }

  friend bool operator<(const Dual& a, const Dual& b) { return value_of(a) < value_of(b); }
  friend bool operator>(const Dual& a, const Dual& b) { return value_of(a) > value_of(b); }

  // Chain rule for a unary function with value fv and derivative dfv at v_.
  [[nodiscard]] Dual chain(const T& fv, const T& dfv) const {
    Dual r;
    r.v_ = fv;
    r.n_ = n_;
    for (std::size_t i = 0; i < n_; ++i) r.d_[i] = dfv * d_[i];
    return r;
  }

 private:
  T v_;
  std::array<T, kMaxDualVars> d_;
  std::size_t n_;
};

template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  const T e = exp(x.value());
  return x.chain(e, e);
}

template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  if (value_of(x) <= 0.0)
    throw Error(ErrorCode::non_finite, "log of a nonpositive dual number");
  return x.chain(log(x.value()), T(1.0) / x.value());
}

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  const T s = sqrt(x.value());
  if (value_of(s) == 0.0)
    throw Error(ErrorCode::dual_division_by_zero, "derivative of sqrt at zero");
  return x.chain(s, T(0.5) / s);
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return x.chain(sin(x.value()), cos(x.value()));
}

template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return x.chain(cos(x.value()), -sin(x.value()));
}

template <class T>
Dual<T> abs(const Dual<T>& x) {
  return value_of(x) < 0.0 ? -x : x;
}

// Integer power by repeated squaring; negative exponents go through division.
template <class T>
T ipow(const T& x, int k) {
  if (k < 0) return T(1.0) / ipow(x, -k);
  T result(1.0);
  T base = x;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

using D1 = Dual<double>;
using D2 = Dual<D1>;

}  // namespace sasakian
