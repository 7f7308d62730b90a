#pragma once

// The structure (phi, g, u, v, U, V, lambda) induced on a hypersurface of a
// contact metric manifold by splitting phi~ and xi along [B | N]:
//
//   phi~ BX = B phi X + u(X) N,   phi~ N = -BU,   xi = BV + lambda N,
//   eta(BX) = v(X),
//
// and the algebraic and differential identity suites run on it.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sasakian/hypersurface.hpp"
#include "sasakian/sampling.hpp"

namespace sasakian {

inline constexpr double kAmbientAxiomTol = 1e-6;
inline constexpr double kTangencyTol = 1e-8;

template <class T>
struct InducedAt {
  Frame<T> frame;
  SmallMatrix<T> g;
  SmallMatrix<T> phi;  // column i is phi e_i
  std::vector<T> u, v, U, V;
  T lambda{0.0};
  T eta_n{0.0};
  T phi_n_normal{0.0};  // normal coefficient of phi~ N; zero when tangent
};

template <class T>
InducedAt<T> induce_at(const Embedding& e, const NormalField& n, std::span<const T> s) {
  const AlmostContactMetricStructure* c = e.contact();
  if (c == nullptr) throw Error(ErrorCode::invalid_argument, "induced structure needs a contact ambient");
  InducedAt<T> r;
  r.frame = frame_at(e, n, s);
  const std::size_t m = s.size();
  const std::size_t d = m + 1;
  const std::span<const T> img(r.frame.image);
  const SmallMatrix<T> pt = detail::as_matrix(c->phi.template at<T>(img), d, d);
  const std::vector<T> xi = c->xi.template at<T>(img);
  const std::vector<T> eta = c->eta.template at<T>(img);

  SmallMatrix<T> rhs(d, m + 2);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t b = 0; b < d; ++b) rhs(a, i) += pt(a, b) * r.frame.b(b, i);
    for (std::size_t b = 0; b < d; ++b) rhs(a, m) += pt(a, b) * r.frame.normal[b];
    rhs(a, m + 1) = xi[a];
  }
  const SmallMatrix<T> x = solve(r.frame.full(), std::move(rhs));

  r.phi = SmallMatrix<T>(m, m);
  r.g = SmallMatrix<T>(m, m);
  r.u.assign(m, T(0.0));
  r.v.assign(m, T(0.0));
  r.U.assign(m, T(0.0));
  r.V.assign(m, T(0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) r.phi(k, i) = x(k, i);
    r.u[i] = x(m, i);
    r.U[i] = -x(i, m);
    r.V[i] = x(i, m + 1);
    for (std::size_t a = 0; a < d; ++a) r.v[i] += eta[a] * r.frame.b(a, i);
  }
  r.phi_n_normal = x(m, m);
  r.lambda = x(m, m + 1);
  for (std::size_t a = 0; a < d; ++a) r.eta_n += eta[a] * r.frame.normal[a];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          r.g(i, j) += r.frame.b(a, i) * r.frame.ambient_g(a, b) * r.frame.b(b, j);
  return r;
}

// Everything the identity suites need at one point. Covariant differentials
// use the Levi-Civita connection of the induced metric, in the layout of
// covariant_differential.
struct InducedPoint {
  int dim = 0;
  Eigen::MatrixXd g, phi;
  Eigen::VectorXd u, v, U, V;
  double lambda = 0.0;
  double eta_n = 0.0;
  double phi_n_normal = 0.0;
  Eigen::VectorXd dlambda;
  std::vector<double> nabla_phi, nabla_u, nabla_v, nabla_U, nabla_V;
  ChristoffelSymbols levi_civita{0};
  GaussWeingartenData gw;
};

class InducedStructure {
 public:
  InducedStructure(Embedding e, NormalField n);

  [[nodiscard]] const Embedding& embedding() const noexcept { return e_; }
  [[nodiscard]] const NormalField& normal() const noexcept { return n_; }
  [[nodiscard]] int dim() const noexcept { return e_.dim(); }

  // Fields on M, evaluable at double and D1.
  [[nodiscard]] const TensorField& phi() const noexcept { return phi_; }
  [[nodiscard]] const TensorField& U() const noexcept { return U_; }
  [[nodiscard]] const TensorField& V() const noexcept { return V_; }
  [[nodiscard]] const TensorField& u() const noexcept { return u_; }
  [[nodiscard]] const TensorField& v() const noexcept { return v_; }
  [[nodiscard]] const ScalarField& lambda() const noexcept { return lambda_; }
  [[nodiscard]] const MetricField& metric() const noexcept { return g_; }

  [[nodiscard]] InducedPoint at(const Point& p) const;

 private:
  Embedding e_;
  NormalField n_;
  TensorField phi_, U_, V_, u_, v_, lambda_;
  MetricField g_;
};

// Validates the ambient axioms (to kAmbientAxiomTol) at the image points and
// tangency of phi~ N (to kTangencyTol) before returning the structure.
InducedStructure extract_structure(const Embedding& e, const NormalField& n,
                                   std::span<const Point> points);

struct DirectionPair {
  Eigen::VectorXd x, y;
};

// Draws count pairs of coefficient vectors in [-1, 1]^dim.
std::vector<DirectionPair> sample_direction_pairs(Sampler& rng, int dim, std::size_t count);

enum class ShapeChoice { h_shape, w_shape, minus_w_shape };
enum class SignChoice { printed, negated };

struct Variant {
  ShapeChoice shape = ShapeChoice::h_shape;
  SignChoice sign = SignChoice::printed;
  friend bool operator==(const Variant&, const Variant&) = default;
};

// Residuals within this band of the lowest count as tied during adjudication.
inline constexpr double kTieAbsolute = 1e-10;
inline constexpr double kTieRelative = 1e-6;

// Adjudication order; ties resolve to the earlier entry.
inline constexpr std::array<Variant, 6> kVariants = {{
    {ShapeChoice::h_shape, SignChoice::printed},
    {ShapeChoice::w_shape, SignChoice::printed},
    {ShapeChoice::minus_w_shape, SignChoice::printed},
    {ShapeChoice::h_shape, SignChoice::negated},
    {ShapeChoice::w_shape, SignChoice::negated},
    {ShapeChoice::minus_w_shape, SignChoice::negated},
}};

std::string_view shape_name(ShapeChoice s) noexcept;
std::string_view sign_name(SignChoice s) noexcept;

struct IdentityResult {
  std::string name;
  std::string equation_ref;
  double max_residual = 0.0;
  std::size_t samples_used = 0;
  std::size_t samples_excluded = 0;
  // Set for convention-adjudicated identities.
  std::optional<Variant> convention;
  std::vector<std::pair<Variant, double>> variants;
  // Best residual, over shape choices, with phi~ replaced by -phi~ (which
  // maps phi, u, U to their negatives and fixes everything else).
  std::optional<double> opposite_phi_residual;
  std::optional<ShapeChoice> opposite_phi_shape;
  // Extra measured quantity, e.g. max |h(Y, U)| next to max |H U|.
  std::optional<std::pair<std::string, double>> auxiliary;
};

struct IdentityReport {
  std::vector<IdentityResult> results;
  std::size_t samples = 0;

  [[nodiscard]] const IdentityResult& get(std::string_view name) const;
};

struct StructureSamples {
  std::vector<InducedPoint> points;
  std::vector<DirectionPair> pairs;
};

// Evaluates the structure at each point once; identity suites reuse it.
StructureSamples evaluate_samples(const InducedStructure& s, std::span<const Point> points,
                                  std::vector<DirectionPair> pairs);

// phi~ N tangency, lambda = eta(N), and max |u| (noninvariance).
IdentityReport verify_structure(const StructureSamples& samples);

IdentityReport verify_algebraic_identities(const StructureSamples& samples);

// strict: only the printed form with H = H_h is evaluated.
IdentityReport verify_differential_identities(const StructureSamples& samples, bool strict = false);

}  // namespace sasakian
