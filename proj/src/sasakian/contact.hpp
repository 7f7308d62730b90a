#pragma once

// Ambient almost-contact metric structures (phi, xi, eta, g) on R^(2n+1), the
// classical Sasakian model, and the axiom checker.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sasakian/chart.hpp"
#include "sasakian/riemannian.hpp"

namespace sasakian {

struct AlmostContactMetricStructure {
  int n = 0;
  TensorField phi;  // (1,1)
  TensorField xi;   // (1,0)
  TensorField eta;  // (0,1)
  MetricField g;

  [[nodiscard]] int dim() const noexcept { return 2 * n + 1; }
};

// Coordinates (x^1..x^n, y^1..y^n, z); eta = (dz - sum y^i dx^i)/2, xi = 2 d_z,
// g = eta (x) eta + (sum (dx^i)^2 + (dy^i)^2)/4. The sign of phi is fixed by
// requiring the derivative axioms to hold.
AlmostContactMetricStructure standard_sasakian(int n);

// The sign s for which phi(d_x) = -s d_y, phi(d_y) = s (d_x + y d_z) passes
// the derivative axioms.
double standard_phi_sign(int n);

// Same structure with phi replaced by sign * phi and eta by eta_scale * eta.
// Used to build deliberately broken structures.
AlmostContactMetricStructure standard_contact_variant(int n, double phi_sign, double eta_scale);

enum class Axiom {
  eta_xi,          // eta(xi) = 1
  phi_squared,     // phi^2 = -I + eta (x) xi
  eta_phi,         // eta o phi = 0
  phi_xi,          // phi xi = 0
  phi_rank,        // rank phi = 2n
  metric_compat,   // g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y)
  g_xi_eta,        // g(X, xi) = eta(X)
  nabla_phi,       // (nabla_X phi) Y = g(X,Y) xi - eta(Y) X
  nabla_xi,        // nabla_X xi = -phi X
  two_form_antisymmetry,  // F(X,Y) + F(Y,X) = 0
  two_form_phi_swap,      // F(X, phi Y) = F(Y, phi X)
  two_form_phi_invariance,  // F(phi X, phi Y) = F(X, Y)
};

inline constexpr Axiom kAllAxioms[] = {
    Axiom::eta_xi,         Axiom::phi_squared, Axiom::eta_phi,   Axiom::phi_xi,
    Axiom::phi_rank,       Axiom::metric_compat, Axiom::g_xi_eta, Axiom::nabla_phi,
    Axiom::nabla_xi,       Axiom::two_form_antisymmetry, Axiom::two_form_phi_swap,
    Axiom::two_form_phi_invariance,
};

std::string_view axiom_name(Axiom a) noexcept;

inline constexpr double kRankThreshold = 1e-8;

struct AxiomReport {
  struct Entry {
    Axiom axiom;
    double residual = 0.0;
  };
  std::vector<Entry> entries;
  std::size_t samples = 0;
  double max_residual = 0.0;

  [[nodiscard]] double residual(Axiom a) const;
};

// Residual of each axiom as the largest coordinate component of LHS - RHS
// over all points and ordered direction pairs. The rank axiom reports the
// smallest singular value of phi, or 1 when fewer than 2n singular values
// exceed kRankThreshold.
AxiomReport check_sasakian_axioms(const AlmostContactMetricStructure& s,
                                  std::span<const Point> points,
                                  std::span<const TensorField> directions);

// 'F(X, Y) = g(phi X, Y)
TensorField fundamental_two_form(const AlmostContactMetricStructure& s);

}  // namespace sasakian
