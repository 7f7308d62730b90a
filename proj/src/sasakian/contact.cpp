#include "sasakian/contact.hpp"

#include <algorithm>
#include <cmath>

namespace sasakian {

std::string_view axiom_name(Axiom a) noexcept {
  switch (a) {
    case Axiom::eta_xi: return "eta_xi";
    case Axiom::phi_squared: return "phi_squared";
    case Axiom::eta_phi: return "eta_phi";
    case Axiom::phi_xi: return "phi_xi";
    case Axiom::phi_rank: return "phi_rank";
    case Axiom::metric_compat: return "metric_compat";
    case Axiom::g_xi_eta: return "g_xi_eta";
    case Axiom::nabla_phi: return "nabla_phi";
    case Axiom::nabla_xi: return "nabla_xi";
    case Axiom::two_form_antisymmetry: return "two_form_antisymmetry";
    case Axiom::two_form_phi_swap: return "two_form_phi_swap";
    case Axiom::two_form_phi_invariance: return "two_form_phi_invariance";
  }
  return "unknown";
}

double AxiomReport::residual(Axiom a) const {
  for (const Entry& e : entries)
    if (e.axiom == a) return e.residual;
  throw Error(ErrorCode::invalid_argument, "axiom not present in report");
}

AlmostContactMetricStructure standard_contact_variant(int n, double phi_sign, double eta_scale) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "standard Sasakian structure needs n >= 1");
  const int d = 2 * n + 1;
  const auto ud = static_cast<std::size_t>(d);
  const int z = 2 * n;

  auto eta_of = [n, z, ud](auto x) {
    using T = scalar_of<decltype(x)>;
    std::vector<T> e(ud, T(0.0));
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = -0.5 * x[static_cast<std::size_t>(n + i)];
    e[static_cast<std::size_t>(z)] = T(0.5);
    return e;
  };

  TensorField eta = TensorField::generic(Valence{0, 1}, d, [eta_of, eta_scale](auto x) {
    auto e = eta_of(x);
    for (auto& c : e) c = eta_scale * c;
    return e;
  });

  TensorField xi = TensorField::generic(Valence{1, 0}, d, [ud, z](auto x) {
    using T = scalar_of<decltype(x)>;
    std::vector<T> v(ud, T(0.0));
    v[static_cast<std::size_t>(z)] = T(2.0);
    return v;
  });

  TensorField g = TensorField::generic(Valence{0, 2}, d, [eta_of, ud, z](auto x) {
    using T = scalar_of<decltype(x)>;
    const auto e = eta_of(x);
    std::vector<T> m(ud * ud, T(0.0));
    for (std::size_t a = 0; a < ud; ++a)
      for (std::size_t b = 0; b < ud; ++b) m[a * ud + b] = e[a] * e[b];
    for (std::size_t a = 0; a < static_cast<std::size_t>(z); ++a) m[a * ud + a] += T(0.25);
    return m;
  });

  // phi(d_x) = -d_y, phi(d_y) = d_x + y d_z, phi(d_z) = 0; column b is phi(d_b).
  TensorField phi = TensorField::generic(Valence{1, 1}, d, [n, ud, z, phi_sign](auto x) {
    using T = scalar_of<decltype(x)>;
    std::vector<T> m(ud * ud, T(0.0));
    for (int i = 0; i < n; ++i) {
      const auto xi_idx = static_cast<std::size_t>(i);
      const auto yi_idx = static_cast<std::size_t>(n + i);
      m[yi_idx * ud + xi_idx] = T(-phi_sign);
      m[xi_idx * ud + yi_idx] = T(phi_sign);
      m[static_cast<std::size_t>(z) * ud + yi_idx] = phi_sign * x[yi_idx];
    }
    return m;
  });

  return AlmostContactMetricStructure{n, std::move(phi), std::move(xi), std::move(eta),
                                      MetricField(std::move(g))};
}

double standard_phi_sign(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "standard Sasakian structure needs n >= 1");
  const int d = 2 * n + 1;
  std::vector<Point> probes;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> c(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = 0.3 * (k + 1) - 0.17 * i;
    probes.emplace_back(std::move(c));
  }
  std::vector<TensorField> basis;
  for (int i = 0; i < d; ++i) {
    std::vector<double> e(static_cast<std::size_t>(d), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    basis.push_back(constant_field(Valence{1, 0}, d, std::move(e)));
  }
  for (double sign : {1.0, -1.0}) {
    const AxiomReport r = check_sasakian_axioms(standard_contact_variant(n, sign, 1.0), probes, basis);
    if (r.residual(Axiom::nabla_phi) <= 1e-10 && r.residual(Axiom::nabla_xi) <= 1e-10) return sign;
  }
  throw Error(ErrorCode::internal, "no sign of phi satisfies the Sasakian derivative axioms");
}

AlmostContactMetricStructure standard_sasakian(int n) {
  return standard_contact_variant(n, standard_phi_sign(n), 1.0);
}

namespace {

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

AxiomReport check_sasakian_axioms(const AlmostContactMetricStructure& s,
                                  std::span<const Point> points,
                                  std::span<const TensorField> directions) {
  if (points.empty()) throw Error(ErrorCode::invalid_argument, "axiom check needs at least one point");
  const int d = s.dim();
  for (const Point& p : points)
    if (p.dim() != d)
      throw Error(ErrorCode::dimension_mismatch,
                  "sample point of dimension " + std::to_string(p.dim()) +
                      " for an ambient of dimension " + std::to_string(d));
  for (const TensorField& x : directions)
    if (x.dim() != d || !(x.valence() == Valence{1, 0}))
      throw Error(ErrorCode::dimension_mismatch, "direction fields must be ambient vector fields");

  std::vector<double> worst(std::size(kAllAxioms), 0.0);
  auto bump = [&](Axiom a, double r) {
    auto& w = worst[static_cast<std::size_t>(a)];
    w = std::max(w, r);
  };

  for (const Point& p : points) {
    const Eigen::MatrixXd phi = to_matrix(evaluate(s.phi, p));
    const Eigen::VectorXd xi = to_vector(evaluate(s.xi, p));
    const Eigen::VectorXd eta = to_vector(evaluate(s.eta, p));
    const Eigen::MatrixXd g = s.g.at(p);
    const ChristoffelSymbols gamma = christoffel(s.g, p);
    const std::vector<double> dphi = covariant_differential(gamma, jet(s.phi, p));
    const std::vector<double> dxi = covariant_differential(gamma, jet(s.xi, p));

    bump(Axiom::eta_xi, std::abs(eta.dot(xi) - 1.0));
    bump(Axiom::phi_xi, max_abs(phi * xi));

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi);
    const Eigen::VectorXd sv = svd.singularValues();
    const auto above = (sv.array() > kRankThreshold).count();
    bump(Axiom::phi_rank, above < 2 * s.n ? 1.0 : sv(d - 1));

    std::vector<Eigen::VectorXd> dirs;
    dirs.reserve(directions.size());
    for (const TensorField& x : directions) dirs.push_back(to_vector(evaluate(x, p)));

    for (const Eigen::VectorXd& x : dirs) {
      bump(Axiom::phi_squared, max_abs(phi * (phi * x) - (-x + eta.dot(x) * xi)));
      bump(Axiom::eta_phi, std::abs(eta.dot(phi * x)));
      bump(Axiom::g_xi_eta, std::abs(x.dot(g * xi) - eta.dot(x)));
      const Tensor nx = contract_direction(dxi, Valence{1, 0}, d, x);
      bump(Axiom::nabla_xi, max_abs(to_vector(nx) + phi * x));
      const Eigen::MatrixXd nphi = to_matrix(contract_direction(dphi, Valence{1, 1}, d, x));
      for (const Eigen::VectorXd& y : dirs) {
        const Eigen::VectorXd px = phi * x;
        const Eigen::VectorXd py = phi * y;
        bump(Axiom::metric_compat,
             std::abs(px.dot(g * py) - (x.dot(g * y) - eta.dot(x) * eta.dot(y))));
        bump(Axiom::nabla_phi, max_abs(nphi * y - (x.dot(g * y) * xi - eta.dot(y) * x)));
        auto two_form = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
          return (phi * a).dot(g * b);
        };
        bump(Axiom::two_form_antisymmetry, std::abs(two_form(x, y) + two_form(y, x)));
        bump(Axiom::two_form_phi_swap, std::abs(two_form(x, py) - two_form(y, px)));
        bump(Axiom::two_form_phi_invariance, std::abs(two_form(px, py) - two_form(x, y)));
      }
    }
  }

  AxiomReport report;
  report.samples = points.size();
  for (Axiom a : kAllAxioms) {
    const double r = worst[static_cast<std::size_t>(a)];
    report.entries.push_back({a, r});
    report.max_residual = std::max(report.max_residual, r);
  }
  return report;
}

TensorField fundamental_two_form(const AlmostContactMetricStructure& s) {
  const int d = s.dim();
  const auto ud = static_cast<std::size_t>(d);
  TensorField phi = s.phi;
  TensorField g = s.g.field();
  return TensorField(
      Valence{0, 2},
      ChartMap::generic(d, d * d, [phi, g, ud](auto x) {
        using T = scalar_of<decltype(x)>;
        const std::vector<T> p = phi.at<T>(x);
        const std::vector<T> m = g.at<T>(x);
        // F_ab = g(phi e_a, e_b) = phi^c_a g_cb
        std::vector<T> f(ud * ud, T(0.0));
        for (std::size_t a = 0; a < ud; ++a)
          for (std::size_t b = 0; b < ud; ++b)
            for (std::size_t c = 0; c < ud; ++c) f[a * ud + b] += p[c * ud + a] * m[c * ud + b];
        return f;
      }));
}

}  // namespace sasakian
