#include "sasakian/induced.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace sasakian {

namespace {

// Wraps one component group of induce_at as a field on M.
template <class Pick>
TensorField induced_field(const Embedding& e, const NormalField& n, Valence valence, Pick pick) {
  const int m = e.dim();
  const auto size = static_cast<int>(component_count(valence, m));
  return TensorField(valence, ChartMap::generic_first_order(m, size, [e, n, pick](auto s) {
                       using T = scalar_of<decltype(s)>;
                       return pick(induce_at<T>(e, n, s));
                     }));
}

template <class T>
std::vector<T> flatten(const SmallMatrix<T>& m) {
  return std::vector<T>(m.data().begin(), m.data().end());
}

Jet make_jet(Valence valence, int dim, const std::vector<D1>& comps) {
  Jet j{Tensor(valence, dim), {}, {}};
  const auto ud = static_cast<std::size_t>(dim);
  j.partials.resize(comps.size() * ud);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    j.value[c] = comps[c].value();
    for (std::size_t k = 0; k < ud; ++k) j.partials[c * ud + k] = comps[c].partial(k);
  }
  return j;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

InducedStructure::InducedStructure(Embedding e, NormalField n)
    : e_(std::move(e)),
      n_(std::move(n)),
      phi_(induced_field(e_, n_, Valence{1, 1}, [](const auto& r) { return flatten(r.phi); })),
      U_(induced_field(e_, n_, Valence{1, 0}, [](const auto& r) { return r.U; })),
      V_(induced_field(e_, n_, Valence{1, 0}, [](const auto& r) { return r.V; })),
      u_(induced_field(e_, n_, Valence{0, 1}, [](const auto& r) { return r.u; })),
      v_(induced_field(e_, n_, Valence{0, 1}, [](const auto& r) { return r.v; })),
      lambda_(induced_field(e_, n_, Valence{0, 0}, [](const auto& r) { return std::vector{r.lambda}; })),
      g_(induced_field(e_, n_, Valence{0, 2}, [](const auto& r) { return flatten(r.g); })) {
  if (e_.contact() == nullptr)
    throw Error(ErrorCode::invalid_argument, "induced structure needs a contact ambient");
}

InducedPoint InducedStructure::at(const Point& p) const {
  const int m = dim();
  if (p.dim() != m)
    throw Error(ErrorCode::dimension_mismatch, "point dimension does not match the hypersurface chart");
  const std::vector<D1> s = seed(p.coords());
  const InducedAt<D1> r = induce_at<D1>(e_, n_, std::span<const D1>(s));

  InducedPoint out;
  out.dim = m;
  const Jet gj = make_jet(Valence{0, 2}, m, flatten(r.g));
  const Jet phij = make_jet(Valence{1, 1}, m, flatten(r.phi));
  const Jet uj = make_jet(Valence{0, 1}, m, r.u);
  const Jet vj = make_jet(Valence{0, 1}, m, r.v);
  const Jet Uj = make_jet(Valence{1, 0}, m, r.U);
  const Jet Vj = make_jet(Valence{1, 0}, m, r.V);
  const Jet lj = make_jet(Valence{0, 0}, m, {r.lambda});

  out.g = to_matrix(gj.value);
  require_riemannian(out.g);
  out.phi = to_matrix(phij.value);
  out.u = to_vector(uj.value);
  out.v = to_vector(vj.value);
  out.U = to_vector(Uj.value);
  out.V = to_vector(Vj.value);
  out.lambda = r.lambda.value();
  out.eta_n = r.eta_n.value();
  out.phi_n_normal = r.phi_n_normal.value();
  out.dlambda = Eigen::Map<const Eigen::VectorXd>(lj.partials.data(), m);

  const ChristoffelSymbols gamma = christoffel_from_jet(gj);
  out.nabla_phi = covariant_differential(gamma, phij);
  out.nabla_u = covariant_differential(gamma, uj);
  out.nabla_v = covariant_differential(gamma, vj);
  out.nabla_U = covariant_differential(gamma, Uj);
  out.nabla_V = covariant_differential(gamma, Vj);
  out.levi_civita = gamma;
  out.gw = gauss_weingarten(e_, n_, p);
  return out;
}

InducedStructure extract_structure(const Embedding& e, const NormalField& n,
                                   std::span<const Point> points) {
  const AlmostContactMetricStructure* c = e.contact();
  if (c == nullptr) throw Error(ErrorCode::invalid_argument, "induced structure needs a contact ambient");
  if (points.empty()) throw Error(ErrorCode::invalid_argument, "structure extraction needs sample points");

  std::vector<Point> images;
  images.reserve(points.size());
  for (const Point& p : points) images.push_back(e.image(p));
  std::vector<TensorField> basis;
  const int d = e.ambient_dim();
  for (int i = 0; i < d; ++i) {
    std::vector<double> v(static_cast<std::size_t>(d), 0.0);
    v[static_cast<std::size_t>(i)] = 1.0;
    basis.push_back(constant_field(Valence{1, 0}, d, std::move(v)));
  }
  const AxiomReport axioms = check_sasakian_axioms(*c, images, basis);
  if (axioms.max_residual > kAmbientAxiomTol)
    throw Error(ErrorCode::not_sasakian, "ambient structure fails the Sasakian axioms (max residual " +
                                             std::to_string(axioms.max_residual) + ")");

  for (const Point& p : points) {
    const InducedAt<double> r = induce_at<double>(e, n, p.coords());
    if (std::abs(r.phi_n_normal) > kTangencyTol)
      throw Error(ErrorCode::not_tangent,
                  "phi~ N has normal component " + std::to_string(r.phi_n_normal));
  }
  return InducedStructure(e, n);
}

std::vector<DirectionPair> sample_direction_pairs(Sampler& rng, int dim, std::size_t count) {
  std::vector<DirectionPair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd x = rng.vector(dim);
    Eigen::VectorXd y = rng.vector(dim);
    out.push_back({std::move(x), std::move(y)});
  }
  return out;
}

std::string_view shape_name(ShapeChoice s) noexcept {
  switch (s) {
    case ShapeChoice::h_shape: return "H_h";
    case ShapeChoice::w_shape: return "H_w";
    case ShapeChoice::minus_w_shape: return "-H_w";
  }
  return "unknown";
}

std::string_view sign_name(SignChoice s) noexcept {
  return s == SignChoice::printed ? "printed" : "negated";
}

const IdentityResult& IdentityReport::get(std::string_view name) const {
  for (const IdentityResult& r : results)
    if (r.name == name) return r;
  throw Error(ErrorCode::invalid_argument, "no identity named " + std::string(name));
}

StructureSamples evaluate_samples(const InducedStructure& s, std::span<const Point> points,
                                  std::vector<DirectionPair> pairs) {
  StructureSamples out;
  out.points.reserve(points.size());
  for (const Point& p : points) out.points.push_back(s.at(p));
  out.pairs = std::move(pairs);
  for (const DirectionPair& dp : out.pairs)
    if (dp.x.size() != s.dim() || dp.y.size() != s.dim())
      throw Error(ErrorCode::dimension_mismatch, "direction pair does not match the chart dimension");
  return out;
}

namespace {

Eigen::VectorXd unit(const Eigen::VectorXd& x, const Eigen::MatrixXd& g) {
  return x / std::sqrt(x.dot(g * x));
}

// Running max of one residual.
struct Max {
  double value = 0.0;
  void operator()(double r) { value = std::max(value, r); }
};

IdentityResult plain(std::string name, std::string ref, double residual, std::size_t samples) {
  IdentityResult r;
  r.name = std::move(name);
  r.equation_ref = std::move(ref);
  r.max_residual = residual;
  r.samples_used = samples;
  return r;
}

}  // namespace

IdentityReport verify_structure(const StructureSamples& samples) {
  Max tangency, gauge, umax;
  for (const InducedPoint& p : samples.points) {
    tangency(std::abs(p.phi_n_normal));
    gauge(std::abs(p.lambda - p.eta_n));
    umax(max_abs(p.u));
  }
  const std::size_t n = samples.points.size();
  IdentityReport rep;
  rep.samples = n;
  rep.results.push_back(plain("phi_n_tangency", "Eq (2.2)", tangency.value, n));
  rep.results.push_back(plain("lambda_eta_n", "Eq (2.3)", gauge.value, n));
  rep.results.push_back(plain("noninvariance", "Eq (2.1)", umax.value, n));
  return rep;
}

IdentityReport verify_algebraic_identities(const StructureSamples& samples) {
  Max a5, b5, c5, d5, e5, m6, d7, a8, b8, c8, d8, e8;
  for (const InducedPoint& p : samples.points) {
    const Eigen::MatrixXd& phi = p.phi;
    const Eigen::MatrixXd& g = p.g;
    const double l = p.lambda;
    const double en = p.eta_n;
    const auto m = phi.rows();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);

    c5(max_abs(phi * p.U + en * p.V));
    c5(max_abs(phi * p.V - l * p.U));
    d5(std::abs(p.u.dot(p.U) - (1.0 - l * en)));
    d5(std::abs(p.u.dot(p.V)));
    e5(std::abs(p.v.dot(p.U)));
    e5(std::abs(p.v.dot(p.V) - (1.0 - l * en)));

    a8(max_abs(phi * phi - (-id + p.U * p.u.transpose() + p.V * p.v.transpose())));
    b8(max_abs(phi * p.U + l * p.V));
    b8(max_abs(phi * p.V - l * p.U));
    c8(max_abs(phi.transpose() * p.u - l * p.v));
    c8(max_abs(phi.transpose() * p.v + l * p.u));
    d8(std::abs(p.u.dot(p.U) - (1.0 - l * l)));
    d8(std::abs(p.u.dot(p.V)));
    e8(std::abs(p.v.dot(p.U)));
    e8(std::abs(p.v.dot(p.V) - (1.0 - l * l)));

    for (const DirectionPair& dp : samples.pairs) {
      const Eigen::VectorXd x = unit(dp.x, g);
      const Eigen::VectorXd y = unit(dp.y, g);
      for (const Eigen::VectorXd* z : {&x, &y}) {
        a5(max_abs(phi * (phi * *z) - (-*z + p.u.dot(*z) * p.U + p.v.dot(*z) * p.V)));
        b5(std::abs(p.u.dot(phi * *z) - l * p.v.dot(*z)));
        b5(std::abs(p.v.dot(phi * *z) + en * p.u.dot(*z)));
        d7(std::abs((g * p.U).dot(*z) - p.u.dot(*z)));
        d7(std::abs((g * p.V).dot(*z) - p.v.dot(*z)));
      }
      m6(std::abs((phi * x).dot(g * (phi * y)) -
                  (x.dot(g * y) - p.u.dot(x) * p.u.dot(y) - p.v.dot(x) * p.v.dot(y))));
    }
  }
  const std::size_t n = samples.points.size();
  IdentityReport rep;
  rep.samples = n;
  rep.results.push_back(plain("induced_phi_squared", "Eq (2.5)(a)", a5.value, n));
  rep.results.push_back(plain("induced_u_phi_v_phi", "Eq (2.5)(b)", b5.value, n));
  rep.results.push_back(plain("induced_phi_U_phi_V", "Eq (2.5)(c)", c5.value, n));
  rep.results.push_back(plain("induced_u_U_u_V", "Eq (2.5)(d)", d5.value, n));
  rep.results.push_back(plain("induced_v_U_v_V", "Eq (2.5)(e)", e5.value, n));
  rep.results.push_back(plain("induced_metric_phi", "Eq (2.6)", m6.value, n));
  rep.results.push_back(plain("induced_duals", "Eq (2.7)", d7.value, n));
  rep.results.push_back(plain("gauge_phi_squared", "Eq (2.8)(a)", a8.value, n));
  rep.results.push_back(plain("gauge_phi_U_phi_V", "Eq (2.8)(b)", b8.value, n));
  rep.results.push_back(plain("gauge_u_phi_v_phi", "Eq (2.8)(c)", c8.value, n));
  rep.results.push_back(plain("gauge_u_U_u_V", "Eq (2.8)(d)", d8.value, n));
  rep.results.push_back(plain("gauge_v_U_v_V", "Eq (2.8)(e)", e8.value, n));
  return rep;
}

namespace {

// Data at one (point, direction pair), with derivatives already contracted
// along Y.
struct Local {
  Eigen::MatrixXd g, phi, h;
  Eigen::VectorXd u, v, U, V, w, dlambda;
  double lambda = 0.0;
  Eigen::MatrixXd nabla_y_phi;
  Eigen::VectorXd nabla_y_u, nabla_y_v, nabla_y_U, nabla_y_V;
  Eigen::VectorXd x, y;

  // phi~ -> -phi~ flips phi, u, U and their derivatives.
  [[nodiscard]] Local opposite() const {
    Local o = *this;
    o.phi = -phi;
    o.u = -u;
    o.U = -U;
    o.nabla_y_phi = -nabla_y_phi;
    o.nabla_y_u = -nabla_y_u;
    o.nabla_y_U = -nabla_y_U;
    return o;
  }
};

// Residual of one identity for a shape operator H and sign s on the h/H
// terms of the printed right-hand side.
using IdentityFn = std::function<double(const Local&, const Eigen::MatrixXd& H, double s)>;

struct DifferentialIdentity {
  const char* name;
  const char* ref;
  IdentityFn fn;
};

const std::vector<DifferentialIdentity>& differential_identities() {
  static const std::vector<DifferentialIdentity> ids = {
      {"nabla_phi_induced", "Eq (2.11)",
       [](const Local& l, const Eigen::MatrixXd& H, double s) {
         const double gxy = l.x.dot(l.g * l.y);
         const double hxy = l.x.dot(l.h * l.y);
         const Eigen::VectorXd rhs = l.v.dot(l.x) * l.y - gxy * l.V +
                                     s * (-hxy * l.U - l.u.dot(l.x) * (H * l.y));
         return max_abs(l.nabla_y_phi * l.x - rhs);
       }},
      {"nabla_u", "Eq (2.12)",
       [](const Local& l, const Eigen::MatrixXd&, double s) {
         const double gxy = l.x.dot(l.g * l.y);
         const double h_phix_y = (l.phi * l.x).dot(l.h * l.y);
         const double rhs = -l.lambda * gxy - l.u.dot(l.x) * l.w.dot(l.y) + s * (-h_phix_y);
         return std::abs(l.nabla_y_u.dot(l.x) - rhs);
       }},
      {"nabla_v", "Eq (2.13)",
       [](const Local& l, const Eigen::MatrixXd&, double s) {
         const double g_phiy_x = (l.phi * l.y).dot(l.g * l.x);
         const double hxy = l.x.dot(l.h * l.y);
         return std::abs(l.nabla_y_v.dot(l.x) - (g_phiy_x + s * l.lambda * hxy));
       }},
      {"nabla_U", "Eq (2.14)",
       [](const Local& l, const Eigen::MatrixXd& H, double s) {
         const Eigen::VectorXd rhs = l.w.dot(l.y) * l.U - l.lambda * l.y + s * (-(l.phi * (H * l.y)));
         return max_abs(l.nabla_y_U - rhs);
       }},
      {"nabla_V", "Eq (2.15)",
       [](const Local& l, const Eigen::MatrixXd& H, double s) {
         return max_abs(l.nabla_y_V - (l.phi * l.y + s * l.lambda * (H * l.y)));
       }},
      {"h_Y_V", "Eq (2.16)",
       [](const Local& l, const Eigen::MatrixXd&, double s) {
         const double lhs = s * l.y.dot(l.h * l.V);
         return std::abs(lhs - (l.u.dot(l.y) - l.dlambda.dot(l.y) - l.lambda * l.w.dot(l.y)));
       }},
      {"h_Y_U", "Eq (2.17)",
       [](const Local& l, const Eigen::MatrixXd& H, double s) {
         return std::abs(l.y.dot(l.h * l.U) - s * (-l.u.dot(H * l.y)));
       }},
  };
  return ids;
}

const Eigen::MatrixXd& shape(const GaussWeingartenData& gw, ShapeChoice c, Eigen::MatrixXd& scratch) {
  switch (c) {
    case ShapeChoice::h_shape: return gw.shape_h;
    case ShapeChoice::w_shape: return gw.shape_w;
    case ShapeChoice::minus_w_shape: scratch = -gw.shape_w; return scratch;
  }
  return gw.shape_h;
}

// Variants whose residuals differ only by rounding are tied; the earlier one
// in kVariants wins.
bool ties(double r, double lowest) { return r <= lowest * (1.0 + kTieRelative) + kTieAbsolute; }

Local local_at(const InducedPoint& p, const DirectionPair& dp) {
  Local l;
  const int m = p.dim;
  l.g = p.g;
  l.phi = p.phi;
  l.h = p.gw.h;
  l.u = p.u;
  l.v = p.v;
  l.U = p.U;
  l.V = p.V;
  l.w = p.gw.w;
  l.dlambda = p.dlambda;
  l.lambda = p.lambda;
  l.x = unit(dp.x, p.g);
  l.y = unit(dp.y, p.g);
  l.nabla_y_phi = to_matrix(contract_direction(p.nabla_phi, Valence{1, 1}, m, l.y));
  l.nabla_y_u = to_vector(contract_direction(p.nabla_u, Valence{0, 1}, m, l.y));
  l.nabla_y_v = to_vector(contract_direction(p.nabla_v, Valence{0, 1}, m, l.y));
  l.nabla_y_U = to_vector(contract_direction(p.nabla_U, Valence{1, 0}, m, l.y));
  l.nabla_y_V = to_vector(contract_direction(p.nabla_V, Valence{1, 0}, m, l.y));
  return l;
}

}  // namespace

IdentityReport verify_differential_identities(const StructureSamples& samples, bool strict) {
  const auto& ids = differential_identities();
  const std::size_t nv = strict ? 1 : kVariants.size();
  constexpr std::size_t kShapes = 3;
  // worst[identity][variant], opposite[identity][shape]
  std::vector<std::vector<double>> worst(ids.size(), std::vector<double>(nv, 0.0));
  std::vector<std::array<double, kShapes>> opposite(ids.size(), {0.0, 0.0, 0.0});

  std::vector<Local> locals;
  for (const InducedPoint& p : samples.points) {
    locals.clear();
    for (const DirectionPair& dp : samples.pairs) locals.push_back(local_at(p, dp));
    Eigen::MatrixXd scratch;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      for (std::size_t vi = 0; vi < nv; ++vi) {
        const Variant var = kVariants[vi];
        const Eigen::MatrixXd H = shape(p.gw, var.shape, scratch);
        const double s = var.sign == SignChoice::printed ? 1.0 : -1.0;
        for (const Local& l : locals) worst[k][vi] = std::max(worst[k][vi], ids[k].fn(l, H, s));
      }
      if (!strict) {
        for (std::size_t si = 0; si < kShapes; ++si) {
          const Eigen::MatrixXd H = shape(p.gw, kVariants[si].shape, scratch);
          for (const Local& l : locals)
            opposite[k][si] = std::max(opposite[k][si], ids[k].fn(l.opposite(), H, 1.0));
        }
      }
    }
  }

  IdentityReport rep;
  rep.samples = samples.points.size();
  std::optional<ShapeChoice> shape_of_h_Y_U;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    IdentityResult r;
    r.name = ids[k].name;
    r.equation_ref = ids[k].ref;
    r.samples_used = samples.points.size();
    double lowest = worst[k][0];
    for (std::size_t vi = 0; vi < nv; ++vi) {
      r.variants.emplace_back(kVariants[vi], worst[k][vi]);
      lowest = std::min(lowest, worst[k][vi]);
    }
    std::size_t best = 0;
    while (!ties(worst[k][best], lowest)) ++best;
    r.convention = kVariants[best];
    r.max_residual = worst[k][best];
    if (!strict) {
      const double low = *std::min_element(opposite[k].begin(), opposite[k].end());
      std::size_t bs = 0;
      while (!ties(opposite[k][bs], low)) ++bs;
      r.opposite_phi_residual = opposite[k][bs];
      r.opposite_phi_shape = kVariants[bs].shape;
    }
    if (r.name == "h_Y_U") shape_of_h_Y_U = r.convention->shape;
    rep.results.push_back(std::move(r));
  }

  // H U = 0 under the shape operator that best fits h(Y, U) = -u(HY).
  const ShapeChoice sc = shape_of_h_Y_U.value_or(ShapeChoice::h_shape);
  Max hu, hyu;
  for (const InducedPoint& p : samples.points) {
    Eigen::MatrixXd scratch;
    hu(max_abs(shape(p.gw, sc, scratch) * p.U));
    for (const DirectionPair& dp : samples.pairs) {
      const Eigen::VectorXd y = unit(dp.y, p.g);
      hyu(std::abs(y.dot(p.gw.h * p.U)));
    }
  }
  IdentityResult r18 = plain("shape_U", "Eq (2.18)", hu.value, samples.points.size());
  r18.convention = Variant{sc, SignChoice::printed};
  r18.auxiliary = std::pair<std::string, double>{"max_abs_h_Y_U", hyu.value};
  rep.results.push_back(std::move(r18));
  return rep;
}

}  // namespace sasakian
