#include "sasakian/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "sasakian/contact.hpp"
#include "sasakian/error.hpp"
#include "sasakian/expression.hpp"
#include "sasakian/hypersurface.hpp"
#include "sasakian/induced.hpp"
#include "sasakian/theorems.hpp"

#ifndef SASAKIAN_VERSION
#define SASAKIAN_VERSION "0.0.0"
#endif

namespace sasakian {

using json = nlohmann::ordered_json;

// ---- catalogue -------------------------------------------------------------

const std::vector<std::string>& check_groups() {
  static const std::vector<std::string> groups{"axioms",   "two_form",     "gauss_weingarten", "structure",
                                               "algebraic", "differential", "theorems",         "models"};
  return groups;
}

const std::vector<std::pair<std::string, std::string>>& check_catalogue() {
  static const std::vector<std::pair<std::string, std::string>> cat = [] {
    std::vector<std::pair<std::string, std::string>> c;
    auto add = [&](const std::string& group, std::initializer_list<const char*> names) {
      for (const char* n : names) c.emplace_back(n, group);
    };
    add("axioms", {"eta_xi", "phi_squared", "eta_phi", "phi_xi", "phi_rank", "metric_compat", "g_xi_eta",
                   "nabla_phi", "nabla_xi"});
    add("two_form", {"two_form_antisymmetry", "two_form_phi_swap", "two_form_phi_invariance"});
    add("gauss_weingarten", {"gauss_reconstruction", "weingarten_reconstruction", "h_symmetry",
                             "induced_connection_levi_civita", "weingarten_side_condition", "w_log_rho"});
    add("structure", {"phi_n_tangency", "lambda_eta_n", "noninvariance"});
    add("algebraic", {"induced_phi_squared", "induced_u_phi_v_phi", "induced_phi_U_phi_V", "induced_u_U_u_V",
                      "induced_v_U_v_V", "induced_metric_phi", "induced_duals", "gauge_phi_squared",
                      "gauge_phi_U_phi_V", "gauge_u_phi_v_phi", "gauge_u_U_u_V", "gauge_v_U_v_V"});
    add("differential", {"nabla_phi_induced", "nabla_u", "nabla_v", "nabla_U", "nabla_V", "h_Y_V", "h_Y_U",
                         "shape_U"});
    add("theorems", {"phi_parallel", "U_parallel", "V_parallel", "h_zero", "v_of_shape"});
    add("models", {"model_invariants", "phi_parallel_model", "U_parallel_model", "V_parallel_model",
                   "h_zero_model"});
    return c;
  }();
  return cat;
}

namespace {

std::string axiom_ref(Axiom a) {
  switch (a) {
    case Axiom::eta_xi: return "Eq (1.1)";
    case Axiom::phi_squared: return "Eq (1.2)";
    case Axiom::eta_phi: return "Eq (1.3)(a)";
    case Axiom::phi_xi: return "Eq (1.3)(b)";
    case Axiom::phi_rank: return "Eq (1.3)(c)";
    case Axiom::metric_compat: return "Eq (1.4)";
    case Axiom::g_xi_eta: return "Eq (1.5)";
    case Axiom::nabla_phi: return "Eq (1.6)";
    case Axiom::nabla_xi: return "Eq (1.7)";
    case Axiom::two_form_antisymmetry: return "Eq (1.8)";
    case Axiom::two_form_phi_swap: return "Eq (1.9)";
    case Axiom::two_form_phi_invariance: return "Eq (1.10)";
  }
  return "";
}

bool is_group(const std::string& s) {
  const auto& g = check_groups();
  return std::find(g.begin(), g.end(), s) != g.end();
}

bool is_check(const std::string& s) {
  const auto& c = check_catalogue();
  return std::any_of(c.begin(), c.end(), [&](const auto& kv) { return kv.first == s; });
}

// ---- config ----------------------------------------------------------------

[[noreturn]] void config_fail(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::config_error, key + ": " + what);
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key, const char* kind) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    config_fail(key, std::string("expected ") + kind);
  }
}

std::string text(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) config_fail(key, "expected a string");
  return node.Scalar();
}

void allow_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> keys) {
  if (!node.IsMap()) config_fail(where, "expected a mapping");
  for (const auto& kv : node) {
    const std::string k = kv.first.as<std::string>();
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      config_fail(where.empty() ? k : where + "." + k, "unknown key");
  }
}

std::vector<std::string> string_list(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) config_fail(key, "expected a list");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(text(node[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> number_list(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) config_fail(key, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(scalar<double>(node[i], key + "[" + std::to_string(i) + "]", "a number"));
  return out;
}

std::vector<std::string> default_coordinates(int n) {
  std::vector<std::string> c;
  for (int i = 1; i <= 2 * n; ++i) c.push_back("s" + std::to_string(i));
  return c;
}

Expression parse_expression(const std::string& src, const std::vector<std::string>& vars, const std::string& key) {
  try {
    return Expression::parse(src, vars);
  } catch (const Error& e) {
    throw Error(ErrorCode::parse_error, key + ": " + e.what());
  }
}

void validate_checks(const std::vector<std::string>& checks, const std::string& key) {
  for (const std::string& c : checks)
    if (!is_group(c) && !is_check(c) && c != "all") config_fail(key, "unknown check or group '" + c + "'");
}

void validate(const SuiteConfig& c) {
  if (c.n < 1 || c.n > 3) config_fail("ambient.n", "must be 1, 2 or 3");
  const auto m = static_cast<std::size_t>(2 * c.n);
  if (c.coordinates.size() != m)
    config_fail("embedding.coordinates", "has " + std::to_string(c.coordinates.size()) + " names; n = " +
                                             std::to_string(c.n) + " needs " + std::to_string(m));
  std::set<std::string> seen;
  for (const std::string& v : c.coordinates) {
    if (v.empty() || !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_'))
      config_fail("embedding.coordinates", "'" + v + "' is not a valid name");
    if (!seen.insert(v).second) config_fail("embedding.coordinates", "duplicate name '" + v + "'");
    if (v == "pi" || v == "exp" || v == "sin" || v == "cos" || v == "sqrt" || v == "log")
      config_fail("embedding.coordinates", "'" + v + "' is reserved");
  }
  if (c.map.size() != m + 1)
    config_fail("embedding.map", "has " + std::to_string(c.map.size()) + " expressions; standard_sasakian with n = " +
                                     std::to_string(c.n) + " needs " + std::to_string(m + 1));
  for (std::size_t i = 0; i < c.map.size(); ++i)
    (void)parse_expression(c.map[i], c.coordinates, "embedding.map[" + std::to_string(i) + "]");
  if (c.scaling) (void)parse_expression(*c.scaling, c.coordinates, "normal.scaling");
  if (c.base_point && c.base_point->size() != m) config_fail("normal.base_point", "needs " + std::to_string(m) + " coordinates");
  if (c.sample_count == 0) config_fail("sample.count", "must be positive");
  if (!(c.box_lo < c.box_hi)) config_fail("sample.box", "needs lo < hi");
  if (c.pairs == 0) config_fail("sample.pairs", "must be positive");
  if (c.model_count == 0) config_fail("models.count", "must be positive");
  const SuiteConfig::Tolerances& t = c.tolerances;
  for (double v : {t.axiom, t.gauss_weingarten, t.algebraic, t.differential, t.hypothesis, t.conclusion, t.model})
    if (!(v > 0.0)) config_fail("tolerances", "every tolerance must be positive");
  if (c.checks) validate_checks(*c.checks, "checks");
}

}  // namespace

void require_known_checks(const std::vector<std::string>& names) { validate_checks(names, "checks"); }

SuiteConfig parse_config(std::string_view yaml, std::string name) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::config_error, std::string("malformed YAML: ") + e.what());
  }
  if (!root.IsMap()) throw Error(ErrorCode::config_error, "config must be a mapping");
  allow_keys(root, "", {"name", "ambient", "embedding", "normal", "sample", "tolerances", "models", "checks",
                        "strict_paper_mode"});

  SuiteConfig c;
  c.name = root["name"] ? text(root["name"], "name") : std::move(name);

  const YAML::Node amb = root["ambient"];
  if (!amb) config_fail("ambient", "missing");
  allow_keys(amb, "ambient", {"name", "n"});
  if (amb["name"] && text(amb["name"], "ambient.name") != "standard_sasakian")
    config_fail("ambient.name", "only standard_sasakian is built in");
  if (!amb["n"]) config_fail("ambient.n", "missing");
  c.n = scalar<int>(amb["n"], "ambient.n", "an integer");
  if (c.n < 1 || c.n > 3) config_fail("ambient.n", "must be 1, 2 or 3");

  const YAML::Node emb = root["embedding"];
  if (!emb) config_fail("embedding", "missing");
  allow_keys(emb, "embedding", {"coordinates", "map"});
  c.coordinates = emb["coordinates"] ? string_list(emb["coordinates"], "embedding.coordinates") : default_coordinates(c.n);
  if (!emb["map"]) config_fail("embedding.map", "missing");
  c.map = string_list(emb["map"], "embedding.map");

  if (const YAML::Node nrm = root["normal"]) {
    allow_keys(nrm, "normal", {"scaling", "orientation", "base_point"});
    if (nrm["scaling"]) {
      const std::string s = text(nrm["scaling"], "normal.scaling");
      if (s != "unit") c.scaling = s;
    }
    if (nrm["orientation"]) {
      const std::string o = text(nrm["orientation"], "normal.orientation");
      if (o == "positive") c.orientation = NormalOrientation::positive;
      else if (o == "negative") c.orientation = NormalOrientation::negative;
      else if (o == "lambda_nonnegative") c.orientation = NormalOrientation::lambda_nonnegative;
      else config_fail("normal.orientation", "expected positive, negative or lambda_nonnegative");
    }
    if (nrm["base_point"]) c.base_point = number_list(nrm["base_point"], "normal.base_point");
  }

  if (const YAML::Node smp = root["sample"]) {
    allow_keys(smp, "sample", {"count", "box", "seed", "pairs"});
    if (smp["count"]) c.sample_count = scalar<std::size_t>(smp["count"], "sample.count", "a positive integer");
    if (smp["box"]) {
      const std::vector<double> box = number_list(smp["box"], "sample.box");
      if (box.size() != 2) config_fail("sample.box", "expected [lo, hi]");
      c.box_lo = box[0];
      c.box_hi = box[1];
    }
    if (smp["seed"]) c.seed = scalar<std::uint64_t>(smp["seed"], "sample.seed", "a nonnegative integer");
    if (smp["pairs"]) c.pairs = scalar<std::size_t>(smp["pairs"], "sample.pairs", "a positive integer");
  }

  if (const YAML::Node tol = root["tolerances"]) {
    allow_keys(tol, "tolerances",
               {"axiom", "gauss_weingarten", "algebraic", "differential", "hypothesis", "conclusion", "model"});
    auto set = [&](const char* key, double& field) {
      if (tol[key]) field = scalar<double>(tol[key], std::string("tolerances.") + key, "a number");
    };
    set("axiom", c.tolerances.axiom);
    set("gauss_weingarten", c.tolerances.gauss_weingarten);
    set("algebraic", c.tolerances.algebraic);
    set("differential", c.tolerances.differential);
    set("hypothesis", c.tolerances.hypothesis);
    set("conclusion", c.tolerances.conclusion);
    set("model", c.tolerances.model);
  }

  if (const YAML::Node mdl = root["models"]) {
    allow_keys(mdl, "models", {"count"});
    if (mdl["count"]) c.model_count = scalar<std::size_t>(mdl["count"], "models.count", "a positive integer");
  }

  if (const YAML::Node chk = root["checks"]) {
    if (chk.IsScalar()) {
      if (chk.Scalar() != "all") config_fail("checks", "expected 'all' or a list");
    } else {
      c.checks = string_list(chk, "checks");
    }
  }
  if (root["strict_paper_mode"])
    c.strict_paper_mode = scalar<bool>(root["strict_paper_mode"], "strict_paper_mode", "true or false");

  validate(c);
  return c;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config_error, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string stem = path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (const auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_config(ss.str(), stem);
}

// ---- running ---------------------------------------------------------------

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::string convention_string(const Variant& v) {
  return std::string(shape_name(v.shape)) + ", " + std::string(sign_name(v.sign));
}

class Selection {
 public:
  explicit Selection(const std::optional<std::vector<std::string>>& checks) {
    if (!checks) {
      all_ = true;
      return;
    }
    for (const std::string& c : *checks) {
      if (c == "all") all_ = true;
      else if (is_group(c)) groups_.insert(c);
      else names_.insert(c);
    }
  }

  [[nodiscard]] bool wants(const std::string& name) const {
    if (all_ || names_.contains(name)) return true;
    for (const auto& [n, g] : check_catalogue())
      if (n == name) return groups_.contains(g);
    return false;
  }

  [[nodiscard]] bool wants_group(const std::string& group) const {
    if (all_ || groups_.contains(group)) return true;
    for (const auto& [n, g] : check_catalogue())
      if (g == group && names_.contains(n)) return true;
    return false;
  }

 private:
  bool all_ = false;
  std::set<std::string> groups_, names_;
};

// Identities whose derivation uses g~(N, N) = 1 or the gauge eta(N) = lambda.
bool unit_normal_only(const std::string& name) {
  return name == "lambda_eta_n" || name == "induced_metric_phi" || name == "induced_duals" ||
         name.rfind("gauge_", 0) == 0;
}

struct Context {
  const SuiteConfig& config;
  Selection selection;
  VerificationReport& report;

  void add(CheckRow row) {
    if (!selection.wants(row.name)) return;
    if (config.scaling && row.verdict == "fail" && unit_normal_only(row.name)) {
      row.verdict = "unit_normal_only";
      row.details["note"] = "premise g~(N, N) = 1 does not hold for a scaled normal";
    }
    report.checks.push_back(std::move(row));
  }
};

CheckRow plain_row(std::string name, std::string group, std::string ref, double residual, double tol,
                   std::size_t used, std::size_t excluded = 0) {
  CheckRow r;
  r.name = std::move(name);
  r.group = std::move(group);
  r.equation_ref = std::move(ref);
  r.max_residual = residual;
  r.tolerance = tol;
  r.samples_used = used;
  r.samples_excluded = excluded;
  r.verdict = residual <= tol ? "pass" : "fail";
  return r;
}

json variants_json(const std::vector<std::pair<Variant, double>>& variants) {
  json a = json::array();
  for (const auto& [v, r] : variants)
    a.push_back(json{{"shape", shape_name(v.shape)}, {"sign", sign_name(v.sign)}, {"residual", r}});
  return a;
}

CheckRow identity_row(const IdentityResult& res, const std::string& group, double tol, bool strict,
                      std::size_t excluded) {
  CheckRow r = plain_row(res.name, group, res.equation_ref, res.max_residual, tol, res.samples_used,
                         excluded + res.samples_excluded);
  if (res.convention) {
    r.convention = convention_string(*res.convention);
    if (!strict && res.max_residual > tol) r.verdict = "refuted";
  }
  if (!res.variants.empty()) r.details["variants"] = variants_json(res.variants);
  if (res.opposite_phi_residual) {
    r.details["opposite_phi"] = json{{"shape", shape_name(res.opposite_phi_shape.value_or(ShapeChoice::h_shape))},
                                     {"residual", *res.opposite_phi_residual}};
  }
  if (res.auxiliary) r.details[res.auxiliary->first] = res.auxiliary->second;
  return r;
}

CheckRow theorem_row(const ImplicationCheckResult& res, const std::string& group, const TheoremTolerances& tol) {
  CheckRow r;
  r.name = res.name;
  r.group = group;
  r.equation_ref = res.equation_ref;
  r.tolerance = tol.conclusion;
  r.samples_used = res.samples_used;
  r.samples_excluded = res.samples_excluded;
  r.verdict = std::string(verdict_name(res.verdict));
  r.convention = res.convention;
  if (res.verdict != Verdict::vacuous) {
    double worst = 0.0;
    for (const Conclusion& c : res.conclusions)
      if (c.residual) worst = std::max(worst, *c.residual);
    r.max_residual = worst;
  }
  r.details["hypothesis_residual"] = res.hypothesis_residual;
  r.details["hypothesis_tolerance"] = tol.hypothesis;
  r.details["samples_total"] = res.samples_total;
  json cs = json::array();
  for (const Conclusion& c : res.conclusions) {
    json j{{"name", c.name}, {"equation_ref", c.equation_ref}};
    j["residual"] = c.residual ? json(*c.residual) : json(nullptr);
    j["excluded"] = c.excluded;
    if (!c.note.empty()) j["note"] = c.note;
    cs.push_back(std::move(j));
  }
  r.details["conclusions"] = std::move(cs);
  r.details["obstruction"] = res.obstruction ? json(*res.obstruction) : json(nullptr);
  json data = json::object();
  for (const auto& [k, v] : res.data) data[k] = v;
  r.details["data"] = std::move(data);
  return r;
}

bool point_local(ErrorCode code) {
  switch (code) {
    case ErrorCode::rank_deficient:
    case ErrorCode::ill_conditioned:
    case ErrorCode::outside_domain:
    case ErrorCode::non_finite:
    case ErrorCode::dual_division_by_zero:
    case ErrorCode::singular_metric:
      return true;
    default:
      return false;
  }
}

void run_axioms(Context& ctx, const AlmostContactMetricStructure& ambient, const std::vector<Point>& images) {
  const int d = ambient.dim();
  std::vector<TensorField> dirs;
  for (int a = 0; a < d; ++a) {
    std::vector<double> e(static_cast<std::size_t>(d), 0.0);
    e[static_cast<std::size_t>(a)] = 1.0;
    dirs.push_back(constant_field(Valence{1, 0}, d, std::move(e)));
  }
  const AxiomReport rep = check_sasakian_axioms(ambient, images, dirs);
  for (const AxiomReport::Entry& entry : rep.entries) {
    const std::string name(axiom_name(entry.axiom));
    const bool two_form = name.starts_with("two_form");
    ctx.add(plain_row(name, two_form ? "two_form" : "axioms", axiom_ref(entry.axiom), entry.residual,
                      ctx.config.tolerances.axiom, rep.samples));
  }
}

void run_gauss_weingarten(Context& ctx, const StructureSamples& s, const NormalField& nf, const std::vector<Point>& pts,
                          std::size_t excluded) {
  const double tol = ctx.config.tolerances.gauss_weingarten;
  const std::size_t n = s.points.size();
  double gauss = 0.0, weing = 0.0, sym = 0.0, lc = 0.0, printed = 0.0, negated = 0.0, wlog = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const InducedPoint& p = s.points[k];
    const GaussWeingartenData& gw = p.gw;
    gauss = std::max(gauss, gw.gauss_residual);
    weing = std::max(weing, gw.weingarten_residual);
    sym = std::max(sym, max_abs(gw.h - gw.h.transpose()));
    for (int a = 0; a < p.dim; ++a)
      for (int i = 0; i < p.dim; ++i)
        for (int j = 0; j < p.dim; ++j) lc = std::max(lc, std::abs(gw.connection(a, i, j) - p.levi_civita(a, i, j)));
    for (const DirectionPair& dp : s.pairs) {
      const Eigen::VectorXd y = dp.x / std::sqrt(dp.x.dot(p.g * dp.x));
      const Eigen::VectorXd z = dp.y / std::sqrt(dp.y.dot(p.g * dp.y));
      const double ghz = (gw.shape_w * y).dot(p.g * z);
      const double hyz = y.dot(gw.h * z);
      printed = std::max(printed, std::abs(ghz - hyz));
      negated = std::max(negated, std::abs(ghz + hyz));
    }
    Eigen::VectorXd dlog = Eigen::VectorXd::Zero(p.dim);
    if (nf.scaling) {
      const Jet j = jet(*nf.scaling, pts[k]);
      const double rho = j.value.values()[0];
      for (int i = 0; i < p.dim; ++i) dlog(i) = j.partial(0, i) / rho;
    }
    wlog = std::max(wlog, (gw.w - dlog).cwiseAbs().maxCoeff());
  }
  ctx.add(plain_row("gauss_reconstruction", "gauss_weingarten", "Eq (2.9)", gauss, tol, n, excluded));
  ctx.add(plain_row("weingarten_reconstruction", "gauss_weingarten", "Eq (2.10)", weing, tol, n, excluded));
  ctx.add(plain_row("h_symmetry", "gauss_weingarten", "Eq (2.9)", sym, tol, n, excluded));
  ctx.add(plain_row("induced_connection_levi_civita", "gauss_weingarten", "Eq (2.9)", lc, tol, n, excluded));

  // g(H Y, Z) = h(Y, Z) with H read off the Weingarten equation; the sign is
  // adjudicated like the differential identities.
  IdentityResult side;
  side.name = "weingarten_side_condition";
  side.equation_ref = "Eq (2.10)";
  side.samples_used = n;
  const Variant vp{ShapeChoice::w_shape, SignChoice::printed};
  const Variant vn{ShapeChoice::w_shape, SignChoice::negated};
  if (ctx.config.strict_paper_mode) {
    side.variants = {{vp, printed}};
    side.convention = vp;
    side.max_residual = printed;
  } else {
    side.variants = {{vp, printed}, {vn, negated}};
    const bool pick_printed = printed <= negated * (1.0 + kTieRelative) + kTieAbsolute;
    side.convention = pick_printed ? vp : vn;
    side.max_residual = pick_printed ? printed : negated;
  }
  ctx.add(identity_row(side, "gauss_weingarten", tol, ctx.config.strict_paper_mode, excluded));
  CheckRow w = plain_row("w_log_rho", "gauss_weingarten", "Eq (2.10)", wlog, tol, n, excluded);
  w.details["scaling"] = ctx.config.scaling ? json(*ctx.config.scaling) : json("unit");
  ctx.add(std::move(w));
}

void run_structure(Context& ctx, const StructureSamples& s, std::size_t excluded) {
  const IdentityReport rep = verify_structure(s);
  const double tol = ctx.config.tolerances.algebraic;
  ctx.add(identity_row(rep.get("phi_n_tangency"), "structure", tol, false, excluded));
  ctx.add(identity_row(rep.get("lambda_eta_n"), "structure", tol, false, excluded));
  const IdentityResult& u = rep.get("noninvariance");
  CheckRow r;
  r.name = u.name;
  r.group = "structure";
  r.equation_ref = u.equation_ref;
  r.tolerance = 1e-3;
  r.samples_used = u.samples_used;
  r.samples_excluded = excluded;
  r.verdict = u.max_residual > 1e-3 ? "noninvariant" : "invariant";
  r.details["max_abs_u"] = u.max_residual;
  ctx.add(std::move(r));
}

void run_theorems(Context& ctx, const StructureSamples& s, std::size_t excluded) {
  const TheoremTolerances tol{ctx.config.tolerances.hypothesis, ctx.config.tolerances.conclusion};
  auto add = [&](ImplicationCheckResult res) {
    res.samples_excluded += excluded;
    ctx.add(theorem_row(res, "theorems", tol));
  };
  add(check_phi_parallel_chart(s, tol));
  add(check_U_parallel_chart(s, tol));
  add(check_V_parallel_chart(s, tol));
  if (ctx.selection.wants("h_zero")) add(check_totally_geodesic_chart(s, tol));

  const double vh = v_of_shape_residual(s);
  CheckRow r = plain_row("v_of_shape", "theorems", "Theorem 3.1", vh, tol.conclusion, s.points.size(), excluded);
  if (vh > tol.conclusion) r.verdict = "refuted";
  r.convention = "H_h, printed";
  ctx.add(std::move(r));
}

void run_models(Context& ctx) {
  const SuiteConfig& c = ctx.config;
  const TheoremTolerances tol{c.tolerances.hypothesis, c.tolerances.conclusion};
  // The totally geodesic conclusion is exact algebra; it is held to the model tolerance.
  const TheoremTolerances exact{c.tolerances.hypothesis, c.tolerances.model};
  Sampler rng(c.seed);
  std::vector<ImplicationCheckResult> phi, U, V, h;
  double invariants = 0.0;
  std::size_t models = 0;
  for (int n : {1, 2, 3}) {
    for (std::size_t k = 0; k < c.model_count; ++k) {
      const PointwiseModel m = random_model(n, 0.1, 0.9, rng);
      invariants = std::max(invariants, model_identity_residual(m));
      ++models;
      phi.push_back(check_phi_parallel_model(m, tol));
      U.push_back(check_U_parallel_model(m, tol, rng));
      V.push_back(check_V_parallel_model(m, exact));
      h.push_back(check_totally_geodesic_model(m, tol, rng));
    }
  }
  CheckRow inv = plain_row("model_invariants", "models", "Eqs (2.6)-(2.8)", invariants, c.tolerances.model, models);
  inv.details["dimensions"] = json::array({2, 4, 6});
  inv.details["lambda_range"] = json::array({0.1, 0.9});
  ctx.add(std::move(inv));
  ctx.add(theorem_row(aggregate(std::move(phi)), "models", tol));
  ctx.add(theorem_row(aggregate(std::move(U)), "models", tol));
  ctx.add(theorem_row(aggregate(std::move(V)), "models", exact));
  ctx.add(theorem_row(aggregate(std::move(h)), "models", tol));
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

int VerificationReport::exit_code() const {
  for (const CheckRow& r : checks)
    if (r.verdict == "fail" || r.verdict == "refuted") return 2;
  return 0;
}

VerificationReport run_suite(const SuiteConfig& config) {
  validate(config);
  VerificationReport report;
  Context ctx{config, Selection(config.checks), report};
  const int m = 2 * config.n;

  report.meta["engine"] = "sasakian-verify";
  report.meta["version"] = SASAKIAN_VERSION;
  report.meta["config"] = config.name;
  report.meta["timestamp"] = utc_timestamp();
  report.meta["ambient"] = json{{"name", "standard_sasakian"}, {"n", config.n}};
  report.meta["embedding"] = json{{"coordinates", config.coordinates}, {"map", config.map}};
  report.meta["normal"] = json{
      {"scaling", config.scaling ? json(*config.scaling) : json("unit")},
      {"orientation", config.orientation == NormalOrientation::positive   ? "positive"
                      : config.orientation == NormalOrientation::negative ? "negative"
                                                                          : "lambda_nonnegative"}};
  report.meta["seed"] = config.seed;
  report.meta["strict_paper_mode"] = config.strict_paper_mode;
  report.meta["derivatives"] = "forward-mode dual numbers";
  report.meta["step_sizes"] = json{{"finite_difference", nullptr}};

  auto ambient = std::make_shared<const AlmostContactMetricStructure>(standard_sasakian(config.n));
  std::vector<Expression> comps;
  for (std::size_t i = 0; i < config.map.size(); ++i)
    comps.push_back(parse_expression(config.map[i], config.coordinates, "embedding.map[" + std::to_string(i) + "]"));
  const Embedding e(expression_map(std::move(comps), m), ambient);

  NormalField nf;
  nf.orientation = config.orientation == NormalOrientation::negative ? Orientation::negative : Orientation::positive;
  if (config.scaling)
    nf.scaling = TensorField(Valence{0, 0},
                             expression_map({parse_expression(*config.scaling, config.coordinates, "normal.scaling")}, m));
  if (config.orientation == NormalOrientation::lambda_nonnegative) {
    const std::vector<double> base = config.base_point.value_or(
        std::vector<double>(static_cast<std::size_t>(m), 0.5 * (config.box_lo + config.box_hi)));
    nf = orient_lambda_nonnegative(e, nf, Point(base));
  }

  Sampler rng(config.seed);
  const std::vector<Point> drawn = rng.points(config.sample_count, m, config.box_lo, config.box_hi);
  std::vector<DirectionPair> pairs = sample_direction_pairs(rng, m, config.pairs);

  // Points where the map itself cannot be evaluated are excluded up front.
  std::vector<Point> pts;
  std::vector<Point> images;
  for (const Point& p : drawn) {
    try {
      images.push_back(e.image(p));
      pts.push_back(p);
    } catch (const Error& err) {
      if (!point_local(err.code())) throw;
    }
  }
  std::size_t excluded = drawn.size() - pts.size();
  if (pts.empty()) throw Error(ErrorCode::all_excluded, "no sample point lies in the domain of the embedding");

  if (ctx.selection.wants_group("axioms") || ctx.selection.wants_group("two_form")) run_axioms(ctx, *ambient, images);

  const bool needs_structure = ctx.selection.wants_group("gauss_weingarten") || ctx.selection.wants_group("structure") ||
                               ctx.selection.wants_group("algebraic") || ctx.selection.wants_group("differential") ||
                               ctx.selection.wants_group("theorems");
  if (needs_structure) {
    const InducedStructure s = extract_structure(e, nf, pts);
    StructureSamples samples;
    samples.pairs = std::move(pairs);
    std::vector<Point> used;
    for (const Point& p : pts) {
      try {
        samples.points.push_back(s.at(p));
        used.push_back(p);
      } catch (const Error& err) {
        if (!point_local(err.code())) throw;
        ++excluded;
      }
    }
    if (samples.points.empty()) throw Error(ErrorCode::all_excluded, "every sample point was excluded");

    if (ctx.selection.wants_group("gauss_weingarten")) run_gauss_weingarten(ctx, samples, nf, used, excluded);
    if (ctx.selection.wants_group("structure")) run_structure(ctx, samples, excluded);
    if (ctx.selection.wants_group("algebraic")) {
      for (const IdentityResult& r : verify_algebraic_identities(samples).results)
        ctx.add(identity_row(r, "algebraic", config.tolerances.algebraic, false, excluded));
    }
    if (ctx.selection.wants_group("differential")) {
      for (const IdentityResult& r : verify_differential_identities(samples, config.strict_paper_mode).results)
        ctx.add(identity_row(r, "differential", config.tolerances.differential, config.strict_paper_mode, excluded));
    }
    if (ctx.selection.wants_group("theorems")) run_theorems(ctx, samples, excluded);
    report.meta["samples"] = json{{"requested", config.sample_count}, {"used", samples.points.size()},
                                  {"excluded", excluded}, {"box", json::array({config.box_lo, config.box_hi})},
                                  {"direction_pairs", config.pairs}};
  } else {
    report.meta["samples"] = json{{"requested", config.sample_count}, {"used", pts.size()},
                                  {"excluded", excluded}, {"box", json::array({config.box_lo, config.box_hi})},
                                  {"direction_pairs", config.pairs}};
  }

  if (ctx.selection.wants_group("models")) {
    run_models(ctx);
    report.meta["models"] = json{{"per_dimension", config.model_count}, {"dimensions", json::array({2, 4, 6})}};
  }
  return report;
}

// ---- output ----------------------------------------------------------------

namespace {

json summary(const VerificationReport& r) {
  json s = json::object();
  s["total"] = r.checks.size();
  for (const char* v : {"pass", "fail", "refuted", "confirmed", "vacuous", "unit_normal_only", "noninvariant", "invariant"}) {
    const auto count = std::count_if(r.checks.begin(), r.checks.end(), [&](const CheckRow& c) { return c.verdict == v; });
    s[v] = count;
  }
  s["exit_code"] = r.exit_code();
  return s;
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

}  // namespace

std::string to_json(const VerificationReport& report, bool include_timestamp) {
  json doc;
  doc["meta"] = report.meta;
  if (!include_timestamp) doc["meta"].erase("timestamp");
  json checks = json::array();
  for (const CheckRow& c : report.checks) {
    json j;
    j["name"] = c.name;
    j["group"] = c.group;
    j["equation_ref"] = c.equation_ref;
    j["max_residual"] = c.max_residual ? json(*c.max_residual) : json(nullptr);
    j["tolerance"] = c.tolerance;
    j["samples_used"] = c.samples_used;
    j["samples_excluded"] = c.samples_excluded;
    j["verdict"] = c.verdict;
    j["convention"] = c.convention ? json(*c.convention) : json(nullptr);
    for (const auto& [k, v] : c.details.items()) j[k] = v;
    checks.push_back(std::move(j));
  }
  doc["checks"] = std::move(checks);
  doc["summary"] = summary(report);
  return doc.dump(2) + "\n";
}

std::string to_text(const VerificationReport& report) {
  std::ostringstream os;
  os << "config " << report.meta.value("config", "") << "  seed " << report.meta.value("seed", 0)
     << (report.meta.value("strict_paper_mode", false) ? "  strict" : "") << "\n";
  std::size_t wn = 5, wg = 5, wr = 3, wv = 7;
  for (const CheckRow& c : report.checks) {
    wv = std::max(wv, c.verdict.size());
    wn = std::max(wn, c.name.size());
    wg = std::max(wg, c.group.size());
    wr = std::max(wr, c.equation_ref.size());
  }
  auto row = [&](const std::string& g, const std::string& n, const std::string& r, const std::string& res,
                 const std::string& tol, const std::string& v, const std::string& conv) {
    os << std::left << std::setw(static_cast<int>(wg)) << g << "  " << std::setw(static_cast<int>(wn)) << n << "  "
       << std::setw(static_cast<int>(wr)) << r << "  " << std::right << std::setw(10) << res << "  " << std::setw(10)
       << tol << "  " << std::left << std::setw(static_cast<int>(wv)) << v << "  " << conv << "\n";
  };
  row("group", "check", "ref", "residual", "tolerance", "verdict", "convention");
  for (const CheckRow& c : report.checks)
    row(c.group, c.name, c.equation_ref, c.max_residual ? sci(*c.max_residual) : "-", sci(c.tolerance), c.verdict,
        c.convention.value_or("-"));
  const json s = summary(report);
  os << "\n" << s["total"].get<long>() << " checks:";
  for (const char* v : {"pass", "fail", "refuted", "confirmed", "vacuous", "unit_normal_only", "noninvariant", "invariant"})
    if (s[v].get<long>() > 0) os << " " << s[v].get<long>() << " " << v << ",";
  os << " exit " << report.exit_code() << "\n";
  return os.str();
}

}  // namespace sasakian
