#pragma once

// Verification driver: named suites of checks over every module, a flat
// key=value config and an ordered JSON report.
//
// Config keys (one per line, '#' starts a comment):
//   n             1, 2 or 3                          (default 2)
//   seed          unsigned 64-bit                    (default 42)
//   fd_step       in [1e-7, 1e-2]                    (default 1e-5)
//   quad_degree   >= 4                               (default 24)
//   suites        comma list, "all" or empty         (default all)
//   output        report path, empty for stdout      (default empty)
//   grid          poisson grid spec                  (default random:100,2)
//   radius        mean-value sphere radius           (default 0.02)
//   timing        true/false, wall_ms in the report  (default true)
//   tol.<id>      tolerance override for a check id

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hyperlie/boundary.hpp"
#include "hyperlie/flow_calculus.hpp"
#include "hyperlie/iwasawa.hpp"
#include "hyperlie/keyvalue.hpp"
#include "hyperlie/lie_core.hpp"
#include "hyperlie/poisson.hpp"
#include "hyperlie/principal_series.hpp"
#include "hyperlie/quadrature.hpp"
#include "hyperlie/random.hpp"
#include "hyperlie/sections.hpp"

#ifndef HYPERLIE_VERSION
#define HYPERLIE_VERSION "0.0.0"
#endif

namespace hyperlie {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lie_core",         "iwasawa",       "boundary",
                                              "principal_series", "flow_calculus", "poisson"};
  return names;
}

struct VerifyConfig {
  int n = 2;
  std::uint64_t seed = 42;
  double fd_step = 1e-5;
  int quad_degree = 24;
  std::vector<std::string> suites = suite_names();
  std::string output_path;
  std::string grid = "random:100,2";
  double radius = 0.02;
  bool timing = true;
  std::map<std::string, double> tolerances;

  void validate() const {
    if (n < 1 || n > 3) throw ConfigError("n must be 1, 2 or 3");
    if (!(fd_step >= 1e-7 && fd_step <= 1e-2)) throw ConfigError("fd_step must lie in [1e-7, 1e-2]");
    if (quad_degree < 4) throw ConfigError("quad_degree must be >= 4");
    if (!(radius > 0.0 && radius <= 0.1)) throw ConfigError("radius must lie in (0, 0.1]");
    for (const std::string& s : suites)
      if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
        throw ConfigError("unknown suite '" + s + "'");
  }
};

inline VerifyConfig parse_config(std::istream& in) {
  VerifyConfig c;
  for (const auto& [key, value] : read_key_values(in)) {
    if (key == "n") {
      c.n = detail::parse_value<int>(key, value);
    } else if (key == "seed") {
      c.seed = detail::parse_unsigned(key, value);
    } else if (key == "fd_step") {
      c.fd_step = detail::parse_value<double>(key, value);
    } else if (key == "quad_degree") {
      c.quad_degree = detail::parse_value<int>(key, value);
    } else if (key == "suites") {
      c.suites = value == "all" ? suite_names() : detail::split_list(value);
    } else if (key == "output") {
      c.output_path = value;
    } else if (key == "grid") {
      c.grid = value;
    } else if (key == "radius") {
      c.radius = detail::parse_value<double>(key, value);
    } else if (key == "timing") {
      if (value != "true" && value != "false") throw ConfigError("timing must be true or false");
      c.timing = value == "true";
    } else if (key.rfind("tol.", 0) == 0 && key.size() > 4) {
      c.tolerances[key.substr(4)] = detail::parse_value<double>(key, value);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

inline VerifyConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline VerifyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return parse_config(in);
}

/// Name of the environment variable holding the default config path.
inline constexpr const char* kConfigEnv = "HYPERLIE_CONFIG";

// ---------------------------------------------------------------------------
// Invariant catalog. Every check names exactly one entry.

struct Invariant {
  std::string id;
  std::string statement;
};

inline const std::vector<Invariant>& invariant_catalog() {
  static const std::vector<Invariant> catalog{
      {"lie_core.algebra_membership", "X^T J + J X = 0"},
      {"lie_core.group_membership", "g^T J g = J, det g = 1, g_tt >= 1"},
      {"lie_core.bruhat_reassembly", "m + a + n+ + n- reassembles X"},
      {"lie_core.standard_basis", "<U_i, U_j> = delta_ij on n+ and n-"},
      {"lie_core.root_law", "[H0, U] = +-U for U in n+-"},
      {"lie_core.adjoint_eigen", "Ad(exp(-t H0)) U = e^{-+t} U"},
      {"lie_core.bruhat_orthogonality", "Bruhat components are mutually orthogonal"},
      {"lie_core.pairing_consistency", "<X, Y> = -(2n)^{-1} B(X, theta Y)"},
      {"lie_core.nilpotent_exactness", "exp on n+- is I + N + N^2/2"},
      {"iwasawa.factor_validity", "k block orthogonal with det 1"},
      {"iwasawa.round_trip", "k a n reassembles g"},
      {"iwasawa.m_stability", "H(g m) = H(g), k(g m) = k(g) m"},
      {"iwasawa.a_equivariance", "H(g exp(s H0)) = H(g) + s"},
      {"iwasawa.cocycle", "H(g1 g2) = H(g1 k(g2)) + H(g2)"},
      {"boundary.unit_vector", "|b| = 1"},
      {"boundary.tangent", "w . b = 0"},
      {"boundary.quadrature_weights", "weights sum to 1"},
      {"boundary.quadrature_exactness", "monomials up to the degree integrate exactly"},
      {"boundary.lift_independence", "action, factor and differential ignore the lift"},
      {"boundary.conformality", "|d alpha_g w| = e^{H^-(g k)} |w|"},
      {"boundary.differential", "d alpha_g matches finite differences"},
      {"boundary.algebraic_chain", "pr_k Ad(a n) Y = e^{H^-(g k)} Y modulo m"},
      {"boundary.change_of_variables", "Jacobian of alpha_g is e^{n H^-(g k)}"},
      {"boundary.kernel_cocycle", "Q(x,b,y) Q(y,b,z) = Q(x,b,z)"},
      {"principal_series.alternating", "sections are alternating"},
      {"principal_series.multilinear", "sections are multilinear"},
      {"principal_series.homomorphism", "pi(g1 g2) = pi(g1) pi(g2)"},
      {"principal_series.unitarity", "pi^{i nu} preserves the L^2 norm"},
      {"principal_series.compat", "pullback = pi^{p - n/2} on p-forms, not pi^{p - n/2 + 1}"},
      {"principal_series.twist_fusion", "pi^{l1} f * pi^{l2} s = pi^{l1 + l2 + n/2}(f s)"},
      {"flow_calculus.flow_point_m_invariance", "flow observables ignore right M"},
      {"flow_calculus.model_tangent", "model tangents have m-part 0"},
      {"flow_calculus.section_m_equivariance", "u(g m) = tau(m)^{-1} u(g)"},
      {"flow_calculus.anosov_rates", "d phi_t scales n+ by e^{-t}, n- by e^{t}"},
      {"flow_calculus.lie_shift", "L_X - nabla_X = -+ p on Lambda^p n+-*"},
      {"flow_calculus.commutation", "nabla_X U_- - U_- nabla_X = U_-"},
      {"flow_calculus.shift_exponent", "U_- u_mu scales with exponent -(mu - 1)"},
      {"flow_calculus.tensor_split", "T = Sym_0 + Lambda^2 + R, orthogonal"},
      {"poisson.hyperboloid", "x^T J x = -1, x_t >= 1"},
      {"poisson.kernel_sign", "kernel sign fixed by the eigenvalue law"},
      {"poisson.lift_independence", "P f(x) ignores the lift of x"},
      {"poisson.eigen_law", "Delta P f = lambda (n - lambda) P f"},
      {"poisson.equivariance", "P(pi(h) f) = P f o h^{-1}"},
      {"poisson.quadrature_convergence", "doubling the degree changes P f by <= 1e-6"},
  };
  return catalog;
}

// ---------------------------------------------------------------------------
// Report.

struct CheckRecord {
  std::string suite;
  std::string id;
  std::string invariant;
  std::string anchor;     // the identity being checked
  std::string relation;   // "<=": pass when residual <= tolerance; ">": the reverse
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double wall_ms = 0.0;
  std::string note;
};

struct VerifyReport {
  VerifyConfig config;
  std::vector<CheckRecord> checks;

  int failed() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) { return !c.pass; }));
  }
  int exit_code() const { return failed() == 0 ? 0 : 1; }
};

namespace detail {

inline nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const VerifyReport& r) {
  using nlohmann::ordered_json;
  ordered_json checks = ordered_json::array();
  for (const CheckRecord& c : r.checks) {
    ordered_json j;
    j["suite"] = c.suite;
    j["id"] = c.id;
    j["invariant"] = c.invariant;
    j["anchor"] = c.anchor;
    j["relation"] = c.relation;
    j["residual"] = detail::number(c.residual);
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    if (r.config.timing) j["wall_ms"] = c.wall_ms;
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(std::move(j));
  }
  ordered_json config;
  config["n"] = r.config.n;
  config["seed"] = r.config.seed;
  config["fd_step"] = r.config.fd_step;
  config["quad_degree"] = r.config.quad_degree;
  config["suites"] = r.config.suites;
  config["grid"] = r.config.grid;
  config["radius"] = r.config.radius;
  ordered_json tol = ordered_json::object();
  for (const auto& [k, v] : r.config.tolerances) tol[k] = v;
  config["tolerances"] = tol;

  ordered_json out;
  out["version"] = HYPERLIE_VERSION;
  out["config"] = config;
  out["checks"] = checks;
  const int total = static_cast<int>(r.checks.size());
  out["summary"] = {{"total", total}, {"passed", total - r.failed()}, {"failed", r.failed()}};
  return out;
}

/// The report without timing fields: equal across runs of the same config.
inline std::string report_content(const VerifyReport& r) {
  VerifyReport copy = r;
  copy.config.timing = false;
  return to_json(copy).dump(2);
}

// ---------------------------------------------------------------------------
// Suites.

class SuiteRun {
 public:
  SuiteRun(const VerifyConfig& config, std::string suite, std::vector<CheckRecord>& out)
      : config_(config), suite_(std::move(suite)), out_(out), rng_(make_stream(config.seed, suite_)) {}

  Rng& rng() { return rng_; }
  const VerifyConfig& config() const { return config_; }
  int n() const { return config_.n; }

  /// Runs `body` (returning the residual) and records it. Exceptions count as failures.
  void check(const std::string& id, const std::string& invariant, double tolerance,
             const std::function<double()>& body, const std::string& relation = "<=",
             std::function<std::string()> note = {}) {
    CheckRecord rec;
    rec.suite = suite_;
    rec.id = id;
    rec.invariant = invariant;
    rec.anchor = anchor_of(invariant);
    rec.relation = relation;
    const auto over = config_.tolerances.find(id);
    rec.tolerance = over == config_.tolerances.end() ? tolerance : over->second;
    const auto start = std::chrono::steady_clock::now();
    try {
      rec.residual = body();
      rec.pass = relation == "<=" ? rec.residual <= rec.tolerance : rec.residual > rec.tolerance;
      if (note) rec.note = note();
    } catch (const std::exception& e) {
      rec.residual = std::numeric_limits<double>::quiet_NaN();
      rec.pass = false;
      rec.note = std::string("exception: ") + e.what();
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out_.push_back(std::move(rec));
  }

 private:
  static std::string anchor_of(const std::string& invariant) {
    for (const Invariant& inv : invariant_catalog())
      if (inv.id == invariant) return inv.statement;
    throw std::logic_error("check names an unknown invariant: " + invariant);
  }

  const VerifyConfig& config_;
  std::string suite_;
  std::vector<CheckRecord>& out_;
  Rng rng_;
};

namespace detail {

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Exact integral of prod b_i^{e_i} over S^n for the probability measure.
inline double sphere_moment(const std::vector<int>& exponents) {
  for (int e : exponents)
    if (e % 2 != 0) return 0.0;
  const double dim = static_cast<double>(exponents.size());
  double log_value = std::lgamma(0.5 * dim);
  double sum = 0.0;
  for (int e : exponents) {
    log_value += std::lgamma(0.5 * (e + 1)) - std::lgamma(0.5);
    sum += e;
  }
  log_value -= std::lgamma(0.5 * (dim + sum));
  return std::exp(log_value);
}

inline BoundarySection harmonic_function(int n, int l, int m) {
  return {n, 0, [h = spherical_harmonic(n, l, m)](const BoundaryPoint& b, std::span<const Vector>) {
            return h(b.coords());
          }};
}

inline void lie_core_suite(SuiteRun& run) {
  const int n = run.n();
  Rng& rng = run.rng();
  run.check("lie_core.algebra_membership", "lie_core.algebra_membership", 1e-12, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vector v = random_gaussian(rng, n);
      for (const AlgebraElement& x :
           {random_algebra_element(rng, n), embed_n(Sign::plus, v), embed_n(Sign::minus, v),
            embed_mperp(v), embed_a(n, uniform(rng, -2, 2)), embed_m(random_skew(rng, n))})
        worst = std::max(worst, algebra_defect(x.matrix()));
    }
    return worst;
  });
  run.check("lie_core.group_membership", "lie_core.group_membership", 1e-9, [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      GroupElement g = GroupElement::identity(n);
      for (int i = 0; i < 10; ++i) g = g * group_exp(random_algebra_element(rng, n, 0.3));
      const GroupResiduals r = group_residuals(g.matrix());
      worst = std::max({worst, r.orthogonality, r.determinant, r.time_entry >= 1.0 ? 0.0 : 1.0});
      check_group_membership(g.matrix());
    }
    return worst;
  });
  run.check("lie_core.bruhat_reassembly", "lie_core.bruhat_reassembly", 1e-12, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const AlgebraElement x = random_algebra_element(rng, n);
      worst = std::max(worst, max_abs(bruhat_project(x).assemble().matrix() - x.matrix()));
    }
    return worst;
  });
  run.check("lie_core.standard_basis", "lie_core.standard_basis", 1e-12, [&] {
    const StandardBasis b = standard_basis(n);
    double worst = std::abs(pairings(b.h0, b.h0).inner - 2.0);
    for (const auto* family : {&b.uplus, &b.uminus})
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          worst = std::max(worst, std::abs(pairings((*family)[i], (*family)[j]).inner - (i == j ? 1.0 : 0.0)));
    return worst;
  });
  run.check("lie_core.root_law", "lie_core.root_law", 1e-12, [&] {
    const AlgebraElement h0 = embed_a(n, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
      for (Sign s : {Sign::plus, Sign::minus}) {
        const AlgebraElement u = embed_n(s, random_gaussian(rng, n));
        worst = std::max(worst, max_abs(bracket(h0, u).matrix() - to_double(s) * u.matrix()));
      }
    return worst;
  });
  run.check("lie_core.adjoint_eigen", "lie_core.adjoint_eigen", 1e-10, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
      for (Sign s : {Sign::plus, Sign::minus}) {
        const double t = uniform(rng, -2, 2);
        const AlgebraElement u = embed_n(s, random_gaussian(rng, n));
        const Matrix expect = std::exp(-to_double(s) * t) * u.matrix();
        worst = std::max(worst, max_abs(adjoint(group_exp(embed_a(n, -t)), u).matrix() - expect) / max_abs(expect));
      }
    return worst;
  });
  run.check("lie_core.bruhat_orthogonality", "lie_core.bruhat_orthogonality", 1e-12, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const BruhatComponents c = bruhat_project(random_algebra_element(rng, n));
      const AlgebraElement parts[] = {embed_m(c.m_part), embed_a(n, c.a_part), embed_n(Sign::plus, c.nplus),
                                      embed_n(Sign::minus, c.nminus)};
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) worst = std::max(worst, std::abs(pairings(parts[a], parts[b]).inner));
    }
    return worst;
  });
  run.check("lie_core.pairing_consistency", "lie_core.pairing_consistency", 1e-12, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const AlgebraElement x = random_algebra_element(rng, n), y = random_algebra_element(rng, n);
      const double inner = pairings(x, y).inner;
      const double via_killing = -pairings(x, cartan_involution(y)).killing / (2.0 * n);
      worst = std::max(worst, std::abs(inner - via_killing) / std::max(1.0, std::abs(inner)));
    }
    return worst;
  });
  run.check("lie_core.nilpotent_exactness", "lie_core.nilpotent_exactness", 1e-15, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
      for (Sign s : {Sign::plus, Sign::minus}) {
        const Matrix nil = embed_n(s, random_gaussian(rng, n)).matrix();
        const Matrix nil2 = nil * nil;
        const double scale = std::max(1.0, max_abs(nil2));
        worst = std::max(worst, max_abs(nil2 * nil) / scale);
        const Matrix quadratic = Matrix::Identity(n + 2, n + 2) + nil + 0.5 * nil2;
        worst = std::max(worst, max_abs(group_exp(AlgebraElement::from_matrix(nil)).matrix() - quadratic) / scale);
      }
    return worst;
  });
}

inline void iwasawa_suite(SuiteRun& run) {
  const int n = run.n();
  Rng& rng = run.rng();
  run.check("iwasawa.factor_validity", "iwasawa.factor_validity", 1e-10, [&] {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i)
      for (Sign s : {Sign::plus, Sign::minus}) {
        const Matrix k = iwasawa_decompose(random_group_element(rng, n, 0.8), s).k.matrix().topLeftCorner(n + 1, n + 1);
        worst = std::max({worst, max_abs(k.transpose() * k - Matrix::Identity(n + 1, n + 1)),
                          std::abs(k.determinant() - 1.0)});
      }
    return worst;
  });
  run.check("iwasawa.round_trip", "iwasawa.round_trip", 1e-9, [&] {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i)
      for (Sign s : {Sign::plus, Sign::minus}) {
        const GroupElement g = random_group_element(rng, n, 0.8);
        worst = std::max(worst, (iwasawa_decompose(g, s).reassemble().matrix() - g.matrix()).norm() / g.matrix().norm());
      }
    return worst;
  });
  run.check("iwasawa.m_stability", "iwasawa.m_stability", 1e-10, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
      for (Sign s : {Sign::plus, Sign::minus}) {
        const GroupElement g = random_group_element(rng, n), m = random_m_element(rng, n);
        const IwasawaFactors f = iwasawa_decompose(g, s), fm = iwasawa_decompose(g * m, s);
        worst = std::max({worst, std::abs(fm.t - f.t), max_abs(fm.k.matrix() - (f.k * m).matrix())});
      }
    return worst;
  });
  run.check("iwasawa.a_equivariance", "iwasawa.a_equivariance", 1e-10, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
      for (Sign s : {Sign::plus, Sign::minus}) {
        const GroupElement g = random_group_element(rng, n);
        const double t = uniform(rng, -2, 2);
        worst = std::max(worst, std::abs(iwasawa_log_scale(g * group_exp(embed_a(n, t)), s) -
                                         iwasawa_log_scale(g, s) - t));
      }
    return worst;
  });
  run.check("iwasawa.cocycle", "iwasawa.cocycle", 1e-9, [&] {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i)
      for (Sign s : {Sign::plus, Sign::minus})
        worst = std::max(worst, iwasawa_cocycle_defect(random_group_element(rng, n), random_group_element(rng, n), s));
    return worst;
  });
}

inline void boundary_suite(SuiteRun& run) {
  const int n = run.n();
  Rng& rng = run.rng();
  const double h = run.config().fd_step;
  const SphereQuadrature quad = sphere_quadrature(n, run.config().quad_degree);
  run.check("boundary.unit_vector", "boundary.unit_vector", 1e-12, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const BoundaryPoint b = boundary_action(random_group_element(rng, n), BoundaryPoint(random_unit_vector(rng, n + 1)));
      worst = std::max(worst, std::abs(b.coords().norm() - 1.0));
    }
    return worst;
  });
  run.check("boundary.tangent", "boundary.tangent", 1e-12, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const BoundaryPoint b(random_unit_vector(rng, n + 1));
      const Vector w = random_tangent_frame(rng, b.coords(), 1).front();
      const TangentVector out = boundary_differential(random_group_element(rng, n), TangentVector(b, w));
      worst = std::max(worst, std::abs(out.w.dot(out.base.coords())) / std::max(1.0, out.w.norm()));
    }
    return worst;
  });
  run.check("boundary.quadrature_weights", "boundary.quadrature_weights", 1e-12, [&] {
    return std::abs(quad.integrate([](const BoundaryPoint&) { return 1.0; }) - 1.0);
  });
  run.check("boundary.quadrature_exactness", "boundary.quadrature_exactness", 1e-10, [&] {
    const int degree = std::min(quad.degree, 8);
    std::vector<int> e(static_cast<std::size_t>(n + 1), 0);
    double worst = 0.0;
    std::function<void(int, int)> visit = [&](int slot, int left) {
      if (slot == n) {
        e[static_cast<std::size_t>(n)] = left;
        const double exact = sphere_moment(e);
        const double got = quad.integrate([&](const BoundaryPoint& b) {
          double v = 1.0;
          for (int i = 0; i <= n; ++i) v *= std::pow(b(i), e[static_cast<std::size_t>(i)]);
          return v;
        });
        worst = std::max(worst, std::abs(got - exact));
        return;
      }
      for (int k = 0; k <= left; ++k) {
        e[static_cast<std::size_t>(slot)] = k;
        visit(slot + 1, left - k);
      }
    };
    for (int total = 0; total <= degree; ++total) visit(0, total);
    return worst;
  });
  run.check("boundary.lift_independence", "boundary.lift_independence", 1e-10, [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const GroupElement g = random_group_element(rng, n);
      const BoundaryPoint b(random_unit_vector(rng, n + 1));
      const GroupElement k = lift_boundary_point(b);
      const Vector w = random_tangent_frame(rng, b.coords(), 1).front();
      const BoundaryPoint ref = boundary_action(g, k);
      const double cf = conformal_factor(g, k);
      const Vector dw = boundary_differential(g, k, w).w;
      for (int j = 0; j < 10; ++j) {
        const GroupElement km = k * random_m_element(rng, n);
        worst = std::max({worst, (boundary_action(g, km).coords() - ref.coords()).norm(),
                          std::abs(conformal_factor(g, km) - cf) / cf,
                          (boundary_differential(g, km, w).w - dw).norm() / dw.norm()});
      }
    }
    return worst;
  });
  run.check("boundary.conformality", "boundary.conformality", 1e-10, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const GroupElement g = random_group_element(rng, n);
      const BoundaryPoint b(random_unit_vector(rng, n + 1));
      const Vector w = random_gaussian(rng, 1)(0) * random_tangent_frame(rng, b.coords(), 1).front();
      const double expect = conformal_factor(g, b) * w.norm();
      worst = std::max(worst, std::abs(boundary_differential(g, TangentVector(b, w)).w.norm() - expect) / expect);
    }
    return worst;
  });
  run.check("boundary.differential", "boundary.differential", 1e-6, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const GroupElement g = random_group_element(rng, n);
      const GroupElement k = lift_boundary_point(BoundaryPoint(random_unit_vector(rng, n + 1)));
      const Vector y = random_gaussian(rng, n);
      const AlgebraElement yk = embed_mperp(y);
      const Vector fwd = boundary_action(g, k * group_exp(h * yk)).coords();
      const Vector back = boundary_action(g, k * group_exp(-h * yk)).coords();
      const Vector fd = (fwd - back) / (2 * h);
      const Vector exact = boundary_differential(g, k, tangent_from_coordinates(k, y)).w;
      worst = std::max(worst, (fd - exact).norm() / exact.norm());
    }
    return worst;
  });
  run.check("boundary.algebraic_chain", "boundary.algebraic_chain", 1e-9, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const GroupElement g = random_group_element(rng, n);
      const GroupElement k = lift_boundary_point(BoundaryPoint(random_unit_vector(rng, n + 1)));
      const AlgebraElement y = embed_mperp(random_gaussian(rng, n));
      const double scale = std::exp(iwasawa_log_scale(g * k, Sign::minus));
      worst = std::max(worst, max_abs(differential_algebra_image(g, k, y).matrix() - scale * y.matrix()) /
                                  (scale * max_abs(y.matrix())));
    }
    return worst;
  });
  run.check("boundary.change_of_variables", "boundary.change_of_variables", 1e-6, [&] {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const GroupElement g = random_group_element(rng, n, 0.3);
      const Vector c = random_gaussian(rng, n + 1);
      const auto f = [&](const Vector& b) { return std::exp(c.dot(b)); };
      const double direct = quad.integrate([&](const BoundaryPoint& b) { return f(b.coords()); });
      const double moved = quad.integrate([&](const BoundaryPoint& b) {
        return f(boundary_action(g, b).coords()) * std::pow(conformal_factor(g, b), n);
      });
      worst = std::max(worst, std::abs(moved - direct) / direct);
    }
    return worst;
  });
  run.check("boundary.kernel_cocycle", "boundary.kernel_cocycle", 1e-9, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const GroupElement x = random_group_element(rng, n), y = random_group_element(rng, n),
                         z = random_group_element(rng, n);
      const BoundaryPoint b(random_unit_vector(rng, n + 1));
      const double xz = visual_kernel(x, b, z);
      worst = std::max(worst, std::abs(visual_kernel(x, b, y) * visual_kernel(y, b, z) - xz) / xz);
    }
    return worst;
  });
}

inline void principal_series_suite(SuiteRun& run) {
  const int n = run.n();
  Rng& rng = run.rng();
  const std::uint64_t seed = run.config().seed;
  run.check("principal_series.alternating", "principal_series.alternating", 1e-12, [&] {
    double worst = 0.0;
    for (int p = 2; p <= n; ++p) {
      const auto points = sample_points(n, p, 20, rng);
      worst = std::max(worst, antisymmetry_defect(random_section(rng, n, p), points));
    }
    return worst;
  });
  run.check("principal_series.multilinear", "principal_series.multilinear", 1e-12, [&] {
    double worst = 0.0;
    for (int p = 1; p <= n; ++p) {
      const auto points = sample_points(n, p, 20, rng);
      worst = std::max(worst, multilinearity_defect(random_section(rng, n, p), points, rng));
    }
    return worst;
  });
  run.check("principal_series.homomorphism", "principal_series.homomorphism", 1e-8, [&] {
    double worst = 0.0;
    for (int p = 0; p <= std::min(n, 1); ++p) {
      const auto points = sample_points(n, p, 30, rng);
      for (int i = 0; i < 5; ++i) {
        const BoundarySection s = random_section(rng, n, p);
        const Complex lambda(uniform(rng, -1, 1), uniform(rng, -1, 1));
        const GroupElement g1 = random_group_element(rng, n), g2 = random_group_element(rng, n);
        worst = std::max(worst, sup_difference(rep_action(lambda, p, g1 * g2, s),
                                               rep_action(lambda, p, g1, rep_action(lambda, p, g2, s)), points));
      }
    }
    return worst;
  });
  run.check("principal_series.unitarity", "principal_series.unitarity", 1e-6, [&] {
    const SphereQuadrature quad = sphere_quadrature(n, n == 3 ? std::min(run.config().quad_degree, 16)
                                                                : std::max(run.config().quad_degree, 32));
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const BoundarySection f = random_section(rng, n, 0);
      const BoundarySection moved = rep_action(Complex(0.0, uniform(rng, -2, 2)), 0, random_group_element(rng, n, 0.4), f);
      const double before = quad.integrate([&](const BoundaryPoint& b) { return std::norm(f(b)); });
      const double after = quad.integrate([&](const BoundaryPoint& b) { return std::norm(moved(b)); });
      worst = std::max(worst, std::abs(after - before) / before);
    }
    return worst;
  });
  run.check("principal_series.compat", "principal_series.compat", 1e-8, [&] {
    double worst = 0.0;
    for (int p = 1; p <= n; ++p)
      for (int i = 0; i < 10; ++i)
        worst = std::max(worst, compat_defect(random_group_element(rng, n), p, random_section(rng, n, p), 10,
                                              seed + static_cast<std::uint64_t>(i)));
    return worst;
  });
  run.check("principal_series.compat_negative_control", "principal_series.compat", 1e-2, [&] {
    double weakest = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= n; ++p)
      for (int i = 0; i < 10; ++i) {
        const GroupElement g = random_group_element(rng, n);
        const BoundarySection s = random_section(rng, n, p);
        const auto points = sample_points(n, p, 10, rng);
        weakest = std::min(weakest, action_defect(Complex(p - 0.5 * n + 1.0), g, s, points));
      }
    return weakest;
  }, ">");
  run.check("principal_series.twist_fusion", "principal_series.twist_fusion", 1e-10, [&] {
    double worst = 0.0;
    for (int p = 0; p <= n; ++p)
      for (int i = 0; i < 3; ++i) {
        const Complex l1(uniform(rng, -1, 1), uniform(rng, -1, 1)), l2(uniform(rng, -1, 1), uniform(rng, -1, 1));
        worst = std::max(worst, twist_product_defect(l1, l2, p, random_group_element(rng, n), random_section(rng, n, 0),
                                                     random_section(rng, n, p), 10, seed));
      }
    return worst;
  });
}

inline void flow_calculus_suite(SuiteRun& run) {
  const int n = run.n();
  Rng& rng = run.rng();
  const double h = run.config().fd_step;
  run.check("flow_calculus.flow_point_m_invariance", "flow_calculus.flow_point_m_invariance", 1e-10, [&] {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const GroupElement g = random_group_element(rng, n), m = random_m_element(rng, n);
      const double t = uniform(rng, -3, 3);
      const FlowObservables a = observe(geodesic_flow(t, FlowPoint{g}));
      const FlowObservables b = observe(geodesic_flow(t, FlowPoint{g * m}));
      worst = std::max({worst, (a.position - b.position).norm() / a.position.norm(),
                        (a.velocity - b.velocity).norm() / a.velocity.norm()});
    }
    return worst;
  });
  run.check("flow_calculus.model_tangent", "flow_calculus.model_tangent", 0.0, [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const BruhatComponents v{Matrix::Zero(n, n), uniform(rng, -1, 1), random_gaussian(rng, n), random_gaussian(rng, n)};
      worst = std::max(worst, max_abs(flow_derivative(uniform(rng, -3, 3), ModelTangent(random_group_element(rng, n), v)).v.m_part));
    }
    if (n >= 2) {
      BruhatComponents bad{random_skew(rng, n), 0.0, Vector::Zero(n), Vector::Zero(n)};
      try {
        ModelTangent(GroupElement::identity(n), bad);
        worst = std::max(worst, 1.0);  // accepted a nonzero m-part
      } catch (const InvariantError&) {
      }
    }
    return worst;
  });
  run.check("flow_calculus.section_m_equivariance", "flow_calculus.section_m_equivariance", 1e-10, [&] {
    double worst = 0.0;
    for (auto space : {SectionSpace::forms_plus, SectionSpace::forms_minus, SectionSpace::plus_minus,
                       SectionSpace::minus_minus}) {
      const bool forms = space == SectionSpace::forms_plus || space == SectionSpace::forms_minus;
      const int p = forms ? std::min(n, 2) : 2;
      const EquivariantSection u = matrix_coefficient_section(rng, n, p, space);
      const EquivariantSection w = a_eigen_section(rng, n, p, space, 0.5, Sign::plus);
      for (int i = 0; i < 10; ++i) {
        const GroupElement g = random_group_element(rng, n), m = random_m_element(rng, n);
        worst = std::max({worst, m_equivariance_defect(u, g, m) / std::max(1.0, u(g).max_abs()),
                          m_equivariance_defect(w, g, m) / std::max(1.0, w(g).max_abs())});
      }
    }
    return worst;
  });
  run.check("flow_calculus.anosov_rates", "flow_calculus.anosov_rates", 1e-12, [&] {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double t = uniform(rng, -3, 3);
      const Vector vp = random_gaussian(rng, n), vm = random_gaussian(rng, n);
      const double a = uniform(rng, -1, 1);
      const ModelTangent out = flow_derivative(t, ModelTangent(random_group_element(rng, n), {Matrix::Zero(n, n), a, vp, vm}));
      const double scale = std::exp(std::abs(t)) * std::max(vp.norm(), vm.norm());
      worst = std::max({worst, (out.v.nplus - std::exp(-t) * vp).norm() / scale,
                        (out.v.nminus - std::exp(t) * vm).norm() / scale, std::abs(out.v.a_part - a)});
    }
    return worst;
  });
  run.check("flow_calculus.lie_shift", "flow_calculus.lie_shift", 1e-6, [&] {
    double worst = 0.0;
    for (int p = 0; p <= std::min(n, 2); ++p)
      for (auto space : {SectionSpace::forms_plus, SectionSpace::forms_minus})
        for (int i = 0; i < 5; ++i) {
          const double sigma = space == SectionSpace::forms_plus ? 1.0 : -1.0;
          const EquivariantSection u = matrix_coefficient_section(rng, n, p, space);
          const GroupElement g = random_group_element(rng, n);
          const Tensor d = lie_derivative_X(u, g, h) - covariant_derivative(u, h0_direction(n), g, h);
          worst = std::max(worst, (d + Complex(sigma * p) * u(g)).max_abs());
        }
    return worst;
  });
  // Sections and points shared by the literal and corrected forms of the
  // commutation relation and the shift exponent.
  std::vector<std::pair<EquivariantSection, GroupElement>> samples;
  for (int i = 0; i < 5; ++i)
    samples.emplace_back(matrix_coefficient_section(rng, n, 1, SectionSpace::forms_minus), random_group_element(rng, n));
  run.check("flow_calculus.commutation.literal", "flow_calculus.commutation", 1e-4, [&] {
    double worst = 0.0;
    for (const auto& [u, g] : samples) worst = std::max(worst, commutation_defect(u, g));
    return worst;
  });
  run.check("flow_calculus.commutation.corrected", "flow_calculus.commutation", 1e-4, [&] {
    double worst = 0.0;
    for (const auto& [u, g] : samples) worst = std::max(worst, commutation_defect_corrected(u, g));
    return worst;
  }, "<=", [] { return std::string("checks nabla_X U_- - U_- nabla_X = -U_-"); });
  std::vector<std::pair<EquivariantSection, GroupElement>> families;
  const double mu = 0.7;
  for (int i = 0; i < 5; ++i)
    families.emplace_back(a_eigen_section(rng, n, 1, SectionSpace::forms_minus, mu, Sign::plus), random_group_element(rng, n));
  run.check("flow_calculus.shift_exponent.literal", "flow_calculus.shift_exponent", 1e-4, [&] {
    double worst = 0.0;
    for (const auto& [u, g] : families) worst = std::max(worst, shift_exponent_defect(u, mu, -1.0, g, 0.5, h));
    return worst;
  });
  run.check("flow_calculus.shift_exponent.corrected", "flow_calculus.shift_exponent", 1e-4, [&] {
    double worst = 0.0;
    for (const auto& [u, g] : families) worst = std::max(worst, shift_exponent_defect(u, mu, +1.0, g, 0.5, h));
    return worst;
  }, "<=", [] { return std::string("checks the exponent -(mu + 1)"); });
  run.check("flow_calculus.tensor_split", "flow_calculus.tensor_split", 1e-14, [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      Eigen::MatrixXcd t(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t(a, b) = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
      const TensorSplit s = tensor_split(t);
      worst = std::max({worst, (s.sym0 + s.antisym + s.trace_part - t).cwiseAbs().maxCoeff(),
                        std::abs(frobenius(s.sym0, s.antisym)), std::abs(frobenius(s.sym0, s.trace_part)),
                        std::abs(frobenius(s.antisym, s.trace_part)), std::abs(s.sym0.trace())});
    }
    return worst;
  });
}

inline void poisson_suite(SuiteRun& run) {
  const int n = run.n();
  Rng& rng = run.rng();
  const int degree = run.config().quad_degree;
  const double r = run.config().radius;
  const std::vector<HyperbolicPoint> grid = grid_from_spec(n, run.config().grid, rng);
  const SphereQuadrature quad = sphere_quadrature(n, degree);
  const BoundarySection y1 = harmonic_function(n, 1, 0);
  run.check("poisson.hyperboloid", "poisson.hyperboloid", 1e-10, [&] {
    double worst = 0.0;
    const SphereQuadrature dirs = sphere_mean_directions(n);
    for (const HyperbolicPoint& x : grid) {
      const GroupElement g = lift_hyperbolic_point(x);
      for (const BoundaryPoint& d : dirs.nodes) {
        Vector y(n + 2);
        y.head(n + 1) = std::sinh(r) * d.coords();
        y(n + 1) = std::cosh(r);
        const Vector z = g.matrix() * y;
        const double form = z.head(n + 1).squaredNorm() - z(n + 1) * z(n + 1);
        worst = std::max(worst, std::abs(form + 1.0) / (z(n + 1) * z(n + 1)));
      }
    }
    return worst;
  });
  KernelCalibration calibration;
  run.check("poisson.kernel_sign", "poisson.kernel_sign", 5e-3, [&] {
    calibration = calibrate_kernel_sign(0.7, y1, grid, quad, r, 5e-3);
    if (calibration.chosen != kKernelSign) return std::numeric_limits<double>::infinity();
    return kKernelSign > 0 ? calibration.residual_plus : calibration.residual_minus;
  }, "<=", [&] {
    std::ostringstream note;
    note << "lambda=0.7, f=Y_1: residual eps=+1 " << calibration.residual_plus << ", eps=-1 "
         << calibration.residual_minus << "; kernel sign " << kKernelSign;
    return note.str();
  });
  run.check("poisson.lift_independence", "poisson.lift_independence", 1e-9, [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(grid.size(), 10); ++i) {
      const GroupElement g1 = lift_hyperbolic_point(grid[i]);
      const GroupElement g2 = g1 * random_rotation(rng, n);
      worst = std::max(worst, std::abs(poisson_transform(0.7, y1, g1, quad) - poisson_transform(0.7, y1, g2, quad)));
    }
    return worst;
  });
  run.check("poisson.eigen_law", "poisson.eigen_law", 5e-3, [&] {
    double worst = eigen_residual(0.7, y1, grid, quad, r);
    worst = std::max(worst, eigen_residual(Complex(1.0, 1.0), y1, grid, quad, r));
    worst = std::max(worst, eigen_residual(static_cast<double>(n), constant_section(n), grid, quad, r));
    return worst;
  });
  run.check("poisson.equivariance", "poisson.equivariance", 1e-6, [&] {
    std::vector<HyperbolicPoint> near;
    for (const HyperbolicPoint& x : grid)
      if (radius(x) <= 1.5 && near.size() < 20) near.push_back(x);
    if (near.empty()) near.push_back(HyperbolicPoint::base(n));
    double worst = 0.0;
    for (Complex lambda : {Complex(0.7), Complex(1.0, 1.0)})
      worst = std::max(worst, equivariance_defect(lambda, y1, random_group_element(rng, n, 0.3), near, quad));
    return worst;
  });
  run.check("poisson.quadrature_convergence", "poisson.quadrature_convergence", 1e-6, [&] {
    return std::max(quadrature_convergence(0.7, y1, grid, degree), quadrature_convergence(Complex(1, 1), y1, grid, degree));
  });
}

}  // namespace detail

inline const std::map<std::string, std::function<void(SuiteRun&)>>& suite_registry() {
  static const std::map<std::string, std::function<void(SuiteRun&)>> registry{
      {"lie_core", detail::lie_core_suite},
      {"iwasawa", detail::iwasawa_suite},
      {"boundary", detail::boundary_suite},
      {"principal_series", detail::principal_series_suite},
      {"flow_calculus", detail::flow_calculus_suite},
      {"poisson", detail::poisson_suite},
  };
  return registry;
}

/// Runs the configured suites in order. Each suite draws from its own stream
/// make_stream(seed, suite name), so the selection never changes results.
inline VerifyReport run_suite(const VerifyConfig& config) {
  config.validate();
  VerifyReport report;
  report.config = config;
  for (const std::string& name : config.suites) {
    SuiteRun run(config, name, report.checks);
    suite_registry().at(name)(run);
  }
  return report;
}

/// Writes the report to config.output_path (stdout when empty is left to the caller).
inline void write_report(const VerifyReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write report to '" + path + "'");
  out << to_json(report).dump(2) << '\n';
  if (!out) throw ConfigError("failed writing report to '" + path + "'");
}

/// Invariant ids that no check in the report covers.
inline std::vector<std::string> uncovered_invariants(const VerifyReport& report) {
  std::set<std::string> covered;
  for (const CheckRecord& c : report.checks) covered.insert(c.invariant);
  std::vector<std::string> missing;
  for (const Invariant& inv : invariant_catalog())
    if (!covered.count(inv.id)) missing.push_back(inv.id);
  return missing;
}

}  // namespace hyperlie
