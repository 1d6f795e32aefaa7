#pragma once

// The non-verify CLI commands as library functions returning their output text.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hyperlie/boundary.hpp"
#include "hyperlie/io.hpp"
#include "hyperlie/iwasawa.hpp"
#include "hyperlie/keyvalue.hpp"
#include "hyperlie/poisson.hpp"
#include "hyperlie/random.hpp"
#include "hyperlie/sections.hpp"

namespace hyperlie {

inline Sign parse_sign(const std::string& text) {
  if (text == "+" || text == "plus") return Sign::plus;
  if (text == "-" || text == "minus") return Sign::minus;
  throw ConfigError("sign must be + or -, got '" + text + "'");
}

namespace detail {

inline std::string format_vector(const Vector& v) {
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << v(i);
  return out.str();
}

inline void csv_number(std::ostream& out, double x) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
}

inline int parse_dimension(const KeyValues& kv) {
  const auto it = kv.find("n");
  if (it == kv.end()) throw ConfigError("missing key 'n'");
  const int n = parse_value<int>("n", it->second);
  if (n < 1 || n > 3) throw ConfigError("n must be 1, 2 or 3");
  return n;
}

inline std::string value_or(const KeyValues& kv, const std::string& key, const std::string& fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

inline void require_known(const KeyValues& kv, const std::vector<std::string>& known) {
  for (const auto& [key, value] : kv)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key '" + key + "'");
}

inline Complex parse_complex(const std::string& key, const std::string& text) {
  const std::vector<std::string> parts = split_list(text);
  if (parts.empty() || parts.size() > 2) throw ConfigError("'" + key + "' must be 're' or 're,im'");
  const double re = parse_value<double>(key, parts[0]);
  const double im = parts.size() == 2 ? parse_value<double>(key, parts[1]) : 0.0;
  return {re, im};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// decompose

/// Text report of the Iwasawa factors of a group matrix.
inline std::string cmd_decompose(const Matrix& mat, Sign sign) {
  const GroupElement g = check_group_membership(mat);
  const IwasawaFactors f = iwasawa_decompose(g, sign);
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "sign: " << to_string(sign) << '\n';
  out << "k:\n";
  write_matrix(out, f.k.matrix());
  out << "t: " << f.t << '\n';
  out << "v: " << detail::format_vector(f.v) << '\n';
  out << "residual: " << f.residual << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// poisson-eval
//
// Keys: n, lambda (re or re,im), f (section family, e.g. spherical-harmonic:1,0),
// grid (base | random:COUNT,RADIUS | ray:COUNT,RADIUS), degree, r, seed.

struct PoissonEvalConfig {
  int n = 2;
  Complex lambda = 0.7;
  std::string f = "constant";
  std::string grid = "base";
  int degree = 24;
  double r = 0.02;
  std::uint64_t seed = 42;
  std::string output_path;
};

inline PoissonEvalConfig parse_poisson_config(std::istream& in) {
  const KeyValues kv = read_key_values(in);
  detail::require_known(kv, {"n", "lambda", "f", "grid", "degree", "r", "seed", "output"});
  PoissonEvalConfig c;
  c.n = detail::parse_dimension(kv);
  if (kv.count("lambda")) c.lambda = detail::parse_complex("lambda", kv.at("lambda"));
  c.f = detail::value_or(kv, "f", c.f);
  c.grid = detail::value_or(kv, "grid", c.grid);
  if (kv.count("degree")) c.degree = detail::parse_value<int>("degree", kv.at("degree"));
  if (kv.count("r")) c.r = detail::parse_value<double>("r", kv.at("r"));
  if (kv.count("seed")) c.seed = detail::parse_unsigned("seed", kv.at("seed"));
  c.output_path = detail::value_or(kv, "output", "");
  if (c.degree < 4) throw ConfigError("degree must be >= 4");
  if (!(c.r > 0.0 && c.r <= 0.1)) throw ConfigError("r must lie in (0, 0.1]");
  return c;
}

/// CSV: x_0..x_{n+1}, Re P, Im P, local eigen residual.
inline std::string cmd_poisson_eval(const PoissonEvalConfig& c) {
  Rng rng = make_stream(c.seed, "poisson-eval");
  const BoundarySection f = section_by_name(c.n, 0, c.f);
  const std::vector<HyperbolicPoint> grid = grid_from_spec(c.n, c.grid, rng);
  const PoissonTransform p(c.lambda, f, sphere_quadrature(c.n, c.degree));
  const std::function<Complex(const HyperbolicPoint&)> u = [&](const HyperbolicPoint& x) { return p(x); };
  const Complex eigenvalue = c.lambda * (static_cast<double>(c.n) - c.lambda);
  const SphereQuadrature directions = sphere_mean_directions(c.n);

  std::ostringstream out;
  for (int i = 0; i < c.n + 2; ++i) out << 'x' << i << ',';
  out << "re,im,residual\n";
  for (const HyperbolicPoint& x : grid) {
    const Complex value = u(x);
    const Complex lap = mean_value_laplacian(u, x, c.r, directions);
    const double residual = std::abs(lap - eigenvalue * value) / std::max(std::abs(value), 1e-8);
    for (Eigen::Index i = 0; i < x.coords().size(); ++i) {
      detail::csv_number(out, x.coords()(i));
      out << ',';
    }
    detail::csv_number(out, value.real());
    out << ',';
    detail::csv_number(out, value.imag());
    out << ',';
    detail::csv_number(out, residual);
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// boundary-orbit
//
// Keys: n, element, b (comma list, normalized), steps, seed.
// element: identity | a:T | nplus:V1,.. | nminus:V1,.. | rotation (seeded
// random K element) | random (seeded random G element) | matrix:PATH.

struct OrbitConfig {
  int n = 2;
  std::string element = "identity";
  Vector b;
  int steps = 10;
  std::uint64_t seed = 42;
  std::string output_path;
};

inline OrbitConfig parse_orbit_config(std::istream& in) {
  const KeyValues kv = read_key_values(in);
  detail::require_known(kv, {"n", "element", "b", "steps", "seed", "output"});
  OrbitConfig c;
  c.n = detail::parse_dimension(kv);
  c.element = detail::value_or(kv, "element", c.element);
  if (kv.count("steps")) c.steps = detail::parse_value<int>("steps", kv.at("steps"));
  if (c.steps < 0) throw ConfigError("steps must be >= 0");
  if (kv.count("seed")) c.seed = detail::parse_unsigned("seed", kv.at("seed"));
  c.output_path = detail::value_or(kv, "output", "");
  if (!kv.count("b")) throw ConfigError("missing key 'b'");
  const std::vector<std::string> parts = detail::split_list(kv.at("b"));
  if (static_cast<int>(parts.size()) != c.n + 1)
    throw ConfigError("b needs n+1 = " + std::to_string(c.n + 1) + " coordinates");
  c.b.resize(c.n + 1);
  for (int i = 0; i <= c.n; ++i) c.b(i) = detail::parse_value<double>("b", parts[static_cast<std::size_t>(i)]);
  if (!(c.b.norm() > 0.0)) throw ConfigError("b must be nonzero");
  return c;
}

inline GroupElement element_from_spec(int n, const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  Rng rng = make_stream(seed, "element");
  auto numbers = [&] {
    std::vector<double> v;
    for (const std::string& s : detail::split_list(rest)) v.push_back(detail::parse_value<double>("element", s));
    return v;
  };
  if (kind == "identity" && rest.empty()) return GroupElement::identity(n);
  if (kind == "rotation" && rest.empty()) return random_rotation(rng, n);
  if (kind == "random" && rest.empty()) return random_group_element(rng, n);
  if (kind == "a") {
    const auto t = numbers();
    if (t.size() != 1) throw ConfigError("a:T takes one number");
    return exp_a(n, t[0]);
  }
  if (kind == "nplus" || kind == "nminus") {
    const auto v = numbers();
    if (static_cast<int>(v.size()) != n) throw ConfigError(kind + " needs n coordinates");
    return exp_root_space(kind == "nplus" ? Sign::plus : Sign::minus, Eigen::Map<const Vector>(v.data(), n));
  }
  if (kind == "matrix") {
    const GroupElement g = check_group_membership(load_matrix(rest));
    if (g.n() != n) throw ConfigError("matrix dimension does not match n");
    return g;
  }
  throw ConfigError("unknown element spec '" + spec + "'");
}

/// CSV: step, b_0..b_n, factor (of g at the current point), cumulative factor
/// (of g^step at the starting point).
inline std::string cmd_orbit(const OrbitConfig& c) {
  const GroupElement g = element_from_spec(c.n, c.element, c.seed);
  BoundaryPoint b = BoundaryPoint::normalized(c.b);
  double cumulative = 1.0;
  std::ostringstream out;
  out << "step,";
  for (int i = 0; i <= c.n; ++i) out << 'b' << i << ',';
  out << "factor,cumulative\n";
  for (int step = 0; step <= c.steps; ++step) {
    const double factor = conformal_factor(g, b);
    out << step << ',';
    for (int i = 0; i <= c.n; ++i) {
      detail::csv_number(out, b(i));
      out << ',';
    }
    detail::csv_number(out, factor);
    out << ',';
    detail::csv_number(out, cumulative);
    out << '\n';
    cumulative *= factor;
    b = boundary_action(g, b);
  }
  return out.str();
}

}  // namespace hyperlie
