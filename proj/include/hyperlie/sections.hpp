#pragma once

// Closed-form test sections on S^n, selectable by name:
//   constant
//   coordinate-form:i[,j...]   p = 0: b_i;  p >= 1: det[w_b(i_a)]
//   spherical-harmonic:l,m     real harmonics (n = 3: zonal only, m = 0)
//   bump:axis,width            exp((b_axis - 1) / width^2), a smooth cap
// Forms of degree p >= 1 built from a scalar family are phi(b) * det[w_b(i_a)]
// with the indices i, i+1, ... (mod n+1) unless given explicitly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hyperlie/principal_series.hpp"
#include "hyperlie/random.hpp"

namespace hyperlie {

/// phi(b) * det[c_a . w_b] for scalar phi and fixed covectors c_a in R^{n+1}.
inline BoundarySection scalar_times_minor(int n, std::function<Complex(const Vector&)> phi,
                                          Matrix covectors) {
  const int p = static_cast<int>(covectors.rows());
  return {n, p, [phi = std::move(phi), c = std::move(covectors)](const BoundaryPoint& b,
                                                                 std::span<const Vector> w) {
            const int p = static_cast<int>(w.size());
            Matrix minor(p, p);
            for (int a = 0; a < p; ++a)
              for (int j = 0; j < p; ++j) minor(a, j) = c.row(a).dot(w[j]);
            return phi(b.coords()) * (p == 0 ? 1.0 : minor.determinant());
          }};
}

inline Matrix coordinate_covectors(int n, std::span<const int> indices) {
  Matrix c = Matrix::Zero(static_cast<Eigen::Index>(indices.size()), n + 1);
  for (std::size_t a = 0; a < indices.size(); ++a) {
    if (indices[a] < 0 || indices[a] > n)
      throw ShapeError("coordinate index " + std::to_string(indices[a]) + " out of range");
    c(static_cast<Eigen::Index>(a), indices[a]) = 1.0;
  }
  return c;
}

inline BoundarySection constant_section(int n, Complex value = 1.0) {
  require_dimension(n);
  return {n, 0, [value](const BoundaryPoint&, std::span<const Vector>) { return value; }};
}

inline BoundarySection coordinate_form(int n, int p, std::vector<int> indices) {
  require_dimension(n);
  if (p < 0 || p > n) throw ShapeError("form degree must lie in [0, n]");
  if (indices.empty()) throw ShapeError("coordinate-form needs at least one index");
  if (p == 0) {
    const int i = indices.front();
    if (i < 0 || i > n) throw ShapeError("coordinate index out of range");
    return {n, 0, [i](const BoundaryPoint& b, std::span<const Vector>) { return Complex(b(i)); }};
  }
  while (static_cast<int>(indices.size()) < p)
    indices.push_back((indices.back() + 1) % (n + 1));
  indices.resize(p);
  return scalar_times_minor(n, [](const Vector&) { return Complex(1.0); },
                            coordinate_covectors(n, indices));
}

/// Real spherical harmonic as a scalar function of b.
inline std::function<Complex(const Vector&)> spherical_harmonic(int n, int l, int m) {
  require_dimension(n);
  if (l < 0 || std::abs(m) > l) throw ShapeError("spherical harmonic needs 0 <= |m| <= l");
  if (n == 1)
    return [l, m](const Vector& b) {
      const double theta = std::atan2(b(1), b(0));
      return Complex(m >= 0 ? std::cos(l * theta) : std::sin(l * theta));
    };
  if (n == 2)
    return [l, m](const Vector& b) {
      const double theta = std::acos(std::clamp(b(2), -1.0, 1.0));
      const double phi = std::atan2(b(1), b(0));
      const unsigned ul = static_cast<unsigned>(l), um = static_cast<unsigned>(std::abs(m));
      const double base = std::sph_legendre(ul, um, theta);
      if (m == 0) return Complex(base);
      return Complex(std::numbers::sqrt2 * base * (m > 0 ? std::cos(m * phi) : std::sin(-m * phi)));
    };
  if (m != 0) throw ShapeError("only zonal harmonics (m = 0) are provided on S^3");
  // Gegenbauer C_l^{(1)} = Chebyshev U_l in the pole coordinate
  return [l](const Vector& b) {
    const double z = b(3);
    double u0 = 1.0, u1 = 2.0 * z;
    if (l == 0) return Complex(u0);
    for (int k = 2; k <= l; ++k) {
      const double u2 = 2.0 * z * u1 - u0;
      u0 = u1;
      u1 = u2;
    }
    return Complex(u1);
  };
}

inline std::function<Complex(const Vector&)> bump(int n, int axis, double width) {
  require_dimension(n);
  if (axis < 0 || axis > n) throw ShapeError("bump axis out of range");
  if (!(width > 0.0)) throw ShapeError("bump width must be positive");
  return [axis, width](const Vector& b) { return Complex(std::exp((b(axis) - 1.0) / (width * width))); };
}

namespace detail {
inline std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw ShapeError("cannot parse section parameter '" + item + "'");
    out.push_back(value);
  }
  return out;
}

inline std::vector<int> default_indices(int n, int first, int p) {
  std::vector<int> idx;
  for (int a = 0; a < std::max(p, 1); ++a) idx.push_back((first + a) % (n + 1));
  return idx;
}
}  // namespace detail

/// Builds a section of degree p from a family name; throws ShapeError on
/// unknown names or bad parameters.
inline BoundarySection section_by_name(int n, int p, const std::string& spec) {
  require_dimension(n);
  if (p < 0 || p > n) throw ShapeError("form degree must lie in [0, n]");
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : detail::parse_numbers(spec.substr(colon + 1));
  auto with_form = [&](std::function<Complex(const Vector&)> phi) {
    if (p == 0) return scalar_times_minor(n, std::move(phi), Matrix(0, n + 1));
    return scalar_times_minor(n, std::move(phi), coordinate_covectors(n, detail::default_indices(n, 0, p)));
  };

  if (family == "constant") {
    if (!args.empty()) throw ShapeError("constant takes no parameters");
    return with_form([](const Vector&) { return Complex(1.0); });
  }
  if (family == "coordinate-form") {
    if (args.empty()) throw ShapeError("coordinate-form needs an index");
    std::vector<int> idx;
    for (double a : args) idx.push_back(static_cast<int>(a));
    return coordinate_form(n, p, idx);
  }
  if (family == "spherical-harmonic") {
    if (args.size() != 2) throw ShapeError("spherical-harmonic takes l,m");
    return with_form(spherical_harmonic(n, static_cast<int>(args[0]), static_cast<int>(args[1])));
  }
  if (family == "bump") {
    if (args.size() != 2) throw ShapeError("bump takes axis,width");
    return with_form(bump(n, static_cast<int>(args[0]), args[1]));
  }
  throw ShapeError("unknown section family '" + family + "'");
}

/// Seeded smooth p-form: exp(i a.b) (1 + c.b / 2) times det[C w] for random
/// a, c and covector rows C.
inline BoundarySection random_section(Rng& rng, int n, int p) {
  require_dimension(n);
  const Vector a = random_gaussian(rng, n + 1);
  const Vector c = random_gaussian(rng, n + 1, 0.5);
  Matrix cov(p, n + 1);
  for (int i = 0; i < p; ++i) cov.row(i) = random_gaussian(rng, n + 1).transpose();
  return scalar_times_minor(
      n,
      [a, c](const Vector& b) {
        return std::exp(Complex(0.0, a.dot(b))) * (1.0 + 0.5 * c.dot(b));
      },
      cov);
}

}  // namespace hyperlie
