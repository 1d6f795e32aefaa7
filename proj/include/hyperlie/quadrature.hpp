#pragma once

// Quadrature on S^n with the normalized (probability) measure.
//   n = 1: trapezoid on the circle, 2d+2 nodes.
//   n = 2: Gauss-Legendre in the pole coordinate (Archimedes: uniform on
//          [-1,1]) times trapezoid in the azimuth.
//   n = 3: Hopf coordinates b = (sqrt(1-u) e^{i xi1}, sqrt(u) e^{i xi2}),
//          where the measure is du dxi1 dxi2 up to a constant; Gauss-Legendre
//          in u times trapezoid in both angles.
// Every rule is exact for coordinate polynomials of degree 2d+1.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "hyperlie/boundary.hpp"
#include "hyperlie/random.hpp"
#include "hyperlie/summation.hpp"

namespace hyperlie {

struct SphereQuadrature {
  int n = 0;
  int degree = 0;
  std::vector<BoundaryPoint> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <typename F>
  auto integrate(F&& f) const {
    using Value = decltype(f(nodes.front()));
    CompensatedSum<Value> sum;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum.value();
  }
};

namespace detail {
/// P_N(z) and P_N'(z) by the three-term recurrence.
inline std::pair<double, double> legendre(int order, double z) {
  double p0 = 1.0, p1 = z;
  for (int k = 2; k <= order; ++k) {
    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  if (order == 0) return {1.0, 0.0};
  return {p1, order * (z * p1 - p0) / (z * z - 1.0)};
}
}  // namespace detail

/// Nodes and weights of the N-point Gauss-Legendre rule on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int count) {
  if (count < 1) throw ShapeError("Gauss-Legendre rule needs at least one node");
  std::vector<double> x(count), w(count);
  for (int i = 0; i < count / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = detail::legendre(count, z);
      const double step = p / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double dp = detail::legendre(count, z).second;
    x[i] = z;
    x[count - 1 - i] = -z;
    w[i] = w[count - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (count % 2 == 1) {
    // P_N'(0) from the recurrence with z = 0 is well defined
    double p0 = 1.0, p1 = 0.0;
    for (int k = 2; k <= count - 1; ++k) {
      const double p2 = (-(k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = count == 1 ? 1.0 : count * p1;  // P_N'(0) = N P_{N-1}(0)
    x[count / 2] = 0.0;
    w[count / 2] = 2.0 / (dp * dp);
  }
  return {x, w};
}

inline SphereQuadrature sphere_quadrature(int n, int degree) {
  if (n < 1 || n > 3) throw ShapeError("sphere_quadrature supports n in {1,2,3}, got " +
                                       std::to_string(n));
  if (degree < 1) throw ShapeError("quadrature degree must be >= 1");
  SphereQuadrature q;
  q.n = n;
  q.degree = degree;
  const int ring = 2 * degree + 2;
  const double two_pi = 2.0 * std::numbers::pi;

  if (n == 1) {
    for (int j = 0; j < ring; ++j) {
      const double theta = two_pi * j / ring;
      q.nodes.push_back(BoundaryPoint::normalized(Vector{{std::cos(theta), std::sin(theta)}}));
      q.weights.push_back(1.0 / ring);
    }
    return q;
  }

  const auto [gx, gw] = gauss_legendre(degree + 1);
  if (n == 2) {
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double z = gx[i];
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int j = 0; j < ring; ++j) {
        const double phi = two_pi * j / ring;
        q.nodes.push_back(
            BoundaryPoint::normalized(Vector{{rho * std::cos(phi), rho * std::sin(phi), z}}));
        q.weights.push_back(0.5 * gw[i] / ring);
      }
    }
    return q;
  }

  for (std::size_t i = 0; i < gx.size(); ++i) {
    const double u = 0.5 * (gx[i] + 1.0);
    const double c = std::sqrt(1.0 - u), s = std::sqrt(u);
    for (int j1 = 0; j1 < ring; ++j1) {
      const double xi1 = two_pi * j1 / ring;
      for (int j2 = 0; j2 < ring; ++j2) {
        const double xi2 = two_pi * j2 / ring;
        q.nodes.push_back(BoundaryPoint::normalized(Vector{
            {c * std::cos(xi1), c * std::sin(xi1), s * std::cos(xi2), s * std::sin(xi2)}}));
        q.weights.push_back(0.5 * gw[i] / (static_cast<double>(ring) * ring));
      }
    }
  }
  return q;
}

/// Equal-weight seeded random nodes; for smoke tests only.
inline SphereQuadrature monte_carlo_quadrature(int n, int count, Rng& rng) {
  require_dimension(n);
  SphereQuadrature q;
  q.n = n;
  q.degree = 0;
  for (int i = 0; i < count; ++i) {
    q.nodes.emplace_back(random_unit_vector(rng, n + 1));
    q.weights.push_back(1.0 / count);
  }
  return q;
}

}  // namespace hyperlie
