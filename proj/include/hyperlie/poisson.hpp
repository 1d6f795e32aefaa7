#pragma once

// Scalar Poisson transform S^n -> H^{n+1} by quadrature, and a mesh-free
// Laplacian built from geodesic-sphere means.
//
// H^{n+1} is the upper sheet x^T J x = -1, x_time >= 1, with gK -> g e_time.
// With the decomposition of sign - and the null ray (b, -1) of a boundary
// point, e^{-H^-(g^{-1} k)} = x_time + x_space . b for x = g e_time, which
// gives a g-free evaluation path for the kernel.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hyperlie/boundary.hpp"
#include "hyperlie/principal_series.hpp"
#include "hyperlie/quadrature.hpp"
#include "hyperlie/random.hpp"
#include "hyperlie/sections.hpp"
#include "hyperlie/summation.hpp"

namespace hyperlie {

class HyperbolicPoint {
 public:
  explicit HyperbolicPoint(Vector x, const Tolerances& tol = default_tolerances()) : x_(std::move(x)) {
    if (x_.size() < 3) throw ShapeError("hyperbolic point needs n+2 >= 3 coordinates");
    const auto t = x_.size() - 1;
    const double form = x_.head(t).squaredNorm() - x_(t) * x_(t);
    const double defect = std::abs(form + 1.0);
    if (!(defect <= tol.hyperboloid * std::max(1.0, x_(t) * x_(t))))
      throw InvariantError("point is not on the hyperboloid: |x^T J x + 1| = " + std::to_string(defect));
    if (!(x_(t) >= 1.0 - tol.hyperboloid))
      throw InvariantError("point is on the lower sheet: x_time = " + std::to_string(x_(t)));
  }

  static HyperbolicPoint base(int n) {
    require_dimension(n);
    return HyperbolicPoint(Vector::Unit(n + 2, n + 1));
  }

  /// exp_o(r u) for a unit direction u in R^{n+1}.
  static HyperbolicPoint at(const Vector& direction, double r) {
    const double norm = direction.norm();
    if (!(norm > 0.0)) throw InvariantError("zero direction");
    Vector x(direction.size() + 1);
    x.head(direction.size()) = std::sinh(r) * direction / norm;
    x(direction.size()) = std::cosh(r);
    return HyperbolicPoint(std::move(x));
  }

  int n() const { return static_cast<int>(x_.size()) - 2; }
  const Vector& coords() const { return x_; }
  Vector space() const { return x_.head(x_.size() - 1); }
  double time() const { return x_(x_.size() - 1); }

 private:
  Vector x_;
};

/// Distance to the base point.
inline double radius(const HyperbolicPoint& x) { return std::acosh(std::max(1.0, x.time())); }

inline double hyperbolic_distance(const HyperbolicPoint& x, const HyperbolicPoint& y) {
  if (x.n() != y.n()) throw ShapeError("points in different dimensions");
  const double inner = x.space().dot(y.space()) - x.time() * y.time();
  return std::acosh(std::max(1.0, -inner));
}

inline HyperbolicPoint apply(const GroupElement& g, const HyperbolicPoint& x) {
  if (g.n() != x.n()) throw ShapeError("group element and point in different dimensions");
  return HyperbolicPoint(g.matrix() * x.coords());
}

/// g = R exp(r H0) with R in K turning the pole axis toward x; g e_time = x.
inline GroupElement lift_hyperbolic_point(const HyperbolicPoint& x) {
  const int n = x.n();
  const Vector s = x.space();
  const double r = std::asinh(s.norm());
  if (s.norm() == 0.0) return GroupElement::identity(n);
  return lift_boundary_point(BoundaryPoint::normalized(s)) * exp_a(n, r);
}

// ---------------------------------------------------------------------------
// Kernel.

/// epsilon in exp(epsilon lambda H^-(g^{-1} k)). Fixed by calibrate_kernel_sign:
/// +1 gives eigenvalue lambda (n - lambda), -1 does not.
inline constexpr int kKernelSign = 1;

/// H^-(g^{-1} k) for g e_time = x and k e_pole = b, without a decomposition.
inline double kernel_log_scale(const HyperbolicPoint& x, const BoundaryPoint& b) {
  if (x.n() != b.n()) throw ShapeError("point and boundary point in different dimensions");
  return -std::log(x.time() + x.space().dot(b.coords()));
}

/// The same quantity through the Iwasawa decomposition of g^{-1} k.
inline double kernel_log_scale(const GroupElement& g, const BoundaryPoint& b,
                               const Tolerances& tol = default_tolerances()) {
  return iwasawa_log_scale(g.inverse() * lift_boundary_point(b), Sign::minus, tol);
}

/// Quadrature failed its doubled-degree self-check.
class QuadratureError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

/// P_lambda f on a fixed quadrature; boundary values are sampled once.
class PoissonTransform {
 public:
  PoissonTransform(Complex lambda, const BoundarySection& f, SphereQuadrature quad, int sign = kKernelSign)
      : lambda_(lambda), sign_(sign), quad_(std::move(quad)) {
    if (f.p != 0) throw ShapeError("the scalar Poisson transform takes functions (p = 0)");
    if (f.n != quad_.n) throw ShapeError("section and quadrature live on different spheres");
    if (sign != 1 && sign != -1) throw ShapeError("kernel sign must be +1 or -1");
    values_.reserve(quad_.size());
    for (const BoundaryPoint& b : quad_.nodes) values_.push_back(f(b));
  }

  Complex operator()(const HyperbolicPoint& x) const {
    if (x.n() != quad_.n) throw ShapeError("point and quadrature in different dimensions");
    const Complex e = static_cast<double>(sign_) * lambda_;
    CompensatedSum<Complex> sum;
    for (std::size_t i = 0; i < quad_.size(); ++i)
      sum += quad_.weights[i] * std::exp(e * kernel_log_scale(x, quad_.nodes[i])) * values_[i];
    return sum.value();
  }

  Complex lambda() const { return lambda_; }
  int sign() const { return sign_; }
  const SphereQuadrature& quadrature() const { return quad_; }

 private:
  Complex lambda_;
  int sign_;
  SphereQuadrature quad_;
  std::vector<Complex> values_;
};

/// sum_i w_i exp(eps lambda H^-(g^{-1} k_i)) f(b_i), with g the lift of x and
/// the exponent from the Iwasawa decomposition.
inline Complex poisson_transform(Complex lambda, const BoundarySection& f, const GroupElement& g,
                                 const SphereQuadrature& quad, int sign = kKernelSign) {
  if (f.p != 0) throw ShapeError("the scalar Poisson transform takes functions (p = 0)");
  if (f.n != quad.n || g.n() != quad.n) throw ShapeError("dimension mismatch in poisson_transform");
  const Complex e = static_cast<double>(sign) * lambda;
  return quad.integrate([&](const BoundaryPoint& b) -> Complex {
    return std::exp(e * kernel_log_scale(g, b)) * f(b);
  });
}

/// The same with g = lift_hyperbolic_point(x).
inline Complex poisson_transform(Complex lambda, const BoundarySection& f, const HyperbolicPoint& x,
                                 const SphereQuadrature& quad, int sign = kKernelSign) {
  return poisson_transform(lambda, f, lift_hyperbolic_point(x), quad, sign);
}

/// Evaluates at `degree` and at 2 * degree; throws QuadratureError when they
/// differ by more than the self-check tolerance. Returns the finer value.
inline Complex poisson_transform_checked(Complex lambda, const BoundarySection& f,
                                         const HyperbolicPoint& x, int degree,
                                         int sign = kKernelSign,
                                         const Tolerances& tol = default_tolerances()) {
  const Complex coarse = PoissonTransform(lambda, f, sphere_quadrature(f.n, degree), sign)(x);
  const Complex fine = PoissonTransform(lambda, f, sphere_quadrature(f.n, 2 * degree), sign)(x);
  const double rel = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
  if (!(rel <= tol.quadrature_self_check))
    throw QuadratureError("quadrature degree " + std::to_string(degree) +
                          " too low: doubled degree changes the value by " + std::to_string(rel));
  return fine;
}

/// e^{s H^-(g^{-1} k0)} = (x_time + x_space . b0)^{-s}: eigenvalue s (n - s).
inline std::function<Complex(const HyperbolicPoint&)> busemann_exponential(const BoundaryPoint& b0,
                                                                          Complex s) {
  return [b0, s](const HyperbolicPoint& x) { return std::exp(s * kernel_log_scale(x, b0)); };
}

// ---------------------------------------------------------------------------
// Laplacian.

/// Directions for the geodesic-sphere mean: exact on S^n polynomials of degree 6.
inline SphereQuadrature sphere_mean_directions(int n) { return sphere_quadrature(n, 6); }

/// (2(n+1)/r^2)(u(x) - mean of u over the geodesic sphere S(x, r)): the
/// positive Laplace-Beltrami operator up to O(r^2).
inline Complex mean_value_laplacian(const std::function<Complex(const HyperbolicPoint&)>& u,
                                    const HyperbolicPoint& x, double r,
                                    const SphereQuadrature& directions) {
  if (!(r > 0.0 && r <= 0.1)) throw ShapeError("mean_value_laplacian needs 0 < r <= 0.1");
  const int n = x.n();
  if (directions.n != n) throw ShapeError("direction quadrature on the wrong sphere");
  const GroupElement g = lift_hyperbolic_point(x);
  const Complex center = u(x);
  CompensatedSum<Complex> mean;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    Vector y(n + 2);
    y.head(n + 1) = std::sinh(r) * directions.nodes[i].coords();
    y(n + 1) = std::cosh(r);
    mean += directions.weights[i] * (u(HyperbolicPoint(g.matrix() * y)) - center);
  }
  return -(2.0 * (n + 1) / (r * r)) * mean.value();
}

inline Complex mean_value_laplacian(const std::function<Complex(const HyperbolicPoint&)>& u,
                                    const HyperbolicPoint& x, double r) {
  return mean_value_laplacian(u, x, r, sphere_mean_directions(x.n()));
}

/// max over grid of |L P - lambda (n - lambda) P| / max(|P|, 1e-8).
inline double eigen_residual(const PoissonTransform& transform, const std::vector<HyperbolicPoint>& grid,
                             double r) {
  const int n = transform.quadrature().n;
  const Complex lambda = transform.lambda();
  const Complex eigenvalue = lambda * (static_cast<double>(n) - lambda);
  const SphereQuadrature directions = sphere_mean_directions(n);
  const std::function<Complex(const HyperbolicPoint&)> u = [&](const HyperbolicPoint& x) { return transform(x); };
  double worst = 0.0;
  for (const HyperbolicPoint& x : grid) {
    if (radius(x) > 2.0 + 1e-12) throw ShapeError("grid point beyond distance 2 of the base point");
    const Complex value = u(x);
    const Complex lap = mean_value_laplacian(u, x, r, directions);
    worst = std::max(worst, std::abs(lap - eigenvalue * value) / std::max(std::abs(value), 1e-8));
  }
  return worst;
}

inline double eigen_residual(Complex lambda, const BoundarySection& f, const std::vector<HyperbolicPoint>& grid,
                             const SphereQuadrature& quad, double r, int sign = kKernelSign) {
  return eigen_residual(PoissonTransform(lambda, f, quad, sign), grid, r);
}

// ---------------------------------------------------------------------------
// Grids.

/// `count` seeded points with uniform direction and distance in [0, max_radius].
inline std::vector<HyperbolicPoint> random_grid(int n, int count, double max_radius, Rng& rng) {
  require_dimension(n);
  std::vector<HyperbolicPoint> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    grid.push_back(HyperbolicPoint::at(random_unit_vector(rng, n + 1), uniform(rng, 0.0, max_radius)));
  return grid;
}

/// "base", "random:COUNT,RADIUS" or "ray:COUNT,RADIUS" (points along the pole
/// axis at evenly spaced distances in [0, RADIUS]).
inline std::vector<HyperbolicPoint> grid_from_spec(int n, const std::string& spec, Rng& rng) {
  if (spec == "base") return {HyperbolicPoint::base(n)};
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : detail::parse_numbers(spec.substr(colon + 1));
  if ((kind != "random" && kind != "ray") || args.size() != 2 || args[0] < 1 ||
      args[0] != std::floor(args[0]) || args[1] < 0)
    throw ShapeError("grid spec must be base, random:COUNT,RADIUS or ray:COUNT,RADIUS, got '" + spec + "'");
  const int count = static_cast<int>(args[0]);
  if (kind == "random") return random_grid(n, count, args[1], rng);
  std::vector<HyperbolicPoint> grid;
  for (int i = 0; i < count; ++i) {
    const double r = count == 1 ? 0.0 : args[1] * i / (count - 1);
    grid.push_back(HyperbolicPoint::at(Vector::Unit(n + 1, n), r));
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Checks.

/// P_lambda(pi^{n/2 - eps lambda}(h) f) against P_lambda(f)(h^{-1} x), relative
/// to the largest |P_lambda f| on the grid.
inline double equivariance_defect(Complex lambda, const BoundarySection& f, const GroupElement& h,
                                  const std::vector<HyperbolicPoint>& grid, const SphereQuadrature& quad,
                                  int sign = kKernelSign) {
  const int n = quad.n;
  const Complex matched = 0.5 * n - static_cast<double>(sign) * lambda;
  const PoissonTransform direct(lambda, f, quad, sign);
  const PoissonTransform moved(lambda, rep_action(matched, 0, h, f), quad, sign);
  const GroupElement hinv = h.inverse();
  double worst = 0.0, scale = 0.0;
  for (const HyperbolicPoint& x : grid) {
    const Complex expect = direct(apply(hinv, x));
    scale = std::max(scale, std::abs(expect));
    worst = std::max(worst, std::abs(moved(x) - expect));
  }
  return worst / std::max(scale, 1e-300);
}

/// max over grid of |P at degree - P at 2 degree| / |P at 2 degree|.
inline double quadrature_convergence(Complex lambda, const BoundarySection& f,
                                     const std::vector<HyperbolicPoint>& grid, int degree,
                                     int sign = kKernelSign) {
  const PoissonTransform coarse(lambda, f, sphere_quadrature(f.n, degree), sign);
  const PoissonTransform fine(lambda, f, sphere_quadrature(f.n, 2 * degree), sign);
  // Relative to the grid sup norm: pointwise ratios blow up near zeros of P f.
  double worst = 0.0, scale = 0.0;
  for (const HyperbolicPoint& x : grid) {
    const Complex v = fine(x);
    worst = std::max(worst, std::abs(coarse(x) - v));
    scale = std::max(scale, std::abs(v));
  }
  return worst / std::max(scale, 1e-300);
}

struct KernelCalibration {
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  int chosen = 0;  // the sign whose residual is below `threshold`, 0 if neither or both
};

/// Runs the eigenvalue test for both kernel signs.
inline KernelCalibration calibrate_kernel_sign(Complex lambda, const BoundarySection& f,
                                               const std::vector<HyperbolicPoint>& grid,
                                               const SphereQuadrature& quad, double r, double threshold) {
  KernelCalibration c;
  c.residual_plus = eigen_residual(lambda, f, grid, quad, r, +1);
  c.residual_minus = eigen_residual(lambda, f, grid, quad, r, -1);
  const bool plus = c.residual_plus <= threshold, minus = c.residual_minus <= threshold;
  c.chosen = plus == minus ? 0 : (plus ? 1 : -1);
  return c;
}

}  // namespace hyperlie
