#pragma once

// Principal series representations on p-forms of the boundary sphere.
//
// A section value sbar(k) in Lambda^p (R^n)^* is realized by evaluating the
// form at b = k e_pole on the frame (k E_1, ..., k E_n), E_j = e_j the
// tangent basis at the pole coming from m^{perp k} ~ R^n.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperlie/boundary.hpp"
#include "hyperlie/quadrature.hpp"
#include "hyperlie/random.hpp"

namespace hyperlie {

/// A smooth p-form on S^n given in closed form. `eval` receives the base
/// point and exactly p tangent vectors at it.
struct BoundarySection {
  using Eval = std::function<Complex(const BoundaryPoint&, std::span<const Vector>)>;

  int n = 0;
  int p = 0;
  Eval eval;

  Complex operator()(const BoundaryPoint& b, std::span<const Vector> w = {}) const {
    if (static_cast<int>(w.size()) != p)
      throw ShapeError("section of degree " + std::to_string(p) + " evaluated on " +
                       std::to_string(w.size()) + " tangent vectors");
    return eval(b, w);
  }
};

inline void require_compatible(const GroupElement& g, const BoundarySection& s, int p) {
  if (g.n() != s.n) throw ShapeError("group element and section live over different spheres");
  if (s.p != p)
    throw ShapeError("section has degree " + std::to_string(s.p) + ", expected " +
                     std::to_string(p));
}

/// pi^lambda_{tau_p}(g) s: at (b; w) equals e^{(lambda + n/2) H^-(g^{-1}k)} times
/// s at k^-(g^{-1}k) e_pole on the frame transported by k^-(g^{-1}k) k^{-1}.
inline BoundarySection rep_action(Complex lambda, int p, const GroupElement& g, BoundarySection s) {
  require_compatible(g, s, p);
  const int n = g.n();
  const Complex exponent = lambda + 0.5 * n;
  return {n, p,
          [ginv = g.inverse(), exponent, s = std::move(s)](const BoundaryPoint& b,
                                                           std::span<const Vector> w) {
            const GroupElement k = lift_boundary_point(b);
            const IwasawaFactors f = iwasawa_decompose(ginv * k, Sign::minus);
            std::vector<Vector> moved;
            moved.reserve(w.size());
            for (const Vector& wi : w)
              moved.push_back(tangent_from_coordinates(f.k, tangent_coordinates(k, wi)));
            return std::exp(exponent * f.t) * s(pole_image(f.k), moved);
          }};
}

/// ((g^{-1})^* s)(b; w) = s(g^{-1} b; d alpha_{g^{-1}} w_1, ..., d alpha_{g^{-1}} w_p).
inline BoundarySection pullback_p_form(const GroupElement& g, BoundarySection s) {
  require_compatible(g, s, s.p);
  const int n = g.n(), p = s.p;
  return {n, p,
          [ginv = g.inverse(), s = std::move(s)](const BoundaryPoint& b,
                                                 std::span<const Vector> w) {
            const GroupElement k = lift_boundary_point(b);
            std::vector<Vector> pushed;
            pushed.reserve(w.size());
            for (const Vector& wi : w) pushed.push_back(boundary_differential(ginv, k, wi).w);
            return s(boundary_action(ginv, k), pushed);
          }};
}

/// Pointwise product of a function (degree 0) and a p-form.
inline BoundarySection multiply(BoundarySection f, BoundarySection s) {
  if (f.p != 0) throw ShapeError("left factor of a section product must be a function");
  if (f.n != s.n) throw ShapeError("sections over different spheres");
  const int n = s.n, p = s.p;
  return {n, p, [f = std::move(f), s = std::move(s)](const BoundaryPoint& b,
                                                     std::span<const Vector> w) {
            return f(b) * s(b, w);
          }};
}

// ---------------------------------------------------------------------------
// Sampled sup-norm comparisons.

struct SamplePoint {
  BoundaryPoint base;
  std::vector<Vector> frame;
};

/// Quadrature nodes plus `random_count` uniform points, each with a random
/// orthonormal p-frame.
inline std::vector<SamplePoint> sample_points(int n, int p, int random_count, Rng& rng,
                                              int quadrature_degree = 2) {
  std::vector<SamplePoint> points;
  const SphereQuadrature quad = sphere_quadrature(n, quadrature_degree);
  for (const BoundaryPoint& b : quad.nodes)
    points.push_back({b, random_tangent_frame(rng, b.coords(), p)});
  for (int i = 0; i < random_count; ++i) {
    BoundaryPoint b(random_unit_vector(rng, n + 1));
    points.push_back({b, random_tangent_frame(rng, b.coords(), p)});
  }
  return points;
}

inline double sup_difference(const BoundarySection& lhs, const BoundarySection& rhs,
                             std::span<const SamplePoint> points) {
  double worst = 0.0;
  for (const SamplePoint& pt : points)
    worst = std::max(worst, std::abs(lhs(pt.base, pt.frame) - rhs(pt.base, pt.frame)));
  return worst;
}

/// max over samples of |s(.., w_i, .., w_j, ..) + s(.., w_j, .., w_i, ..)|.
inline double antisymmetry_defect(const BoundarySection& s, std::span<const SamplePoint> points) {
  double worst = 0.0;
  for (const SamplePoint& pt : points) {
    const Complex base = s(pt.base, pt.frame);
    for (int i = 0; i < s.p; ++i)
      for (int j = i + 1; j < s.p; ++j) {
        std::vector<Vector> swapped = pt.frame;
        std::swap(swapped[i], swapped[j]);
        worst = std::max(worst, std::abs(s(pt.base, swapped) + base));
      }
  }
  return worst;
}

/// max over samples and slots of |s(.., a u + c v, ..) - a s(.., u, ..) - c s(.., v, ..)|,
/// with v a second tangent vector at the same point.
inline double multilinearity_defect(const BoundarySection& s, std::span<const SamplePoint> points,
                                    Rng& rng) {
  double worst = 0.0;
  for (const SamplePoint& pt : points) {
    for (int slot = 0; slot < s.p; ++slot) {
      const double a = uniform(rng, -2.0, 2.0), c = uniform(rng, -2.0, 2.0);
      Vector v = random_gaussian(rng, static_cast<int>(pt.base.coords().size()));
      v -= v.dot(pt.base.coords()) * pt.base.coords();
      std::vector<Vector> mixed = pt.frame, other = pt.frame;
      mixed[slot] = a * pt.frame[slot] + c * v;
      other[slot] = v;
      const Complex lhs = s(pt.base, mixed);
      const Complex rhs = a * s(pt.base, pt.frame) + c * s(pt.base, other);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }
  return worst;
}

/// sup |pullback_p_form(g, s) - rep_action(lambda, p, g, s)| over samples.
inline double action_defect(Complex lambda, const GroupElement& g, const BoundarySection& s,
                            std::span<const SamplePoint> points) {
  return sup_difference(pullback_p_form(g, s), rep_action(lambda, s.p, g, s), points);
}

/// The pullback action agrees with pi^{p - n/2}_{tau_p}.
inline double compat_defect(const GroupElement& g, int p, const BoundarySection& s, int samples,
                            std::uint64_t seed = 0) {
  require_compatible(g, s, p);
  Rng rng = make_stream(seed, "compat_defect");
  const auto points = sample_points(g.n(), p, samples, rng);
  return action_defect(Complex(p - 0.5 * g.n()), g, s, points);
}

/// pi^{l1}(g) f * pi^{l2}(g) s against pi^{l1 + l2 + n/2}(g)(f s).
inline double twist_product_defect(Complex lambda1, Complex lambda2, int p, const GroupElement& g,
                                   const BoundarySection& f, const BoundarySection& s, int samples,
                                   std::uint64_t seed = 0) {
  require_compatible(g, f, 0);
  require_compatible(g, s, p);
  Rng rng = make_stream(seed, "twist_product_defect");
  const auto points = sample_points(g.n(), p, samples, rng);
  const BoundarySection lhs = multiply(rep_action(lambda1, 0, g, f), rep_action(lambda2, p, g, s));
  const BoundarySection rhs = rep_action(lambda1 + lambda2 + 0.5 * g.n(), p, g, multiply(f, s));
  return sup_difference(lhs, rhs, points);
}

}  // namespace hyperlie
