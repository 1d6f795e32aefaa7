#pragma once

// The boundary sphere K/M = S^n. A coset kM is represented by b = k e_pole in
// R^{n+1}; a tangent vector [k, Y] with Y in m^{perp k} ~ R^n is represented
// by w = k (Y, 0) in R^{n+1}, orthogonal to b.

#include <cmath>
#include <string>
#include <utility>

#include "hyperlie/iwasawa.hpp"
#include "hyperlie/lie_core.hpp"
#include "hyperlie/rotation.hpp"

namespace hyperlie {

class BoundaryPoint {
 public:
  explicit BoundaryPoint(Vector b, const Tolerances& tol = default_tolerances()) : b_(std::move(b)) {
    if (b_.size() < 2) throw ShapeError("boundary point needs n+1 >= 2 coordinates");
    const double defect = std::abs(b_.norm() - 1.0);
    if (!(defect <= tol.unit_vector))
      throw InvariantError("boundary point is not a unit vector: ||b| - 1| = " +
                           std::to_string(defect));
  }

  static BoundaryPoint normalized(const Vector& v) {
    const double norm = v.norm();
    if (!(norm > 0.0)) throw InvariantError("cannot normalize a zero vector to a boundary point");
    return BoundaryPoint(v / norm);
  }

  /// e_pole, the image of the identity coset eM.
  static BoundaryPoint pole(int n) {
    require_dimension(n);
    return BoundaryPoint(Vector::Unit(n + 1, n));
  }

  int n() const { return static_cast<int>(b_.size()) - 1; }
  const Vector& coords() const { return b_; }
  double operator()(int i) const { return b_(i); }

 private:
  Vector b_;
};

struct TangentVector {
  BoundaryPoint base;
  Vector w;

  TangentVector(BoundaryPoint b, Vector vec, const Tolerances& tol = default_tolerances())
      : base(std::move(b)), w(std::move(vec)) {
    if (w.size() != base.coords().size()) throw ShapeError("tangent vector has the wrong length");
    const double defect = std::abs(w.dot(base.coords()));
    if (!(defect <= tol.tangent * std::max(1.0, w.norm())))
      throw InvariantError("tangent vector is not orthogonal to its base point: |w.b| = " +
                           std::to_string(defect));
  }
};

/// Deterministic coset representative: k in K with k e_pole = b.
inline GroupElement lift_boundary_point(const BoundaryPoint& b) {
  return embed_rotation(pole_rotation(b.coords()));
}

/// R^n coordinate of the m^{perp k} element representing w at the lift k.
inline Vector tangent_coordinates(const GroupElement& lift, const Vector& w) {
  const int n = lift.n();
  return (lift.matrix().topLeftCorner(n + 1, n + 1).transpose() * w).head(n);
}

/// k (Y, 0): the tangent vector at k e_pole represented by Y in R^n.
inline Vector tangent_from_coordinates(const GroupElement& lift, const Vector& y) {
  const int n = lift.n();
  return lift.matrix().topLeftCorner(n + 1, n) * y;
}

inline BoundaryPoint pole_image(const GroupElement& k) {
  const int n = k.n();
  return BoundaryPoint::normalized(k.matrix().col(n).head(n + 1));
}

// ---------------------------------------------------------------------------

/// g(kM) = k^-(g k) M, for an explicit lift k.
inline BoundaryPoint boundary_action(const GroupElement& g, const GroupElement& lift,
                                     const Tolerances& tol = default_tolerances()) {
  return pole_image(iwasawa_decompose(g * lift, Sign::minus, tol).k);
}

inline BoundaryPoint boundary_action(const GroupElement& g, const BoundaryPoint& b,
                                     const Tolerances& tol = default_tolerances()) {
  return boundary_action(g, lift_boundary_point(b), tol);
}

/// e^{H^-(g k)}.
inline double conformal_factor(const GroupElement& g, const GroupElement& lift,
                               const Tolerances& tol = default_tolerances()) {
  return std::exp(iwasawa_log_scale(g * lift, Sign::minus, tol));
}

inline double conformal_factor(const GroupElement& g, const BoundaryPoint& b,
                               const Tolerances& tol = default_tolerances()) {
  return conformal_factor(g, lift_boundary_point(b), tol);
}

/// d alpha_g [k, Y] = [k^-(g k), e^{H^-(g k)} Y].
inline TangentVector boundary_differential(const GroupElement& g, const GroupElement& lift,
                                           const Vector& w,
                                           const Tolerances& tol = default_tolerances()) {
  const IwasawaFactors f = iwasawa_decompose(g * lift, Sign::minus, tol);
  const Vector y = tangent_coordinates(lift, w);
  Vector image = std::exp(f.t) * tangent_from_coordinates(f.k, y);
  BoundaryPoint base = pole_image(f.k);
  image -= image.dot(base.coords()) * base.coords();  // rounding only
  return TangentVector(std::move(base), std::move(image), tol);
}

inline TangentVector boundary_differential(const GroupElement& g, const TangentVector& tv,
                                           const Tolerances& tol = default_tolerances()) {
  return boundary_differential(g, lift_boundary_point(tv.base), tv.w, tol);
}

/// Q(xK, kM, yK) = e^{H^-(x^{-1} y k^-(y^{-1} k))}: the conformal ratio of
/// the views of b from the points xK and yK. Q(gK, b, eK) = e^{H^-(g^{-1}k)}.
inline double visual_kernel(const GroupElement& x, const BoundaryPoint& b, const GroupElement& y,
                            const Tolerances& tol = default_tolerances()) {
  const GroupElement k = lift_boundary_point(b);
  const GroupElement ky = iwasawa_decompose(y.inverse() * k, Sign::minus, tol).k;
  return std::exp(iwasawa_log_scale(x.inverse() * y * ky, Sign::minus, tol));
}

/// pr_k^- Ad(a^-(gk) n^-(gk)) Y for Y in m^{perp k}, reduced modulo m: the
/// algebraic form of the boundary differential; equals e^{H^-(gk)} Y.
/// For n >= 2 the unreduced projection also carries the m-part of [N, Y^+],
/// which is invisible on T(K/M).
inline AlgebraElement differential_algebra_image(const GroupElement& g, const GroupElement& lift,
                                                 const AlgebraElement& y,
                                                 const Tolerances& tol = default_tolerances()) {
  const IwasawaFactors f = iwasawa_decompose(g * lift, Sign::minus, tol);
  const AlgebraElement k_part = iwasawa_algebra_project(adjoint(f.a() * f.nil(), y), Sign::minus, tol);
  return embed_mperp(mperp_vector(k_part));
}

}  // namespace hyperlie
