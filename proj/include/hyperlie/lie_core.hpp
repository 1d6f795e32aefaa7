#pragma once

// Matrix realization of g = so(n+1,1) and G = SO(n+1,1)_0.
//
// Index layout of the (n+2)x(n+2) matrices (0-based):
//   0 .. n-1  the m-block (acted on by M = SO(n))
//   n         the K-pole axis; boundary base point b0 = e_n
//   n+1       the Minkowski time axis; J = diag(1,...,1,-1)

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hyperlie/config.hpp"
#include "hyperlie/expm.hpp"

namespace hyperlie {

struct unchecked_t {
  explicit unchecked_t() = default;
};
inline constexpr unchecked_t unchecked{};

inline void require_dimension(int n) {
  if (n < 1) throw ShapeError("boundary dimension n must be >= 1, got " + std::to_string(n));
}

inline Matrix minkowski_form(int n) {
  Matrix j = Matrix::Identity(n + 2, n + 2);
  j(n + 1, n + 1) = -1.0;
  return j;
}

/// max_ij |(X^T J + J X)_ij|
inline double algebra_defect(const Matrix& mat) {
  const int n = static_cast<int>(mat.rows()) - 2;
  const Matrix j = minkowski_form(n);
  return (mat.transpose() * j + j * mat).cwiseAbs().maxCoeff();
}

/// (X - J X^T J) / 2, the orthogonal projection onto so(n+1,1).
inline Matrix project_to_algebra(const Matrix& mat) {
  const int n = static_cast<int>(mat.rows()) - 2;
  const Matrix j = minkowski_form(n);
  return 0.5 * (mat - j * mat.transpose() * j);
}

class AlgebraElement {
 public:
  AlgebraElement(int n, Matrix mat, unchecked_t) : n_(n), mat_(std::move(mat)) {}

  static AlgebraElement zero(int n) {
    require_dimension(n);
    return {n, Matrix::Zero(n + 2, n + 2), unchecked};
  }

  static AlgebraElement from_matrix(const Matrix& mat,
                                    const Tolerances& tol = default_tolerances()) {
    if (mat.rows() != mat.cols() || mat.rows() < 3)
      throw ShapeError("algebra element must be a square matrix of size >= 3");
    const double defect = algebra_defect(mat);
    if (!(defect <= tol.algebra_membership))
      throw InvariantError("matrix is not in so(n+1,1): |X^T J + J X| = " +
                           std::to_string(defect));
    return {static_cast<int>(mat.rows()) - 2, mat, unchecked};
  }

  int n() const { return n_; }
  const Matrix& matrix() const { return mat_; }
  double operator()(int row, int col) const { return mat_(row, col); }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    check_same(a, b);
    return {a.n_, a.mat_ + b.mat_, unchecked};
  }
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    check_same(a, b);
    return {a.n_, a.mat_ - b.mat_, unchecked};
  }
  friend AlgebraElement operator-(const AlgebraElement& a) { return {a.n_, -a.mat_, unchecked}; }
  friend AlgebraElement operator*(double s, const AlgebraElement& a) {
    return {a.n_, s * a.mat_, unchecked};
  }
  friend AlgebraElement operator*(const AlgebraElement& a, double s) { return s * a; }

  static void check_same(const AlgebraElement& a, const AlgebraElement& b) {
    if (a.n_ != b.n_)
      throw ShapeError("algebra elements of different dimension: n=" + std::to_string(a.n_) +
                       " vs n=" + std::to_string(b.n_));
  }

 private:
  int n_;
  Matrix mat_;
};

// ---------------------------------------------------------------------------
// Embeddings of the named subspaces.

enum class AlgebraComponent { a, nplus, nminus, m, k, p };

inline AlgebraElement embed_a(int n, double t) {
  require_dimension(n);
  Matrix x = Matrix::Zero(n + 2, n + 2);
  x(n, n + 1) = t;
  x(n + 1, n) = t;
  return {n, std::move(x), unchecked};
}

/// The root-space element of n^sign with coordinate vector v.
inline AlgebraElement embed_n(Sign sign, const Vector& v) {
  const int n = static_cast<int>(v.size());
  require_dimension(n);
  const double s = to_double(sign);
  Matrix x = Matrix::Zero(n + 2, n + 2);
  for (int i = 0; i < n; ++i) {
    x(i, n) = v(i);
    x(i, n + 1) = -s * v(i);
    x(n, i) = -v(i);
    x(n + 1, i) = -s * v(i);
  }
  return {n, std::move(x), unchecked};
}

inline double skew_defect(const Matrix& m) { return (m + m.transpose()).cwiseAbs().maxCoeff(); }

inline AlgebraElement embed_m(const Matrix& skew, const Tolerances& tol = default_tolerances()) {
  if (skew.rows() != skew.cols() || skew.rows() < 1)
    throw ShapeError("m payload must be a square n x n matrix");
  if (skew_defect(skew) > tol.skew_payload) throw InvariantError("m payload is not skew-symmetric");
  const int n = static_cast<int>(skew.rows());
  Matrix x = Matrix::Zero(n + 2, n + 2);
  x.topLeftCorner(n, n) = skew;
  return {n, std::move(x), unchecked};
}

inline AlgebraElement embed_k(const Matrix& skew, const Tolerances& tol = default_tolerances()) {
  if (skew.rows() != skew.cols() || skew.rows() < 2)
    throw ShapeError("k payload must be a square (n+1) x (n+1) matrix");
  if (skew_defect(skew) > tol.skew_payload) throw InvariantError("k payload is not skew-symmetric");
  const int n = static_cast<int>(skew.rows()) - 1;
  Matrix x = Matrix::Zero(n + 2, n + 2);
  x.topLeftCorner(n + 1, n + 1) = skew;
  return {n, std::move(x), unchecked};
}

inline AlgebraElement embed_p(const Vector& p) {
  if (p.size() < 2) throw ShapeError("p payload must have length n+1 >= 2");
  const int n = static_cast<int>(p.size()) - 1;
  Matrix x = Matrix::Zero(n + 2, n + 2);
  x.col(n + 1).head(n + 1) = p;
  x.row(n + 1).head(n + 1) = p.transpose();
  return {n, std::move(x), unchecked};
}

/// Element of m^{perp k}: the k-element with (i, pole) = v_i, (pole, i) = -v_i.
inline AlgebraElement embed_mperp(const Vector& v) {
  const int n = static_cast<int>(v.size());
  require_dimension(n);
  Matrix x = Matrix::Zero(n + 2, n + 2);
  x.col(n).head(n) = v;
  x.row(n).head(n) = -v.transpose();
  return {n, std::move(x), unchecked};
}

inline Vector mperp_vector(const AlgebraElement& x) { return x.matrix().col(x.n()).head(x.n()); }

using Payload = std::variant<double, Vector, Matrix>;

/// Generic front end for the component embeddings; `n` is only consulted for
/// the scalar a-payload.
inline AlgebraElement embed(AlgebraComponent component, const Payload& payload, int n = 0,
                            const Tolerances& tol = default_tolerances()) {
  switch (component) {
    case AlgebraComponent::a:
      if (!std::holds_alternative<double>(payload)) throw ShapeError("a payload must be a scalar");
      return embed_a(n, std::get<double>(payload));
    case AlgebraComponent::nplus:
    case AlgebraComponent::nminus:
    case AlgebraComponent::p: {
      if (!std::holds_alternative<Vector>(payload)) throw ShapeError("payload must be a vector");
      const Vector& v = std::get<Vector>(payload);
      if (n != 0 && v.size() != (component == AlgebraComponent::p ? n + 1 : n))
        throw ShapeError("vector payload has the wrong length");
      if (component == AlgebraComponent::p) return embed_p(v);
      return embed_n(component == AlgebraComponent::nplus ? Sign::plus : Sign::minus, v);
    }
    case AlgebraComponent::m:
    case AlgebraComponent::k: {
      if (!std::holds_alternative<Matrix>(payload)) throw ShapeError("payload must be a matrix");
      const Matrix& m = std::get<Matrix>(payload);
      if (n != 0 && m.rows() != (component == AlgebraComponent::m ? n : n + 1))
        throw ShapeError("matrix payload has the wrong size");
      return component == AlgebraComponent::m ? embed_m(m, tol) : embed_k(m, tol);
    }
  }
  throw ShapeError("unknown algebra component");
}

// ---------------------------------------------------------------------------
// Decompositions.

struct BruhatComponents {
  Matrix m_part;  // n x n skew
  double a_part = 0.0;
  Vector nplus;
  Vector nminus;

  AlgebraElement assemble() const {
    const int n = static_cast<int>(nplus.size());
    return embed_m(m_part) + embed_a(n, a_part) + embed_n(Sign::plus, nplus) +
           embed_n(Sign::minus, nminus);
  }
};

inline void require_algebra(const AlgebraElement& x, const Tolerances& tol) {
  const double defect = algebra_defect(x.matrix());
  if (!(defect <= tol.algebra_membership * std::max(1.0, x.matrix().cwiseAbs().maxCoeff())))
    throw InvariantError("algebra invariant violated: defect " + std::to_string(defect));
}

/// g = m + a + n+ + n-.
inline BruhatComponents bruhat_project(const AlgebraElement& x,
                                       const Tolerances& tol = default_tolerances()) {
  require_algebra(x, tol);
  const int n = x.n();
  const Matrix& mat = x.matrix();
  BruhatComponents c;
  c.m_part = 0.5 * (mat.topLeftCorner(n, n) - mat.topLeftCorner(n, n).transpose());
  c.a_part = mat(n, n + 1);
  const Vector pole = mat.col(n).head(n);
  const Vector time = mat.col(n + 1).head(n);
  c.nplus = 0.5 * (pole - time);
  c.nminus = 0.5 * (pole + time);
  return c;
}

struct IwasawaAlgebraParts {
  AlgebraElement k;
  double a;
  Vector n;  // coordinate vector of the n^sign part
};

/// g = k + a + n^sign at the Lie algebra level.
inline IwasawaAlgebraParts iwasawa_algebra_split(const AlgebraElement& x, Sign sign,
                                                 const Tolerances& tol = default_tolerances()) {
  const BruhatComponents c = bruhat_project(x, tol);
  // An n^{-sign} element Y is (Y + theta Y) - theta Y with Y + theta Y in m^{perp k}.
  const Vector& other = sign == Sign::minus ? c.nplus : c.nminus;
  const Vector& same = sign == Sign::minus ? c.nminus : c.nplus;
  AlgebraElement k = embed_m(c.m_part) + embed_mperp(2.0 * other);
  return {std::move(k), c.a_part, same - other};
}

inline AlgebraElement iwasawa_algebra_project(const AlgebraElement& x, Sign sign,
                                              const Tolerances& tol = default_tolerances()) {
  return iwasawa_algebra_split(x, sign, tol).k;
}

inline AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement::check_same(x, y);
  const Matrix c = x.matrix() * y.matrix() - y.matrix() * x.matrix();
  return {x.n(), project_to_algebra(c), unchecked};
}

inline AlgebraElement cartan_involution(const AlgebraElement& x) {
  return {x.n(), -x.matrix().transpose(), unchecked};
}

struct Pairings {
  double inner;    // tr(X Y^T)
  double killing;  // 2n tr(X Y)
};

inline Pairings pairings(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement::check_same(x, y);
  const double inner = (x.matrix().array() * y.matrix().array()).sum();
  const double killing = 2.0 * x.n() * (x.matrix() * y.matrix()).trace();
  return {inner, killing};
}

// ---------------------------------------------------------------------------
// Group level.

struct GroupResiduals {
  double orthogonality = 0;  // |g^T J g - J|_max / max(1, |g|_max^2)
  double determinant = 0;    // |det g - 1|
  double time_entry = 0;     // g(n+1, n+1)
};

inline GroupResiduals group_residuals(const Matrix& mat) {
  const int n = static_cast<int>(mat.rows()) - 2;
  const Matrix j = minkowski_form(n);
  const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
  GroupResiduals r;
  r.orthogonality = (mat.transpose() * j * mat - j).cwiseAbs().maxCoeff() / (scale * scale);
  r.determinant = std::abs(mat.determinant() - 1.0);
  r.time_entry = mat(n + 1, n + 1);
  return r;
}

class MembershipError : public InvariantError {
 public:
  MembershipError(const std::string& what, GroupResiduals residuals)
      : InvariantError(what), residuals_(residuals) {}
  const GroupResiduals& residuals() const { return residuals_; }

 private:
  GroupResiduals residuals_;
};

class GroupElement {
 public:
  GroupElement(int n, Matrix mat, unchecked_t) : n_(n), mat_(std::move(mat)) {}

  static GroupElement identity(int n) {
    require_dimension(n);
    return {n, Matrix::Identity(n + 2, n + 2), unchecked};
  }

  int n() const { return n_; }
  const Matrix& matrix() const { return mat_; }
  double operator()(int row, int col) const { return mat_(row, col); }

  /// J g^T J; exact on the group.
  GroupElement inverse() const {
    const Matrix j = minkowski_form(n_);
    return {n_, j * mat_.transpose() * j, unchecked};
  }

  Vector apply(const Vector& x) const { return mat_ * x; }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    if (a.n_ != b.n_) throw ShapeError("group elements of different dimension");
    return {a.n_, a.mat_ * b.mat_, unchecked};
  }

 private:
  int n_;
  Matrix mat_;
};

/// Validates a foreign matrix as an element of SO(n+1,1)_0.
inline GroupElement check_group_membership(const Matrix& mat,
                                           const Tolerances& tol = default_tolerances()) {
  if (mat.rows() != mat.cols() || mat.rows() < 3)
    throw ShapeError("group element must be a square matrix of size >= 3");
  if (!mat.allFinite()) throw InvariantError("group element has non-finite entries");
  const int n = static_cast<int>(mat.rows()) - 2;
  const GroupResiduals r = group_residuals(mat);
  const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
  if (!(r.orthogonality <= tol.group_acceptance))
    throw MembershipError("J-orthogonality violated: residual " + std::to_string(r.orthogonality),
                          r);
  if (!(r.determinant <= tol.group_acceptance * scale * scale))
    throw MembershipError("determinant is not 1: |det - 1| = " + std::to_string(r.determinant), r);
  if (!(r.time_entry >= 1.0 - tol.group_acceptance))
    throw MembershipError("not in the identity component: time entry " +
                              std::to_string(r.time_entry) + " < 1",
                          r);
  return {n, mat, unchecked};
}

/// If x lies in n+ or n- (exact block pattern), its sign and coordinate vector.
inline std::optional<std::pair<Sign, Vector>> match_root_space(const AlgebraElement& x) {
  const int n = x.n();
  const Matrix& mat = x.matrix();
  const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() * scale;
  const Vector v = mat.col(n).head(n);
  for (Sign sign : {Sign::plus, Sign::minus}) {
    if ((embed_n(sign, v).matrix() - mat).cwiseAbs().maxCoeff() <= slack)
      return std::make_pair(sign, v);
  }
  return std::nullopt;
}

/// exp(N) = I + N + N^2/2 for N in n+ or n- (N^3 = 0).
inline GroupElement exp_root_space(Sign sign, const Vector& v) {
  const int n = static_cast<int>(v.size());
  const Matrix nil = embed_n(sign, v).matrix();
  return {n, Matrix::Identity(n + 2, n + 2) + nil + 0.5 * nil * nil, unchecked};
}

/// exp(t H0): cosh/sinh block on the (pole, time) plane.
inline GroupElement exp_a(int n, double t) {
  require_dimension(n);
  Matrix g = Matrix::Identity(n + 2, n + 2);
  g(n, n) = g(n + 1, n + 1) = std::cosh(t);
  g(n, n + 1) = g(n + 1, n) = std::sinh(t);
  return {n, std::move(g), unchecked};
}

inline GroupElement group_exp(const AlgebraElement& x,
                              const Tolerances& tol = default_tolerances()) {
  const double norm = x.matrix().norm();
  if (!(norm <= tol.exp_norm_cap))
    throw CapExceeded("group_exp: |X| = " + std::to_string(norm) + " exceeds cap " +
                      std::to_string(tol.exp_norm_cap));
  if (auto root = match_root_space(x)) return exp_root_space(root->first, root->second);
  return {x.n(), expm(x.matrix()), unchecked};
}

inline AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) {
  if (g.n() != x.n()) throw ShapeError("adjoint: dimension mismatch");
  const Matrix c = g.matrix() * x.matrix() * g.inverse().matrix();
  return {x.n(), project_to_algebra(c), unchecked};
}

/// The upper (n+1)x(n+1) block of a K-element, embedded back.
inline GroupElement embed_rotation(const Matrix& rotation) {
  const int n = static_cast<int>(rotation.rows()) - 1;
  Matrix g = Matrix::Identity(n + 2, n + 2);
  g.topLeftCorner(n + 1, n + 1) = rotation;
  return {n, std::move(g), unchecked};
}

/// M-element from an SO(n) matrix acting on the m-block.
inline GroupElement embed_m_rotation(const Matrix& rotation) {
  const int n = static_cast<int>(rotation.rows());
  Matrix g = Matrix::Identity(n + 2, n + 2);
  g.topLeftCorner(n, n) = rotation;
  return {n, std::move(g), unchecked};
}

struct StandardBasis {
  AlgebraElement h0;
  std::vector<AlgebraElement> uplus;   // orthonormal basis of n+
  std::vector<AlgebraElement> uminus;  // orthonormal basis of n-

  /// alpha0 in a^*: the a-coefficient of X, so alpha0(H0) = 1.
  double alpha0(const AlgebraElement& x) const { return x.matrix()(x.n(), x.n() + 1); }
};

inline StandardBasis standard_basis(int n) {
  require_dimension(n);
  StandardBasis basis{embed_a(n, 1.0), {}, {}};
  // <embed_n(v), embed_n(v)> = 4|v|^2, hence the factor 1/2.
  for (int j = 0; j < n; ++j) {
    const Vector e = 0.5 * Vector::Unit(n, j);
    basis.uplus.push_back(embed_n(Sign::plus, e));
    basis.uminus.push_back(embed_n(Sign::minus, e));
  }
  return basis;
}

}  // namespace hyperlie
