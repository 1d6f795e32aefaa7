#pragma once

// Geodesic flow on G/M, its derivative, right-M-equivariant sections and the
// derivatives acting on them.
//
// Tensor slots are coordinatized by R^n: slot value v stands for the root
// vector embed_n(sigma, v). M acts on every slot by its SO(n) block, so a
// section u satisfies u(g m)(v_1, ..) = u(g)(m v_1, ..).

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperlie/iwasawa.hpp"
#include "hyperlie/lie_core.hpp"
#include "hyperlie/random.hpp"

namespace hyperlie {

/// Complex tensor of the given rank over R^n, row-major in its indices.
struct Tensor {
  int n = 0;
  int rank = 0;
  std::vector<Complex> data;

  static Tensor zeros(int n, int rank) {
    std::size_t size = 1;
    for (int i = 0; i < rank; ++i) size *= static_cast<std::size_t>(n);
    return {n, rank, std::vector<Complex>(size)};
  }

  std::size_t size() const { return data.size(); }
  Complex& operator[](std::size_t i) { return data[i]; }
  const Complex& operator[](std::size_t i) const { return data[i]; }

  double max_abs() const {
    double m = 0.0;
    for (const Complex& c : data) m = std::max(m, std::abs(c));
    return m;
  }

  Tensor& operator+=(const Tensor& o) {
    check_same(o);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    check_same(o);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
    return *this;
  }
  Tensor& operator*=(Complex c) {
    for (Complex& x : data) x *= c;
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Complex c, Tensor a) { return a *= c; }

  void check_same(const Tensor& o) const {
    if (n != o.n || rank != o.rank) throw ShapeError("tensors of different shape");
  }
};

/// T'(v_1, .., v_p) = T(m v_1, .., m v_p) for an n x n matrix m.
inline Tensor transform_slots(const Tensor& t, const Matrix& m) {
  Tensor out = t;
  const int n = t.n;
  std::size_t stride = 1;
  for (int slot = t.rank - 1; slot >= 0; --slot) {
    const Tensor in = out;
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
      const int i = static_cast<int>((idx / stride) % static_cast<std::size_t>(n));
      const std::size_t base = idx - static_cast<std::size_t>(i) * stride;
      Complex sum = 0.0;
      for (int j = 0; j < n; ++j) sum += m(j, i) * in[base + static_cast<std::size_t>(j) * stride];
      out[idx] = sum;
    }
    stride *= static_cast<std::size_t>(n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flow.

struct FlowPoint {
  GroupElement g;
};

/// A tangent vector [g, v] of G/M with v in n+ + a + n-.
struct ModelTangent {
  GroupElement g;
  BruhatComponents v;

  ModelTangent(GroupElement g_, BruhatComponents v_, const Tolerances& tol = default_tolerances())
      : g(std::move(g_)), v(std::move(v_)) {
    if (v.nplus.size() != g.n() || v.nminus.size() != g.n())
      throw ShapeError("tangent components do not match the group dimension");
    if (v.m_part.size() != 0 && v.m_part.cwiseAbs().maxCoeff() > tol.algebra_membership)
      throw InvariantError("model tangent vector must have zero m-component");
    v.m_part = Matrix::Zero(g.n(), g.n());
  }
};

inline void require_flow_time(double t, const Tolerances& tol) {
  if (!(std::abs(t) <= tol.flow_time_cap))
    throw CapExceeded("flow time |t| = " + std::to_string(std::abs(t)) + " exceeds cap " +
                      std::to_string(tol.flow_time_cap));
}

/// phi_t(gM) = g exp(t H0) M.
inline FlowPoint geodesic_flow(double t, const FlowPoint& x,
                               const Tolerances& tol = default_tolerances()) {
  require_flow_time(t, tol);
  return {x.g * exp_a(x.g.n(), t)};
}

/// d phi_t [g, v] = [g exp(t H0), Ad(exp(-t H0)) v]: n+ shrinks by e^{-t},
/// n- grows by e^{t}, a is fixed.
inline ModelTangent flow_derivative(double t, const ModelTangent& vt,
                                    const Tolerances& tol = default_tolerances()) {
  require_flow_time(t, tol);
  const int n = vt.g.n();
  BruhatComponents moved = bruhat_project(adjoint(exp_a(n, -t), vt.v.assemble()), tol);
  moved.m_part.setZero();  // rounding only: Ad(A) preserves each root space
  return ModelTangent(vt.g * exp_a(n, t), std::move(moved), tol);
}

/// Position g e_time on the hyperboloid and unit velocity g e_pole: the
/// M-invariant data of a point of G/M.
struct FlowObservables {
  Vector position;
  Vector velocity;
};

inline FlowObservables observe(const FlowPoint& x) {
  const int n = x.g.n();
  return {x.g.matrix().col(n + 1), x.g.matrix().col(n)};
}

// ---------------------------------------------------------------------------
// Sections.

/// Lambda^p n+*, Lambda^p n-*, n+* (x) n-*, n-* (x) n-*.
enum class SectionSpace { forms_plus, forms_minus, plus_minus, minus_minus };

inline std::string to_string(SectionSpace s) {
  switch (s) {
    case SectionSpace::forms_plus: return "Lambda^p n+*";
    case SectionSpace::forms_minus: return "Lambda^p n-*";
    case SectionSpace::plus_minus: return "n+* (x) n-*";
    case SectionSpace::minus_minus: return "n-* (x) n-*";
  }
  return "?";
}

struct EquivariantSection {
  using Eval = std::function<Tensor(const GroupElement&)>;

  int n = 0;
  int p = 0;
  SectionSpace space = SectionSpace::forms_plus;
  Eval eval;

  Tensor operator()(const GroupElement& g) const {
    if (g.n() != n) throw ShapeError("section evaluated on a group element of different dimension");
    return eval(g);
  }
};

/// max over samples of |u(g m) - u(g) transported by m|.
inline double m_equivariance_defect(const EquivariantSection& u, const GroupElement& g,
                                    const GroupElement& m) {
  const Matrix block = m.matrix().topLeftCorner(u.n, u.n);
  return (u(g * m) - transform_slots(u(g), block)).max_abs();
}

namespace detail {

/// Tensor with entries phi * det[L(a, j_b)] (alternating) or phi * prod_a L(a, j_a).
inline Tensor multilinear_tensor(int n, Complex phi, const Matrix& l, bool alternating) {
  const int p = static_cast<int>(l.rows());
  Tensor t = Tensor::zeros(n, p);
  std::vector<int> idx(p, 0);
  Matrix minor(p, p);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    std::size_t rest = flat;
    for (int slot = p - 1; slot >= 0; --slot) {
      idx[slot] = static_cast<int>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
    }
    double value = 1.0;
    if (alternating) {
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) minor(a, b) = l(a, idx[b]);
      value = p == 0 ? 1.0 : minor.determinant();
    } else {
      for (int a = 0; a < p; ++a) value *= l(a, idx[a]);
    }
    t[flat] = phi * value;
  }
  return t;
}

inline bool alternating(SectionSpace s) {
  return s == SectionSpace::forms_plus || s == SectionSpace::forms_minus;
}

inline void check_space(int n, int p, SectionSpace space) {
  require_dimension(n);
  if (alternating(space)) {
    if (p < 0 || p > n) throw ShapeError("form degree must lie in [0, n]");
  } else if (p != 2) {
    throw ShapeError("tensor-product section spaces have rank 2");
  }
}

}  // namespace detail

/// Matrix-coefficient family: phi(g) * det[c_a^T g iota(e_j)] where phi is a
/// smooth function of g e_time and g e_pole (both M-invariant) and iota puts
/// R^n into the m-block.
inline EquivariantSection matrix_coefficient_section(Rng& rng, int n, int p, SectionSpace space) {
  detail::check_space(n, p, space);
  const Vector a = random_gaussian(rng, n + 2, 0.5);
  const Vector c = random_gaussian(rng, n + 2, 0.5);
  Matrix cov(p, n + 2);
  for (int i = 0; i < p; ++i) cov.row(i) = random_gaussian(rng, n + 2).transpose();
  const bool alt = detail::alternating(space);
  return {n, p, space, [n, a, c, cov, alt](const GroupElement& g) {
            const Matrix& mat = g.matrix();
            const double x = a.dot(mat.col(n + 1)), y = c.dot(mat.col(n));
            const Complex phi = std::exp(Complex(0.0, x)) * (1.0 + 0.25 * std::tanh(y));
            const Matrix l = cov * mat.leftCols(n);
            return detail::multilinear_tensor(n, phi, l, alt);
          }};
}

/// A-eigenfamily attached to the decomposition of sign `sigma`:
///   e^{-mu H^sigma(g)} q(k^sigma(g) e_pole) det[c_a^T k^sigma(g) iota(e_j)],
/// so u(g exp(t H0)) = e^{-mu t} u(g). With sigma = -, u is also invariant
/// under right N^-.
inline EquivariantSection a_eigen_section(Rng& rng, int n, int p, SectionSpace space, double mu,
                                          Sign sigma) {
  detail::check_space(n, p, space);
  const Vector a = random_gaussian(rng, n + 1);
  Matrix cov(p, n + 1);
  for (int i = 0; i < p; ++i) cov.row(i) = random_gaussian(rng, n + 1).transpose();
  const bool alt = detail::alternating(space);
  return {n, p, space, [n, a, cov, alt, mu, sigma](const GroupElement& g) {
            const IwasawaFactors f = iwasawa_decompose(g, sigma);
            const Matrix k = f.k.matrix().topLeftCorner(n + 1, n + 1);
            const Complex q = std::exp(Complex(0.0, a.dot(k.col(n))));
            const Matrix l = cov * k.leftCols(n);
            return detail::multilinear_tensor(n, std::exp(-mu * f.t) * q, l, alt);
          }};
}

/// Section with g-independent value. M-equivariance forces an M-invariant
/// tensor: a scalar, the volume form (p = n), or the pairing sum_j e_j (x) e_j.
inline EquivariantSection constant_equivariant_section(int n, int p, SectionSpace space,
                                                       Complex value = 1.0) {
  detail::check_space(n, p, space);
  Tensor t = Tensor::zeros(n, p);
  if (!detail::alternating(space)) {
    for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j * n + j)] = value;
  } else if (p == 0 || p == n) {
    t = detail::multilinear_tensor(n, value, Matrix::Identity(p, n), true);
  } else {
    throw ShapeError("constant sections must be M-invariant: use p = 0 or p = n");
  }
  return {n, p, space, [t](const GroupElement&) { return t; }};
}

// ---------------------------------------------------------------------------
// Derivatives. All are central differences of t -> u(g exp(t X)).

/// Step of a central difference; `richardson` combines steps h and h/2 into
/// a fourth-order estimate.
struct Stencil {
  double h = default_tolerances().fd_step;
  bool richardson = false;

  Stencil(double h_ = default_tolerances().fd_step, bool richardson_ = false)
      : h(h_), richardson(richardson_) {}
};

inline Tensor central_difference(const EquivariantSection& u, const AlgebraElement& x,
                                 const GroupElement& g, double h) {
  Tensor d = u(g * group_exp(h * x)) - u(g * group_exp(-h * x));
  d *= 1.0 / (2.0 * h);
  return d;
}

inline Tensor derivative_along(const EquivariantSection& u, const AlgebraElement& x,
                               const GroupElement& g, Stencil st) {
  if (!(st.h > 0.0)) throw ShapeError("finite-difference step must be positive");
  if (!st.richardson) return central_difference(u, x, g, st.h);
  Tensor fine = central_difference(u, x, g, 0.5 * st.h);
  fine *= 4.0 / 3.0;
  Tensor coarse = central_difference(u, x, g, st.h);
  coarse *= 1.0 / 3.0;
  return fine - coarse;
}

/// nabla_{X} u (g) for X in n+ + a + n-.
inline Tensor covariant_derivative(const EquivariantSection& u, const BruhatComponents& direction,
                                   const GroupElement& g, Stencil st = {}) {
  if (direction.m_part.size() != 0 && direction.m_part.cwiseAbs().maxCoeff() != 0.0)
    throw InvariantError("covariant derivative directions must have zero m-component");
  BruhatComponents dir = direction;
  dir.m_part = Matrix::Zero(u.n, u.n);
  return derivative_along(u, dir.assemble(), g, st);
}

inline BruhatComponents h0_direction(int n) {
  return {Matrix::Zero(n, n), 1.0, Vector::Zero(n), Vector::Zero(n)};
}

/// sigma of a Lambda^p n^sigma* section; throws for the other spaces.
inline Sign form_sign(const EquivariantSection& u) {
  if (u.space == SectionSpace::forms_plus) return Sign::plus;
  if (u.space == SectionSpace::forms_minus) return Sign::minus;
  throw ShapeError("Lie derivative along X is defined here for Lambda^p n^(+-)* sections only");
}

/// L_X u (g) = d/dt e^{-+ p t} u(g exp(t H0)) at t = 0, with -+ = -sigma.
inline Tensor lie_derivative_X(const EquivariantSection& u, const GroupElement& g,
                               double h = default_tolerances().fd_step) {
  const double sigma = to_double(form_sign(u));
  const int n = u.n;
  Tensor d = std::exp(-sigma * u.p * h) * u(g * exp_a(n, h)) -
             std::exp(sigma * u.p * h) * u(g * exp_a(n, -h));
  d *= 1.0 / (2.0 * h);
  return d;
}

/// Appends a slot: out(.., j') = sum_j parts[j](..) <U_j, embed_n(-, e_j')>.
inline Tensor append_dual_slot(const std::vector<Tensor>& parts,
                               const std::vector<AlgebraElement>& basis) {
  const int n = parts.front().n;
  Tensor out = Tensor::zeros(n, parts.front().rank + 1);
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (int jp = 0; jp < n; ++jp) {
      const double c = pairings(basis[j], embed_n(Sign::minus, Vector::Unit(n, jp))).inner;
      if (c == 0.0) continue;
      for (std::size_t idx = 0; idx < parts[j].size(); ++idx)
        out[idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(jp)] += c * parts[j][idx];
    }
  return out;
}

/// U_- u (g) = sum_j nabla_{U_j^-} u (g) (x) (U_j^-)^* for an orthonormal basis of n-.
inline Tensor horocycle_minus(const EquivariantSection& u, const GroupElement& g, Stencil st = {},
                              const std::vector<AlgebraElement>& basis = {}) {
  const std::vector<AlgebraElement>& b = basis.empty() ? standard_basis(u.n).uminus : basis;
  std::vector<Tensor> parts;
  parts.reserve(b.size());
  for (const AlgebraElement& x : b) parts.push_back(derivative_along(u, x, g, st));
  return append_dual_slot(parts, b);
}

/// The horocycle operator as a section in its own right (inner step h).
inline EquivariantSection horocycle_section(EquivariantSection u, double h) {
  const int n = u.n, p = u.p;
  const SectionSpace space = u.space;
  return {n, p + 1, space, [u = std::move(u), h](const GroupElement& g) { return horocycle_minus(u, g, h); }};
}

/// nabla_X applied to a section, as a section (step h).
inline EquivariantSection covariant_x_section(EquivariantSection u, double h) {
  const int n = u.n, p = u.p;
  const SectionSpace space = u.space;
  return {n, p, space, [u = std::move(u), h, n](const GroupElement& g) {
            return covariant_derivative(u, h0_direction(n), g, h);
          }};
}

/// Both sides of the commutation relation at g, by nested central differences.
struct CommutationTerms {
  Tensor commutator;  // nabla_X U_- u - U_- nabla_X u
  Tensor horocycle;   // U_- u
};

inline CommutationTerms commutation_terms(const EquivariantSection& u, const GroupElement& g,
                                          double h = default_tolerances().nested_fd_step) {
  const int n = u.n;
  const Tensor xu = covariant_derivative(horocycle_section(u, h), h0_direction(n), g, h);
  const Tensor ux = horocycle_minus(covariant_x_section(u, h), g, h);
  return {xu - ux, horocycle_minus(u, g, h)};
}

/// |(nabla_X U_- - U_- nabla_X - U_-) u (g)|, the relation as literally stated.
inline double commutation_defect(const EquivariantSection& u, const GroupElement& g,
                                 double h = default_tolerances().nested_fd_step) {
  const CommutationTerms t = commutation_terms(u, g, h);
  return (t.commutator - t.horocycle).max_abs();
}

/// |(nabla_X U_- - U_- nabla_X + U_-) u (g)|, the relation that
/// [H0, U^-] = -U^- actually implies.
inline double commutation_defect_corrected(const EquivariantSection& u, const GroupElement& g,
                                           double h = default_tolerances().nested_fd_step) {
  const CommutationTerms t = commutation_terms(u, g, h);
  return (t.commutator + t.horocycle).max_abs();
}

/// For u with u(g exp(t H0)) = e^{-mu t} u(g): relative defect of
/// U_- u (g exp(t H0)) = e^{-(mu + shift) t} U_- u (g).
inline double shift_exponent_defect(const EquivariantSection& u, double mu, double shift,
                                    const GroupElement& g, double t,
                                    double h = default_tolerances().fd_step) {
  const Tensor at_g = horocycle_minus(u, g, h);
  const Tensor moved = horocycle_minus(u, g * exp_a(u.n, t), h);
  const Tensor expected = std::exp(-(mu + shift) * t) * at_g;
  return (moved - expected).max_abs() / std::max(at_g.max_abs(), 1e-300);
}

// ---------------------------------------------------------------------------
// Fiber tensor split n-* (x) n-* = Sym_0 + Lambda^2 + R.

struct TensorSplit {
  Eigen::MatrixXcd sym0;
  Eigen::MatrixXcd antisym;
  Eigen::MatrixXcd trace_part;
};

inline TensorSplit tensor_split(const Eigen::MatrixXcd& t) {
  if (t.rows() != t.cols()) throw ShapeError("tensor_split needs a square matrix");
  const auto n = t.rows();
  const Eigen::MatrixXcd sym = 0.5 * (t + t.transpose());
  TensorSplit s;
  s.antisym = 0.5 * (t - t.transpose());
  s.trace_part = (t.trace() / static_cast<double>(n)) * Eigen::MatrixXcd::Identity(n, n);
  s.sym0 = sym - s.trace_part;
  return s;
}

/// Frobenius pairing sum conj(a) b.
inline Complex frobenius(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.conjugate().array() * b.array()).sum();
}

inline Eigen::MatrixXcd as_matrix(const Tensor& t) {
  if (t.rank != 2) throw ShapeError("as_matrix needs a rank-2 tensor");
  Eigen::MatrixXcd m(t.n, t.n);
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) m(i, j) = t[static_cast<std::size_t>(i * t.n + j)];
  return m;
}

}  // namespace hyperlie
