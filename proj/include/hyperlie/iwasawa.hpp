#pragma once

// Iwasawa (+) and opposite Iwasawa (-) decompositions g = k exp(t H0) exp(N_v).
//
// Null-vector method. With zeta(s) = e_pole + s e_time:
//   N^s fixes zeta(s), exp(tH0) zeta(s) = e^{s t} zeta(s), K fixes e_time,
//   exp(N^s_v) zeta(-s) = zeta(-s) + 2 v - |v|^2 zeta(s).
// So g zeta(s) gives t and the boundary point k e_pole; after removing a
// rotation k0 with the same pole image, g' = k0^{-1} g = m a n_v, and the
// m-block of g' zeta(-s) is 2 m v.

#include <cmath>
#include <string>

#include "hyperlie/lie_core.hpp"
#include "hyperlie/rotation.hpp"

namespace hyperlie {

struct IwasawaFactors {
  Sign sign;
  GroupElement k;
  double t;
  Vector v;
  double residual;  // |k a n - g|_F / |g|_F, or the K-defect of k if larger

  GroupElement a() const { return exp_a(k.n(), t); }
  GroupElement nil() const { return exp_root_space(sign, v); }
  GroupElement reassemble() const { return k * a() * nil(); }
};

inline Vector null_vector(int n, double s) {
  Vector z = Vector::Zero(n + 2);
  z(n) = 1.0;
  z(n + 1) = s;
  return z;
}

/// e^{s H^s(g)} = s (g zeta(s))_time. Only g's last row is needed.
inline double iwasawa_scale_from_row(const Eigen::Ref<const Eigen::RowVectorXd>& time_row, int n,
                                     double s) {
  return s * (time_row(n) + s * time_row(n + 1));
}

/// H^sign(g) without the full factorization.
inline double iwasawa_log_scale(const GroupElement& g, Sign sign,
                                const Tolerances& tol = default_tolerances()) {
  const int n = g.n();
  const double s = to_double(sign);
  const double scale = iwasawa_scale_from_row(g.matrix().row(n + 1), n, s);
  if (!(scale > 0.0))
    throw InvariantError("non-positive Iwasawa scale: element outside the identity component, "
                         "or |H| beyond double precision");
  const double t = s * std::log(scale);
  if (!(std::abs(t) <= tol.iwasawa_scale_cap))
    throw CapExceeded("|H(g)| = " + std::to_string(std::abs(t)) + " exceeds cap " +
                      std::to_string(tol.iwasawa_scale_cap));
  return t;
}

inline IwasawaFactors iwasawa_decompose(const GroupElement& g, Sign sign,
                                        const Tolerances& tol = default_tolerances()) {
  const int n = g.n();
  const double s = to_double(sign);
  const Matrix& mat = g.matrix();

  const double t = iwasawa_log_scale(g, sign, tol);
  const Vector image = mat * null_vector(n, s);
  Vector pole = image.head(n + 1) / (s * image(n + 1));
  pole /= pole.norm();

  const Matrix k0_block = pole_rotation(pole);
  const GroupElement k0 = embed_rotation(k0_block);
  const GroupElement reduced = embed_rotation(k0_block.transpose()) * g;

  const Vector w = 0.5 * (reduced.matrix() * null_vector(n, -s)).head(n);
  const GroupElement m = exp_root_space(sign, -w) * exp_a(n, -t) * reduced;
  const Matrix m_block = m.matrix().topLeftCorner(n, n);

  IwasawaFactors f{sign, k0 * embed_m_rotation(m_block), t, m_block.transpose() * w, 0.0};

  const double g_norm = mat.norm();
  const double reassembly = (f.reassemble().matrix() - mat).norm() / g_norm;
  const Matrix block = f.k.matrix().topLeftCorner(n + 1, n + 1);
  const double k_defect =
      (block.transpose() * block - Matrix::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff();
  f.residual = std::max(reassembly, k_defect);
  if (!(f.residual <= tol.reconstruction))
    throw InvariantError("Iwasawa reconstruction defect " + std::to_string(f.residual) +
                         " above tolerance (ill-conditioned input)");
  return f;
}

/// |H(g1 g2) - H(g1 k(g2)) - H(g2)|
inline double iwasawa_cocycle_defect(const GroupElement& g1, const GroupElement& g2, Sign sign,
                                     const Tolerances& tol = default_tolerances()) {
  const IwasawaFactors f2 = iwasawa_decompose(g2, sign, tol);
  const double h12 = iwasawa_decompose(g1 * g2, sign, tol).t;
  const double h1k = iwasawa_decompose(g1 * f2.k, sign, tol).t;
  return std::abs(h12 - h1k - f2.t);
}

}  // namespace hyperlie
