#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hyperlie {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Which of the two Iwasawa decompositions (or root spaces) is meant.
/// `plus` pairs with n+ (root +alpha0), `minus` with n- (root -alpha0).
enum class Sign : int { plus = 1, minus = -1 };

constexpr double to_double(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
constexpr Sign opposite(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline const char* to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

/// Every numerical threshold used by the library, in one place.
struct Tolerances {
  double algebra_membership = 1e-12;  // |X^T J + J X| entrywise
  double skew_payload = 1e-12;        // skew-symmetry of m/k payloads
  double group_invariant = 1e-10;     // J-orthogonality / det of trusted group elements
  double group_acceptance = 1e-8;     // check_group_membership on foreign matrices
  double unit_vector = 1e-12;         // |b| = 1
  double tangent = 1e-12;             // w . b = 0
  double hyperboloid = 1e-10;         // x^T J x = -1
  double reconstruction = 1e-9;       // Iwasawa reassembly defect (relative)
  double exp_norm_cap = 50.0;         // Frobenius norm cap for group_exp
  double iwasawa_scale_cap = 50.0;    // |H^{+-}(g)| cap
  double fd_step = 1e-5;              // central differences, single level
  double nested_fd_step = 1e-4;       // central differences, nested
  double quadrature_self_check = 1e-5;
  double flow_time_cap = 50.0;        // |t| for geodesic_flow / flow_derivative
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

/// Input violates a documented invariant of a domain type.
class InvariantError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Shapes or dimensions of arguments do not fit together.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured magnitude cap would be exceeded.
class CapExceeded : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace hyperlie
