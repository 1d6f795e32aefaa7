#include <cmath>

#include <gtest/gtest.h>

#include "hyperlie/flow_calculus.hpp"

using namespace hyperlie;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double minkowski(const Vector& x, const Vector& y) {
  const auto n = x.size() - 1;
  return x.head(n).dot(y.head(n)) - x(n) * y(n);
}

BruhatComponents tangent(const Vector& plus, double a, const Vector& minus) {
  const auto n = plus.size();
  return {Matrix::Zero(n, n), a, plus, minus};
}

}  // namespace

TEST(Flow, GroupLawAndCap) {
  Rng rng = make_stream(40, "flow");
  for (int n = 1; n <= 3; ++n) {
    const FlowPoint x{random_group_element(rng, n)};
    EXPECT_LE(max_abs(geodesic_flow(0.0, x).g.matrix() - x.g.matrix()), 0.0);
    const Matrix twice = geodesic_flow(0.3, geodesic_flow(0.9, x)).g.matrix();
    EXPECT_LE(max_abs(twice - geodesic_flow(1.2, x).g.matrix()) / max_abs(twice), 1e-13);
  }
  EXPECT_THROW(geodesic_flow(50.5, FlowPoint{GroupElement::identity(2)}), CapExceeded);
  EXPECT_NO_THROW(geodesic_flow(-50.0, FlowPoint{GroupElement::identity(2)}));
}

TEST(Flow, BasePointTracesUnitSpeedGeodesic) {
  Rng rng = make_stream(41, "unit-speed");
  const double h = 1e-4;
  for (int n = 1; n <= 3; ++n) {
    const FlowPoint x{random_group_element(rng, n)};
    for (double t : {-1.0, 0.0, 0.7}) {
      const Vector fwd = observe(geodesic_flow(t + h, x)).position;
      const Vector back = observe(geodesic_flow(t - h, x)).position;
      const Vector mid = observe(geodesic_flow(t, x)).position;
      const Vector vel = (fwd - back) / (2 * h);
      EXPECT_NEAR(minkowski(vel, vel), 1.0, 1e-7);
      EXPECT_NEAR(minkowski(mid, mid), -1.0, 1e-12);
      // geodesic equation on the hyperboloid: x'' = x
      const Vector acc = (fwd - 2 * mid + back) / (h * h);
      EXPECT_LE((acc - mid).norm() / mid.norm(), 1e-5);
    }
  }
}

TEST(Flow, ObservablesAreMInvariant) {
  Rng rng = make_stream(42, "m-invariant");
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      const GroupElement g = random_group_element(rng, n), m = random_m_element(rng, n);
      const double t = uniform(rng, -3, 3);
      const FlowObservables a = observe(geodesic_flow(t, FlowPoint{g}));
      const FlowObservables b = observe(geodesic_flow(t, FlowPoint{g * m}));
      EXPECT_LE((a.position - b.position).norm() / a.position.norm(), 1e-12);
      EXPECT_LE((a.velocity - b.velocity).norm() / a.velocity.norm(), 1e-12);
    }
}

TEST(Flow, DerivativeRatesAndComposition) {
  Rng rng = make_stream(43, "rates");
  for (int n = 1; n <= 3; ++n) {
    const GroupElement g = random_group_element(rng, n);
    const Vector vp = random_gaussian(rng, n), vm = random_gaussian(rng, n);
    const double t = 1.3, a = 0.4;
    const ModelTangent out = flow_derivative(t, ModelTangent(g, tangent(vp, a, vm)));
    EXPECT_LE((out.v.nplus - std::exp(-t) * vp).norm(), 1e-12 * std::exp(t));
    EXPECT_LE((out.v.nminus - std::exp(t) * vm).norm(), 1e-12 * std::exp(t));
    EXPECT_NEAR(out.v.a_part, a, 1e-12);
    EXPECT_LE(max_abs(out.g.matrix() - (g * exp_a(n, t)).matrix()), 0.0);

    const ModelTangent two = flow_derivative(0.5, flow_derivative(-0.8, ModelTangent(g, tangent(vp, a, vm))));
    const ModelTangent one = flow_derivative(-0.3, ModelTangent(g, tangent(vp, a, vm)));
    EXPECT_LE(max_abs(two.v.assemble().matrix() - one.v.assemble().matrix()), 1e-10);
  }
  const GroupElement id = GroupElement::identity(2);
  BruhatComponents bad = tangent(Vector::Zero(2), 0.0, Vector::Zero(2));
  bad.m_part(0, 1) = 1.0;
  bad.m_part(1, 0) = -1.0;
  EXPECT_THROW(ModelTangent(id, bad), InvariantError);
  EXPECT_THROW(flow_derivative(51.0, ModelTangent(id, tangent(Vector::Ones(2), 0.0, Vector::Ones(2)))),
               CapExceeded);
}

TEST(Sections, MEquivariance) {
  Rng rng = make_stream(44, "sections");
  for (int n = 1; n <= 3; ++n)
    for (auto space : {SectionSpace::forms_plus, SectionSpace::forms_minus, SectionSpace::plus_minus,
                       SectionSpace::minus_minus}) {
      const int p = (space == SectionSpace::plus_minus || space == SectionSpace::minus_minus) ? 2 : std::min(n, 2);
      const EquivariantSection u = matrix_coefficient_section(rng, n, p, space);
      const EquivariantSection w = a_eigen_section(rng, n, p, space, 0.6, Sign::plus);
      for (int trial = 0; trial < 10; ++trial) {
        const GroupElement g = random_group_element(rng, n), m = random_m_element(rng, n);
        EXPECT_LE(m_equivariance_defect(u, g, m), 1e-10);
        EXPECT_LE(m_equivariance_defect(w, g, m), 1e-10);
      }
    }
}

TEST(Sections, TransformSlotsOracle) {
  // direct evaluation of T(m v1, m v2) against the slot transform
  Rng rng = make_stream(45, "slots");
  Tensor t = Tensor::zeros(3, 2);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
  const Matrix m = random_m_element(rng, 3).matrix().topLeftCorner(3, 3);
  const Tensor moved = transform_slots(t, m);
  const Vector v1 = random_gaussian(rng, 3), v2 = random_gaussian(rng, 3);
  auto apply = [](const Tensor& x, const Vector& a, const Vector& b) {
    Complex s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += x[static_cast<std::size_t>(i * 3 + j)] * a(i) * b(j);
    return s;
  };
  EXPECT_LE(std::abs(apply(moved, v1, v2) - apply(t, m * v1, m * v2)), 1e-13);
}

TEST(Derivatives, ConstantSectionsAreFlat) {
  for (int n = 1; n <= 2; ++n) {
    const EquivariantSection c = constant_equivariant_section(n, n, SectionSpace::forms_minus, 2.0);
    Rng rng = make_stream(46, "flat");
    const GroupElement g = random_group_element(rng, n);
    EXPECT_LE(covariant_derivative(c, h0_direction(n), g).max_abs(), 0.0);
    EXPECT_LE(horocycle_minus(c, g).max_abs(), 0.0);
    EXPECT_LE(commutation_defect(c, g), 0.0);
  }
  EXPECT_THROW(constant_equivariant_section(3, 1, SectionSpace::forms_plus), ShapeError);
}

TEST(Derivatives, AnalyticAScaling) {
  Rng rng = make_stream(47, "a-scaling");
  for (int n = 1; n <= 3; ++n)
    for (Sign sigma : {Sign::plus, Sign::minus}) {
      const double mu = uniform(rng, -1.5, 1.5);
      const EquivariantSection u = a_eigen_section(rng, n, 1, SectionSpace::forms_plus, mu, sigma);
      const GroupElement g = random_group_element(rng, n);
      const Tensor d = covariant_derivative(u, h0_direction(n), g);
      EXPECT_LE((d - Complex(-mu) * u(g)).max_abs(), 1e-8 * std::max(1.0, u(g).max_abs()));
      // exact scaling, no finite differences
      EXPECT_LE((u(g * exp_a(n, 0.8)) - Complex(std::exp(-0.8 * mu)) * u(g)).max_abs(),
                1e-10 * u(g).max_abs());
    }
}

TEST(Derivatives, CovariantDerivativeMatchesAnalyticFormula) {
  // u(g) = det-free p=1 coefficient c^T g e_j: derivative along X is c^T g X e_j
  Rng rng = make_stream(48, "coefficient");
  const int n = 2;
  const Matrix cov = random_gaussian(rng, n + 2).transpose();
  const EquivariantSection u{n, 1, SectionSpace::forms_plus, [cov, n](const GroupElement& g) {
                               return detail::multilinear_tensor(n, 1.0, cov * g.matrix().leftCols(n), true);
                             }};
  const GroupElement g = random_group_element(rng, n);
  const BruhatComponents dir = tangent(random_gaussian(rng, n), 0.7, random_gaussian(rng, n));
  const Tensor fd = covariant_derivative(u, dir, g);
  const Matrix exact = cov * g.matrix() * dir.assemble().matrix().leftCols(n);
  for (int j = 0; j < n; ++j) EXPECT_NEAR(std::abs(fd[static_cast<std::size_t>(j)] - exact(0, j)), 0.0, 1e-9);
  BruhatComponents with_m = dir;
  with_m.m_part = Matrix::Zero(n, n);
  with_m.m_part(0, 1) = 0.5;
  with_m.m_part(1, 0) = -0.5;
  EXPECT_THROW(covariant_derivative(u, with_m, g), InvariantError);
}

TEST(Derivatives, LieMinusCovariantIsShift) {
  Rng rng = make_stream(49, "shift451");
  for (int p : {0, 1, 2})
    for (auto space : {SectionSpace::forms_plus, SectionSpace::forms_minus}) {
      const double sigma = space == SectionSpace::forms_plus ? 1.0 : -1.0;
      for (int trial = 0; trial < 5; ++trial) {
        const EquivariantSection u = matrix_coefficient_section(rng, 2, p, space);
        const GroupElement g = random_group_element(rng, 2);
        const Tensor diff = lie_derivative_X(u, g) - covariant_derivative(u, h0_direction(2), g);
        EXPECT_LE((diff + Complex(sigma * p) * u(g)).max_abs(), 1e-6);
      }
    }
  const EquivariantSection c = constant_equivariant_section(1, 1, SectionSpace::forms_plus, 3.0);
  // L_X of a constant with sigma = +, p = 1 is -p times the constant
  EXPECT_NEAR(std::abs(lie_derivative_X(c, GroupElement::identity(1))[0] - Complex(-3.0)), 0.0, 1e-9);
  EXPECT_THROW(lie_derivative_X(matrix_coefficient_section(rng, 2, 2, SectionSpace::minus_minus),
                                GroupElement::identity(2)),
               ShapeError);
}

TEST(Horocycle, VanishesOnRightNMinusInvariantSections) {
  Rng rng = make_stream(50, "n-minus-invariant");
  for (int n = 1; n <= 3; ++n) {
    const EquivariantSection u = a_eigen_section(rng, n, 1, SectionSpace::forms_minus, 0.4, Sign::minus);
    const GroupElement g = random_group_element(rng, n);
    EXPECT_LE(horocycle_minus(u, g).max_abs(), 1e-8);
  }
}

TEST(Horocycle, BasisIndependence) {
  Rng rng = make_stream(51, "basis");
  for (int n = 2; n <= 3; ++n) {
    const EquivariantSection u = matrix_coefficient_section(rng, n, 1, SectionSpace::forms_minus);
    const GroupElement g = random_group_element(rng, n);
    const Matrix r = random_m_element(rng, n).matrix().topLeftCorner(n, n);
    std::vector<AlgebraElement> rotated;
    for (int j = 0; j < n; ++j) rotated.push_back(embed_n(Sign::minus, 0.5 * r.col(j)));
    const Stencil st(1e-3, true);
    EXPECT_LE((horocycle_minus(u, g, st) - horocycle_minus(u, g, st, rotated)).max_abs(), 1e-10);
  }
}

TEST(Horocycle, CommutationRelation) {
  Rng rng = make_stream(52, "commutation");
  for (int n = 1; n <= 2; ++n)
    for (int trial = 0; trial < 4; ++trial) {
      const EquivariantSection u = matrix_coefficient_section(rng, n, 1, SectionSpace::forms_minus);
      const GroupElement g = random_group_element(rng, n);
      const CommutationTerms t = commutation_terms(u, g);
      // [nabla_X, U_-] = -U_-
      EXPECT_LE(commutation_defect_corrected(u, g), 1e-4);
      // the + sign variant misses by 2 |U_- u|
      EXPECT_NEAR(commutation_defect(u, g), 2.0 * t.horocycle.max_abs(), 1e-4);
    }
}

TEST(Horocycle, ShiftExponent) {
  Rng rng = make_stream(53, "shift");
  for (int n = 1; n <= 3; ++n) {
    const double mu = 0.7;
    const EquivariantSection u = a_eigen_section(rng, n, 1, SectionSpace::forms_minus, mu, Sign::plus);
    const GroupElement g = random_group_element(rng, n);
    EXPECT_LE(shift_exponent_defect(u, mu, +1.0, g, 0.6), 1e-8);
    EXPECT_GT(shift_exponent_defect(u, mu, -1.0, g, 0.6), 0.5);
  }
}

TEST(TensorSplit, TrivialCases) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  TensorSplit s = tensor_split(id);
  EXPECT_LE(s.sym0.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE(s.antisym.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((s.trace_part - id).cwiseAbs().maxCoeff(), 1e-16);

  Eigen::MatrixXcd skew = Eigen::MatrixXcd::Zero(3, 3);
  skew(0, 1) = Complex(1, 2);
  skew(1, 0) = -skew(0, 1);
  s = tensor_split(skew);
  EXPECT_LE(s.sym0.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((s.antisym - skew).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE(s.trace_part.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(tensor_split(Eigen::MatrixXcd::Zero(2, 3)), ShapeError);
}

TEST(TensorSplit, ReassemblyAndOrthogonality) {
  Rng rng = make_stream(54, "split");
  for (int n = 1; n <= 4; ++n) {
    Eigen::MatrixXcd t(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(i, j) = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
    const TensorSplit s = tensor_split(t);
    EXPECT_LE((s.sym0 + s.antisym + s.trace_part - t).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE(std::abs(s.sym0.trace()), 1e-14);
    EXPECT_LE((s.sym0 - s.sym0.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE(std::abs(frobenius(s.sym0, s.antisym)), 1e-14);
    EXPECT_LE(std::abs(frobenius(s.sym0, s.trace_part)), 1e-14);
    EXPECT_LE(std::abs(frobenius(s.antisym, s.trace_part)), 1e-14);
  }
}
