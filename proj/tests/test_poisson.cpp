#include <cmath>

#include <gtest/gtest.h>

#include "hyperlie/poisson.hpp"

using namespace hyperlie;

namespace {

const BoundarySection one2 = constant_section(2);

BoundarySection harmonic(int n, int l, int m) {
  return {n, 0, [h = spherical_harmonic(n, l, m)](const BoundaryPoint& b, std::span<const Vector>) {
            return h(b.coords());
          }};
}

}  // namespace

TEST(HyperbolicPoints, Invariants) {
  EXPECT_THROW(HyperbolicPoint(Vector{{0.0, 0.0, 2.0}}), InvariantError);
  EXPECT_THROW(HyperbolicPoint(Vector{{0.0, 0.0, -1.0}}), InvariantError);
  EXPECT_THROW(HyperbolicPoint(Vector{{1.0, 1.0}}), ShapeError);
  EXPECT_NO_THROW(HyperbolicPoint::at(Vector{{1.0, 2.0, 2.0}}, 3.0));
  EXPECT_NEAR(radius(HyperbolicPoint::at(Vector{{0.0, 1.0, 0.0}}, 1.7)), 1.7, 1e-12);
}

TEST(HyperbolicPoints, LiftAndDistance) {
  Rng rng = make_stream(60, "lift");
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      const HyperbolicPoint x = HyperbolicPoint::at(random_unit_vector(rng, n + 1), uniform(rng, 0, 3));
      const GroupElement g = lift_hyperbolic_point(x);
      EXPECT_LE((g.matrix().col(n + 1) - x.coords()).norm(), 1e-12 * x.time());
      const GroupElement h = random_group_element(rng, n);
      const HyperbolicPoint y = HyperbolicPoint::at(random_unit_vector(rng, n + 1), uniform(rng, 0, 3));
      EXPECT_NEAR(hyperbolic_distance(apply(h, x), apply(h, y)), hyperbolic_distance(x, y), 1e-9);
    }
  EXPECT_LE((lift_hyperbolic_point(HyperbolicPoint::base(2)).matrix() - Matrix::Identity(4, 4)).norm(), 0.0);
}

TEST(Kernel, ClosedFormMatchesDecomposition) {
  Rng rng = make_stream(61, "kernel");
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 30; ++trial) {
      const HyperbolicPoint x = HyperbolicPoint::at(random_unit_vector(rng, n + 1), uniform(rng, 0, 2));
      const BoundaryPoint b(random_unit_vector(rng, n + 1));
      const double fast = kernel_log_scale(x, b);
      EXPECT_NEAR(kernel_log_scale(lift_hyperbolic_point(x), b), fast, 1e-11);
      // any other g with g e_time = x
      const GroupElement other = lift_hyperbolic_point(x) * random_rotation(rng, n);
      EXPECT_NEAR(kernel_log_scale(other, b), fast, 1e-11);
    }
}

TEST(Transform, BasePointAndHarmonicMeasure) {
  const SphereQuadrature quad = sphere_quadrature(2, 24);
  for (Complex lambda : {Complex(0.7), Complex(1, 1), Complex(-2.5, 0.3)})
    EXPECT_NEAR(std::abs(PoissonTransform(lambda, one2, quad)(HyperbolicPoint::base(2)) - 1.0), 0.0, 1e-13);
  // lambda = n: the kernel is the Jacobian of the boundary action, so P 1 = 1 everywhere
  Rng rng = make_stream(62, "harmonic-measure");
  const PoissonTransform p(2.0, one2, sphere_quadrature(2, 48));
  for (const HyperbolicPoint& x : random_grid(2, 20, 2.0, rng))
    EXPECT_NEAR(std::abs(p(x) - 1.0), 0.0, 1e-9);
  // and it is not constant for other lambda
  EXPECT_GT(std::abs(PoissonTransform(0.7, one2, quad)(HyperbolicPoint::at(Vector::Unit(3, 0), 1.0)) - 1.0),
            0.1);
}

TEST(Transform, LiftIndependence) {
  Rng rng = make_stream(63, "g-choice");
  const SphereQuadrature quad = sphere_quadrature(2, 24);
  const BoundarySection f = harmonic(2, 1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const HyperbolicPoint x = HyperbolicPoint::at(random_unit_vector(rng, 3), uniform(rng, 0, 2));
    const GroupElement g1 = lift_hyperbolic_point(x);
    const GroupElement g2 = g1 * random_rotation(rng, 2);
    const Complex a = poisson_transform(0.7, f, g1, quad), b = poisson_transform(0.7, f, g2, quad);
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(a - PoissonTransform(0.7, f, quad)(x)), 0.0, 1e-9);
  }
}

TEST(Transform, DegreeSelfCheck) {
  const HyperbolicPoint far = HyperbolicPoint::at(Vector::Unit(3, 0), 2.0);
  EXPECT_THROW(poisson_transform_checked(2.0, harmonic(2, 1, 0), far, 2), QuadratureError);
  EXPECT_NO_THROW(poisson_transform_checked(0.7, harmonic(2, 1, 1), far, 24));
  EXPECT_THROW(PoissonTransform(0.7, constant_section(1), sphere_quadrature(2, 4)), ShapeError);
  EXPECT_THROW(PoissonTransform(0.7, coordinate_form(2, 1, {0}), sphere_quadrature(2, 4)), ShapeError);
}

TEST(Laplacian, ConstantsLinearityAndRange) {
  const HyperbolicPoint x = HyperbolicPoint::at(Vector{{0.3, -0.4, 0.5}}, 0.8);
  const auto c = [](const HyperbolicPoint&) { return Complex(3.0); };
  EXPECT_NEAR(std::abs(mean_value_laplacian(c, x, 0.02)), 0.0, 1e-9);
  const BoundaryPoint b0 = BoundaryPoint::normalized(Vector{{1.0, 0.0, 1.0}});
  const auto u = busemann_exponential(b0, 0.4), v = busemann_exponential(b0, Complex(1, 2));
  const auto w = [&](const HyperbolicPoint& y) { return 2.0 * u(y) - Complex(0, 3) * v(y); };
  const Complex lhs = mean_value_laplacian(w, x, 0.02);
  const Complex rhs = 2.0 * mean_value_laplacian(u, x, 0.02) - Complex(0, 3) * mean_value_laplacian(v, x, 0.02);
  EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::abs(lhs));
  EXPECT_THROW(mean_value_laplacian(c, x, 0.0), ShapeError);
  EXPECT_THROW(mean_value_laplacian(c, x, 0.2), ShapeError);
}

TEST(Laplacian, HorosphericalEigenfunctions) {
  // (x_time + x_space . b0)^{-s} has eigenvalue s (n - s)
  Rng rng = make_stream(64, "busemann");
  for (int n = 1; n <= 3; ++n)
    for (Complex s : {Complex(0.3), Complex(1.5), Complex(0.5, 2.0)}) {
      const BoundaryPoint b0(random_unit_vector(rng, n + 1));
      const auto u = busemann_exponential(b0, s);
      const Complex eigenvalue = s * (static_cast<double>(n) - s);
      for (const HyperbolicPoint& x : random_grid(n, 5, 2.0, rng)) {
        const Complex lap = mean_value_laplacian(u, x, 0.02);
        EXPECT_LE(std::abs(lap - eigenvalue * u(x)), 1e-3 * std::abs(eigenvalue * u(x)) + 1e-9);
      }
      // the reciprocal exponential e^{-s H} has eigenvalue -s (n + s) instead
      const auto inverse = [&](const HyperbolicPoint& x) { return 1.0 / u(x); };
      const HyperbolicPoint x = HyperbolicPoint::at(random_unit_vector(rng, n + 1), 1.0);
      const Complex other = -s * (static_cast<double>(n) + s);
      EXPECT_LE(std::abs(mean_value_laplacian(inverse, x, 0.02) - other * inverse(x)),
                1e-3 * std::abs(other * inverse(x)));
    }
}

TEST(Laplacian, ConcentratedDataApproachesHorosphericalFunction) {
  // a narrow bump at b0 makes P_lambda f proportional to e^{lambda H^-(g^{-1} k0)}
  const int n = 2;
  const SphereQuadrature quad = sphere_quadrature(n, 60);
  const BoundarySection f{n, 0, [h = bump(n, n, 0.08)](const BoundaryPoint& b, std::span<const Vector>) {
                            return h(b.coords());
                          }};
  const PoissonTransform p(0.7, f, quad);
  const auto u = busemann_exponential(BoundaryPoint::pole(n), 0.7);
  const HyperbolicPoint o = HyperbolicPoint::base(n);
  Rng rng = make_stream(65, "delta");
  for (const HyperbolicPoint& x : random_grid(n, 10, 1.0, rng))
    EXPECT_NEAR(std::abs(p(x) / p(o) - u(x) / u(o)), 0.0, 5e-2 * std::abs(u(x) / u(o)));
}

TEST(EigenLaw, CalibrationPicksPlusSign) {
  Rng rng = make_stream(66, "calibration");
  const auto grid = random_grid(2, 20, 2.0, rng);
  const KernelCalibration c =
      calibrate_kernel_sign(0.7, harmonic(2, 1, 0), grid, sphere_quadrature(2, 24), 0.02, 5e-3);
  EXPECT_LE(c.residual_plus, 5e-3);
  EXPECT_GT(c.residual_minus, 0.5);
  EXPECT_EQ(c.chosen, kKernelSign);
}

TEST(EigenLaw, ResidualsOnTheGrid) {
  Rng rng = make_stream(67, "eigen");
  const auto grid = random_grid(2, 100, 2.0, rng);
  const SphereQuadrature quad = sphere_quadrature(2, 24);
  EXPECT_LE(eigen_residual(2.0, one2, grid, quad, 0.02), 1e-3);
  EXPECT_LE(eigen_residual(0.7, harmonic(2, 1, 1), grid, quad, 0.02), 5e-3);
  EXPECT_LE(eigen_residual(Complex(1, 1), harmonic(2, 1, -1), grid, quad, 0.02), 5e-3);
  EXPECT_LE(eigen_residual(Complex(1, 1), harmonic(2, 2, 1), grid, quad, 0.02), 5e-3);
  const std::vector<HyperbolicPoint> too_far{HyperbolicPoint::at(Vector::Unit(3, 0), 2.5)};
  EXPECT_THROW(eigen_residual(0.7, one2, too_far, quad, 0.02), ShapeError);
}

TEST(EigenLaw, OtherDimensions) {
  Rng rng = make_stream(68, "dims");
  EXPECT_LE(eigen_residual(0.4, harmonic(1, 2, 0), random_grid(1, 20, 2.0, rng), sphere_quadrature(1, 24), 0.02),
            5e-3);
  EXPECT_LE(eigen_residual(Complex(1.5, 0.5), harmonic(3, 1, 0), random_grid(3, 3, 1.5, rng),
                           sphere_quadrature(3, 10), 0.02),
            5e-3);
}

TEST(Equivariance, MatchedPrincipalSeriesParameter) {
  Rng rng = make_stream(69, "equivariance");
  const auto grid = random_grid(2, 20, 1.5, rng);
  const SphereQuadrature quad = sphere_quadrature(2, 24);
  for (Complex lambda : {Complex(0.7), Complex(1, 1)}) {
    const GroupElement h = random_group_element(rng, 2, 0.3);
    EXPECT_LE(equivariance_defect(lambda, harmonic(2, 1, 1), h, grid, quad), 1e-6);
    EXPECT_LE(equivariance_defect(lambda, harmonic(2, 2, 0), random_rotation(rng, 2), grid, quad), 1e-10);
  }
}

TEST(Convergence, DoublingDegree) {
  Rng rng = make_stream(70, "convergence");
  const auto grid = random_grid(2, 20, 2.0, rng);
  EXPECT_LE(quadrature_convergence(0.7, harmonic(2, 1, 0), grid, 24), 1e-6);
  EXPECT_LE(quadrature_convergence(Complex(1, 1), harmonic(2, 2, -2), grid, 24), 1e-6);
}

TEST(Grids, Specs) {
  Rng rng = make_stream(71, "grid");
  EXPECT_EQ(grid_from_spec(2, "base", rng).size(), 1U);
  const auto ray = grid_from_spec(2, "ray:5,2", rng);
  ASSERT_EQ(ray.size(), 5U);
  EXPECT_NEAR(radius(ray.back()), 2.0, 1e-12);
  EXPECT_NEAR(radius(ray.front()), 0.0, 1e-12);
  const auto rnd = grid_from_spec(3, "random:7,1.5", rng);
  ASSERT_EQ(rnd.size(), 7U);
  for (const HyperbolicPoint& x : rnd) EXPECT_LE(radius(x), 1.5 + 1e-12);
  for (const char* bad : {"random:3", "ray:x,1", "cube:3,1", "random:2.5,1", "random:-1,1", "random:3:1"})
    EXPECT_THROW(grid_from_spec(2, bad, rng), ShapeError) << bad;
}
