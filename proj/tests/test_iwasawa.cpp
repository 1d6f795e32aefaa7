#include <cmath>

#include <gtest/gtest.h>

#include "hyperlie/iwasawa.hpp"
#include "hyperlie/random.hpp"

using namespace hyperlie;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

struct Case {
  int n;
  Sign sign;
};

class Decompose : public ::testing::TestWithParam<Case> {};

}  // namespace

TEST_P(Decompose, IdentityAndPureNilpotent) {
  const auto [n, sign] = GetParam();
  const IwasawaFactors id = iwasawa_decompose(GroupElement::identity(n), sign);
  EXPECT_LE(max_abs(id.k.matrix() - Matrix::Identity(n + 2, n + 2)), 1e-15);
  EXPECT_EQ(id.t, 0.0);
  EXPECT_LE(id.v.norm(), 1e-15);

  Rng rng = make_stream(20, "nil");
  const Vector v = random_gaussian(rng, n);
  const IwasawaFactors f = iwasawa_decompose(group_exp(embed_n(sign, v)), sign);
  EXPECT_LE(max_abs(f.k.matrix() - Matrix::Identity(n + 2, n + 2)), 1e-14);
  EXPECT_NEAR(f.t, 0.0, 1e-14);
  EXPECT_LE((f.v - v).norm(), 1e-13);
}

TEST_P(Decompose, RecoversForwardConstructedFactors) {
  const auto [n, sign] = GetParam();
  Rng rng = make_stream(21, "forward");
  for (int trial = 0; trial < 300; ++trial) {
    const GroupElement k0 = random_rotation(rng, n);
    const double t0 = uniform(rng, -3.0, 3.0);
    const Vector v0 = random_gaussian(rng, n);
    const GroupElement g = k0 * exp_a(n, t0) * exp_root_space(sign, v0);
    const IwasawaFactors f = iwasawa_decompose(g, sign);
    EXPECT_LE(max_abs(f.k.matrix() - k0.matrix()), 1e-9);
    EXPECT_NEAR(f.t, t0, 1e-9);
    EXPECT_LE((f.v - v0).norm(), 1e-9);
    EXPECT_LE(f.residual, 1e-11);
  }
}

TEST_P(Decompose, RoundTripOnGenericElements) {
  const auto [n, sign] = GetParam();
  Rng rng = make_stream(22, "roundtrip");
  for (int trial = 0; trial < 300; ++trial) {
    const GroupElement g = random_group_element(rng, n, 0.8);
    const IwasawaFactors f = iwasawa_decompose(g, sign);
    EXPECT_LE((f.reassemble().matrix() - g.matrix()).norm() / g.matrix().norm(), 1e-9);
    const Matrix block = f.k.matrix().topLeftCorner(n + 1, n + 1);
    EXPECT_NEAR(block.determinant(), 1.0, 1e-10);
    EXPECT_LE(max_abs(block.transpose() * block - Matrix::Identity(n + 1, n + 1)), 1e-10);
    EXPECT_NEAR(iwasawa_log_scale(g, sign), f.t, 1e-15);
  }
}

TEST_P(Decompose, MStabilityAndAEquivariance) {
  const auto [n, sign] = GetParam();
  Rng rng = make_stream(23, "equivariance");
  for (int trial = 0; trial < 50; ++trial) {
    const GroupElement g = random_group_element(rng, n);
    const GroupElement m = random_m_element(rng, n);
    const double s = uniform(rng, -2.0, 2.0);
    const IwasawaFactors f = iwasawa_decompose(g, sign);
    const IwasawaFactors fm = iwasawa_decompose(g * m, sign);
    EXPECT_NEAR(fm.t, f.t, 1e-10);
    EXPECT_LE(max_abs(fm.k.matrix() - (f.k * m).matrix()), 1e-10);
    // H^{s}(g a_s) = H(g) + s: a normalizes N^sign and commutes with A
    EXPECT_NEAR(iwasawa_decompose(g * exp_a(n, s), sign).t, f.t + s, 1e-10);
  }
}

TEST_P(Decompose, Cocycle) {
  const auto [n, sign] = GetParam();
  Rng rng = make_stream(24, "cocycle");
  EXPECT_EQ(iwasawa_cocycle_defect(GroupElement::identity(n), GroupElement::identity(n), sign), 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    const GroupElement g1 = random_group_element(rng, n), g2 = random_group_element(rng, n);
    EXPECT_LE(iwasawa_cocycle_defect(g1, g2, sign), 1e-9);
    EXPECT_LE(iwasawa_cocycle_defect(random_rotation(rng, n), g2, sign), 1e-12);
  }
}

TEST(Iwasawa, ScaleCap) {
  EXPECT_THROW(iwasawa_decompose(exp_a(2, 55.0), Sign::plus), CapExceeded);
  EXPECT_THROW(iwasawa_decompose(exp_a(2, -55.0), Sign::minus), CapExceeded);
}

TEST(Iwasawa, ScalesAfterAHalfTurn) {
  // the half-turn swaps zeta(+) and -zeta(-), flipping the sign of t for both decompositions
  const GroupElement a = exp_a(2, 0.4);
  EXPECT_NEAR(iwasawa_log_scale(a, Sign::plus), 0.4, 1e-15);
  EXPECT_NEAR(iwasawa_log_scale(a, Sign::minus), 0.4, 1e-15);
  const GroupElement half_turn = [] {
    Matrix r = Matrix::Identity(3, 3);
    r(0, 0) = r(2, 2) = -1.0;
    return embed_rotation(r);
  }();
  EXPECT_NEAR(iwasawa_log_scale(a * half_turn, Sign::minus), -0.4, 1e-15);
  EXPECT_NEAR(iwasawa_log_scale(a * half_turn, Sign::plus), -0.4, 1e-15);
}

INSTANTIATE_TEST_SUITE_P(All, Decompose,
                         ::testing::Values(Case{1, Sign::plus}, Case{1, Sign::minus},
                                           Case{2, Sign::plus}, Case{2, Sign::minus},
                                           Case{3, Sign::plus}, Case{3, Sign::minus}),
                         [](const auto& info) {
                           return "n" + std::to_string(info.param.n) +
                                  (info.param.sign == Sign::plus ? "plus" : "minus");
                         });
