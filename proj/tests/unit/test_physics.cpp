#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace nchns;

TEST(Physics, PotentialDerivativesMatchFiniteDifferences) {
  const Potential f(1.3, 0.2);
  const double h = 1e-5;
  for (double s : {-2.0, -0.7, 0.0, 0.4, 1.9}) {
    EXPECT_NEAR(f.d1(s), (f.F(s + h) - f.F(s - h)) / (2 * h), 1e-8);
    EXPECT_NEAR(f.d2(s), (f.d1(s + h) - f.d1(s - h)) / (2 * h), 1e-8);
    EXPECT_NEAR(f.d3(s), (f.d2(s + h) - f.d2(s - h)) / (2 * h), 1e-8);
  }
  EXPECT_DOUBLE_EQ(f.concavity(), 1.3);
  EXPECT_DOUBLE_EQ(-f.d2(0.0), f.concavity());
}

TEST(Physics, ViscosityDerivativeAndBounds) {
  const Viscosity nu;
  const double h = 1e-6;
  for (double s : {-5.0, -0.3, 0.0, 0.8, 3.0}) {
    EXPECT_NEAR(nu.d1(s), (nu.nu(s + h) - nu.nu(s - h)) / (2 * h), 1e-8);
    EXPECT_GE(nu.nu(s), nu.lower);
    EXPECT_LE(nu.nu(s), nu.upper);
  }
}

TEST(Physics, AutoScaleHitsTheFloor) {
  const Grid2D g(32, 32, 16.0, 16.0);
  const PhysicsParams p;
  const Kernel k = auto_scale_kernel(Kernel::gaussian(g, 1.0, 1.0), p.potential, p.constants.c1);
  EXPECT_NEAR(k.min_a(), p.potential.concavity() + p.constants.c1, 1e-13);
}

TEST(Physics, DefaultsPassHypotheses) {
  const testutil::Setting s(32);
  const auto h2 = validate_H2(s.phys.potential, s.kernel, s.phys.constants);
  EXPECT_TRUE(h2.pass());
  EXPECT_EQ(h2.conditions.size(), 3u);
  EXPECT_TRUE(validate_H3(s.phys.viscosity).pass());
}

// Negative controls: an unscaled kernel cannot dominate the concavity of F,
// and a viscosity band that excludes the sampled range fails.
TEST(Physics, ValidatorsRejectViolations) {
  const Grid2D g(16, 16, 16.0, 16.0);
  const PhysicsParams p;
  const Kernel weak = Kernel::gaussian(g, 1e-3, 1.0);
  const auto h2 = validate_H2(p.potential, weak, p.constants);
  EXPECT_FALSE(h2.pass());
  bool coercivity_failed = false;
  for (const auto& c : h2.conditions)
    if (c.name == "coercivity") coercivity_failed = !c.pass;
  EXPECT_TRUE(coercivity_failed);

  Viscosity nu;
  nu.lower = 0.8;
  EXPECT_FALSE(validate_H3(nu).pass());
}

TEST(Physics, ConstantsValidation) {
  HypothesisConstants c;
  EXPECT_NO_THROW(c.validate());
  c.p = 2.0;
  EXPECT_THROW(c.validate(), HypothesisViolation);
  c = HypothesisConstants{};
  c.r = 2.5;
  EXPECT_THROW(c.validate(), HypothesisViolation);
}

TEST(Physics, FreeEnergySplitsIntoNonlocalAndLocal) {
  const testutil::Setting s(16);
  const auto phi = testutil::random_scalar(s.g, 3);
  EXPECT_NEAR(free_energy(phi, s.kernel, s.phys.potential),
              nonlocal_interaction_energy(s.kernel, phi) + potential_energy(phi, s.phys.potential), 1e-10);
}

TEST(Physics, ChemicalPotentialDefinition) {
  const testutil::Setting s(16);
  const auto phi = testutil::random_scalar(s.g, 4);
  const ScalarField mu = chemical_potential(phi, s.kernel, s.phys.potential);
  const ScalarField expect =
      hadamard(s.kernel.a_field(), phi) - convolve(s.kernel, phi) + s.phys.potential.d1(phi);
  for (std::size_t i = 0; i < mu.size(); ++i) EXPECT_NEAR(mu.values[i], expect.values[i], 1e-12);
}
