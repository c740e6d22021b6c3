#pragma once

// Constitutive laws: quartic double well, phase-dependent viscosity, the
// chemical potential, and sampling validators for the structural hypotheses.

#include <string>
#include <vector>

#include "nchns/grid.hpp"
#include "nchns/nonlocal.hpp"

namespace nchns {

/// F(s) = (c4/4)(s^2 - 1)^2 + offset.
struct Potential {
  double c4 = 1.0;
  double offset = 0.0;

  Potential() = default;
  explicit Potential(double c4_, double offset_ = 0.0);

  double F(double s) const { return 0.25 * c4 * (s * s - 1.0) * (s * s - 1.0) + offset; }
  double d1(double s) const { return c4 * s * (s * s - 1.0); }
  double d2(double s) const { return c4 * (3.0 * s * s - 1.0); }
  double d3(double s) const { return 6.0 * c4 * s; }
  double d4(double) const { return 6.0 * c4; }

  /// Largest -F''(s) over all s, i.e. how much a(x) must compensate.
  double concavity() const { return c4; }

  ScalarField F(const ScalarField& phi) const;
  ScalarField d1(const ScalarField& phi) const;
  ScalarField d2(const ScalarField& phi) const;
  ScalarField d3(const ScalarField& phi) const;
};

/// nu(s) = mean + delta * tanh(s), expected inside [lower, upper].
struct Viscosity {
  double mean = 1.0;
  double delta = 0.5;
  double lower = 0.4;
  double upper = 1.6;

  double nu(double s) const;
  double d1(double s) const;
  double d2(double s) const;

  ScalarField nu(const ScalarField& phi) const;
  ScalarField d1(const ScalarField& phi) const;
};

struct HypothesisConstants {
  double c1 = 0.1;
  double c2 = 1.0;
  double c3 = 1.0;
  double c4 = 5.0;
  double c5 = 1.0;
  double p = 4.0;
  double r = 4.0 / 3.0;

  /// Throws HypothesisViolation unless c1..c4 > 0, c5 >= 0, p > 2, 1 < r <= 2.
  void validate() const;
};

struct PhysicsParams {
  Potential potential;
  Viscosity viscosity;
  HypothesisConstants constants;
};

/// mu = a phi - K * phi + F'(phi).
ScalarField chemical_potential(const ScalarField& phi, const Kernel& k, const Potential& f);

/// Kernel rescaled so that min_x a(x) = concavity(F) + c1.
Kernel auto_scale_kernel(const Kernel& k, const Potential& f, double c1);

struct ConditionResult {
  std::string name;
  bool pass = false;
  double worst_s = 0.0;       // sample where the margin is smallest
  double worst_margin = 0.0;  // lhs - rhs at that sample (>= 0 means satisfied)
};

struct HypothesisReport {
  double s_min = -10.0;
  double s_max = 10.0;
  int samples = 0;
  double min_a = 0.0;
  std::vector<ConditionResult> conditions;
  bool pass() const;
};

/// Samples s uniformly on [s_min, s_max] and checks the three growth and
/// coercivity conditions on F against min_x a(x).
HypothesisReport validate_H2(const Potential& f, const Kernel& k, const HypothesisConstants& c,
                             double s_min = -10.0, double s_max = 10.0, int samples = 10000);

/// Bounds on nu: analytic check of mean -+ |delta| plus dense sampling.
HypothesisReport validate_H3(const Viscosity& nu, double s_min = -10.0, double s_max = 10.0,
                             int samples = 10000);

/// Local part of the free energy, int F(phi).
double potential_energy(const ScalarField& phi, const Potential& f);
/// 1/2 (a phi, phi) - 1/2 (K * phi, phi) + int F(phi).
double free_energy(const ScalarField& phi, const Kernel& k, const Potential& f);

}  // namespace nchns
