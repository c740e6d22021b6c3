#include "nchns/physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nchns/error.hpp"

namespace nchns {

namespace {

template <class Fn>
ScalarField map(const ScalarField& phi, Fn&& fn) {
  ScalarField r(phi.grid);
  for (std::size_t k = 0; k < r.size(); ++k) r.values[k] = fn(phi.values[k]);
  return r;
}

// Scans s and keeps the sample with the smallest margin.
template <class Margin>
ConditionResult scan(const std::string& name, double s_min, double s_max, int n, Margin&& margin) {
  ConditionResult c;
  c.name = name;
  c.worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double s = n == 1 ? s_min : s_min + (s_max - s_min) * i / (n - 1);
    const double m = margin(s);
    if (m < c.worst_margin) {
      c.worst_margin = m;
      c.worst_s = s;
    }
  }
  c.pass = c.worst_margin >= 0.0;
  return c;
}

}  // namespace

Potential::Potential(double c4_, double offset_) : c4(c4_), offset(offset_) {
  if (!(c4 > 0.0)) throw HypothesisViolation("potential: c4 must be positive");
}

ScalarField Potential::F(const ScalarField& phi) const {
  return map(phi, [this](double s) { return F(s); });
}
ScalarField Potential::d1(const ScalarField& phi) const {
  return map(phi, [this](double s) { return d1(s); });
}
ScalarField Potential::d2(const ScalarField& phi) const {
  return map(phi, [this](double s) { return d2(s); });
}
ScalarField Potential::d3(const ScalarField& phi) const {
  return map(phi, [this](double s) { return d3(s); });
}

double Viscosity::nu(double s) const { return mean + delta * std::tanh(s); }

double Viscosity::d1(double s) const {
  const double c = 1.0 / std::cosh(s);
  return delta * c * c;
}

double Viscosity::d2(double s) const {
  const double c = 1.0 / std::cosh(s);
  return -2.0 * delta * std::tanh(s) * c * c;
}

ScalarField Viscosity::nu(const ScalarField& phi) const {
  return map(phi, [this](double s) { return nu(s); });
}
ScalarField Viscosity::d1(const ScalarField& phi) const {
  return map(phi, [this](double s) { return d1(s); });
}

void HypothesisConstants::validate() const {
  if (!(c1 > 0 && c2 > 0 && c3 > 0 && c4 > 0)) throw HypothesisViolation("hypotheses: c1..c4 must be positive");
  if (!(c5 >= 0)) throw HypothesisViolation("hypotheses: c5 must be nonnegative");
  if (!(p > 2)) throw HypothesisViolation("hypotheses: p must exceed 2");
  if (!(r > 1 && r <= 2)) throw HypothesisViolation("hypotheses: r must lie in (1, 2]");
}

ScalarField chemical_potential(const ScalarField& phi, const Kernel& k, const Potential& f) {
  ScalarField mu = hadamard(k.a_field(), phi);
  mu -= convolve(k, phi);
  mu += f.d1(phi);
  return mu;
}

Kernel auto_scale_kernel(const Kernel& k, const Potential& f, double c1) {
  const double ma = k.min_a();
  if (!(ma > 0.0)) throw HypothesisViolation("auto-scale: kernel has min a <= 0, cannot rescale");
  return k.scaled((f.concavity() + c1) / ma);
}

bool HypothesisReport::pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.pass; });
}

HypothesisReport validate_H2(const Potential& f, const Kernel& k, const HypothesisConstants& c,
                             double s_min, double s_max, int samples) {
  if (samples < 1 || !(s_max >= s_min)) throw Error("validate_H2: invalid sample range");
  HypothesisReport rep;
  rep.s_min = s_min;
  rep.s_max = s_max;
  rep.samples = samples;
  rep.min_a = k.min_a();
  const double a = rep.min_a;

  rep.conditions.push_back(scan("coercivity", s_min, s_max, samples,
                                [&](double s) { return f.d2(s) + a - c.c1; }));
  rep.conditions.push_back(scan("growth", s_min, s_max, samples, [&](double s) {
    return f.d2(s) + a - (c.c2 * std::pow(std::abs(s), c.p - 2.0) - c.c3);
  }));
  rep.conditions.push_back(scan("potential_bound", s_min, s_max, samples, [&](double s) {
    return c.c4 * std::abs(f.F(s)) + c.c5 - std::pow(std::abs(f.d1(s)), c.r);
  }));
  return rep;
}

HypothesisReport validate_H3(const Viscosity& nu, double s_min, double s_max, int samples) {
  if (samples < 1 || !(s_max >= s_min)) throw Error("validate_H3: invalid sample range");
  HypothesisReport rep;
  rep.s_min = s_min;
  rep.s_max = s_max;
  rep.samples = samples;

  ConditionResult lo{"nu_lower_analytic", false, 0.0, nu.mean - std::abs(nu.delta) - nu.lower};
  lo.pass = nu.lower > 0.0 && lo.worst_margin >= 0.0;
  ConditionResult hi{"nu_upper_analytic", false, 0.0, nu.upper - (nu.mean + std::abs(nu.delta))};
  hi.pass = hi.worst_margin >= 0.0;
  rep.conditions.push_back(lo);
  rep.conditions.push_back(hi);
  rep.conditions.push_back(scan("nu_lower_sampled", s_min, s_max, samples,
                                [&](double s) { return nu.nu(s) - nu.lower; }));
  rep.conditions.push_back(scan("nu_upper_sampled", s_min, s_max, samples,
                                [&](double s) { return nu.upper - nu.nu(s); }));
  return rep;
}

double potential_energy(const ScalarField& phi, const Potential& f) { return integral(f.F(phi)); }

double free_energy(const ScalarField& phi, const Kernel& k, const Potential& f) {
  return nonlocal_interaction_energy(k, phi) + potential_energy(phi, f);
}

}  // namespace nchns
