#pragma once

// Closed-form laws of the original and reduced dynamics for both model
// families. These do not go through the generic propagator and serve as
// analytic references for it.

#include <utility>

#include "modred/gaussian.hpp"
#include "modred/reduction.hpp"

namespace modred {

/// Bivariate law of (x(t), v(t)) started from the point (x0, v0).
Gaussian oscillator_full_law(const OscillatorParams& p, double t);

/// Law of x(t): N(m(t), sigma(t)).
Gaussian oscillator_marginal_law(const OscillatorParams& p, double t);

/// Law of the reduced OU process: N(e^{-lambda2 t} x0, (1 - e^{-2 lambda2 t}) / (omega^2 beta)).
Gaussian oscillator_reduced_law(const OscillatorParams& p, double t);

/// Bivariate law of (x1(t), x2(t)); requires a = d and unit noise.
Gaussian coupled_full_law(const CoupledParams& p, double t);

/// N(e^{a t} x1, S11 (1 - e^{2 a t})); requires a = d and unit noise.
Gaussian coupled_reduced_law(const CoupledParams& p, double t);

/// (original-equilibrium marginal, reduced equilibrium). The two coincide.
std::pair<Gaussian, Gaussian> equilibrium_laws(const OscillatorParams& p);
std::pair<Gaussian, Gaussian> equilibrium_laws(const CoupledParams& p);

/// Throws Unsupported unless the coupled closed forms apply.
void require_symmetric_normalized(const CoupledParams& p);

}  // namespace modred
