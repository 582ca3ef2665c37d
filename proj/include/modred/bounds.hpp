#pragma once

// Explicit error bounds between the original and reduced laws, the
// equilibrium-convergence constants, and grid verification of all of them.
//
// All comparisons are made on squared distances: a bound on W2 of the form
// C e^{-r t} is checked as W2^2 <= C^2 e^{-2 r t}.

#include <span>
#include <string>
#include <vector>

#include "modred/reduction.hpp"

namespace modred {

struct BoundReport {
  std::string name;
  double t = 0.0;
  double exact_sq = 0.0;
  double bound = 0.0;
  bool satisfied = false;
  double margin = 0.0;
};

/// exact <= bound (1 + 1e-12) + 1e-15
bool bound_holds(double exact_sq, double bound);
BoundReport make_report(std::string name, double t, double exact_sq, double bound);

/// Explicit constants C in W2(law_t, law_inf) <= C e^{-rate t}.
struct EquilibriumRate {
  double c_original = 0.0;
  double c_reduced = 0.0;
  double rate = 0.0;
};

// Oscillator -----------------------------------------------------------------

/// W2^2 between the law of x(t) and the reduced law.
double osc_w2_exact(const OscillatorParams& p, double t);

/// 4 / (gamma^2 - 4 omega^2) [(omega |x0| + |v0|)^2 + 4 / beta], valid for all t.
double osc_highfriction_bound(const OscillatorParams& p);

/// [(omega |x0| + |v0|) / gap + 10 / (beta gap^2)] e^{-lambda2 t}.
double osc_longtime_bound(const OscillatorParams& p, double t);

/// C_red^2 = x0^2 + 1/(beta omega^2);
/// C_orig^2 = (|x0| + (lambda2 |x0| + |v0|)/gap)^2
///            + (gamma/beta)/gap^2 (4/gamma + 1/lambda1 + 1/lambda2).
EquilibriumRate osc_equilibrium_rate(const OscillatorParams& p);

/// W2^2 of the original and of the reduced law to the common equilibrium.
std::pair<double, double> osc_w2_to_equilibrium_sq(const OscillatorParams& p, double t);

// Coupled (a = d, unit noise) ------------------------------------------------

/// W2^2 between the law of x1(t) and the reduced law.
double coupled_w2_exact(const CoupledParams& p, double t);

inline constexpr double kDefaultMaxCoupling = 10.0;

/// k^2 |x2 - x1|^2 / (a^2 e^2) + k / (a^2 e). Requires k <= k_max.
double coupled_small_k_bound(const CoupledParams& p, double k_max = kDefaultMaxCoupling);

/// 1/4 |x2 - x1|^2 (1 - e^{-2kt})^2 e^{2at} + 1/(2 (2k - a)) e^{2at} (1 - e^{-4kt}).
double coupled_longtime_bound(const CoupledParams& p, double t);

/// C_red^2 = x1^2 + S11; C_orig^2 = (|x1| + |x2|)^2 + 1/2 (1/|a| + 1/(2k - a)).
EquilibriumRate coupled_equilibrium_rate(const CoupledParams& p);

std::pair<double, double> coupled_w2_to_equilibrium_sq(const CoupledParams& p, double t);

// Verification ---------------------------------------------------------------

/// 60 points: 30 linear on [0, 2/rate), 30 geometric on [2/rate, 20/rate].
std::vector<double> default_grid(double rate);
std::vector<double> default_grid(const OscillatorParams& p);
std::vector<double> default_grid(const CoupledParams& p);

/// One report per (bound, t), grouped by bound and ordered by t:
/// "high_friction", "longtime", "eq_rate_original", "eq_rate_reduced".
std::vector<BoundReport> verify_bounds(const OscillatorParams& p, std::span<const double> grid);

/// "small_k", "longtime", "eq_rate_original", "eq_rate_reduced".
std::vector<BoundReport> verify_bounds(const CoupledParams& p, std::span<const double> grid);

}  // namespace modred
