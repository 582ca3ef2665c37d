#pragma once

// Invariant-manifold closure and fluctuation-dissipation noise calibration
// for the two linear model families: the Brownian oscillator in phase space
// and a pair of coupled overdamped oscillators.

#include <utility>

#include "modred/linalg2.hpp"
#include "modred/linear_sde.hpp"

namespace modred {

/// Coupled overdamped oscillators
///   dx1 = (a x1 + k (x2 - x1)) dt + noise,
///   dx2 = (-k (x2 - x1) + d x2) dt + noise,
/// with diffusion matrix diag(sigma1, sigma2).
struct CoupledParams {
  double a = -1.0;
  double d = -1.0;
  double k = 1.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double x1 = 0.0;
  double x2 = 0.0;

  /// Throws InvalidParams unless a, d < 0, k > 0, a >= d, sigma_i > 0.
  void validate() const;

  /// Identical oscillators with unit noise, where closed forms exist.
  bool is_symmetric_normalized() const {
    return a == d && sigma1 == 1.0 && sigma2 == 1.0;
  }

  Mat2 drift() const;
  Mat2 diffusion() const;
  LinearModel model() const { return LinearModel::planar(drift(), diffusion()); }
  Vec2 initial_state() const { return {x1, x2}; }

  /// Eigenvalues lambda_+ >= lambda_- of the drift matrix.
  double lambda_plus() const;
  double lambda_minus() const;
};

/// Underdamped Brownian oscillator dx = v dt,
/// dv = (-omega^2 x - gamma v) dt + sqrt(2 gamma / beta) dW,
/// restricted to the strictly overdamped spectrum gamma > 2 omega.
struct OscillatorParams {
  double gamma = 5.0;
  double omega = 2.0;
  double beta = 1.0;
  double x0 = 1.0;
  double v0 = 0.0;

  /// Throws NotOverdamped if gamma <= 2 omega, InvalidParams for
  /// non-positive or non-finite physical parameters.
  void validate() const;

  /// sqrt(gamma^2 - 4 omega^2) = lambda1 - lambda2.
  double gap() const;
  /// Fast relaxation rate (gamma + gap) / 2.
  double lambda1() const;
  /// Slow relaxation rate (gamma - gap) / 2, evaluated as 2 omega^2 / (gamma + gap).
  double lambda2() const;
  /// 1 / (beta omega^2), the equilibrium position variance.
  double equilibrium_variance() const;

  Mat2 drift() const;
  Mat2 diffusion() const;
  LinearModel model() const { return LinearModel::planar(drift(), diffusion()); }
  Vec2 initial_state() const { return {x0, v0}; }
};

/// Scalar OU process dx = drift x dt + sqrt(2 diffusion) dW.
struct ReducedModel {
  double drift = -1.0;
  double diffusion = 0.0;
  double stationary_variance = 0.0;

  LinearModel model() const { return LinearModel::scalar(drift, diffusion); }
};

/// Both roots of the invariance equation  k alpha^2 + (a - d) alpha - k = 0,
/// returned as (alpha_+, alpha_-).
std::pair<double, double> invariance_roots(double a, double d, double k);

/// The closure slope with k alpha -> 0 as k -> 0, i.e. alpha_+ for a >= d.
double select_closure(double a, double d, double k);

/// Reduced drift a - k + k alpha_hat; equals lambda_+.
double reduced_drift(double a, double d, double k);

/// Retains x1: drift lambda_+, stationary variance S11 of the full model,
/// diffusion -lambda_+ S11.
ReducedModel reduce_coupled(const CoupledParams& p);

/// Retains x: drift -lambda2, diffusion lambda2 / (omega^2 beta).
ReducedModel reduce_oscillator(const OscillatorParams& p);

/// -(1/2) (1/(a - 2k) + 1/a): stationary variance of x1 for a = d, unit noise.
double coupled_stationary_variance(double a, double k);

}  // namespace modred
