#include "modred/models.hpp"

#include <algorithm>
#include <cmath>

namespace modred {

namespace {

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorCode::InvalidParams, "time must be finite and non-negative");
  }
}

struct OscillatorMoments {
  double mx, mv, sxx, sxv, svv;
};

// Closed-form moments in terms of lambda1 > lambda2 > 0. The constant terms
// of the variance brackets cancel analytically, which leaves expm1 terms only:
//   sxx = K [4/g expm1(-g t) - expm1(-2 l1 t)/l1 - expm1(-2 l2 t)/l2]
//   svv = K [4 w^2/g expm1(-g t) - l1 expm1(-2 l1 t) - l2 expm1(-2 l2 t)]
// with K = (g / beta) / (l1 - l2)^2.
OscillatorMoments oscillator_moments(const OscillatorParams& p, double t) {
  p.validate();
  require_time(t);
  const double l1 = p.lambda1();
  const double l2 = p.lambda2();
  const double gap = p.gap();
  const double g = p.gamma;
  const double e1 = std::exp(-l1 * t);
  const double e2 = std::exp(-l2 * t);
  // (e2 - e1) / gap, written with expm1 to keep precision when t is small.
  const double spread = e2 * -std::expm1(-gap * t) / gap;

  OscillatorMoments m{};
  m.mx = (l1 * e2 - l2 * e1) / gap * p.x0 + spread * p.v0;
  m.mv = -p.omega * p.omega * spread * p.x0 + (l1 * e1 - l2 * e2) / gap * p.v0;

  const double k = (g / p.beta) / (gap * gap);
  const double em_g = std::expm1(-g * t);
  const double em_1 = std::expm1(-2.0 * l1 * t);
  const double em_2 = std::expm1(-2.0 * l2 * t);
  m.sxx = std::max(0.0, k * (4.0 / g * em_g - em_1 / l1 - em_2 / l2));
  m.sxv = k * (gap * spread) * (gap * spread);
  m.svv = std::max(0.0, k * (4.0 * p.omega * p.omega / g * em_g - l1 * em_1 - l2 * em_2));
  return m;
}

}  // namespace

void require_symmetric_normalized(const CoupledParams& p) {
  p.validate();
  if (!p.is_symmetric_normalized()) {
    throw Error(ErrorCode::Unsupported,
                "closed-form coupled laws need a = d and sigma1 = sigma2 = 1");
  }
}

Gaussian oscillator_full_law(const OscillatorParams& p, double t) {
  const auto m = oscillator_moments(p, t);
  Mat2 cov;
  cov << m.sxx, m.sxv, m.sxv, m.svv;
  // Rounding in the three closed forms can leave det slightly negative near
  // t = 0; the Gaussian constructor tolerates it at relative 1e-12.
  return Gaussian::bivariate(Vec2(m.mx, m.mv), cov);
}

Gaussian oscillator_marginal_law(const OscillatorParams& p, double t) {
  p.validate();
  require_time(t);
  const double l1 = p.lambda1();
  const double l2 = p.lambda2();
  const double gap = p.gap();
  const double e2 = std::exp(-l2 * t);
  const double spread = e2 * -std::expm1(-gap * t) / gap;
  // m(t) = e^{-l2 t} x0 + (e^{-l2 t} - e^{-l1 t}) / gap * (l2 x0 + v0)
  const double mean = e2 * p.x0 + spread * (l2 * p.x0 + p.v0);
  const double k = (p.gamma / p.beta) / (gap * gap);
  const double var = k * (4.0 / p.gamma * std::expm1(-p.gamma * t) -
                          std::expm1(-2.0 * l1 * t) / l1 -
                          std::expm1(-2.0 * l2 * t) / l2);
  return Gaussian::univariate(mean, std::max(var, 0.0));
}

Gaussian oscillator_reduced_law(const OscillatorParams& p, double t) {
  p.validate();
  require_time(t);
  const double l2 = p.lambda2();
  return Gaussian::univariate(std::exp(-l2 * t) * p.x0,
                              -p.equilibrium_variance() * std::expm1(-2.0 * l2 * t));
}

Gaussian coupled_full_law(const CoupledParams& p, double t) {
  require_symmetric_normalized(p);
  require_time(t);
  const double a = p.a;
  const double fast = a - 2.0 * p.k;
  const double ea = std::exp(a * t);
  const double ef = std::exp(fast * t);
  Mat2 e;
  e << ef + ea, ea - ef, ea - ef, ef + ea;
  e *= 0.5;
  const Vec2 mean = e * p.initial_state();

  // Sigma(t) = 2 int_0^t e^{2sQ} ds
  const double i_fast = std::expm1(2.0 * fast * t) / fast;
  const double i_slow = std::expm1(2.0 * a * t) / a;
  Mat2 cov;
  cov << i_fast + i_slow, i_slow - i_fast, i_slow - i_fast, i_fast + i_slow;
  cov *= 0.5;
  return Gaussian::bivariate(mean, cov);
}

Gaussian coupled_reduced_law(const CoupledParams& p, double t) {
  require_symmetric_normalized(p);
  require_time(t);
  const double a = p.a;  // lambda_+ = a when a = d
  const double s11 = coupled_stationary_variance(a, p.k);
  return Gaussian::univariate(std::exp(a * t) * p.x1, -s11 * std::expm1(2.0 * a * t));
}

std::pair<Gaussian, Gaussian> equilibrium_laws(const OscillatorParams& p) {
  p.validate();
  // sigma(t) -> 1/(beta omega^2) and sigma_bar(t) -> D_r / alpha = 1/(omega^2 beta).
  const double var = p.equilibrium_variance();
  const ReducedModel r = reduce_oscillator(p);
  return {Gaussian::univariate(0.0, var),
          Gaussian::univariate(0.0, r.stationary_variance)};
}

std::pair<Gaussian, Gaussian> equilibrium_laws(const CoupledParams& p) {
  p.validate();
  const ReducedModel r = reduce_coupled(p);
  if (p.is_symmetric_normalized()) {
    return {Gaussian::univariate(0.0, coupled_stationary_variance(p.a, p.k)),
            Gaussian::univariate(0.0, r.stationary_variance)};
  }
  return {marginal(stationary_law(p.model()), 1),
          Gaussian::univariate(0.0, r.stationary_variance)};
}

}  // namespace modred
