#include "modred/reduction.hpp"

#include <cmath>
#include <string>

namespace modred {

namespace {

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

void CoupledParams::validate() const {
  if (!finite_all({a, d, k, sigma1, sigma2, x1, x2})) {
    throw Error(ErrorCode::InvalidParams, "coupled parameters must be finite");
  }
  if (!(a < 0.0) || !(d < 0.0)) {
    throw Error(ErrorCode::InvalidParams, "oscillator rates a and d must be negative");
  }
  if (a < d) {
    throw Error(ErrorCode::InvalidParams, "ordering a >= d is required");
  }
  if (!(k > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "coupling k must be positive");
  }
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "noise strengths must be positive");
  }
}

Mat2 CoupledParams::drift() const {
  Mat2 q;
  q << a - k, k, k, d - k;
  return q;
}

Mat2 CoupledParams::diffusion() const {
  Mat2 m;
  m << sigma1, 0.0, 0.0, sigma2;
  return m;
}

double CoupledParams::lambda_plus() const { return reduced_drift(a, d, k); }

double CoupledParams::lambda_minus() const {
  return (a + d - 2.0 * k - std::hypot(a - d, 2.0 * k)) / 2.0;
}

void OscillatorParams::validate() const {
  if (!finite_all({gamma, omega, x0, v0}) || std::isnan(beta)) {
    throw Error(ErrorCode::InvalidParams, "oscillator parameters must be finite");
  }
  if (!(gamma > 0.0) || !(omega > 0.0) || !(beta > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "gamma, omega and beta must be positive");
  }
  if (!(gamma > 2.0 * omega)) {
    throw Error(ErrorCode::NotOverdamped,
                "gamma must exceed 2 omega (got gamma=" + std::to_string(gamma) +
                    ", omega=" + std::to_string(omega) + ")");
  }
}

double OscillatorParams::gap() const {
  return std::sqrt((gamma - 2.0 * omega) * (gamma + 2.0 * omega));
}

double OscillatorParams::lambda1() const { return (gamma + gap()) / 2.0; }

double OscillatorParams::lambda2() const {
  return 2.0 * omega * omega / (gamma + gap());
}

double OscillatorParams::equilibrium_variance() const {
  return 1.0 / (beta * omega * omega);
}

Mat2 OscillatorParams::drift() const {
  Mat2 c;
  c << 0.0, 1.0, -omega * omega, -gamma;
  return c;
}

Mat2 OscillatorParams::diffusion() const {
  Mat2 m;
  m << 0.0, 0.0, 0.0, gamma / beta;
  return m;
}

std::pair<double, double> invariance_roots(double a, double d, double k) {
  if (!(k > 0.0) || !std::isfinite(a) || !std::isfinite(d) || !std::isfinite(k)) {
    throw Error(ErrorCode::InvalidParams, "invariance roots need finite a, d and k > 0");
  }
  // Roots (-(a-d) +- sqrt((a-d)^2 + 4k^2)) / (2k) with product -1. Take the
  // cancellation-free root first and recover the other from the product.
  const double diff = a - d;
  const double root = std::hypot(diff, 2.0 * k);
  if (diff >= 0.0) {
    const double minus = -(diff + root) / (2.0 * k);
    return {-1.0 / minus, minus};
  }
  const double plus = (root - diff) / (2.0 * k);
  return {plus, -1.0 / plus};
}

double select_closure(double a, double d, double k) {
  if (a < d) {
    throw Error(ErrorCode::InvalidParams, "closure selection assumes a >= d");
  }
  return invariance_roots(a, d, k).first;
}

double reduced_drift(double a, double d, double k) {
  return a - k + k * select_closure(a, d, k);
}

double coupled_stationary_variance(double a, double k) {
  return -0.5 * (1.0 / (a - 2.0 * k) + 1.0 / a);
}

ReducedModel reduce_coupled(const CoupledParams& p) {
  p.validate();
  ReducedModel r;
  r.drift = reduced_drift(p.a, p.d, p.k);
  if (p.is_symmetric_normalized()) {
    r.stationary_variance = coupled_stationary_variance(p.a, p.k);
  } else {
    r.stationary_variance = stationary_law(p.model()).cov()(0, 0);
  }
  r.diffusion = -r.drift * r.stationary_variance;
  return r;
}

ReducedModel reduce_oscillator(const OscillatorParams& p) {
  p.validate();
  const double alpha = p.lambda2();
  ReducedModel r;
  r.drift = -alpha;
  r.diffusion = alpha / (p.omega * p.omega * p.beta);
  r.stationary_variance = p.equilibrium_variance();
  return r;
}

}  // namespace modred
