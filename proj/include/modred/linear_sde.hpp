#pragma once

// Linear drift-diffusion  d/dt rho = -div(C x rho) + div(D grad rho),
// equivalently the SDE  dX = C X dt + sqrt(2D) dW.

#include "modred/gaussian.hpp"
#include "modred/linalg2.hpp"

namespace modred {

class LinearModel {
 public:
  using Matrix = Gaussian::Matrix;

  /// Scalar model dX = c X dt + sqrt(2 d) dW.
  static LinearModel scalar(double drift, double diffusion);
  static LinearModel planar(const Mat2& drift, const Mat2& diffusion);

  int dim() const { return static_cast<int>(drift_.rows()); }
  const Matrix& drift() const { return drift_; }
  const Matrix& diffusion() const { return diffusion_; }

  Mat2 drift2() const { return drift_; }
  Mat2 diffusion2() const { return diffusion_; }

  /// Largest real part of the drift spectrum.
  double spectral_abscissa() const;
  /// Largest eigenvalue modulus of the drift.
  double stiffness() const;

 private:
  LinearModel(Matrix drift, Matrix diffusion)
      : drift_(std::move(drift)), diffusion_(std::move(diffusion)) {}

  Matrix drift_;
  Matrix diffusion_;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  /// Per-panel floor relative to the panel value, so large covariances are
  /// not held to an absolute tolerance below their rounding error.
  double rel_tol = 1e-14;
  int max_panels = 1 << 14;
};

/// 2 int_0^t e^{sC} D e^{sC^T} ds for a planar model.
///
/// When C is symmetric and commutes with D the integrand is e^{2sC} D and the
/// integral is evaluated in closed form through the spectral projectors of C;
/// otherwise adaptive Gauss-Legendre quadrature is used.
Mat2 noise_covariance(const LinearModel& model, double t,
                      const QuadratureOptions& opts = {});

/// Same integral, always by quadrature. Exposed for cross-checking.
Mat2 noise_covariance_quadrature(const LinearModel& model, double t,
                                 const QuadratureOptions& opts = {});

/// Whether noise_covariance takes the closed-form route for this model.
bool has_commuting_fast_path(const LinearModel& model);

/// Gaussian law at time t of the process started from `init`:
///   mean e^{tC} mu0,  cov e^{tC} S0 e^{tC^T} + 2 int_0^t e^{sC} D e^{sC^T} ds.
/// The covariance is symmetrized and clipped to be positive semi-definite.
Gaussian propagate_law(const LinearModel& model, const Gaussian& init, double t,
                       const QuadratureOptions& opts = {});

/// N(0, S_inf) with C S_inf + S_inf C^T = -2D. Requires a Hurwitz drift.
Gaussian stationary_law(const LinearModel& model);

}  // namespace modred
