#pragma once

// Closed-form linear algebra on real 2x2 matrices.
//
// All functions are templated on the scalar type and operate on Eigen
// fixed-size matrices, so they compose with ordinary Eigen expressions.

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "modred/errors.hpp"

namespace modred {

template <typename Scalar>
using Mat2T = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Vec2T = Eigen::Matrix<Scalar, 2, 1>;

using Mat2 = Mat2T<double>;
using Vec2 = Vec2T<double>;

/// Largest absolute entry.
template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <typename Scalar>
bool all_finite(const Mat2T<Scalar>& m) {
  return m.allFinite();
}

/// Eigenvalues of a 2x2 matrix. Real pairs are ordered descending; a complex
/// pair is stored with positive imaginary part first.
template <typename Scalar>
struct Eigenvalues2 {
  std::complex<Scalar> first;
  std::complex<Scalar> second;

  bool is_real() const { return first.imag() == Scalar(0); }
  Scalar max_real_part() const { return std::max(first.real(), second.real()); }
};

/// Discriminant (a-d)^2 + 4bc of the characteristic polynomial. Written this
/// way instead of tr^2 - 4 det to avoid cancellation for nearly equal
/// diagonal entries.
template <typename Scalar>
Scalar discriminant2(const Mat2T<Scalar>& m) {
  const Scalar diff = m(0, 0) - m(1, 1);
  return diff * diff + Scalar(4) * m(0, 1) * m(1, 0);
}

template <typename Scalar>
Eigenvalues2<Scalar> eig2(const Mat2T<Scalar>& m) {
  using std::abs;
  using std::sqrt;
  const Scalar half_trace = (m(0, 0) + m(1, 1)) / Scalar(2);
  const Scalar s = discriminant2(m);
  Eigenvalues2<Scalar> out;
  if (s >= Scalar(0)) {
    const Scalar root = sqrt(s) / Scalar(2);
    out.first = std::complex<Scalar>(half_trace + root, Scalar(0));
    out.second = std::complex<Scalar>(half_trace - root, Scalar(0));
  } else {
    const Scalar root = sqrt(-s) / Scalar(2);
    out.first = std::complex<Scalar>(half_trace, root);
    out.second = std::complex<Scalar>(half_trace, -root);
  }
  return out;
}

/// Matrix exponential in closed form,
///
///   exp(M) = e^{tr/2} [ c(s) I + g(s) (M - tr/2 I) ],
///
/// with s = (a-d)^2 + 4bc and, writing h = sqrt(|s|)/2,
///   s > 0: c = cosh h, g = sinh h / h
///   s < 0: c = cos h,  g = sin h / h
///   s = 0: c = 1,      g = 1
/// The s = 0 case is the repeated-eigenvalue formula and covers exp(0) = I.
template <typename Scalar>
Mat2T<Scalar> expm2(const Mat2T<Scalar>& m) {
  using std::cos;
  using std::exp;
  using std::expm1;
  using std::sin;
  using std::sqrt;
  const Scalar half_trace = (m(0, 0) + m(1, 1)) / Scalar(2);
  const Scalar s = discriminant2(m);
  const Mat2T<Scalar> shifted = m - half_trace * Mat2T<Scalar>::Identity();
  if (s > Scalar(0)) {
    // e^{tr/2} cosh h and e^{tr/2} sinh h / h, assembled from e^{tr/2 +- h}
    // so that a large h does not overflow before tr/2 cancels it.
    const Scalar h = sqrt(s) / Scalar(2);
    const Scalar up = exp(half_trace + h);
    const Scalar down = exp(half_trace - h);
    const Scalar c = (up + down) / Scalar(2);
    const Scalar g = -up * expm1(Scalar(-2) * h) / (Scalar(2) * h);
    return c * Mat2T<Scalar>::Identity() + g * shifted;
  }
  Scalar c(1);
  Scalar g(1);
  if (s < Scalar(0)) {
    const Scalar h = sqrt(-s) / Scalar(2);
    c = cos(h);
    g = sin(h) / h;
  }
  return exp(half_trace) * (c * Mat2T<Scalar>::Identity() + g * shifted);
}

/// Relative tolerance used for symmetry and positivity checks on covariances.
inline constexpr double kPsdTolerance = 1e-12;

/// Throws NotSPD unless m is symmetric and positive semi-definite within
/// kPsdTolerance * max|m_ij|.
template <typename Scalar>
void require_spd2(const Mat2T<Scalar>& m, const char* what) {
  using std::abs;
  if (!m.allFinite()) {
    throw Error(ErrorCode::NotSPD, std::string(what) + " has non-finite entries");
  }
  const Scalar scale = max_abs(m);
  const Scalar tol = Scalar(kPsdTolerance) * scale;
  if (abs(m(0, 1) - m(1, 0)) > tol) {
    throw Error(ErrorCode::NotSPD, std::string(what) + " is not symmetric");
  }
  const Mat2T<Scalar> sym = (m + m.transpose()) / Scalar(2);
  if (eig2(sym).second.real() < -tol) {
    throw Error(ErrorCode::NotSPD,
                std::string(what) + " has a negative eigenvalue");
  }
}

/// Symmetric positive semi-definite square root,
///   S = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)).
/// Small negative eigenvalues (within tolerance) are clipped to zero.
template <typename Scalar>
Mat2T<Scalar> sqrtm_spd2(const Mat2T<Scalar>& m) {
  using std::max;
  using std::sqrt;
  require_spd2(m, "matrix");
  const Mat2T<Scalar> sym = (m + m.transpose()) / Scalar(2);
  const Scalar root_det = sqrt(max(sym.determinant(), Scalar(0)));
  const Scalar denom = sym.trace() + Scalar(2) * root_det;
  if (!(denom > Scalar(0))) {
    return Mat2T<Scalar>::Zero();
  }
  Mat2T<Scalar> root =
      (sym + root_det * Mat2T<Scalar>::Identity()) / sqrt(denom);
  root(1, 0) = root(0, 1);
  return root;
}

/// ||2D + C S + S C^T||_inf. For Hurwitz C the stationary covariance
/// S = 2 int_0^inf e^{sC} D e^{sC^T} ds makes this vanish.
template <typename Scalar>
Scalar lyapunov_residual(const Mat2T<Scalar>& drift,
                         const Mat2T<Scalar>& diffusion,
                         const Mat2T<Scalar>& cov) {
  return max_abs(Mat2T<Scalar>(Scalar(2) * diffusion + drift * cov +
                               cov * drift.transpose()));
}

/// Stationary covariance S of dX = C X dt + sqrt(2D) dW, i.e. the symmetric
/// solution of C S + S C^T = -2D, via the 3x3 system in (S11, S12, S22).
template <typename Scalar>
Mat2T<Scalar> solve_lyapunov2(const Mat2T<Scalar>& drift,
                              const Mat2T<Scalar>& diffusion) {
  if (!drift.allFinite()) {
    throw Error(ErrorCode::InvalidParams, "drift matrix has non-finite entries");
  }
  if (eig2(drift).max_real_part() >= Scalar(0)) {
    throw Error(ErrorCode::NotHurwitz,
                "drift matrix has an eigenvalue with non-negative real part");
  }
  require_spd2(diffusion, "diffusion matrix");

  const Scalar c11 = drift(0, 0), c12 = drift(0, 1);
  const Scalar c21 = drift(1, 0), c22 = drift(1, 1);
  Eigen::Matrix<Scalar, 3, 3> sys;
  // clang-format off
  sys << c11, c12,       Scalar(0),
         c21, c11 + c22, c12,
         Scalar(0), c21, c22;
  // clang-format on
  const Scalar off = (diffusion(0, 1) + diffusion(1, 0)) / Scalar(2);
  const Eigen::Matrix<Scalar, 3, 1> rhs(-diffusion(0, 0), Scalar(-2) * off,
                                        -diffusion(1, 1));

  Eigen::FullPivLU<Eigen::Matrix<Scalar, 3, 3>> lu(sys);
  lu.setThreshold(Scalar(64) * Eigen::NumTraits<Scalar>::epsilon());
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::Singular, "Lyapunov system is numerically singular");
  }
  const Eigen::Matrix<Scalar, 3, 1> x = lu.solve(rhs);
  Mat2T<Scalar> cov;
  cov << x(0), x(1), x(1), x(2);
  return cov;
}

}  // namespace modred
