#pragma once

// Gaussian measures in one or two dimensions and their exact
// Wasserstein-2 distances.

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "modred/errors.hpp"
#include "modred/linalg2.hpp"

namespace modred {

template <typename Scalar>
class BasicGaussian {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 2, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;

  /// Covariances are stored as variances / covariance matrices, never as
  /// standard deviations. The matrix is symmetrized on construction.
  BasicGaussian(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    const auto d = mean_.size();
    if (d < 1 || d > 2 || cov_.rows() != d || cov_.cols() != d) {
      throw Error(ErrorCode::InvalidParams,
                  "Gaussian dimension must be 1 or 2 with matching mean and covariance");
    }
    if (!mean_.allFinite()) {
      throw Error(ErrorCode::InvalidParams, "Gaussian mean is not finite");
    }
    if (d == 1) {
      if (!std::isfinite(cov_(0, 0)) || cov_(0, 0) < Scalar(0)) {
        throw Error(ErrorCode::NotSPD, "variance must be finite and non-negative");
      }
    } else {
      const Mat2T<Scalar> c = cov_;
      require_spd2(c, "covariance");
      cov_ = (c + c.transpose()) / Scalar(2);
    }
  }

  static BasicGaussian univariate(Scalar mean, Scalar variance) {
    Vector m(1);
    m << mean;
    Matrix c(1, 1);
    c << variance;
    return BasicGaussian(m, c);
  }

  static BasicGaussian bivariate(const Vec2T<Scalar>& mean, const Mat2T<Scalar>& cov) {
    return BasicGaussian(Vector(mean), Matrix(cov));
  }

  static BasicGaussian point_mass(const Vector& at) {
    return BasicGaussian(at, Matrix::Zero(at.size(), at.size()));
  }

  int dim() const { return static_cast<int>(mean_.size()); }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

  /// Variance of a univariate Gaussian.
  Scalar variance() const { return cov_(0, 0); }

  Vec2T<Scalar> mean2() const { return mean_; }
  Mat2T<Scalar> cov2() const { return cov_; }

 private:
  Vector mean_;
  Matrix cov_;
};

using Gaussian = BasicGaussian<double>;

/// W2 between univariate Gaussians: sqrt((m1-m2)^2 + (s1-s2)^2) with s the
/// standard deviations.
template <typename Scalar>
Scalar w2_1d(const BasicGaussian<Scalar>& g1, const BasicGaussian<Scalar>& g2) {
  using std::sqrt;
  if (g1.dim() != 1 || g2.dim() != 1) {
    throw Error(ErrorCode::InvalidParams, "w2_1d requires univariate Gaussians");
  }
  const Scalar dm = g1.mean()(0) - g2.mean()(0);
  const Scalar ds = sqrt(g1.variance()) - sqrt(g2.variance());
  return sqrt(dm * dm + ds * ds);
}

/// W2 between bivariate Gaussians,
///   W2^2 = |u - v|^2 + tr U + tr V - 2 tr sqrt(V^{1/2} U V^{1/2}).
template <typename Scalar>
Scalar w2_2d(const BasicGaussian<Scalar>& g1, const BasicGaussian<Scalar>& g2) {
  using std::max;
  using std::sqrt;
  if (g1.dim() != 2 || g2.dim() != 2) {
    throw Error(ErrorCode::InvalidParams, "w2_2d requires bivariate Gaussians");
  }
  const Mat2T<Scalar> u = g1.cov2();
  const Mat2T<Scalar> v = g2.cov2();
  const Mat2T<Scalar> root_v = sqrtm_spd2(v);
  Mat2T<Scalar> inner = root_v * u * root_v;
  inner(1, 0) = inner(0, 1) = (inner(0, 1) + inner(1, 0)) / Scalar(2);
  const Scalar cross = sqrtm_spd2(inner).trace();
  const Scalar mean_sq = (g1.mean2() - g2.mean2()).squaredNorm();
  const Scalar cov_sq = max(u.trace() + v.trace() - Scalar(2) * cross, Scalar(0));
  return sqrt(mean_sq + cov_sq);
}

/// Dispatches on dimension.
template <typename Scalar>
Scalar w2(const BasicGaussian<Scalar>& g1, const BasicGaussian<Scalar>& g2) {
  if (g1.dim() != g2.dim()) {
    throw Error(ErrorCode::InvalidParams, "W2 between Gaussians of different dimension");
  }
  return g1.dim() == 1 ? w2_1d(g1, g2) : w2_2d(g1, g2);
}

/// Law of one coordinate (index 1 or 2) of a bivariate Gaussian.
template <typename Scalar>
BasicGaussian<Scalar> marginal(const BasicGaussian<Scalar>& g, int index) {
  if (g.dim() != 2 || (index != 1 && index != 2)) {
    throw Error(ErrorCode::InvalidParams, "marginal index must be 1 or 2 of a bivariate Gaussian");
  }
  const int i = index - 1;
  return BasicGaussian<Scalar>::univariate(g.mean()(i), g.cov()(i, i));
}

}  // namespace modred
