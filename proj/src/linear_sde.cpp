#include "modred/linear_sde.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace modred {

namespace {

// 10-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 5> kNodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659,
    0.6794095682990244062343274, 0.8650633666889845107320967,
    0.9739065285171717200779640};
constexpr std::array<double, 5> kWeights = {
    0.2955242247147528701738930, 0.2692667193099963550912269,
    0.2190863625159820439955349, 0.1494513491505805931457763,
    0.0666713443086881375935688};

Mat2 integrand(const Mat2& drift, const Mat2& diffusion, double s) {
  const Mat2 e = expm2(Mat2(s * drift));
  return e * diffusion * e.transpose();
}

Mat2 gauss_legendre(const Mat2& drift, const Mat2& diffusion, double lo, double hi) {
  const double half = (hi - lo) / 2;
  const double mid = (hi + lo) / 2;
  Mat2 sum = Mat2::Zero();
  for (std::size_t i = 0; i < kNodes.size(); ++i) {
    const double dx = half * kNodes[i];
    sum += kWeights[i] * (integrand(drift, diffusion, mid - dx) +
                          integrand(drift, diffusion, mid + dx));
  }
  return half * sum;
}

// (e^{2 lambda t} - 1) / (2 lambda), with the lambda -> 0 limit t.
double exp_integral(double lambda, double t) {
  if (lambda == 0.0) return t;
  return std::expm1(2.0 * lambda * t) / (2.0 * lambda);
}

Mat2 symmetrize_clip(const Mat2& m) {
  Mat2 sym = (m + m.transpose()) / 2.0;
  const auto ev = eig2(sym);
  if (ev.second.real() >= 0.0) return sym;
  // Rank-one correction removing the negative eigen-direction.
  const double lo = ev.second.real();
  const double hi = ev.first.real();
  if (hi <= 0.0) return Mat2::Zero();
  // Projector onto the eigenvector of `hi`.
  const Mat2 proj = (sym - lo * Mat2::Identity()) / (hi - lo);
  return hi * proj;
}

}  // namespace

LinearModel LinearModel::scalar(double drift, double diffusion) {
  if (!std::isfinite(drift) || !std::isfinite(diffusion) || diffusion < 0.0) {
    throw Error(ErrorCode::InvalidParams,
                "scalar model needs finite drift and non-negative diffusion");
  }
  Matrix c(1, 1), d(1, 1);
  c << drift;
  d << diffusion;
  return LinearModel(c, d);
}

LinearModel LinearModel::planar(const Mat2& drift, const Mat2& diffusion) {
  if (!drift.allFinite()) {
    throw Error(ErrorCode::InvalidParams, "drift matrix has non-finite entries");
  }
  require_spd2(diffusion, "diffusion matrix");
  const Mat2 sym = (diffusion + diffusion.transpose()) / 2.0;
  return LinearModel(Matrix(drift), Matrix(sym));
}

double LinearModel::spectral_abscissa() const {
  if (dim() == 1) return drift_(0, 0);
  return eig2(drift2()).max_real_part();
}

double LinearModel::stiffness() const {
  if (dim() == 1) return std::abs(drift_(0, 0));
  const auto ev = eig2(drift2());
  return std::max(std::abs(ev.first), std::abs(ev.second));
}

bool has_commuting_fast_path(const LinearModel& model) {
  if (model.dim() != 2) return true;
  const Mat2 c = model.drift2();
  const Mat2 d = model.diffusion2();
  const double scale = std::max(max_abs(c), 1e-300);
  if (std::abs(c(0, 1) - c(1, 0)) > 1e-14 * scale) return false;
  const Mat2 commutator = c * d - d * c;
  return max_abs(commutator) <= 1e-14 * scale * std::max(max_abs(d), 1e-300);
}

Mat2 noise_covariance_quadrature(const LinearModel& model, double t,
                                 const QuadratureOptions& opts) {
  if (model.dim() != 2) {
    throw Error(ErrorCode::InvalidParams, "quadrature path is for planar models");
  }
  if (t == 0.0) return Mat2::Zero();
  const Mat2 c = model.drift2();
  const Mat2 d = model.diffusion2();

  struct Panel {
    double lo, hi;
    Mat2 value;
  };
  // Start from panels that double in width from the fastest time scale, so
  // an initial layer of width 1/|lambda_max| is never straddled by one
  // panel whose nodes all miss it.
  std::vector<Panel> pending;
  const double stiff = model.stiffness();
  double width = stiff > 0.0 ? std::min(t, 1.0 / stiff) : t;
  for (double lo = 0.0; lo < t; width *= 2.0) {
    const double hi = std::min(t, lo + width);
    pending.push_back({lo, hi, gauss_legendre(c, d, lo, hi)});
    lo = hi;
  }
  Mat2 total = Mat2::Zero();
  int panels = static_cast<int>(pending.size());
  // The integral carries the factor 2, so the per-entry budget on the raw
  // integral is half the requested tolerance.
  const double budget = opts.abs_tol / 2.0;
  while (!pending.empty()) {
    Panel p = pending.back();
    pending.pop_back();
    const double mid = (p.lo + p.hi) / 2;
    const Mat2 left = gauss_legendre(c, d, p.lo, mid);
    const Mat2 right = gauss_legendre(c, d, mid, p.hi);
    const Mat2 refined = left + right;
    const double err = max_abs(Mat2(refined - p.value));
    const double local_tol =
        std::max(budget * (p.hi - p.lo) / t, opts.rel_tol * max_abs(refined));
    if (err <= local_tol || mid == p.lo || mid == p.hi) {
      total += refined;
      continue;
    }
    if (++panels > opts.max_panels) {
      throw Error(ErrorCode::QuadratureFailure,
                  "covariance integral did not converge within the panel budget");
    }
    pending.push_back({p.lo, mid, left});
    pending.push_back({mid, p.hi, right});
  }
  return 2.0 * total;
}

Mat2 noise_covariance(const LinearModel& model, double t, const QuadratureOptions& opts) {
  if (model.dim() != 2) {
    throw Error(ErrorCode::InvalidParams, "noise_covariance is for planar models");
  }
  if (!has_commuting_fast_path(model)) {
    return noise_covariance_quadrature(model, t, opts);
  }
  // C symmetric and commuting with D: 2 int e^{2sC} ds D, with
  // int e^{2sC} ds = phi(l1) P1 + phi(l2) P2 over the spectral projectors.
  const Mat2 c = model.drift2();
  const Mat2 d = model.diffusion2();
  const auto ev = eig2(c);
  const double l1 = ev.first.real();
  const double l2 = ev.second.real();
  Mat2 integral;
  if (l1 == l2) {
    integral = exp_integral(l1, t) * Mat2::Identity();
  } else {
    const Mat2 p1 = (c - l2 * Mat2::Identity()) / (l1 - l2);
    const Mat2 p2 = Mat2::Identity() - p1;
    integral = exp_integral(l1, t) * p1 + exp_integral(l2, t) * p2;
  }
  return 2.0 * integral * d;
}

Gaussian propagate_law(const LinearModel& model, const Gaussian& init, double t,
                       const QuadratureOptions& opts) {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorCode::InvalidParams, "propagation time must be finite and non-negative");
  }
  if (init.dim() != model.dim()) {
    throw Error(ErrorCode::InvalidParams, "initial law dimension does not match the model");
  }
  if (t == 0.0) return init;

  if (model.dim() == 1) {
    const double c = model.drift()(0, 0);
    const double d = model.diffusion()(0, 0);
    const double decay = std::exp(c * t);
    const double var = decay * decay * init.variance() + 2.0 * d * exp_integral(c, t);
    return Gaussian::univariate(decay * init.mean()(0), std::max(var, 0.0));
  }

  const Mat2 e = expm2(Mat2(t * model.drift2()));
  const Vec2 mean = e * init.mean2();
  const Mat2 cov = e * init.cov2() * e.transpose() + noise_covariance(model, t, opts);
  return Gaussian::bivariate(mean, symmetrize_clip(cov));
}

Gaussian stationary_law(const LinearModel& model) {
  if (model.dim() == 1) {
    const double c = model.drift()(0, 0);
    if (!(c < 0.0)) {
      throw Error(ErrorCode::NotHurwitz, "scalar drift must be negative");
    }
    return Gaussian::univariate(0.0, -model.diffusion()(0, 0) / c);
  }
  const Mat2 cov = solve_lyapunov2(model.drift2(), model.diffusion2());
  return Gaussian::bivariate(Vec2::Zero(), symmetrize_clip(cov));
}

}  // namespace modred
