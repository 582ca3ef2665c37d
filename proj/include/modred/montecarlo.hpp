#pragma once

// Euler-Maruyama oracle for the linear models and sample statistics used to
// cross-check the closed forms.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "modred/gaussian.hpp"
#include "modred/linear_sde.hpp"

namespace modred {

struct SimConfig {
  double dt = 1e-3;
  std::int64_t n_steps = 1000;
  std::int64_t n_paths = 10000;
  std::uint64_t seed = 0;
  /// Separates independent ensembles drawn with the same seed.
  std::uint64_t stream = 0;
  /// 0 = use worker_count().
  unsigned threads = 0;
};

/// States of every path at one recorded time; one row per path.
struct SampleSet {
  double t = 0.0;
  Eigen::MatrixXd values;

  int dim() const { return static_cast<int>(values.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
  std::span<const double> coordinate(int index) const {
    return {values.col(index).data(), size()};
  }
};

/// Worker count from MODRED_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// X_{n+1} = X_n + C X_n dt + B sqrt(dt) xi_n with B B^T = 2D.
///
/// Each path draws from its own engine keyed by (seed, stream, path index),
/// so the output is bitwise reproducible regardless of the worker count.
/// `record_times` must be sorted multiples of dt inside [0, n_steps dt].
std::vector<SampleSet> simulate(const LinearModel& model, const Gaussian& init,
                                const SimConfig& cfg, std::span<const double> record_times);

/// Exact W2 between two equal-size empirical measures on the line,
/// sqrt(mean_i (a_(i) - b_(i))^2) over the sorted samples.
double empirical_w2_1d(std::span<const double> a, std::span<const double> b);
double empirical_w2_1d(const SampleSet& a, const SampleSet& b);

struct MomentEstimates {
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
};

/// Unbiased mean and variance with normal-theory standard errors
/// sqrt(var / n) and sqrt(2 / (n - 1)) var.
MomentEstimates moment_estimates(std::span<const double> samples);

/// Bootstrap standard error of empirical_w2_1d, resampling both ensembles
/// independently with replacement.
double bootstrap_w2_se(std::span<const double> a, std::span<const double> b,
                       int resamples = 200, std::uint64_t seed = 0);

}  // namespace modred
