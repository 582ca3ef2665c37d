#include "modred/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

namespace modred {

namespace {

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t path) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
  return std::mt19937_64(seq);
}

std::vector<std::int64_t> record_steps(const SimConfig& cfg, std::span<const double> times) {
  std::vector<std::int64_t> steps;
  steps.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (!std::isfinite(t) || t < 0.0) {
      throw Error(ErrorCode::InvalidParams, "record times must be finite and non-negative");
    }
    if (i > 0 && t < times[i - 1]) {
      throw Error(ErrorCode::InvalidParams, "record times must be sorted");
    }
    const double ratio = t / cfg.dt;
    const double idx = std::round(ratio);
    if (std::abs(ratio - idx) > 1e-9 * std::max(1.0, idx)) {
      throw Error(ErrorCode::InvalidParams,
                  "record time " + std::to_string(t) + " is not a multiple of dt");
    }
    if (idx > static_cast<double>(cfg.n_steps)) {
      throw Error(ErrorCode::InvalidParams, "record time beyond the simulated horizon");
    }
    steps.push_back(static_cast<std::int64_t>(idx));
  }
  return steps;
}

template <int Dim>
struct PathKernel {
  using Vec = Eigen::Matrix<double, Dim, 1>;
  using Mat = Eigen::Matrix<double, Dim, Dim>;

  Mat step;          // I + C dt
  Mat noise;         // B sqrt(dt)
  Vec init_mean;
  Mat init_root;     // S0^{1/2}
  std::vector<std::int64_t> steps;
  std::int64_t n_steps = 0;

  void run(const SimConfig& cfg, std::int64_t first, std::int64_t last,
           std::vector<SampleSet>& out) const {
    for (std::int64_t path = first; path < last; ++path) {
      auto engine = path_engine(cfg.seed, cfg.stream, static_cast<std::uint64_t>(path));
      std::normal_distribution<double> normal;
      Vec xi;
      for (int j = 0; j < Dim; ++j) xi(j) = normal(engine);
      Vec x = init_mean + init_root * xi;

      std::size_t next = 0;
      std::int64_t n = 0;
      auto flush = [&] {
        while (next < steps.size() && steps[next] == n) {
          if (!x.allFinite()) {
            throw Error(ErrorCode::NonFinite, "simulated state overflowed");
          }
          out[next].values.row(path) = x.transpose();
          ++next;
        }
      };
      flush();
      for (n = 1; n <= n_steps && next < steps.size(); ++n) {
        for (int j = 0; j < Dim; ++j) xi(j) = normal(engine);
        x = step * x + noise * xi;
        flush();
      }
    }
  }
};

template <int Dim>
std::vector<SampleSet> simulate_impl(const LinearModel& model, const Gaussian& init,
                                     const SimConfig& cfg, std::vector<std::int64_t> steps) {
  using Mat = typename PathKernel<Dim>::Mat;
  PathKernel<Dim> kernel;
  const Mat drift = model.drift();
  const Mat diffusion = model.diffusion();
  kernel.step = Mat::Identity() + cfg.dt * drift;
  if constexpr (Dim == 1) {
    kernel.noise(0, 0) = std::sqrt(2.0 * diffusion(0, 0) * cfg.dt);
    kernel.init_root(0, 0) = std::sqrt(init.variance());
  } else {
    kernel.noise = sqrtm_spd2(Mat2(2.0 * diffusion)) * std::sqrt(cfg.dt);
    kernel.init_root = sqrtm_spd2(init.cov2());
  }
  kernel.init_mean = init.mean();
  kernel.steps = std::move(steps);
  kernel.n_steps = cfg.n_steps;

  std::vector<SampleSet> out(kernel.steps.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].t = static_cast<double>(kernel.steps[i]) * cfg.dt;
    out[i].values.resize(cfg.n_paths, Dim);
  }

  const unsigned workers = std::max<unsigned>(
      1, std::min<std::int64_t>(cfg.threads ? cfg.threads : worker_count(), cfg.n_paths));
  if (workers == 1) {
    kernel.run(cfg, 0, cfg.n_paths, out);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::int64_t chunk = (cfg.n_paths + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::int64_t first = w * chunk;
    const std::int64_t last = std::min<std::int64_t>(cfg.n_paths, first + chunk);
    pool.emplace_back([&, w, first, last] {
      try {
        kernel.run(cfg, first, last, out);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MODRED_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

std::vector<SampleSet> simulate(const LinearModel& model, const Gaussian& init,
                                const SimConfig& cfg, std::span<const double> record_times) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt) || cfg.n_steps < 1 || cfg.n_paths < 1) {
    throw Error(ErrorCode::InvalidParams, "simulation needs dt > 0, n_steps >= 1, n_paths >= 1");
  }
  if (init.dim() != model.dim()) {
    throw Error(ErrorCode::InvalidParams, "initial law dimension does not match the model");
  }
  if (!(cfg.dt * model.stiffness() < 0.5)) {
    throw Error(ErrorCode::UnstableStep,
                "dt * |stiffest drift eigenvalue| = " +
                    std::to_string(cfg.dt * model.stiffness()) + " must be below 0.5");
  }
  auto steps = record_steps(cfg, record_times);
  if (model.dim() == 1) return simulate_impl<1>(model, init, cfg, std::move(steps));
  return simulate_impl<2>(model, init, cfg, std::move(steps));
}

double empirical_w2_1d(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "empirical W2 needs equal sample counts");
  }
  if (a.empty()) return 0.0;
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(sa.size()));
}

double empirical_w2_1d(const SampleSet& a, const SampleSet& b) {
  if (a.dim() != 1 || b.dim() != 1) {
    throw Error(ErrorCode::InvalidParams, "empirical_w2_1d needs one-dimensional samples");
  }
  return empirical_w2_1d(a.coordinate(0), b.coordinate(0));
}

MomentEstimates moment_estimates(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) {
    throw Error(ErrorCode::TooFewSamples, "moment estimates need at least two samples");
  }
  // Shifted sums: exact zero variance for constant data.
  const double shift = samples[0];
  double s1 = 0.0;
  double s2 = 0.0;
  for (double x : samples) {
    const double d = x - shift;
    s1 += d;
    s2 += d * d;
  }
  const double nd = static_cast<double>(n);
  MomentEstimates m;
  m.mean = shift + s1 / nd;
  m.variance = std::max(0.0, (s2 - s1 * s1 / nd) / (nd - 1.0));
  m.se_mean = std::sqrt(m.variance / nd);
  m.se_variance = std::sqrt(2.0 / (nd - 1.0)) * m.variance;
  return m;
}

double bootstrap_w2_se(std::span<const double> a, std::span<const double> b, int resamples,
                       std::uint64_t seed) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "bootstrap needs equal sample counts");
  }
  if (resamples < 2 || a.size() < 2) {
    throw Error(ErrorCode::TooFewSamples, "bootstrap needs >= 2 resamples and samples");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const std::size_t n = sa.size();

  // A resample of a sorted array is sorted once expanded by multiplicity, so
  // each replicate costs O(n) instead of a sort.
  std::vector<std::uint32_t> count_a(n), count_b(n);
  std::vector<double> ra(n), rb(n);
  auto expand = [n](const std::vector<double>& sorted, const std::vector<std::uint32_t>& counts,
                    std::vector<double>& out) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::uint32_t c = 0; c < counts[i]; ++c) out[k++] = sorted[i];
    }
  };

  std::vector<double> stats(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    std::mt19937_64 engine = path_engine(seed, 0xB007u, static_cast<std::uint64_t>(r));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::fill(count_a.begin(), count_a.end(), 0u);
    std::fill(count_b.begin(), count_b.end(), 0u);
    for (std::size_t i = 0; i < n; ++i) ++count_a[pick(engine)];
    for (std::size_t i = 0; i < n; ++i) ++count_b[pick(engine)];
    expand(sa, count_a, ra);
    expand(sb, count_b, rb);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = ra[i] - rb[i];
      sum += d * d;
    }
    stats[static_cast<std::size_t>(r)] = std::sqrt(sum / static_cast<double>(n));
  }
  return std::sqrt(moment_estimates(stats).variance);
}

}  // namespace modred
