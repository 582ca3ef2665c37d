#include "modred/bounds.hpp"

#include <cmath>
#include <numbers>

#include "modred/models.hpp"

namespace modred {

namespace {

void require_grid(std::span<const double> grid) {
  if (grid.empty()) {
    throw Error(ErrorCode::EmptyGrid, "time grid is empty");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw Error(ErrorCode::InvalidParams, "grid times must be finite and non-negative");
    }
    if (i > 0 && grid[i] < grid[i - 1]) {
      throw Error(ErrorCode::InvalidParams, "grid must be sorted");
    }
  }
}

double w2_sq_1d(const Gaussian& g1, const Gaussian& g2) {
  const double dm = g1.mean()(0) - g2.mean()(0);
  const double ds = std::sqrt(g1.variance()) - std::sqrt(g2.variance());
  return dm * dm + ds * ds;
}

}  // namespace

bool bound_holds(double exact_sq, double bound) {
  return exact_sq <= bound * (1.0 + 1e-12) + 1e-15;
}

BoundReport make_report(std::string name, double t, double exact_sq, double bound) {
  BoundReport r;
  r.name = std::move(name);
  r.t = t;
  r.exact_sq = exact_sq;
  r.bound = bound;
  r.satisfied = bound_holds(exact_sq, bound);
  r.margin = bound - exact_sq;
  return r;
}

double osc_w2_exact(const OscillatorParams& p, double t) {
  return w2_sq_1d(oscillator_marginal_law(p, t), oscillator_reduced_law(p, t));
}

double osc_highfriction_bound(const OscillatorParams& p) {
  p.validate();
  const double gap_sq = (p.gamma - 2.0 * p.omega) * (p.gamma + 2.0 * p.omega);
  const double drive = p.omega * std::abs(p.x0) + std::abs(p.v0);
  return 4.0 / gap_sq * (drive * drive + 4.0 / p.beta);
}

double osc_longtime_bound(const OscillatorParams& p, double t) {
  p.validate();
  const double gap = p.gap();
  const double drive = p.omega * std::abs(p.x0) + std::abs(p.v0);
  const double prefactor = drive / gap + 10.0 / (p.beta * gap * gap);
  return prefactor * std::exp(-p.lambda2() * t);
}

EquilibriumRate osc_equilibrium_rate(const OscillatorParams& p) {
  p.validate();
  const double l1 = p.lambda1();
  const double l2 = p.lambda2();
  const double gap = p.gap();
  const double mean_c = std::abs(p.x0) + (l2 * std::abs(p.x0) + std::abs(p.v0)) / gap;
  const double var_c = (p.gamma / p.beta) / (gap * gap) * (4.0 / p.gamma + 1.0 / l1 + 1.0 / l2);
  EquilibriumRate r;
  r.c_original = std::sqrt(mean_c * mean_c + var_c);
  r.c_reduced = std::sqrt(p.x0 * p.x0 + p.equilibrium_variance());
  r.rate = l2;
  return r;
}

std::pair<double, double> osc_w2_to_equilibrium_sq(const OscillatorParams& p, double t) {
  const auto [orig_eq, red_eq] = equilibrium_laws(p);
  return {w2_sq_1d(oscillator_marginal_law(p, t), orig_eq),
          w2_sq_1d(oscillator_reduced_law(p, t), red_eq)};
}

double coupled_w2_exact(const CoupledParams& p, double t) {
  return w2_sq_1d(marginal(coupled_full_law(p, t), 1), coupled_reduced_law(p, t));
}

double coupled_small_k_bound(const CoupledParams& p, double k_max) {
  require_symmetric_normalized(p);
  if (p.k > k_max) {
    throw Error(ErrorCode::InvalidParams, "coupling exceeds the configured k_max");
  }
  constexpr double e = std::numbers::e;
  const double a_sq = p.a * p.a;
  const double dx = p.x2 - p.x1;
  return p.k * p.k * dx * dx / (a_sq * e * e) + p.k / (a_sq * e);
}

double coupled_longtime_bound(const CoupledParams& p, double t) {
  require_symmetric_normalized(p);
  const double a = p.a;
  const double k = p.k;
  const double dx = p.x2 - p.x1;
  const double decay = std::exp(2.0 * a * t);
  const double mean_factor = -std::expm1(-2.0 * k * t);
  const double mean_sq = 0.25 * dx * dx * mean_factor * mean_factor * decay;
  const double var_gap = 0.5 / (2.0 * k - a) * decay * -std::expm1(-4.0 * k * t);
  return mean_sq + var_gap;
}

EquilibriumRate coupled_equilibrium_rate(const CoupledParams& p) {
  require_symmetric_normalized(p);
  const double a = p.a;
  const double k = p.k;
  const double mean_c = std::abs(p.x1) + std::abs(p.x2);
  EquilibriumRate r;
  r.c_original = std::sqrt(mean_c * mean_c + 0.5 * (1.0 / std::abs(a) + 1.0 / (2.0 * k - a)));
  r.c_reduced = std::sqrt(p.x1 * p.x1 + coupled_stationary_variance(a, k));
  r.rate = -a;
  return r;
}

std::pair<double, double> coupled_w2_to_equilibrium_sq(const CoupledParams& p, double t) {
  const auto [orig_eq, red_eq] = equilibrium_laws(p);
  return {w2_sq_1d(marginal(coupled_full_law(p, t), 1), orig_eq),
          w2_sq_1d(coupled_reduced_law(p, t), red_eq)};
}

std::vector<double> default_grid(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::InvalidParams, "grid rate must be positive");
  }
  constexpr int kHalf = 30;
  const double knee = 2.0 / rate;
  const double end = 20.0 / rate;
  std::vector<double> grid;
  grid.reserve(2 * kHalf);
  for (int i = 0; i < kHalf; ++i) {
    grid.push_back(knee * i / kHalf);
  }
  const double ratio = std::pow(end / knee, 1.0 / (kHalf - 1));
  for (int i = 0; i < kHalf; ++i) {
    grid.push_back(i == kHalf - 1 ? end : knee * std::pow(ratio, i));
  }
  return grid;
}

std::vector<double> default_grid(const OscillatorParams& p) {
  p.validate();
  return default_grid(p.lambda2());
}

std::vector<double> default_grid(const CoupledParams& p) {
  p.validate();
  return default_grid(-p.a);
}

std::vector<BoundReport> verify_bounds(const OscillatorParams& p, std::span<const double> grid) {
  p.validate();
  require_grid(grid);
  const double high = osc_highfriction_bound(p);
  const auto rate = osc_equilibrium_rate(p);

  std::vector<double> exact(grid.size());
  std::vector<std::pair<double, double>> to_eq(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    exact[i] = osc_w2_exact(p, grid[i]);
    to_eq[i] = osc_w2_to_equilibrium_sq(p, grid[i]);
  }

  std::vector<BoundReport> out;
  out.reserve(4 * grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.push_back(make_report("high_friction", grid[i], exact[i], high));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.push_back(make_report("longtime", grid[i], exact[i], osc_longtime_bound(p, grid[i])));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double decay = std::exp(-2.0 * rate.rate * grid[i]);
    out.push_back(make_report("eq_rate_original", grid[i], to_eq[i].first,
                              rate.c_original * rate.c_original * decay));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double decay = std::exp(-2.0 * rate.rate * grid[i]);
    out.push_back(make_report("eq_rate_reduced", grid[i], to_eq[i].second,
                              rate.c_reduced * rate.c_reduced * decay));
  }
  return out;
}

std::vector<BoundReport> verify_bounds(const CoupledParams& p, std::span<const double> grid) {
  require_symmetric_normalized(p);
  require_grid(grid);
  const double small_k = coupled_small_k_bound(p);
  const auto rate = coupled_equilibrium_rate(p);

  std::vector<double> exact(grid.size());
  std::vector<std::pair<double, double>> to_eq(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    exact[i] = coupled_w2_exact(p, grid[i]);
    to_eq[i] = coupled_w2_to_equilibrium_sq(p, grid[i]);
  }

  std::vector<BoundReport> out;
  out.reserve(4 * grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.push_back(make_report("small_k", grid[i], exact[i], small_k));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.push_back(make_report("longtime", grid[i], exact[i], coupled_longtime_bound(p, grid[i])));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double decay = std::exp(-2.0 * rate.rate * grid[i]);
    out.push_back(make_report("eq_rate_original", grid[i], to_eq[i].first,
                              rate.c_original * rate.c_original * decay));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double decay = std::exp(-2.0 * rate.rate * grid[i]);
    out.push_back(make_report("eq_rate_reduced", grid[i], to_eq[i].second,
                              rate.c_reduced * rate.c_reduced * decay));
  }
  return out;
}

}  // namespace modred
