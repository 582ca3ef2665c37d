#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "modred/bounds.hpp"
#include "modred/linear_sde.hpp"
#include "modred/models.hpp"
#include "modred/montecarlo.hpp"

namespace modred::cli {

namespace {

double w2_sq(const Gaussian& a, const Gaussian& b) {
  const double dm = a.mean()(0) - b.mean()(0);
  const double ds = std::sqrt(a.variance()) - std::sqrt(b.variance());
  return dm * dm + ds * ds;
}

// Runs `block` once per parameter set. With a sweep, every row gets the sweep
// value as a leading column.
CommandResult run_blocks(const RunConfig& cfg, std::vector<std::string> columns,
                         const std::function<int(const RunConfig&, Table&)>& block) {
  CommandResult result;
  if (!cfg.sweep) {
    result.table.columns = std::move(columns);
    result.exit_code = block(cfg, result.table);
    return result;
  }
  result.table.columns = {"sweep_value"};
  result.table.columns.insert(result.table.columns.end(), columns.begin(), columns.end());
  for (double v : cfg.sweep->values) {
    Table part;
    part.columns = columns;
    const int code = block(with_parameter(cfg, cfg.sweep->name, v), part);
    result.exit_code = std::max(result.exit_code, code);
    for (auto& row : part.rows) {
      row.insert(row.begin(), Cell(v));
      result.table.add_row(std::move(row));
    }
  }
  return result;
}

}  // namespace

LawPair laws_at(const RunConfig& cfg, double t) {
  if (cfg.model == ModelKind::Oscillator) {
    return {oscillator_marginal_law(cfg.oscillator, t), oscillator_reduced_law(cfg.oscillator, t)};
  }
  const auto& p = cfg.coupled;
  if (p.is_symmetric_normalized()) {
    return {marginal(coupled_full_law(p, t), 1), coupled_reduced_law(p, t)};
  }
  const Gaussian start = Gaussian::point_mass(Gaussian::Vector(p.initial_state()));
  const Gaussian start1 = Gaussian::univariate(p.x1, 0.0);
  return {marginal(propagate_law(p.model(), start, t), 1),
          propagate_law(reduce_coupled(p).model(), start1, t)};
}

CommandResult cmd_law(const RunConfig& cfg) {
  return run_blocks(
      cfg, {"t", "mean_full", "var_full", "mean_reduced", "var_reduced", "w2", "w2_sq"},
      [](const RunConfig& c, Table& table) {
        for (double t : make_grid(c)) {
          const LawPair laws = laws_at(c, t);
          table.add_row({t, laws.full.mean()(0), laws.full.variance(), laws.reduced.mean()(0),
                         laws.reduced.variance(), w2_1d(laws.full, laws.reduced),
                         w2_sq(laws.full, laws.reduced)});
        }
        return int{kSuccess};
      });
}

CommandResult cmd_bounds(const RunConfig& cfg) {
  return run_blocks(cfg, {"bound_name", "t", "exact_sq", "bound", "margin", "satisfied"},
                    [](const RunConfig& c, Table& table) {
                      const auto grid = make_grid(c);
                      const auto reports = c.model == ModelKind::Oscillator
                                               ? verify_bounds(c.oscillator, grid)
                                               : verify_bounds(c.coupled, grid);
                      int code = kSuccess;
                      for (const auto& r : reports) {
                        table.add_row({r.name, r.t, r.exact_sq, r.bound, r.margin,
                                       r.satisfied ? 1.0 : 0.0});
                        if (!r.satisfied) code = kBoundViolation;
                      }
                      return code;
                    });
}

CommandResult cmd_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) {
    throw Error(ErrorCode::InvalidParams, "sweep needs --sweep name=v1,v2,...");
  }
  CommandResult result;
  result.table.columns = {"value", "sup_w2_sq", "bound", "ratio"};
  for (double v : cfg.sweep->values) {
    const RunConfig c = with_parameter(cfg, cfg.sweep->name, v);
    const auto grid = make_grid(c);
    double sup = 0.0;
    double bound = 0.0;
    if (c.model == ModelKind::Oscillator) {
      bound = osc_highfriction_bound(c.oscillator);
      for (double t : grid) sup = std::max(sup, osc_w2_exact(c.oscillator, t));
    } else {
      bound = coupled_small_k_bound(c.coupled, c.k_max);
      for (double t : grid) sup = std::max(sup, coupled_w2_exact(c.coupled, t));
    }
    if (!bound_holds(sup, bound)) result.exit_code = kBoundViolation;
    result.table.add_row({v, sup, bound, sup / bound});
  }
  return result;
}

std::vector<double> simulation_times(const RunConfig& cfg) {
  if (!cfg.grid_explicit) return {0.5, 1.0, 2.0};
  std::vector<double> times;
  for (double t : make_grid(cfg)) {
    const double snapped = std::round(t / cfg.sim.dt) * cfg.sim.dt;
    if (times.empty() || snapped > times.back()) times.push_back(snapped);
  }
  return times;
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  return run_blocks(
      cfg,
      {"t", "emp_mean", "emp_var", "emp_w2_vs_reduced", "se_mean", "se_var", "se_w2",
       "analytic_w2", "z_score"},
      [](const RunConfig& c, Table& table) {
        const auto times = simulation_times(c);
        SimConfig sim;
        sim.dt = c.sim.dt;
        sim.n_paths = c.sim.paths;
        sim.seed = c.sim.seed;
        sim.n_steps = c.sim.steps.value_or(
            std::max<std::int64_t>(1, std::llround(times.back() / c.sim.dt)));

        LinearModel full = c.model == ModelKind::Oscillator ? c.oscillator.model() : c.coupled.model();
        LinearModel reduced = c.model == ModelKind::Oscillator ? reduce_oscillator(c.oscillator).model()
                                                               : reduce_coupled(c.coupled).model();
        const Vec2 z0 = c.model == ModelKind::Oscillator ? c.oscillator.initial_state()
                                                         : c.coupled.initial_state();
        const Gaussian start = Gaussian::point_mass(Gaussian::Vector(z0));
        const Gaussian start1 = Gaussian::univariate(z0(0), 0.0);

        sim.stream = 0;
        const auto original = simulate(full, start, sim, times);
        sim.stream = 1;
        const auto reduced_samples = simulate(reduced, start1, sim, times);

        for (std::size_t i = 0; i < times.size(); ++i) {
          const auto x = original[i].coordinate(0);
          const auto y = reduced_samples[i].coordinate(0);
          const auto moments = moment_estimates(x);
          const double emp_w2 = empirical_w2_1d(x, y);
          const double se_w2 = bootstrap_w2_se(x, y, 200, c.sim.seed + i);
          const LawPair laws = laws_at(c, original[i].t);
          const double analytic = w2_1d(laws.full, laws.reduced);
          const double z = se_w2 > 0.0 ? (emp_w2 - analytic) / se_w2
                                       : std::numeric_limits<double>::quiet_NaN();
          table.add_row({original[i].t, moments.mean, moments.variance, emp_w2, moments.se_mean,
                         moments.se_variance, se_w2, analytic, z});
        }
        return int{kSuccess};
      });
}

}  // namespace modred::cli
