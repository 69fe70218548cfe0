#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gridwalk/engine.hpp"
#include "gridwalk/random.hpp"

namespace gridwalk {

/// Exact sample statistics: mean, unbiased standard deviation (n-1
/// denominator, 0 for a single value) and order statistics. The median of
/// an even-length sample is the midpoint of the two central values.
struct SummaryStats {
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

inline SummaryStats summarize(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("cannot summarize an empty sample");
  SummaryStats s;
  s.count = static_cast<int>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.count;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = s.count > 1 ? std::sqrt(ss / (s.count - 1)) : 0.0;
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 == 1
                 ? values[mid]
                 : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

/// Monte Carlo sweep over (agents, grid_dim) combinations. Every episode
/// seed derives from (base_seed, N, c, run), so results are independent
/// of execution order and worker count.
struct ScenarioSweep {
  std::vector<int> agent_counts;
  std::vector<int> grid_dims;
  int runs = 1000;
  std::uint64_t base_seed = 0;
  EpisodeConfig episode;  ///< template; grid_dim/agents/seed are overridden

  void validate() const {
    if (agent_counts.empty())
      throw std::invalid_argument("agent_counts must be non-empty");
    if (grid_dims.empty())
      throw std::invalid_argument("grid_dims must be non-empty");
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    for (int n : agent_counts)
      for (int c : grid_dims) scenario_config(n, c, 0).validate();
  }

  EpisodeConfig scenario_config(int agents, int grid_dim, int run) const {
    EpisodeConfig cfg = episode;
    cfg.agents = agents;
    cfg.grid_dim = grid_dim;
    cfg.seed = derive_seed(base_seed, agents, grid_dim, run);
    cfg.record_history = false;
    return cfg;
  }
};

/// Aggregate consensus-time row for one (agents, grid_dim) cell. The
/// statistics cover converged runs only; cap hits are counted separately.
/// When no run converged the statistics are NaN.
struct EnsembleRow {
  int agents = 0;
  int grid_dim = 0;
  double density = 0.0;  ///< agents / grid_dim^2
  int runs = 0;
  SummaryStats tc_seconds;
  int unconverged = 0;
};

inline std::vector<EnsembleRow> run_ensemble(const ScenarioSweep& sweep,
                                             int workers = 1) {
  sweep.validate();
  if (workers < 1) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }

  struct Cell {
    int agents;
    int grid_dim;
  };
  std::vector<Cell> cells;
  for (int n : sweep.agent_counts)
    for (int c : sweep.grid_dims) cells.push_back({n, c});

  // times[cell][run]; NaN marks a run that hit the step cap
  std::vector<std::vector<double>> times(
      cells.size(), std::vector<double>(sweep.runs, 0.0));

  const long total = static_cast<long>(cells.size()) * sweep.runs;
  std::atomic<long> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const long t = cursor.fetch_add(1);
      if (t >= total) return;
      const std::size_t cell = static_cast<std::size_t>(t) / sweep.runs;
      const int run = static_cast<int>(t % sweep.runs);
      const EpisodeConfig cfg =
          sweep.scenario_config(cells[cell].agents, cells[cell].grid_dim, run);
      const EpisodeResult res = run_episode(cfg);
      times[cell][run] = res.consensus_reached
                             ? res.consensus_seconds
                             : std::numeric_limits<double>::quiet_NaN();
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<EnsembleRow> rows;
  rows.reserve(cells.size());
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    EnsembleRow row;
    row.agents = cells[cell].agents;
    row.grid_dim = cells[cell].grid_dim;
    row.density = static_cast<double>(row.agents) /
                  (static_cast<double>(row.grid_dim) * row.grid_dim);
    row.runs = sweep.runs;
    std::vector<double> converged;
    converged.reserve(sweep.runs);
    for (double t : times[cell]) {
      if (std::isnan(t))
        ++row.unconverged;
      else
        converged.push_back(t);
    }
    if (!converged.empty()) {
      row.tc_seconds = summarize(std::move(converged));
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.tc_seconds = {0, nan, nan, nan, nan, nan};
    }
    rows.push_back(row);
  }
  return rows;
}

/// Two-parameter exponential fit mu = a * exp(b * density) by least
/// squares on ln(mu). r2 is the coefficient of determination of the
/// log-space fit (1 when the fit is exact, including the constant case).
struct ExpFit {
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
};

inline ExpFit fit_exponential(const std::vector<EnsembleRow>& rows) {
  std::vector<double> x, y;
  for (const auto& row : rows) {
    if (!(row.tc_seconds.mean > 0.0))
      throw std::invalid_argument(
          "exponential fit requires every mean to be > 0");
    x.push_back(row.density);
    y.push_back(std::log(row.tc_seconds.mean));
  }
  if (x.size() < 3)
    throw std::invalid_argument("exponential fit requires at least 3 rows");
  const double x0 = x.front();
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x0; }))
    throw std::invalid_argument(
        "exponential fit requires at least two distinct densities");

  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  ExpFit fit;
  fit.b = sxy / sxx;
  fit.a = std::exp(my - fit.b * mx);
  if (syy == 0.0) {
    fit.r2 = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double pred = my + fit.b * (x[i] - mx);
      ss_res += (y[i] - pred) * (y[i] - pred);
    }
    fit.r2 = 1.0 - ss_res / syy;
  }
  return fit;
}

}  // namespace gridwalk
