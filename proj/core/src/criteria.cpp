#include "qregress/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qregress {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_npcf_args(const std::vector<Operator2>& ops,
                        const std::vector<double>& times) {
  if (ops.empty())
    throw std::invalid_argument("qrt_npcf: need at least one operator");
  if (ops.size() != times.size())
    throw std::invalid_argument(
        "qrt_npcf: ops and times must have equal length");
  double prev = 0.0;
  for (double t : times) {
    if (!(t >= prev))
      throw std::invalid_argument(
          "qrt_npcf: times must be nonnegative and nondecreasing");
    prev = t;
  }
}

}  // namespace

EpsilonRecord relative_change(cplx exact, cplx markov, double t1, double t2,
                              double degenerate_floor) {
  EpsilonRecord r;
  r.t1 = t1;
  r.t2 = t2;
  r.exact = exact;
  r.markov = markov;
  if (std::abs(exact) <= degenerate_floor) {
    r.degenerate = true;
    return r;
  }
  r.epsilon = 1.0 - markov / exact;
  r.epsilon_abs = std::abs(r.epsilon);
  return r;
}

cplx qrt_npcf(const ModelMap& map, const std::vector<Operator2>& ops,
              const std::vector<double>& times, const Operator2& rho0) {
  validate_npcf_args(ops, times);
  std::array<cplx, 4> c = damping_expand(map.basis, rho0);
  double t_prev = 0.0;
  for (size_t k = 0; k < ops.size(); ++k) {
    const MapFactors f = map.restarted(t_prev, times[k]);
    for (int i = 0; i < 4; ++i) c[i] *= f.scale[i];
    const CorrelatorMatrix a = correlator_matrix(map.basis, ops[k]);
    std::array<cplx, 4> next{};
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) next[j] += c[i] * a.a[i][j];
    c = next;
    t_prev = times[k];
  }
  cplx value{};
  for (int j = 0; j < 4; ++j) value += c[j] * map.basis.basis_traces[j];
  return value;
}

cplx qrt_npcf_direct(const ModelMap& map, const std::vector<Operator2>& ops,
                     const std::vector<double>& times, const Operator2& rho0) {
  validate_npcf_args(ops, times);
  Operator2 rho = rho0;
  double t_prev = 0.0;
  for (size_t k = 0; k < ops.size(); ++k) {
    rho = apply_map(map.basis, map.restarted(t_prev, times[k]), rho);
    rho = ops[k] * rho;
    t_prev = times[k];
  }
  return rho.trace();
}

// ---------- trace-distance measure ----------

MeasureResult blp_measure(const ModelMap& map, const Operator2& rho1,
                          const Operator2& rho2, double t_max, double dt) {
  if (!(t_max > 0.0) || !(dt > 0.0) || dt > t_max)
    throw std::invalid_argument("blp_measure: need 0 < dt <= t_max");
  if (!is_density(rho1, 1e-10, 1e-10) || !is_density(rho2, 1e-10, 1e-10))
    throw std::invalid_argument(
        "blp_measure: both initial states must be density matrices");

  const int n = static_cast<int>(std::lround(t_max / dt));
  MeasureResult res;
  res.t_max = t_max;
  res.dt = dt;

  std::vector<double> dist(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = k * dt;
    const MapFactors f = map.factors(t);
    dist[k] = trace_distance(apply_map(map.basis, f, rho1),
                             apply_map(map.basis, f, rho2));
  }

  bool in_run = false;
  double run_start = 0.0, run_value = 0.0;
  for (int k = 0; k < n; ++k) {
    const double rise = dist[k + 1] - dist[k];
    if (rise > 0.0) {
      if (!in_run) {
        in_run = true;
        run_start = k * dt;
        run_value = 0.0;
      }
      run_value += rise;
      res.value += rise;
    } else if (in_run) {
      res.contributing_intervals.emplace_back(run_start, k * dt);
      res.interval_values.push_back(run_value);
      in_run = false;
    }
  }
  if (in_run) {
    res.contributing_intervals.emplace_back(run_start, n * dt);
    res.interval_values.push_back(run_value);
  }
  return res;
}

BlpSearchResult blp_maximized(const ModelMap& map, double t_max, double dt,
                              int grid) {
  if (grid < 1)
    throw std::invalid_argument("blp_maximized: grid must be >= 1");

  BlpSearchResult best;
  bool have = false;
  auto consider = [&](const Operator2& a, const Operator2& b) {
    MeasureResult r = blp_measure(map, a, b, t_max, dt);
    if (!have || r.value > best.best.value) {
      have = true;
      best.best = std::move(r);
      best.rho1 = a;
      best.rho2 = b;
    }
  };

  // Equatorial antipodal pair |+> / |->.
  consider(op_bloch_state(0.5 * kPi, 0.0), op_bloch_state(0.5 * kPi, kPi));
  // Antipodal Bloch-pair grid.
  for (int i = 0; i < grid; ++i) {
    const double theta = kPi * (i + 0.5) / grid;
    for (int j = 0; j < grid; ++j) {
      const double phi = 2.0 * kPi * j / grid;
      consider(op_bloch_state(theta, phi),
               op_bloch_state(kPi - theta, phi + kPi));
    }
  }
  return best;
}

// ---------- divisibility measure ----------

MeasureResult rhp_divisibility(const ModelMap& map, double t_max, double dt,
                               double eps_step) {
  if (!(t_max > 0.0) || !(dt > 0.0) || dt > t_max)
    throw std::invalid_argument("rhp_divisibility: need 0 < dt <= t_max");
  if (!(eps_step > 0.0))
    throw std::invalid_argument("rhp_divisibility: eps_step must be positive");

  const int n = static_cast<int>(std::lround(t_max / dt));
  MeasureResult res;
  res.t_max = t_max;
  res.dt = dt;

  auto excess_rate = [&](double t, double eps) {
    const MapFactors f = map.factors_between(t, t + eps);
    return (trace_norm_4(choi_state(map.basis, f)) - 1.0) / eps;
  };

  std::vector<double> d(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = k * dt;
    // One Richardson step in eps removes the O(eps) discretization error.
    const double coarse = excess_rate(t, eps_step);
    const double fine = excess_rate(t, 0.5 * eps_step);
    double v = 2.0 * fine - coarse;
    if (v < 1e-9) v = 0.0;
    d[k] = v;
  }

  bool in_run = false;
  double run_start = 0.0, run_value = 0.0;
  for (int k = 0; k < n; ++k) {
    const double cell = 0.5 * (d[k] + d[k + 1]) * dt;
    if (cell > 0.0) {
      if (!in_run) {
        in_run = true;
        run_start = k * dt;
        run_value = 0.0;
      }
      run_value += cell;
      res.value += cell;
    } else if (in_run) {
      res.contributing_intervals.emplace_back(run_start, k * dt);
      res.interval_values.push_back(run_value);
      in_run = false;
    }
  }
  if (in_run) {
    res.contributing_intervals.emplace_back(run_start, n * dt);
    res.interval_values.push_back(run_value);
  }
  return res;
}

// ---------- divisible completion ----------

MapFactors divisible_completion(const ModelMap& map, double t1, double t2,
                                const QuadratureSpec& spec) {
  if (!(0.0 <= t1 && t1 <= t2))
    throw std::invalid_argument(
        "divisible_completion: need 0 <= t1 <= t2");
  if (!map.basis.rate)
    throw std::invalid_argument(
        "divisible_completion: map provides no instantaneous rates");
  MapFactors f;
  for (int i = 0; i < 4; ++i) {
    if (t2 == t1) {
      f.scale[i] = 1.0;
      continue;
    }
    const cplx integral = integrate_complex(
        [&](double s) { return map.basis.rate(i, s); }, t1, t2, spec);
    f.scale[i] = std::exp(integral);
  }
  return f;
}

MapFactors divisible_completion(const ModelMap& map, double t1, double t2) {
  QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-12;
  return divisible_completion(map, t1, t2, spec);
}

}  // namespace qregress
