#include "qregress/run.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qregress/criteria.hpp"
#include "qregress/models.hpp"
#include "qregress/oracle.hpp"

namespace qregress {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_int(long long v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld", v);
  return buf;
}

void meta(SweepTable& t, const std::string& key, const std::string& value) {
  t.metadata.emplace_back(key, value);
}

void meta(SweepTable& t, const std::string& key, double value) {
  t.metadata.emplace_back(key, fmt(value));
}

void meta_grid(SweepTable& t, const std::string& name, const GridSpec& g) {
  meta(t, name + "_min", g.min);
  meta(t, name + "_max", g.max);
  meta(t, name + "_count", fmt_int(g.count));
}

void echo_common(SweepTable& t, const RunConfig& c) {
  meta(t, "tool", "qregress");
  meta(t, "version", kToolVersion);
  meta(t, "command", c.command);
  if (!c.run_id.empty()) meta(t, "run_id", c.run_id);
}

void validate_grid(const GridSpec& g, const char* name) {
  if (g.count < 1)
    throw std::invalid_argument(std::string(name) +
                                ": grid count must be >= 1");
  if (!(g.max >= g.min))
    throw std::invalid_argument(std::string(name) +
                                ": grid max must be >= min");
}

// Deterministic uniform double in [lo, hi) independent of the standard
// library's distribution implementation.
double urand(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

std::string join_indices(const std::vector<int>& idx) {
  std::string s;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ",";
    s += fmt_int(idx[i]);
  }
  return s;
}

void push_epsilon_columns(std::vector<Cell>& row, const EpsilonRecord& rec) {
  row.push_back(Cell::of(std::real(rec.epsilon)));
  row.push_back(Cell::of(std::imag(rec.epsilon)));
  row.push_back(Cell::of(rec.epsilon_abs));
  row.push_back(Cell::of(std::real(rec.exact)));
  row.push_back(Cell::of(std::imag(rec.exact)));
  row.push_back(Cell::of(std::real(rec.markov)));
  row.push_back(Cell::of(std::imag(rec.markov)));
}

void annotate_flagged_rows(SweepTable& t, const std::vector<int>& degenerate,
                           const std::vector<int>& singular,
                           const std::vector<std::string>& singular_detail) {
  meta(t, "degenerate_count", fmt_int(static_cast<long long>(degenerate.size())));
  if (!degenerate.empty())
    meta(t, "degenerate_rows", join_indices(degenerate));
  meta(t, "singular_count", fmt_int(static_cast<long long>(singular.size())));
  if (!singular.empty()) {
    meta(t, "singular_rows", join_indices(singular));
    for (size_t i = 0; i < singular.size(); ++i)
      meta(t, "singular_detail_" + fmt_int(singular[i]), singular_detail[i]);
  }
}

// Count strict local maxima of the engineered frequency distribution on a
// dense scan grid over the support window.
int count_distribution_peaks(const EngineeredDistribution& dist,
                             int scan_points = 2001) {
  const double delta =
      dist.delta_max * std::abs(2.0 * dist.gamma0 - 1.0);
  const double lo = dist.omega_bar - delta - 6.0 * dist.sigma;
  const double hi = dist.omega_bar + delta + 6.0 * dist.sigma;
  std::vector<double> f(scan_points);
  for (int i = 0; i < scan_points; ++i) {
    const double w = lo + (hi - lo) * i / (scan_points - 1);
    f[i] = engineered_fsq(dist, w);
  }
  int peaks = 0;
  for (int i = 1; i + 1 < scan_points; ++i)
    if (f[i] > f[i - 1] && f[i] > f[i + 1]) ++peaks;
  return peaks;
}

}  // namespace

double GridSpec::at(int k) const {
  if (count == 1) return min;
  return min + (max - min) * static_cast<double>(k) /
                   static_cast<double>(count - 1);
}

Cell Cell::of(double v) {
  Cell c;
  c.kind = Kind::number;
  c.num = v;
  return c;
}

Cell Cell::of_int(long long v) {
  Cell c;
  c.kind = Kind::integer;
  c.integer = v;
  return c;
}

Cell Cell::of_text(std::string v) {
  Cell c;
  c.kind = Kind::text;
  c.text = std::move(v);
  return c;
}

// ---------- fig1 ----------

SweepTable cmd_fig1(const RunConfig& c) {
  validate_grid(c.gamma_grid, "gamma_grid");
  validate_grid(c.tau_grid, "tau_grid");
  if (!(c.t1 >= 0.0))
    throw std::invalid_argument("fig1: t1 must be nonnegative");

  SweepTable t;
  t.columns = {"gamma0",   "tau",      "eps_re",    "eps_im",   "eps_abs",
               "exact_re", "exact_im", "markov_re", "markov_im"};
  echo_common(t, c);
  meta(t, "model", "decay");
  meta(t, "omega0", c.omega0);
  meta(t, "lambda", c.lambda);
  meta(t, "delta", c.delta);
  meta(t, "t1", c.t1);
  meta_grid(t, "gamma", c.gamma_grid);
  meta_grid(t, "tau", c.tau_grid);

  const std::vector<Operator2> ops{op_sigma_minus(), op_sigma_plus()};
  const Operator2 rho0 = op_proj1();

  std::vector<int> degenerate, singular;
  std::vector<std::string> singular_detail;
  for (int ig = 0; ig < c.gamma_grid.count; ++ig) {
    const double g0 = c.gamma_grid.at(ig);
    const LorentzianBath bath{g0, c.lambda, c.delta, c.omega0};
    const ModelMap map = model_map_decay(bath);
    for (int it = 0; it < c.tau_grid.count; ++it) {
      const double tau = c.tau_grid.at(it);
      const double t2 = c.t1 + tau;
      const int row_index = ig * c.tau_grid.count + it;
      std::vector<Cell> row{Cell::of(g0), Cell::of(tau)};
      try {
        const cplx exact = exact_tpcf_decay(bath, c.t1, t2);
        const cplx markov = qrt_npcf(map, ops, {c.t1, t2}, rho0);
        const EpsilonRecord rec = relative_change(exact, markov, c.t1, t2);
        if (rec.degenerate) degenerate.push_back(row_index);
        push_epsilon_columns(row, rec);
      } catch (const std::runtime_error& e) {
        singular.push_back(row_index);
        singular_detail.push_back(e.what());
        for (int k = 0; k < 7; ++k) row.push_back(Cell::of(0.0));
      }
      t.rows.push_back(std::move(row));
    }
  }
  annotate_flagged_rows(t, degenerate, singular, singular_detail);
  return t;
}

// ---------- fig2 ----------

SweepTable cmd_fig2(const RunConfig& c) {
  validate_grid(c.gamma_grid, "gamma_grid");
  if (!(c.blp_t_max > 0.0 && c.blp_dt > 0.0 && c.rhp_dt > 0.0 &&
        c.rhp_eps > 0.0))
    throw std::invalid_argument("fig2: time-grid controls must be positive");

  SweepTable t;
  t.columns = {"gamma0", "blp", "rhp", "peak_count"};
  echo_common(t, c);
  meta(t, "model", "engineered");
  meta(t, "omega_bar", c.omega_bar);
  meta(t, "delta_max", c.delta_max);
  meta(t, "sigma", c.sigma);
  meta(t, "delta_n", c.delta_n);
  meta_grid(t, "gamma", c.gamma_grid);
  meta(t, "blp_t_max", c.blp_t_max);
  meta(t, "blp_dt", c.blp_dt);
  meta(t, "rhp_dt", c.rhp_dt);
  meta(t, "rhp_eps", c.rhp_eps);

  const Operator2 plus = op_bloch_state(0.5 * kPi, 0.0);
  const Operator2 minus = op_bloch_state(0.5 * kPi, kPi);

  std::vector<int> singular;
  std::vector<std::string> singular_detail;
  for (int ig = 0; ig < c.gamma_grid.count; ++ig) {
    const double g0 = c.gamma_grid.at(ig);
    const EngineeredDistribution dist{g0, c.omega_bar, c.delta_max, c.sigma,
                                      c.delta_n};
    const ModelMap map = model_map_engineered(dist);
    std::vector<Cell> row{Cell::of(g0)};
    try {
      const MeasureResult blp =
          blp_measure(map, plus, minus, c.blp_t_max, c.blp_dt);
      // The inverse map (and with it the divisibility measure) exists only
      // up to the first zero of the coherence factor; stop safely before
      // it.
      const double delta =
          dist.delta_max * std::abs(2.0 * dist.gamma0 - 1.0);
      double rhp_t_max = c.blp_t_max;
      if (delta * dist.delta_n > 1e-12)
        rhp_t_max = std::min(rhp_t_max,
                             0.98 * 0.5 * kPi / (delta * dist.delta_n));
      const MeasureResult rhp =
          rhp_divisibility(map, rhp_t_max, c.rhp_dt, c.rhp_eps);
      row.push_back(Cell::of(blp.value));
      row.push_back(Cell::of(rhp.value));
      row.push_back(Cell::of_int(count_distribution_peaks(dist)));
    } catch (const std::runtime_error& e) {
      singular.push_back(ig);
      singular_detail.push_back(e.what());
      row.push_back(Cell::of(0.0));
      row.push_back(Cell::of(0.0));
      row.push_back(Cell::of_int(0));
    }
    t.rows.push_back(std::move(row));
  }
  annotate_flagged_rows(t, {}, singular, singular_detail);
  return t;
}

// ---------- sweep ----------

namespace {

struct SweepModel {
  ModelMap map;
  std::function<cplx(double, double)> exact;  // (t_early, t_late)
  std::vector<Operator2> ops;                 // (o_early, o_late)
  Operator2 rho0;
};

SweepModel make_sweep_model(const RunConfig& c) {
  Operator2 o_early, o_late;
  if (c.observables == "zz") {
    o_early = op_sigma_z();
    o_late = op_sigma_z();
  } else if (c.observables == "pm") {
    o_early = op_sigma_minus();
    o_late = op_sigma_plus();
  } else {
    throw std::invalid_argument("sweep: observables must be 'zz' or 'pm'");
  }

  SweepModel m;
  m.ops = {o_early, o_late};
  if (c.model == "decay") {
    const LorentzianBath bath{c.gamma0, c.lambda, c.delta, c.omega0};
    m.map = model_map_decay(bath);
    m.ops = {op_sigma_minus(), op_sigma_plus()};
    m.rho0 = op_proj1();
    m.exact = [bath](double te, double tl) {
      return exact_tpcf_decay(bath, te, tl);
    };
  } else if (c.model == "thermal") {
    const OhmicBath bath{c.gamma0, c.lambda, c.beta};
    m.map = model_map_thermal(bath);
    m.rho0 = op_bloch_state(0.5 * kPi, 0.0);
    m.exact = [bath, o_early, o_late, rho0 = m.rho0](double te, double tl) {
      return exact_tpcf_dephasing(bath, o_early, o_late, te, tl, rho0);
    };
  } else if (c.model == "engineered") {
    const EngineeredDistribution dist{c.gamma0, c.omega_bar, c.delta_max,
                                      c.sigma, c.delta_n};
    m.map = model_map_engineered(dist);
    m.rho0 = op_bloch_state(0.5 * kPi, 0.0);
    m.exact = [dist, o_early, o_late, rho0 = m.rho0](double te, double tl) {
      return exact_tpcf_engineered(dist, o_early, o_late, te, tl, rho0);
    };
  } else {
    throw std::invalid_argument(
        "sweep: model must be 'decay', 'thermal' or 'engineered'");
  }
  return m;
}

}  // namespace

SweepTable cmd_sweep(const RunConfig& c) {
  validate_grid(c.t_grid, "t_grid");
  validate_grid(c.tau_grid, "tau_grid");
  const SweepModel m = make_sweep_model(c);

  SweepTable t;
  t.columns = {"t1",       "tau",      "eps_re",    "eps_im",   "eps_abs",
               "exact_re", "exact_im", "markov_re", "markov_im"};
  echo_common(t, c);
  meta(t, "model", c.model);
  meta(t, "gamma0", c.gamma0);
  if (c.model == "decay") {
    meta(t, "omega0", c.omega0);
    meta(t, "lambda", c.lambda);
    meta(t, "delta", c.delta);
  } else if (c.model == "thermal") {
    meta(t, "lambda", c.lambda);
    meta(t, "beta", c.beta);
    meta(t, "observables", c.observables);
  } else {
    meta(t, "omega_bar", c.omega_bar);
    meta(t, "delta_max", c.delta_max);
    meta(t, "sigma", c.sigma);
    meta(t, "delta_n", c.delta_n);
    meta(t, "observables", c.observables);
  }
  meta_grid(t, "t", c.t_grid);
  meta_grid(t, "tau", c.tau_grid);

  std::vector<int> degenerate, singular;
  std::vector<std::string> singular_detail;
  for (int i = 0; i < c.t_grid.count; ++i) {
    const double t1 = c.t_grid.at(i);
    for (int j = 0; j < c.tau_grid.count; ++j) {
      const double tau = c.tau_grid.at(j);
      const double t2 = t1 + tau;
      const int row_index = i * c.tau_grid.count + j;
      std::vector<Cell> row{Cell::of(t1), Cell::of(tau)};
      try {
        const cplx exact = m.exact(t1, t2);
        const cplx markov = qrt_npcf(m.map, m.ops, {t1, t2}, m.rho0);
        const EpsilonRecord rec = relative_change(exact, markov, t1, t2);
        if (rec.degenerate) degenerate.push_back(row_index);
        push_epsilon_columns(row, rec);
      } catch (const std::runtime_error& e) {
        singular.push_back(row_index);
        singular_detail.push_back(e.what());
        for (int k = 0; k < 7; ++k) row.push_back(Cell::of(0.0));
      }
      t.rows.push_back(std::move(row));
    }
  }
  annotate_flagged_rows(t, degenerate, singular, singular_detail);
  return t;
}

// ---------- check ----------

namespace {

struct CheckRow {
  std::string name;
  Cell metric;
  double tolerance;
  bool pass;
};

void push_check_row(SweepTable& t, const CheckRow& r) {
  t.rows.push_back({Cell::of_text(r.name), r.metric, Cell::of(r.tolerance),
                    Cell::of_int(r.pass ? 1 : 0)});
}

CheckRow check_volterra(const RunConfig& c) {
  CheckRow row{"amplitude_solver_vs_closed_form", Cell::of(0.0), 1e-8, false};
  double worst = 0.0;
  try {
    for (double delta : {0.0, 0.2})
      for (double g0 : {0.1, 1.0, 5.0}) {
        const LorentzianBath bath{g0, 1.1, delta, 20.0};
        const DecayAmplitude amp =
            solve_G_volterra(bath, 10.0, c.volterra_dt);
        for (size_t k = 0; k < amp.g.size(); ++k) {
          const double err = std::abs(
              amp.g[k] - closed_G_lorentzian(bath, double(k) * amp.dt));
          worst = std::max(worst, err);
        }
      }
    row.metric = Cell::of(worst);
    row.pass = worst <= row.tolerance;
  } catch (const std::exception& e) {
    row.metric = Cell::of_text(std::string("failed: ") + e.what());
    row.pass = false;
  }
  return row;
}

CheckRow check_oracle_ladder(SweepTable& t, const RunConfig& c) {
  CheckRow row{"oracle_convergence_ladder", Cell::of(0.0), 1e-3, false};
  try {
    std::vector<int> ladder;
    for (int div = 8; div >= 1; div /= 2)
      ladder.push_back(std::max(1, c.oracle_modes / div));
    std::string ladder_desc;
    for (size_t i = 0; i < ladder.size(); ++i)
      ladder_desc += (i ? "," : "") + fmt_int(ladder[i]);
    meta(t, "oracle_ladder", ladder_desc);

    const std::vector<std::pair<double, double>> grid{{0.1, 0.4}, {0.3, 0.7}};
    std::vector<double> errs;
    double horizon = 0.0;
    for (int n : ladder) {
      double worst = 0.0;
      for (double g0 : {0.1, 1.0}) {
        const LorentzianBath bath{g0, 1.1, 0.2, 20.0};
        const DiscretizedBath db = discretize(bath, n);
        horizon = 0.5 * db.recurrence_time();
        for (const auto& [t1, tau] : grid) {
          const double t2 = t1 + tau;
          const cplx oracle = oracle_tpcf_decay(db, bath.omega0, t1, t2);
          const cplx exact = exact_tpcf_decay(bath, t1, t2);
          worst = std::max(worst, std::abs(exact - oracle) / std::abs(oracle));
        }
      }
      errs.push_back(worst);
    }
    meta(t, "oracle_horizon", horizon);
    bool decreasing = true;
    for (size_t i = 0; i + 1 < errs.size(); ++i)
      if (errs[i + 1] > 1.1 * errs[i]) decreasing = false;
    row.metric = Cell::of(errs.back());
    row.pass = errs.back() <= row.tolerance && decreasing;
  } catch (const std::exception& e) {
    row.metric = Cell::of_text(std::string("failed: ") + e.what());
    row.pass = false;
  }
  return row;
}

CheckRow check_dephasing_eps(const RunConfig& c, bool engineered) {
  CheckRow row{engineered ? "engineered_relative_change"
                          : "thermal_relative_change",
               Cell::of(0.0), engineered ? 1e-10 : 1e-6, false};
  try {
    const Operator2 rho0 = op_bloch_state(0.5 * kPi, 0.0);
    const std::vector<std::vector<Operator2>> pairs{
        {op_sigma_z(), op_sigma_z()}, {op_sigma_minus(), op_sigma_plus()}};
    const std::vector<double> ts{0.5, 3.0, 6.5, 10.0};
    double worst = 0.0;
    auto run_grid = [&](const ModelMap& map,
                        const std::function<cplx(const Operator2&,
                                                 const Operator2&, double,
                                                 double)>& exact) {
      for (const auto& ops : pairs)
        for (double t1 : ts)
          for (double tau : ts) {
            const double t2 = t1 + tau;
            const cplx ex = exact(ops[0], ops[1], t1, t2);
            const cplx mk = qrt_npcf(map, ops, {t1, t2}, rho0);
            const EpsilonRecord rec = relative_change(ex, mk, t1, t2);
            if (!rec.degenerate) worst = std::max(worst, rec.epsilon_abs);
          }
    };
    if (engineered) {
      const EngineeredDistribution dist{1.0, c.omega_bar, c.delta_max,
                                        c.sigma, c.delta_n};
      run_grid(model_map_engineered(dist),
               [&](const Operator2& oe, const Operator2& ol, double te,
                   double tl) {
                 return exact_tpcf_engineered(dist, oe, ol, te, tl, rho0);
               });
    } else {
      const OhmicBath bath{1.0, c.lambda, c.beta};
      run_grid(model_map_thermal(bath),
               [&](const Operator2& oe, const Operator2& ol, double te,
                   double tl) {
                 return exact_tpcf_dephasing(bath, oe, ol, te, tl, rho0);
               });
    }
    row.metric = Cell::of(worst);
    row.pass = worst <= row.tolerance;
  } catch (const std::exception& e) {
    row.metric = Cell::of_text(std::string("failed: ") + e.what());
    row.pass = false;
  }
  return row;
}

void check_pq(SweepTable& t, const RunConfig& c, CheckRow& sum_row,
              CheckRow& map_row) {
  sum_row = {"projection_sum_identity", Cell::of(0.0), 1e-12, false};
  map_row = {"projected_term_matches_map", Cell::of(0.0), 1e-10, false};
  try {
    std::mt19937_64 rng(20260823ull);
    meta(t, "pq_seed", fmt_int(20260823ll));
    const int n_modes = std::max(4, c.oracle_modes / 4);
    meta(t, "pq_modes", fmt_int(n_modes));
    double worst_sum = 0.0, worst_map = 0.0;
    for (int rep = 0; rep < 3; ++rep) {
      const double g0 = urand(rng, 0.3, 1.2);
      const double t1 = urand(rng, 0.1, 0.6);
      const double tau = urand(rng, 0.3, 1.2);
      const LorentzianBath bath{g0, 1.1, 0.2, 20.0};
      const DiscretizedBath db = discretize(bath, n_modes);
      const PQTerms pq = pq_decomposition(db, bath.omega0, t1, t1 + tau);
      const cplx oracle = oracle_tpcf_decay(db, bath.omega0, t1, t1 + tau);
      worst_sum = std::max(worst_sum, std::abs(pq.total - oracle));

      const ModelMap discrete_map = model_map_decay_custom(
          [&db, &bath](double t) {
            return oracle_decay_amplitude(db, bath.omega0, t);
          },
          nullptr, bath.omega0);
      const cplx markov =
          qrt_npcf(discrete_map, {op_sigma_minus(), op_sigma_plus()},
                   {t1, t1 + tau}, op_proj1());
      worst_map = std::max(worst_map, std::abs(pq.term[0] - markov));
    }
    sum_row.metric = Cell::of(worst_sum);
    sum_row.pass = worst_sum <= sum_row.tolerance;
    map_row.metric = Cell::of(worst_map);
    map_row.pass = worst_map <= map_row.tolerance;
  } catch (const std::exception& e) {
    sum_row.metric = Cell::of_text(std::string("failed: ") + e.what());
    map_row.metric = Cell::of_text(std::string("failed: ") + e.what());
  }
}

}  // namespace

SweepTable cmd_check(const RunConfig& c) {
  SweepTable t;
  t.columns = {"check", "metric", "tolerance", "pass"};
  echo_common(t, c);
  meta(t, "volterra_dt", c.volterra_dt);
  meta(t, "oracle_modes", fmt_int(c.oracle_modes));
  meta(t, "lambda", c.lambda);
  meta(t, "beta", c.beta);

  std::vector<CheckRow> rows;
  rows.push_back(check_volterra(c));
  rows.push_back(check_oracle_ladder(t, c));
  rows.push_back(check_dephasing_eps(c, false));
  rows.push_back(check_dephasing_eps(c, true));
  CheckRow sum_row, map_row;
  check_pq(t, c, sum_row, map_row);
  rows.push_back(sum_row);
  rows.push_back(map_row);

  bool all_pass = true;
  for (const CheckRow& r : rows) {
    all_pass = all_pass && r.pass;
    push_check_row(t, r);
  }
  meta(t, "suite_pass", all_pass ? "1" : "0");
  return t;
}

// ---------- serialization ----------

namespace {

std::string cell_csv(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::number:
      return fmt(c.num);
    case Cell::Kind::integer:
      return fmt_int(c.integer);
    default: {
      // Keep the CSV single-token: commas and newlines in diagnostic
      // text become semicolons / spaces.
      std::string s = c.text;
      for (char& ch : s)
        if (ch == ',')
          ch = ';';
        else if (ch == '\n')
          ch = ' ';
      return s;
    }
  }
}

}  // namespace

void write_csv(const SweepTable& table, std::ostream& out) {
  for (const auto& [k, v] : table.metadata)
    out << "# " << k << " = " << v << "\n";
  for (size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << cell_csv(row[i]);
    out << "\n";
  }
}

void write_json(const SweepTable& table, std::ostream& out) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.metadata) m[k] = v;
  j["metadata"] = std::move(m);
  j["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const Cell& c : row) {
      switch (c.kind) {
        case Cell::Kind::number:
          r.push_back(c.num);
          break;
        case Cell::Kind::integer:
          r.push_back(c.integer);
          break;
        default:
          r.push_back(c.text);
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << "\n";
}

// ---------- config file ----------

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: invalid numeric value for '" + key +
                                "': " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: invalid integer value for '" + key +
                                "': " + v);
  }
}

}  // namespace

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "model")
      c.model = value;
    else if (key == "omega0")
      c.omega0 = parse_double(key, value);
    else if (key == "lambda")
      c.lambda = parse_double(key, value);
    else if (key == "delta")
      c.delta = parse_double(key, value);
    else if (key == "beta")
      c.beta = parse_double(key, value);
    else if (key == "omega_bar")
      c.omega_bar = parse_double(key, value);
    else if (key == "delta_max")
      c.delta_max = parse_double(key, value);
    else if (key == "sigma")
      c.sigma = parse_double(key, value);
    else if (key == "delta_n")
      c.delta_n = parse_double(key, value);
    else if (key == "gamma0")
      c.gamma0 = parse_double(key, value);
    else if (key == "t1")
      c.t1 = parse_double(key, value);
    else if (key == "gamma_min")
      c.gamma_grid.min = parse_double(key, value);
    else if (key == "gamma_max")
      c.gamma_grid.max = parse_double(key, value);
    else if (key == "gamma_count")
      c.gamma_grid.count = parse_int(key, value);
    else if (key == "tau_min")
      c.tau_grid.min = parse_double(key, value);
    else if (key == "tau_max")
      c.tau_grid.max = parse_double(key, value);
    else if (key == "tau_count")
      c.tau_grid.count = parse_int(key, value);
    else if (key == "t_min")
      c.t_grid.min = parse_double(key, value);
    else if (key == "t_max")
      c.t_grid.max = parse_double(key, value);
    else if (key == "t_count")
      c.t_grid.count = parse_int(key, value);
    else if (key == "observables")
      c.observables = value;
    else if (key == "volterra_dt")
      c.volterra_dt = parse_double(key, value);
    else if (key == "blp_t_max")
      c.blp_t_max = parse_double(key, value);
    else if (key == "blp_dt")
      c.blp_dt = parse_double(key, value);
    else if (key == "rhp_dt")
      c.rhp_dt = parse_double(key, value);
    else if (key == "rhp_eps")
      c.rhp_eps = parse_double(key, value);
    else if (key == "oracle_modes")
      c.oracle_modes = parse_int(key, value);
    else if (key == "out")
      c.out_path = value;
    else if (key == "format")
      c.format = value;
    else if (key == "run_id")
      c.run_id = value;
    else
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

// ---------- driver ----------

int run_cli(const RunConfig& c) {
  try {
    SweepTable table;
    bool suite_failed = false;
    if (c.command == "fig1") {
      table = cmd_fig1(c);
    } else if (c.command == "fig2") {
      table = cmd_fig2(c);
    } else if (c.command == "sweep") {
      table = cmd_sweep(c);
    } else if (c.command == "check") {
      table = cmd_check(c);
      for (const auto& [k, v] : table.metadata)
        if (k == "suite_pass" && v == "0") suite_failed = true;
    } else {
      throw std::invalid_argument("unknown command: " + c.command);
    }

    std::ofstream file;
    if (!c.out_path.empty()) {
      file.open(c.out_path, std::ios::binary);
      if (!file)
        throw std::invalid_argument("cannot open output file: " + c.out_path);
    }
    std::ostream& out = c.out_path.empty() ? std::cout : file;
    if (c.format == "csv")
      write_csv(table, out);
    else if (c.format == "json")
      write_json(table, out);
    else
      throw std::invalid_argument("format must be 'csv' or 'json', got: " +
                                  c.format);
    out.flush();
    return suite_failed ? 3 : 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qregress
