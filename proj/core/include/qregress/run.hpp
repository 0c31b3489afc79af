#pragma once

// Sweep driver behind the command-line tool: deterministic parameter
// sweeps over the model maps, emitted as CSV (with a '#'-prefixed
// metadata block) or as a JSON mirror of the same table.
//
// Commands:
//   fig1  -- decay model: relative change of < sigma_plus(t1+tau)
//            sigma_minus(t1) > over a gamma0 x tau grid.
//   fig2  -- engineered dephasing: trace-distance measure, divisibility
//            measure and the peak count of the frequency distribution
//            over a gamma0 grid.
//   sweep -- generic (t1, tau) relative-change sweep for any model at a
//            fixed gamma0.
//   check -- self-validation suite (amplitude solver vs closed form,
//            dilation-oracle convergence, dephasing relative change,
//            projection-decomposition identities); any failing row makes
//            the process exit nonzero.
//
// Output is byte-deterministic for a fixed config: no timestamps, fixed
// formatting, sequential evaluation in grid order.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qregress {

inline constexpr const char* kToolVersion = "0.1.0";

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  // Value at index k: uniform including both endpoints (count 1 -> min).
  double at(int k) const;
};

struct RunConfig {
  std::string command = "fig1";  // fig1 | fig2 | sweep | check
  std::string model = "decay";   // decay | thermal | engineered (sweep)

  // Decay-model physical parameters (defaults: the headline sweep).
  double omega0 = 20.0;
  double lambda = 1.1;
  double delta = 0.2;
  // Thermal dephasing.
  double beta = 10.0;
  // Engineered dephasing distribution.
  double omega_bar = 1.0;
  double delta_max = 0.5;
  double sigma = 0.1;
  double delta_n = 1.0;

  // Fixed coupling for `sweep`, and the early time for fig1/sweep.
  double gamma0 = 1.0;
  double t1 = 0.1;

  // Grids.
  GridSpec gamma_grid{0.0, 1.0, 101};  // fig1, fig2
  GridSpec tau_grid{0.0, 3.0, 101};    // fig1, sweep
  GridSpec t_grid{0.0, 10.0, 11};      // sweep (t1 values)

  // Observable pair for dephasing sweeps: "zz" or "pm".
  std::string observables = "zz";

  // Numeric controls.
  double volterra_dt = 1e-3;  // check: amplitude-solver step
  double blp_t_max = 40.0;
  double blp_dt = 0.01;
  double rhp_dt = 0.05;
  double rhp_eps = 1e-4;
  int oracle_modes = 512;

  // Output.
  std::string out_path;        // empty -> stdout
  std::string format = "csv";  // csv | json
  std::string run_id;          // echoed in metadata only when nonempty
};

// Parse a key=value config file ('#' comments, blank lines allowed) into
// an existing config.  Unknown keys throw std::invalid_argument naming
// the key.
void apply_config_file(RunConfig& config, const std::string& path);

// One table cell; numbers and integers stay typed so the JSON mirror can
// serialize them natively.
struct Cell {
  enum class Kind { number, integer, text };
  Kind kind = Kind::number;
  double num = 0.0;
  long long integer = 0;
  std::string text;

  static Cell of(double v);
  static Cell of_int(long long v);
  static Cell of_text(std::string v);
};

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Ordered key/value metadata: config echo, tool version, numeric
  // controls, degenerate/singular row annotations.
  std::vector<std::pair<std::string, std::string>> metadata;
};

SweepTable cmd_fig1(const RunConfig& config);
SweepTable cmd_fig2(const RunConfig& config);
SweepTable cmd_sweep(const RunConfig& config);
// The check table carries metadata "suite_pass" ("1"/"0").
SweepTable cmd_check(const RunConfig& config);

void write_csv(const SweepTable& table, std::ostream& out);
void write_json(const SweepTable& table, std::ostream& out);

// Dispatch on config.command, write to config.out_path (or stdout) in
// config.format.  Returns the process exit status: 0 success, 1 usage
// error, 2 numeric failure, 3 failed validation suite.
int run_cli(const RunConfig& config);

}  // namespace qregress
