#pragma once

// Markovianity diagnostics built on top of the model maps:
//
//   * the regression-recipe multi-time correlator (alternate map
//     propagation with restarted intermediate maps and operator
//     insertion) and the relative change
//         epsilon = 1 - markov / exact
//     between the recipe value and the exact dilation value;
//   * the trace-distance (information backflow) measure
//         N = integral of the positive part of dD/dt,
//     maximized over antipodal Bloch pairs;
//   * the divisibility measure
//         I = integral of the positive part of
//             d(t) = lim (||Choi(Phi_t^{t+eps})||_1 - 1) / eps,
//     which detects intermediate maps that fail complete positivity;
//   * the divisible completion: rebuilding the two-time factors by
//     integrating the instantaneous damping-basis rates, which must agree
//     with the directly constructed factors whenever the family is
//     invertible.

#include <array>
#include <utility>
#include <vector>

#include "qregress/models.hpp"
#include "qregress/quadrature.hpp"

namespace qregress {

// ---------- relative change ----------

struct EpsilonRecord {
  double t1 = 0.0;  // earlier time of the compared correlator
  double t2 = 0.0;  // later time
  cplx exact{};
  cplx markov{};
  cplx epsilon{};
  double epsilon_abs = 0.0;
  // Set when |exact| <= the degenerate floor: epsilon is left at 0 instead
  // of dividing by a value at the noise level.
  bool degenerate = false;
};

// epsilon = 1 - markov/exact with the degenerate-floor guard on |exact|.
EpsilonRecord relative_change(cplx exact, cplx markov, double t1 = 0.0,
                              double t2 = 0.0,
                              double degenerate_floor = 1e-12);

// ---------- regression-recipe correlators ----------

// < o_n(t_n) ... o_1(t_1) > built purely from the reduced map:
//     Tr[ o_n Phi^{(n-1)} [ o_{n-1} ... o_1 Phi^{(0)} [rho0] ... ] ],
// where leg k uses the restarted intermediate map of duration
// t_{k+1} - t_k (and the first leg runs from time 0 to t_1).
//
// qrt_npcf contracts entirely in damping-basis coefficient space (scalar
// factors and left-multiplication matrices); qrt_npcf_direct repeats the
// computation with explicit density-matrix map applications.  The two are
// algebraically identical and are kept as independent code paths.
//
// Preconditions: ops and times have equal nonzero length; times
// nondecreasing and nonnegative.  Map singularity errors propagate.
cplx qrt_npcf(const ModelMap& map, const std::vector<Operator2>& ops,
              const std::vector<double>& times, const Operator2& rho0);
cplx qrt_npcf_direct(const ModelMap& map, const std::vector<Operator2>& ops,
                     const std::vector<double>& times, const Operator2& rho0);

// ---------- measures ----------

// A nonnegative measure accumulated over a uniform time grid, together
// with the maximal intervals that contributed positively.  `value` equals
// the sum of `interval_values` by construction.
struct MeasureResult {
  double value = 0.0;
  std::vector<std::pair<double, double>> contributing_intervals;
  std::vector<double> interval_values;  // one entry per interval
  double t_max = 0.0;
  double dt = 0.0;
};

// Trace-distance measure for one initial pair: both states are pushed
// through the one-time map on the grid k*dt, and the positive increments
// of D(t) are accumulated (the discrete positive-part integral of dD/dt).
MeasureResult blp_measure(const ModelMap& map, const Operator2& rho1,
                          const Operator2& rho2, double t_max, double dt);

// Maximization wrapper: the antipodal equatorial pair |+><+| / |-><-| plus
// a grid x grid search over antipodal Bloch pairs.  Returns the best pair
// found with its measure.
struct BlpSearchResult {
  MeasureResult best;
  Operator2 rho1, rho2;
};
BlpSearchResult blp_maximized(const ModelMap& map, double t_max, double dt,
                              int grid = 12);

// Divisibility measure: at each grid node t the intermediate factors
// between t and t + eps are formed (this requires inverting the map at t),
// their Choi state's trace-norm excess over 1 is divided by eps, and one
// Richardson step (eps, eps/2) removes the leading finite-eps error.
// Values below 1e-9 are clamped to zero (finite-difference noise floor);
// the positive remainder is integrated by trapezoid.  Map-inversion
// singularities propagate and name the offending time.
MeasureResult rhp_divisibility(const ModelMap& map, double t_max, double dt,
                               double eps_step = 1e-4);

// ---------- divisible completion ----------

// Rebuild the two-time factors as exp(integral_{t1}^{t2} lambda_i(s) ds)
// from the instantaneous damping-basis rates.  For an invertible family
// this must coincide with factors_between(t1, t2) and satisfy the
// semigroup chain property.  Throws std::invalid_argument if the map
// carries no rate information; rate singularities propagate.
MapFactors divisible_completion(const ModelMap& map, double t1, double t2);
MapFactors divisible_completion(const ModelMap& map, double t1, double t2,
                                const QuadratureSpec& spec);

}  // namespace qregress
