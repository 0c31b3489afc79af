#pragma once

// Independent reference implementations ("oracles") built on explicit
// system-bath dilations with a finite number of modes.  Nothing in this
// module uses dynamical maps, damping bases, or the regression recipe; the
// only shared ingredients are the spectral densities.
//
// Decay model: a qubit exchanging a single excitation with N modes.  In the
// frame rotating at the qubit frequency the sector amplitudes
// (c0, c1, lambda_q) obey the autonomous Schroedinger system
//     dc1/dt       = -i sum_q g_q lambda_q,
//     dlambda_q/dt = -i (omega_q - omega0) lambda_q - i g_q c1,
// while c0 (the |0, vac> amplitude) is constant.  The physical-frame
// amplitudes carry an extra phase e^{-i omega0 t} on every singly excited
// component; operator insertions account for that phase explicitly.
//
// The bath discretization is midpoint: mode k sits at the centre of cell k
// of the window and carries |g_k|^2 = J(omega_k) * dw.  A discrete bath is
// periodic in time with recurrence 2 pi / dw; quantities are trustworthy
// only well inside that horizon (the comparisons in this project stay
// below half of it).

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "qregress/qalg.hpp"
#include "qregress/spectral.hpp"

namespace qregress {

// ---------- bath discretization ----------

struct BathMode {
  double omega;  // mode frequency
  double g;      // coupling, real and nonnegative
};

struct DiscretizedBath {
  std::vector<BathMode> modes;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double mode_mass = 0.0;    // sum_k g_k^2
  double window_mass = 0.0;  // int_window J
  double full_mass = 0.0;    // reference mass of the full density
  bool mass_warning = false; // window misses > 1% of the full mass

  double delta_omega() const;
  // Poisson recurrence time 2 pi / delta_omega of the discrete bath.
  double recurrence_time() const;
};

// Midpoint discretization of the Lorentzian density over
// [centre - half_width, centre + half_width] (centre = omega0 + delta).
// Default half-width 80 lambda keeps the missing spectral mass below 1%.
DiscretizedBath discretize(const LorentzianBath& bath, int n_modes,
                           double half_width = 80.0);

// Midpoint discretization of the Ohmic density over [0, window_hi]
// (default 900 lambda); the reference mass integrates J out to 10x the
// window.
DiscretizedBath discretize_ohmic(const OhmicBath& bath, int n_modes,
                                 double window_hi = -1.0);

// ---------- single-excitation sector states ----------

struct DilationState {
  cplx c0{};               // |0, vac>
  cplx c1{};               // |1, vac>
  std::vector<cplx> lam;   // |0, 1_q>

  double norm() const;
};

DilationState excited_vacuum_state(int n_modes);

// Propagate by duration tau with an adaptive embedded Runge-Kutta 4(5)
// scheme (tolerances chosen to be far tighter than anything this module is
// used to validate).  Throws if the sector norm drifts by more than 1e-8.
DilationState evolve_decay(const DiscretizedBath& db, double omega0,
                           const DilationState& s, double tau,
                           double rel_tol = 1e-11, double abs_tol = 1e-13);

// Discrete-bath decay amplitude G_N(t): the c1 amplitude of the evolved
// excited-vacuum state in the rotating frame.
cplx oracle_decay_amplitude(const DiscretizedBath& db, double omega0,
                            double t);

// States at a nondecreasing list of times, evolved by continuation (one
// pass, no restarts); convenient for amplitude tables.
std::vector<DilationState> oracle_decay_states(const DiscretizedBath& db,
                                               double omega0,
                                               const std::vector<double>& times);

// ---------- correlator oracles ----------

// < sigma_plus(t_late) sigma_minus(t_early) > from the excited state with
// the bath in vacuum, by three sector propagations (state to t_early,
// operator-applied state onward to t_late, state to t_late) with
// physical-frame phases attached at the insertion times.  No reduced-map
// assumption enters anywhere.
cplx oracle_tpcf_decay(const DiscretizedBath& db, double omega0,
                       double t_early, double t_late);

// ---------- projection decomposition ----------

// Split the same correlator into the eight branches obtained by inserting
// 1 = P + Q at the initial time, before the early operator, and before the
// late operator, where P = Tr_E[.] (x) |vac><vac| is the product-state
// projector.  term[b0*4 + b1*2 + b2] uses P for bit 0 and Q for bit 1, in
// chain order (initial, early, late).  The sum of the eight equals the
// oracle correlator identically up to roundoff.
struct PQTerms {
  std::array<cplx, 8> term{};
  cplx total{};        // sum of the eight branches
  cplx amp_early{};    // G_N(t_early), for rebuilding the reduced map
  cplx amp_gap{};      // G_N(t_late - t_early)
  double max_norm_drift = 0.0;  // worst propagation norm drift observed
};

PQTerms pq_decomposition(const DiscretizedBath& db, double omega0,
                         double t_early, double t_late);

// ---------- dephasing oracles ----------

// Finite-sum versions of the thermal exponents over an explicit mode list:
//   g_N(t) = sum_k 4 (g_k^2 / w_k^2) (1 - cos w_k t) coth(beta w_k / 2),
//   h_N    = likewise with the two-time cosine combination.
double oracle_dephasing_g(const DiscretizedBath& db, double beta, double t);
double oracle_dephasing_h(const DiscretizedBath& db, double beta, double t1,
                          double t2);

// Two-time dephasing correlator built from the finite-sum exponents via
// the projector decomposition; an independent path to the continuum
// result. (o_early, o_late) follow the library-wide convention.
cplx oracle_tpcf_dephasing_modes(const DiscretizedBath& db, double beta,
                                 const Operator2& o_early,
                                 const Operator2& o_late, double t_early,
                                 double t_late, const Operator2& rho0);

// Convenience wrapper: midpoint-discretize the Ohmic bath at n_modes and
// evaluate the mode-level oracle.
cplx oracle_tpcf_dephasing(const OhmicBath& bath, int n_modes,
                           const Operator2& o_early, const Operator2& o_late,
                           double t_early, double t_late,
                           const Operator2& rho0);

}  // namespace qregress
