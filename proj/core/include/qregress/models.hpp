#pragma once

// The three exactly solvable system-bath models and their reduced
// descriptions:
//
//   * amplitude damping driven by a Lorentzian bath: the decay amplitude
//     G(t) solves the memory-kernel equation
//         dG/dt = - int_0^t f(t - s) G(s) ds,   G(0) = 1,
//     available both from a high-order Volterra solver and in closed form;
//   * thermal phase damping (Ohmic bath): off-diagonals scale by e^{-g(t)};
//   * engineered phase damping: off-diagonals scale by the coherence
//     factor g(t) of the two-Gaussian frequency distribution.
//
// Each model exposes a ModelMap: its damping basis together with the
// two-time scale factors exp(int_{t1}^{t2} lambda_i).  Two different
// intermediate maps can be formed from it and they are NOT the same thing
// once the dynamics is non-divisible:
//
//   factors_between(t1, t2) -- the divisible completion Phi(t2) Phi(t1)^{-1}
//                              (requires inverting the earlier map);
//   restarted(t1, t2)       -- the map of duration t2 - t1 started fresh,
//                              i.e. factors_between(0, t2 - t1); this is the
//                              intermediate map the regression recipe uses.
//
// Exact multi-time correlators are computed from the underlying dilations
// (no map composition involved) so they can be compared against the
// regression construction.  Correlator conventions: the pair (o_early,
// o_late) at times t_early <= t_late means  < o_late(t_late) o_early(t_early) >,
// the later operator standing to the left.  All phase conventions follow
// H_S = omega0 |1><1| for the damped qubit; the dephasing models are written
// in the frame where the system Hamiltonian is absorbed.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qregress/qalg.hpp"
#include "qregress/spectral.hpp"

namespace qregress {

// ---------- decay amplitude ----------

// Grid solution of the memory-kernel equation, with derivatives retained
// so that off-grid values interpolate at cubic-Hermite accuracy.
struct DecayAmplitude {
  double dt = 0.0;
  std::vector<cplx> g;   // G at nodes i * dt
  std::vector<cplx> dg;  // dG/dt at the same nodes

  double t_max() const { return dt * (g.empty() ? 0.0 : double(g.size() - 1)); }
  cplx value(double t) const;
  cplx derivative(double t) const;
};

// Solve the memory-kernel equation on [0, t_max] with step dt.
//   order = 4 (default): Gregory-corrected convolution weights with an
//     Adams predictor-corrector and a Taylor-series starter;
//   order = 2: trapezoid convolution with a Heun step (kept for step-halving
//     convergence studies).
// Preconditions: dt <= min(1/lambda, 1/sqrt(gamma0 lambda)) / 50.
// Throws std::runtime_error if |G| exceeds 1 + 1e-6 (instability).
DecayAmplitude solve_G_volterra(const LorentzianBath& bath, double t_max,
                                double dt, int order = 4);

// Closed-form amplitude: with a = lambda + i delta and
// d = sqrt(a^2 - 2 gamma0 lambda),
//   G(t) = e^{-a t / 2} [cosh(d t / 2) + (a/d) sinh(d t / 2)],
// with the d -> 0 limit taken through a series in (d t).
cplx closed_G_lorentzian(const LorentzianBath& bath, double t);
cplx closed_dG_lorentzian(const LorentzianBath& bath, double t);

// ---------- time-local decay rates ----------

// gamma(t) + i S(t) = -2 dG/dt / G(t): gamma is the instantaneous decay
// rate, S the Lamb-type frequency shift.  If |G| has dropped below
// rate_floor at or before t, the rate is undefined there; the error
// message names the first crossing time.
struct DecayRates {
  double gamma;
  double shift;
};

DecayRates decay_rates(const DecayAmplitude& amp, double t,
                       double rate_floor = 1e-8);
DecayRates decay_rates_closed(const LorentzianBath& bath, double t,
                              double rate_floor = 1e-8);

// ---------- model maps ----------

struct ModelMap {
  std::string family;  // "decay", "thermal", "engineered"
  DampingBasis basis;
  // Divisible completion factors between two times (t1 <= t2); inverting a
  // factor of modulus < 1e-12 throws std::runtime_error.
  std::function<MapFactors(double, double)> factors_between;

  MapFactors factors(double t) const { return factors_between(0.0, t); }
  MapFactors restarted(double t1, double t2) const {
    return factors_between(0.0, t2 - t1);
  }
};

// Damped qubit, closed-form amplitude.  Damping basis (in order):
//   |0><0| (rate 0), sigma_plus, sigma_minus, sigma_z,
// with factors 1, (G e^{-i omega0 t})-ratios, conjugate, |G|^2-ratios.
ModelMap model_map_decay(const LorentzianBath& bath);

// Same structure over a caller-supplied amplitude (e.g. a grid solution or
// a discrete-bath amplitude).  `amplitude_dot` may be empty, in which case
// instantaneous rates are unavailable (two-time factors still work).
ModelMap model_map_decay_custom(std::function<cplx(double)> amplitude,
                                std::function<cplx(double)> amplitude_dot,
                                double omega0);

// Thermal phase damping: basis 1, sigma_plus, sigma_minus, sigma_z with
// factors 1, e^{-g}-ratios, e^{-g}-ratios, 1.
ModelMap model_map_thermal(const OhmicBath& bath);

// Engineered phase damping: same basis; sigma_plus carries conj(g),
// sigma_minus carries g (the coherence factor is phase-carrying).
ModelMap model_map_engineered(const EngineeredDistribution& dist);

// Constant-rate semigroup dephasing (off-diagonals scale by
// e^{-gamma (t2 - t1)}): the exactly divisible reference family used to
// baseline the regression recipe and both measures.
ModelMap model_map_constant_dephasing(double gamma);

// ---------- exact two-time correlators ----------

// Damped qubit, < sigma_plus(t_late) sigma_minus(t_early) > starting from
// the excited state with the bath in vacuum.
cplx exact_tpcf_decay(const LorentzianBath& bath, double t_early,
                      double t_late);

// Thermal dephasing, < o_late(t_late) o_early(t_early) > on rho0 (x) thermal
// bath state.  Evaluated through the dephasing-projector decomposition with
// the exponents g(t) and h(t1, t2); no dynamical map enters.
cplx exact_tpcf_dephasing(const OhmicBath& bath, const Operator2& o_early,
                          const Operator2& o_late, double t_early,
                          double t_late, const Operator2& rho0);

// The four diagonal weights of the dephasing decomposition,
//   f1 = (1/4)(1 + e^{-g1} + e^{-g2} + E),
//   f2 = (1/4)(1 - e^{-g1} - e^{-g2} + E),
//   f3 = (1/4)(1 + e^{-g1} - e^{-g2} - E),
//   f4 = (1/4)(1 - e^{-g1} + e^{-g2} - E),
// with E = e^{-g1 - g2 + 2 h} and (g1, g2, h) evaluated at
// (t_late, t_early); they sum to 1 identically.
std::array<double, 4> dephasing_f_weights(const OhmicBath& bath,
                                          double t_early, double t_late);

// Engineered dephasing, < o_late(t_late) o_early(t_early) > on rho0; the
// eight-term projector decomposition weighted by coherence factors
// g(+-t_late), g(+-t_early), g(+-(t_late - t_early)).
cplx exact_tpcf_engineered(const EngineeredDistribution& dist,
                           const Operator2& o_early, const Operator2& o_late,
                           double t_early, double t_late,
                           const Operator2& rho0);

}  // namespace qregress
