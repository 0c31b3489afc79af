#pragma once

// Spectral densities of the three bath families and the time-domain
// quantities derived from them:
//
//   * LorentzianBath: Lorentzian spectral density centred at omega0 + delta;
//     its correlation function f(t) drives the amplitude-damping model.
//   * OhmicBath: Ohmic spectral density with a Lorentz-Drude cutoff at
//     inverse temperature beta; the phase-damping exponents g(t) and
//     h(t1, t2) are thermal integrals over it.
//   * EngineeredDistribution: two-Gaussian frequency distribution whose
//     Fourier transform g(t) is the off-diagonal factor of the engineered
//     phase-damping map.
//
// Every frequency integral is evaluated over a finite window plus the exact
// remainder: the tail integrals are rotated into the complex frequency
// plane, where the oscillatory factor becomes a decaying exponential, and
// the resulting smooth semi-infinite integrals are mapped onto [0, 1].
// No truncation error is left behind beyond the quadrature tolerance.

#include <complex>

#include "qregress/quadrature.hpp"

namespace qregress {

// ---------- bath parameter sets ----------

struct LorentzianBath {
  double gamma0 = 1.0;  // coupling scale (dimensionless rate prefactor)
  double lambda = 1.0;  // spectral width
  double delta = 0.0;   // detuning of the spectral centre from omega0
  double omega0 = 20.0; // system transition frequency
};

struct OhmicBath {
  double gamma0 = 1.0;  // coupling scale
  double lambda = 1.0;  // Lorentz-Drude cutoff frequency
  double beta = 10.0;   // inverse temperature
};

struct EngineeredDistribution {
  double gamma0 = 0.5;    // mixing parameter in [0, 1]
  double omega_bar = 1.0; // centre frequency
  double delta_max = 0.5; // maximal half-splitting of the two Gaussians
  double sigma = 0.1;     // Gaussian width
  double delta_n = 1.0;   // mode-number difference probed by the coherence
};

void validate(const LorentzianBath& b);
void validate(const OhmicBath& b);
void validate(const EngineeredDistribution& d);

// Which quadrature engine evaluates the frequency integral.  The two
// engines are independent implementations; agreement between them is part
// of the test surface.
enum class QuadMethod { adaptive, gauss_legendre };

// ---------- Lorentzian bath ----------

// Spectral density J(w) = (gamma0 lambda^2 / 2 pi) / ((w - wc)^2 + lambda^2)
// with centre wc = omega0 + delta.
double lorentzian_density(const LorentzianBath& b, double omega);

// Bath correlation function f(t) = int J(w) e^{i (omega0 - w) t} dw.
// Closed form: (gamma0 lambda / 2) e^{-(lambda + i delta) t}.
std::complex<double> bath_corr_f(const LorentzianBath& b, double t);

// Same quantity by quadrature: window [0, omega0 + 40 lambda] plus exact
// contour-rotated completions of both tails.
std::complex<double> bath_corr_f_quadrature(const LorentzianBath& b, double t,
                                            const QuadratureSpec& spec = {});

// ---------- Ohmic thermal dephasing ----------

// Ohmic spectral density J(w) = (gamma0 / 2 pi) w lambda^2 / (w^2 + lambda^2).
double ohmic_density(const OhmicBath& b, double omega);

// Single-time phase-damping exponent
//   g(t) = 4 int_0^inf (J(w)/w^2) (1 - cos w t) coth(beta w / 2) dw.
double dephasing_g(const OhmicBath& b, double t,
                   QuadMethod method = QuadMethod::adaptive,
                   const QuadratureSpec& spec = {});

// Two-time exponent (t1 >= t2)
//   h(t1, t2) = 2 int_0^inf (J(w)/w^2)
//               (1 - cos w t1 - cos w t2 + cos w (t1 - t2)) coth(beta w/2) dw,
// satisfying h(t, t) = g(t) and 2 h(t1, t2) = g(t1) + g(t2) - g(t1 - t2).
double dephasing_h(const OhmicBath& b, double t1, double t2,
                   QuadMethod method = QuadMethod::adaptive,
                   const QuadratureSpec& spec = {});

// Time derivative of g:
//   g'(t) = 4 int_0^inf (J(w)/w) sin(w t) coth(beta w / 2) dw,
// the instantaneous dephasing rate of the thermal map.
double dephasing_g_dot(const OhmicBath& b, double t,
                       QuadMethod method = QuadMethod::adaptive,
                       const QuadratureSpec& spec = {});

// Numerically stable coth for x > 0 (series near 0, saturation for large x).
double coth_stable(double x);

// ---------- engineered distribution ----------

// |f(w)|^2: equal-weight mixture of two unit-normalized Gaussians at
// omega_bar -/+ delta with delta = delta_max |2 gamma0 - 1|.
double engineered_fsq(const EngineeredDistribution& d, double omega);

// Coherence factor g(t) = int |f(w)|^2 e^{-i delta_n w t} dw.
// Closed form: e^{-i delta_n omega_bar t} e^{-sigma^2 delta_n^2 t^2 / 2}
//              cos(delta delta_n t).
std::complex<double> engineered_g(const EngineeredDistribution& d, double t);

// Real envelope e^{-sigma^2 delta_n^2 t^2 / 2} cos(delta delta_n t); the
// coherence factor is e^{-i delta_n omega_bar t} times this, so
// |g(t)| = |envelope(t)|.
double engineered_g_envelope(const EngineeredDistribution& d, double t);

// Quadrature path for the same quantity (window covering both Gaussians
// to 8.5 sigma, adaptive Simpson with oscillation pre-splitting).
std::complex<double> engineered_g_quadrature(const EngineeredDistribution& d,
                                             double t,
                                             const QuadratureSpec& spec = {});

}  // namespace qregress
