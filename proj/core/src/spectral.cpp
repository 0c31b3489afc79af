#include "qregress/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace qregress {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};

// Map a smooth integral over [0, inf) onto [0, 1] via w = v / (v + d); the
// scale d should match the decay length of the integrand.
cplx half_line_integral(const std::function<cplx(double)>& f, double d,
                        const QuadratureSpec& spec) {
  auto mapped = [&](double w) -> cplx {
    if (w >= 1.0 - 1e-13) return cplx{};
    const double v = d * w / (1.0 - w);
    const double jac = d / ((1.0 - w) * (1.0 - w));
    return f(v) * jac;
  };
  return integrate_complex(mapped, 0.0, 1.0, spec);
}

// (sin x / x)^2 with the correct x -> 0 limit.
double sinc_sq(double x) {
  if (std::abs(x) < 1e-150) return 1.0;
  const double s = std::sin(x) / x;
  return s * s;
}

}  // namespace

// ---------- validation ----------

void validate(const LorentzianBath& b) {
  if (!(b.lambda > 0.0))
    throw std::invalid_argument("LorentzianBath: lambda must be positive");
  if (!(b.gamma0 >= 0.0))
    throw std::invalid_argument("LorentzianBath: gamma0 must be nonnegative");
  if (!(b.omega0 >= 0.0))
    throw std::invalid_argument("LorentzianBath: omega0 must be nonnegative");
  if (!std::isfinite(b.delta))
    throw std::invalid_argument("LorentzianBath: delta must be finite");
}

void validate(const OhmicBath& b) {
  if (!(b.lambda > 0.0))
    throw std::invalid_argument("OhmicBath: lambda must be positive");
  if (!(b.gamma0 >= 0.0))
    throw std::invalid_argument("OhmicBath: gamma0 must be nonnegative");
  if (!(b.beta > 0.0))
    throw std::invalid_argument("OhmicBath: beta must be positive");
}

void validate(const EngineeredDistribution& d) {
  if (!(d.sigma > 0.0))
    throw std::invalid_argument(
        "EngineeredDistribution: sigma must be positive");
  if (!(d.delta_max >= 0.0))
    throw std::invalid_argument(
        "EngineeredDistribution: delta_max must be nonnegative");
  if (!(d.gamma0 >= 0.0 && d.gamma0 <= 1.0))
    throw std::invalid_argument(
        "EngineeredDistribution: gamma0 must lie in [0, 1]");
  if (!(d.delta_n > 0.0))
    throw std::invalid_argument(
        "EngineeredDistribution: delta_n must be positive");
}

// ---------- Lorentzian bath ----------

namespace {

// J continued to complex frequency.
cplx lorentzian_density_c(const LorentzianBath& b, cplx z) {
  const double wc = b.omega0 + b.delta;
  const cplx u = z - wc;
  return (b.gamma0 * b.lambda * b.lambda / (2.0 * kPi)) /
         (u * u + b.lambda * b.lambda);
}

}  // namespace

double lorentzian_density(const LorentzianBath& b, double omega) {
  validate(b);
  return std::real(lorentzian_density_c(b, cplx(omega, 0.0)));
}

cplx bath_corr_f(const LorentzianBath& b, double t) {
  validate(b);
  if (!(t >= 0.0))
    throw std::invalid_argument("bath_corr_f: t must be nonnegative");
  return 0.5 * b.gamma0 * b.lambda *
         std::exp(-cplx(b.lambda, b.delta) * t);
}

cplx bath_corr_f_quadrature(const LorentzianBath& b, double t,
                            const QuadratureSpec& spec) {
  validate(b);
  if (!(t >= 0.0))
    throw std::invalid_argument(
        "bath_corr_f_quadrature: t must be nonnegative");

  const double hi = b.omega0 + 40.0 * b.lambda;
  const double wc = b.omega0 + b.delta;

  // Window part: int_0^hi J(w) e^{i (omega0 - w) t} dw.
  QuadratureSpec wspec = spec;
  if (t > 0.0) wspec.oscillation_period_hint = 2.0 * kPi / t;
  const cplx win = integrate_complex(
      [&](double w) {
        return lorentzian_density_c(b, cplx(w, 0.0)) *
               std::exp(kI * (b.omega0 - w) * t);
      },
      0.0, hi, wspec);

  // Tails, completed exactly by rotating the contour to where the phase
  // factor decays.  For t >= 0:
  //   int_hi^inf J(w) e^{-i w t} dw = -i e^{-i hi t} int_0^inf
  //       J(hi - i v) e^{-v t} dv,
  //   int_{-inf}^0 J(w) e^{-i w t} dw = i int_0^inf J(-i v) e^{-v t} dv.
  QuadratureSpec tspec = spec;
  tspec.oscillation_period_hint.reset();
  const double d_hi = 1.0 / (t + 1.0 / (hi - wc));
  const cplx tail_hi =
      std::exp(kI * b.omega0 * t) * (-kI) * std::exp(-kI * hi * t) *
      half_line_integral(
          [&](double v) {
            return lorentzian_density_c(b, cplx(hi, -v)) * std::exp(-v * t);
          },
          d_hi, tspec);
  const double d_lo = 1.0 / (t + 1.0 / std::max(wc, b.lambda));
  const cplx tail_lo =
      std::exp(kI * b.omega0 * t) * kI *
      half_line_integral(
          [&](double v) {
            return lorentzian_density_c(b, cplx(0.0, -v)) * std::exp(-v * t);
          },
          d_lo, tspec);

  return win + tail_hi + tail_lo;
}

// ---------- Ohmic thermal dephasing ----------

double ohmic_density(const OhmicBath& b, double omega) {
  validate(b);
  return (b.gamma0 / (2.0 * kPi)) * omega * b.lambda * b.lambda /
         (omega * omega + b.lambda * b.lambda);
}

double coth_stable(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("coth_stable: x must be positive");
  if (x > 20.0) return 1.0;
  if (x < 1e-8) return 1.0 / x + x / 3.0;
  return 1.0 / std::tanh(x);
}

namespace {

// w * coth(beta w / 2), continuous through w = 0.
double wcoth(double w, double beta) {
  const double x = 0.5 * beta * w;
  if (x < 1e-8) return 2.0 / beta + beta * w * w / 6.0;
  if (x > 20.0) return w;
  return w / std::tanh(x);
}

// Finite-window cutoff used for the Ohmic frequency integrals; the
// remainder beyond it is completed exactly by contour rotation.
double ohmic_window(const OhmicBath& b) { return 300.0 * b.lambda; }

// The common positive integrand weight (J(w)/w^2) coth(beta w / 2) written
// in a form that is regular at w = 0 when combined with the oscillatory
// factors: weight(w) = (gamma0 lambda^2 / 2 pi) / (w^2 + lambda^2) *
//                      [w coth(beta w / 2)] / w^2.
// Callers multiply by (t^2/2) sinc^2(w t / 2)-style factors so that the
// 1/w^2 never appears explicitly.
double ohmic_weight_regular(const OhmicBath& b, double w) {
  return (b.gamma0 * b.lambda * b.lambda / (2.0 * kPi)) /
         (w * w + b.lambda * b.lambda) * wcoth(w, b.beta);
}

// Tail moment M_p(t) = int_W^inf (J(w)/w^2) w^p coth(beta w/2) e^{i w t} dw
// for p in {0, 1}, evaluated by rotating to w = W + i v, where the phase
// factor decays.  For beta W / 2 >= 20 the coth factor is 1 to below 1e-17
// on the whole rotated path.
cplx ohmic_tail_moment(const OhmicBath& b, double t, int p,
                       const QuadratureSpec& spec) {
  const double W = ohmic_window(b);
  const bool coth_is_one = 0.5 * b.beta * W >= 20.0;
  auto integrand = [&](double v) -> cplx {
    const cplx z(W, v);
    cplx k = (b.gamma0 * b.lambda * b.lambda / (2.0 * kPi)) /
             (z * (z * z + b.lambda * b.lambda));
    if (p == 1) k *= z;
    if (!coth_is_one) k /= std::tanh(0.5 * b.beta * z);
    return k * std::exp(-v * t);
  };
  QuadratureSpec tspec = spec;
  tspec.oscillation_period_hint.reset();
  const double d = 1.0 / (t + 1.0 / W);
  return std::exp(kI * W * t) * kI * half_line_integral(integrand, d, tspec);
}

double ohmic_integral(const OhmicBath& b,
                      const std::function<double(double)>& osc_factor,
                      double max_time, QuadMethod method,
                      const QuadratureSpec& spec) {
  const double W = ohmic_window(b);
  auto integrand = [&](double w) {
    return ohmic_weight_regular(b, w) * osc_factor(w);
  };
  if (method == QuadMethod::adaptive) {
    QuadratureSpec wspec = spec;
    if (max_time > 0.0) wspec.oscillation_period_hint = 2.0 * kPi / max_time;
    return integrate(integrand, 0.0, W, wspec);
  }
  // Gauss-Legendre panels sized so that no panel spans more than ~3
  // oscillations of the fastest factor.
  int panels = 64;
  if (max_time > 0.0) {
    const double per_panel = 3.0 * 2.0 * kPi / max_time;
    panels = std::max(64, static_cast<int>(std::ceil(W / per_panel)));
  }
  return integrate_gauss(integrand, 0.0, W, panels, 20);
}

}  // namespace

double dephasing_g(const OhmicBath& b, double t, QuadMethod method,
                   const QuadratureSpec& spec) {
  validate(b);
  if (!(t >= 0.0))
    throw std::invalid_argument("dephasing_g: t must be nonnegative");
  if (t == 0.0) return 0.0;

  // Window part: 4 int_0^W weight(w) * (t^2/2) sinc^2(w t / 2) dw.
  auto osc = [&](double w) { return 0.5 * t * t * sinc_sq(0.5 * w * t); };
  const double win = 4.0 * ohmic_integral(b, osc, t, method, spec);
  // Exact remainder: 4 [M_0(0) - Re M_0(t)].
  const double tail = 4.0 * (std::real(ohmic_tail_moment(b, 0.0, 0, spec)) -
                             std::real(ohmic_tail_moment(b, t, 0, spec)));
  return win + tail;
}

double dephasing_h(const OhmicBath& b, double t1, double t2, QuadMethod method,
                   const QuadratureSpec& spec) {
  validate(b);
  if (!(t1 >= t2 && t2 >= 0.0))
    throw std::invalid_argument("dephasing_h: need t1 >= t2 >= 0");
  if (t1 == 0.0) return 0.0;

  const double td = t1 - t2;
  auto osc = [&](double w) {
    // (1 - cos w t1 - cos w t2 + cos w (t1 - t2)) / w^2, regular at w = 0.
    double s = 0.5 * t1 * t1 * sinc_sq(0.5 * w * t1);
    if (t2 > 0.0) s += 0.5 * t2 * t2 * sinc_sq(0.5 * w * t2);
    if (td > 0.0) s -= 0.5 * td * td * sinc_sq(0.5 * w * td);
    return s;
  };
  const double win = 2.0 * ohmic_integral(b, osc, t1, method, spec);
  // Each oscillatory term pairs with the constant as (1 - cos w t), so the
  // tail decomposes into brackets M_0(0) - Re M_0(t) that vanish identically
  // at t = 0.  Keeping the brackets intact is what makes the degenerate
  // cases (t2 = 0 or t1 = t2) come out exactly right.
  const double m00 = std::real(ohmic_tail_moment(b, 0.0, 0, spec));
  auto bracket = [&](double t) {
    return t > 0.0 ? m00 - std::real(ohmic_tail_moment(b, t, 0, spec)) : 0.0;
  };
  const double tail = bracket(t1) + bracket(t2) - bracket(td);
  return win + 2.0 * tail;
}

double dephasing_g_dot(const OhmicBath& b, double t, QuadMethod method,
                       const QuadratureSpec& spec) {
  validate(b);
  if (!(t >= 0.0))
    throw std::invalid_argument("dephasing_g_dot: t must be nonnegative");
  if (t == 0.0) return 0.0;

  // Window part: 4 int_0^W weight(w) * t sinc(w t) dw, since
  // (J/w) sin(w t) coth = weight(w) * sin(w t) / w.
  auto osc = [&](double w) {
    const double x = w * t;
    const double s = (std::abs(x) < 1e-150) ? 1.0 : std::sin(x) / x;
    return t * s;
  };
  const double win = 4.0 * ohmic_integral(b, osc, t, method, spec);
  // Exact remainder: 4 Im M_1(t).
  const double tail = 4.0 * std::imag(ohmic_tail_moment(b, t, 1, spec));
  return win + tail;
}

// ---------- engineered distribution ----------

namespace {

double unit_gauss(double w, double c, double sigma) {
  const double u = (w - c) / sigma;
  return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * kPi));
}

double engineered_split(const EngineeredDistribution& d) {
  return d.delta_max * std::abs(2.0 * d.gamma0 - 1.0);
}

}  // namespace

double engineered_fsq(const EngineeredDistribution& d, double omega) {
  validate(d);
  const double delta = engineered_split(d);
  return 0.5 * (unit_gauss(omega, d.omega_bar - delta, d.sigma) +
                unit_gauss(omega, d.omega_bar + delta, d.sigma));
}

double engineered_g_envelope(const EngineeredDistribution& d, double t) {
  validate(d);
  const double delta = engineered_split(d);
  const double a = d.sigma * d.delta_n * t;
  return std::exp(-0.5 * a * a) * std::cos(delta * d.delta_n * t);
}

cplx engineered_g(const EngineeredDistribution& d, double t) {
  return std::exp(-kI * d.delta_n * d.omega_bar * t) *
         engineered_g_envelope(d, t);
}

cplx engineered_g_quadrature(const EngineeredDistribution& d, double t,
                             const QuadratureSpec& spec) {
  validate(d);
  const double delta = engineered_split(d);
  const double lo = d.omega_bar - delta - 8.5 * d.sigma;
  const double hi = d.omega_bar + delta + 8.5 * d.sigma;
  QuadratureSpec wspec = spec;
  const double at = std::abs(t) * d.delta_n;
  if (at > 0.0) wspec.oscillation_period_hint = 2.0 * kPi / at;
  return integrate_complex(
      [&](double w) {
        return engineered_fsq(d, w) * std::exp(-kI * d.delta_n * w * t);
      },
      lo, hi, wspec);
}

}  // namespace qregress
