#include "qregress/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qregress {

namespace {

constexpr cplx kI{0.0, 1.0};

std::string format_time(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

}  // namespace

// ---------- DecayAmplitude interpolation ----------

namespace {

void hermite_locate(const DecayAmplitude& a, double t, int& i, double& s) {
  if (a.g.size() < 2 || a.dt <= 0.0)
    throw std::invalid_argument("DecayAmplitude: empty grid");
  const double tmax = a.t_max();
  if (t < -1e-12 || t > tmax + 1e-12)
    throw std::invalid_argument("DecayAmplitude: t outside stored range");
  const double tc = std::clamp(t, 0.0, tmax);
  i = std::min(static_cast<int>(tc / a.dt), static_cast<int>(a.g.size()) - 2);
  s = tc / a.dt - i;
}

}  // namespace

cplx DecayAmplitude::value(double t) const {
  int i;
  double s;
  hermite_locate(*this, t, i, s);
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * g[i] + h10 * dt * dg[i] + h01 * g[i + 1] + h11 * dt * dg[i + 1];
}

cplx DecayAmplitude::derivative(double t) const {
  int i;
  double s;
  hermite_locate(*this, t, i, s);
  const double s2 = s * s;
  const double d00 = (6 * s2 - 6 * s) / dt, d10 = 3 * s2 - 4 * s + 1;
  const double d01 = (-6 * s2 + 6 * s) / dt, d11 = 3 * s2 - 2 * s;
  return d00 * g[i] + d10 * dg[i] + d01 * g[i + 1] + d11 * dg[i + 1];
}

// ---------- Volterra solver ----------

namespace {

// Quadrature weight for node k of an n-panel convolution sum.
double conv_weight(int k, int n, int order) {
  const int m = std::min(k, n - k);
  if (order == 2) return m == 0 ? 0.5 : 1.0;
  // Gregory end corrections of order 4 (valid for n >= 6).
  switch (m) {
    case 0:
      return 3.0 / 8.0;
    case 1:
      return 7.0 / 6.0;
    case 2:
      return 23.0 / 24.0;
    default:
      return 1.0;
  }
}

}  // namespace

DecayAmplitude solve_G_volterra(const LorentzianBath& bath, double t_max,
                                double dt, int order) {
  validate(bath);
  if (!(t_max > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("solve_G_volterra: t_max and dt must be > 0");
  if (order != 2 && order != 4)
    throw std::invalid_argument("solve_G_volterra: order must be 2 or 4");
  double bound = 1.0 / bath.lambda;
  if (bath.gamma0 > 0.0)
    bound = std::min(bound, 1.0 / std::sqrt(bath.gamma0 * bath.lambda));
  if (dt > bound / 50.0 * (1.0 + 1e-12))
    throw std::invalid_argument(
        "solve_G_volterra: dt exceeds the stability bound "
        "min(1/lambda, 1/sqrt(gamma0 lambda)) / 50");

  const int n = static_cast<int>(std::llround(t_max / dt));
  if (n < 1) throw std::invalid_argument("solve_G_volterra: t_max < dt");

  DecayAmplitude out;
  out.dt = dt;
  out.g.resize(n + 1);
  out.dg.resize(n + 1);

  // Kernel samples f(k dt); the memory kernel is f(t) from the bath.
  std::vector<cplx> f(n + 1);
  for (int k = 0; k <= n; ++k) f[k] = bath_corr_f(bath, k * dt);

  const cplx a(bath.lambda, bath.delta);
  const double half_gl = 0.5 * bath.gamma0 * bath.lambda;

  // Taylor starter from the equivalent local recursion
  //   G'' + a G' + (gamma0 lambda / 2) G = 0,  G(0) = 1, G'(0) = 0,
  // which the memory-kernel equation satisfies for this kernel.
  constexpr int kSeries = 16;
  std::array<cplx, kSeries> c{};
  c[0] = 1.0;
  c[1] = 0.0;
  for (int k = 0; k + 2 < kSeries; ++k)
    c[k + 2] = -(a * (double(k) + 1.0) * c[k + 1] + half_gl * c[k]) /
               ((double(k) + 1.0) * (double(k) + 2.0));
  auto series_g = [&](double t) {
    cplx acc = 0.0;
    double p = 1.0;
    for (int k = 0; k < kSeries; ++k, p *= t) acc += c[k] * p;
    return acc;
  };
  auto series_dg = [&](double t) {
    cplx acc = 0.0;
    double p = 1.0;
    for (int k = 1; k < kSeries; ++k, p *= t) acc += double(k) * c[k] * p;
    return acc;
  };

  const int n_start = std::min(n, order == 4 ? 6 : 0);
  for (int k = 0; k <= n_start; ++k) {
    out.g[k] = series_g(k * dt);
    out.dg[k] = series_dg(k * dt);
  }

  auto check_stable = [&](int k) {
    if (std::abs(out.g[k]) > 1.0 + 1e-6)
      throw std::runtime_error(
          "solve_G_volterra: instability detected, |G| > 1 + 1e-6 at t = " +
          format_time(k * dt));
  };

  // Convolution sum I_k = dt * sum_j w_j f(t_k - t_j) G(t_j), evaluated
  // with a provisional value of G at the newest node.
  auto conv = [&](int k, const cplx& g_new) {
    cplx acc = conv_weight(k, k, order) * f[0] * g_new;
    for (int j = 0; j < k; ++j)
      acc += conv_weight(j, k, order) * f[k - j] * out.g[j];
    return dt * acc;
  };

  for (int k = n_start + 1; k <= n; ++k) {
    cplx g_pred;
    if (order == 4) {
      // Adams-Bashforth 4 predictor.
      g_pred = out.g[k - 1] +
               dt / 24.0 *
                   (55.0 * out.dg[k - 1] - 59.0 * out.dg[k - 2] +
                    37.0 * out.dg[k - 3] - 9.0 * out.dg[k - 4]);
    } else {
      g_pred = out.g[k - 1] + dt * out.dg[k - 1];
    }
    cplx dg_new = -conv(k, g_pred);
    cplx g_corr = g_pred;
    const cplx wf = dt * conv_weight(k, k, order) * f[0];
    for (int pass = 0; pass < 2; ++pass) {
      if (order == 4) {
        g_corr = out.g[k - 1] +
                 dt / 24.0 *
                     (9.0 * dg_new + 19.0 * out.dg[k - 1] -
                      5.0 * out.dg[k - 2] + out.dg[k - 3]);
      } else {
        g_corr = out.g[k - 1] + 0.5 * dt * (out.dg[k - 1] + dg_new);
      }
      // Only the newest node of the convolution changes under correction.
      dg_new -= wf * (g_corr - g_pred);
      g_pred = g_corr;
    }
    out.g[k] = g_corr;
    out.dg[k] = dg_new;
    check_stable(k);
  }
  for (int k = 0; k <= std::min(n_start, n); ++k) check_stable(k);
  return out;
}

// ---------- closed-form amplitude ----------

namespace {

// sinh(x)/x continued through x = 0.
cplx sinhc(cplx x) {
  if (std::abs(x) < 5e-5) {
    const cplx x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

}  // namespace

cplx closed_G_lorentzian(const LorentzianBath& bath, double t) {
  validate(bath);
  if (!(t >= 0.0))
    throw std::invalid_argument("closed_G_lorentzian: t must be nonnegative");
  const cplx a(bath.lambda, bath.delta);
  const cplx d = std::sqrt(a * a - 2.0 * bath.gamma0 * bath.lambda);
  const cplx x = 0.5 * d * t;
  // (a/d) sinh(d t / 2) = a (t/2) sinhc(d t / 2): no division by d, so the
  // confluent d -> 0 case needs no separate branch beyond the sinhc series.
  return std::exp(-0.5 * a * t) * (std::cosh(x) + a * (0.5 * t) * sinhc(x));
}

cplx closed_dG_lorentzian(const LorentzianBath& bath, double t) {
  validate(bath);
  if (!(t >= 0.0))
    throw std::invalid_argument("closed_dG_lorentzian: t must be nonnegative");
  const cplx a(bath.lambda, bath.delta);
  const cplx d = std::sqrt(a * a - 2.0 * bath.gamma0 * bath.lambda);
  const cplx x = 0.5 * d * t;
  // dG/dt = -(gamma0 lambda) (t/2) e^{-a t/2} sinhc(d t / 2).
  return -bath.gamma0 * bath.lambda * 0.5 * t * std::exp(-0.5 * a * t) *
         sinhc(x);
}

// ---------- rates ----------

namespace {

DecayRates rates_from(const cplx& gval, const cplx& dgval, double t,
                      double rate_floor, const std::string& who) {
  if (std::abs(gval) <= rate_floor)
    throw std::runtime_error(
        who + ": |G| at or below the rate floor at t = " + format_time(t) +
        "; the time-local rates are undefined there");
  const cplx r = -2.0 * dgval / gval;
  return DecayRates{std::real(r), std::imag(r)};
}

}  // namespace

DecayRates decay_rates(const DecayAmplitude& amp, double t,
                       double rate_floor) {
  // Report the *first* floor crossing if one occurs at or before t.
  const int upto =
      std::min(static_cast<int>(std::ceil(t / amp.dt)),
               static_cast<int>(amp.g.size()) - 1);
  for (int k = 0; k <= upto; ++k)
    if (std::abs(amp.g[k]) <= rate_floor)
      throw std::runtime_error(
          "decay_rates: |G| first crossed the rate floor at t = " +
          format_time(k * amp.dt) + "; rates are undefined from there on");
  return rates_from(amp.value(t), amp.derivative(t), t, rate_floor,
                    "decay_rates");
}

DecayRates decay_rates_closed(const LorentzianBath& bath, double t,
                              double rate_floor) {
  return rates_from(closed_G_lorentzian(bath, t),
                    closed_dG_lorentzian(bath, t), t, rate_floor,
                    "decay_rates_closed");
}

// ---------- damping bases and model maps ----------

namespace {

DampingBasis make_basis(const std::array<Operator2, 4>& ops) {
  DampingBasis b;
  b.basis = ops;
  b.duals = solve_duals(ops);
  for (int i = 0; i < 4; ++i) b.basis_traces[i] = ops[i].trace();
  return b;
}

void check_invertible(double modulus, double t1, const char* family) {
  if (modulus < 1e-12)
    throw std::runtime_error(
        std::string(family) +
        " map: divisible factor requires inverting a factor of modulus "
        "< 1e-12 at t = " +
        format_time(t1));
}

}  // namespace

ModelMap model_map_decay_custom(std::function<cplx(double)> amplitude,
                                std::function<cplx(double)> amplitude_dot,
                                double omega0) {
  if (!amplitude)
    throw std::invalid_argument(
        "model_map_decay_custom: amplitude callable required");

  ModelMap m;
  m.family = "decay";
  m.basis = make_basis({op_proj0(), op_sigma_plus(), op_sigma_minus(),
                        op_sigma_z()});
  auto amp = amplitude;
  m.basis.factor = [amp, omega0](int i, double t1, double t2) -> cplx {
    if (i == 0) return 1.0;
    const cplx g1 = (t1 == 0.0) ? cplx(1.0) : amp(t1);
    const cplx g2 = (t2 == t1) ? g1 : amp(t2);
    switch (i) {
      case 1: {
        check_invertible(std::abs(g1), t1, "decay");
        return (g2 / g1) * std::exp(-kI * omega0 * (t2 - t1));
      }
      case 2: {
        check_invertible(std::abs(g1), t1, "decay");
        return (std::conj(g2) / std::conj(g1)) *
               std::exp(kI * omega0 * (t2 - t1));
      }
      default: {
        check_invertible(std::norm(g1), t1, "decay");
        return std::norm(g2) / std::norm(g1);
      }
    }
  };
  if (amplitude_dot) {
    auto dot = amplitude_dot;
    m.basis.rate = [amp, dot, omega0](int i, double t) -> cplx {
      if (i == 0) return 0.0;
      const cplx g = amp(t);
      if (std::abs(g) < 1e-12)
        throw std::runtime_error(
            "decay map: rates undefined where |G| < 1e-12 (t = " +
            format_time(t) + ")");
      const cplx lg = dot(t) / g;
      switch (i) {
        case 1:
          return -kI * omega0 + lg;
        case 2:
          return kI * omega0 + std::conj(lg);
        default:
          return 2.0 * std::real(lg);
      }
    };
  }
  m.factors_between = [basis = m.basis](double t1, double t2) {
    MapFactors f;
    for (int i = 0; i < 4; ++i) f.scale[i] = basis.factor(i, t1, t2);
    return f;
  };
  return m;
}

ModelMap model_map_decay(const LorentzianBath& bath) {
  validate(bath);
  return model_map_decay_custom(
      [bath](double t) { return closed_G_lorentzian(bath, t); },
      [bath](double t) { return closed_dG_lorentzian(bath, t); },
      bath.omega0);
}

namespace {

// Memoized thermal exponent g(t) and its derivative; the quadratures are
// deterministic, so caching only trades time.
struct ThermalCache {
  OhmicBath bath;
  std::mutex mtx;
  std::unordered_map<long long, double> gv, gd;

  static long long key(double t) {
    long long k;
    static_assert(sizeof(k) == sizeof(t));
    std::memcpy(&k, &t, sizeof(k));
    return k;
  }
  double g(double t) {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = gv.find(key(t));
    if (it != gv.end()) return it->second;
    const double v = dephasing_g(bath, t);
    gv.emplace(key(t), v);
    return v;
  }
  double gdot(double t) {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = gd.find(key(t));
    if (it != gd.end()) return it->second;
    const double v = dephasing_g_dot(bath, t);
    gd.emplace(key(t), v);
    return v;
  }
};

}  // namespace

ModelMap model_map_thermal(const OhmicBath& bath) {
  validate(bath);
  auto cache = std::make_shared<ThermalCache>();
  cache->bath = bath;

  ModelMap m;
  m.family = "thermal";
  m.basis = make_basis({op_identity(), op_sigma_plus(), op_sigma_minus(),
                        op_sigma_z()});
  m.basis.factor = [cache](int i, double t1, double t2) -> cplx {
    if (i == 0 || i == 3) return 1.0;
    const double g1 = (t1 == 0.0) ? 0.0 : cache->g(t1);
    const double g2 = (t2 == t1) ? g1 : cache->g(t2);
    check_invertible(std::exp(-g1), t1, "thermal");
    return std::exp(-(g2 - g1));
  };
  m.basis.rate = [cache](int i, double t) -> cplx {
    if (i == 0 || i == 3) return 0.0;
    return -cache->gdot(t);
  };
  m.factors_between = [basis = m.basis](double t1, double t2) {
    MapFactors f;
    for (int i = 0; i < 4; ++i) f.scale[i] = basis.factor(i, t1, t2);
    return f;
  };
  return m;
}

ModelMap model_map_engineered(const EngineeredDistribution& dist) {
  validate(dist);
  ModelMap m;
  m.family = "engineered";
  m.basis = make_basis({op_identity(), op_sigma_plus(), op_sigma_minus(),
                        op_sigma_z()});
  m.basis.factor = [dist](int i, double t1, double t2) -> cplx {
    if (i == 0 || i == 3) return 1.0;
    const cplx g1 = (t1 == 0.0) ? cplx(1.0) : engineered_g(dist, t1);
    const cplx g2 = (t2 == t1) ? g1 : engineered_g(dist, t2);
    check_invertible(std::abs(g1), t1, "engineered");
    // sigma_plus carries the conjugate coherence factor, sigma_minus the
    // factor itself.
    const cplx ratio = g2 / g1;
    return (i == 1) ? std::conj(ratio) : ratio;
  };
  m.basis.rate = [dist](int i, double t) -> cplx {
    if (i == 0 || i == 3) return 0.0;
    const double env = engineered_g_envelope(dist, t);
    if (std::abs(env) < 1e-12)
      throw std::runtime_error(
          "engineered map: rates singular where the coherence factor "
          "vanishes (t = " +
          format_time(t) + ")");
    const double u = dist.sigma * dist.delta_n;
    const double dd = dist.delta_max * std::abs(2.0 * dist.gamma0 - 1.0) *
                      dist.delta_n;
    const double env_rate = -u * u * t - dd * std::tan(dd * t);
    const cplx r = cplx(env_rate, -dist.delta_n * dist.omega_bar);
    return (i == 1) ? std::conj(r) : r;
  };
  m.factors_between = [basis = m.basis](double t1, double t2) {
    MapFactors f;
    for (int i = 0; i < 4; ++i) f.scale[i] = basis.factor(i, t1, t2);
    return f;
  };
  return m;
}

ModelMap model_map_constant_dephasing(double gamma) {
  if (!(gamma >= 0.0))
    throw std::invalid_argument(
        "model_map_constant_dephasing: gamma must be nonnegative");
  ModelMap m;
  m.family = "constant_dephasing";
  m.basis = make_basis({op_identity(), op_sigma_plus(), op_sigma_minus(),
                        op_sigma_z()});
  m.basis.factor = [gamma](int i, double t1, double t2) -> cplx {
    if (i == 0 || i == 3) return 1.0;
    return std::exp(-gamma * (t2 - t1));
  };
  m.basis.rate = [gamma](int i, double) -> cplx {
    if (i == 0 || i == 3) return 0.0;
    return -gamma;
  };
  m.factors_between = [basis = m.basis](double t1, double t2) {
    MapFactors f;
    for (int i = 0; i < 4; ++i) f.scale[i] = basis.factor(i, t1, t2);
    return f;
  };
  return m;
}

// ---------- exact correlators ----------

cplx exact_tpcf_decay(const LorentzianBath& bath, double t_early,
                      double t_late) {
  validate(bath);
  if (!(0.0 <= t_early && t_early <= t_late))
    throw std::invalid_argument(
        "exact_tpcf_decay: need 0 <= t_early <= t_late");
  const cplx g1 = closed_G_lorentzian(bath, t_early);
  const cplx g2 = closed_G_lorentzian(bath, t_late);
  return std::conj(g2) * g1 * std::exp(kI * bath.omega0 * (t_late - t_early));
}

namespace {

// Sum over the eight projector sandwiches
//   sum_{a,b,d} K(a,b,d) Tr[P_a o_late P_b o_early P_d rho0]
// with P_1 = |1><1| and P_0 = |0><0|; the kernel K carries the bath
// decoherence factors of the dephasing dilation.
cplx projector_sandwich_sum(const std::function<cplx(int, int, int)>& kernel,
                            const Operator2& o_early, const Operator2& o_late,
                            const Operator2& rho0) {
  const std::array<Operator2, 2> p{op_proj0(), op_proj1()};
  cplx total = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d) {
        const cplx k = kernel(a, b, d);
        if (k == 0.0) continue;
        const Operator2 chain = p[a] * o_late * p[b] * o_early * p[d] * rho0;
        total += k * chain.trace();
      }
  return total;
}

}  // namespace

cplx exact_tpcf_dephasing(const OhmicBath& bath, const Operator2& o_early,
                          const Operator2& o_late, double t_early,
                          double t_late, const Operator2& rho0) {
  validate(bath);
  if (!(0.0 <= t_early && t_early <= t_late))
    throw std::invalid_argument(
        "exact_tpcf_dephasing: need 0 <= t_early <= t_late");
  if (!is_density(rho0, 1e-10, 1e-10))
    throw std::invalid_argument(
        "exact_tpcf_dephasing: rho0 must be a density matrix");

  const double g1 = (t_late > 0.0) ? dephasing_g(bath, t_late) : 0.0;
  const double g2 = (t_early > 0.0) ? dephasing_g(bath, t_early) : 0.0;
  const double h = (t_late > 0.0) ? dephasing_h(bath, t_late, t_early) : 0.0;
  const double e1 = std::exp(-g1);
  const double e2 = std::exp(-g2);
  const double cross = std::exp(-g1 - g2 + 2.0 * h);

  // Same-sign chains propagate freely; flipping the projector between the
  // two operators costs the single-time factors, flipping it across the
  // whole chain costs the two-time factor.
  auto kernel = [&](int a, int b, int d) -> cplx {
    if (a == b && b == d) return 1.0;
    if (a == b) return e2;           // flip between o_early and the end
    if (b == d) return e1;           // flip between o_late and o_early
    return cross;                    // a == d != b
  };
  return projector_sandwich_sum(kernel, o_early, o_late, rho0);
}

std::array<double, 4> dephasing_f_weights(const OhmicBath& bath,
                                          double t_early, double t_late) {
  validate(bath);
  if (!(0.0 <= t_early && t_early <= t_late))
    throw std::invalid_argument(
        "dephasing_f_weights: need 0 <= t_early <= t_late");
  const double g1 = (t_late > 0.0) ? dephasing_g(bath, t_late) : 0.0;
  const double g2 = (t_early > 0.0) ? dephasing_g(bath, t_early) : 0.0;
  const double h = (t_late > 0.0) ? dephasing_h(bath, t_late, t_early) : 0.0;
  const double e1 = std::exp(-g1);
  const double e2 = std::exp(-g2);
  const double ee = std::exp(-g1 - g2 + 2.0 * h);
  return {0.25 * (1.0 + e1 + e2 + ee), 0.25 * (1.0 - e1 - e2 + ee),
          0.25 * (1.0 + e1 - e2 - ee), 0.25 * (1.0 - e1 + e2 - ee)};
}

cplx exact_tpcf_engineered(const EngineeredDistribution& dist,
                           const Operator2& o_early, const Operator2& o_late,
                           double t_early, double t_late,
                           const Operator2& rho0) {
  validate(dist);
  if (!(0.0 <= t_early && t_early <= t_late))
    throw std::invalid_argument(
        "exact_tpcf_engineered: need 0 <= t_early <= t_late");
  if (!is_density(rho0, 1e-10, 1e-10))
    throw std::invalid_argument(
        "exact_tpcf_engineered: rho0 must be a density matrix");

  const cplx gl = engineered_g(dist, t_late);    // g(t_late)
  const cplx ge = engineered_g(dist, t_early);   // g(t_early)
  const cplx gd = engineered_g(dist, t_late - t_early);
  // g at negative argument is the conjugate: g(-t) = conj(g(t)).
  auto kernel = [&](int a, int b, int d) -> cplx {
    if (a == b && b == d) return 1.0;
    if (a == b) return (a == 1) ? ge : std::conj(ge);
    if (b == d) return (a == 1) ? gl : std::conj(gl);
    return (a == 1) ? gd : std::conj(gd);
  };
  return projector_sandwich_sum(kernel, o_early, o_late, rho0);
}

}  // namespace qregress
