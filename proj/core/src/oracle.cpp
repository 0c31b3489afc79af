#include "qregress/oracle.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qregress {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};

}  // namespace

// ---------- discretization ----------

double DiscretizedBath::delta_omega() const {
  if (modes.empty())
    throw std::invalid_argument("DiscretizedBath: no modes");
  return (window_hi - window_lo) / static_cast<double>(modes.size());
}

double DiscretizedBath::recurrence_time() const {
  return 2.0 * kPi / delta_omega();
}

namespace {

DiscretizedBath midpoint_modes(const std::function<double(double)>& density,
                               int n_modes, double lo, double hi) {
  if (n_modes < 1)
    throw std::invalid_argument("discretize: need at least one mode");
  if (!(hi > lo)) throw std::invalid_argument("discretize: empty window");
  DiscretizedBath db;
  db.window_lo = lo;
  db.window_hi = hi;
  const double dw = (hi - lo) / n_modes;
  db.modes.reserve(n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const double w = lo + (k + 0.5) * dw;
    const double j = density(w);
    if (j < 0.0)
      throw std::invalid_argument(
          "discretize: spectral density negative inside the window");
    db.modes.push_back({w, std::sqrt(j * dw)});
    db.mode_mass += j * dw;
  }
  return db;
}

}  // namespace

DiscretizedBath discretize(const LorentzianBath& bath, int n_modes,
                           double half_width) {
  validate(bath);
  if (!(half_width > 0.0))
    throw std::invalid_argument("discretize: half_width must be positive");
  const double wc = bath.omega0 + bath.delta;
  const double hw = half_width * bath.lambda;
  DiscretizedBath db = midpoint_modes(
      [&](double w) { return lorentzian_density(bath, w); }, n_modes,
      wc - hw, wc + hw);
  // Window and full-line masses of the Lorentzian are available in closed
  // form.
  const double pref = bath.gamma0 * bath.lambda / (2.0 * kPi);
  db.window_mass = pref * 2.0 * std::atan(hw / bath.lambda);
  db.full_mass = pref * kPi;  // = gamma0 lambda / 2
  db.mass_warning =
      db.full_mass > 0.0 && db.window_mass < 0.99 * db.full_mass;
  return db;
}

DiscretizedBath discretize_ohmic(const OhmicBath& bath, int n_modes,
                                 double window_hi) {
  validate(bath);
  const double hi = window_hi > 0.0 ? window_hi : 900.0 * bath.lambda;
  DiscretizedBath db = midpoint_modes(
      [&](double w) { return ohmic_density(bath, w); }, n_modes, 0.0, hi);
  QuadratureSpec qs;
  db.window_mass =
      integrate([&](double w) { return ohmic_density(bath, w); }, 0.0, hi, qs);
  // The Ohmic density has no finite total mass; use a 10x-wider window as
  // the reference for the coverage warning.
  db.full_mass = db.window_mass +
                 integrate([&](double w) { return ohmic_density(bath, w); },
                           hi, 10.0 * hi, qs);
  db.mass_warning =
      db.full_mass > 0.0 && db.window_mass < 0.99 * db.full_mass;
  return db;
}

// ---------- sector states ----------

double DilationState::norm() const {
  double s = std::norm(c0) + std::norm(c1);
  for (const cplx& a : lam) s += std::norm(a);
  return std::sqrt(s);
}

DilationState excited_vacuum_state(int n_modes) {
  if (n_modes < 1)
    throw std::invalid_argument("excited_vacuum_state: need n_modes >= 1");
  DilationState s;
  s.c1 = 1.0;
  s.lam.assign(n_modes, cplx{});
  return s;
}

DilationState evolve_decay(const DiscretizedBath& db, double omega0,
                           const DilationState& s, double tau, double rel_tol,
                           double abs_tol) {
  const int n = static_cast<int>(db.modes.size());
  if (static_cast<int>(s.lam.size()) != n)
    throw std::invalid_argument(
        "evolve_decay: state and bath mode counts differ");
  if (!(tau >= 0.0))
    throw std::invalid_argument("evolve_decay: tau must be nonnegative");
  if (tau == 0.0) return s;

  const double norm_in = s.norm();

  using state_t = std::vector<cplx>;
  state_t y(n + 1);
  y[0] = s.c1;
  for (int q = 0; q < n; ++q) y[q + 1] = s.lam[q];

  double max_det = 0.0;
  for (const auto& m : db.modes)
    max_det = std::max(max_det, std::abs(m.omega - omega0));

  auto rhs = [&](const state_t& x, state_t& dx, double) {
    cplx acc{};
    for (int q = 0; q < n; ++q) acc += db.modes[q].g * x[q + 1];
    dx[0] = -kI * acc;
    for (int q = 0; q < n; ++q)
      dx[q + 1] = -kI * ((db.modes[q].omega - omega0) * x[q + 1] +
                         db.modes[q].g * x[0]);
  };

  namespace ode = boost::numeric::odeint;
  ode::runge_kutta_dopri5<state_t> stepper;
  auto controlled = ode::make_controlled(abs_tol, rel_tol, stepper);
  const double dt0 = std::min(tau, 0.5 / (max_det + 1.0));
  ode::integrate_adaptive(controlled, rhs, y, 0.0, tau, dt0);

  DilationState out;
  out.c0 = s.c0;
  out.c1 = y[0];
  out.lam.assign(y.begin() + 1, y.end());

  const double drift = std::abs(out.norm() - norm_in);
  if (drift > std::max(1e-8, 1e-8 * norm_in)) {
    std::ostringstream os;
    os << "evolve_decay: sector norm drifted by " << drift
       << " over tau = " << tau;
    throw std::runtime_error(os.str());
  }
  return out;
}

cplx oracle_decay_amplitude(const DiscretizedBath& db, double omega0,
                            double t) {
  const DilationState s = evolve_decay(
      db, omega0, excited_vacuum_state(static_cast<int>(db.modes.size())), t);
  return s.c1;
}

std::vector<DilationState> oracle_decay_states(
    const DiscretizedBath& db, double omega0,
    const std::vector<double>& times) {
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (times[i + 1] < times[i])
      throw std::invalid_argument(
          "oracle_decay_states: times must be nondecreasing");
  std::vector<DilationState> out;
  out.reserve(times.size());
  DilationState s =
      excited_vacuum_state(static_cast<int>(db.modes.size()));
  double t_prev = 0.0;
  for (double t : times) {
    if (!(t >= 0.0))
      throw std::invalid_argument(
          "oracle_decay_states: times must be nonnegative");
    s = evolve_decay(db, omega0, s, t - t_prev);
    t_prev = t;
    out.push_back(s);
  }
  return out;
}

// ---------- correlator oracle ----------

cplx oracle_tpcf_decay(const DiscretizedBath& db, double omega0,
                       double t_early, double t_late) {
  if (!(0.0 <= t_early && t_early <= t_late))
    throw std::invalid_argument(
        "oracle_tpcf_decay: need 0 <= t_early <= t_late");
  const int n = static_cast<int>(db.modes.size());
  const double tau = t_late - t_early;

  // Propagation one: the initial state to the early time.
  const DilationState psi1 =
      evolve_decay(db, omega0, excited_vacuum_state(n), t_early);

  // Apply the physical-frame lowering operator at t_early: in the rotating
  // frame sigma_minus maps (c0, c1, lam) to (e^{-i omega0 t} c1, 0, 0).
  DilationState phi;
  phi.c0 = std::exp(-kI * omega0 * t_early) * psi1.c1;
  phi.lam.assign(n, cplx{});

  // Propagations two and three: the operator-applied state and the
  // unmodified state, both forward to the late time.
  const DilationState phi2 = evolve_decay(db, omega0, phi, tau);
  const DilationState chi = evolve_decay(db, omega0, psi1, tau);

  // Overlap through the raising operator at t_late.
  return std::exp(kI * omega0 * t_late) * std::conj(chi.c1) * phi2.c0;
}

// ---------- projection decomposition ----------

namespace {

struct Outer {
  cplx coef;
  DilationState u, v;
};
using OpSum = std::vector<Outer>;

// P[|u><v|] = |u_s><v_s| + (sum_q u_q conj(v_q)) |0,vac><0,vac| where u_s
// keeps only the vacuum components.
OpSum apply_p(const OpSum& x) {
  OpSum out;
  out.reserve(2 * x.size());
  const int n = x.empty() ? 0 : static_cast<int>(x.front().u.lam.size());
  for (const Outer& o : x) {
    Outer a;
    a.coef = o.coef;
    a.u.c0 = o.u.c0;
    a.u.c1 = o.u.c1;
    a.u.lam.assign(n, cplx{});
    a.v.c0 = o.v.c0;
    a.v.c1 = o.v.c1;
    a.v.lam.assign(n, cplx{});
    out.push_back(std::move(a));

    cplx lam_dot{};
    for (int q = 0; q < n; ++q)
      lam_dot += o.u.lam[q] * std::conj(o.v.lam[q]);
    Outer b;
    b.coef = o.coef * lam_dot;
    b.u.c0 = 1.0;
    b.u.lam.assign(n, cplx{});
    b.v.c0 = 1.0;
    b.v.lam.assign(n, cplx{});
    out.push_back(std::move(b));
  }
  return out;
}

OpSum apply_q(const OpSum& x) {
  OpSum out = x;
  OpSum p = apply_p(x);
  for (Outer& o : p) {
    o.coef = -o.coef;
    out.push_back(std::move(o));
  }
  return out;
}

OpSum apply_branch(bool q_branch, const OpSum& x) {
  return q_branch ? apply_q(x) : apply_p(x);
}

OpSum propagate(const DiscretizedBath& db, double omega0, const OpSum& x,
                double tau, double& max_drift) {
  OpSum out;
  out.reserve(x.size());
  for (const Outer& o : x) {
    Outer p;
    p.coef = o.coef;
    const double nu = o.u.norm(), nv = o.v.norm();
    p.u = evolve_decay(db, omega0, o.u, tau);
    p.v = evolve_decay(db, omega0, o.v, tau);
    max_drift = std::max(max_drift, std::abs(p.u.norm() - nu));
    max_drift = std::max(max_drift, std::abs(p.v.norm() - nv));
    out.push_back(std::move(p));
  }
  return out;
}

// Left-multiply by the physical-frame lowering operator at time t.
OpSum sigma_minus_left(const OpSum& x, double omega0, double t) {
  OpSum out;
  out.reserve(x.size());
  const cplx phase = std::exp(-kI * omega0 * t);
  for (const Outer& o : x) {
    Outer p;
    p.coef = o.coef;
    p.u.c0 = phase * o.u.c1;
    p.u.c1 = 0.0;
    p.u.lam.assign(o.u.lam.size(), cplx{});
    p.v = o.v;
    out.push_back(std::move(p));
  }
  return out;
}

// Tr[sigma_plus(t) X] for X = sum coef |u><v|.
cplx trace_sigma_plus(const OpSum& x, double omega0, double t) {
  cplx acc{};
  const cplx phase = std::exp(kI * omega0 * t);
  for (const Outer& o : x)
    acc += o.coef * phase * std::conj(o.v.c1) * o.u.c0;
  return acc;
}

}  // namespace

PQTerms pq_decomposition(const DiscretizedBath& db, double omega0,
                         double t_early, double t_late) {
  if (!(0.0 <= t_early && t_early <= t_late))
    throw std::invalid_argument(
        "pq_decomposition: need 0 <= t_early <= t_late");
  const int n = static_cast<int>(db.modes.size());
  const double tau = t_late - t_early;

  PQTerms result;
  const DilationState psi0 = excited_vacuum_state(n);
  OpSum rho0{{1.0, psi0, psi0}};

  for (int b0 = 0; b0 < 2; ++b0) {
    OpSum x0 = apply_branch(b0 == 1, rho0);
    x0 = propagate(db, omega0, x0, t_early, result.max_norm_drift);
    for (int b1 = 0; b1 < 2; ++b1) {
      OpSum x1 = apply_branch(b1 == 1, x0);
      OpSum y = sigma_minus_left(x1, omega0, t_early);
      y = propagate(db, omega0, y, tau, result.max_norm_drift);
      for (int b2 = 0; b2 < 2; ++b2) {
        const OpSum x2 = apply_branch(b2 == 1, y);
        const cplx v = trace_sigma_plus(x2, omega0, t_late);
        result.term[b0 * 4 + b1 * 2 + b2] = v;
        result.total += v;
      }
    }
  }
  result.amp_early = oracle_decay_amplitude(db, omega0, t_early);
  result.amp_gap = oracle_decay_amplitude(db, omega0, tau);
  return result;
}

// ---------- dephasing oracles ----------

double oracle_dephasing_g(const DiscretizedBath& db, double beta, double t) {
  if (!(beta > 0.0))
    throw std::invalid_argument("oracle_dephasing_g: beta must be positive");
  if (!(t >= 0.0))
    throw std::invalid_argument("oracle_dephasing_g: t must be nonnegative");
  double acc = 0.0;
  for (const auto& m : db.modes) {
    const double s = std::sin(0.5 * m.omega * t);
    acc += 4.0 * (m.g * m.g / (m.omega * m.omega)) * 2.0 * s * s *
           coth_stable(0.5 * beta * m.omega);
  }
  return acc;
}

double oracle_dephasing_h(const DiscretizedBath& db, double beta, double t1,
                          double t2) {
  if (!(beta > 0.0))
    throw std::invalid_argument("oracle_dephasing_h: beta must be positive");
  if (!(t1 >= t2 && t2 >= 0.0))
    throw std::invalid_argument("oracle_dephasing_h: need t1 >= t2 >= 0");
  double acc = 0.0;
  for (const auto& m : db.modes) {
    const double w = m.omega;
    const double comb = 1.0 - std::cos(w * t1) - std::cos(w * t2) +
                        std::cos(w * (t1 - t2));
    acc += 2.0 * (m.g * m.g / (w * w)) * comb *
           coth_stable(0.5 * beta * w);
  }
  return acc;
}

cplx oracle_tpcf_dephasing_modes(const DiscretizedBath& db, double beta,
                                 const Operator2& o_early,
                                 const Operator2& o_late, double t_early,
                                 double t_late, const Operator2& rho0) {
  if (!(0.0 <= t_early && t_early <= t_late))
    throw std::invalid_argument(
        "oracle_tpcf_dephasing_modes: need 0 <= t_early <= t_late");
  if (!is_density(rho0, 1e-10, 1e-10))
    throw std::invalid_argument(
        "oracle_tpcf_dephasing_modes: rho0 must be a density matrix");

  const double g1 = oracle_dephasing_g(db, beta, t_late);
  const double g2 = oracle_dephasing_g(db, beta, t_early);
  const double h = oracle_dephasing_h(db, beta, t_late, t_early);
  const double e1 = std::exp(-g1);
  const double e2 = std::exp(-g2);
  const double cross = std::exp(-g1 - g2 + 2.0 * h);

  // Projector-sandwich sum with the finite-sum decoherence factors; the
  // structure mirrors the continuum computation but every number in it is
  // a discrete mode sum.
  const std::array<Operator2, 2> p{op_proj0(), op_proj1()};
  cplx total{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d) {
        double k;
        if (a == b && b == d)
          k = 1.0;
        else if (a == b)
          k = e2;
        else if (b == d)
          k = e1;
        else
          k = cross;
        const Operator2 chain =
            p[a] * o_late * p[b] * o_early * p[d] * rho0;
        total += k * chain.trace();
      }
  return total;
}

cplx oracle_tpcf_dephasing(const OhmicBath& bath, int n_modes,
                           const Operator2& o_early, const Operator2& o_late,
                           double t_early, double t_late,
                           const Operator2& rho0) {
  const DiscretizedBath db = discretize_ohmic(bath, n_modes);
  return oracle_tpcf_dephasing_modes(db, bath.beta, o_early, o_late, t_early,
                                     t_late, rho0);
}

}  // namespace qregress
