#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "qregress/models.hpp"
#include "test_helpers.hpp"

using namespace qregress;
using qtest::cdist;
using qtest::max_entry_dist;

namespace {

const double pi = std::acos(-1.0);

double max_node_error(const DecayAmplitude& amp, const LorentzianBath& bath) {
  double worst = 0.0;
  for (std::size_t k = 0; k < amp.g.size(); ++k) {
    const double t = double(k) * amp.dt;
    worst = std::max(worst, std::abs(amp.g[k] - closed_G_lorentzian(bath, t)));
  }
  return worst;
}

}  // namespace

TEST_CASE("closed-form decay amplitude matches frozen high-precision values") {
  // References computed with 30-digit arithmetic from the same hyperbolic
  // expression and frozen at 20 significant digits.
  CHECK(cdist(closed_G_lorentzian(LorentzianBath{1.0, 1.1, 0.2, 20.0}, 1.0),
              cplx(0.81186483410186931687, 0.01030094000872677061)) < 5e-15);
  CHECK(cdist(closed_G_lorentzian(LorentzianBath{5.0, 1.1, 0.0, 20.0}, 0.8),
              cplx(0.41710464096251263088, 0.0)) < 5e-15);
  CHECK(cdist(closed_G_lorentzian(LorentzianBath{0.1, 1.1, 0.2, 20.0}, 2.0),
              cplx(0.94175023875102050881, 0.0053542376696909242761)) < 5e-15);
}

TEST_CASE("closed-form amplitude limits: initial value, zero coupling, "
          "confluent root") {
  CHECK(cdist(closed_G_lorentzian(LorentzianBath{2.0, 1.3, 0.4, 20.0}, 0.0),
              1.0) < 1e-15);
  SUBCASE("zero coupling leaves the amplitude at one") {
    LorentzianBath free{0.0, 1.1, 0.2, 20.0};
    for (double t : {0.5, 2.0, 7.0})
      CHECK(cdist(closed_G_lorentzian(free, t), 1.0) < 1e-13);
  }
  SUBCASE("the degenerate double root evaluates through its series limit") {
    // d = sqrt(a^2 - 2 gamma0 lambda) vanishes when gamma0 = lambda / 2
    // at zero detuning; there G = e^{-a t/2} (1 + a t / 2).
    const double lam = 1.4;
    LorentzianBath b{lam / 2, lam, 0.0, 20.0};
    for (double t : {0.3, 1.0, 4.0}) {
      const cplx want = std::exp(-lam * t / 2) * (1.0 + lam * t / 2);
      CHECK(cdist(closed_G_lorentzian(b, t), want) < 1e-12);
    }
  }
  SUBCASE("derivative starts flat and matches a finite difference") {
    LorentzianBath b{1.0, 1.1, 0.2, 20.0};
    CHECK(cdist(closed_dG_lorentzian(b, 0.0), 0.0) < 1e-14);
    const double d = 1e-6;
    for (double t : {0.4, 1.7}) {
      const cplx fd =
          (closed_G_lorentzian(b, t + d) - closed_G_lorentzian(b, t - d)) /
          (2 * d);
      CHECK(cdist(closed_dG_lorentzian(b, t), fd) < 1e-8);
    }
  }
}

TEST_CASE("memory-kernel solver reproduces the closed form at high order") {
  LorentzianBath b{1.0, 1.1, 0.2, 20.0};
  DecayAmplitude amp = solve_G_volterra(b, 5.0, 1e-3);
  CHECK(max_node_error(amp, b) < 1e-8);
  SUBCASE("off-grid interpolation keeps the same accuracy") {
    for (double t : {0.7503, 2.33911, 4.99917}) {
      CHECK(cdist(amp.value(t), closed_G_lorentzian(b, t)) < 1e-8);
      CHECK(cdist(amp.derivative(t), closed_dG_lorentzian(b, t)) < 1e-6);
    }
  }
  SUBCASE("queries outside the stored range are rejected") {
    CHECK_THROWS_AS(amp.value(5.5), std::invalid_argument);
  }
}

TEST_CASE("low-order solver mode converges at second order under step "
          "halving") {
  LorentzianBath b{1.0, 1.1, 0.0, 20.0};
  const double coarse =
      max_node_error(solve_G_volterra(b, 2.0, 2e-3, 2), b);
  const double fine =
      max_node_error(solve_G_volterra(b, 2.0, 1e-3, 2), b);
  const double ratio = coarse / fine;
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("solver preconditions and zero-coupling behaviour") {
  SUBCASE("zero coupling keeps the amplitude pinned at one") {
    LorentzianBath free{0.0, 1.1, 0.2, 20.0};
    DecayAmplitude amp = solve_G_volterra(free, 1.0, 1e-3);
    for (std::size_t k = 0; k < amp.g.size(); k += 100)
      CHECK(cdist(amp.g[k], 1.0) < 1e-12);
  }
  SUBCASE("a step beyond the stability bound is rejected up front") {
    LorentzianBath b{1.0, 1.1, 0.0, 20.0};
    CHECK_THROWS_AS(solve_G_volterra(b, 1.0, 0.1), std::invalid_argument);
  }
  SUBCASE("only the two documented orders exist") {
    LorentzianBath b{1.0, 1.1, 0.0, 20.0};
    CHECK_THROWS_AS(solve_G_volterra(b, 1.0, 1e-3, 3), std::invalid_argument);
  }
}

TEST_CASE("time-local decay rates approach the flat-spectrum golden-rule "
          "value as the bath broadens") {
  // For wide baths the long-time rate is gamma0 (1 + gamma0 / (2 lambda) +
  // ...): the leading correction is visible at lambda = 50 and shrinks as
  // the width grows.
  DecayRates r50 = decay_rates_closed(LorentzianBath{1.0, 50.0, 0.0, 20.0},
                                      1.0);
  CHECK(r50.gamma == doctest::Approx(50.0 - std::sqrt(2400.0)).epsilon(1e-9));
  CHECK(std::abs(r50.gamma - 1.0) < 2e-2);
  DecayRates r500 = decay_rates_closed(LorentzianBath{1.0, 500.0, 0.0, 20.0},
                                       1.0);
  CHECK(std::abs(r500.gamma - 1.0) < std::abs(r50.gamma - 1.0));
  CHECK(std::abs(r500.gamma - 1.0) < 2e-3);
}

TEST_CASE("grid-based rates agree with closed-form rates") {
  LorentzianBath b{1.0, 1.1, 0.2, 20.0};
  DecayAmplitude amp = solve_G_volterra(b, 3.0, 1e-3);
  for (double t : {0.25, 1.0, 2.5}) {
    DecayRates g = decay_rates(amp, t);
    DecayRates c = decay_rates_closed(b, t);
    CHECK(std::abs(g.gamma - c.gamma) < 1e-6);
    CHECK(std::abs(g.shift - c.shift) < 1e-6);
  }
}

TEST_CASE("strong coupling drives the decay rate negative once the "
          "amplitude rebounds") {
  // At gamma0 = 5 the amplitude oscillates.  With a small detuning it
  // never vanishes exactly, so the rate stays defined and dips below zero
  // shortly after the near-node.
  LorentzianBath b{5.0, 1.1, 0.2, 20.0};
  double min_gamma = 1e300;
  for (double t = 1.0; t <= 1.6; t += 0.01)
    min_gamma = std::min(min_gamma, decay_rates_closed(b, t).gamma);
  CHECK(min_gamma < 0.0);

  SUBCASE("at zero detuning the amplitude crosses zero and the rate is "
          "undefined there") {
    LorentzianBath z{5.0, 1.1, 0.0, 20.0};
    // |G| dips below a loose floor near its first node (t ~ 1.22).
    CHECK_THROWS_WITH_AS(decay_rates_closed(z, 1.2207, 1e-3),
                         doctest::Contains("rate floor"), std::runtime_error);
  }
  SUBCASE("the grid variant reports the first floor crossing, not the "
          "query time") {
    LorentzianBath z{5.0, 1.1, 0.0, 20.0};
    DecayAmplitude amp = solve_G_volterra(z, 1.5, 1e-3);
    bool threw = false;
    try {
      decay_rates(amp, 1.45, 1e-3);
    } catch (const std::runtime_error& e) {
      threw = true;
      CHECK(std::string(e.what()).find("1.2") != std::string::npos);
    }
    CHECK(threw);
  }
}

TEST_CASE("decay map factors carry the amplitude ratios and free phase") {
  LorentzianBath b{1.0, 1.1, 0.2, 20.0};
  ModelMap m = model_map_decay(b);
  CHECK(m.family == "decay");
  SUBCASE("single-time factors against the closed amplitude") {
    for (double t : {0.3, 1.0, 2.2}) {
      const cplx g = closed_G_lorentzian(b, t);
      MapFactors f = m.factors(t);
      CHECK(cdist(f.scale[0], 1.0) < 1e-14);
      CHECK(cdist(f.scale[1], g * std::exp(cplx(0.0, -b.omega0 * t))) < 1e-13);
      CHECK(cdist(f.scale[2], std::conj(g) *
                                  std::exp(cplx(0.0, b.omega0 * t))) < 1e-13);
      CHECK(cdist(f.scale[3], std::norm(g)) < 1e-13);
    }
  }
  SUBCASE("coincident times give the identity factors") {
    MapFactors f = m.factors_between(0.7, 0.7);
    for (int i = 0; i < 4; ++i) CHECK(cdist(f.scale[i], 1.0) < 1e-14);
  }
  SUBCASE("two-time factors compose along adjacent intervals") {
    const double t1 = 0.4, t2 = 1.1, t3 = 2.0;
    MapFactors a = m.factors_between(t1, t2);
    MapFactors bb = m.factors_between(t2, t3);
    MapFactors whole = m.factors_between(t1, t3);
    for (int i = 0; i < 4; ++i)
      CHECK(cdist(a.scale[i] * bb.scale[i], whole.scale[i]) < 1e-10);
  }
  SUBCASE("restarting is not completing: the two intermediate maps differ "
          "for this non-divisible family") {
    const double t1 = 0.5, t2 = 1.5;
    MapFactors again = m.restarted(t1, t2);
    MapFactors completed = m.factors_between(t1, t2);
    CHECK(std::abs(again.scale[3] - completed.scale[3]) > 1e-3);
  }
  SUBCASE("the map preserves trace and hermiticity") {
    std::mt19937_64 rng(31);
    for (double t : {0.5, 1.8}) {
      MapFactors f = m.factors(t);
      Operator2 rho = qtest::random_mixed_density(rng);
      Operator2 out = apply_map(m.basis, f, rho);
      CHECK(cdist(out.trace(), 1.0) < 1e-11);
      CHECK(is_hermitian(out, 1e-11));
    }
  }
}

TEST_CASE("inverting the decay map at an amplitude node is refused") {
  LorentzianBath z{5.0, 1.1, 0.0, 20.0};
  // Bisect the real amplitude to its first node so |G| < 1e-12 there.
  double lo = 1.1, hi = 1.3;
  REQUIRE(std::real(closed_G_lorentzian(z, lo)) > 0.0);
  REQUIRE(std::real(closed_G_lorentzian(z, hi)) < 0.0);
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::real(closed_G_lorentzian(z, mid)) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double node = 0.5 * (lo + hi);
  REQUIRE(std::abs(closed_G_lorentzian(z, node)) < 1e-12);
  ModelMap m = model_map_decay(z);
  CHECK_THROWS_WITH_AS(m.factors_between(node, 1.4),
                       doctest::Contains("modulus"), std::runtime_error);
}

TEST_CASE("thermal dephasing map: pure decoherence factors and their rate") {
  OhmicBath b{1.0, 1.0, 10.0};
  ModelMap m = model_map_thermal(b);
  CHECK(m.family == "thermal");
  for (double t : {0.5, 2.0}) {
    MapFactors f = m.factors(t);
    const double eg = std::exp(-dephasing_g(b, t));
    CHECK(cdist(f.scale[0], 1.0) < 1e-14);
    CHECK(cdist(f.scale[1], eg) < 1e-12);
    CHECK(cdist(f.scale[2], eg) < 1e-12);
    CHECK(cdist(f.scale[3], 1.0) < 1e-14);
  }
  SUBCASE("the off-diagonal rate is minus the exponent derivative") {
    REQUIRE(static_cast<bool>(m.basis.rate));
    for (double t : {0.4, 1.5})
      CHECK(cdist(m.basis.rate(1, t), -dephasing_g_dot(b, t)) < 1e-10);
  }
  SUBCASE("populations never move") {
    std::mt19937_64 rng(37);
    Operator2 rho = qtest::random_mixed_density(rng);
    Operator2 out = apply_map(m.basis, m.factors(3.0), rho);
    CHECK(cdist(out(0, 0), rho(0, 0)) < 1e-13);
    CHECK(cdist(out(1, 1), rho(1, 1)) < 1e-13);
  }
}

TEST_CASE("engineered dephasing map carries the phase of the coherence "
          "factor with conjugation on the raising component") {
  EngineeredDistribution d;
  d.gamma0 = 0.2;
  ModelMap m = model_map_engineered(d);
  for (double t : {0.6, 1.9}) {
    const cplx g = engineered_g(d, t);
    MapFactors f = m.factors(t);
    CHECK(cdist(f.scale[1], std::conj(g)) < 1e-12);
    CHECK(cdist(f.scale[2], g) < 1e-12);
    CHECK(cdist(f.scale[0], 1.0) < 1e-14);
    CHECK(cdist(f.scale[3], 1.0) < 1e-14);
  }
  SUBCASE("rates blow up only where the envelope vanishes") {
    EngineeredDistribution split;
    split.gamma0 = 0.0;
    split.delta_max = pi;
    split.sigma = 0.05;
    ModelMap ms = model_map_engineered(split);
    CHECK_THROWS_AS(ms.basis.rate(1, 0.5), std::runtime_error);
    CHECK(std::isfinite(std::real(ms.basis.rate(1, 0.3))));
  }
}

TEST_CASE("constant-rate dephasing map is an exact semigroup") {
  const double gamma = 0.8;
  ModelMap m = model_map_constant_dephasing(gamma);
  MapFactors f = m.factors_between(1.3, 2.1);
  CHECK(cdist(f.scale[1], std::exp(-gamma * 0.8)) < 1e-14);
  // Restarting equals completing: the family is divisible.
  MapFactors r = m.restarted(1.3, 2.1);
  for (int i = 0; i < 4; ++i) CHECK(cdist(f.scale[i], r.scale[i]) < 1e-14);
  CHECK(cdist(m.basis.rate(2, 5.0), -gamma) < 1e-15);
  CHECK_THROWS_AS(model_map_constant_dephasing(-0.1), std::invalid_argument);
}

TEST_CASE("exact decay correlator: fixed points, free limit and relation "
          "to the amplitude") {
  LorentzianBath b{1.0, 1.1, 0.2, 20.0};
  SUBCASE("coincident times give the excited-state survival probability") {
    for (double t : {0.0, 0.5, 1.5})
      CHECK(cdist(exact_tpcf_decay(b, t, t),
                  std::norm(closed_G_lorentzian(b, t))) < 1e-9);
    CHECK(cdist(exact_tpcf_decay(b, 0.0, 0.0), 1.0) < 1e-14);
  }
  SUBCASE("zero coupling leaves a pure phase") {
    LorentzianBath free{0.0, 1.1, 0.2, 20.0};
    const cplx v = exact_tpcf_decay(free, 0.3, 1.7);
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-13);
    CHECK(cdist(v, std::exp(cplx(0.0, free.omega0 * 1.4))) < 1e-13);
  }
  SUBCASE("general value is the phase-dressed amplitude product") {
    const double t1 = 0.4, t2 = 1.3;
    const cplx want = std::conj(closed_G_lorentzian(b, t2)) *
                      closed_G_lorentzian(b, t1) *
                      std::exp(cplx(0.0, b.omega0 * (t2 - t1)));
    CHECK(cdist(exact_tpcf_decay(b, t1, t2), want) < 1e-13);
  }
  SUBCASE("time ordering is enforced") {
    CHECK_THROWS_AS(exact_tpcf_decay(b, 1.0, 0.5), std::invalid_argument);
  }
}

TEST_CASE("thermal correlator weights sum to one and reproduce the "
          "projector form") {
  // The four weights are not a probability vector: the cross term can push
  // individual entries slightly negative (~1e-2 for this bath).  Only the
  // sum rule and the reassembled correlator are invariants.
  OhmicBath b{1.0, 1.0, 10.0};
  std::mt19937_64 rng(41);
  for (int k = 0; k < 10; ++k) {
    const double t_early = qtest::urand(rng, 0.0, 3.0);
    const double t_late = t_early + qtest::urand(rng, 0.0, 3.0);
    auto f = dephasing_f_weights(b, t_early, t_late);
    CHECK(std::abs(f[0] + f[1] + f[2] + f[3] - 1.0) < 1e-12);
    for (double w : f) CHECK(std::abs(w) < 1.0 + 1e-12);

    // Independent assembly: the four diagonal weights multiply the four
    // sigma_z-decorated operator words.
    const Operator2 oe = qtest::random_operator(rng);
    const Operator2 ol = qtest::random_operator(rng);
    const Operator2 rho = qtest::random_mixed_density(rng);
    const Operator2 z = op_sigma_z();
    const Operator2 word =
        ol * oe * cplx(f[0], 0.0) + z * ol * oe * z * cplx(f[1], 0.0) +
        ol * z * oe * z * cplx(f[2], 0.0) + z * ol * z * oe * cplx(f[3], 0.0);
    const cplx direct = (word * rho).trace();
    const cplx sandwich = exact_tpcf_dephasing(b, oe, ol, t_early, t_late, rho);
    CHECK(cdist(direct, sandwich) < 1e-12);
  }
}

TEST_CASE("dephasing correlators at coincident times reduce to single-time "
          "expectations of the operator product") {
  const Operator2 plus = op_bloch_state(pi / 2, 0.0);
  SUBCASE("thermal") {
    OhmicBath b{0.8, 1.0, 10.0};
    // <sigma_plus sigma_minus> probes the excited population, untouched by
    // pure dephasing: stays at the initial 1/2 for all times.
    for (double t : {0.0, 1.0, 4.0})
      CHECK(cdist(exact_tpcf_dephasing(b, op_sigma_minus(), op_sigma_plus(),
                                       t, t, plus),
                  0.5) < 1e-10);
  }
  SUBCASE("engineered") {
    EngineeredDistribution d;
    d.gamma0 = 0.3;
    for (double t : {0.0, 1.0, 4.0})
      CHECK(cdist(exact_tpcf_engineered(d, op_sigma_minus(), op_sigma_plus(),
                                        t, t, plus),
                  0.5) < 1e-10);
  }
  SUBCASE("identity observables return unity for any density input") {
    OhmicBath b{0.8, 1.0, 10.0};
    CHECK(cdist(exact_tpcf_dephasing(b, op_identity(), op_identity(), 0.5,
                                     2.0, plus),
                1.0) < 1e-10);
  }
}

TEST_CASE("dephasing correlators of sigma_z pairs are time independent") {
  // sigma_z commutes with every projector chain, so the correlator is the
  // initial-state moment <sigma_z^2> = 1 at all time pairs.
  OhmicBath b{1.0, 1.0, 10.0};
  EngineeredDistribution d;
  d.gamma0 = 0.7;
  const Operator2 plus = op_bloch_state(pi / 2, 0.0);
  for (double t1 : {0.0, 1.5}) {
    for (double dt : {0.0, 2.5}) {
      CHECK(cdist(exact_tpcf_dephasing(b, op_sigma_z(), op_sigma_z(), t1,
                                       t1 + dt, plus),
                  1.0) < 1e-10);
      CHECK(cdist(exact_tpcf_engineered(d, op_sigma_z(), op_sigma_z(), t1,
                                        t1 + dt, plus),
                  1.0) < 1e-10);
    }
  }
}

TEST_CASE("non-density initial states are rejected by the dephasing "
          "correlators") {
  OhmicBath b{1.0, 1.0, 10.0};
  CHECK_THROWS_AS(exact_tpcf_dephasing(b, op_sigma_z(), op_sigma_z(), 0.5,
                                       1.0, op_sigma_x()),
                  std::invalid_argument);
}
