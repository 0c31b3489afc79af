#pragma once

// One-dimensional quadrature used by the spectral-density layer.
//
// Two independent engines are provided on purpose: an adaptive Simpson
// integrator (the default) and composite Gauss-Legendre panels.  Integrals
// that feed physical results are cross-checked between the two in the test
// suite, so the engines must not share code paths.
//
// Oscillatory integrands advertise their period through
// QuadratureSpec::oscillation_period_hint; the interval is then pre-split
// at period boundaries before adaptive refinement so that no panel spans
// more than one oscillation.

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace qregress {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 1 << 14;
  std::optional<double> oscillation_period_hint;
};

// Thrown when the adaptive engine exhausts its subdivision budget; carries
// the best available estimate and its error bound.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error() const { return error_; }

 private:
  double estimate_;
  double error_;
};

// Adaptive Simpson integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const QuadratureSpec& spec = {});

// Composite Gauss-Legendre quadrature: `panels` uniform panels of fixed
// `order` (nodes per panel).  Deterministic, non-adaptive; used as the
// independent cross-check path.
double integrate_gauss(const std::function<double(double)>& f, double a,
                       double b, int panels, int order = 20);

std::complex<double> integrate_gauss_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int panels, int order = 20);

}  // namespace qregress
