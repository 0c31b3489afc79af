#include "qregress/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <utility>
#include <vector>

namespace qregress {

namespace {

using cplx = std::complex<double>;

double value_norm(double v) { return std::abs(v); }
double value_norm(const cplx& v) { return std::abs(v); }

// ---------- adaptive integration on an embedded Gauss pair ----------
//
// Every leaf interval carries the 15-point Gauss-Legendre value and an error
// estimate from the embedded 7-point rule evaluated on the same interval.
// Refinement always bisects the leaf with the largest estimated error, so
// the subdivision budget is spent where the integrand actually needs it and
// the reported error is a bound on the whole integral, not a per-leaf quota.
// Simpson-style schemes were found to alias badly when the refinement grid
// is commensurate with an oscillatory integrand's period (sampling sin^2 at
// symmetric points makes the error estimate vanish while the value is still
// wrong); the high-order pair on irrational node positions has no such trap.

const std::vector<std::pair<double, double>>& gl_rule(int order);

template <typename T>
struct Leaf {
  double a, b;
  T val;     // 15-point value
  double err;  // |15-point - 7-point|
};

template <typename T>
Leaf<T> make_leaf(const std::function<T(double)>& f,
                  const std::vector<std::pair<double, double>>& lo_rule,
                  const std::vector<std::pair<double, double>>& hi_rule,
                  double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T lo{};
  for (const auto& [x, w] : lo_rule) lo = lo + w * f(c + h * x);
  T hi{};
  for (const auto& [x, w] : hi_rule) hi = hi + w * f(c + h * x);
  return Leaf<T>{a, b, hi * h, value_norm(hi - lo) * h};
}

template <typename T>
T integrate_adaptive(const std::function<T(double)>& f, double a, double b,
                     const QuadratureSpec& spec) {
  if (!(b >= a))
    throw std::invalid_argument("integrate: interval must satisfy b >= a");
  if (a == b) return T{};

  // Pre-split at oscillation-period boundaries so the first-pass error
  // estimates already resolve the oscillation scale.
  std::vector<double> cuts{a};
  if (spec.oscillation_period_hint && *spec.oscillation_period_hint > 0.0) {
    const double p = *spec.oscillation_period_hint;
    if ((b - a) / p > static_cast<double>(spec.max_subdivisions))
      throw std::invalid_argument(
          "integrate: oscillation period hint implies more panels than "
          "max_subdivisions");
    const int n_panels = std::max(1, static_cast<int>(std::ceil((b - a) / p)));
    for (int k = 1; k < n_panels; ++k)
      cuts.push_back(a + (b - a) * k / n_panels);
  }
  cuts.push_back(b);

  const auto& lo_rule = gl_rule(7);
  const auto& hi_rule = gl_rule(15);
  auto milder = [](const Leaf<T>& x, const Leaf<T>& y) {
    return x.err < y.err;
  };
  std::priority_queue<Leaf<T>, std::vector<Leaf<T>>, decltype(milder)> leaves(
      milder);

  T total{};
  double err_sum = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    Leaf<T> leaf = make_leaf(f, lo_rule, hi_rule, cuts[k], cuts[k + 1]);
    total = total + leaf.val;
    err_sum += leaf.err;
    leaves.push(leaf);
  }

  int budget = spec.max_subdivisions;
  const double min_width = 1e-14 * (b - a);
  while (err_sum > std::max(spec.abs_tol, spec.rel_tol * value_norm(total))) {
    const Leaf<T> worst = leaves.top();
    // A top leaf that cannot shrink further (width at rounding scale or a
    // zero estimate despite err_sum > tol) means refinement has stalled.
    if (budget <= 0 || worst.err <= 0.0 || worst.b - worst.a <= min_width)
      throw QuadratureError(
          "integrate: subdivision budget exhausted before reaching tolerance",
          value_norm(total), err_sum);
    leaves.pop();
    budget -= 1;
    const double m = 0.5 * (worst.a + worst.b);
    const Leaf<T> left = make_leaf(f, lo_rule, hi_rule, worst.a, m);
    const Leaf<T> right = make_leaf(f, lo_rule, hi_rule, m, worst.b);
    total = total + (left.val + right.val - worst.val);
    err_sum += left.err + right.err - worst.err;
    leaves.push(left);
    leaves.push(right);
  }
  return total;
}

// ---------- Gauss-Legendre rule ----------

// Nodes and weights of the n-point rule on [-1, 1], by Newton iteration on
// the Legendre polynomial.  Cached per order.
const std::vector<std::pair<double, double>>& gl_rule(int order) {
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  std::vector<std::pair<double, double>> rule(order);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P'_n(x).
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = -p1 / dp;
      x += dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[i] = {-x, w};          // i-th largest root is positive; store mirrored
    rule[n - 1 - i] = {x, w};
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

template <typename T>
T integrate_gauss_impl(const std::function<T(double)>& f, double a, double b,
                       int panels, int order) {
  if (!(b >= a))
    throw std::invalid_argument(
        "integrate_gauss: interval must satisfy b >= a");
  if (panels < 1 || order < 2)
    throw std::invalid_argument(
        "integrate_gauss: panels >= 1 and order >= 2 required");
  const auto& rule = gl_rule(order);
  const double h = (b - a) / panels;
  T total{};
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * h;
    T acc{};
    for (const auto& [x, w] : rule) acc = acc + w * f(mid + 0.5 * h * x);
    total = total + acc * (0.5 * h);
  }
  return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
  return integrate_adaptive<double>(f, a, b, spec);
}

cplx integrate_complex(const std::function<cplx(double)>& f, double a,
                       double b, const QuadratureSpec& spec) {
  return integrate_adaptive<cplx>(f, a, b, spec);
}

double integrate_gauss(const std::function<double(double)>& f, double a,
                       double b, int panels, int order) {
  return integrate_gauss_impl<double>(f, a, b, panels, order);
}

cplx integrate_gauss_complex(const std::function<cplx(double)>& f, double a,
                             double b, int panels, int order) {
  return integrate_gauss_impl<cplx>(f, a, b, panels, order);
}

}  // namespace qregress
