#include "qregress/qalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qregress {

// ---------- Operator2 arithmetic ----------

Operator2 Operator2::operator+(const Operator2& o) const {
  Operator2 r;
  for (int k = 0; k < 4; ++k) r.e[k] = e[k] + o.e[k];
  return r;
}

Operator2 Operator2::operator-(const Operator2& o) const {
  Operator2 r;
  for (int k = 0; k < 4; ++k) r.e[k] = e[k] - o.e[k];
  return r;
}

Operator2 Operator2::operator*(const Operator2& o) const {
  Operator2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j);
  return r;
}

Operator2 Operator2::operator*(cplx s) const {
  Operator2 r;
  for (int k = 0; k < 4; ++k) r.e[k] = e[k] * s;
  return r;
}

Operator2 operator*(cplx s, const Operator2& o) { return o * s; }

Operator2 Operator2::adjoint() const {
  Operator2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

cplx Operator2::trace() const { return e[0] + e[3]; }

// ---------- fixed operators ----------

Operator2 op_identity() {
  Operator2 r;
  r(0, 0) = 1.0;
  r(1, 1) = 1.0;
  return r;
}

Operator2 op_sigma_x() {
  Operator2 r;
  r(0, 1) = 1.0;
  r(1, 0) = 1.0;
  return r;
}

Operator2 op_sigma_y() {
  // sigma_y = -i (sigma_plus - sigma_minus) with |1> the +1 eigenstate of
  // sigma_z; satisfies sigma_x sigma_y = i sigma_z.
  Operator2 r;
  r(0, 1) = cplx(0.0, 1.0);
  r(1, 0) = cplx(0.0, -1.0);
  return r;
}

Operator2 op_sigma_z() {
  // Excited state |1> has eigenvalue +1: sigma_z = |1><1| - |0><0|.
  Operator2 r;
  r(0, 0) = -1.0;
  r(1, 1) = 1.0;
  return r;
}

Operator2 op_sigma_plus() {
  Operator2 r;
  r(1, 0) = 1.0;
  return r;
}

Operator2 op_sigma_minus() {
  Operator2 r;
  r(0, 1) = 1.0;
  return r;
}

Operator2 op_proj0() {
  Operator2 r;
  r(0, 0) = 1.0;
  return r;
}

Operator2 op_proj1() {
  Operator2 r;
  r(1, 1) = 1.0;
  return r;
}

Operator2 op_bloch_state(double theta, double phi) {
  const double nx = std::sin(theta) * std::cos(phi);
  const double ny = std::sin(theta) * std::sin(phi);
  const double nz = std::cos(theta);
  Operator2 r;
  r(0, 0) = 0.5 * (1.0 - nz);
  r(1, 1) = 0.5 * (1.0 + nz);
  // (1/2)(nx sigma_x + ny sigma_y): entry (0,1) = (nx + i ny)/2.
  r(0, 1) = 0.5 * cplx(nx, ny);
  r(1, 0) = 0.5 * cplx(nx, -ny);
  return r;
}

// ---------- predicates ----------

bool is_hermitian(const Operator2& a, double tol) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
  return true;
}

bool is_density(const Operator2& a, double trace_tol, double eig_tol) {
  if (!is_hermitian(a, 1e-10)) return false;
  if (std::abs(a.trace() - 1.0) > trace_tol) return false;
  // Eigenvalues of a Hermitian 2x2: m +/- r.
  const double m = 0.5 * std::real(a(0, 0) + a(1, 1));
  const double d = 0.5 * std::real(a(0, 0) - a(1, 1));
  const double r = std::sqrt(d * d + std::norm(a(0, 1)));
  return (m - r) >= -eig_tol;
}

// ---------- Operator4 ----------

cplx Operator4::trace() const { return e[0] + e[5] + e[10] + e[15]; }

bool is_hermitian(const Operator4& a, double tol) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
  return true;
}

// ---------- damping basis ----------

std::array<Operator2, 4> solve_duals(const std::array<Operator2, 4>& basis,
                                     double tol) {
  // Unknowns: entries of the four duals, stacked as x[4*i + (2r + c)].
  // Equations: Tr[dual_i basis_j] = sum_{rc} dual_i(r,c) basis_j(c,r)
  //            = delta_ij, indexed 4*i + j.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(16, 16);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(16);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          m(4 * i + j, 4 * i + (2 * r + c)) = basis[j](c, r);
      rhs(4 * i + j) = (i == j) ? 1.0 : 0.0;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  const Eigen::VectorXcd x = lu.solve(rhs);

  std::array<Operator2, 4> duals;
  for (int i = 0; i < 4; ++i)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        duals[i](r, c) = x(4 * i + (2 * r + c));

  // Verify biorthogonality ...
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const cplx t = (duals[i] * basis[j]).trace();
      const cplx want = (i == j) ? 1.0 : 0.0;
      // Negated <= so that NaN residuals (exactly singular basis) fail too.
      if (!(std::abs(t - want) <= tol))
        throw std::invalid_argument(
            "solve_duals: basis is degenerate or ill-conditioned "
            "(biorthogonality residual above tolerance)");
    }
  // ... and completeness: the expansion must reconstruct each elementary
  // matrix E_rc exactly (checked at 10x the biorthogonality tolerance).
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      Operator2 erc;
      erc(r, c) = 1.0;
      Operator2 rec;
      for (int i = 0; i < 4; ++i)
        rec = rec + (duals[i] * erc).trace() * basis[i];
      for (int k = 0; k < 4; ++k)
        if (!(std::abs(rec.e[k] - erc.e[k]) <= 10.0 * tol))
          throw std::invalid_argument(
              "solve_duals: basis does not span the operator space "
              "(completeness residual above tolerance)");
    }
  return duals;
}

std::array<cplx, 4> damping_expand(const DampingBasis& b, const Operator2& a) {
  std::array<cplx, 4> c;
  for (int i = 0; i < 4; ++i) c[i] = (b.duals[i] * a).trace();
  return c;
}

Operator2 damping_reconstruct(const DampingBasis& b,
                              const std::array<cplx, 4>& c) {
  Operator2 r;
  for (int i = 0; i < 4; ++i) r = r + c[i] * b.basis[i];
  return r;
}

CorrelatorMatrix correlator_matrix(const DampingBasis& b, const Operator2& o) {
  CorrelatorMatrix m;
  for (int i = 0; i < 4; ++i) {
    const Operator2 obi = o * b.basis[i];
    for (int j = 0; j < 4; ++j) m.a[i][j] = (b.duals[j] * obi).trace();
  }
  return m;
}

Operator2 apply_map(const DampingBasis& b, const MapFactors& f,
                    const Operator2& a) {
  Operator2 r;
  for (int i = 0; i < 4; ++i)
    r = r + f.scale[i] * (b.duals[i] * a).trace() * b.basis[i];
  return r;
}

// ---------- distances and norms ----------

double trace_distance(const Operator2& r1, const Operator2& r2) {
  if (!is_hermitian(r1, 1e-10) || !is_hermitian(r2, 1e-10))
    throw std::invalid_argument("trace_distance: non-Hermitian input");
  const Operator2 d = r1 - r2;
  const double m = 0.5 * std::real(d(0, 0) + d(1, 1));
  const double h = 0.5 * std::real(d(0, 0) - d(1, 1));
  const double r = std::sqrt(h * h + std::norm(d(0, 1)));
  return 0.5 * (std::abs(m + r) + std::abs(m - r));
}

namespace {

// Cyclic Jacobi diagonalization of a Hermitian 4x4 matrix.  Each rotation
// annihilates one off-diagonal entry via a complex Givens rotation; sweeps
// repeat until the off-diagonal Frobenius norm drops below `off_tol`.
std::array<double, 4> jacobi_eigenvalues(Operator4 a, double off_tol,
                                         int max_sweeps) {
  auto off_norm = [&]() {
    double s = 0.0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= off_tol) break;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= off_tol / 16.0) continue;
        const cplx phase = apq / mag;  // e^{i phi}
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        // Real rotation angle from tan(2 theta) = 2|apq| / (app - aqq).
        const double tau = (app - aqq) / (2.0 * mag);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Unitary on the (p,q) plane:
        //   U(p,p) = c, U(p,q) = -s e^{i phi}, U(q,p) = s e^{-i phi},
        //   U(q,q) = c.  Apply A <- U^dagger A U.
        for (int k = 0; k < 4; ++k) {  // columns: A <- A U
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp + s * std::conj(phase) * akq;
          a(k, q) = -s * phase * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {  // rows: A <- U^dagger A
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk + s * phase * aqk;
          a(q, k) = -s * std::conj(phase) * apk + c * aqk;
        }
      }
    }
  }
  if (off_norm() > off_tol)
    throw std::runtime_error(
        "jacobi_eigenvalues: failed to converge within sweep limit");

  std::array<double, 4> ev{std::real(a(0, 0)), std::real(a(1, 1)),
                           std::real(a(2, 2)), std::real(a(3, 3))};
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

std::array<double, 4> hermitian_eigenvalues_4(const Operator4& a) {
  if (!is_hermitian(a, 1e-10))
    throw std::invalid_argument("hermitian_eigenvalues_4: non-Hermitian input");
  // Work on the exactly Hermitian part to keep the rotations stable.
  Operator4 h;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      h(r, c) = 0.5 * (a(r, c) + std::conj(a(c, r)));
  return jacobi_eigenvalues(h, 1e-14, 100);
}

double trace_norm_4(const Operator4& a) {
  if (!is_hermitian(a, 1e-10))
    throw std::invalid_argument("trace_norm_4: non-Hermitian input");
  const auto ev = hermitian_eigenvalues_4(a);
  double s = 0.0;
  for (double v : ev) s += std::abs(v);
  return s;
}

// ---------- Choi state ----------

Operator4 choi_state(const DampingBasis& b, const MapFactors& f) {
  // C = (1/2) sum_{ij} Phi(|i><j|) (x) |i><j|; composite row = 2*mr + ar.
  Operator4 c;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Operator2 eij;
      eij(i, j) = 1.0;
      const Operator2 phi = apply_map(b, f, eij);
      for (int mr = 0; mr < 2; ++mr)
        for (int mc = 0; mc < 2; ++mc)
          c(2 * mr + i, 2 * mc + j) += 0.5 * phi(mr, mc);
    }
  }
  return c;
}

}  // namespace qregress
