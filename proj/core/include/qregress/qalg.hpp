#pragma once

// Small dense operator algebra for a single qubit and for qubit x ancilla
// (4x4) objects, plus the damping-basis machinery used to represent
// time-local dynamical maps in diagonal form.
//
// Conventions (used consistently across the library):
//   * Qubit basis index 0 = ground |0>, index 1 = excited |1>.
//   * Matrices are stored row-major; entry (r, c) is "row r, column c",
//     so sigma_plus = |1><0| has its single 1 at (r, c) = (1, 0).
//   * A dynamical map in damping form acts as
//         Phi[rho] = sum_i scale_i * <dual_i, rho> * basis_i,
//     where <dual_i, rho> = Tr[dual_i * rho] and {basis_i} / {dual_i}
//     are a biorthogonal pair: Tr[dual_i * basis_j] = delta_ij.
//   * The Choi state of a qubit map Phi is
//         C = (1/2) sum_{ij} Phi(|i><j|) (x) |i><j|,
//     i.e. (id (x) Phi') applied to the maximally entangled state built
//     from |Psi> = (|00> + |11>)/sqrt(2); composite index = 2*map + ancilla.

#include <array>
#include <complex>
#include <functional>
#include <string>

namespace qregress {

using cplx = std::complex<double>;

// ---------- Operator2: 2x2 complex matrix ----------

struct Operator2 {
  std::array<cplx, 4> e{};  // row-major: e[2*r + c]

  cplx& operator()(int r, int c) { return e[2 * r + c]; }
  const cplx& operator()(int r, int c) const { return e[2 * r + c]; }

  Operator2 operator+(const Operator2& o) const;
  Operator2 operator-(const Operator2& o) const;
  Operator2 operator*(const Operator2& o) const;  // matrix product
  Operator2 operator*(cplx s) const;
  Operator2 adjoint() const;
  cplx trace() const;
};

Operator2 operator*(cplx s, const Operator2& o);

// Common fixed operators.
Operator2 op_identity();
Operator2 op_sigma_x();
Operator2 op_sigma_y();
Operator2 op_sigma_z();
Operator2 op_sigma_plus();   // |1><0|
Operator2 op_sigma_minus();  // |0><1|
Operator2 op_proj0();        // |0><0|
Operator2 op_proj1();        // |1><1|
// Density matrices for Bloch vector (sin t cos p, sin t sin p, cos t),
// with |1> at the north pole (z = +1).
Operator2 op_bloch_state(double theta, double phi);

// Predicates. Tolerances follow the library-wide defaults: Hermiticity is
// checked entrywise at 1e-14, density matrices additionally need trace 1
// (within 1e-12) and eigenvalues >= -1e-12.
bool is_hermitian(const Operator2& a, double tol = 1e-14);
bool is_density(const Operator2& a, double trace_tol = 1e-12,
                double eig_tol = 1e-12);

// ---------- Operator4: 4x4 complex matrix ----------

struct Operator4 {
  std::array<cplx, 16> e{};  // row-major: e[4*r + c]

  cplx& operator()(int r, int c) { return e[4 * r + c]; }
  const cplx& operator()(int r, int c) const { return e[4 * r + c]; }

  cplx trace() const;
};

bool is_hermitian(const Operator4& a, double tol = 1e-14);

// ---------- DampingBasis ----------

// Eigen-operators of a time-local generator together with their duals and
// the associated exponentiated eigenvalue integrals.  `factor(i, t1, t2)`
// returns exp(integral_{t1}^{t2} lambda_i), the scale the map applies to
// basis_i between the two times; `rate(i, t)` returns the instantaneous
// eigenvalue lambda_i(t) where the model provides it.
struct DampingBasis {
  std::array<Operator2, 4> basis;
  std::array<Operator2, 4> duals;
  std::array<cplx, 4> basis_traces;  // Tr[basis_i], cached for contractions
  std::function<cplx(int, double, double)> factor;  // exp(int_{t1}^{t2} lambda_i)
  std::function<cplx(int, double)> rate;            // lambda_i(t); may be empty
};

// Solve the biorthogonality system Tr[dual_i * basis_j] = delta_ij for the
// duals and verify it to `tol`; completeness (sum_i basis_i Tr[dual_i rho]
// reconstructs rho) is checked to 10x looser.  Throws std::invalid_argument
// if the basis is degenerate or the verification fails.
std::array<Operator2, 4> solve_duals(const std::array<Operator2, 4>& basis,
                                     double tol = 1e-14);

// Expansion coefficients c_i = Tr[dual_i * rho] of `a` in the basis.
std::array<cplx, 4> damping_expand(const DampingBasis& b, const Operator2& a);

// Reconstruct sum_i c_i basis_i.
Operator2 damping_reconstruct(const DampingBasis& b,
                              const std::array<cplx, 4>& c);

// ---------- CorrelatorMatrices ----------

// Matrix elements (A_o)_i^j = Tr[dual_j * (o * basis_i)] expressing left
// multiplication by a fixed operator o in the damping basis:
//     o * basis_i = sum_j (A_o)_i^j basis_j.
// Stored as a[i][j] (lower index first).
struct CorrelatorMatrix {
  std::array<std::array<cplx, 4>, 4> a{};
};

CorrelatorMatrix correlator_matrix(const DampingBasis& b, const Operator2& o);

// ---------- MapFactors ----------

// A dynamical map frozen at a specific time interval: scale_i applied to
// each damping-basis component.  For trace-preserving families the factor
// attached to the identity-like eigenoperator is 1.
struct MapFactors {
  std::array<cplx, 4> scale{};
};

// Apply the map: Phi[a] = sum_i scale_i * Tr[dual_i a] * basis_i.
Operator2 apply_map(const DampingBasis& b, const MapFactors& f,
                    const Operator2& a);

// ---------- distances and norms ----------

// Trace distance D(r1, r2) = (1/2) sum |eigenvalues of r1 - r2|.
// Rejects non-Hermitian input (entry asymmetry > 1e-10).
double trace_distance(const Operator2& r1, const Operator2& r2);

// Trace norm of a Hermitian 4x4 matrix: sum of |eigenvalues|, computed with
// a cyclic Jacobi eigensolver (off-diagonal Frobenius threshold 1e-14,
// at most 100 sweeps).  Rejects non-Hermitian input.
double trace_norm_4(const Operator4& a);

// Eigenvalues of a Hermitian 4x4 matrix, ascending (same Jacobi solver).
std::array<double, 4> hermitian_eigenvalues_4(const Operator4& a);

// ---------- choi_state ----------

// Choi state C = (1/2) sum_{ij} Phi(|i><j|) (x) |i><j| of the map given by
// (basis, factors).  Composite index ordering: row = 2*map_row + ancilla_row.
Operator4 choi_state(const DampingBasis& b, const MapFactors& f);

}  // namespace qregress
