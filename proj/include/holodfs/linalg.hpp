#pragma once

// Dense complex linear algebra kernel shared by every other header:
// Kronecker products, Hermitian eigendecomposition, the Hermitian matrix
// exponential exp(-iHt), and the norms all verification checks are phrased in.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace holodfs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Module-level tolerances; every downstream check references these names.
namespace tol {
inline constexpr double structural = 1e-12;   // Hermiticity, normalization
inline constexpr double unitary = 1e-10;      // ||U'U - I||_max
inline constexpr double reconstruct = 1e-9;   // ||V L V' - H||_max
inline constexpr double condition = 1e-10;    // default for DFS condition checks
inline constexpr double degeneracy = 1e-9;    // eigenvalue cluster gap
}  // namespace tol

// ---------------------------------------------------------------------------
// Norms and structural predicates
// ---------------------------------------------------------------------------

inline double max_norm(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& a, double eps = tol::structural) {
  if (a.rows() != a.cols()) return false;
  return max_norm(a - a.adjoint()) <= eps;
}

inline bool is_unitary(const Matrix& a, double eps = tol::unitary) {
  if (a.rows() != a.cols()) return false;
  Matrix gram = a.adjoint() * a;
  gram -= Matrix::Identity(a.rows(), a.cols());
  return max_norm(gram) <= eps;
}

inline bool is_normalized(const Vector& v, double eps = tol::structural) {
  return std::abs(v.norm() - 1.0) <= eps;
}

inline void require_hermitian(const Matrix& a, const std::string& who) {
  if (!is_hermitian(a)) {
    throw std::invalid_argument(who + ": matrix is not Hermitian within " +
                                std::to_string(tol::structural));
  }
}

// ---------------------------------------------------------------------------
// Kronecker product
// ---------------------------------------------------------------------------

// result(i*b.rows()+k, j*b.cols()+l) = a(i,j) * b(k,l)
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition and propagator
// ---------------------------------------------------------------------------

struct EigResult {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // orthonormal columns, vectors.col(k) <-> values(k)
};

// Eigenvectors inside a degenerate cluster (gap < tol::degeneracy) are an
// arbitrary orthonormal basis of that cluster; callers must not rely on
// intra-cluster ordering.
inline EigResult eig_hermitian(const Matrix& h) {
  require_hermitian(h, "eig_hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// exp(-i h t) for Hermitian h, via V diag(exp(-i l_k t)) V'.
inline Matrix expm_hermitian(const Matrix& h, double t) {
  EigResult eig = eig_hermitian(h);
  const Complex mit(0.0, -t);
  Vector phases = (mit * eig.values.cast<Complex>().array()).exp();
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

// ---------------------------------------------------------------------------
// Gate comparison
// ---------------------------------------------------------------------------

// |tr(a'b)| / d: equals 1 iff a and b coincide up to a global phase.
inline double fidelity_gate(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw std::invalid_argument("fidelity_gate: dimension mismatch");
  }
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

}  // namespace holodfs
