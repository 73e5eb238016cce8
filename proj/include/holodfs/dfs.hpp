#pragma once

// Numerical verification of the four conditions that make a subspace
// decoherence-free (a, b) and a valid holonomic computational space (c, d),
// plus enumeration of the fixed-Hamming-weight sectors of the collective
// dephasing coupling.

#include "holodfs/linalg.hpp"
#include "holodfs/qubits.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace holodfs {

// ---------------------------------------------------------------------------
// Subspace
// ---------------------------------------------------------------------------

struct Subspace {
  Eigen::Index dim_ambient = 0;
  std::vector<Vector> basis;          // orthonormal
  std::vector<std::string> labels;    // optional, parallel to basis

  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }

  Matrix basis_matrix() const {
    Matrix b(dim_ambient, dim());
    for (Eigen::Index k = 0; k < dim(); ++k) b.col(k) = basis[k];
    return b;
  }

  Matrix projector() const {
    Matrix b = basis_matrix();
    return b * b.adjoint();
  }

  // Checks orthonormality (Gram = I within tol::unitary) before accepting.
  static Subspace from_states(std::vector<Vector> states,
                              std::vector<std::string> labels = {}) {
    if (states.empty()) {
      throw std::invalid_argument("Subspace: empty basis");
    }
    Subspace sub;
    sub.dim_ambient = states.front().size();
    for (const auto& v : states) {
      if (v.size() != sub.dim_ambient) {
        throw std::invalid_argument("Subspace: mixed ambient dimensions");
      }
    }
    sub.basis = std::move(states);
    sub.labels = std::move(labels);
    Matrix gram = sub.basis_matrix().adjoint() * sub.basis_matrix();
    gram -= Matrix::Identity(sub.dim(), sub.dim());
    if (max_norm(gram) > tol::unitary) {
      throw std::invalid_argument("Subspace: basis is not orthonormal");
    }
    return sub;
  }

  static Subspace span_of_bitstrings(const QubitRegister& reg,
                                     const std::vector<std::string>& strings) {
    std::vector<Vector> states;
    std::vector<std::string> labels;
    for (const auto& s : strings) {
      states.push_back(basis_state(reg, s));
      labels.push_back(s);
    }
    return from_states(std::move(states), std::move(labels));
  }
};

// ---------------------------------------------------------------------------
// Condition reports
// ---------------------------------------------------------------------------

struct Witness {
  int i = 0;  // meaning depends on the condition (operator/basis/entry index)
  int j = 0;
  double violation = 0.0;
};

struct ConditionReport {
  char condition = '?';
  double max_violation = 0.0;
  double tolerance = tol::condition;
  bool passed = false;
  std::vector<Witness> witnesses;  // violations above tolerance, worst first
};

namespace detail {

constexpr int kMaxWitnesses = 8;

inline ConditionReport finish(char cond, double tolerance,
                              std::vector<Witness> witnesses) {
  ConditionReport rep;
  rep.condition = cond;
  rep.tolerance = tolerance;
  for (const auto& w : witnesses) {
    rep.max_violation = std::max(rep.max_violation, w.violation);
  }
  rep.passed = rep.max_violation <= tolerance;
  std::stable_sort(witnesses.begin(), witnesses.end(),
                   [](const Witness& a, const Witness& b) {
                     return a.violation > b.violation;
                   });
  for (const auto& w : witnesses) {
    if (w.violation > tolerance &&
        rep.witnesses.size() < static_cast<std::size_t>(kMaxWitnesses)) {
      rep.witnesses.push_back(w);
    }
  }
  return rep;
}

inline void require_ambient(const Matrix& op, const Subspace& sub,
                            const std::string& who) {
  if (op.rows() != op.cols() || op.rows() != sub.dim_ambient) {
    throw std::invalid_argument(who + ": operator dimension " +
                                std::to_string(op.rows()) +
                                " does not match ambient dimension " +
                                std::to_string(sub.dim_ambient));
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Conditions (a)-(d)
// ---------------------------------------------------------------------------

// (a) every S_alpha acts as a scalar on the subspace. The eigenvalue is read
// off the first basis vector; disagreement across vectors shows up as a
// violation rather than requiring the caller to supply lambda_alpha.
inline ConditionReport check_condition_a(const std::vector<Matrix>& s_ops,
                                         const Subspace& sub,
                                         double tolerance = tol::condition) {
  if (sub.basis.empty()) {
    throw std::invalid_argument("check_condition_a: empty basis");
  }
  std::vector<Witness> witnesses;
  for (std::size_t a = 0; a < s_ops.size(); ++a) {
    detail::require_ambient(s_ops[a], sub, "check_condition_a");
    const Complex lambda =
        sub.basis.front().dot(s_ops[a] * sub.basis.front());
    for (std::size_t k = 0; k < sub.basis.size(); ++k) {
      const double viol =
          (s_ops[a] * sub.basis[k] - lambda * sub.basis[k]).norm();
      witnesses.push_back({static_cast<int>(a), static_cast<int>(k), viol});
    }
  }
  return detail::finish('a', tolerance, std::move(witnesses));
}

// (b) H maps the subspace into itself: ||(I - P) H |psi_k>|| per basis state.
inline ConditionReport check_condition_b(const Matrix& h, const Subspace& sub,
                                         double tolerance = tol::condition) {
  require_hermitian(h, "check_condition_b");
  detail::require_ambient(h, sub, "check_condition_b");
  const Matrix p = sub.projector();
  std::vector<Witness> witnesses;
  for (std::size_t k = 0; k < sub.basis.size(); ++k) {
    const Vector image = h * sub.basis[k];
    const double viol = (image - p * image).norm();
    witnesses.push_back({0, static_cast<int>(k), viol});
  }
  return detail::finish('b', tolerance, std::move(witnesses));
}

// (c) U(tau) preserves the projector: ||U P U' - P||_max entrywise.
inline ConditionReport check_condition_c(const Matrix& u_tau,
                                         const Subspace& sub,
                                         double tolerance = tol::condition) {
  detail::require_ambient(u_tau, sub, "check_condition_c");
  if (!is_unitary(u_tau)) {
    throw std::invalid_argument("check_condition_c: input is not unitary");
  }
  const Matrix p = sub.projector();
  const Matrix residual = u_tau * p * u_tau.adjoint() - p;
  std::vector<Witness> witnesses;
  for (Eigen::Index i = 0; i < residual.rows(); ++i) {
    for (Eigen::Index j = 0; j < residual.cols(); ++j) {
      const double viol = std::abs(residual(i, j));
      if (viol > tolerance) {
        witnesses.push_back(
            {static_cast<int>(i), static_cast<int>(j), viol});
      }
    }
  }
  ConditionReport rep = detail::finish('c', tolerance, std::move(witnesses));
  rep.max_violation = std::max(rep.max_violation, max_norm(residual));
  rep.passed = rep.max_violation <= tolerance;
  return rep;
}

// (d), time-independent Hamiltonian: U(t)' H U(t) = H for all t, so the check
// collapses to the matrix elements <psi_i| H |psi_j> on the subspace.
inline ConditionReport check_condition_d(const Matrix& h, const Subspace& sub,
                                         double tolerance = tol::condition) {
  require_hermitian(h, "check_condition_d");
  detail::require_ambient(h, sub, "check_condition_d");
  std::vector<Witness> witnesses;
  for (std::size_t i = 0; i < sub.basis.size(); ++i) {
    for (std::size_t j = 0; j < sub.basis.size(); ++j) {
      const double viol = std::abs(sub.basis[i].dot(h * sub.basis[j]));
      witnesses.push_back({static_cast<int>(i), static_cast<int>(j), viol});
    }
  }
  return detail::finish('d', tolerance, std::move(witnesses));
}

// (d), general form over an explicit time grid with a caller-supplied
// propagator t -> U(t).
inline ConditionReport check_condition_d(
    const Matrix& h, const Subspace& sub, const std::vector<double>& times,
    const std::function<Matrix(double)>& u_of_t,
    double tolerance = tol::condition) {
  require_hermitian(h, "check_condition_d");
  detail::require_ambient(h, sub, "check_condition_d");
  if (times.empty()) {
    throw std::invalid_argument("check_condition_d: empty time grid");
  }
  std::vector<Witness> witnesses;
  for (double t : times) {
    const Matrix u = u_of_t(t);
    const Matrix rotated = u.adjoint() * h * u;
    for (std::size_t i = 0; i < sub.basis.size(); ++i) {
      for (std::size_t j = 0; j < sub.basis.size(); ++j) {
        const double viol = std::abs(sub.basis[i].dot(rotated * sub.basis[j]));
        witnesses.push_back({static_cast<int>(i), static_cast<int>(j), viol});
      }
    }
  }
  return detail::finish('d', tolerance, std::move(witnesses));
}

// Default grid for the general condition-(d) check: 50 uniform points on
// [0, tau], endpoints included.
inline std::vector<double> default_time_grid(double tau, int points = 50) {
  std::vector<double> out;
  out.reserve(points);
  for (int k = 0; k < points; ++k) {
    out.push_back(points == 1 ? 0.0 : tau * k / (points - 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sector enumeration
// ---------------------------------------------------------------------------

// The n+1 eigenspaces of S_N, one per Hamming weight, each labeled by its
// bitstrings in ascending basis-index order. Every sector satisfies
// condition (a) for s_ops = {S_N} with eigenvalue n - 2*weight.
inline std::vector<Subspace> enumerate_dephasing_dfs(const QubitRegister& reg) {
  std::vector<std::vector<std::string>> by_weight(reg.n + 1);
  for (Eigen::Index idx = 0; idx < reg.dim(); ++idx) {
    BitString b = BitString::from_index(idx, reg.n);
    by_weight[b.weight()].push_back(b.str());
  }
  std::vector<Subspace> sectors;
  sectors.reserve(reg.n + 1);
  for (int w = 0; w <= reg.n; ++w) {
    sectors.push_back(Subspace::span_of_bitstrings(reg, by_weight[w]));
  }
  return sectors;
}

}  // namespace holodfs
