#pragma once

// Spin-chain Hamiltonian construction from coupling sets, the specialized
// three- and six-qubit pulse parameterizations, closed-form propagators on
// the ancilla/bright/dark frame, projected logical gates, parameter
// synthesis from target rotations, and the entangling-power analysis of the
// two-qubit gate.

#include "holodfs/dfs.hpp"
#include "holodfs/linalg.hpp"
#include "holodfs/qubits.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace holodfs {

inline constexpr double pi = std::numbers::pi;

// Leakage out of the computational subspace at t = tau signals J*tau != pi;
// it is surfaced as an error rather than silently truncated away.
inline constexpr double kLeakageTol = 1e-8;

namespace detail {
inline double wrap_2pi(double angle) {
  double a = std::fmod(angle, 2 * pi);
  if (a < 0) a += 2 * pi;
  return a;
}

inline void require_angle(double value, double lo, double hi,
                          const std::string& name) {
  if (!std::isfinite(value) || value < lo - 1e-9 || value > hi + 1e-9) {
    throw std::invalid_argument(name + " = " + std::to_string(value) +
                                " outside [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  }
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Coupling sets and the general Hamiltonian
// ---------------------------------------------------------------------------

// The full parameter set of the spin-chain Hamiltonian: XY strengths jx,
// Dzialoshinski-Moriya strengths jy (pair keys with k < l), and local-field
// strengths jz. Energies in units with hbar = 1; time is inverse energy.
struct CouplingSet {
  int n = 1;
  std::map<std::pair<int, int>, double> jx;
  std::map<std::pair<int, int>, double> jy;
  std::map<int, double> jz;

  double jx_at(int k, int l) const { return pair_at(jx, k, l); }
  double jy_at(int k, int l) const { return pair_at(jy, k, l); }
  double jz_at(int m) const {
    auto it = jz.find(m);
    return it == jz.end() ? 0.0 : it->second;
  }

  // Multiplicative common-mode rescaling of every coupling.
  CouplingSet scaled(double factor) const {
    CouplingSet out = *this;
    for (auto& [key, value] : out.jx) value *= factor;
    for (auto& [key, value] : out.jy) value *= factor;
    for (auto& [key, value] : out.jz) value *= factor;
    return out;
  }

 private:
  static double pair_at(const std::map<std::pair<int, int>, double>& m, int k,
                        int l) {
    auto it = m.find({k, l});
    return it == m.end() ? 0.0 : it->second;
  }
};

// H = sum_{k<l} (jx_kl R^x_kl + jy_kl R^y_kl) + sum_m jz_m sz_m.
// Commutes with S_N by construction (both R terms conserve Hamming weight).
inline Matrix build_hamiltonian(const CouplingSet& c) {
  QubitRegister reg(c.n);
  Matrix h = Matrix::Zero(reg.dim(), reg.dim());
  auto check_pair = [&](int k, int l) {
    if (k >= l || k < 1 || l > c.n) {
      throw std::invalid_argument("build_hamiltonian: pair coupling (" +
                                  std::to_string(k) + "," + std::to_string(l) +
                                  ") must satisfy 1 <= k < l <= n");
    }
  };
  for (const auto& [key, value] : c.jx) {
    check_pair(key.first, key.second);
    h += value * xy_term(reg, key.first, key.second);
  }
  for (const auto& [key, value] : c.jy) {
    check_pair(key.first, key.second);
    h += value * dm_term(reg, key.first, key.second);
  }
  for (const auto& [m, value] : c.jz) {
    if (m < 1 || m > c.n) {
      throw std::invalid_argument("build_hamiltonian: local field index " +
                                  std::to_string(m) + " out of range");
    }
    h += value * pauli_at(reg, Axis::z, m);
  }
  return h;
}

inline Matrix propagator(const CouplingSet& c, double t) {
  if (t < 0) {
    throw std::invalid_argument("propagator: negative duration");
  }
  return expm_hermitian(build_hamiltonian(c), t);
}

// ---------------------------------------------------------------------------
// Pulse parameterizations
// ---------------------------------------------------------------------------

// Reduced control parameters of the three-qubit pulse. The gate depends on
// (phi, theta, varphi) and the product j*tau only, which is pinned to pi.
struct OneQubitPulse {
  double j = 1.0;       // energy scale, > 0
  double phi = 0.0;     // local-field angle, [-pi/2, pi/2]; sets gamma_1
  double theta = 0.0;   // polar angle of the dark state, [0, pi]
  double varphi = 0.0;  // azimuthal angle, [0, 2*pi)
  double tau = pi;      // duration; j*tau = pi

  static OneQubitPulse with_rate(double j, double phi, double theta,
                                 double varphi) {
    return OneQubitPulse{j, phi, theta, varphi, pi / j}.validated();
  }

  OneQubitPulse validated() const {
    OneQubitPulse p = *this;
    if (!(p.j > 0) || !std::isfinite(p.j)) {
      throw std::invalid_argument("OneQubitPulse: j must be positive");
    }
    if (std::abs(p.j * p.tau - pi) > tol::structural) {
      throw std::invalid_argument("OneQubitPulse: j*tau must equal pi");
    }
    detail::require_angle(p.phi, -pi / 2, pi / 2, "OneQubitPulse.phi");
    detail::require_angle(p.theta, 0, pi, "OneQubitPulse.theta");
    if (!std::isfinite(p.varphi)) {
      throw std::invalid_argument("OneQubitPulse: varphi must be finite");
    }
    p.varphi = detail::wrap_2pi(p.varphi);
    return p;
  }
};

// Reduced control parameters of the six-qubit pulse; lambda*tau = pi.
struct TwoQubitPulse {
  double lambda = 1.0;  // energy scale, > 0
  double zeta = 0.0;    // local-field angle, [-pi/2, pi/2]; sets gamma_2
  double alpha = 0.0;   // polar angle, [0, pi]
  double beta = 0.0;    // azimuthal angle, [0, 2*pi)
  double tau = pi;      // duration; lambda*tau = pi

  static TwoQubitPulse with_rate(double lambda, double zeta, double alpha,
                                 double beta) {
    return TwoQubitPulse{lambda, zeta, alpha, beta, pi / lambda}.validated();
  }

  TwoQubitPulse validated() const {
    TwoQubitPulse p = *this;
    if (!(p.lambda > 0) || !std::isfinite(p.lambda)) {
      throw std::invalid_argument("TwoQubitPulse: lambda must be positive");
    }
    if (std::abs(p.lambda * p.tau - pi) > tol::structural) {
      throw std::invalid_argument("TwoQubitPulse: lambda*tau must equal pi");
    }
    detail::require_angle(p.zeta, -pi / 2, pi / 2, "TwoQubitPulse.zeta");
    detail::require_angle(p.alpha, 0, pi, "TwoQubitPulse.alpha");
    if (!std::isfinite(p.beta)) {
      throw std::invalid_argument("TwoQubitPulse: beta must be finite");
    }
    p.beta = detail::wrap_2pi(p.beta);
    return p;
  }
};

// Rotation phases of the projected gates.
inline double gamma_one(const OneQubitPulse& p) {
  return pi + pi * std::sin(p.phi);
}
inline double gamma_two(const TwoQubitPulse& p) {
  return pi + pi * std::sin(p.zeta);
}

// ---------------------------------------------------------------------------
// Logical encodings
// ---------------------------------------------------------------------------

struct LogicalEncoding {
  enum class Kind { one_qubit, two_qubit };
  Kind kind;
  std::vector<BitString> logical;   // ordered computational basis
  std::vector<BitString> ancillas;

  int n() const { return logical.front().size(); }
  QubitRegister reg() const { return QubitRegister(n()); }

  std::vector<Vector> logical_states() const {
    std::vector<Vector> out;
    for (const auto& b : logical) out.push_back(basis_state(reg(), b));
    return out;
  }

  Subspace logical_subspace() const {
    std::vector<std::string> labels;
    for (const auto& b : logical) labels.push_back(b.str());
    Subspace sub = Subspace::from_states(logical_states(), labels);
    return sub;
  }

  // |0>_L = |010>, |1>_L = |001|, ancilla |a> = |100>.
  static LogicalEncoding one_qubit() {
    return {Kind::one_qubit,
            {BitString::parse("010"), BitString::parse("001")},
            {BitString::parse("100")}};
  }

  // |00>_L = |010010>, ..., |11>_L = |001001>; ancillas |011000>, |000011>.
  static LogicalEncoding two_qubit() {
    return {Kind::two_qubit,
            {BitString::parse("010010"), BitString::parse("010001"),
             BitString::parse("001010"), BitString::parse("001001")},
            {BitString::parse("011000"), BitString::parse("000011")}};
  }
};

// ---------------------------------------------------------------------------
// Pulse -> couplings
// ---------------------------------------------------------------------------

namespace detail {
inline void set_if_nonzero(std::map<std::pair<int, int>, double>& m, int k,
                           int l, double value) {
  if (value != 0.0) m[{k, l}] = value;
}
inline void set_if_nonzero(std::map<int, double>& m, int key, double value) {
  if (value != 0.0) m[key] = value;
}
}  // namespace detail

// The five nonzero couplings of the three-qubit pulse; the third local field
// stays zero and the other two are equal, which is what empties the ancilla
// at tau and zeroes the dark-state energy.
inline CouplingSet one_qubit_couplings(const OneQubitPulse& pulse) {
  const OneQubitPulse p = pulse.validated();
  CouplingSet c;
  c.n = 3;
  const double jc = p.j * std::cos(p.phi);
  detail::set_if_nonzero(c.jx, 1, 2,
                         jc * std::sin(p.theta / 2) * std::cos(p.varphi));
  detail::set_if_nonzero(c.jy, 1, 2,
                         -jc * std::sin(p.theta / 2) * std::sin(p.varphi));
  detail::set_if_nonzero(c.jx, 1, 3, -jc * std::cos(p.theta / 2));
  const double jz = p.j * std::sin(p.phi);
  detail::set_if_nonzero(c.jz, 2, jz);
  detail::set_if_nonzero(c.jz, 3, jz);
  return c;
}

// The five nonzero couplings of the six-qubit pulse.
inline CouplingSet two_qubit_couplings(const TwoQubitPulse& pulse) {
  const TwoQubitPulse p = pulse.validated();
  CouplingSet c;
  c.n = 6;
  const double lc = p.lambda * std::cos(p.zeta);
  detail::set_if_nonzero(c.jx, 3, 5,
                         lc * std::sin(p.alpha / 2) * std::cos(p.beta));
  detail::set_if_nonzero(c.jy, 3, 5,
                         -lc * std::sin(p.alpha / 2) * std::sin(p.beta));
  detail::set_if_nonzero(c.jx, 3, 6, -lc * std::cos(p.alpha / 2));
  const double jz = p.lambda * std::sin(p.zeta);
  detail::set_if_nonzero(c.jz, 5, jz);
  detail::set_if_nonzero(c.jz, 6, jz);
  return c;
}

// ---------------------------------------------------------------------------
// Bright, dark, and ancilla states
// ---------------------------------------------------------------------------

struct OneQubitFrame {
  Vector bright;   // coupled to the ancilla by the pulse
  Vector dark;     // zero-energy eigenstate, untouched by the evolution
  Vector ancilla;
};

inline OneQubitFrame bright_dark_states(
    const OneQubitPulse& pulse,
    const LogicalEncoding& enc = LogicalEncoding::one_qubit()) {
  if (enc.kind != LogicalEncoding::Kind::one_qubit) {
    throw std::invalid_argument("bright_dark_states: need one-qubit encoding");
  }
  const OneQubitPulse p = pulse.validated();
  const QubitRegister reg = enc.reg();
  const Vector zero_l = basis_state(reg, enc.logical[0]);
  const Vector one_l = basis_state(reg, enc.logical[1]);
  const double s = std::sin(p.theta / 2);
  const double cc = std::cos(p.theta / 2);
  const Complex em(std::cos(p.varphi), -std::sin(p.varphi));  // e^{-i varphi}
  const Complex ep = std::conj(em);
  OneQubitFrame f;
  f.bright = s * em * zero_l - cc * one_l;
  f.dark = cc * zero_l + s * ep * one_l;
  f.ancilla = basis_state(reg, enc.ancillas[0]);
  return f;
}

struct TwoQubitFrame {
  Vector b1, d1;  // bright/dark pair in the control-0 block
  Vector b2, d2;  // bright/dark pair in the control-1 block
  Vector a1, a2;  // ancillas

  // Basis order used by the closed-form propagator.
  std::vector<Vector> closed_form_basis() const {
    return {a1, a2, b1, d1, b2, d2};
  }
};

inline TwoQubitFrame two_qubit_states(
    const TwoQubitPulse& pulse,
    const LogicalEncoding& enc = LogicalEncoding::two_qubit()) {
  if (enc.kind != LogicalEncoding::Kind::two_qubit) {
    throw std::invalid_argument("two_qubit_states: need two-qubit encoding");
  }
  const TwoQubitPulse p = pulse.validated();
  const QubitRegister reg = enc.reg();
  const Vector l00 = basis_state(reg, enc.logical[0]);
  const Vector l01 = basis_state(reg, enc.logical[1]);
  const Vector l10 = basis_state(reg, enc.logical[2]);
  const Vector l11 = basis_state(reg, enc.logical[3]);
  const double s = std::sin(p.alpha / 2);
  const double cc = std::cos(p.alpha / 2);
  const Complex em(std::cos(p.beta), -std::sin(p.beta));  // e^{-i beta}
  const Complex ep = std::conj(em);
  TwoQubitFrame f;
  f.b1 = s * em * l00 - cc * l01;
  f.d1 = cc * l00 + s * ep * l01;
  f.b2 = cc * l10 - s * ep * l11;
  f.d2 = s * em * l10 + cc * l11;
  f.a1 = basis_state(reg, enc.ancillas[0]);
  f.a2 = basis_state(reg, enc.ancillas[1]);
  return f;
}

// ---------------------------------------------------------------------------
// Closed-form propagators and basis restriction
// ---------------------------------------------------------------------------

// M(i,j) = <s_i| op |s_j> for an ordered list of states.
inline Matrix matrix_in_basis(const Matrix& op,
                              const std::vector<Vector>& states) {
  const auto d = static_cast<Eigen::Index>(states.size());
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      m(i, j) = states[i].dot(op * states[j]);
    }
  }
  return m;
}

// U_1(tau_1) on {|a>, |b>, |d>}: diag(e^{-i gamma_1}, e^{-i gamma_1}, 1).
inline Matrix closed_form_u1(const OneQubitPulse& pulse) {
  const double g = gamma_one(pulse.validated());
  const Complex phase = std::exp(Complex(0, -g));
  Vector diag(3);
  diag << phase, phase, 1.0;
  return diag.asDiagonal();
}

// U_2(tau_2) on {|a1>, |a2>, |b1>, |d1>, |b2>, |d2>}:
// diag(e^{-i g2}, e^{+i g2}, e^{-i g2}, 1, e^{+i g2}, 1).
inline Matrix closed_form_u2(const TwoQubitPulse& pulse) {
  const double g = gamma_two(pulse.validated());
  const Complex minus = std::exp(Complex(0, -g));
  const Complex plus = std::conj(minus);
  Vector diag(6);
  diag << minus, plus, minus, 1.0, plus, 1.0;
  return diag.asDiagonal();
}

// ---------------------------------------------------------------------------
// Projected logical gates
// ---------------------------------------------------------------------------

namespace detail {

// Projection of u onto the span of `states` without any leakage check;
// control-error sweeps use this so leakage shows up as infidelity.
inline Matrix projected_block(const Matrix& u,
                              const std::vector<Vector>& states) {
  return matrix_in_basis(u, states);
}

inline double leakage_norm(const Matrix& u, const Subspace& sub) {
  const Matrix p = sub.projector();
  const Matrix up = u * p;
  return max_norm(p * up - up);
}

}  // namespace detail

// The propagator at tau projected onto the logical basis {|0>_L, |1>_L}.
// Equals |d><d| + e^{-i gamma_1} |b><b| when j*tau = pi; ancilla population
// at tau raises a leakage error.
inline Matrix logical_gate_1q(const OneQubitPulse& pulse) {
  const OneQubitPulse p = pulse.validated();
  const LogicalEncoding enc = LogicalEncoding::one_qubit();
  const Matrix u = propagator(one_qubit_couplings(p), p.tau);
  const double leak = detail::leakage_norm(u, enc.logical_subspace());
  if (leak > kLeakageTol) {
    throw std::runtime_error(
        "logical_gate_1q: leakage out of the computational subspace (" +
        std::to_string(leak) + "); is j*tau = pi?");
  }
  return detail::projected_block(u, enc.logical_states());
}

// Same projection for the two-qubit gate, on the ordered logical basis
// {|00>_L, |01>_L, |10>_L, |11>_L}.
inline Matrix logical_gate_2q(const TwoQubitPulse& pulse) {
  const TwoQubitPulse p = pulse.validated();
  const LogicalEncoding enc = LogicalEncoding::two_qubit();
  const Matrix u = propagator(two_qubit_couplings(p), p.tau);
  const double leak = detail::leakage_norm(u, enc.logical_subspace());
  if (leak > kLeakageTol) {
    throw std::runtime_error(
        "logical_gate_2q: leakage out of the computational subspace (" +
        std::to_string(leak) + "); is lambda*tau = pi?");
  }
  return detail::projected_block(u, enc.logical_states());
}

// The ideal logical one-qubit gate |d><d| + e^{-i gamma} |b><b| written in
// the logical basis, for a dark-state Bloch axis (sin t cos v, sin t sin v,
// cos t).
inline Matrix ideal_gate_1q(double theta, double varphi, double gamma) {
  Matrix nsigma(2, 2);
  const Complex e(std::cos(varphi), std::sin(varphi));
  nsigma << std::cos(theta), std::sin(theta) * std::conj(e),
      std::sin(theta) * e, -std::cos(theta);
  const Matrix pd = 0.5 * (Matrix::Identity(2, 2) + nsigma);  // |d><d|
  const Matrix pb = 0.5 * (Matrix::Identity(2, 2) - nsigma);  // |b><b|
  return pd + std::exp(Complex(0, -gamma)) * pb;
}

// The controlled-rotation form of the ideal two-qubit gate:
// |0><0| x e^{-i g/2} exp(+i g n.sigma/2) + |1><1| x e^{+i g/2}
// exp(-i g m.sigma/2), with n and m the z-mirrored pair of Bloch axes.
inline Matrix ideal_gate_2q(double alpha, double beta, double gamma) {
  auto axis_sigma = [](double ax, double ay, double az) {
    Matrix m(2, 2);
    m << az, Complex(ax, -ay), Complex(ax, ay), -az;
    return m;
  };
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const Matrix nsig = axis_sigma(sa * std::cos(beta), sa * std::sin(beta), ca);
  const Matrix msig = axis_sigma(sa * std::cos(beta), sa * std::sin(beta), -ca);
  const Complex half_minus = std::exp(Complex(0, -gamma / 2));
  const Complex half_plus = std::conj(half_minus);
  const Matrix i2 = Matrix::Identity(2, 2);
  const Matrix v0 =
      half_minus * (std::cos(gamma / 2) * i2 +
                    Complex(0, 1) * std::sin(gamma / 2) * nsig);
  const Matrix v1 =
      half_plus * (std::cos(gamma / 2) * i2 -
                   Complex(0, 1) * std::sin(gamma / 2) * msig);
  Matrix out = Matrix::Zero(4, 4);
  out.block(0, 0, 2, 2) = v0;
  out.block(2, 2, 2, 2) = v1;
  return out;
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

// Target rotation: Bloch axis of the dark state plus the phase gamma picked
// up by the bright/ancilla pair.
struct GateTarget {
  Eigen::Vector3d axis{0, 0, 1};
  double gamma = pi;
};

namespace detail {

struct AxisAngles {
  double polar;
  double azimuth;
};

inline AxisAngles axis_to_angles(const Eigen::Vector3d& axis,
                                 const std::string& who) {
  if (std::abs(axis.norm() - 1.0) > tol::structural) {
    throw std::invalid_argument(who + ": axis must be a unit vector");
  }
  const Eigen::Vector3d n = axis / axis.norm();
  const double polar = std::acos(std::clamp(n.z(), -1.0, 1.0));
  // At the poles the azimuth is unconstrained; pick 0 canonically.
  const double azimuth = std::abs(std::sin(polar)) < 1e-12
                             ? 0.0
                             : wrap_2pi(std::atan2(n.y(), n.x()));
  return {polar, azimuth};
}

inline double gamma_to_field_angle(double gamma, const std::string& who) {
  if (!(gamma >= 0.0 && gamma <= 2 * pi)) {
    throw std::invalid_argument(who + ": gamma must lie in [0, 2*pi]");
  }
  return std::asin(gamma / pi - 1.0);
}

}  // namespace detail

// Reads theta and varphi off the dark-state Bloch axis and inverts
// gamma = pi + pi sin(phi) on the principal arcsin branch, which makes
// gamma <-> phi bijective on [0, 2*pi] <-> [-pi/2, pi/2].
inline OneQubitPulse synthesize_1q(const GateTarget& target,
                                   double energy_scale = 1.0) {
  const auto angles = detail::axis_to_angles(target.axis, "synthesize_1q");
  const double phi = detail::gamma_to_field_angle(target.gamma,
                                                  "synthesize_1q");
  return OneQubitPulse::with_rate(energy_scale, phi, angles.polar,
                                  angles.azimuth);
}

// Same inversion for the two-qubit pulse; zeta = 0 recovers the fixed
// gamma_2 = pi of the earlier schemes.
inline TwoQubitPulse synthesize_2q(double target_gamma,
                                   const Eigen::Vector3d& axis,
                                   double energy_scale = 1.0) {
  const auto angles = detail::axis_to_angles(axis, "synthesize_2q");
  const double zeta = detail::gamma_to_field_angle(target_gamma,
                                                   "synthesize_2q");
  return TwoQubitPulse::with_rate(energy_scale, zeta, angles.polar,
                                  angles.azimuth);
}

// ---------------------------------------------------------------------------
// Entangling-power analysis
// ---------------------------------------------------------------------------

struct LocalityResult {
  bool is_local = false;
  double entangling_measure = 0.0;  // 0 iff the gate factorizes
};

// Decides whether a two-qubit unitary factorizes into one-qubit operations.
// For a controlled gate |0><0| x V0 + |1><1| x V1 this happens iff V0 V1' is
// a phase multiple of the identity; the reported measure is the Frobenius
// distance of V0 V1' from the nearest phase * I. Non-block-diagonal inputs
// fall back to the operator-Schmidt route, scaled to agree with the primary
// measure on block-diagonal inputs.
inline LocalityResult controlled_locality_test(const Matrix& u,
                                               double block_tol = 1e-10,
                                               double local_tol = 1e-8) {
  if (u.rows() != 4 || u.cols() != 4) {
    throw std::invalid_argument("controlled_locality_test: need a 4x4 gate");
  }
  if (!is_unitary(u)) {
    throw std::invalid_argument("controlled_locality_test: input not unitary");
  }
  const double off_block =
      std::max(max_norm(u.block(0, 2, 2, 2)), max_norm(u.block(2, 0, 2, 2)));
  if (off_block <= block_tol) {
    const Matrix w = u.block(0, 0, 2, 2) * u.block(2, 2, 2, 2).adjoint();
    // sqrt(4 - 2|tr w|), evaluated as the Frobenius distance from w to the
    // nearest global phase so that near-local gates do not cancel digits.
    const Complex tr = w.trace();
    const double measure =
        std::abs(tr) == 0.0
            ? 2.0
            : (w - (tr / std::abs(tr)) * Matrix::Identity(2, 2)).norm();
    return {measure <= local_tol, measure};
  }
  // Operator-Schmidt fallback: realign u so that a product gate has rank 1.
  Matrix r(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 2; ++j) {
        for (int l = 0; l < 2; ++l) {
          r(2 * i + k, 2 * j + l) = u(2 * i + j, 2 * k + l);
        }
      }
    }
  }
  Eigen::JacobiSVD<Matrix> svd(r);
  const double sigma2 = svd.singularValues()(1);
  return {sigma2 <= local_tol, std::sqrt(2.0) * sigma2};
}

}  // namespace holodfs
