#pragma once

// Collective-dephasing channel on the total-spin sectors, survival and gate
// fidelities under that channel, and control-error robustness sweeps.

#include "holodfs/gates.hpp"
#include "holodfs/linalg.hpp"
#include "holodfs/qubits.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <variant>
#include <vector>

namespace holodfs {

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

inline constexpr double kDensityTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

inline void require_density_matrix(const Matrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("density matrix must be square");
  }
  if (!is_hermitian(rho, kDensityTol)) {
    throw std::invalid_argument("density matrix not Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0)) > kDensityTol) {
    throw std::invalid_argument("density matrix trace != 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol) {
    throw std::invalid_argument("density matrix not positive semidefinite");
  }
}

inline Matrix pure_density(const Vector& psi) {
  if (!is_normalized(psi)) {
    throw std::invalid_argument("pure_density: state not normalized");
  }
  return psi * psi.adjoint();
}

// ---------------------------------------------------------------------------
// The collective-dephasing channel
// ---------------------------------------------------------------------------

// Phase diffusion generated by the collective spin operator: the coherence
// between bitstrings u and v decays with the square of their collective-spin
// gap, and states inside one sector are untouched. The monte_carlo mode
// averages explicit random phase kicks and exists to validate exact_sector
// independently.
struct DephasingChannel {
  enum class Mode { exact_sector, monte_carlo };

  QubitRegister reg;
  double kappa_t = 0.0;  // accumulated dephasing strength, >= 0
  Mode mode = Mode::exact_sector;
  int samples = 1;
  std::uint64_t seed = 0;

  DephasingChannel validated() const {
    if (!(kappa_t >= 0.0) || !std::isfinite(kappa_t)) {
      throw std::invalid_argument("DephasingChannel: kappa_t must be >= 0");
    }
    if (mode == Mode::monte_carlo && samples < 1) {
      throw std::invalid_argument("DephasingChannel: samples must be >= 1");
    }
    return *this;
  }

  DephasingChannel split(int slices) const {
    DephasingChannel out = *this;
    out.kappa_t = kappa_t / slices;
    return out;
  }

  static DephasingChannel exact(QubitRegister reg, double kappa_t) {
    return DephasingChannel{reg, kappa_t, Mode::exact_sector, 1, 0}
        .validated();
  }
  static DephasingChannel sampled(QubitRegister reg, double kappa_t,
                                  int samples, std::uint64_t seed) {
    return DephasingChannel{reg, kappa_t, Mode::monte_carlo, samples, seed}
        .validated();
  }
};

namespace detail {

// Averaged phase factor per collective-spin gap. Index d+2n holds the factor
// for gap d; gaps come in steps of 2 but the dense table is cheap.
inline std::vector<Complex> dephasing_factors(const DephasingChannel& ch) {
  const int n = ch.reg.n;
  std::vector<Complex> factors(4 * n + 1, Complex(1.0));
  if (ch.mode == DephasingChannel::Mode::exact_sector) {
    for (int d = -2 * n; d <= 2 * n; ++d) {
      factors[d + 2 * n] =
          std::exp(-ch.kappa_t * static_cast<double>(d) * d / 2.0);
    }
    return factors;
  }
  if (ch.kappa_t == 0.0) return factors;
  // One shared phase draw across all gaps keeps the sampled map a proper
  // average of unitary conjugations, hence completely positive.
  std::mt19937_64 rng(ch.seed);
  std::normal_distribution<double> phase(0.0, std::sqrt(ch.kappa_t));
  std::vector<double> draws(static_cast<std::size_t>(ch.samples));
  for (auto& value : draws) value = phase(rng);
  for (int d = -2 * n; d <= 2 * n; ++d) {
    if (d == 0) continue;  // diagonal entries stay exact
    Complex acc(0.0);
    for (double value : draws) {
      acc += std::exp(Complex(0.0, -value * d));
    }
    factors[d + 2 * n] = acc / static_cast<double>(ch.samples);
  }
  return factors;
}

}  // namespace detail

inline Matrix apply_dephasing(const Matrix& rho, const DephasingChannel& ch) {
  const DephasingChannel c = ch.validated();
  if (rho.rows() != c.reg.dim() || rho.cols() != c.reg.dim()) {
    throw std::invalid_argument(
        "apply_dephasing: density matrix dimension does not match register");
  }
  const auto factors = detail::dephasing_factors(c);
  const int n = c.reg.n;
  Matrix out(rho.rows(), rho.cols());
  for (Eigen::Index u = 0; u < rho.rows(); ++u) {
    const int su = sector_eigenvalue(c.reg, u);
    for (Eigen::Index v = 0; v < rho.cols(); ++v) {
      const int gap = su - sector_eigenvalue(c.reg, v);
      out(u, v) = rho(u, v) * factors[gap + 2 * n];
    }
  }
  return out;
}

// F = <psi| channel(|psi><psi|) |psi>. Equal to 1 for any state supported on
// a single collective-spin sector.
inline double dfs_survival(const Vector& psi, const DephasingChannel& ch) {
  const Matrix rho = apply_dephasing(pure_density(psi), ch);
  return std::real(psi.dot(rho * psi));
}

// ---------------------------------------------------------------------------
// Gates under dephasing
// ---------------------------------------------------------------------------

namespace detail {

// Logical test ensemble: basis states plus the two standard superpositions
// of every pair, enough to expose phase as well as population errors.
inline std::vector<Vector> fidelity_probe_states(Eigen::Index dim) {
  std::vector<Vector> probes;
  for (Eigen::Index i = 0; i < dim; ++i) {
    Vector e = Vector::Zero(dim);
    e(i) = 1.0;
    probes.push_back(e);
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      Vector plus = Vector::Zero(dim);
      plus(i) = r;
      plus(j) = r;
      probes.push_back(plus);
      Vector phase = Vector::Zero(dim);
      phase(i) = r;
      phase(j) = Complex(0.0, r);
      probes.push_back(phase);
    }
  }
  return probes;
}

// Trotterized open evolution: alternate short unitary slices with dephasing
// slices, then compare against the ideal image of each probe state. The two
// generators commute here, so the split is exact and step-count independent
// for sector-supported inputs.
inline double dephased_fidelity(const Matrix& h, double tau,
                                const std::vector<Vector>& probe_embedding,
                                const std::vector<Vector>& ideal_embedding,
                                const DephasingChannel& ch,
                                int trotter_steps) {
  if (trotter_steps < 1) {
    throw std::invalid_argument("dephased_fidelity: trotter_steps must be >= 1");
  }
  const Matrix slice = expm_hermitian(h, tau / trotter_steps);
  const DephasingChannel sub = ch.split(trotter_steps);
  double total = 0.0;
  for (std::size_t k = 0; k < probe_embedding.size(); ++k) {
    Matrix rho = pure_density(probe_embedding[k]);
    for (int s = 0; s < trotter_steps; ++s) {
      rho = slice * rho * slice.adjoint();
      rho = apply_dephasing(rho, sub);
    }
    const Vector& target = ideal_embedding[k];
    total += std::real(target.dot(rho * target));
  }
  return total / static_cast<double>(probe_embedding.size());
}

inline Vector embed_logical(const std::vector<Vector>& logical_states,
                            const Vector& coeffs) {
  Vector out = Vector::Zero(logical_states.front().size());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    out += coeffs(i) * logical_states[static_cast<std::size_t>(i)];
  }
  return out;
}

inline double gate_under_dephasing_impl(const CouplingSet& couplings,
                                        double tau, const Matrix& ideal,
                                        const LogicalEncoding& enc,
                                        const DephasingChannel& ch,
                                        int trotter_steps) {
  if (ch.reg.n != couplings.n) {
    throw std::invalid_argument(
        "gate_under_dephasing: channel register does not match pulse");
  }
  const Matrix h = build_hamiltonian(couplings);
  const auto logical = enc.logical_states();
  const auto probes =
      fidelity_probe_states(static_cast<Eigen::Index>(logical.size()));
  std::vector<Vector> in, out;
  for (const auto& p : probes) {
    in.push_back(embed_logical(logical, p));
    out.push_back(embed_logical(logical, ideal * p));
  }
  return dephased_fidelity(h, tau, in, out, ch, trotter_steps);
}

}  // namespace detail

// Average probe-state fidelity of the encoded gate run inside the dephasing
// environment. Stays at 1 up to numerical error for any kappa_t: the whole
// evolution lives in one collective-spin sector.
inline double gate_under_dephasing(const OneQubitPulse& pulse,
                                   const DephasingChannel& ch,
                                   int trotter_steps) {
  const OneQubitPulse p = pulse.validated();
  const Matrix ideal = ideal_gate_1q(p.theta, p.varphi, gamma_one(p));
  return detail::gate_under_dephasing_impl(one_qubit_couplings(p), p.tau,
                                           ideal,
                                           LogicalEncoding::one_qubit(), ch,
                                           trotter_steps);
}

inline double gate_under_dephasing(const TwoQubitPulse& pulse,
                                   const DephasingChannel& ch,
                                   int trotter_steps) {
  const TwoQubitPulse p = pulse.validated();
  const Matrix ideal = ideal_gate_2q(p.alpha, p.beta, gamma_two(p));
  return detail::gate_under_dephasing_impl(two_qubit_couplings(p), p.tau,
                                           ideal,
                                           LogicalEncoding::two_qubit(), ch,
                                           trotter_steps);
}

// The unencoded comparison: the same rotation driven directly on one
// physical qubit, where the drive does not commute with the collective
// dephasing and coherences decay.
inline double bare_gate_under_dephasing(const GateTarget& target,
                                        const DephasingChannel& ch,
                                        int trotter_steps, double tau = pi) {
  if (ch.reg.n != 1) {
    throw std::invalid_argument(
        "bare_gate_under_dephasing: channel must act on one qubit");
  }
  if (std::abs(target.axis.norm() - 1.0) > tol::structural) {
    throw std::invalid_argument(
        "bare_gate_under_dephasing: axis must be a unit vector");
  }
  Matrix nsigma(2, 2);
  nsigma << target.axis.z(),
      Complex(target.axis.x(), -target.axis.y()),
      Complex(target.axis.x(), target.axis.y()), -target.axis.z();
  const Matrix h = -(target.gamma / (2.0 * tau)) * nsigma;
  const Matrix ideal = expm_hermitian(h, tau);
  const auto probes = detail::fidelity_probe_states(2);
  std::vector<Vector> in, out;
  for (const auto& p : probes) {
    in.push_back(p);
    out.push_back(ideal * p);
  }
  return detail::dephased_fidelity(h, tau, in, out, ch, trotter_steps);
}

// ---------------------------------------------------------------------------
// Control-error sweeps
// ---------------------------------------------------------------------------

struct RobustnessSweep {
  std::variant<OneQubitPulse, TwoQubitPulse> pulse;
  std::vector<double> epsilons;
  std::vector<double> fidelities;
};

// Common-mode control error: every coupling scaled by (1+eps) with the
// duration held fixed, so the pulse area misses pi by a factor (1+eps).
// Leakage out of the logical subspace counts as infidelity; no exception.
inline RobustnessSweep control_error_sweep(
    const std::variant<OneQubitPulse, TwoQubitPulse>& pulse,
    const std::vector<double>& epsilons) {
  for (double eps : epsilons) {
    if (!std::isfinite(eps)) {
      throw std::invalid_argument("control_error_sweep: epsilon not finite");
    }
  }
  CouplingSet couplings;
  double tau = 0.0;
  Matrix ideal;
  LogicalEncoding enc = LogicalEncoding::one_qubit();
  if (const auto* p1 = std::get_if<OneQubitPulse>(&pulse)) {
    const OneQubitPulse p = p1->validated();
    couplings = one_qubit_couplings(p);
    tau = p.tau;
    ideal = ideal_gate_1q(p.theta, p.varphi, gamma_one(p));
    enc = LogicalEncoding::one_qubit();
  } else {
    const TwoQubitPulse p = std::get<TwoQubitPulse>(pulse).validated();
    couplings = two_qubit_couplings(p);
    tau = p.tau;
    ideal = ideal_gate_2q(p.alpha, p.beta, gamma_two(p));
    enc = LogicalEncoding::two_qubit();
  }
  const auto logical = enc.logical_states();
  RobustnessSweep sweep{pulse, epsilons, {}};
  sweep.fidelities.reserve(epsilons.size());
  for (double eps : epsilons) {
    const Matrix u = propagator(couplings.scaled(1.0 + eps), tau);
    const Matrix block = detail::projected_block(u, logical);
    sweep.fidelities.push_back(fidelity_gate(ideal, block));
  }
  return sweep;
}

}  // namespace holodfs
