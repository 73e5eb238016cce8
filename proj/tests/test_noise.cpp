#include "holodfs/noise.hpp"

#include "holodfs/sampling.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using namespace holodfs;

namespace {

Matrix random_mixed_state(Rng& rng, const QubitRegister& reg) {
  const Matrix r1 = pure_density(random_state(rng, reg.dim()));
  const Matrix r2 = pure_density(random_state(rng, reg.dim()));
  return 0.3 * r1 + 0.7 * r2;
}

// Closed-form fidelity of the three-qubit gate under a common-mode coupling
// error: the dark state decouples for every eps, and the bright/ancilla
// block evolves with eigenphases (1+eps) pi (sin phi +/- 1).
Complex bright_bright_amplitude(double phi, double eps) {
  const double s = std::sin(phi);
  const double wp = (1.0 + eps) * pi * (s + 1.0);
  const double wm = (1.0 + eps) * pi * (s - 1.0);
  return std::exp(Complex(0, -wp)) * (1.0 - s) / 2.0 +
         std::exp(Complex(0, -wm)) * (1.0 + s) / 2.0;
}

double expected_sweep_fidelity_1q(double phi, double eps) {
  const double gamma = pi * (1.0 + std::sin(phi));
  return std::abs(1.0 + std::exp(Complex(0, gamma)) *
                            bright_bright_amplitude(phi, eps)) /
         2.0;
}

double expected_sweep_fidelity_2q(double zeta, double eps) {
  const double gamma = pi * (1.0 + std::sin(zeta));
  const Complex u = bright_bright_amplitude(zeta, eps);
  return std::abs(2.0 + 2.0 * std::real(std::exp(Complex(0, gamma)) * u)) /
         4.0;
}

}  // namespace

TEST_CASE("density matrix validation", "[noise]") {
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Matrix rho = pure_density(plus);
  REQUIRE_NOTHROW(require_density_matrix(rho));
  REQUIRE(std::abs(rho(0, 1) - Complex(0.5)) < 1e-15);

  Vector unnormalized(2);
  unnormalized << 1.0, 1.0;
  REQUIRE_THROWS_AS(pure_density(unnormalized), std::invalid_argument);

  Matrix traceless = rho;
  traceless(1, 1) = Complex(0.2);
  REQUIRE_THROWS_AS(require_density_matrix(traceless), std::invalid_argument);

  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  REQUIRE_THROWS_AS(require_density_matrix(negative), std::invalid_argument);

  Matrix skew = rho;
  skew(0, 1) += Complex(0, 1e-3);
  REQUIRE_THROWS_AS(require_density_matrix(skew), std::invalid_argument);
}

TEST_CASE("single-qubit dephasing matches the closed form", "[noise]") {
  const QubitRegister one(1);
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Matrix rho = pure_density(plus);

  for (double kt : {0.0, 0.5, 1.0, 3.0}) {
    const Matrix out = apply_dephasing(rho, DephasingChannel::exact(one, kt));
    REQUIRE(max_norm(out - oracles::dephase_qubit(rho, kt)) < 1e-15);
  }
  const Matrix at_one =
      apply_dephasing(rho, DephasingChannel::exact(one, 1.0));
  REQUIRE(std::abs(at_one(0, 1) - Complex(0.5 * std::exp(-2.0))) < 1e-15);
}

TEST_CASE("coherence across sectors decays with the squared gap", "[noise]") {
  const QubitRegister reg(3);
  Vector psi = Vector::Zero(8);
  psi(BitString::parse("000").index()) = 1.0 / std::sqrt(2.0);
  psi(BitString::parse("011").index()) = 1.0 / std::sqrt(2.0);
  // Collective-spin gap 4 between weight 0 and weight 2, so the coherence
  // shrinks by e^{-8} at kappa_t = 1.
  const double f = dfs_survival(psi, DephasingChannel::exact(reg, 1.0));
  REQUIRE(f == Catch::Approx(0.5 * (1.0 + std::exp(-8.0))).margin(1e-14));
}

TEST_CASE("sector-supported states pass through untouched", "[noise]") {
  Rng rng(47);
  const QubitRegister reg3(3);
  const QubitRegister reg4(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector a = random_sector_state(rng, reg3, 1);
    const Matrix ra = pure_density(a);
    const Matrix out = apply_dephasing(ra, DephasingChannel::exact(reg3, 5.0));
    REQUIRE(max_norm(out - ra) < 1e-15);
    REQUIRE(dfs_survival(a, DephasingChannel::exact(reg3, 5.0)) ==
            Catch::Approx(1.0).margin(1e-14));

    const Vector b = random_sector_state(rng, reg4, 2);
    REQUIRE(dfs_survival(b, DephasingChannel::exact(reg4, 0.3)) ==
            Catch::Approx(1.0).margin(1e-14));
  }
  REQUIRE_THROWS_AS(random_sector_state(rng, reg3, 4), std::invalid_argument);
}

TEST_CASE("channel composes additively in kappa_t", "[noise]") {
  Rng rng(53);
  const QubitRegister reg(3);
  const Matrix rho = random_mixed_state(rng, reg);
  const Matrix once = apply_dephasing(rho, DephasingChannel::exact(reg, 1.3));
  const Matrix twice =
      apply_dephasing(apply_dephasing(rho, DephasingChannel::exact(reg, 0.9)),
                      DephasingChannel::exact(reg, 0.4));
  REQUIRE(max_norm(once - twice) < 1e-15);

  const DephasingChannel slice = DephasingChannel::exact(reg, 1.3).split(4);
  Matrix stepped = rho;
  for (int s = 0; s < 4; ++s) stepped = apply_dephasing(stepped, slice);
  REQUIRE(max_norm(once - stepped) < 1e-14);
}

TEST_CASE("both channel modes preserve density-matrix structure", "[noise]") {
  Rng rng(59);
  const QubitRegister reg(2);
  const Matrix rho = random_mixed_state(rng, reg);
  for (const DephasingChannel& ch :
       {DephasingChannel::exact(reg, 0.8),
        DephasingChannel::sampled(reg, 0.8, 500, 7)}) {
    const Matrix out = apply_dephasing(rho, ch);
    REQUIRE(std::abs(out.trace() - rho.trace()) < 1e-15);
    REQUIRE(is_hermitian(out, 1e-13));
    REQUIRE_NOTHROW(require_density_matrix(out));
    // Diagonal entries never decay.
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      REQUIRE(std::abs(out(i, i) - rho(i, i)) == 0.0);
    }
  }
}

TEST_CASE("sampled channel converges to the exact one", "[noise]") {
  const QubitRegister reg(2);
  Vector even(4);
  even << 0.5, 0.5, 0.5, 0.5;
  const Matrix rho = pure_density(even);
  const Matrix exact = apply_dephasing(rho, DephasingChannel::exact(reg, 0.5));
  for (std::uint64_t seed : {1ULL, 99ULL}) {
    const Matrix mc = apply_dephasing(
        rho, DephasingChannel::sampled(reg, 0.5, 20000, seed));
    REQUIRE(max_norm(mc - exact) < 5e-2);
  }
  // Zero strength short-circuits the sampler entirely.
  const Matrix frozen =
      apply_dephasing(rho, DephasingChannel::sampled(reg, 0.0, 10, 3));
  REQUIRE(max_norm(frozen - rho) == 0.0);

  REQUIRE_THROWS_AS(DephasingChannel::sampled(reg, 1.0, 0, 0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(DephasingChannel::exact(reg, -0.1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      apply_dephasing(Matrix::Identity(8, 8) / 8.0,
                      DephasingChannel::exact(reg, 1.0)),
      std::invalid_argument);
}

TEST_CASE("encoded gates ride out the dephasing", "[noise]") {
  const OneQubitPulse p = OneQubitPulse::with_rate(1.0, 0.0, pi / 2, 0.0);
  const QubitRegister reg3(3);

  REQUIRE(gate_under_dephasing(p, DephasingChannel::exact(reg3, 0.0), 3) ==
          Catch::Approx(1.0).margin(1e-12));
  REQUIRE(gate_under_dephasing(p, DephasingChannel::exact(reg3, 1.0), 100) >=
          1.0 - 1e-8);
  // The drive commutes with the collective spin, so the interleaving is
  // exact at any step count.
  const double coarse =
      gate_under_dephasing(p, DephasingChannel::exact(reg3, 0.7), 1);
  const double fine =
      gate_under_dephasing(p, DephasingChannel::exact(reg3, 0.7), 9);
  REQUIRE(coarse == Catch::Approx(fine).margin(1e-10));

  const TwoQubitPulse q = TwoQubitPulse::with_rate(1.0, 0.2, 1.2, 0.4);
  const QubitRegister reg6(6);
  REQUIRE(gate_under_dephasing(q, DephasingChannel::exact(reg6, 1.0), 5) >=
          1.0 - 1e-8);

  REQUIRE_THROWS_AS(
      gate_under_dephasing(p, DephasingChannel::exact(reg3, 1.0), 0),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      gate_under_dephasing(p, DephasingChannel::exact(QubitRegister(6), 1.0),
                           3),
      std::invalid_argument);
}

TEST_CASE("the bare qubit does not", "[noise]") {
  const QubitRegister one(1);
  GateTarget x_flip;
  x_flip.axis = Eigen::Vector3d(1, 0, 0);
  x_flip.gamma = pi;

  REQUIRE(bare_gate_under_dephasing(x_flip,
                                    DephasingChannel::exact(one, 0.0), 3) ==
          Catch::Approx(1.0).margin(1e-12));
  const double f =
      bare_gate_under_dephasing(x_flip, DephasingChannel::exact(one, 1.0),
                                100);
  REQUIRE(f < 0.9);
  REQUIRE(f > 0.3);

  REQUIRE_THROWS_AS(
      bare_gate_under_dephasing(x_flip,
                                DephasingChannel::exact(QubitRegister(2), 1.0),
                                3),
      std::invalid_argument);
  GateTarget crooked = x_flip;
  crooked.axis = Eigen::Vector3d(1, 1, 0);
  REQUIRE_THROWS_AS(
      bare_gate_under_dephasing(crooked, DephasingChannel::exact(one, 1.0), 3),
      std::invalid_argument);
}

TEST_CASE("control-error sweep against the eigenphase closed form",
          "[noise]") {
  const double phi = 0.3;
  const OneQubitPulse p = OneQubitPulse::with_rate(1.0, phi, 1.9, 4.3);
  const std::vector<double> eps = {-0.05, 0.0, 0.02, 0.1};
  const RobustnessSweep sweep = control_error_sweep(p, eps);
  REQUIRE(sweep.epsilons == eps);
  REQUIRE(sweep.fidelities.size() == eps.size());
  for (std::size_t k = 0; k < eps.size(); ++k) {
    REQUIRE(sweep.fidelities[k] ==
            Catch::Approx(expected_sweep_fidelity_1q(phi, eps[k]))
                .margin(1e-10));
  }
  REQUIRE(sweep.fidelities[1] == Catch::Approx(1.0).margin(1e-12));

  const double zeta = -0.25;
  const TwoQubitPulse q = TwoQubitPulse::with_rate(1.0, zeta, 2.4, 1.1);
  const RobustnessSweep sweep2 = control_error_sweep(q, {0.0, 0.08});
  REQUIRE(sweep2.fidelities[0] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(sweep2.fidelities[1] ==
          Catch::Approx(expected_sweep_fidelity_2q(zeta, 0.08))
              .margin(1e-10));
}

TEST_CASE("sweep degrades smoothly and tolerates leakage", "[noise]") {
  const OneQubitPulse p = OneQubitPulse::with_rate(1.0, 0.3, 1.0, 0.0);
  const RobustnessSweep sweep =
      control_error_sweep(p, {0.0, 0.02, 0.05, 0.3});
  REQUIRE(sweep.fidelities[0] >= sweep.fidelities[1]);
  REQUIRE(sweep.fidelities[1] >= sweep.fidelities[2]);
  // Large detuning leaks population; reported as infidelity, not an error.
  REQUIRE(sweep.fidelities[3] < 1.0 - 1e-3);
  REQUIRE(sweep.fidelities[3] >= 0.0);

  REQUIRE_THROWS_AS(
      control_error_sweep(p, {0.0, std::numeric_limits<double>::infinity()}),
      std::invalid_argument);
}
