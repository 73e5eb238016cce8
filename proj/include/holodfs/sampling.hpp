#pragma once

// Seeded random draws of pulses, gate targets, and sector states. Every
// randomized check in the test harness funnels through these so a single
// seed pins the whole run.

#include "holodfs/gates.hpp"
#include "holodfs/qubits.hpp"

#include <bit>
#include <random>
#include <stdexcept>
#include <vector>

namespace holodfs {

using Rng = std::mt19937_64;

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline OneQubitPulse random_one_qubit_pulse(Rng& rng, double j = 1.0) {
  const double phi = uniform_real(rng, -pi / 2, pi / 2);
  const double theta = uniform_real(rng, 0.0, pi);
  const double varphi = uniform_real(rng, 0.0, 2 * pi);
  return OneQubitPulse::with_rate(j, phi, theta, varphi);
}

inline TwoQubitPulse random_two_qubit_pulse(Rng& rng, double lambda = 1.0) {
  const double zeta = uniform_real(rng, -pi / 2, pi / 2);
  const double alpha = uniform_real(rng, 0.0, pi);
  const double beta = uniform_real(rng, 0.0, 2 * pi);
  return TwoQubitPulse::with_rate(lambda, zeta, alpha, beta);
}

// Uniform on the unit sphere.
inline Eigen::Vector3d random_axis(Rng& rng) {
  const double z = uniform_real(rng, -1.0, 1.0);
  const double az = uniform_real(rng, 0.0, 2 * pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(az), r * std::sin(az), z};
}

inline GateTarget random_target(Rng& rng) {
  return {random_axis(rng), uniform_real(rng, 0.0, 2 * pi)};
}

// Complex-Gaussian components, normalized.
inline Vector random_state(Rng& rng, Eigen::Index dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v(i) = Complex(g(rng), g(rng));
  }
  return v / v.norm();
}

// Random state supported on one fixed-Hamming-weight sector.
inline Vector random_sector_state(Rng& rng, const QubitRegister& reg,
                                  int weight) {
  if (weight < 0 || weight > reg.n) {
    throw std::invalid_argument("random_sector_state: weight out of range");
  }
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v = Vector::Zero(reg.dim());
  for (Eigen::Index i = 0; i < reg.dim(); ++i) {
    if (std::popcount(static_cast<unsigned long long>(i)) == weight) {
      v(i) = Complex(g(rng), g(rng));
    }
  }
  return v / v.norm();
}

}  // namespace holodfs
