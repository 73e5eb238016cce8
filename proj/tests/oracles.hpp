#pragma once

// Reference implementations for the test suite. Deliberately naive and
// routed differently from the library: series expansion instead of spectral
// decomposition, block matricization plus SVD instead of phase comparison.

#include "holodfs/linalg.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <complex>

namespace oracles {

using holodfs::Complex;
using holodfs::Matrix;

// exp(-i h t) by scaling-and-squaring with a plain Taylor series.
inline Matrix expm_taylor(const Matrix& h, double t) {
  const auto n = h.rows();
  Matrix a = Complex(0.0, -t) * h;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  a /= std::pow(2.0, squarings);
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = (term * a) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-20) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

// Rows of the matricized two-qubit operator are its flattened 2x2 blocks.
inline Matrix matricize(const Matrix& u) {
  Matrix m(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 2; ++j) {
        for (int l = 0; l < 2; ++l) {
          m(2 * i + k, 2 * j + l) = u(2 * i + j, 2 * k + l);
        }
      }
    }
  }
  return m;
}

// Operator-Schmidt coefficients, descending.
inline std::array<double, 4> schmidt_values(const Matrix& u) {
  Eigen::JacobiSVD<Matrix> svd(matricize(u));
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = svd.singularValues()(i);
  return out;
}

// Closed-form collective dephasing of one qubit.
inline Matrix dephase_qubit(const Matrix& rho, double kappa_t) {
  Matrix out = rho;
  const double f = std::exp(-2.0 * kappa_t);
  out(0, 1) *= f;
  out(1, 0) *= f;
  return out;
}

// exp(i angle/2 axis.sigma) from the trig identity, entry by entry.
inline Matrix su2(double nx, double ny, double nz, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Matrix out(2, 2);
  out(0, 0) = Complex(c, s * nz);
  out(0, 1) = Complex(s * ny, s * nx);
  out(1, 0) = Complex(-s * ny, s * nx);
  out(1, 1) = Complex(c, -s * nz);
  return out;
}

}  // namespace oracles
