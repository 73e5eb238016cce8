#pragma once

// N-qubit operator and state construction: single-site Pauli operators
// embedded in 2^n dimensions, the XY and Dzialoshinski-Moriya pair
// interactions, the collective spin-z operator, and bitstring basis states.
//
// Conventions (fixed globally, sign flips here silently negate every phase
// formula downstream):
//   - qubit indices are 1-based; qubit 1 is the leftmost bit of a bitstring
//     and the most significant position of the basis index,
//   - |0> is the +1 eigenvector of sigma_z, |1> the -1 eigenvector.

#include "holodfs/linalg.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace holodfs {

struct QubitRegister {
  int n = 1;  // 1 <= n <= 10

  explicit QubitRegister(int n_qubits) : n(checked(n_qubits)) {}

  Eigen::Index dim() const { return Eigen::Index{1} << n; }

 private:
  static int checked(int n) {
    if (n < 1 || n > 10) {
      throw std::invalid_argument("QubitRegister: n must be in [1, 10], got " +
                                  std::to_string(n));
    }
    return n;
  }
};

// ---------------------------------------------------------------------------
// Bitstrings
// ---------------------------------------------------------------------------

// Text syntax "010010", qubit 1 leftmost; basis_index = sum bits[k] 2^(n-k).
struct BitString {
  std::vector<std::uint8_t> bits;

  int size() const { return static_cast<int>(bits.size()); }

  int weight() const {
    int w = 0;
    for (auto b : bits) w += b;
    return w;
  }

  Eigen::Index index() const {
    Eigen::Index idx = 0;
    for (auto b : bits) idx = (idx << 1) | b;
    return idx;
  }

  std::string str() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
  }

  static BitString parse(std::string_view text) {
    BitString out;
    out.bits.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("BitString::parse: invalid character '" +
                                    std::string(1, c) + "' in \"" +
                                    std::string(text) + "\"");
      }
      out.bits.push_back(c == '1');
    }
    if (out.bits.empty()) {
      throw std::invalid_argument("BitString::parse: empty string");
    }
    return out;
  }

  static BitString from_index(Eigen::Index idx, int n) {
    BitString out;
    out.bits.assign(n, 0);
    for (int k = n - 1; k >= 0; --k) {
      out.bits[k] = idx & 1;
      idx >>= 1;
    }
    return out;
  }

  bool operator==(const BitString&) const = default;
};

inline Vector basis_state(const QubitRegister& reg, const BitString& b) {
  if (b.size() != reg.n) {
    throw std::invalid_argument("basis_state: bitstring length " +
                                std::to_string(b.size()) +
                                " does not match register size " +
                                std::to_string(reg.n));
  }
  Vector v = Vector::Zero(reg.dim());
  v(b.index()) = 1.0;
  return v;
}

inline Vector basis_state(const QubitRegister& reg, std::string_view text) {
  return basis_state(reg, BitString::parse(text));
}

// ---------------------------------------------------------------------------
// Single-site Paulis
// ---------------------------------------------------------------------------

enum class Axis { x, y, z };

inline Matrix pauli(Axis axis) {
  Matrix s(2, 2);
  switch (axis) {
    case Axis::x: s << 0, 1, 1, 0; break;
    case Axis::y: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case Axis::z: s << 1, 0, 0, -1; break;
  }
  return s;
}

// I x ... x sigma_axis x ... x I with the Pauli at 1-based position `site`.
inline Matrix pauli_at(const QubitRegister& reg, Axis axis, int site) {
  if (site < 1 || site > reg.n) {
    throw std::invalid_argument("pauli_at: site " + std::to_string(site) +
                                " out of range for n=" + std::to_string(reg.n));
  }
  Matrix op = Matrix::Identity(1, 1);
  for (int k = 1; k <= reg.n; ++k) {
    op = kron(op, k == site ? pauli(axis) : Matrix::Identity(2, 2));
  }
  return op;
}

// ---------------------------------------------------------------------------
// Pair interactions and the collective spin operator
// ---------------------------------------------------------------------------

namespace detail {
inline void require_pair(const QubitRegister& reg, int k, int l,
                         const std::string& who) {
  if (k == l) throw std::invalid_argument(who + ": sites must differ");
  if (k < 1 || k > reg.n || l < 1 || l > reg.n) {
    throw std::invalid_argument(who + ": site pair (" + std::to_string(k) +
                                "," + std::to_string(l) + ") out of range");
  }
}
}  // namespace detail

// XY hopping: R^x_kl = (sx_k sx_l + sy_k sy_l)/2 = |01><10| + |10><01| on
// the (k,l) pair; annihilates |00> and |11>.
inline Matrix xy_term(const QubitRegister& reg, int k, int l) {
  detail::require_pair(reg, k, l, "xy_term");
  return 0.5 * (pauli_at(reg, Axis::x, k) * pauli_at(reg, Axis::x, l) +
                pauli_at(reg, Axis::y, k) * pauli_at(reg, Axis::y, l));
}

// Dzialoshinski-Moriya: R^y_kl = (sx_k sy_l - sy_k sx_l)/2; antisymmetric in
// (k,l) and supported on the same hopping block as R^x_kl.
inline Matrix dm_term(const QubitRegister& reg, int k, int l) {
  detail::require_pair(reg, k, l, "dm_term");
  return 0.5 * (pauli_at(reg, Axis::x, k) * pauli_at(reg, Axis::y, l) -
                pauli_at(reg, Axis::y, k) * pauli_at(reg, Axis::x, l));
}

// S_N = sum_k sz_k; diagonal, eigenvalue n - 2w on Hamming weight w strings.
inline Matrix collective_z(const QubitRegister& reg) {
  Vector diag(reg.dim());
  for (Eigen::Index idx = 0; idx < reg.dim(); ++idx) {
    int w = static_cast<int>(std::popcount(static_cast<std::uint64_t>(idx)));
    diag(idx) = static_cast<double>(reg.n - 2 * w);
  }
  return diag.asDiagonal();
}

// S_N eigenvalue of a single bitstring.
inline int sector_eigenvalue(const QubitRegister& reg, Eigen::Index idx) {
  return reg.n - 2 * static_cast<int>(
                         std::popcount(static_cast<std::uint64_t>(idx)));
}

}  // namespace holodfs
