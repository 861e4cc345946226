// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>

#include "haarflow/numkernel.hpp"

namespace haarflow::gates {

inline ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
  return m;
}

inline ComplexMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix m(2, 2);
  m << Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0);
  return m;
}

inline ComplexMatrix t_gate() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = Complex(1, 0);
  m(1, 1) = std::polar(1.0, M_PI / 4.0);
  return m;
}

// Control on tensor slot 0, target on slot 1.
inline ComplexMatrix cnot() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = Complex(1, 0);
  return m;
}

// exp(i (a . sigma) / 2) in closed form: cos(|a|/2) I + i sin(|a|/2) (a_hat . sigma).
inline ComplexMatrix exp_su2(const std::array<double, 3>& a) {
  const double theta = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  ComplexMatrix m = std::cos(theta / 2.0) * ComplexMatrix::Identity(2, 2);
  if (theta > 0.0) {
    const Complex is(0.0, std::sin(theta / 2.0) / theta);
    m += is * (a[0] * pauli_x() + a[1] * pauli_y() + a[2] * pauli_z());
  }
  return m;
}

}  // namespace haarflow::gates
