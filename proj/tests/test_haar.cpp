// SPDX-License-Identifier: Apache-2.0
// Haar sampling, twirls, and the fixed-subspace projector against closed
// forms and Monte Carlo cross-checks.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "haarflow/haar.hpp"
#include "haarflow/numkernel.hpp"
#include "haarflow/rng.hpp"

using haarflow::Complex;
using haarflow::ComplexMatrix;
using haarflow::ComplexVector;
using haarflow::SeededRng;
namespace haar = haarflow::haar;
namespace num = haarflow::num;

namespace {

// Permutation operator on t=2 tensor factors: S |i,j> = |j,i>.
ComplexMatrix swap_op(int d) {
  ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(j * d + i, i * d + j) = Complex(1, 0);
  return s;
}

// Numerical Gram-Schmidt oracle for the t=2 fixed basis, independent of the
// exact-Gram construction in the library.
std::vector<ComplexVector> fixed_basis_oracle_t2(int d) {
  std::vector<ComplexVector> raw;
  raw.push_back(haar::vec_row(ComplexMatrix::Identity(d * d, d * d)));
  raw.push_back(haar::vec_row(swap_op(d)));
  std::vector<ComplexVector> basis;
  for (ComplexVector v : raw) {
    for (const auto& b : basis) v -= b.dot(v) * b;
    basis.push_back(v.normalized());
  }
  return basis;
}

}  // namespace

TEST_CASE("sampled unitaries are unitary") {
  SeededRng rng(1, 0);
  for (int d : {1, 2, 3, 4, 7}) {
    const ComplexMatrix u = haar::sample_haar(d, rng);
    CHECK((u.adjoint() * u - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("dimension one samples are pure phases") {
  SeededRng rng(2, 0);
  for (int i = 0; i < 32; ++i) {
    const ComplexMatrix u = haar::sample_haar(1, rng);
    CHECK(std::abs(std::abs(u(0, 0)) - 1.0) < 1e-13);
  }
}

TEST_CASE("sampling validates dimension") {
  SeededRng rng(3, 0);
  CHECK_THROWS_AS(haar::sample_haar(0, rng), haarflow::UsageError);
  CHECK_THROWS_AS(haar::sample_haar(-2, rng), haarflow::UsageError);
}

TEST_CASE("same seed reproduces, different seed departs") {
  SeededRng a(11, 0), b(11, 0), c(12, 0);
  const ComplexMatrix ua = haar::sample_haar(3, a);
  const ComplexMatrix ub = haar::sample_haar(3, b);
  const ComplexMatrix uc = haar::sample_haar(3, c);
  CHECK((ua - ub).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ua - uc).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("first-entry modulus squared averages to 1/dim") {
  // E|U_00|^2 = 1/d for Haar; checks the phase fix removed the QR bias.
  SeededRng rng(4, 0);
  const int n = 100000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix u = haar::sample_haar(2, rng);
    acc += std::norm(u(0, 0));
  }
  CHECK(acc / n == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("column phases are uniform, not QR-biased") {
  // Plain QR leaves the R-diagonal phase convention in the columns; the
  // corrected sampler must give E[U_00] = 0 rather than a positive-real bias.
  SeededRng rng(5, 0);
  const int n = 20000;
  Complex acc(0, 0);
  for (int i = 0; i < n; ++i) acc += haar::sample_haar(2, rng)(0, 0);
  CHECK(std::abs(acc) / n < 0.02);
}

TEST_CASE("exact first-order twirl worked example") {
  ComplexMatrix a(2, 2);
  a << Complex(3, 1), Complex(5, -2), Complex(0, 4), Complex(-1, 0);
  const ComplexMatrix got = haar::exact_twirl_t1(a);
  // trace(a)/2 * I = (1 + i/2) I.
  CHECK((got - (a.trace() / 2.0) * ComplexMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("Monte Carlo twirl converges to the exact twirl") {
  SeededRng rng(6, 0);
  const ComplexMatrix a = [] {
    ComplexMatrix m(3, 3);
    m << Complex(1, 0), Complex(2, 1), Complex(0, -1), Complex(0, 2),
        Complex(-1, 0), Complex(3, 0), Complex(1, 1), Complex(0, 0),
        Complex(2, -2);
    return m;
  }();
  const int n = 20000;
  ComplexMatrix acc = ComplexMatrix::Zero(3, 3);
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix u = haar::sample_haar(3, rng);
    acc += u * a * u.adjoint();
  }
  acc /= n;
  CHECK((acc - haar::exact_twirl_t1(a)).cwiseAbs().maxCoeff() < 5e-2);
}

TEST_CASE("t=1 projector is the normalized identity dyad") {
  const int d = 3;
  const ComplexMatrix p = haar::haar_projector(1, d);
  const ComplexVector v = haar::vec_row(ComplexMatrix::Identity(d, d));
  const ComplexMatrix want = v * v.adjoint() / double(d);
  CHECK((p - want).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("projector is idempotent and Hermitian") {
  for (int t : {1, 2}) {
    for (int d : {2, 3, 4}) {
      const ComplexMatrix p = haar::haar_projector(t, d);
      CAPTURE(t);
      CAPTURE(d);
      CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("t=2 projector has rank two and traces to 2") {
  for (int d : {2, 3, 4}) {
    const ComplexMatrix p = haar::haar_projector(2, d);
    CAPTURE(d);
    CHECK(std::abs(p.trace() - Complex(2, 0)) < 1e-10);
  }
}

TEST_CASE("t=2 fixed basis spans identity and swap with exact Gram") {
  const int d = 2;
  const auto basis = haar::haar_fixed_basis(2, d);
  REQUIRE(basis.size() == 2);
  // Orthonormality.
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = 0; j < basis.size(); ++j)
      CHECK(std::abs(basis[i].dot(basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
  // Raw permutation vectorizations have Gram [[d^2, d], [d, d^2]].
  const ComplexVector vi = haar::vec_row(ComplexMatrix::Identity(d * d, d * d));
  const ComplexVector vs = haar::vec_row(swap_op(d));
  CHECK(std::abs(vi.dot(vi) - Complex(d * d, 0)) < 1e-12);
  CHECK(std::abs(vi.dot(vs) - Complex(d, 0)) < 1e-12);
  CHECK(std::abs(vs.dot(vs) - Complex(d * d, 0)) < 1e-12);
  // Projector built from the library basis equals the oracle's.
  const auto oracle = fixed_basis_oracle_t2(d);
  ComplexMatrix p_lib = ComplexMatrix::Zero(d * d * d * d, d * d * d * d);
  for (const auto& b : basis) p_lib += b * b.adjoint();
  ComplexMatrix p_ora = ComplexMatrix::Zero(d * d * d * d, d * d * d * d);
  for (const auto& b : oracle) p_ora += b * b.adjoint();
  CHECK((p_lib - p_ora).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tensor orders above two are rejected") {
  CHECK_THROWS_AS(haar::haar_fixed_basis(3, 2), haarflow::UnsupportedError);
  CHECK_THROWS_AS(haar::haar_projector(0, 2), haarflow::UnsupportedError);
}

TEST_CASE("projector absorbs sampled moment factors") {
  // For any unitary U, (U^{x t} (x) conj(U)^{x t}) P = P.
  SeededRng rng(7, 0);
  for (int t : {1, 2}) {
    const int d = 2;
    const ComplexMatrix p = haar::haar_projector(t, d);
    const ComplexMatrix u = haar::sample_haar(d, rng);
    const ComplexMatrix ut = t == 1 ? u : num::kron(u, u);
    const ComplexMatrix m = num::kron(ut, ut.conjugate());
    CHECK((m * p - p).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((p * m - p).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("sampled t=1 moment mean approaches the projector") {
  SeededRng rng(8, 0);
  const int d = 4;
  const int n = 100000;
  ComplexMatrix acc = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix u = haar::sample_haar(d, rng);
    acc += num::kron(u, u.conjugate());
  }
  acc /= n;
  CHECK((acc - haar::haar_projector(1, d)).cwiseAbs().maxCoeff() < 5e-3);
}

TEST_CASE("row-major vectorization convention") {
  ComplexMatrix a(2, 2);
  a << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
  const ComplexVector v = haar::vec_row(a);
  CHECK(v(0) == Complex(1, 0));
  CHECK(v(1) == Complex(2, 0));
  CHECK(v(2) == Complex(3, 0));
  CHECK(v(3) == Complex(4, 0));
  CHECK((haar::unvec_row(v, 2, 2) - a).cwiseAbs().maxCoeff() == 0.0);

  // kron(B, conj(C)) vec(A) = vec(B A C^H) under row-major vec.
  SeededRng rng(9, 0);
  const ComplexMatrix b = haar::sample_haar(2, rng);
  const ComplexMatrix c = haar::sample_haar(2, rng);
  const ComplexVector lhs = num::kron(b, c.conjugate()) * haar::vec_row(a);
  const ComplexVector rhs = haar::vec_row(b * a * c.adjoint());
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}
