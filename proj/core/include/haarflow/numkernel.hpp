// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "haarflow/errors.hpp"

namespace haarflow {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace num {

// Results larger than this many elements are refused.
inline constexpr std::uint64_t kDefaultElementCap = std::uint64_t{1} << 32;

struct NormOptions {
  double tol = 1e-12;             // relative Gram residual at convergence
  int max_iterations = 10000;
};

bool all_finite(const ComplexMatrix& m);

// Kronecker product, subsystem 0 on the left (slowest index).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::uint64_t element_cap = kDefaultElementCap);

// Trace out every subsystem not listed in keep. dims lists subsystem
// dimensions slowest-first, matching kron; keep is a set of subsystem
// indices, and the result orders kept subsystems as in the input.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep);

// Largest singular value by power iteration on the Gram operator m^H m,
// started from a fixed random vector (SeededRng stream 0) so results are
// reproducible across runs. Throws ConvergenceError (with the last iterate
// and residual) if the iteration budget is exhausted.
double operator_norm(const ComplexMatrix& m, const NormOptions& opts = {});

// Largest singular value by dense SVD. Exact up to factorization roundoff
// and independent of spectral gaps, so it is the right choice for small
// matrices and for spectra too degenerate for the iterative routine to
// separate. Cost is cubic in the side length; prefer operator_norm for
// large matrices with a clear gap.
double svd_norm(const ComplexMatrix& m);

// Largest singular value of (I - P) m (I - P) with P the projector onto the
// span of fixed_subspace. The basis must be orthonormal to 1e-10.
double deflated_leading_value(const ComplexMatrix& m,
                              const std::vector<ComplexVector>& fixed_subspace,
                              const NormOptions& opts = {});

// a^power for square a, power >= 0, by repeated squaring.
ComplexMatrix matrix_power(const ComplexMatrix& a, std::int64_t power);

// Pairwise (cascade) summation; deterministic for a fixed element order.
double pairwise_sum(std::span<const double> xs);

// Streaming pairwise accumulator with a binary counter of partial sums.
// Matches pairwise_sum's tree for power-of-two counts and stays O(log n)
// in memory. T needs +, = and construction from a zero-like prototype.
template <typename T>
class PairwiseAccumulator {
 public:
  void add(T value) {
    std::size_t level = 0;
    while (level < filled_.size() && filled_[level]) {
      value = slots_[level] + value;
      filled_[level] = false;
      ++level;
    }
    if (level == filled_.size()) {
      slots_.push_back(value);
      filled_.push_back(true);
    } else {
      slots_[level] = value;
      filled_[level] = true;
    }
    ++count_;
  }

  std::size_t count() const { return count_; }

  // Folds partial sums lowest level first; zero must be a zero of the right shape.
  T total(T zero) const {
    T acc = zero;
    for (std::size_t level = 0; level < filled_.size(); ++level) {
      if (filled_[level]) acc = acc + slots_[level];
    }
    return acc;
  }

 private:
  std::vector<T> slots_;
  std::vector<bool> filled_;
  std::size_t count_ = 0;
};

}  // namespace num
}  // namespace haarflow
