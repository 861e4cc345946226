// SPDX-License-Identifier: Apache-2.0
#include "haarflow/numkernel.hpp"

#include <cmath>
#include <string>

#include "haarflow/rng.hpp"

namespace haarflow::num {
namespace {

ComplexVector fixed_random_start(Eigen::Index n, std::uint64_t round) {
  // Stream 0 with a fixed seed: the same start vector on every run. Restart
  // rounds shift the seed so a pathological start cannot wedge the iteration.
  SeededRng rng(round, 0);
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(rng.gauss(), rng.gauss());
  return v;
}

std::vector<Complex> to_std(const ComplexVector& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

bool all_finite(const ComplexMatrix& m) {
  return m.array().real().isFinite().all() && m.array().imag().isFinite().all();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::uint64_t element_cap) {
  if (a.size() == 0 || b.size() == 0) throw ShapeError("kron: empty operand");
  if (!all_finite(a) || !all_finite(b)) throw ValidationError("kron: non-finite entry");
  const std::uint64_t rows = std::uint64_t(a.rows()) * std::uint64_t(b.rows());
  const std::uint64_t cols = std::uint64_t(a.cols()) * std::uint64_t(b.cols());
  if (rows != 0 && cols > element_cap / rows) {
    throw CapacityError("kron: result of " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " exceeds element cap " +
                        std::to_string(element_cap));
  }
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  if (m.rows() != m.cols()) throw ShapeError("partial_trace: matrix not square");
  if (!all_finite(m)) throw ValidationError("partial_trace: non-finite entry");
  std::int64_t total = 1;
  for (int d : dims) {
    if (d <= 0) throw ShapeError("partial_trace: nonpositive subsystem dimension");
    total *= d;
  }
  if (total != m.rows()) {
    throw ShapeError("partial_trace: dims product " + std::to_string(total) +
                     " != matrix dimension " + std::to_string(m.rows()));
  }
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw ShapeError("partial_trace: keep index out of range");
    if (kept[k]) throw ShapeError("partial_trace: duplicate keep index");
    kept[k] = true;
  }

  // Strides in the flattened index, subsystem 0 slowest.
  std::vector<std::int64_t> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  std::vector<int> keep_idx, trace_idx;
  for (int i = 0; i < n; ++i) (kept[i] ? keep_idx : trace_idx).push_back(i);

  std::int64_t kdim = 1;
  for (int i : keep_idx) kdim *= dims[i];
  std::int64_t tdim = 1;
  for (int i : trace_idx) tdim *= dims[i];

  // Offset tables: flattened contribution of each kept / traced multi-index.
  auto offsets = [&](const std::vector<int>& idx, std::int64_t count) {
    std::vector<std::int64_t> out(count, 0);
    for (std::int64_t flat = 0; flat < count; ++flat) {
      std::int64_t rem = flat, off = 0;
      for (int pos = static_cast<int>(idx.size()) - 1; pos >= 0; --pos) {
        const int sub = idx[pos];
        off += (rem % dims[sub]) * stride[sub];
        rem /= dims[sub];
      }
      out[flat] = off;
    }
    return out;
  };
  const auto koff = offsets(keep_idx, kdim);
  const auto toff = offsets(trace_idx, tdim);

  ComplexMatrix out = ComplexMatrix::Zero(kdim, kdim);
  for (std::int64_t r = 0; r < kdim; ++r) {
    for (std::int64_t c = 0; c < kdim; ++c) {
      Complex acc(0.0, 0.0);
      for (std::int64_t t = 0; t < tdim; ++t) {
        acc += m(koff[r] + toff[t], koff[c] + toff[t]);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

double operator_norm(const ComplexMatrix& m, const NormOptions& opts) {
  if (m.size() == 0) throw ShapeError("operator_norm: empty matrix");
  if (!all_finite(m)) throw ValidationError("operator_norm: non-finite entry");
  if (m.norm() == 0.0) return 0.0;

  const Eigen::Index n = m.cols();
  ComplexVector v = fixed_random_start(n, 0);
  v /= v.norm();

  double sigma2 = 0.0;
  double residual = 0.0;
  std::uint64_t restarts = 0;
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    ComplexVector gv = m.adjoint() * (m * v);
    sigma2 = gv.dot(v).real();  // Rayleigh quotient of the Gram operator
    if (sigma2 <= 0.0 || gv.norm() == 0.0) {
      // Start vector fell into the null space; redraw deterministically.
      v = fixed_random_start(n, ++restarts);
      v /= v.norm();
      continue;
    }
    residual = (gv - sigma2 * v).norm();
    if (residual <= opts.tol * sigma2) return std::sqrt(sigma2);
    v = gv / gv.norm();
  }
  throw ConvergenceError(
      "operator_norm: no convergence after " + std::to_string(opts.max_iterations) +
          " iterations (residual " + std::to_string(residual) + ")",
      std::sqrt(std::max(sigma2, 0.0)), residual, opts.max_iterations, to_std(v));
}

double svd_norm(const ComplexMatrix& m) {
  if (m.size() == 0) throw ShapeError("svd_norm: empty matrix");
  if (!all_finite(m)) throw ValidationError("svd_norm: non-finite entry");
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double deflated_leading_value(const ComplexMatrix& m,
                              const std::vector<ComplexVector>& fixed_subspace,
                              const NormOptions& opts) {
  if (m.rows() != m.cols()) throw ShapeError("deflated_leading_value: matrix not square");
  const Eigen::Index n = m.rows();
  const Eigen::Index k = static_cast<Eigen::Index>(fixed_subspace.size());
  if (k == 0) return operator_norm(m, opts);

  ComplexMatrix q(n, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (fixed_subspace[i].size() != n) {
      throw ShapeError("deflated_leading_value: basis vector of wrong dimension");
    }
    q.col(i) = fixed_subspace[i];
  }
  const double ortho_dev =
      (q.adjoint() * q - ComplexMatrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (ortho_dev > 1e-10) {
    throw PreconditionError("deflated_leading_value: basis not orthonormal (max deviation " +
                            std::to_string(ortho_dev) + ")");
  }

  ComplexMatrix deflated = m - q * (q.adjoint() * m);
  deflated -= (deflated * q) * q.adjoint();
  return operator_norm(deflated, opts);
}

ComplexMatrix matrix_power(const ComplexMatrix& a, std::int64_t power) {
  if (a.rows() != a.cols()) throw ShapeError("matrix_power: matrix not square");
  if (power < 0) throw UsageError("matrix_power: negative power");
  ComplexMatrix result = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix base = a;
  while (power > 0) {
    if (power & 1) result = result * base;
    power >>= 1;
    if (power > 0) base = base * base;
  }
  return result;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace haarflow::num
