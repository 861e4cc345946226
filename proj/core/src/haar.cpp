// SPDX-License-Identifier: Apache-2.0
#include "haarflow/haar.hpp"

#include <Eigen/QR>
#include <cmath>
#include <string>

namespace haarflow::haar {
namespace {

// Permutation operators on (C^dim)^{x t} and exact pairwise Gram entries.
// For t <= 2 the permutations are the identity and, at t = 2, the swap.
std::vector<ComplexMatrix> permutation_operators(int t, int dim) {
  const Eigen::Index d = dim;
  std::vector<ComplexMatrix> ops;
  if (t == 1) {
    ops.push_back(ComplexMatrix::Identity(d, d));
    return ops;
  }
  ops.push_back(ComplexMatrix::Identity(d * d, d * d));
  ComplexMatrix swap = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
  }
  ops.push_back(swap);
  return ops;
}

// tr(P_pi^H P_sigma) = dim^{cycles(pi^{-1} sigma)}. t = 1: [dim].
// t = 2: [[dim^2, dim], [dim, dim^2]].
Eigen::MatrixXd exact_gram(int t, int dim) {
  if (t == 1) {
    Eigen::MatrixXd g(1, 1);
    g(0, 0) = dim;
    return g;
  }
  Eigen::MatrixXd g(2, 2);
  const double d2 = double(dim) * dim;
  g << d2, dim, dim, d2;
  return g;
}

}  // namespace

ComplexMatrix sample_haar(int dim, SeededRng& rng) {
  if (dim < 1) throw UsageError("sample_haar: dim must be positive");
  ComplexMatrix z(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) z(i, j) = Complex(rng.gauss(), rng.gauss());
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    q.col(j) *= (mag == 0.0) ? Complex(1.0, 0.0) : r(j, j) / mag;
  }
  return q;
}

ComplexMatrix exact_twirl_t1(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("exact_twirl_t1: matrix not square");
  const Eigen::Index d = a.rows();
  return (a.trace() / double(d)) * ComplexMatrix::Identity(d, d);
}

std::vector<ComplexVector> haar_fixed_basis(int t, int dim) {
  if (t != 1 && t != 2) {
    throw UnsupportedError("haar_fixed_basis: tensor order " + std::to_string(t) +
                           " not supported (use 1 or 2)");
  }
  if (dim < 2) throw UsageError("haar_fixed_basis: dim must be at least 2");

  const auto ops = permutation_operators(t, dim);
  const Eigen::MatrixXd gram = exact_gram(t, dim);

  // G = L L^T exactly; columns of [v_pi] L^{-T} are orthonormal.
  const Eigen::MatrixXd l = gram.llt().matrixL();
  const Eigen::Index k = static_cast<Eigen::Index>(ops.size());

  std::vector<ComplexVector> raw;
  raw.reserve(k);
  for (const auto& op : ops) raw.push_back(vec_row(op));

  std::vector<ComplexVector> basis;
  basis.reserve(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    // Forward-solve L^T c = e_i column by column: b_i = sum_j inv(L^T)(j,i) v_j.
    ComplexVector b = ComplexVector::Zero(raw[0].size());
    Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
    e(i) = 1.0;
    const Eigen::VectorXd c = l.transpose().triangularView<Eigen::Upper>().solve(e);
    for (Eigen::Index j = 0; j < k; ++j) b += c(j) * raw[j];
    basis.push_back(std::move(b));
  }
  return basis;
}

ComplexMatrix haar_projector(int t, int dim) {
  const auto basis = haar_fixed_basis(t, dim);
  const Eigen::Index n = basis[0].size();
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (const auto& b : basis) p += b * b.adjoint();
  return p;
}

ComplexVector vec_row(const ComplexMatrix& a) {
  ComplexVector v(a.size());
  Eigen::Index idx = 0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) v(idx++) = a(r, c);
  }
  return v;
}

ComplexMatrix unvec_row(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw ShapeError("unvec_row: size mismatch");
  ComplexMatrix a(rows, cols);
  Eigen::Index idx = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = v(idx++);
  }
  return a;
}

}  // namespace haarflow::haar
