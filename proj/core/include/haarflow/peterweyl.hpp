// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "haarflow/ensemble.hpp"
#include "haarflow/numkernel.hpp"
#include "haarflow/rng.hpp"

namespace haarflow::pw {

// Spin labels are carried as 2j so half-integers stay exact integers.
inline constexpr int kDefaultTwiceJMax = 12;

inline int spin_dim(int twice_j) { return twice_j + 1; }

// Exact dimension of the (k, l) irreducible representation of the rank-D
// unitary group: (k + l + D - 1) / (D - 1) * C(k + D - 2, k) * C(l + D - 2, l),
// evaluated in exact integer arithmetic. Throws on overflow past 2^63.
std::int64_t irrep_dim(int D, int k, int l);

struct EulerZYZ {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// z-y-z angles of a det-one 2x2 unitary: g = Rz(alpha) Ry(beta) Rz(gamma),
// beta in [0, pi]. At the beta = 0 and beta = pi degeneracies only one angle
// combination survives; the convention here is gamma = 0 with everything
// absorbed into alpha.
EulerZYZ euler_zyz(const ComplexMatrix& su2);

ComplexMatrix su2_from_euler(double alpha, double beta, double gamma);

// Real little-d matrix d^j(beta), rows and columns ordered m = +j .. -j,
// via the factorial-sum formula with precomputed log-factorials.
Eigen::MatrixXd little_d(int twice_j, double beta);

// Full representation matrix of the det-one projection of g:
// D^j_{m'm} = exp(-i m' alpha) d^j_{m'm}(beta) exp(-i m gamma).
// At twice_j = 1 this returns the projection of g itself.
ComplexMatrix wigner_d(int twice_j, const ComplexMatrix& g);

struct FourierBlock {
  int twice_j = 0;
  ComplexMatrix matrix;
  std::string method;  // finite_sum | quadrature | monte_carlo
  std::optional<long long> n_samples;
  std::optional<double> std_error;

  int dim() const { return spin_dim(twice_j); }
};

// Euler-angle product grid: resolution uniform nodes in alpha over [0, 2pi)
// and gamma over [0, 4pi), Gauss-Legendre nodes in cos(beta). Node weights
// are beta_weights[ib] / resolution^2 and sum to 1.
struct QuadratureGrid {
  int resolution = 0;
  std::vector<double> alphas;
  std::vector<double> gammas;
  std::vector<double> betas;
  std::vector<double> beta_weights;

  static QuadratureGrid build(int resolution = 48);
  double node_weight(int beta_index) const {
    return beta_weights[beta_index] / (double(resolution) * double(resolution));
  }
  double weight_sum() const;
};

// hat f^j = d_j * sum_i p_i conj(D^j(U_i)); discrete dim-2 ensembles.
FourierBlock fourier_block_finite(const ens::GateEnsemble& e, int twice_j);

// hat f^j of the depth-m circuit distribution, estimated from n_samples
// products; std_error records the largest entrywise standard error.
FourierBlock fourier_block_monte_carlo(const ens::GateEnsemble& e, int twice_j,
                                       long long n_samples, int depth,
                                       SeededRng& rng);

// hat f^j = d_j * integral of density * conj(D^j) over the grid; the density
// comes from the ensemble (haar_subgroup or gaussian_packet).
FourierBlock fourier_block_quadrature(const ens::GateEnsemble& e, int twice_j,
                                      const QuadratureGrid& grid);

// Largest singular value of the block over its dimension; the convergence
// rate contribution of this label. Equals 1 for the trivial label.
double norm_ratio(const FourierBlock& block);

// Fourier block of the m-fold self-convolution: d_j (B / d_j)^m.
FourierBlock conv_power_blocks(const FourierBlock& block, int m);

// f(g) = sum_j tr(hat f^j D^j(g)^T). Blocks must include the trivial label
// and carry distinct labels.
Complex reconstruct_density(const ComplexMatrix& g,
                            const std::vector<FourierBlock>& blocks);

// sum_j tr(B^H B) / d_j, the squared L2 norm of the reconstructed density.
double parseval(const std::vector<FourierBlock>& blocks);

std::string block_to_json_string(const FourierBlock& block);
FourierBlock block_from_json_string(const std::string& text);

}  // namespace haarflow::pw
