// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "haarflow/numkernel.hpp"
#include "haarflow/rng.hpp"

namespace haarflow::haar {

// Haar-distributed unitary on U(dim): complex Ginibre matrix, QR, then each
// column of Q multiplied by the phase of the matching R diagonal entry. The
// phase correction is what makes the distribution exactly Haar; plain QR is
// biased by the R sign convention.
ComplexMatrix sample_haar(int dim, SeededRng& rng);

// Closed-form average of U a U^H over Haar: trace(a) / dim * identity.
ComplexMatrix exact_twirl_t1(const ComplexMatrix& a);

// Orthonormal basis of the subspace fixed by U^{x t} (x) conj(U)^{x t} for
// every unitary U: row-major vectorized permutation operators on t tensor
// factors, orthonormalized by Gram-Schmidt using the exact Gram matrix
// (inner products are dim^(cycle count)). Supported tensor orders: 1, 2.
std::vector<ComplexVector> haar_fixed_basis(int t, int dim);

// Rank-t! projector onto that fixed subspace.
ComplexMatrix haar_projector(int t, int dim);

// Row-major vectorization: vec(A)[r * cols + c] = A(r, c). With this
// convention, kron(B, conj(C)) * vec(A) = vec(B A C^H).
ComplexVector vec_row(const ComplexMatrix& a);
ComplexMatrix unvec_row(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace haarflow::haar
