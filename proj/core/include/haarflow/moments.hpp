// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "haarflow/ensemble.hpp"
#include "haarflow/numkernel.hpp"
#include "haarflow/rng.hpp"

namespace haarflow::mom {

// E[U^{x t} (x) conj(U)^{x t}] over one ensemble step, a dim^{2t} square
// matrix. Averaging a unitary family keeps the norm at most 1, and the
// Haar-fixed subspace is absorbed: M P = P M = P.
struct MomentOperator {
  int t = 1;
  int dim = 0;
  bool hermitian = false;  // true when the step distribution is inverse-closed
  ComplexMatrix matrix;
  std::optional<long long> n_samples;  // set for Monte Carlo builds
  std::optional<double> std_error;     // largest entrywise standard error
};

struct GapReport {
  double lambda_star = 0.0;  // one-step contraction: deflated operator norm
  double rate_alpha = 0.0;   // asymptotic rate: ||(M-P)^32||^(1/32)
  int t = 1;
  int dim = 0;
  std::string ensemble;
};

struct ConvergenceReport {
  int t = 1;
  int dim = 0;
  std::string ensemble;
  long long trials = 0;
  std::vector<int> depths;
  std::vector<double> measured_norm;       // ||mean_m - P|| (operator norm)
  std::vector<double> measured_max_entry;  // entrywise max |mean_m - P|
  std::vector<double> predicted;           // lambda_star^m
  std::vector<double> std_errors;          // 1/sqrt(trials) per depth
};

// Human-readable one-line ensemble description used in reports.
std::string ensemble_label(const ens::GateEnsemble& e);

// True when every atom's adjoint is itself an atom with the same weight, up
// to a global phase (phases cancel inside U^{x t} (x) conj(U)^{x t}).
// Continuous kinds are judged by their sampling rule; every built-in rule
// draws from an inverse-invariant distribution.
bool inverse_closed(const ens::GateEnsemble& e);

// Exact finite-sum build; discrete ensembles only.
MomentOperator build_moment_operator(const ens::GateEnsemble& e, int t);

// Monte Carlo build over n_samples single-step draws, any kind. The sample
// mean is accumulated as rank-1 outer products and realigned, and the largest
// entrywise standard error is recorded. When the ensemble is inverse-closed
// the estimate is symmetrized to (M + M^H)/2, which leaves it unbiased.
MomentOperator build_moment_operator(const ens::GateEnsemble& e, int t,
                                     long long n_samples, SeededRng& rng);

// lambda_star deflates the Haar-fixed subspace from M itself; rate_alpha
// powers M - P to depth 32. For Hermitian M the two agree to iteration
// tolerance; for non-normal M rate_alpha can sit strictly below lambda_star.
GapReport spectral_gap(const MomentOperator& m);

// ||M^m - P|| for each depth, computed as ||(M-P)^m|| (the projector is
// absorbed exactly, so the two agree); depths must be positive ascending.
std::vector<double> distance_to_haar(const MomentOperator& m,
                                     const std::vector<int>& depths);

// Measured side: for each depth, the mean of trials depth-m circuit draws of
// U^{x t} (x) conj(U)^{x t}; reported against lambda_star^m with the
// conservative per-depth error bar 1/sqrt(trials). Trial substreams are
// derived from (rng seed, rng stream, depth index, trial), so results do not
// depend on evaluation order.
ConvergenceReport predicted_vs_measured(const ens::GateEnsemble& e, int t,
                                        const std::vector<int>& depths,
                                        long long trials, SeededRng& rng);

}  // namespace haarflow::mom
