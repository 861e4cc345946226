// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "haarflow/ensemble.hpp"
#include "haarflow/numkernel.hpp"
#include "haarflow/rng.hpp"

namespace haarflow::probes {

// Depth-resolved sample means of one scalar observable, with the Haar-limit
// baseline estimated by an independent Monte Carlo Haar oracle. Trial
// substreams are derived from (rng seed, rng stream, depth index, trial), so
// results are identical for any evaluation order or worker count.
struct ProbeSeries {
  std::string probe;
  std::vector<int> depths;
  std::vector<double> mean;
  std::vector<double> std_error;
  long long trials = 0;
  double baseline = 0.0;
  double baseline_std_error = 0.0;
  std::string baseline_provenance;
  // The reversal statistic is one reading of a loosely specified quantity;
  // outputs carry the exact form used so alternatives can be compared.
  bool interpretation_flagged = false;
  std::string interpretation;
};

struct FitResult {
  double rate = 0.0;       // exp(slope); non-decaying series clamp to 1
  double offset = 0.0;     // exp(intercept): value ~ offset * rate^m + baseline
  double r_squared = 0.0;  // weighted, clamped to [0, 1]
  int window_lo = 0;       // first and last admissible depth
  int window_hi = 0;
};

// Number of Haar draws behind every Monte Carlo baseline.
inline constexpr long long kBaselineSamples = 100000;

// trace(rho_A^2) of the pure state psi reduced to the cut qubits.
double state_purity(const ComplexVector& psi, int qubits,
                    const std::vector<int>& cut);

// Mean subsystem purity of depth-m two-local circuits applied to |0...0>.
// cut lists kept qubits (nonempty proper subset). Baseline: purity of
// sample_haar(2^qubits) columns, kBaselineSamples draws.
ProbeSeries purity_probe(const ens::GateEnsemble& e, int qubits,
                         const std::vector<int>& cut,
                         const std::vector<int>& depths, long long trials,
                         SeededRng& rng);

// Mean of F = |<psi0| U^H Lambda U |psi0>|^2 over depth-m circuit draws U,
// with |psi0> = |0...0>. Baseline: the same statistic under Haar U.
ProbeSeries motion_reversal_probe(const ens::GateEnsemble& e,
                                  const ComplexMatrix& perturbation,
                                  const std::vector<int>& depths,
                                  long long trials, SeededRng& rng);

// Weighted least squares of ln|value - baseline| against depth. Points with
// |value - baseline| <= 3x the combined standard error are outside the
// admissible window; fewer than 4 admissible points raises
// InsufficientSignalError carrying the noise floor (3x the mean combined
// standard error).
FitResult fit_exponential(const std::vector<int>& depths,
                          const std::vector<double>& values,
                          const std::vector<double>& std_errors,
                          double baseline, double baseline_std_error);
FitResult fit_exponential(const ProbeSeries& series);

struct SizeRate {
  int qubits = 0;
  double lambda_star = 0.0;
  FitResult fit;
};

// Fitted convergence rate per system size. Dense moment-distance path when
// capacity allows (t=1: up to 5 qubits; t=2: up to 3), with the operator
// Monte Carlo built from `trials` samples and per-point noise taken at the
// operator-norm scale of the build error; t=2 on 4 or 5 qubits falls back to
// the sampled purity probe over the first half of the register.
std::vector<SizeRate> rate_vs_system_size(ens::LocalRule rule,
                                          const std::vector<int>& qubit_range,
                                          int t, const std::vector<int>& depths,
                                          long long trials, SeededRng& rng);

}  // namespace haarflow::probes
