// SPDX-License-Identifier: Apache-2.0
#include "haarflow/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "haarflow/haar.hpp"
#include "haarflow/parallel.hpp"

namespace haarflow::mom {
namespace {

constexpr double kInverseTol = 1e-10;
constexpr double kWeightTol = 1e-12;

void check_order(int t) {
  if (t != 1 && t != 2) {
    throw UnsupportedError("moment order t = " + std::to_string(t) +
                           " not supported; t must be 1 or 2");
  }
}

ComplexMatrix tensor_power(const ComplexMatrix& u, int t) {
  return t == 1 ? u : num::kron(u, u);
}

// Largest-modulus entry location, used to align a global phase.
std::pair<Eigen::Index, Eigen::Index> peak_entry(const ComplexMatrix& m) {
  Eigen::Index r = 0, c = 0;
  m.cwiseAbs().maxCoeff(&r, &c);
  return {r, c};
}

bool equal_up_to_phase(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto [r, c] = peak_entry(b);
  if (std::abs(b(r, c)) < 1e-14) return a.cwiseAbs().maxCoeff() < kInverseTol;
  const Complex phase = a(r, c) / b(r, c);
  if (std::abs(std::abs(phase) - 1.0) > kInverseTol) return false;
  return (a - phase * b).cwiseAbs().maxCoeff() <= kInverseTol;
}

void check_capacity(int dim, int t) {
  // The operator has dim^{2t} rows; its element count must stay in cap.
  const std::uint64_t side = [&] {
    std::uint64_t s = 1;
    for (int i = 0; i < 2 * t; ++i) s *= std::uint64_t(dim);
    return s;
  }();
  if (side > (std::uint64_t{1} << 16)) {
    throw CapacityError("moment operator side " + std::to_string(side) +
                        " exceeds the element cap");
  }
}

}  // namespace

std::string ensemble_label(const ens::GateEnsemble& e) {
  switch (e.kind()) {
    case ens::Kind::discrete:
      return "discrete(" + std::to_string(e.atoms().size()) + " atoms, dim " +
             std::to_string(e.dim()) + ")";
    case ens::Kind::haar_subgroup:
      return "haar_subgroup(dim " + std::to_string(e.dim()) + ")";
    case ens::Kind::gaussian_packet:
      return "gaussian_packet(sigma " + std::to_string(e.sigma()) + ")";
    case ens::Kind::two_local_circuit:
      return "two_local_circuit(" + std::to_string(e.qubits()) + " qubits, " +
             ens::rule_name(e.local_rule()) + ")";
  }
  return "?";
}

bool inverse_closed(const ens::GateEnsemble& e) {
  if (e.kind() != ens::Kind::discrete) {
    // Every built-in sampling rule draws from an inverse-invariant
    // distribution: Haar is inverse-invariant, the Gaussian packet is even
    // in its rotation vector, CNOT is an involution, and the diagonal rule's
    // phases are uniform.
    return true;
  }
  const auto& atoms = e.atoms();
  for (const auto& a : atoms) {
    const ComplexMatrix adj = a.gate.adjoint();
    bool found = false;
    for (const auto& b : atoms) {
      if (std::abs(a.weight - b.weight) <= kWeightTol &&
          equal_up_to_phase(adj, b.gate)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

MomentOperator build_moment_operator(const ens::GateEnsemble& e, int t) {
  check_order(t);
  if (e.kind() != ens::Kind::discrete) {
    throw UsageError(
        "build_moment_operator: exact build needs a discrete ensemble; pass a "
        "sample count for " +
        ens::kind_name(e.kind()));
  }
  check_capacity(e.dim(), t);
  MomentOperator m;
  m.t = t;
  m.dim = e.dim();
  m.hermitian = inverse_closed(e);
  const Eigen::Index side = [&] {
    Eigen::Index s = 1;
    for (int i = 0; i < 2 * t; ++i) s *= e.dim();
    return s;
  }();
  m.matrix = ComplexMatrix::Zero(side, side);
  for (const auto& atom : e.atoms()) {
    const ComplexMatrix ut = tensor_power(atom.gate, t);
    m.matrix += atom.weight * num::kron(ut, ut.conjugate());
  }
  return m;
}

MomentOperator build_moment_operator(const ens::GateEnsemble& e, int t,
                                     long long n_samples, SeededRng& rng) {
  check_order(t);
  check_capacity(e.dim(), t);
  if (n_samples < 2) throw UsageError("build_moment_operator: need at least 2 samples");

  const Eigen::Index side = [&] {
    Eigen::Index s = 1;
    for (int i = 0; i < 2 * t; ++i) s *= e.dim();
    return s;
  }();
  const Eigen::Index half = [&] {
    Eigen::Index s = 1;
    for (int i = 0; i < t; ++i) s *= e.dim();
    return s;
  }();

  // kron(Ut, conj(Ut)) is a rank-1 outer product of vec(Ut) after an index
  // realignment, so the mean is accumulated as outer products (S) plus the
  // squared-modulus outer products (Q) that give per-entry variances.
  // A fixed number of sample buckets, each on its own derived substream and
  // combined in bucket order, keeps the result identical for any worker count.
  const int buckets = static_cast<int>(std::min<long long>(16, n_samples));
  std::vector<ComplexMatrix> bucket_s(buckets);
  std::vector<Eigen::MatrixXd> bucket_q(buckets);
  par::parallel_for(buckets, [&](int bucket) {
    SeededRng local(rng.seed(),
                    SeededRng::derive_stream(rng.stream(), 0x6d6f6d, bucket));
    const long long begin = n_samples * bucket / buckets;
    const long long end = n_samples * (bucket + 1) / buckets;
    ComplexMatrix s = ComplexMatrix::Zero(side, side);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(side, side);
    Eigen::VectorXd wabs(side);
    for (long long k = begin; k < end; ++k) {
      const ComplexMatrix ut = tensor_power(ens::sample_gate(e, local), t);
      const ComplexVector w = haar::vec_row(ut);
      s.noalias() += w * w.adjoint();
      wabs = w.cwiseAbs2();
      q.noalias() += wabs * wabs.transpose();
    }
    bucket_s[bucket] = std::move(s);
    bucket_q[bucket] = std::move(q);
  });
  ComplexMatrix s = ComplexMatrix::Zero(side, side);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(side, side);
  for (int bucket = 0; bucket < buckets; ++bucket) {
    s += bucket_s[bucket];
    q += bucket_q[bucket];
  }
  s /= double(n_samples);
  q /= double(n_samples);

  // Realign S[(i,j),(k,l)] -> M[(i,k),(j,l)].
  MomentOperator m;
  m.t = t;
  m.dim = e.dim();
  m.hermitian = inverse_closed(e);
  m.n_samples = n_samples;
  m.matrix.resize(side, side);
  double max_var = 0.0;
  for (Eigen::Index i = 0; i < half; ++i) {
    for (Eigen::Index k = 0; k < half; ++k) {
      for (Eigen::Index j = 0; j < half; ++j) {
        for (Eigen::Index l = 0; l < half; ++l) {
          const Complex mean = s(i * half + j, k * half + l);
          m.matrix(i * half + k, j * half + l) = mean;
          const double var =
              std::max(0.0, q(i * half + j, k * half + l) - std::norm(mean));
          max_var = std::max(max_var, var);
        }
      }
    }
  }
  m.std_error = std::sqrt(max_var / double(n_samples));
  if (m.hermitian) {
    // Unbiased for inverse-invariant step distributions; halves the
    // anti-Hermitian sampling noise and keeps the flag truthful.
    m.matrix = 0.5 * (m.matrix + m.matrix.adjoint()).eval();
  }
  return m;
}

GapReport spectral_gap(const MomentOperator& m) {
  GapReport report;
  report.t = m.t;
  report.dim = m.dim;
  const auto basis = haar::haar_fixed_basis(m.t, m.dim);
  report.lambda_star = num::deflated_leading_value(m.matrix, basis);
  ComplexMatrix deviation = m.matrix - haar::haar_projector(m.t, m.dim);
  for (int k = 0; k < 5; ++k) deviation = (deviation * deviation).eval();
  report.rate_alpha = std::pow(num::operator_norm(deviation), 1.0 / 32.0);
  return report;
}

std::vector<double> distance_to_haar(const MomentOperator& m,
                                     const std::vector<int>& depths) {
  if (depths.empty()) throw UsageError("distance_to_haar: empty depth schedule");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 1) throw UsageError("distance_to_haar: depths must be positive");
    if (i > 0 && depths[i] <= depths[i - 1]) {
      throw UsageError("distance_to_haar: depths must be strictly ascending");
    }
  }
  const ComplexMatrix deviation = m.matrix - haar::haar_projector(m.t, m.dim);
  // Binary-power cache shared across the schedule.
  std::map<int, ComplexMatrix> powers;  // 2^k -> deviation^(2^k)
  powers[0] = deviation;
  int max_bit = 0;
  while ((1 << (max_bit + 1)) <= depths.back()) {
    powers[max_bit + 1] = (powers[max_bit] * powers[max_bit]).eval();
    ++max_bit;
  }
  std::vector<double> out;
  out.reserve(depths.size());
  for (int depth : depths) {
    ComplexMatrix acc;
    bool started = false;
    for (int bit = 0; bit <= max_bit; ++bit) {
      if (!(depth & (1 << bit))) continue;
      if (!started) {
        acc = powers[bit];
        started = true;
      } else {
        acc = (acc * powers[bit]).eval();
      }
    }
    out.push_back(num::operator_norm(acc));
  }
  return out;
}

ConvergenceReport predicted_vs_measured(const ens::GateEnsemble& e, int t,
                                        const std::vector<int>& depths,
                                        long long trials, SeededRng& rng) {
  check_order(t);
  check_capacity(e.dim(), t);
  if (trials < 2) throw UsageError("predicted_vs_measured: need at least 2 trials");
  if (depths.empty()) throw UsageError("predicted_vs_measured: empty depth schedule");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 1) {
      throw UsageError("predicted_vs_measured: depths must be positive");
    }
    if (i > 0 && depths[i] <= depths[i - 1]) {
      throw UsageError("predicted_vs_measured: depths must be strictly ascending");
    }
  }

  // Prediction side: one-step operator, exact when possible.
  MomentOperator one_step;
  if (e.kind() == ens::Kind::discrete) {
    one_step = build_moment_operator(e, t);
  } else {
    SeededRng build_rng(rng.seed(),
                        SeededRng::derive_stream(rng.stream(), 0x707265, 0));
    one_step = build_moment_operator(e, t, std::max<long long>(trials, 10000),
                                     build_rng);
  }
  const GapReport gap = spectral_gap(one_step);
  const ComplexMatrix projector = haar::haar_projector(t, e.dim());

  ConvergenceReport report;
  report.t = t;
  report.dim = e.dim();
  report.ensemble = ensemble_label(e);
  report.trials = trials;
  report.depths = depths;
  report.measured_norm.resize(depths.size());
  report.measured_max_entry.resize(depths.size());
  report.predicted.resize(depths.size());
  report.std_errors.resize(depths.size());

  par::parallel_for(static_cast<int>(depths.size()), [&](int di) {
    const int depth = depths[di];
    num::PairwiseAccumulator<ComplexMatrix> acc;
    for (long long trial = 0; trial < trials; ++trial) {
      SeededRng trial_rng(
          rng.seed(), SeededRng::derive_stream(rng.stream(), di, trial));
      const ComplexMatrix product = ens::sample_circuit(e, depth, trial_rng).product;
      const ComplexMatrix ut = tensor_power(product, t);
      acc.add(num::kron(ut, ut.conjugate()));
    }
    const Eigen::Index side = projector.rows();
    const ComplexMatrix mean =
        acc.total(ComplexMatrix::Zero(side, side)) / double(trials);
    const ComplexMatrix deviation = mean - projector;
    report.measured_norm[di] = num::operator_norm(deviation);
    report.measured_max_entry[di] = deviation.cwiseAbs().maxCoeff();
    report.predicted[di] = std::pow(gap.lambda_star, depth);
    report.std_errors[di] = 1.0 / std::sqrt(double(trials));
  });
  return report;
}

}  // namespace haarflow::mom
