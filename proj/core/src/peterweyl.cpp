// SPDX-License-Identifier: Apache-2.0
#include "haarflow/peterweyl.hpp"

#include <array>
#include <cmath>
#include <set>
#include <string>

#include <json.hpp>

#include "haarflow/haar.hpp"
#include "haarflow/parallel.hpp"

namespace haarflow::pw {
namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

// log(n!) for the factorial-sum formula; indices up to 4 j_max are enough
// for any supported label, with margin.
constexpr int kLogFactTableSize = 4 * kDefaultTwiceJMax + 8;

const std::array<double, kLogFactTableSize>& log_factorials() {
  static const auto table = [] {
    std::array<double, kLogFactTableSize> t{};
    t[0] = 0.0;
    for (int n = 1; n < kLogFactTableSize; ++n) t[n] = t[n - 1] + std::log(double(n));
    return t;
  }();
  return table;
}

double ipow(double base, int exp) {
  double acc = 1.0;
  for (int i = 0; i < exp; ++i) acc *= base;
  return acc;
}

void check_label(int twice_j) {
  if (twice_j < 0 || twice_j > kDefaultTwiceJMax) {
    throw UnsupportedError("label 2j = " + std::to_string(twice_j) +
                           " outside the supported range [0, " +
                           std::to_string(kDefaultTwiceJMax) + "]");
  }
}

using Int128 = unsigned __int128;

Int128 checked_mul(Int128 a, Int128 b) {
  if (b != 0 && a > ~Int128(0) / b) {
    throw CapacityError("irrep_dim: intermediate product exceeds 128 bits");
  }
  return a * b;
}

Int128 binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = checked_mul(acc, Int128(n - k + i));
    acc /= Int128(i);  // exact: prefix products of binomial rows divide evenly
  }
  return acc;
}

void check_duplicate_labels(const std::vector<FourierBlock>& blocks) {
  std::set<int> seen;
  for (const auto& b : blocks) {
    if (!seen.insert(b.twice_j).second) {
      throw UsageError("duplicate Fourier label 2j = " + std::to_string(b.twice_j));
    }
  }
}

}  // namespace

std::int64_t irrep_dim(int D, int k, int l) {
  if (D < 2) throw UsageError("irrep_dim: rank must be at least 2");
  if (k < 0 || l < 0) throw UsageError("irrep_dim: negative label");
  const Int128 num = checked_mul(
      checked_mul(Int128(k + l + D - 1), binomial_exact(k + D - 2, k)),
      binomial_exact(l + D - 2, l));
  if (num % Int128(D - 1) != 0) {
    throw std::logic_error("irrep_dim: dimension formula not integral");
  }
  const Int128 dim = num / Int128(D - 1);
  if (dim > Int128(INT64_MAX)) {
    throw CapacityError("irrep_dim: dimension exceeds 2^63");
  }
  return static_cast<std::int64_t>(dim);
}

EulerZYZ euler_zyz(const ComplexMatrix& g) {
  if (g.rows() != 2 || g.cols() != 2) throw ShapeError("euler_zyz: expected 2x2");
  const Complex a = g(0, 0);
  const Complex c = g(1, 0);
  EulerZYZ e;
  e.beta = 2.0 * std::atan2(std::abs(c), std::abs(a));
  if (std::abs(a) <= 1e-15) {
    // beta = pi: only alpha - gamma is defined; gamma absorbed into alpha.
    e.alpha = 2.0 * std::arg(c);
    e.gamma = 0.0;
  } else if (std::abs(c) <= 1e-15) {
    // beta = 0: only alpha + gamma is defined; gamma absorbed into alpha.
    e.alpha = -2.0 * std::arg(a);
    e.gamma = 0.0;
  } else {
    const double sum = -2.0 * std::arg(a);
    const double diff = 2.0 * std::arg(c);
    e.alpha = (sum + diff) / 2.0;
    e.gamma = (sum - diff) / 2.0;
  }
  return e;
}

ComplexMatrix su2_from_euler(double alpha, double beta, double gamma) {
  const double ch = std::cos(beta / 2.0);
  const double sh = std::sin(beta / 2.0);
  ComplexMatrix g(2, 2);
  g(0, 0) = std::polar(ch, -(alpha + gamma) / 2.0);
  g(0, 1) = std::polar(-sh, -(alpha - gamma) / 2.0);
  g(1, 0) = std::polar(sh, (alpha - gamma) / 2.0);
  g(1, 1) = std::polar(ch, (alpha + gamma) / 2.0);
  return g;
}

Eigen::MatrixXd little_d(int twice_j, double beta) {
  check_label(twice_j);
  const auto& lf = log_factorials();
  const int tj = twice_j;
  const int n = spin_dim(tj);
  const double ch = std::cos(beta / 2.0);
  const double sh = std::sin(beta / 2.0);
  Eigen::MatrixXd d(n, n);
  for (int row = 0; row < n; ++row) {
    const int tm1 = tj - 2 * row;  // row index m' = +j .. -j
    for (int col = 0; col < n; ++col) {
      const int tm2 = tj - 2 * col;  // column index m
      const int a = (tj + tm2) / 2;  // j + m
      const int b = (tj - tm2) / 2;  // j - m
      const int c = (tj + tm1) / 2;  // j + m'
      const int dd = (tj - tm1) / 2;  // j - m'
      const int mm = (tm2 - tm1) / 2;  // m - m'
      const double log_prefactor = 0.5 * (lf[a] + lf[b] + lf[c] + lf[dd]);
      double acc = 0.0;
      for (int k = std::max(0, mm); k <= std::min(a, dd); ++k) {
        const double log_term =
            log_prefactor - lf[a - k] - lf[k] - lf[dd - k] - lf[k - mm];
        const double sign = ((k - mm) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * std::exp(log_term) * ipow(ch, tj - 2 * k + mm) *
               ipow(sh, 2 * k - mm);
      }
      d(row, col) = acc;
    }
  }
  return d;
}

ComplexMatrix wigner_d(int twice_j, const ComplexMatrix& g) {
  check_label(twice_j);
  const ComplexMatrix v = ens::su2_projection(g);
  const EulerZYZ e = euler_zyz(v);
  const Eigen::MatrixXd d = little_d(twice_j, e.beta);
  const int n = spin_dim(twice_j);
  ComplexMatrix out(n, n);
  for (int row = 0; row < n; ++row) {
    const double m1 = (twice_j - 2 * row) / 2.0;
    for (int col = 0; col < n; ++col) {
      const double m2 = (twice_j - 2 * col) / 2.0;
      out(row, col) = std::polar(1.0, -m1 * e.alpha - m2 * e.gamma) * d(row, col);
    }
  }
  return out;
}

FourierBlock fourier_block_finite(const ens::GateEnsemble& e, int twice_j) {
  check_label(twice_j);
  if (e.kind() != ens::Kind::discrete) {
    throw UsageError("fourier_block_finite: discrete ensembles only");
  }
  if (e.dim() != 2) throw UsageError("fourier_block_finite: dimension-2 ensembles only");
  const int n = spin_dim(twice_j);
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (const auto& atom : e.atoms()) {
    acc += atom.weight * wigner_d(twice_j, atom.gate).conjugate();
  }
  FourierBlock block;
  block.twice_j = twice_j;
  block.matrix = double(n) * acc;
  block.method = "finite_sum";
  return block;
}

FourierBlock fourier_block_monte_carlo(const ens::GateEnsemble& e, int twice_j,
                                       long long n_samples, int depth,
                                       SeededRng& rng) {
  check_label(twice_j);
  if (e.dim() != 2) {
    throw UsageError("fourier_block_monte_carlo: dimension-2 ensembles only");
  }
  if (n_samples < 1) throw UsageError("fourier_block_monte_carlo: need samples");
  if (depth < 1) throw UsageError("fourier_block_monte_carlo: depth must be >= 1");
  const int n = spin_dim(twice_j);
  num::PairwiseAccumulator<ComplexMatrix> mean_acc;
  num::PairwiseAccumulator<Eigen::MatrixXd> sq_acc;
  for (long long s = 0; s < n_samples; ++s) {
    const ComplexMatrix g = ens::sample_circuit(e, depth, rng).product;
    const ComplexMatrix val = wigner_d(twice_j, g).conjugate();
    mean_acc.add(val);
    sq_acc.add(val.cwiseAbs2());
  }
  const ComplexMatrix mean =
      mean_acc.total(ComplexMatrix::Zero(n, n)) / double(n_samples);
  const Eigen::MatrixXd meansq =
      sq_acc.total(Eigen::MatrixXd::Zero(n, n)) / double(n_samples);
  const Eigen::MatrixXd variance =
      (meansq - mean.cwiseAbs2()).cwiseMax(Eigen::MatrixXd::Zero(n, n));

  FourierBlock block;
  block.twice_j = twice_j;
  block.matrix = double(n) * mean;
  block.method = "monte_carlo";
  block.n_samples = n_samples;
  block.std_error =
      double(n) * std::sqrt(variance.maxCoeff() / double(n_samples));
  return block;
}

FourierBlock fourier_block_quadrature(const ens::GateEnsemble& e, int twice_j,
                                      const QuadratureGrid& grid) {
  check_label(twice_j);
  const int n = spin_dim(twice_j);
  // One independent partial per beta slice, combined in slice order, so the
  // result is identical for any worker count.
  std::vector<ComplexMatrix> partials(grid.resolution);
  par::parallel_for(grid.resolution, [&](int ib) {
    const double beta = grid.betas[ib];
    const Eigen::MatrixXd d = little_d(twice_j, beta);
    ComplexMatrix beta_acc = ComplexMatrix::Zero(n, n);
    for (double alpha : grid.alphas) {
      for (double gamma : grid.gammas) {
        const double f = e.density(su2_from_euler(alpha, beta, gamma));
        if (f == 0.0) continue;
        for (int row = 0; row < n; ++row) {
          const double m1 = (twice_j - 2 * row) / 2.0;
          for (int col = 0; col < n; ++col) {
            const double m2 = (twice_j - 2 * col) / 2.0;
            // conj of D^j at the node
            beta_acc(row, col) +=
                f * std::polar(d(row, col), m1 * alpha + m2 * gamma);
          }
        }
      }
    }
    partials[ib] = grid.node_weight(ib) * beta_acc;
  });
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (const auto& part : partials) acc += part;
  FourierBlock block;
  block.twice_j = twice_j;
  block.matrix = double(n) * acc;
  block.method = "quadrature";
  return block;
}

double norm_ratio(const FourierBlock& block) {
  // Blocks are small (dim <= 13 at the supported label cutoff) and an
  // estimated block can sit arbitrarily close to a multiple of the identity,
  // where gap-driven iteration cannot separate singular values. The dense
  // decomposition is exact and cheap at this size.
  return num::svd_norm(block.matrix) / double(block.dim());
}

FourierBlock conv_power_blocks(const FourierBlock& block, int m) {
  if (m < 0) throw UsageError("conv_power_blocks: negative power");
  const double d = double(block.dim());
  FourierBlock out;
  out.twice_j = block.twice_j;
  out.matrix = d * num::matrix_power(block.matrix / d, m);
  out.method = block.method;
  return out;
}

Complex reconstruct_density(const ComplexMatrix& g,
                            const std::vector<FourierBlock>& blocks) {
  check_duplicate_labels(blocks);
  bool has_trivial = false;
  for (const auto& b : blocks) has_trivial |= (b.twice_j == 0);
  if (!has_trivial) {
    throw UsageError("reconstruct_density: blocks must include the trivial label");
  }
  Complex acc(0.0, 0.0);
  for (const auto& b : blocks) {
    acc += (b.matrix * wigner_d(b.twice_j, g).transpose()).trace();
  }
  return acc;
}

double parseval(const std::vector<FourierBlock>& blocks) {
  check_duplicate_labels(blocks);
  double acc = 0.0;
  for (const auto& b : blocks) {
    acc += (b.matrix.adjoint() * b.matrix).trace().real() / double(b.dim());
  }
  return acc;
}

std::string block_to_json_string(const FourierBlock& block) {
  json doc;
  doc["twice_j"] = block.twice_j;
  json rows = json::array();
  for (Eigen::Index r = 0; r < block.matrix.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < block.matrix.cols(); ++c) {
      row.push_back({block.matrix(r, c).real(), block.matrix(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  doc["method"] = block.method;
  doc["n_samples"] = block.n_samples ? json(*block.n_samples) : json(nullptr);
  doc["std_error"] = block.std_error ? json(*block.std_error) : json(nullptr);
  return doc.dump(2);
}

FourierBlock block_from_json_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ValidationError(std::string("block: invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw ValidationError("block: expected a JSON object");
  for (const char* key : {"twice_j", "matrix", "method"}) {
    if (!doc.contains(key)) {
      throw ValidationError(std::string("block.") + key + ": required field");
    }
  }
  FourierBlock block;
  if (!doc["twice_j"].is_number_integer()) {
    throw ValidationError("block.twice_j: expected an integer");
  }
  block.twice_j = doc["twice_j"].get<int>();
  check_label(block.twice_j);
  const int n = spin_dim(block.twice_j);
  const json& rows = doc["matrix"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw ValidationError("block.matrix: expected " + std::to_string(n) + " rows");
  }
  block.matrix.resize(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ValidationError("block.matrix[" + std::to_string(r) + "]: expected " +
                            std::to_string(n) + " entries");
    }
    for (int c = 0; c < n; ++c) {
      const json& cell = row[c];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
          !cell[1].is_number()) {
        throw ValidationError("block.matrix[" + std::to_string(r) + "][" +
                              std::to_string(c) + "]: expected [re, im]");
      }
      block.matrix(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  block.method = doc["method"].get<std::string>();
  if (doc.contains("n_samples") && !doc["n_samples"].is_null()) {
    block.n_samples = doc["n_samples"].get<long long>();
  }
  if (doc.contains("std_error") && !doc["std_error"].is_null()) {
    block.std_error = doc["std_error"].get<double>();
  }
  return block;
}

}  // namespace haarflow::pw
