// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "haarflow/peterweyl.hpp"

namespace haarflow::pw {
namespace {
constexpr double kPi = 3.14159265358979323846;
}

QuadratureGrid QuadratureGrid::build(int resolution) {
  if (resolution < 1) throw UsageError("QuadratureGrid: resolution must be positive");
  QuadratureGrid grid;
  grid.resolution = resolution;
  grid.alphas.resize(resolution);
  grid.gammas.resize(resolution);
  for (int i = 0; i < resolution; ++i) {
    grid.alphas[i] = 2.0 * kPi * i / resolution;
    grid.gammas[i] = 4.0 * kPi * i / resolution;
  }

  // Gauss-Legendre nodes in x = cos(beta) by Newton iteration on P_n.
  const int n = resolution;
  grid.betas.resize(n);
  grid.beta_weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Descending x gives ascending beta; mirror node is -x.
    grid.betas[i] = std::acos(x);
    grid.beta_weights[i] = w / 2.0;
    grid.betas[n - 1 - i] = std::acos(-x);
    grid.beta_weights[n - 1 - i] = w / 2.0;
  }
  return grid;
}

double QuadratureGrid::weight_sum() const {
  double s = 0.0;
  for (int ib = 0; ib < resolution; ++ib) {
    s += node_weight(ib) * double(resolution) * double(resolution);
  }
  return s;
}

}  // namespace haarflow::pw
