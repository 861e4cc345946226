// SPDX-License-Identifier: Apache-2.0
// Gate ensembles: the JSON schema, sampling statistics, symmetrization,
// determinant-one projection, and the wrapped-Gaussian density.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "haarflow/ensemble.hpp"
#include "haarflow/gates.hpp"
#include "haarflow/haar.hpp"
#include "haarflow/numkernel.hpp"
#include "haarflow/rng.hpp"

using haarflow::Complex;
using haarflow::ComplexMatrix;
using haarflow::ComplexVector;
using haarflow::SeededRng;
namespace ens = haarflow::ens;
namespace gates = haarflow::gates;
namespace num = haarflow::num;

namespace {

ens::GateEnsemble coin_hx() {
  return ens::GateEnsemble::discrete(
      2, {{0.5, gates::hadamard()}, {0.5, gates::pauli_x()}});
}

const char* kGoodJson = R"({
  "kind": "discrete",
  "dim": 2,
  "atoms": [
    {"weight": 0.5, "matrix": [[[0.0,0.0],[1.0,0.0]],[[1.0,0.0],[0.0,0.0]]]},
    {"weight": 0.5, "matrix": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,1.0]]]}
  ]
})";

}  // namespace

TEST_CASE("JSON loader round-trips a discrete ensemble") {
  const ens::GateEnsemble e = ens::load_ensemble(kGoodJson);
  CHECK(e.kind() == ens::Kind::discrete);
  CHECK(e.dim() == 2);
  REQUIRE(e.atoms().size() == 2);
  CHECK(e.atoms()[0].weight == doctest::Approx(0.5));
  CHECK(e.atoms()[0].gate(0, 1) == Complex(1, 0));
  CHECK(e.atoms()[1].gate(1, 1) == Complex(0, 1));
  const ens::GateEnsemble back = ens::load_ensemble(ens::to_json_string(e));
  CHECK(back.atoms().size() == 2);
  CHECK((back.atoms()[0].gate - e.atoms()[0].gate).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("JSON loader round-trips sampling-rule kinds") {
  const auto packet = ens::load_ensemble(
      R"({"kind": "gaussian_packet", "dim": 2, "sigma": 0.25})");
  CHECK(packet.kind() == ens::Kind::gaussian_packet);
  CHECK(packet.sigma() == doctest::Approx(0.25));

  const auto circuit = ens::load_ensemble(
      R"({"kind": "two_local_circuit", "dim": 8, "qubits": 3,
          "local_rule": "cnot_plus_su2"})");
  CHECK(circuit.kind() == ens::Kind::two_local_circuit);
  CHECK(circuit.qubits() == 3);
  CHECK(circuit.local_rule() == ens::LocalRule::cnot_plus_su2);
  for (const auto& e : {packet, circuit}) {
    CHECK(ens::load_ensemble(ens::to_json_string(e)).dim() == e.dim());
  }

  // The Haar kind is internal-only: constructible but not a file format.
  const ens::GateEnsemble sub = ens::GateEnsemble::haar(5);
  CHECK(sub.kind() == ens::Kind::haar_subgroup);
  CHECK(sub.dim() == 5);
  CHECK_THROWS_AS(ens::to_json_string(sub), haarflow::UsageError);
  CHECK_THROWS_AS(ens::load_ensemble(R"({"kind": "haar_subgroup", "dim": 5})"),
                  haarflow::ValidationError);
}

TEST_CASE("JSON loader rejects malformed documents") {
  // Weights that do not sum to one beyond tolerance.
  CHECK_THROWS_AS(ens::load_ensemble(R"({
    "kind": "discrete", "dim": 2, "atoms": [
      {"weight": 0.6, "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]},
      {"weight": 0.6, "matrix": [[[0,0],[1,0]],[[1,0],[0,0]]]}
    ]})"),
                  haarflow::ValidationError);
  // Non-unitary gate (entry off by 1e-3).
  CHECK_THROWS_AS(ens::load_ensemble(R"({
    "kind": "discrete", "dim": 2, "atoms": [
      {"weight": 1.0, "matrix": [[[1.001,0],[0,0]],[[0,0],[1,0]]]}
    ]})"),
                  haarflow::ValidationError);
  // Unknown field.
  CHECK_THROWS_AS(ens::load_ensemble(R"({
    "kind": "haar_subgroup", "dim": 2, "extra": 1})"),
                  haarflow::ValidationError);
  // Field belonging to another kind.
  CHECK_THROWS_AS(ens::load_ensemble(R"({
    "kind": "haar_subgroup", "dim": 2, "sigma": 0.1})"),
                  haarflow::ValidationError);
  // The diagonal rule is internal-only.
  CHECK_THROWS_AS(ens::load_ensemble(R"({
    "kind": "two_local_circuit", "dim": 4, "qubits": 2,
    "local_rule": "diagonal"})"),
                  haarflow::ValidationError);
  // Dim inconsistent with qubits.
  CHECK_THROWS_AS(ens::load_ensemble(R"({
    "kind": "two_local_circuit", "dim": 4, "qubits": 3,
    "local_rule": "haar_su4"})"),
                  haarflow::ValidationError);
  // Not JSON at all.
  CHECK_THROWS_AS(ens::load_ensemble("not json"), haarflow::ValidationError);
}

TEST_CASE("error messages carry the offending path") {
  try {
    ens::load_ensemble(R"({
      "kind": "discrete", "dim": 2, "atoms": [
        {"weight": 1.0, "matrix": [[[1.001,0],[0,0]],[[0,0],[1,0]]]}
      ]})");
    FAIL("expected a validation error");
  } catch (const haarflow::ValidationError& err) {
    CHECK(std::string(err.what()).find("atoms[0]") != std::string::npos);
  }
}

TEST_CASE("sampling frequencies match atom weights") {
  const ens::GateEnsemble e = ens::GateEnsemble::discrete(
      2, {{0.2, gates::pauli_x()}, {0.3, gates::pauli_y()},
          {0.5, gates::pauli_z()}});
  SeededRng rng(21, 0);
  const int n = 100000;
  std::map<int, int> counts;
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix g = ens::sample_gate(e, rng);
    // Identify the atom by its (0, 0) entry: 0, 0, 1 respectively.
    if (std::abs(g(0, 0)) > 0.5) {
      ++counts[2];
    } else if (std::abs(g(0, 1) - Complex(1, 0)) < 1e-12) {
      ++counts[0];
    } else {
      ++counts[1];
    }
  }
  CHECK(counts[0] / double(n) == doctest::Approx(0.2).epsilon(0.025));
  CHECK(counts[1] / double(n) == doctest::Approx(0.3).epsilon(0.0167));
  CHECK(counts[2] / double(n) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("circuit sampling composes newest gate on the left") {
  // Single deterministic atom T: depth 3 must give exactly T^3.
  const ens::GateEnsemble e =
      ens::GateEnsemble::discrete(2, {{1.0, gates::t_gate()}});
  SeededRng rng(22, 0);
  const auto sample = ens::sample_circuit(e, 3, rng);
  CHECK(sample.depth == 3);
  REQUIRE(sample.steps.size() == 3);
  const ComplexMatrix t3 = gates::t_gate() * gates::t_gate() * gates::t_gate();
  CHECK((sample.product - t3).cwiseAbs().maxCoeff() < 1e-14);

  const auto empty = ens::sample_circuit(e, 0, rng);
  CHECK((empty.product - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("recorded steps multiply to the recorded product") {
  const ens::GateEnsemble e = coin_hx();
  SeededRng rng(23, 0);
  const auto sample = ens::sample_circuit(e, 5, rng);
  ComplexMatrix prod = ComplexMatrix::Identity(2, 2);
  for (const auto& step : sample.steps) {
    REQUIRE(step.atom >= 0);
    prod = e.atoms()[step.atom].gate * prod;  // newest on the left
  }
  CHECK((prod - sample.product).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("symmetrize splits non-Hermitian atoms and merges duplicates") {
  const ens::GateEnsemble e = ens::GateEnsemble::discrete(
      2, {{0.5, gates::hadamard()}, {0.5, gates::t_gate()}});
  const ens::GateEnsemble s = ens::symmetrize(e);
  // H is Hermitian and stays unsplit; T splits into T and T^H.
  REQUIRE(s.atoms().size() == 3);
  double wh = 0.0, wt = 0.0, wtd = 0.0;
  for (const auto& atom : s.atoms()) {
    if ((atom.gate - gates::hadamard()).cwiseAbs().maxCoeff() < 1e-12)
      wh = atom.weight;
    else if ((atom.gate - gates::t_gate()).cwiseAbs().maxCoeff() < 1e-12)
      wt = atom.weight;
    else if ((atom.gate - gates::t_gate().adjoint()).cwiseAbs().maxCoeff() <
             1e-12)
      wtd = atom.weight;
  }
  CHECK(wh == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wt == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(wtd == doctest::Approx(0.25).epsilon(1e-12));

  // Idempotent.
  const ens::GateEnsemble ss = ens::symmetrize(s);
  CHECK(ss.atoms().size() == 3);
}

TEST_CASE("su2 projection fixes the determinant on the principal branch") {
  for (const ComplexMatrix& u :
       {gates::hadamard(), gates::t_gate(), gates::pauli_y()}) {
    const ComplexMatrix v = ens::su2_projection(u);
    const Complex det = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
    CHECK(std::abs(det - Complex(1, 0)) < 1e-12);
    // v equals u up to a global phase.
    Complex phase(0, 0);
    double best = 0.0;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        if (std::abs(u(r, c)) > best) {
          best = std::abs(u(r, c));
          phase = v(r, c) / u(r, c);
        }
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
    CHECK((v - phase * u).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("projected ensembles keep weights and reach determinant one") {
  const ens::GateEnsemble p = ens::project_su2(ens::GateEnsemble::discrete(
      2, {{0.5, gates::hadamard()}, {0.5, gates::t_gate()}}));
  for (const auto& atom : p.atoms()) {
    const Complex det = atom.gate(0, 0) * atom.gate(1, 1) -
                        atom.gate(0, 1) * atom.gate(1, 0);
    CHECK(std::abs(det - Complex(1, 0)) < 1e-12);
    CHECK(atom.weight == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("gaussian packet sampling concentrates at small sigma") {
  const ens::GateEnsemble e = ens::GateEnsemble::gaussian_packet(0.02);
  SeededRng rng(24, 0);
  for (int i = 0; i < 200; ++i) {
    const ComplexMatrix g = ens::sample_gate(e, rng);
    CHECK((g - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.2);
  }
}

TEST_CASE("angle spread matches the small-sigma random-walk oracle") {
  // One packet step has mean squared rotation angle 3 sigma^2 (three iid
  // normal axis components); independent steps add in the small-angle
  // regime, so depth 2m doubles depth m.
  const double sigma = 0.05;
  const ens::GateEnsemble e = ens::GateEnsemble::gaussian_packet(sigma);
  SeededRng rng(25, 0);
  const double one = ens::angle_spread(e, 1, 40000, rng);
  CHECK(one == doctest::Approx(3.0 * sigma * sigma).epsilon(0.10));
  SeededRng rng2(26, 0);
  const double two = ens::angle_spread(e, 2, 40000, rng2);
  CHECK(two / one == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("density integrates to one over the quadrature-free Monte Carlo") {
  // E_Haar[density] = 1 for a normalized density; 40k Haar draws resolve the
  // sigma = 0.6 packet comfortably.
  const ens::GateEnsemble e = ens::GateEnsemble::gaussian_packet(0.6);
  SeededRng rng(27, 0);
  const int n = 40000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += e.density(haarflow::haar::sample_haar(2, rng));
  }
  CHECK(acc / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("density is largest at the identity for a packet") {
  const ens::GateEnsemble e = ens::GateEnsemble::gaussian_packet(0.3);
  const ComplexMatrix eye = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix off = gates::exp_su2({1.2, 0.0, 0.0});
  CHECK(e.density(eye) > e.density(off));
  CHECK_THROWS_AS(coin_hx().density(eye), haarflow::UsageError);
}

TEST_CASE("haar subgroup density is the constant one") {
  const ens::GateEnsemble e = ens::GateEnsemble::haar(3);
  SeededRng rng(28, 0);
  CHECK(e.density(haarflow::haar::sample_haar(3, rng)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pair gate embedding matches the dense kron oracle") {
  SeededRng rng(29, 0);
  const ComplexMatrix g4 = haarflow::haar::sample_haar(4, rng);
  // Adjacent pair (0, 1) of 3 qubits: kron(g4, I_2).
  const ComplexMatrix adj = ens::embed_pair_gate(g4, 0, 1, 3);
  CHECK((adj - num::kron(g4, ComplexMatrix::Identity(2, 2)))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
  // Pair (1, 2): kron(I_2, g4).
  const ComplexMatrix tail = ens::embed_pair_gate(g4, 1, 2, 3);
  CHECK((tail - num::kron(ComplexMatrix::Identity(2, 2), g4))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
  CHECK_THROWS_AS(ens::embed_pair_gate(g4, 0, 0, 3), haarflow::UsageError);
  CHECK_THROWS_AS(ens::embed_pair_gate(g4, 0, 3, 3), haarflow::UsageError);
}

TEST_CASE("cnot embedding on a swapped pair follows slot order") {
  // CNOT with control slot 0 placed on pair (2, 0): control is qubit 2,
  // target is qubit 0. Basis |q0 q1 q2>: states with q2 = 1 flip q0.
  const ComplexMatrix c = ens::embed_pair_gate(gates::cnot(), 2, 0, 3);
  ComplexMatrix want = ComplexMatrix::Zero(8, 8);
  for (int b = 0; b < 8; ++b) {
    const int q0 = (b >> 2) & 1, q2 = b & 1;
    const int flipped = q2 ? (b ^ 4) : b;
    want(flipped, b) = Complex(1, 0);
    (void)q0;
  }
  CHECK((c - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-local step application agrees with dense embedding") {
  const ens::GateEnsemble e =
      ens::GateEnsemble::two_local(3, ens::LocalRule::cnot_plus_su2);
  SeededRng rng_step(30, 5);
  const ens::LocalStep step = ens::sample_two_local_step(e, rng_step);
  const ComplexMatrix dense =
      ens::embed_pair_gate(step.gate, step.a, step.b, 3);
  ComplexVector psi(8);
  SeededRng rng_state(31, 0);
  for (int i = 0; i < 8; ++i) psi(i) = Complex(rng_state.gauss(), rng_state.gauss());
  psi.normalize();
  ComplexVector via_step = psi;
  ens::apply_two_local_step(step, 3, via_step);
  CHECK((via_step - dense * psi).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("step sampling and gate sampling share one stream") {
  const ens::GateEnsemble e =
      ens::GateEnsemble::two_local(3, ens::LocalRule::haar_su4);
  SeededRng a(32, 9), b(32, 9);
  const ens::LocalStep step = ens::sample_two_local_step(e, a);
  const ComplexMatrix dense = ens::sample_gate(e, b);
  CHECK((ens::embed_pair_gate(step.gate, step.a, step.b, 3) - dense)
            .cwiseAbs()
            .maxCoeff() < 1e-13);
}

TEST_CASE("two-local pairs are drawn uniformly over ordered pairs") {
  const ens::GateEnsemble e =
      ens::GateEnsemble::two_local(3, ens::LocalRule::haar_su4);
  SeededRng rng(33, 0);
  std::map<std::pair<int, int>, int> counts;
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    const ens::LocalStep step = ens::sample_two_local_step(e, rng);
    ++counts[{step.a, step.b}];
  }
  CHECK(counts.size() == 6);  // 3 * 2 ordered pairs
  for (const auto& [pair, count] : counts) {
    CHECK(count / double(n) == doctest::Approx(1.0 / 6.0).epsilon(0.08));
  }
}

TEST_CASE("factory validation") {
  CHECK_THROWS_AS(ens::GateEnsemble::discrete(2, {}), haarflow::ValidationError);
  CHECK_THROWS_AS(ens::GateEnsemble::discrete(
                      2, {{0.5, gates::hadamard()}, {0.4, gates::t_gate()}}),
                  haarflow::ValidationError);
  CHECK_THROWS_AS(ens::GateEnsemble::gaussian_packet(-0.1),
                  haarflow::ValidationError);
  CHECK_THROWS_AS(ens::GateEnsemble::two_local(1, ens::LocalRule::haar_su4),
                  haarflow::ValidationError);
}
