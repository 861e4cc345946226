// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "haarflow/numkernel.hpp"
#include "haarflow/rng.hpp"

namespace haarflow::ens {

enum class Kind { discrete, haar_subgroup, gaussian_packet, two_local_circuit };

// diagonal draws random diagonal phases on the chosen pair; it generates an
// abelian group and exists as a non-universal control. It is deliberately
// not part of the file format.
enum class LocalRule { haar_su4, cnot_plus_su2, diagonal };

std::string kind_name(Kind k);
std::string rule_name(LocalRule r);

struct Atom {
  double weight = 0.0;
  ComplexMatrix gate;
};

// A probability measure over gates on U(dim). Discrete measures carry
// explicit atoms; the other kinds are sampling rules.
class GateEnsemble {
 public:
  static GateEnsemble discrete(int dim, std::vector<Atom> atoms);
  static GateEnsemble haar(int dim);
  static GateEnsemble gaussian_packet(double sigma);
  static GateEnsemble two_local(int qubits, LocalRule rule);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double sigma() const { return sigma_; }
  int qubits() const { return qubits_; }
  LocalRule local_rule() const { return rule_; }

  // Density with respect to the Haar measure, defined for haar_subgroup
  // (constant 1) and gaussian_packet (isotropic wrapped Gaussian in the
  // rotation-vector chart). Throws UsageError for sampled-only kinds.
  double density(const ComplexMatrix& g) const;

 private:
  GateEnsemble() = default;
  Kind kind_ = Kind::discrete;
  int dim_ = 0;
  std::vector<Atom> atoms_;
  double sigma_ = 0.0;
  int qubits_ = 0;
  LocalRule rule_ = LocalRule::haar_su4;
};

// Strict JSON schema: {"dim", "kind", then exactly the fields the kind uses:
// "atoms" (discrete), "sigma" (gaussian_packet), "qubits" + "local_rule"
// (two_local_circuit)}. Matrices are row-major [[ [re, im], ... ], ...].
// Unknown or out-of-kind fields are rejected; weights are renormalized only
// when their sum deviates from 1 by less than 1e-9; gates non-unitary beyond
// 1e-9 are rejected. Error messages carry the JSON path.
GateEnsemble load_ensemble(const std::string& json_text);
std::string to_json_string(const GateEnsemble& e);

// One circuit step: either a discrete atom index or a recorded gate.
struct StepRecord {
  int atom = -1;
  ComplexMatrix gate;  // set when atom < 0
};

struct CircuitSample {
  int depth = 0;
  std::vector<StepRecord> steps;  // oldest first
  ComplexMatrix product;          // steps[m-1] * ... * steps[0]
};

ComplexMatrix sample_gate(const GateEnsemble& e, SeededRng& rng);

// Depth-m product with the newest gate multiplying on the left; m = 0 gives
// the identity.
CircuitSample sample_circuit(const GateEnsemble& e, int m, SeededRng& rng);

// {(p_i, U_i)} -> {(p_i/2, U_i), (p_i/2, U_i^H)}; Hermitian atoms (to 1e-12)
// stay unsplit and duplicate gates are merged, so the map is idempotent.
GateEnsemble symmetrize(const GateEnsemble& e);

// Determinant-one projection of every atom of a dim-2 discrete ensemble,
// weights unchanged. Products of projected atoms stay in the projected set's
// group, which keeps every Fourier label (half-integers included) an exact
// homomorphism across circuit depths.
GateEnsemble project_su2(const GateEnsemble& e);

// u / sqrt(det u), principal branch: the root with argument in (-pi/2, pi/2].
ComplexMatrix su2_projection(const ComplexMatrix& u);

// Mean squared rotation angle of depth-m products, the spread about the
// identity. theta in [0, pi] from cos(theta/2) = |trace| / 2 after
// determinant-one projection. Dimension-2 ensembles only.
double angle_spread(const GateEnsemble& e, int m, int trials, SeededRng& rng);

// Apply a 4x4 gate to qubits (a, b) of an n-qubit register, identity
// elsewhere. Qubit 0 is the slowest (leftmost) tensor factor; slot 0 of the
// 4x4 gate lands on qubit a.
ComplexMatrix embed_pair_gate(const ComplexMatrix& g4, int a, int b, int qubits);

// One unembedded circuit step of a two-local ensemble: the chosen qubit pair
// and the 4x4 gate acting on it (slot 0 on qubit a).
struct LocalStep {
  int a = 0;
  int b = 1;
  ComplexMatrix gate;
};

// Draws pair then gate, consuming the rng exactly as sample_gate does for
// two_local kinds, so both paths produce identical circuits from one stream.
LocalStep sample_two_local_step(const GateEnsemble& e, SeededRng& rng);

// In-place action of embed_pair_gate(step.gate, step.a, step.b, qubits) on a
// state vector, without forming the embedded matrix.
void apply_two_local_step(const LocalStep& step, int qubits, ComplexVector& state);

}  // namespace haarflow::ens
