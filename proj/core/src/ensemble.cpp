// SPDX-License-Identifier: Apache-2.0
#include "haarflow/ensemble.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>

#include <json.hpp>

#include "haarflow/gates.hpp"
#include "haarflow/haar.hpp"

namespace haarflow::ens {
namespace {

using nlohmann::json;

constexpr double kWeightSumTol = 1e-9;
constexpr double kUnitarityTol = 1e-9;
constexpr double kHermitianTol = 1e-12;
constexpr double kMergeTol = 1e-12;
constexpr double kPi = 3.14159265358979323846;

double max_abs_dev_from_unitary(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

void check_atoms(int dim, std::vector<Atom>& atoms) {
  if (atoms.empty()) throw ValidationError("atoms: at least one atom required");
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    const std::string where = "atoms[" + std::to_string(i) + "]";
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
      throw ValidationError(where + ".weight: must be finite and nonnegative");
    }
    if (a.gate.rows() != dim || a.gate.cols() != dim) {
      throw ValidationError(where + ".matrix: expected " + std::to_string(dim) + "x" +
                            std::to_string(dim));
    }
    if (!num::all_finite(a.gate)) {
      throw ValidationError(where + ".matrix: non-finite entry");
    }
    const double dev = max_abs_dev_from_unitary(a.gate);
    if (dev > kUnitarityTol) {
      throw ValidationError(where + ".matrix: not unitary (deviation " +
                            std::to_string(dev) + " > 1e-9)");
    }
    sum += a.weight;
  }
  if (std::abs(sum - 1.0) >= kWeightSumTol) {
    throw ValidationError("atoms: weights sum to " + std::to_string(sum) +
                          ", more than 1e-9 away from 1");
  }
  for (auto& a : atoms) a.weight /= sum;
}

int sample_atom_index(const std::vector<Atom>& atoms, SeededRng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    acc += atoms[i].weight;
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(atoms.size()) - 1;
}

// Ordered qubit pair (a, b), a != b, uniform over the n(n-1) choices.
std::pair<int, int> sample_pair(int qubits, SeededRng& rng) {
  const int a = static_cast<int>(rng.uniform_below(qubits));
  int b = static_cast<int>(rng.uniform_below(qubits - 1));
  if (b >= a) ++b;
  return {a, b};
}

ComplexMatrix sample_local_gate(LocalRule rule, SeededRng& rng) {
  switch (rule) {
    case LocalRule::haar_su4:
      return haar::sample_haar(4, rng);
    case LocalRule::cnot_plus_su2: {
      if (rng.uniform() < 0.5) return gates::cnot();
      const ComplexMatrix u = haar::sample_haar(2, rng);
      const ComplexMatrix v = haar::sample_haar(2, rng);
      return num::kron(u, v);
    }
    case LocalRule::diagonal: {
      ComplexMatrix d = ComplexMatrix::Zero(4, 4);
      for (int i = 0; i < 4; ++i) d(i, i) = std::polar(1.0, 2.0 * kPi * rng.uniform());
      return d;
    }
  }
  throw UsageError("sample_local_gate: unknown rule");
}

// Rotation angle of a det-one 2x2 unitary, in [0, 2pi): trace = 2 cos(theta/2).
double rotation_angle_full(const ComplexMatrix& su2) {
  const double half_trace = std::clamp(su2.trace().real() / 2.0, -1.0, 1.0);
  return 2.0 * std::acos(half_trace);
}

const json* find_key(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path + ": expected a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError(path + ": expected an integer");
  return j.get<int>();
}

ComplexMatrix parse_matrix(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ValidationError(path + ": expected " + std::to_string(dim) + " rows");
  }
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = j[r];
    const std::string rpath = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ValidationError(rpath + ": expected " + std::to_string(dim) + " entries");
    }
    for (int c = 0; c < dim; ++c) {
      const json& cell = row[c];
      const std::string cpath = rpath + "[" + std::to_string(c) + "]";
      if (!cell.is_array() || cell.size() != 2) {
        throw ValidationError(cpath + ": expected [re, im]");
      }
      m(r, c) = Complex(require_number(cell[0], cpath + "[0]"),
                        require_number(cell[1], cpath + "[1]"));
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::discrete: return "discrete";
    case Kind::haar_subgroup: return "haar_subgroup";
    case Kind::gaussian_packet: return "gaussian_packet";
    case Kind::two_local_circuit: return "two_local_circuit";
  }
  return "?";
}

std::string rule_name(LocalRule r) {
  switch (r) {
    case LocalRule::haar_su4: return "haar_su4";
    case LocalRule::cnot_plus_su2: return "cnot_plus_su2";
    case LocalRule::diagonal: return "diagonal";
  }
  return "?";
}

GateEnsemble GateEnsemble::discrete(int dim, std::vector<Atom> atoms) {
  if (dim < 1) throw ValidationError("dim: must be positive");
  check_atoms(dim, atoms);
  GateEnsemble e;
  e.kind_ = Kind::discrete;
  e.dim_ = dim;
  e.atoms_ = std::move(atoms);
  return e;
}

GateEnsemble GateEnsemble::haar(int dim) {
  if (dim < 1) throw ValidationError("dim: must be positive");
  GateEnsemble e;
  e.kind_ = Kind::haar_subgroup;
  e.dim_ = dim;
  return e;
}

GateEnsemble GateEnsemble::gaussian_packet(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("sigma: must be finite and nonnegative");
  }
  GateEnsemble e;
  e.kind_ = Kind::gaussian_packet;
  e.dim_ = 2;
  e.sigma_ = sigma;
  return e;
}

GateEnsemble GateEnsemble::two_local(int qubits, LocalRule rule) {
  if (qubits < 2) throw ValidationError("qubits: need at least 2");
  if (qubits > 20) throw ValidationError("qubits: dimension would exceed desk scale");
  GateEnsemble e;
  e.kind_ = Kind::two_local_circuit;
  e.dim_ = 1 << qubits;
  e.qubits_ = qubits;
  e.rule_ = rule;
  return e;
}

double GateEnsemble::density(const ComplexMatrix& g) const {
  if (kind_ == Kind::haar_subgroup) return 1.0;
  if (kind_ != Kind::gaussian_packet) {
    throw UsageError("density: only defined for haar_subgroup and gaussian_packet");
  }
  if (g.rows() != 2 || g.cols() != 2) throw ShapeError("density: expected a 2x2 gate");
  const double theta = rotation_angle_full(su2_projection(g));
  // Radial Gaussian mass of every rotation vector mapping to this group
  // element (theta + 4 pi k and -theta + 4 pi k), over the group's
  // sin^2(theta/2) volume factor. Images beyond the third wrap are below
  // double precision for any sigma of interest.
  const double s2 = sigma_ * sigma_;
  if (s2 == 0.0) throw UsageError("density: sigma = 0 packet is a point mass");
  const double norm3 = std::pow(2.0 * kPi * s2, -1.5);
  const auto shell = [&](double tp) {
    return norm3 * std::exp(-tp * tp / (2.0 * s2)) * tp * tp;
  };
  const double sh = std::sin(theta / 2.0);
  // Principal image via the ratio form: theta / sin(theta/2) -> 2 at theta = 0.
  const double ratio = theta < 1e-8 ? 2.0 : theta / sh;
  double value = norm3 * std::exp(-theta * theta / (2.0 * s2)) * ratio * ratio;
  if (sh > 1e-150) {
    double wrapped = 0.0;
    for (int k = 0; k <= 2; ++k) {
      if (k > 0) wrapped += shell(theta + 4.0 * kPi * k);
      wrapped += shell(-theta + 4.0 * kPi * (k + 1));
    }
    value += wrapped / (sh * sh);
  }
  return 4.0 * kPi * kPi * value;
}

GateEnsemble load_ensemble(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ValidationError(std::string("ensemble: invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw ValidationError("ensemble: expected a JSON object");

  const json* kind_j = find_key(doc, "kind");
  if (!kind_j || !kind_j->is_string()) {
    throw ValidationError("kind: required string field");
  }
  const std::string kind = kind_j->get<std::string>();

  const json* dim_j = find_key(doc, "dim");
  if (!dim_j) throw ValidationError("dim: required field");
  const int dim = require_int(*dim_j, "dim");
  if (dim < 1) throw ValidationError("dim: must be positive");

  std::set<std::string> allowed = {"dim", "kind"};
  if (kind == "discrete") {
    allowed.insert("atoms");
  } else if (kind == "gaussian_packet") {
    allowed.insert("sigma");
  } else if (kind == "two_local_circuit") {
    allowed.insert("qubits");
    allowed.insert("local_rule");
  } else {
    throw ValidationError("kind: '" + kind +
                          "' is not one of discrete, gaussian_packet, two_local_circuit");
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ValidationError(it.key() + ": field not allowed for kind '" + kind + "'");
    }
  }

  if (kind == "discrete") {
    const json* atoms_j = find_key(doc, "atoms");
    if (!atoms_j || !atoms_j->is_array()) {
      throw ValidationError("atoms: required array field");
    }
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < atoms_j->size(); ++i) {
      const json& aj = (*atoms_j)[i];
      const std::string where = "atoms[" + std::to_string(i) + "]";
      if (!aj.is_object()) throw ValidationError(where + ": expected an object");
      for (auto it = aj.begin(); it != aj.end(); ++it) {
        if (it.key() != "weight" && it.key() != "matrix") {
          throw ValidationError(where + "." + it.key() + ": unknown field");
        }
      }
      const json* w = find_key(aj, "weight");
      const json* m = find_key(aj, "matrix");
      if (!w) throw ValidationError(where + ".weight: required field");
      if (!m) throw ValidationError(where + ".matrix: required field");
      Atom atom;
      atom.weight = require_number(*w, where + ".weight");
      atom.gate = parse_matrix(*m, dim, where + ".matrix");
      atoms.push_back(std::move(atom));
    }
    return GateEnsemble::discrete(dim, std::move(atoms));
  }

  if (kind == "gaussian_packet") {
    const json* s = find_key(doc, "sigma");
    if (!s) throw ValidationError("sigma: required field");
    if (dim != 2) throw ValidationError("dim: gaussian_packet requires dim = 2");
    return GateEnsemble::gaussian_packet(require_number(*s, "sigma"));
  }

  // two_local_circuit
  const json* q = find_key(doc, "qubits");
  const json* r = find_key(doc, "local_rule");
  if (!q) throw ValidationError("qubits: required field");
  if (!r || !r->is_string()) throw ValidationError("local_rule: required string field");
  const int qubits = require_int(*q, "qubits");
  const std::string rule = r->get<std::string>();
  LocalRule lr;
  if (rule == "haar_su4") {
    lr = LocalRule::haar_su4;
  } else if (rule == "cnot_plus_su2") {
    lr = LocalRule::cnot_plus_su2;
  } else {
    throw ValidationError("local_rule: '" + rule +
                          "' is not one of haar_su4, cnot_plus_su2");
  }
  if (qubits < 2) throw ValidationError("qubits: need at least 2");
  if (dim != (1 << qubits)) {
    throw ValidationError("dim: expected 2^qubits = " + std::to_string(1 << qubits));
  }
  return GateEnsemble::two_local(qubits, lr);
}

std::string to_json_string(const GateEnsemble& e) {
  json doc;
  doc["dim"] = e.dim();
  doc["kind"] = kind_name(e.kind());
  switch (e.kind()) {
    case Kind::discrete: {
      json atoms = json::array();
      for (const auto& a : e.atoms()) {
        atoms.push_back({{"weight", a.weight}, {"matrix", matrix_to_json(a.gate)}});
      }
      doc["atoms"] = std::move(atoms);
      break;
    }
    case Kind::gaussian_packet:
      doc["sigma"] = e.sigma();
      break;
    case Kind::two_local_circuit:
      doc["qubits"] = e.qubits();
      doc["local_rule"] = rule_name(e.local_rule());
      break;
    case Kind::haar_subgroup:
      throw UsageError("to_json_string: haar_subgroup has no file representation");
  }
  return doc.dump(2);
}

ComplexMatrix sample_gate(const GateEnsemble& e, SeededRng& rng) {
  switch (e.kind()) {
    case Kind::discrete:
      return e.atoms()[sample_atom_index(e.atoms(), rng)].gate;
    case Kind::haar_subgroup:
      return haar::sample_haar(e.dim(), rng);
    case Kind::gaussian_packet: {
      const double s = e.sigma();
      const std::array<double, 3> a = {s * rng.gauss(), s * rng.gauss(),
                                       s * rng.gauss()};
      return gates::exp_su2(a);
    }
    case Kind::two_local_circuit: {
      const LocalStep step = sample_two_local_step(e, rng);
      return embed_pair_gate(step.gate, step.a, step.b, e.qubits());
    }
  }
  throw UsageError("sample_gate: unknown kind");
}

CircuitSample sample_circuit(const GateEnsemble& e, int m, SeededRng& rng) {
  if (m < 0) throw UsageError("sample_circuit: negative depth");
  CircuitSample out;
  out.depth = m;
  out.product = ComplexMatrix::Identity(e.dim(), e.dim());
  out.steps.reserve(m);
  for (int step = 0; step < m; ++step) {
    StepRecord rec;
    if (e.kind() == Kind::discrete) {
      rec.atom = sample_atom_index(e.atoms(), rng);
      out.product = e.atoms()[rec.atom].gate * out.product;
    } else {
      rec.gate = sample_gate(e, rng);
      out.product = rec.gate * out.product;
    }
    out.steps.push_back(std::move(rec));
  }
  return out;
}

GateEnsemble symmetrize(const GateEnsemble& e) {
  if (e.kind() != Kind::discrete) {
    throw UsageError("symmetrize: defined for discrete ensembles");
  }
  std::vector<Atom> out;
  auto merge_in = [&out](double weight, const ComplexMatrix& gate) {
    for (auto& existing : out) {
      if ((existing.gate - gate).cwiseAbs().maxCoeff() <= kMergeTol) {
        existing.weight += weight;
        return;
      }
    }
    out.push_back({weight, gate});
  };
  for (const auto& a : e.atoms()) {
    const bool hermitian =
        (a.gate - a.gate.adjoint()).cwiseAbs().maxCoeff() <= kHermitianTol;
    if (hermitian) {
      merge_in(a.weight, a.gate);
    } else {
      merge_in(a.weight / 2.0, a.gate);
      merge_in(a.weight / 2.0, a.gate.adjoint());
    }
  }
  return GateEnsemble::discrete(e.dim(), std::move(out));
}

GateEnsemble project_su2(const GateEnsemble& e) {
  if (e.kind() != Kind::discrete || e.dim() != 2) {
    throw UsageError("project_su2: defined for dimension-2 discrete ensembles");
  }
  std::vector<Atom> atoms;
  atoms.reserve(e.atoms().size());
  for (const auto& a : e.atoms()) atoms.push_back({a.weight, su2_projection(a.gate)});
  return GateEnsemble::discrete(2, std::move(atoms));
}

ComplexMatrix su2_projection(const ComplexMatrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw ShapeError("su2_projection: expected 2x2");
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  if (std::abs(det) < 1e-12) throw ValidationError("su2_projection: singular matrix");
  // std::sqrt picks the principal branch, argument in (-pi/2, pi/2].
  return u / std::sqrt(det);
}

double angle_spread(const GateEnsemble& e, int m, int trials, SeededRng& rng) {
  if (e.dim() != 2) throw UsageError("angle_spread: dimension-2 ensembles only");
  if (trials < 1) throw UsageError("angle_spread: need at least one trial");
  std::vector<double> sq(trials);
  for (int i = 0; i < trials; ++i) {
    const ComplexMatrix g = su2_projection(sample_circuit(e, m, rng).product);
    // Fold to [0, pi]: cos(theta/2) = |trace| / 2.
    const double half = std::clamp(std::abs(g.trace()) / 2.0, 0.0, 1.0);
    const double theta = 2.0 * std::acos(half);
    sq[i] = theta * theta;
  }
  return num::pairwise_sum(sq) / trials;
}

LocalStep sample_two_local_step(const GateEnsemble& e, SeededRng& rng) {
  if (e.kind() != Kind::two_local_circuit) {
    throw UsageError("sample_two_local_step: two_local_circuit ensembles only");
  }
  LocalStep step;
  const auto [pa, pb] = sample_pair(e.qubits(), rng);
  step.a = pa;
  step.b = pb;
  step.gate = sample_local_gate(e.local_rule(), rng);
  return step;
}

void apply_two_local_step(const LocalStep& step, int qubits, ComplexVector& state) {
  const Eigen::Index dim = Eigen::Index(1) << qubits;
  if (state.size() != dim) throw ShapeError("apply_two_local_step: state size mismatch");
  if (step.gate.rows() != 4 || step.gate.cols() != 4) {
    throw ShapeError("apply_two_local_step: expected a 4x4 gate");
  }
  if (step.a == step.b || step.a < 0 || step.b < 0 || step.a >= qubits ||
      step.b >= qubits) {
    throw UsageError("apply_two_local_step: invalid qubit pair");
  }
  const int sa = qubits - 1 - step.a;
  const int sb = qubits - 1 - step.b;
  const Eigen::Index bit_a = Eigen::Index(1) << sa;
  const Eigen::Index bit_b = Eigen::Index(1) << sb;
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & (bit_a | bit_b)) continue;
    const Eigen::Index idx[4] = {base, base | bit_b, base | bit_a,
                                 base | bit_a | bit_b};
    Complex in[4];
    for (int i = 0; i < 4; ++i) in[i] = state(idx[i]);
    for (int r = 0; r < 4; ++r) {
      Complex acc(0.0, 0.0);
      for (int c = 0; c < 4; ++c) acc += step.gate(r, c) * in[c];
      state(idx[r]) = acc;
    }
  }
}

ComplexMatrix embed_pair_gate(const ComplexMatrix& g4, int a, int b, int qubits) {
  if (g4.rows() != 4 || g4.cols() != 4) throw ShapeError("embed_pair_gate: expected 4x4");
  if (a == b || a < 0 || b < 0 || a >= qubits || b >= qubits) {
    throw UsageError("embed_pair_gate: invalid qubit pair");
  }
  const Eigen::Index dim = Eigen::Index(1) << qubits;
  const int sa = qubits - 1 - a;  // bit shift of qubit a (qubit 0 slowest)
  const int sb = qubits - 1 - b;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int ia = static_cast<int>((col >> sa) & 1);
    const int ib = static_cast<int>((col >> sb) & 1);
    const Eigen::Index base =
        (col & ~((Eigen::Index(1) << sa) | (Eigen::Index(1) << sb)));
    for (int oa = 0; oa < 2; ++oa) {
      for (int ob = 0; ob < 2; ++ob) {
        const Complex amp = g4(oa * 2 + ob, ia * 2 + ib);
        if (amp == Complex(0.0, 0.0)) continue;
        const Eigen::Index row =
            base | (Eigen::Index(oa) << sa) | (Eigen::Index(ob) << sb);
        out(row, col) += amp;
      }
    }
  }
  return out;
}

}  // namespace haarflow::ens
