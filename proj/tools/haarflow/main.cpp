// SPDX-License-Identifier: Apache-2.0
// Experiment runner. Every subcommand loads its inputs, runs one experiment,
// and persists reports that embed the subcommand, effective config, config
// hash, seed, and build version. Reports rerun byte-identically for the same
// flags and seed; wall-clock time goes to a separate timing sidecar.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "haarflow/ensemble.hpp"
#include "haarflow/errors.hpp"
#include "haarflow/gates.hpp"
#include "haarflow/haar.hpp"
#include "haarflow/moments.hpp"
#include "haarflow/numkernel.hpp"
#include "haarflow/parallel.hpp"
#include "haarflow/peterweyl.hpp"
#include "haarflow/probes.hpp"
#include "haarflow/report_io.hpp"
#include "haarflow/rng.hpp"

namespace hf = haarflow;
using nlohmann::json;

namespace {

constexpr long long kDefaultSamples = 100000;

// Sub-stream tags keep the per-purpose random streams disjoint.
constexpr std::uint64_t kFourierTag = 0x666f75;  // per-label Monte Carlo blocks

struct CommonFlags {
  std::uint64_t seed = 0;
  int threads = 0;
  bool force = false;
};

void add_common(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--seed", flags->seed, "Seed for every random stream")
      ->capture_default_str();
  cmd->add_option("--threads", flags->threads,
                  "Worker cap (0 = machine parallelism)")
      ->capture_default_str();
  cmd->add_flag("--force", flags->force, "Overwrite existing output files");
}

void apply_threads(int threads) {
  if (threads > 0) hf::par::set_max_threads(threads);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// Spin cutoffs accept "2", "5/2" or "2.5"; carried internally as twice j.
int parse_twice_spin(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const long num = std::stol(text.substr(0, slash));
      const long den = std::stol(text.substr(slash + 1));
      if (den != 1 && den != 2) {
        throw hf::UsageError("jmax: denominator must be 1 or 2, got '" + text + "'");
      }
      const long twice = den == 2 ? num : 2 * num;
      if (twice < 0) throw hf::UsageError("jmax: must be nonnegative");
      return static_cast<int>(twice);
    }
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    const double twice = 2.0 * v;
    const long rounded = std::lround(twice);
    if (std::abs(twice - double(rounded)) > 1e-9 || rounded < 0) {
      throw hf::UsageError("jmax: '" + text + "' is not a nonnegative half-integer");
    }
    return static_cast<int>(rounded);
  } catch (const hf::UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw hf::UsageError("jmax: cannot parse '" + text + "'");
  }
}

json matrix_json(const hf::ComplexMatrix& m) {
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

json fit_json(const hf::probes::FitResult& fit) {
  return json{{"rate", fit.rate},
              {"offset", fit.offset},
              {"r_squared", fit.r_squared},
              {"window", {fit.window_lo, fit.window_hi}}};
}

void write_outputs(const std::string& out_dir, const std::string& subcommand,
                   const json& config, std::uint64_t seed, const json& payload,
                   bool force, double wall_seconds,
                   const std::vector<std::pair<std::string, std::string>>&
                       extra_files = {}) {
  const std::string config_text = config.dump();
  for (const auto& [name, content] : extra_files) {
    hf::io::write_text_file(join(out_dir, name), content, force);
  }
  hf::io::write_text_file(
      join(out_dir, subcommand + ".json"),
      hf::io::make_report(subcommand, config_text, seed, payload.dump()), force);
  // Timing always overwrites: it is a sidecar, not part of the report.
  hf::io::write_text_file(join(out_dir, "timing.json"),
                          hf::io::make_timing(subcommand, wall_seconds), true);
}

std::string csv_meta(const std::string& subcommand, std::uint64_t seed,
                     const json& config) {
  return hf::io::csv_meta_line(subcommand, seed,
                               hf::io::config_hash_hex(config.dump()));
}

// ---------------------------------------------------------------------------
// fourier

struct FourierOpts {
  std::string ensemble;
  std::string jmax;
  std::string method;
  long long samples = kDefaultSamples;
  std::string out;
  CommonFlags common;
  CLI::Option* samples_opt = nullptr;
};

void run_fourier(const FourierOpts& o) {
  Stopwatch clock;
  apply_threads(o.common.threads);
  const hf::ens::GateEnsemble e = hf::ens::load_ensemble(
      hf::io::read_text_file(o.ensemble));
  const int twice_jmax = parse_twice_spin(o.jmax);
  if (twice_jmax > hf::pw::kDefaultTwiceJMax) {
    throw hf::UsageError("jmax: labels above " +
                         std::to_string(hf::pw::kDefaultTwiceJMax) +
                         "/2 are not supported");
  }
  const bool mc = o.method == "monte_carlo";
  if (!mc && o.samples_opt->count() > 0) {
    throw hf::UsageError("--samples only applies to --method monte_carlo");
  }
  if (o.samples < 1) throw hf::UsageError("--samples must be positive");

  std::vector<hf::pw::FourierBlock> blocks;
  hf::pw::QuadratureGrid grid;
  if (o.method == "quadrature") grid = hf::pw::QuadratureGrid::build();
  for (int tj = 0; tj <= twice_jmax; ++tj) {
    if (o.method == "finite_sum") {
      blocks.push_back(hf::pw::fourier_block_finite(e, tj));
    } else if (o.method == "quadrature") {
      blocks.push_back(hf::pw::fourier_block_quadrature(e, tj, grid));
    } else {
      hf::SeededRng rng(o.common.seed,
                        hf::SeededRng::derive_stream(kFourierTag, tj));
      blocks.push_back(
          hf::pw::fourier_block_monte_carlo(e, tj, o.samples, 1, rng));
    }
  }

  json labels = json::array(), dims = json::array(), ratios = json::array();
  double alpha = 0.0;
  bool has_nontrivial = false;
  for (const auto& b : blocks) {
    labels.push_back(b.twice_j);
    dims.push_back(b.dim());
    const double r = hf::pw::norm_ratio(b);
    ratios.push_back(r);
    if (b.twice_j > 0) {
      alpha = std::max(alpha, r);
      has_nontrivial = true;
    }
  }

  json config{{"ensemble", o.ensemble},
              {"jmax_twice", twice_jmax},
              {"method", o.method},
              {"samples", mc ? json(o.samples) : json(nullptr)},
              {"out", o.out}};
  json payload{{"ensemble", hf::mom::ensemble_label(e)},
               {"twice_j", labels},
               {"dim", dims},
               {"norm_ratio", ratios},
               {"alpha", has_nontrivial ? json(alpha) : json(nullptr)},
               {"l2_norm_squared", hf::pw::parseval(blocks)}};

  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& b : blocks) {
    files.emplace_back("block_2j_" + std::to_string(b.twice_j) + ".json",
                       hf::pw::block_to_json_string(b) + "\n");
  }
  write_outputs(o.out, "fourier", config, o.common.seed, payload,
                o.common.force, clock.seconds(), files);
}

// ---------------------------------------------------------------------------
// gap / decay

hf::mom::MomentOperator build_operator(const hf::ens::GateEnsemble& e, int t,
                                       std::optional<long long> samples,
                                       std::uint64_t seed) {
  if (e.kind() == hf::ens::Kind::discrete && !samples) {
    return hf::mom::build_moment_operator(e, t);
  }
  hf::SeededRng rng(seed, 0);
  return hf::mom::build_moment_operator(e, t, samples.value_or(kDefaultSamples),
                                        rng);
}

json build_json(const hf::mom::MomentOperator& m) {
  return json{
      {"method", m.n_samples ? "monte_carlo" : "finite_sum"},
      {"n_samples", m.n_samples ? json(*m.n_samples) : json(nullptr)},
      {"std_error", m.std_error ? json(*m.std_error) : json(nullptr)},
      {"hermitian", m.hermitian}};
}

struct GapOpts {
  std::string ensemble;
  int t = 1;
  long long samples = 0;
  std::string out;
  CommonFlags common;
  CLI::Option* samples_opt = nullptr;
};

void run_gap(const GapOpts& o) {
  Stopwatch clock;
  apply_threads(o.common.threads);
  const hf::ens::GateEnsemble e =
      hf::ens::load_ensemble(hf::io::read_text_file(o.ensemble));
  std::optional<long long> samples;
  if (o.samples_opt->count() > 0) {
    if (o.samples < 1) throw hf::UsageError("--samples must be positive");
    samples = o.samples;
  }
  const hf::mom::MomentOperator m = build_operator(e, o.t, samples, o.common.seed);
  hf::mom::GapReport gap = hf::mom::spectral_gap(m);
  gap.ensemble = hf::mom::ensemble_label(e);

  json config{{"ensemble", o.ensemble},
              {"t", o.t},
              {"samples", m.n_samples ? json(*m.n_samples) : json(nullptr)},
              {"out", o.out}};
  json payload{{"lambda_star", gap.lambda_star},
               {"rate_alpha", gap.rate_alpha},
               {"t", gap.t},
               {"dim", gap.dim},
               {"ensemble", gap.ensemble},
               {"build", build_json(m)}};
  write_outputs(o.out, "gap", config, o.common.seed, payload, o.common.force,
                clock.seconds());
}

struct DecayOpts {
  std::string ensemble;
  int t = 1;
  std::string depths;
  std::string out;
  CommonFlags common;
};

void run_decay(const DecayOpts& o) {
  Stopwatch clock;
  apply_threads(o.common.threads);
  const hf::ens::GateEnsemble e =
      hf::ens::load_ensemble(hf::io::read_text_file(o.ensemble));
  const std::vector<int> depths = hf::io::parse_schedule(o.depths);
  const hf::mom::MomentOperator m =
      build_operator(e, o.t, std::nullopt, o.common.seed);
  const hf::mom::GapReport gap = hf::mom::spectral_gap(m);
  const std::vector<double> distance = hf::mom::distance_to_haar(m, depths);
  const double build_err = m.std_error.value_or(0.0);

  json config{{"ensemble", o.ensemble},
              {"t", o.t},
              {"depths", o.depths},
              {"out", o.out}};

  std::string csv = csv_meta("decay", o.common.seed, config);
  csv += "m,distance,predicted,stderr\n";
  json rows = json::array();
  for (size_t i = 0; i < depths.size(); ++i) {
    const double predicted = std::pow(gap.lambda_star, depths[i]);
    csv += std::to_string(depths[i]) + "," + hf::io::format_double(distance[i]) +
           "," + hf::io::format_double(predicted) + "," +
           hf::io::format_double(build_err) + "\n";
    rows.push_back(json{{"m", depths[i]},
                        {"distance", distance[i]},
                        {"predicted", predicted},
                        {"stderr", build_err}});
  }
  json payload{{"ensemble", hf::mom::ensemble_label(e)},
               {"t", o.t},
               {"dim", m.dim},
               {"lambda_star", gap.lambda_star},
               {"rate_alpha", gap.rate_alpha},
               {"build", build_json(m)},
               {"rows", rows}};
  write_outputs(o.out, "decay", config, o.common.seed, payload, o.common.force,
                clock.seconds(), {{"decay.csv", csv}});
}

// ---------------------------------------------------------------------------
// probe

struct ProbeOpts {
  std::string type;
  std::string ensemble;
  int qubits = 0;
  std::string depths;
  long long trials = 0;
  std::string cut = "0";
  std::string perturb;
  std::string out;
  CommonFlags common;
  CLI::Option* cut_opt = nullptr;
  CLI::Option* perturb_opt = nullptr;
};

void run_probe(const ProbeOpts& o) {
  Stopwatch clock;
  apply_threads(o.common.threads);
  const hf::ens::GateEnsemble e =
      hf::ens::load_ensemble(hf::io::read_text_file(o.ensemble));
  if (o.qubits < 1 || o.qubits > 20) {
    throw hf::UsageError("--qubits must be between 1 and 20");
  }
  if (e.kind() == hf::ens::Kind::two_local_circuit) {
    if (e.qubits() != o.qubits) {
      throw hf::UsageError("--qubits " + std::to_string(o.qubits) +
                           " does not match the ensemble register of " +
                           std::to_string(e.qubits()) + " qubits");
    }
  } else if (e.dim() != (1 << o.qubits)) {
    throw hf::UsageError("--qubits " + std::to_string(o.qubits) +
                         " does not match the ensemble dimension " +
                         std::to_string(e.dim()));
  }
  const std::vector<int> depths = hf::io::parse_schedule(o.depths);
  hf::SeededRng rng(o.common.seed, 0);

  hf::probes::ProbeSeries series;
  json config{{"ensemble", o.ensemble},
              {"probe", o.type},
              {"qubits", o.qubits},
              {"depths", o.depths},
              {"trials", o.trials},
              {"out", o.out}};
  if (o.type == "purity") {
    if (o.perturb_opt->count() > 0) {
      throw hf::UsageError("--perturb only applies to the reversal probe");
    }
    const std::vector<int> cut = hf::io::parse_index_set(o.cut);
    config["cut"] = cut;
    series = hf::probes::purity_probe(e, o.qubits, cut, depths, o.trials, rng);
  } else {
    if (o.cut_opt->count() > 0) {
      throw hf::UsageError("--cut only applies to the purity probe");
    }
    hf::ComplexMatrix perturbation;
    if (o.perturb_opt->count() > 0) {
      perturbation = hf::io::parse_matrix_json(hf::io::read_text_file(o.perturb));
    } else {
      // Default perturbation: a pi/8 z-rotation on qubit 0.
      perturbation = hf::num::kron(
          hf::gates::exp_su2({0.0, 0.0, M_PI / 8.0}),
          hf::gates::identity(1 << (o.qubits - 1)));
    }
    config["perturb"] = o.perturb_opt->count() > 0 ? json(o.perturb)
                                                   : json(nullptr);
    series =
        hf::probes::motion_reversal_probe(e, perturbation, depths, o.trials, rng);
  }

  std::string csv = csv_meta("probe", o.common.seed, config);
  csv += "m,mean,stderr,baseline,baseline_stderr\n";
  for (size_t i = 0; i < series.depths.size(); ++i) {
    csv += std::to_string(series.depths[i]) + "," +
           hf::io::format_double(series.mean[i]) + "," +
           hf::io::format_double(series.std_error[i]) + "," +
           hf::io::format_double(series.baseline) + "," +
           hf::io::format_double(series.baseline_std_error) + "\n";
  }

  json payload{{"probe", series.probe},
               {"ensemble", hf::mom::ensemble_label(e)},
               {"depths", series.depths},
               {"mean", series.mean},
               {"std_error", series.std_error},
               {"trials", series.trials},
               {"baseline", series.baseline},
               {"baseline_std_error", series.baseline_std_error},
               {"baseline_provenance", series.baseline_provenance},
               {"interpretation_flagged", series.interpretation_flagged},
               {"interpretation", series.interpretation}};
  write_outputs(o.out, "probe", config, o.common.seed, payload, o.common.force,
                clock.seconds(), {{"probe.csv", csv}});
}

// ---------------------------------------------------------------------------
// scaling

struct ScalingOpts {
  std::string rule;
  std::string qubits;
  int t = 1;
  std::string depths;
  long long trials = 0;
  std::string out;
  CommonFlags common;
};

void run_scaling(const ScalingOpts& o) {
  Stopwatch clock;
  apply_threads(o.common.threads);
  const hf::ens::LocalRule rule = o.rule == "haar_su4"
                                      ? hf::ens::LocalRule::haar_su4
                                      : hf::ens::LocalRule::cnot_plus_su2;
  const std::vector<int> qubit_range = hf::io::parse_schedule(o.qubits);
  const std::vector<int> depths = hf::io::parse_schedule(o.depths);
  hf::SeededRng rng(o.common.seed, 0);
  const std::vector<hf::probes::SizeRate> rows =
      hf::probes::rate_vs_system_size(rule, qubit_range, o.t, depths, o.trials,
                                      rng);

  json config{{"rule", o.rule},
              {"qubits", o.qubits},
              {"t", o.t},
              {"depths", o.depths},
              {"trials", o.trials},
              {"out", o.out}};

  std::string csv = csv_meta("scaling", o.common.seed, config);
  csv += "n,lambda_star,rate,offset,r_squared,window_lo,window_hi\n";
  json table = json::array();
  for (const auto& row : rows) {
    csv += std::to_string(row.qubits) + "," +
           hf::io::format_double(row.lambda_star) + "," +
           hf::io::format_double(row.fit.rate) + "," +
           hf::io::format_double(row.fit.offset) + "," +
           hf::io::format_double(row.fit.r_squared) + "," +
           std::to_string(row.fit.window_lo) + "," +
           std::to_string(row.fit.window_hi) + "\n";
    table.push_back(json{{"qubits", row.qubits},
                         {"lambda_star", row.lambda_star},
                         {"fit", fit_json(row.fit)}});
  }
  json payload{{"rule", o.rule}, {"t", o.t}, {"rows", table}};
  write_outputs(o.out, "scaling", config, o.common.seed, payload, o.common.force,
                clock.seconds(), {{"scaling.csv", csv}});
}

// ---------------------------------------------------------------------------
// haar-sample

struct HaarSampleOpts {
  int dim = 0;
  long long count = 0;
  std::string out;
  CommonFlags common;
};

void run_haar_sample(const HaarSampleOpts& o) {
  Stopwatch clock;
  apply_threads(o.common.threads);
  if (o.dim < 1 || o.dim > 1024) {
    throw hf::UsageError("--dim must be between 1 and 1024");
  }
  if (o.count < 1 || o.count > 1000000) {
    throw hf::UsageError("--count must be between 1 and 1000000");
  }
  hf::SeededRng rng(o.common.seed, 0);
  json unitaries = json::array();
  for (long long i = 0; i < o.count; ++i) {
    unitaries.push_back(matrix_json(hf::haar::sample_haar(o.dim, rng)));
  }
  json config{{"dim", o.dim}, {"count", o.count}, {"out", o.out}};
  json payload{{"dim", o.dim}, {"count", o.count},
               {"unitaries", std::move(unitaries)}};
  hf::io::write_text_file(
      o.out,
      hf::io::make_report("haar-sample", config.dump(), o.common.seed,
                          payload.dump()),
      o.common.force);
  hf::io::write_text_file(o.out + ".timing.json",
                          hf::io::make_timing("haar-sample", clock.seconds()),
                          true);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-circuit convergence experiments"};
  app.require_subcommand(1);

  FourierOpts fourier;
  {
    CLI::App* cmd = app.add_subcommand(
        "fourier", "Fourier blocks of an ensemble, one file per label");
    cmd->add_option("--ensemble", fourier.ensemble, "Ensemble JSON path")
        ->required();
    cmd->add_option("--jmax", fourier.jmax, "Largest spin label (half-integers allowed)")
        ->required();
    cmd->add_option("--method", fourier.method, "finite_sum|quadrature|monte_carlo")
        ->required()
        ->check(CLI::IsMember({"finite_sum", "quadrature", "monte_carlo"}));
    fourier.samples_opt =
        cmd->add_option("--samples", fourier.samples,
                        "Monte Carlo sample count")
            ->capture_default_str();
    cmd->add_option("--out", fourier.out, "Output directory")->required();
    add_common(cmd, &fourier.common);
    cmd->callback([&fourier] { run_fourier(fourier); });
  }

  GapOpts gap;
  {
    CLI::App* cmd = app.add_subcommand(
        "gap", "Spectral gap of the moment operator");
    cmd->add_option("--ensemble", gap.ensemble, "Ensemble JSON path")->required();
    cmd->add_option("--t", gap.t, "Moment order")
        ->required()
        ->check(CLI::IsMember({1, 2}));
    gap.samples_opt = cmd->add_option(
        "--samples", gap.samples,
        "Monte Carlo sample count (forces a sampled build)");
    cmd->add_option("--out", gap.out, "Output directory")->required();
    add_common(cmd, &gap.common);
    cmd->callback([&gap] { run_gap(gap); });
  }

  DecayOpts decay;
  {
    CLI::App* cmd = app.add_subcommand(
        "decay", "Distance to the Haar projector against circuit depth");
    cmd->add_option("--ensemble", decay.ensemble, "Ensemble JSON path")
        ->required();
    cmd->add_option("--t", decay.t, "Moment order")
        ->required()
        ->check(CLI::IsMember({1, 2}));
    cmd->add_option("--depths", decay.depths, "Depth schedule A:B[:STEP]")
        ->required();
    cmd->add_option("--out", decay.out, "Output directory")->required();
    add_common(cmd, &decay.common);
    cmd->callback([&decay] { run_decay(decay); });
  }

  ProbeOpts probe;
  {
    CLI::App* cmd = app.add_subcommand(
        "probe", "Depth-resolved operational statistics of sampled circuits");
    cmd->add_option("type", probe.type, "purity|reversal")
        ->required()
        ->check(CLI::IsMember({"purity", "reversal"}));
    cmd->add_option("--ensemble", probe.ensemble, "Ensemble JSON path")
        ->required();
    cmd->add_option("--qubits", probe.qubits, "Register size")->required();
    cmd->add_option("--depths", probe.depths, "Depth schedule A:B[:STEP]")
        ->required();
    cmd->add_option("--trials", probe.trials, "Circuit draws per depth")
        ->required()
        ->check(CLI::PositiveNumber);
    probe.cut_opt = cmd->add_option(
        "--cut", probe.cut, "Kept qubits for the purity cut, e.g. 0,2");
    probe.perturb_opt = cmd->add_option(
        "--perturb", probe.perturb,
        "Perturbation matrix JSON path for the reversal probe");
    cmd->add_option("--out", probe.out, "Output directory")->required();
    add_common(cmd, &probe.common);
    cmd->callback([&probe] { run_probe(probe); });
  }

  ScalingOpts scaling;
  {
    CLI::App* cmd = app.add_subcommand(
        "scaling", "Fitted convergence rate per system size");
    cmd->add_option("--rule", scaling.rule, "haar_su4|cnot_plus_su2")
        ->required()
        ->check(CLI::IsMember({"haar_su4", "cnot_plus_su2"}));
    cmd->add_option("--qubits", scaling.qubits, "Register range A:B")->required();
    cmd->add_option("--t", scaling.t, "Moment order")
        ->required()
        ->check(CLI::IsMember({1, 2}));
    cmd->add_option("--depths", scaling.depths, "Depth schedule A:B[:STEP]")
        ->required();
    cmd->add_option("--trials", scaling.trials, "Samples per build")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", scaling.out, "Output directory")->required();
    add_common(cmd, &scaling.common);
    cmd->callback([&scaling] { run_scaling(scaling); });
  }

  HaarSampleOpts haar_sample;
  {
    CLI::App* cmd = app.add_subcommand(
        "haar-sample", "Reference Haar unitaries to a single JSON file");
    cmd->add_option("--dim", haar_sample.dim, "Unitary dimension")->required();
    cmd->add_option("--count", haar_sample.count, "Number of draws")->required();
    cmd->add_option("--out", haar_sample.out, "Output file path")->required();
    add_common(cmd, &haar_sample.common);
    cmd->callback([&haar_sample] { run_haar_sample(haar_sample); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 1;
  } catch (const hf::ConvergenceError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const hf::InsufficientSignalError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const hf::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
