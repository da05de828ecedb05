#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqs/fermion_studies.hpp"
#include "aqs/lindblad.hpp"

namespace aqs::harness {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class ExperimentKind { NoiselessSweep, NoisySweep, PhaseMap, EncodingCheck, BoundsTable, RemainderCheck, DenseSimulation };

std::string kind_name(ExperimentKind k);
ExperimentKind parse_kind(const std::string& s);  // throws ConfigError

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Grids {
  std::vector<double> omega;
  std::vector<double> delta;
  std::vector<int> n;
  std::vector<double> h;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::NoiselessSweep;
  ChainParams model;
  Grids grids;
  json tolerances = json::object();
  json options = json::object();
  std::uint64_t seed = 0;
  std::string output;  // file stem; defaults to the kind name
  int threads = 0;     // 0: TBB default
  std::uint64_t hash = 0;

  double tolerance(const std::string& key, double fallback) const;
  template <class T>
  T option(const std::string& key, const T& fallback) const {
    return options.contains(key) ? options.at(key).get<T>() : fallback;
  }
};

// Throws ConfigError. `fallback` is used when the document has no "experiment" field.
ExperimentConfig parse_config(const json& doc, std::optional<ExperimentKind> fallback = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> fallback = std::nullopt);

std::uint64_t fnv1a64(const std::string& bytes);
// Hash of the canonical (sorted-key, compact) serialization.
std::uint64_t config_hash(const json& doc);
std::string hex64(std::uint64_t v);

// Independent per-point stream seed derived from (seed, index) through seed_seq.
std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index);

std::string format_number(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
};

struct PointOutcome {
  std::vector<std::vector<std::string>> rows;  // kind-specific cells, one entry per emitted row
  bool ok = true;
  std::string error;
  double runtime = 0.0;
  std::uint64_t seed = 0;
};

struct SweepResult {
  std::string name;
  ExperimentKind kind = ExperimentKind::NoiselessSweep;
  std::uint64_t config_hash = 0;
  Table table;  // leading columns: config_hash, schema, point, seed, status, message
  std::map<std::string, Table> extra;
  json summary = json::object();
  std::vector<double> runtimes;  // per point, kept out of the CSV so reruns are byte-identical
  int points = 0;
  int failed = 0;

  bool partial() const { return points > 0 && failed * 10 > points; }
};

// Runs fn(index, seed, outcome) for every point in parallel and merges in grid order. A point that
// throws gets `failed_rows` rows of "nan" cells (with `failed_template` giving known parameters).
struct PointTask {
  std::function<void(std::uint64_t seed, PointOutcome& out)> run;
  std::vector<std::vector<std::string>> failed_rows;
};
SweepResult run_points(const ExperimentConfig& cfg, const std::string& name, std::vector<std::string> columns,
                       const std::vector<PointTask>& tasks);

SweepResult run_experiment(const ExperimentConfig& cfg);

SweepResult run_noiseless_sweep(const ExperimentConfig& cfg);
SweepResult run_noisy_sweep(const ExperimentConfig& cfg);
SweepResult run_phase_map(const ExperimentConfig& cfg);
SweepResult run_encoding_check(const ExperimentConfig& cfg);
SweepResult run_bounds_table(const ExperimentConfig& cfg);
SweepResult run_remainder_check(const ExperimentConfig& cfg);
SweepResult run_dense_simulation(const ExperimentConfig& cfg);

// <out>/<name>.csv, <out>/<name>.<extra>.csv and <out>/<name>.summary.json.
void write_result(const SweepResult& r, const std::filesystem::path& out_dir);

// Random qubit Lindbladian: one Hamiltonian on all qubits (scale 1/2), jumps on one or two
// random qubits rescaled to operator norm jump_norm.
LindbladGenerator random_qubit_target(int qubits, int jumps, std::mt19937_64& rng, double jump_norm = 1.0);
Mat random_density_matrix(int dim, std::mt19937_64& rng);

// Factored jump listing of a grid encoding, or the clock jumps, as JSON.
json encoding_document(const ExperimentConfig& cfg);

}  // namespace aqs::harness
