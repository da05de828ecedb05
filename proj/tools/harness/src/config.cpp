#include <fstream>
#include <set>

#include <fmt/format.h>

#include "aqs/harness.hpp"

namespace aqs::harness {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>>& kind_table() {
  static const std::vector<std::pair<ExperimentKind, std::string>> t = {
      {ExperimentKind::NoiselessSweep, "noiseless-sweep"}, {ExperimentKind::NoisySweep, "noisy-sweep"},
      {ExperimentKind::PhaseMap, "phase-map"},             {ExperimentKind::EncodingCheck, "encoding-check"},
      {ExperimentKind::BoundsTable, "bounds-table"},       {ExperimentKind::RemainderCheck, "remainder-check"},
      {ExperimentKind::DenseSimulation, "dense-simulation"}};
  return t;
}

template <class T>
std::vector<T> read_list(const json& grids, const char* key) {
  if (!grids.contains(key)) return {};
  const json& v = grids.at(key);
  if (!v.is_array()) throw ConfigError(fmt::format("grids.{} must be an array", key));
  std::vector<T> out;
  for (const json& x : v) {
    if (!x.is_number()) throw ConfigError(fmt::format("grids.{} entries must be numbers", key));
    if constexpr (std::is_integral_v<T>) {
      if (!x.is_number_integer()) throw ConfigError(fmt::format("grids.{} entries must be integers", key));
    }
    out.push_back(x.get<T>());
  }
  if (out.empty()) throw ConfigError(fmt::format("grids.{} is empty", key));
  return out;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

std::string kind_name(ExperimentKind k) {
  for (const auto& [kind, name] : kind_table())
    if (kind == k) return name;
  return "unknown";
}

ExperimentKind parse_kind(const std::string& s) {
  for (const auto& [kind, name] : kind_table())
    if (name == s) return kind;
  throw ConfigError("unknown experiment kind '" + s + "'");
}

double ExperimentConfig::tolerance(const std::string& key, double fallback) const {
  return tolerances.contains(key) ? tolerances.at(key).get<double>() : fallback;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t config_hash(const json& doc) { return fnv1a64(doc.dump()); }

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

ExperimentConfig parse_config(const json& doc, std::optional<ExperimentKind> fallback) {
  require(doc.is_object(), "config must be a JSON object");
  static const std::set<std::string> known = {"experiment", "seed",       "threads", "output",
                                              "model",      "grids",      "tolerances", "options"};
  for (const auto& [key, value] : doc.items()) require(known.count(key) > 0, "unknown config field '" + key + "'");

  ExperimentConfig cfg;
  try {
    if (doc.contains("experiment"))
      cfg.kind = parse_kind(doc.at("experiment").get<std::string>());
    else if (fallback)
      cfg.kind = *fallback;
    else
      throw ConfigError("config has no 'experiment' field");

    cfg.seed = doc.value("seed", std::uint64_t{0});
    cfg.threads = doc.value("threads", 0);
    require(cfg.threads >= 0, "threads must be >= 0");
    cfg.output = doc.value("output", kind_name(cfg.kind));
    require(!cfg.output.empty() && cfg.output.find('/') == std::string::npos, "output must be a plain file stem");

    if (doc.contains("model")) {
      const json& m = doc.at("model");
      require(m.is_object(), "model must be an object");
      cfg.model.k = m.value("k", cfg.model.k);
      cfg.model.j = m.value("j", cfg.model.j);
      cfg.model.lambda0 = m.value("lambda0", cfg.model.lambda0);
      cfg.model.lambda1 = m.value("lambda1", cfg.model.lambda1);
      cfg.model.periodic = m.value("periodic", cfg.model.periodic);
    }
    if (doc.contains("grids")) {
      const json& g = doc.at("grids");
      require(g.is_object(), "grids must be an object");
      for (const auto& [key, value] : g.items())
        require(key == "omega" || key == "delta" || key == "n" || key == "h", "unknown grid '" + key + "'");
      cfg.grids.omega = read_list<double>(g, "omega");
      cfg.grids.delta = read_list<double>(g, "delta");
      cfg.grids.n = read_list<int>(g, "n");
      cfg.grids.h = read_list<double>(g, "h");
    }
    if (doc.contains("tolerances")) {
      cfg.tolerances = doc.at("tolerances");
      require(cfg.tolerances.is_object(), "tolerances must be an object");
      for (const auto& [key, value] : cfg.tolerances.items())
        require(value.is_number() && value.get<double>() >= 0, "tolerance '" + key + "' must be a number >= 0");
    }
    if (doc.contains("options")) {
      cfg.options = doc.at("options");
      require(cfg.options.is_object(), "options must be an object");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  for (double w : cfg.grids.omega) require(w > 0 && w <= 1, "omega values must lie in (0, 1]");
  for (double d : cfg.grids.delta) require(d >= 0, "delta values must be >= 0");
  for (int n : cfg.grids.n) require(n >= 2, "n values must be >= 2");

  const std::string k = kind_name(cfg.kind);
  switch (cfg.kind) {
    case ExperimentKind::NoiselessSweep:
      require(!cfg.grids.n.empty() && !cfg.grids.omega.empty(), k + " needs grids n and omega");
      break;
    case ExperimentKind::NoisySweep:
      require(!cfg.grids.n.empty() && !cfg.grids.omega.empty() && !cfg.grids.delta.empty(),
              k + " needs grids n, omega and delta");
      require(cfg.grids.omega.size() >= 3, k + " needs at least 3 omega values");
      break;
    case ExperimentKind::PhaseMap:
      require(!cfg.grids.h.empty() && !cfg.grids.delta.empty(), k + " needs grids h and delta");
      break;
    case ExperimentKind::DenseSimulation:
      require(!cfg.grids.omega.empty(), k + " needs grid omega");
      break;
    case ExperimentKind::RemainderCheck:
      require(!cfg.grids.omega.empty(), k + " needs grid omega");
      break;
    default:
      break;
  }
  cfg.hash = config_hash(doc);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> fallback) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc, fallback);
}

}  // namespace aqs::harness
