#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "aqs/budgets.hpp"
#include "aqs/fermion_studies.hpp"
#include "aqs/harness.hpp"

using namespace aqs;
using namespace aqs::harness;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("aqs_harness_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int column(const Table& t, const std::string& name) {
  for (size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return static_cast<int>(i);
  throw std::out_of_range(name);
}

json noiseless_doc() {
  return json::parse(R"({
    "experiment": "noiseless-sweep", "seed": 11,
    "grids": {"n": [5, 7], "omega": [0.1, 0.2, 0.3]},
    "options": {"t": 0.5}
  })");
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WORKBENCH_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ull);
}

TEST(Config, HashIgnoresKeyOrderAndWhitespace) {
  const json a = json::parse(R"({"seed": 1, "experiment": "bounds-table"})");
  const json b = json::parse("{ \"experiment\" : \"bounds-table\",\n \"seed\":1 }");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(json::parse(R"({"seed": 2, "experiment": "bounds-table"})")));
}

TEST(Config, RejectsMalformedConfigs) {
  EXPECT_THROW(parse_config(json::parse(R"({"experiment": "nope"})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"seed": 1})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"experiment": "noiseless-sweep", "grids": {"n": [5]}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"experiment": "noiseless-sweep", "grids": {"n": [], "omega": [0.1]}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"experiment": "bounds-table", "colour": 1})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"experiment": "noiseless-sweep", "grids": {"n": [5], "omega": [-1]}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"experiment": "noiseless-sweep", "grids": {"n": [5.5], "omega": [0.1]}})")),
               ConfigError);
  const ExperimentConfig c = parse_config(json::parse(R"({"seed": 3})"), ExperimentKind::BoundsTable);
  EXPECT_EQ(c.kind, ExperimentKind::BoundsTable);
  EXPECT_EQ(c.output, "bounds-table");
}

TEST(Config, PointSeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(point_seed(42, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(point_seed(42, 7), point_seed(42, 7));
  EXPECT_NE(point_seed(42, 7), point_seed(43, 7));
}

TEST(Table, CsvQuoting) {
  Table t{{"a", "b"}, {{"1", "x, y"}, {"2", "say \"hi\""}}};
  EXPECT_EQ(t.csv(), "a,b\n1,\"x, y\"\n2,\"say \"\"hi\"\"\"\n");
}

TEST(Sweep, OneRowPerPointWithProvenance) {
  const ExperimentConfig cfg = parse_config(noiseless_doc());
  const SweepResult r = run_noiseless_sweep(cfg);
  EXPECT_EQ(r.points, 12);
  EXPECT_EQ(r.failed, 0);
  ASSERT_EQ(r.table.rows.size(), 12u);
  for (const auto& row : r.table.rows) {
    EXPECT_EQ(row.size(), r.table.columns.size());
    EXPECT_EQ(row[0], hex64(cfg.hash));
    for (const auto& cell : row) EXPECT_NE(cell, "nan") << "missing cell";
  }
  // steady error is the module's own steady-density error
  const int n = column(r.table, "n"), w = column(r.table, "omega"), mode = column(r.table, "mode"),
            err = column(r.table, "error");
  for (const auto& row : r.table.rows)
    if (row[mode] == "steady")
      EXPECT_NEAR(std::stod(row[err]), steady_density_error(std::stoi(row[n]), ChainParams{}, std::stod(row[w])), 1e-12);
}

TEST(Sweep, SinglePointGridGivesSingleRow) {
  json d = noiseless_doc();
  d["grids"] = {{"n", {5}}, {"omega", {0.2}}};
  d["options"]["modes"] = {"steady"};
  EXPECT_EQ(run_noiseless_sweep(parse_config(d)).table.rows.size(), 1u);
}

TEST(Sweep, SerialAndParallelRunsAreByteIdentical) {
  json serial = noiseless_doc(), parallel = noiseless_doc();
  serial["threads"] = 1;
  parallel["threads"] = 4;
  const auto ds = scratch("serial"), dp = scratch("parallel"), dr = scratch("rerun");
  const ExperimentConfig cs = parse_config(serial), cp = parse_config(parallel);
  write_result(run_experiment(cs), ds);
  write_result(run_experiment(cp), dp);
  write_result(run_experiment(cs), dr);
  const std::string a = slurp(ds / "noiseless-sweep.csv");
  EXPECT_EQ(a, slurp(dr / "noiseless-sweep.csv"));
  // the thread count is part of the config, so only the hash column differs
  std::string b = slurp(dp / "noiseless-sweep.csv");
  const std::string hs = hex64(cs.hash), hp = hex64(cp.hash);
  for (size_t pos = b.find(hp); pos != std::string::npos; pos = b.find(hp, pos)) b.replace(pos, hp.size(), hs);
  EXPECT_EQ(a, b);
}

TEST(Sweep, SeededRandomExperimentsRepeat) {
  const json d = json::parse(R"({
    "experiment": "dense-simulation", "seed": 5,
    "grids": {"omega": [0.2, 0.4]}, "options": {"instances": 2}
  })");
  EXPECT_EQ(run_experiment(parse_config(d)).table.csv(), run_experiment(parse_config(d)).table.csv());
  json other = d;
  other["seed"] = 6;
  EXPECT_NE(run_experiment(parse_config(d)).table.csv(), run_experiment(parse_config(other)).table.csv());
}

TEST(Sweep, FailedPointWritesErrorRowAndContinues) {
  // a non-integer M makes one point throw
  const json d = json::parse(R"({
    "experiment": "bounds-table",
    "options": {"prop1": {"m": [1, 1.5], "t": [1], "eps": [0.1]}}
  })");
  const SweepResult r = run_bounds_table(parse_config(d));
  ASSERT_EQ(r.table.rows.size(), 2u);
  EXPECT_EQ(r.failed, 1);
  EXPECT_TRUE(r.partial());
  const int status = column(r.table, "status"), tsim = column(r.table, "t_sim");
  EXPECT_EQ(r.table.rows[0][status], "ok");
  EXPECT_EQ(r.table.rows[1][status], "error");
  EXPECT_EQ(r.table.rows[1][tsim], "nan");
  EXPECT_FALSE(r.table.rows[1][column(r.table, "message")].empty());
  EXPECT_EQ(r.table.rows[1].size(), r.table.columns.size());
}

TEST(Sweep, PartialOnlyAboveTenPercent) {
  SweepResult r;
  r.points = 10;
  r.failed = 1;
  EXPECT_FALSE(r.partial());
  r.failed = 2;
  EXPECT_TRUE(r.partial());
}

TEST(BoundsTable, Prop1PassThrough) {
  const json d = json::parse(R"({
    "experiment": "bounds-table",
    "options": {"prop1": {"m": [1, 3], "h_norm": [0, 2], "t": [1, 4], "eps": [0.1, 0.01]}}
  })");
  const SweepResult r = run_bounds_table(parse_config(d));
  ASSERT_EQ(r.table.rows.size(), 16u);
  const int m = column(r.table, "m"), h = column(r.table, "h_norm"), t = column(r.table, "t"),
            e = column(r.table, "eps"), ts = column(r.table, "t_sim"), w = column(r.table, "omega");
  for (const auto& row : r.table.rows) {
    const Budget b = prop1_budget(std::stoi(row[m]), std::stod(row[h]), std::stod(row[t]), std::stod(row[e]));
    EXPECT_NEAR(std::stod(row[ts]), b.t_sim, 1e-9 * b.t_sim);
    EXPECT_NEAR(std::stod(row[w]), b.omega, 1e-11);
  }
  EXPECT_NEAR(std::stod(r.table.rows[0][ts]), 50.0, 1e-9);
}

TEST(NoisySweep, ZeroNoiseColumnMatchesNoiseless) {
  const json d = json::parse(R"({
    "experiment": "noisy-sweep",
    "grids": {"n": [5], "delta": [0, 0.001], "omega": [0.1, 0.2, 0.4]},
    "options": {"refine": false}
  })");
  const SweepResult r = run_noisy_sweep(parse_config(d));
  const int delta = column(r.table, "delta"), w = column(r.table, "omega"), err = column(r.table, "error");
  int checked = 0;
  for (const auto& row : r.table.rows)
    if (std::stod(row[delta]) == 0.0) {
      EXPECT_NEAR(std::stod(row[err]), steady_density_error(5, ChainParams{}, std::stod(row[w])), 1e-12);
      ++checked;
    }
  EXPECT_EQ(checked, 3);
  EXPECT_EQ(r.extra.at("optima").rows.size(), 2u);
}

TEST(EncodingCheck, TwoByOneRowsCarryBothNormalizations) {
  const json d = json::parse(R"({
    "experiment": "encoding-check", "seed": 9,
    "options": {"circuits": 2, "grid": [[2, 1]], "clock": [[1, 2]]}
  })");
  const SweepResult r = run_encoding_check(parse_config(d));
  ASSERT_EQ(r.table.rows.size(), 4u);
  const int enc = column(r.table, "encoding"), zc = column(r.table, "z_c"), v = column(r.table, "value"),
            stated = column(r.table, "stated_expected"), k = column(r.table, "clock_count");
  for (const auto& row : r.table.rows) {
    const double z = std::stod(row[zc]);
    if (row[enc] == "grid") {
      EXPECT_EQ(row[k], "3");
      EXPECT_NEAR(std::stod(row[v]), z / 3.0, 1e-6);
      EXPECT_NEAR(std::stod(row[stated]), z / 4.0, 1e-12);
    } else {
      EXPECT_NEAR(std::stod(row[v]), z, 1e-8);
      EXPECT_GT(std::stod(row[column(r.table, "fidelity")]), 1 - 1e-8);
    }
  }
}

TEST(EncodingCheck, JumpDocumentCounts) {
  const json d = json::parse(R"({
    "experiment": "encoding-check",
    "options": {"circuit": {"encoding": "grid", "qubits": 2, "rounds": 2}}
  })");
  const json doc = encoding_document(parse_config(d));
  EXPECT_EQ(doc["clock_count"], 7);
  EXPECT_EQ(doc["counts"]["penalty"], 30 * 2 * 1 + 40 * 2 * 1 + 8 * 2);
  EXPECT_EQ(doc["jumps"].size(), 4u + 2u + 2u + 156u);
  json c = d;
  c["options"]["circuit"]["encoding"] = "clock";
  const json clock = encoding_document(parse_config(c));
  EXPECT_EQ(clock["steps"], 4);
  EXPECT_EQ(clock["jumps"].size(), 2u + 4u);
}

TEST(RemainderCheck, ExcitationRatiosBounded) {
  const json d = json::parse(R"({
    "experiment": "remainder-check", "seed": 3,
    "grids": {"omega": [0.2, 0.5], "delta": [0, 0.01]},
    "options": {"instances": 3, "t_end": 2.0}
  })");
  const SweepResult r = run_remainder_check(parse_config(d));
  EXPECT_EQ(r.failed, 0);
  EXPECT_LE(r.summary["max_excitation_ratio"].get<double>(), 1 + 1e-6);
  EXPECT_LT(r.summary["max_mismatch"].get<double>(), 1e-6);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string ok = write("ok.json", R"({"options": {"prop1": {"m": [1], "t": [1], "eps": [0.1]}}})");
  const std::string partial =
      write("partial.json", R"({"options": {"prop1": {"m": [1, 1.5], "t": [1], "eps": [0.1]}}})");
  const std::string bad = write("bad.json", R"({"experiment": "noiseless-sweep"})");
  const std::string broken = write("broken.json", "{ not json");
  const std::string out = (dir / "out").string();
  EXPECT_EQ(run_cli("bounds --config " + ok + " --out " + out), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "bounds-table.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "bounds-table.summary.json"));
  EXPECT_EQ(run_cli("bounds --config " + partial + " --out " + out), 1);
  EXPECT_EQ(run_cli("sweep --config " + bad + " --out " + out), 2);
  EXPECT_EQ(run_cli("bounds --config " + broken + " --out " + out), 2);
  // no experiment field: gaussian falls back to noiseless-sweep, which needs grids
  EXPECT_EQ(run_cli("gaussian --config " + ok + " --out " + out), 2);
  EXPECT_EQ(run_cli("bounds --config /nonexistent.json --out " + out), 2);
  EXPECT_EQ(run_cli("frobnicate --config " + ok + " --out " + out), 2);
}
