#include <chrono>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include "aqs/harness.hpp"

namespace aqs::harness {

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  // write then rename so a crash never leaves a truncated file behind
  const std::filesystem::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.12g}", v);
}

std::string Table::csv() const {
  std::string s;
  for (size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + csv_cell(columns[i]);
  s += '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_cell(row[i]);
    s += '\n';
  }
  return s;
}

SweepResult run_points(const ExperimentConfig& cfg, const std::string& name, std::vector<std::string> columns,
                       const std::vector<PointTask>& tasks) {
  SweepResult r;
  r.name = name;
  r.kind = cfg.kind;
  r.config_hash = cfg.hash;
  r.points = static_cast<int>(tasks.size());
  r.table.columns = {"config_hash", "schema", "point", "seed", "status", "message"};
  r.table.columns.insert(r.table.columns.end(), columns.begin(), columns.end());

  std::vector<PointOutcome> outcomes(tasks.size());
  auto body = [&](const tbb::blocked_range<size_t>& range) {
    for (size_t i = range.begin(); i != range.end(); ++i) {
      PointOutcome& o = outcomes[i];
      o.seed = point_seed(cfg.seed, i);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        tasks[i].run(o.seed, o);
        for (const auto& row : o.rows)
          if (row.size() != columns.size())
            throw std::logic_error(fmt::format("point emitted {} cells, expected {}", row.size(), columns.size()));
      } catch (const std::exception& e) {
        o.ok = false;
        o.error = e.what();
        o.rows = tasks[i].failed_rows;
      }
      o.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  tbb::task_arena arena(cfg.threads > 0 ? cfg.threads : tbb::task_arena::automatic);
  arena.execute([&] { tbb::parallel_for(tbb::blocked_range<size_t>(0, tasks.size()), body); });

  const std::string hash = hex64(cfg.hash);
  for (size_t i = 0; i < outcomes.size(); ++i) {
    const PointOutcome& o = outcomes[i];
    if (!o.ok) {
      ++r.failed;
      spdlog::warn("{} point {} failed: {}", name, i, o.error);
    }
    r.runtimes.push_back(o.runtime);
    for (const auto& cells : o.rows) {
      std::vector<std::string> row = {hash, std::to_string(kSchemaVersion), std::to_string(i), std::to_string(o.seed),
                                      o.ok ? "ok" : "error", o.ok ? "" : o.error};
      row.insert(row.end(), cells.begin(), cells.end());
      r.table.rows.push_back(std::move(row));
    }
  }
  return r;
}

void write_result(const SweepResult& r, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / (r.name + ".csv"), r.table.csv());
  for (const auto& [suffix, table] : r.extra) write_file(out_dir / (r.name + "." + suffix + ".csv"), table.csv());
  json s = r.summary;
  s["experiment"] = kind_name(r.kind);
  s["schema"] = kSchemaVersion;
  s["config_hash"] = hex64(r.config_hash);
  s["points"] = r.points;
  s["failed_points"] = r.failed;
  s["status"] = r.failed == 0 ? "ok" : (r.partial() ? "partial" : "ok_with_failures");
  s["runtime_seconds"] = r.runtimes;
  json files = json::array({r.name + ".csv"});
  for (const auto& [suffix, table] : r.extra) files.push_back(r.name + "." + suffix + ".csv");
  s["files"] = files;
  write_file(out_dir / (r.name + ".summary.json"), s.dump(2) + "\n");
}

Mat random_density_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
  Mat rho = a * a.adjoint();
  return rho / rho.trace().real();
}

LindbladGenerator random_qubit_target(int qubits, int jumps, std::mt19937_64& rng, double jump_norm) {
  std::normal_distribution<double> g(0.0, 1.0);
  auto gaussian = [&](int dim) {
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
  };
  LindbladGenerator gen;
  gen.space.site_dims.assign(qubits, 2);
  std::vector<int> all(qubits);
  for (int i = 0; i < qubits; ++i) all[i] = i;
  const Mat a = gaussian(1 << qubits);
  gen.hamiltonian_terms.push_back({Mat(0.25 * (a + a.adjoint())), all});
  std::uniform_int_distribution<int> site(0, qubits - 1);
  for (int j = 0; j < jumps; ++j) {
    std::vector<int> s{site(rng)};
    if (qubits > 1 && rng() % 2 == 0) {
      int b = site(rng);
      while (b == s[0]) b = site(rng);
      s.push_back(b);
    }
    Mat l = gaussian(1 << s.size());
    l *= jump_norm / op_norm(l);
    gen.jump_terms.push_back({l, s});
  }
  return gen;
}

}  // namespace aqs::harness
