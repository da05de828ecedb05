#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "aqs/harness.hpp"

using namespace aqs::harness;

namespace {

enum Exit { kOk = 0, kPartial = 1, kFatal = 2 };

struct Command {
  std::string name;
  std::string help;
  std::optional<ExperimentKind> fallback;
  std::set<ExperimentKind> allowed;  // empty: any
};

const std::vector<Command>& commands() {
  static const std::vector<Command> c = {
      {"simulate", "dense analogue-simulator error against the target evolution", ExperimentKind::DenseSimulation,
       {ExperimentKind::DenseSimulation}},
      {"sweep", "run any experiment kind named in the config", std::nullopt, {}},
      {"bounds", "simulator budget tables", ExperimentKind::BoundsTable, {ExperimentKind::BoundsTable}},
      {"encode-circuit", "write circuit encodings and check their fixed points", ExperimentKind::EncodingCheck,
       {ExperimentKind::EncodingCheck}},
      {"gaussian", "fermion chain studies", ExperimentKind::NoiselessSweep,
       {ExperimentKind::NoiselessSweep, ExperimentKind::NoisySweep, ExperimentKind::PhaseMap}},
      {"remainder", "ancilla excitation bounds and remainder decomposition", ExperimentKind::RemainderCheck,
       {ExperimentKind::RemainderCheck}},
  };
  return c;
}

int run(const Command& cmd, const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig cfg = load_config(config_path, cmd.fallback);
  if (!cmd.allowed.empty() && !cmd.allowed.count(cfg.kind))
    throw ConfigError("command '" + cmd.name + "' does not run experiment kind '" + kind_name(cfg.kind) + "'");
  spdlog::info("{}: {} (config hash {})", cmd.name, kind_name(cfg.kind), hex64(cfg.hash));

  if (cmd.name == "encode-circuit") {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / (cfg.output + ".jumps.json")) << encoding_document(cfg).dump(1) << "\n";
    if (!cfg.option<bool>("check", true)) return kOk;
  }
  const SweepResult r = run_experiment(cfg);
  write_result(r, out_dir);
  spdlog::info("{} points, {} failed, wrote {}/{}.csv", r.points, r.failed, out_dir, r.name);
  return r.partial() ? kPartial : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench: analogue quantum simulation experiments"};
  app.require_subcommand(1);
  std::string config, out, level = "info";
  app.add_option("--log-level", level, "trace|debug|info|warn|error|off");
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const Command& c : commands()) {
    CLI::App* s = app.add_subcommand(c.name, c.help);
    s->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    s->add_option("--out", out, "output directory")->required();
    subs.emplace_back(s, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kFatal;
  }
  spdlog::set_default_logger(spdlog::stderr_color_mt("workbench"));
  spdlog::set_level(spdlog::level::from_str(level));
  try {
    for (const auto& [s, c] : subs)
      if (s->parsed()) return run(*c, config, out);
  } catch (const ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kFatal;
  } catch (const std::exception& e) {
    spdlog::error("fatal: {}", e.what());
    return kFatal;
  }
  return kFatal;
}
