#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "aqs/analogue.hpp"
#include "aqs/budgets.hpp"
#include "aqs/circuit.hpp"
#include "aqs/gaussian.hpp"
#include "aqs/grid.hpp"
#include "aqs/harness.hpp"
#include "aqs/remainder.hpp"

namespace aqs::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Cells = std::vector<std::string>;

std::string num(double v) { return format_number(v); }
std::string num(int v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

Cells pad(Cells known, size_t width) {
  while (known.size() < width) known.push_back("nan");
  return known;
}

json fit_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"half_width", f.half_width}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.points}};
}

// Keeps (x, y) pairs with lo <= x <= hi and finite positive y.
std::pair<std::vector<double>, std::vector<double>> window(const std::vector<double>& x, const std::vector<double>& y,
                                                           double lo, double hi) {
  std::vector<double> wx, wy;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] >= lo && x[i] <= hi && std::isfinite(y[i]) && y[i] > 0) {
      wx.push_back(x[i]);
      wy.push_back(y[i]);
    }
  return {wx, wy};
}

std::pair<double, double> fit_range(const ExperimentConfig& cfg, const std::string& key) {
  const auto w = cfg.option<std::vector<double>>(key, {0.0, std::numeric_limits<double>::infinity()});
  if (w.size() != 2 || !(w[0] <= w[1])) throw ConfigError("options." + key + " must be [lo, hi]");
  return {w[0], w[1]};
}

RMat initial_simulator_covariance(const QuadraticModel& sim, const std::vector<int>& occupation) {
  const int n = static_cast<int>(occupation.size());
  RMat g = RMat::Zero(2 * sim.modes, 2 * sim.modes);
  g.topLeftCorner(2 * n, 2 * n) = fock_covariance(occupation);
  g.bottomRightCorner(2 * (sim.modes - n), 2 * (sim.modes - n)) = vacuum_covariance(sim.modes - n);
  return g;
}

}  // namespace

SweepResult run_noiseless_sweep(const ExperimentConfig& cfg) {
  const auto modes = cfg.option<std::vector<std::string>>("modes", {"steady", "transient"});
  const double t = cfg.option<double>("t", 1.0);
  for (const auto& m : modes)
    if (m != "steady" && m != "transient") throw ConfigError("noiseless-sweep: unknown mode '" + m + "'");
  if (!(t >= 0)) throw ConfigError("noiseless-sweep: t must be >= 0");

  struct Key {
    int n;
    double omega;
    std::string mode;
  };
  std::vector<Key> keys;
  for (int n : cfg.grids.n)
    for (const auto& mode : modes)
      for (double w : cfg.grids.omega) keys.push_back({n, w, mode});

  const ChainParams p = cfg.model;
  std::vector<double> errors(keys.size(), kNaN);
  std::vector<PointTask> tasks;
  for (size_t i = 0; i < keys.size(); ++i) {
    const Key k = keys[i];
    const Cells known = {num(k.n), num(k.omega), k.mode, num(k.mode == "steady" ? std::numeric_limits<double>::infinity() : t)};
    PointTask task;
    task.failed_rows = {pad(known, 7)};
    task.run = [&, i, k, known](std::uint64_t, PointOutcome& out) {
      double want = 0.0, got = 0.0;
      if (k.mode == "steady") {
        want = target_steady_density(k.n, p);
        got = simulator_steady_density(k.n, p, k.omega);
      } else {
        const QuadraticModel target = target_chain(k.n, p);
        const QuadraticModel sim = build_simulator_chain(target, k.omega);
        const std::vector<int> occ = alternating_occupation(k.n);
        want = observables(evolve_covariance(target, fock_covariance(occ), t)).density;
        got = observables(evolve_covariance(sim, initial_simulator_covariance(sim, occ), t / (k.omega * k.omega)), k.n)
                  .density;
      }
      errors[i] = std::abs(got - want);
      Cells c = known;
      for (double v : {want, got, errors[i]}) c.push_back(num(v));
      out.rows.push_back(std::move(c));
    };
    tasks.push_back(std::move(task));
  }
  SweepResult r = run_points(cfg, cfg.output, {"n", "omega", "mode", "t", "target", "simulator", "error"}, tasks);

  const auto [lo, hi] = fit_range(cfg, "fit_omega");
  json fits = json::array();
  for (int n : cfg.grids.n)
    for (const auto& mode : modes) {
      std::vector<double> w, e;
      for (size_t i = 0; i < keys.size(); ++i)
        if (keys[i].n == n && keys[i].mode == mode) {
          w.push_back(keys[i].omega);
          e.push_back(errors[i]);
        }
      auto [fx, fy] = window(w, e, lo, hi);
      json f = {{"n", n}, {"mode", mode}, {"window", {lo, hi}}};
      if (fx.size() >= 2) f["omega_slope"] = fit_json(fit_loglog(fx, fy));
      fits.push_back(f);
    }
  r.summary["fits"] = fits;
  if (cfg.grids.n.size() >= 2) {
    std::vector<int> ns = cfg.grids.n;
    std::sort(ns.begin(), ns.end());
    const int big = ns.back(), small = ns[ns.size() - 2];
    json sat = json::array();
    for (const auto& mode : modes)
      for (double w : cfg.grids.omega) {
        double eb = kNaN, es = kNaN;
        for (size_t i = 0; i < keys.size(); ++i)
          if (keys[i].mode == mode && keys[i].omega == w) {
            if (keys[i].n == big) eb = errors[i];
            if (keys[i].n == small) es = errors[i];
          }
        sat.push_back({{"mode", mode}, {"omega", w}, {"n_small", small}, {"n_large", big},
                       {"relative_change", std::abs(eb - es) / es}});
      }
    r.summary["size_dependence"] = sat;
  }
  return r;
}

SweepResult run_noisy_sweep(const ExperimentConfig& cfg) {
  const bool refine = cfg.option<bool>("refine", true);
  struct Key {
    int n;
    double delta;
  };
  std::vector<Key> keys;
  for (int n : cfg.grids.n)
    for (double d : cfg.grids.delta) keys.push_back({n, d});

  const ChainParams p = cfg.model;
  const std::vector<double> omegas = cfg.grids.omega;
  std::vector<NoisyOptimum> optima(keys.size());
  std::vector<char> done(keys.size(), 0);
  std::vector<PointTask> tasks;
  for (size_t i = 0; i < keys.size(); ++i) {
    const Key k = keys[i];
    PointTask task;
    for (double w : omegas) task.failed_rows.push_back(pad({num(k.n), num(k.delta), num(w)}, 5));
    task.run = [&, i, k](std::uint64_t, PointOutcome& out) {
      optima[i] = noisy_optimum(k.n, p, k.delta, omegas, refine);
      done[i] = 1;
      const auto best = std::min_element(optima[i].error_grid.begin(), optima[i].error_grid.end());
      for (size_t j = 0; j < omegas.size(); ++j)
        out.rows.push_back({num(k.n), num(k.delta), num(omegas[j]), num(optima[i].error_grid[j]),
                            flag(optima[i].error_grid.begin() + j == best)});
    };
    tasks.push_back(std::move(task));
  }
  SweepResult r = run_points(cfg, cfg.output, {"n", "delta", "omega", "error", "grid_minimum"}, tasks);

  Table opt;
  opt.columns = {"config_hash", "n", "delta", "omega_opt", "error_min", "interior"};
  for (size_t i = 0; i < keys.size(); ++i)
    opt.rows.push_back({hex64(cfg.hash), num(keys[i].n), num(keys[i].delta), num(done[i] ? optima[i].omega_opt : kNaN),
                        num(done[i] ? optima[i].error_min : kNaN), done[i] ? flag(optima[i].interior) : "nan"});
  r.extra["optima"] = opt;

  const auto [lo, hi] = fit_range(cfg, "fit_delta");
  json fits = json::array();
  for (int n : cfg.grids.n) {
    std::vector<double> d, w, e;
    bool interior = true;
    for (size_t i = 0; i < keys.size(); ++i)
      if (keys[i].n == n && done[i] && keys[i].delta > 0) {
        d.push_back(keys[i].delta);
        w.push_back(optima[i].omega_opt);
        e.push_back(optima[i].error_min);
        if (keys[i].delta >= lo && keys[i].delta <= hi) interior = interior && optima[i].interior;
      }
    json f = {{"n", n}, {"window", {lo, hi}}, {"all_interior", interior}};
    auto [wx, wy] = window(d, w, lo, hi);
    auto [ex, ey] = window(d, e, lo, hi);
    if (wx.size() >= 2) f["omega_opt_slope"] = fit_json(fit_loglog(wx, wy));
    if (ex.size() >= 2) f["error_min_slope"] = fit_json(fit_loglog(ex, ey));
    fits.push_back(f);
  }
  r.summary["fits"] = fits;
  return r;
}

SweepResult run_phase_map(const ExperimentConfig& cfg) {
  PhaseParams pp;
  pp.n = cfg.grids.n.empty() ? 160 : cfg.grids.n.front();
  pp.pairing_gamma = cfg.option<double>("pairing_gamma", pp.pairing_gamma);
  pp.gamma_l = cfg.option<double>("gamma_l", pp.gamma_l);
  pp.gamma_r = cfg.option<double>("gamma_r", pp.gamma_r);
  const bool covariance = cfg.option<bool>("covariance", true);

  struct Key {
    double h;
    double delta;
  };
  std::vector<Key> keys;
  for (double h : cfg.grids.h)
    for (double d : cfg.grids.delta) keys.push_back({h, d});
  std::vector<RMat> cov(keys.size());
  std::vector<PointTask> tasks;
  for (size_t i = 0; i < keys.size(); ++i) {
    const Key k = keys[i];
    PointTask task;
    task.failed_rows = {pad({num(pp.n), num(k.h), num(k.delta)}, 13)};
    task.run = [&, i, k](std::uint64_t, PointOutcome& out) {
      const PhasePoint pt = phase_point(pp, k.h, k.delta);
      if (covariance) cov[i] = pt.covariance.cwiseAbs();
      out.rows.push_back({num(pp.n), num(k.h), num(k.delta), num(pt.density), num(pt.full.length), num(pt.full.r2),
                          num(pt.full.points), num(pt.tail.length), num(pt.tail.r2), num(pt.tail.points),
                          flag(pt.long_range), flag(pt.signal), num(pt.full.length / pp.n)});
    };
    tasks.push_back(std::move(task));
  }
  SweepResult r = run_points(cfg, cfg.output,
                             {"n", "h", "delta", "density", "decay_length", "decay_r2", "decay_points", "tail_length",
                              "tail_r2", "tail_points", "long_range", "signal", "length_over_n"},
                             tasks);
  if (covariance) {
    Table t;
    t.columns = {"config_hash", "point", "h", "delta", "x", "y", "abs_cov"};
    for (size_t i = 0; i < keys.size(); ++i)
      for (int x = 0; x < cov[i].rows(); ++x)
        for (int y = 0; y < cov[i].cols(); ++y)
          t.rows.push_back({hex64(cfg.hash), std::to_string(i), num(keys[i].h), num(keys[i].delta), num(x), num(y),
                            num(cov[i](x, y))});
    r.extra["covariance"] = t;
  }
  r.summary["parameters"] = {{"n", pp.n}, {"pairing_gamma", pp.pairing_gamma}, {"gamma_l", pp.gamma_l},
                             {"gamma_r", pp.gamma_r}};
  return r;
}

namespace {

using Sizes = std::vector<std::vector<int>>;

void check_sizes(const Sizes& s, const char* key) {
  for (const auto& v : s)
    if (v.size() != 2 || v[0] < 1 || v[1] < 1) throw ConfigError(fmt::format("options.{} entries must be [N, R]", key));
}

Cells clock_row(int qubits, int rounds, int circuit, std::uint64_t seed, double time_factor) {
  std::mt19937_64 rng(seed);
  const RoundCircuit c = random_circuit(qubits, rounds, rng);
  const ClockEncoding enc = encode_clock(c);
  const int t_steps = enc.steps;
  const int data = 1 << qubits;
  // random data state, clock at 0
  const Mat rho0 = kron(random_density_matrix(data, rng), basis_projector(t_steps + 1, 0));
  const double time = time_factor * t_steps;
  const Mat rho = evolve(enc.generator, rho0, time);
  const double f = fidelity(rho, enc.expected_fixed_point());
  Mat z = Mat::Identity(data, data);
  for (int k = 0; k < data; ++k)
    if (k & 1) z(k, k) = -1.0;
  const Mat zt = kron(z, basis_projector(t_steps + 1, t_steps));
  const double value = (t_steps + 1) * (zt * rho).trace().real();
  const double zc = reference_output_z(c);
  return {"clock",   num(qubits), num(rounds),        num(t_steps), num(circuit), num(zc),        num(value),
          num(zc),   num(std::abs(value - zc)), num(zc), num(std::abs(value - zc)), num(t_steps + 1), num(kNaN),
          num(f),    num(data * (t_steps + 1)), num(time)};
}

Cells grid_row(const std::string& label, int qubits, int rounds, int circuit, std::uint64_t seed, bool invalid_start,
               const GridRunOptions& opt) {
  std::mt19937_64 rng(seed);
  const RoundCircuit c = random_circuit(qubits, rounds, rng);
  const GridEncoding enc = encode_grid(c);
  std::vector<int> start = enc.initial_labels();
  if (invalid_start) {
    std::uniform_int_distribution<int> level(0, kGridLevels - 1);
    do {
      for (int& l : start) l = level(rng);
    } while (validate_configuration(enc.shape, start).valid);
  }
  const GridRun run = run_grid(enc, start, opt);
  const double zc = reference_output_z(c, enc.output_row - 1);
  const int k = grid_clock_count(qubits, rounds);
  const double value = run.observable.back();
  const double want = zc / k, stated = zc / (2.0 * qubits * rounds);
  return {label,           num(qubits),
          num(rounds),     num(qubits * rounds),
          num(circuit),    num(zc),
          num(value),      num(want),
          num(std::abs(value - want)), num(stated),
          num(std::abs(value - stated)), num(k),
          num(run.error_weight.back()), num(kNaN),
          num(run.reduced_dim), num(run.times.back())};
}

}  // namespace

SweepResult run_encoding_check(const ExperimentConfig& cfg) {
  const Sizes grid = cfg.option<Sizes>("grid", {{2, 1}, {2, 2}});
  const Sizes clock = cfg.option<Sizes>("clock", {});
  const Sizes invalid = cfg.option<Sizes>("invalid_grid", {});
  const int circuits = cfg.option<int>("circuits", 5);
  const int invalid_starts = cfg.option<int>("invalid_starts", 0);
  const double clock_time = cfg.option<double>("clock_time_per_step", 200.0);
  GridRunOptions gopt;
  gopt.time_cap = cfg.option<double>("grid_time_cap", -1.0);
  gopt.rate_tol = cfg.tolerance("grid_rate", gopt.rate_tol);
  check_sizes(grid, "grid");
  check_sizes(clock, "clock");
  check_sizes(invalid, "invalid_grid");
  if (circuits < 1 || invalid_starts < 0) throw ConfigError("encoding-check: circuits >= 1, invalid_starts >= 0");

  const std::vector<std::string> columns = {"encoding", "qubits", "rounds", "steps", "circuit", "z_c",
                                            "value", "expected", "error", "stated_expected", "stated_error",
                                            "clock_count", "error_weight", "fidelity", "reduced_dim", "time"};
  std::vector<PointTask> tasks;
  auto add = [&](const std::string& label, int q, int rr, int idx, std::function<Cells(std::uint64_t)> f) {
    PointTask t;
    t.failed_rows = {pad({label, num(q), num(rr), num(q * rr), num(idx)}, columns.size())};
    t.run = [f](std::uint64_t seed, PointOutcome& out) { out.rows.push_back(f(seed)); };
    tasks.push_back(std::move(t));
  };
  for (const auto& s : clock)
    for (int i = 0; i < circuits; ++i)
      add("clock", s[0], s[1], i, [=](std::uint64_t seed) { return clock_row(s[0], s[1], i, seed, clock_time); });
  for (const auto& s : grid)
    for (int i = 0; i < circuits; ++i)
      add("grid", s[0], s[1], i, [=](std::uint64_t seed) { return grid_row("grid", s[0], s[1], i, seed, false, gopt); });
  for (const auto& s : invalid)
    for (int i = 0; i < invalid_starts; ++i)
      add("grid-invalid-start", s[0], s[1], i,
          [=](std::uint64_t seed) { return grid_row("grid-invalid-start", s[0], s[1], i, seed, true, gopt); });
  SweepResult r = run_points(cfg, cfg.output, columns, tasks);

  const double tol = cfg.tolerance("observable", 1e-4);
  int within = 0, within_stated = 0, rows = 0;
  double max_weight = 0.0, min_fidelity = 1.0;
  for (const auto& row : r.table.rows) {
    if (row[4] != "ok") continue;
    ++rows;
    const double err = std::stod(row[6 + 8]), perr = std::stod(row[6 + 10]);
    within += err <= tol;
    within_stated += perr <= tol;
    if (row[6] != "clock") max_weight = std::max(max_weight, std::stod(row[6 + 12]));
    if (row[6] == "clock") min_fidelity = std::min(min_fidelity, std::stod(row[6 + 13]));
  }
  r.summary["observable_tolerance"] = tol;
  r.summary["rows_within_tolerance"] = within;
  r.summary["rows_within_stated_normalization"] = within_stated;
  r.summary["rows"] = rows;
  r.summary["max_final_error_weight"] = max_weight;
  r.summary["min_clock_fidelity"] = min_fidelity;
  return r;
}

SweepResult run_bounds_table(const ExperimentConfig& cfg) {
  const std::vector<std::string> columns = {"kind", "m",     "h_norm", "d",         "t",          "gamma",   "kappa",
                                            "eps",  "delta", "omega",  "t_sim",     "precision", "asymptotic", "warnings"};
  std::vector<PointTask> tasks;
  auto list = [](const json& o, const char* key, std::vector<double> fallback) {
    return o.contains(key) ? o.at(key).get<std::vector<double>>() : fallback;
  };
  auto warn = [](const Budget& b) {
    std::string s;
    for (const auto& w : b.warnings) s += (s.empty() ? "" : "; ") + w;
    return s;
  };
  if (cfg.options.contains("prop1")) {
    const json& o = cfg.options.at("prop1");
    for (double m : list(o, "m", {1}))
      for (double hn : list(o, "h_norm", {0}))
        for (double t : list(o, "t", {1}))
          for (double eps : list(o, "eps", {0.1})) {
            PointTask task;
            task.failed_rows = {pad({"prop1", num(m), num(hn), "nan", num(t), "nan", "nan", num(eps)}, columns.size())};
            task.run = [=](std::uint64_t, PointOutcome& out) {
              if (m != std::floor(m)) throw std::invalid_argument("prop1: m must be an integer");
              const Budget b = prop1_budget(static_cast<int>(m), hn, t, eps);
              out.rows.push_back({"prop1", num(m), num(hn), "nan", num(t), "nan", "nan", num(eps), "nan", num(b.omega),
                                  num(b.t_sim), num(b.precision), flag(b.asymptotic), warn(b)});
            };
            tasks.push_back(std::move(task));
          }
  }
  if (cfg.options.contains("local")) {
    for (const json& o : cfg.options.at("local")) {
      std::vector<std::string> kinds;
      const std::string k = o.value("kind", "all");
      kinds = k == "all" ? local_budget_kinds() : std::vector<std::string>{k};
      LocalBudgetParams p;
      p.d = o.value("d", 1);
      auto opt = [&](const char* key) -> std::optional<double> {
        if (o.contains(key)) return o.at(key).get<double>();
        return std::nullopt;
      };
      p.t = opt("t");
      p.gamma = opt("gamma");
      p.kappa = opt("kappa");
      p.eps = opt("eps");
      p.delta = opt("delta");
      auto cell = [](const std::optional<double>& v) { return v ? num(*v) : std::string("nan"); };
      for (const auto& kind : kinds) {
        const Cells known = {kind,         "nan",         "nan",       num(p.d),      cell(p.t), cell(p.gamma),
                             cell(p.kappa), cell(p.eps), cell(p.delta)};
        PointTask task;
        task.failed_rows = {pad(known, columns.size())};
        task.run = [=](std::uint64_t, PointOutcome& out) {
          const Budget b = prop_budget_local(kind, p);
          Cells c = known;
          for (const auto& v : {num(b.omega), num(b.t_sim), num(b.precision), flag(b.asymptotic), warn(b)})
            c.push_back(v);
          out.rows.push_back(std::move(c));
        };
        tasks.push_back(std::move(task));
      }
    }
  }
  if (tasks.empty()) throw ConfigError("bounds-table: options.prop1 or options.local required");
  return run_points(cfg, cfg.output, columns, tasks);
}

SweepResult run_remainder_check(const ExperimentConfig& cfg) {
  const int instances = cfg.option<int>("instances", 10);
  const int max_jumps = cfg.option<int>("max_jumps", 3);
  const double t_end = cfg.option<double>("t_end", 4.0);
  const double dt = cfg.option<double>("dt", 0.02);
  const std::vector<double> deltas = cfg.grids.delta.empty() ? std::vector<double>{0.0} : cfg.grids.delta;
  const std::vector<double> omegas = cfg.grids.omega;
  if (instances < 1 || max_jumps < 1 || max_jumps > 3) throw ConfigError("remainder-check: instances >= 1, max_jumps in 1..3");

  const std::vector<std::string> columns = {"instance",   "qubits",   "jumps",       "omega",
                                            "delta",      "excitation_ratio", "mismatch", "fd_mismatch",
                                            "max_remainder", "sufficient_sampling"};
  std::vector<double> ratio(instances, kNaN), mismatch(instances, kNaN);
  std::vector<PointTask> tasks;
  for (int i = 0; i < instances; ++i) {
    PointTask task;
    task.failed_rows = {pad({num(i)}, columns.size())};
    task.run = [&, i](std::uint64_t seed, PointOutcome& out) {
      std::mt19937_64 rng(seed);
      const int jumps = std::uniform_int_distribution<int>(1, max_jumps)(rng);
      const int qubits = jumps == 3 ? 1 : std::uniform_int_distribution<int>(1, 2)(rng);
      const double w = omegas[std::uniform_int_distribution<size_t>(0, omegas.size() - 1)(rng)];
      const double delta = deltas[std::uniform_int_distribution<size_t>(0, deltas.size() - 1)(rng)];
      const LindbladGenerator target = random_qubit_target(qubits, jumps, rng);
      SimulatorGenerator sim = encode(target, w);
      if (delta > 0) {
        std::vector<NoiseTerm> terms;
        for (int s = 0; s < static_cast<int>(sim.combined.space.site_dims.size()); ++s)
          terms.push_back(depolarizing_noise(s));
        sim = add_noise(sim, make_noise_model(sim, delta, terms));
      }
      const Trajectory traj = simulate_trajectory(sim, random_density_matrix(sim.system_dim(), rng), t_end, dt);
      const ExcitationTable tab = ancilla_excitation_norms(sim, traj);
      const RemainderReport rep = remainder_diagnostics(sim, traj);
      ratio[i] = tab.max_ratio;
      mismatch[i] = rep.max_mismatch;
      const double peak = *std::max_element(rep.direct_norm.begin(), rep.direct_norm.end());
      out.rows.push_back({num(i), num(qubits), num(jumps), num(w), num(delta), num(tab.max_ratio),
                          num(rep.max_mismatch), num(rep.max_fd_mismatch), num(peak), flag(rep.sufficient_sampling)});
    };
    tasks.push_back(std::move(task));
  }
  SweepResult r = run_points(cfg, cfg.output, columns, tasks);
  double max_ratio = 0.0, max_mismatch = 0.0;
  for (int i = 0; i < instances; ++i) {
    if (std::isfinite(ratio[i])) max_ratio = std::max(max_ratio, ratio[i]);
    if (std::isfinite(mismatch[i])) max_mismatch = std::max(max_mismatch, mismatch[i]);
  }
  r.summary["max_excitation_ratio"] = max_ratio;
  r.summary["max_mismatch"] = max_mismatch;
  return r;
}

SweepResult run_dense_simulation(const ExperimentConfig& cfg) {
  const int instances = cfg.option<int>("instances", 1);
  const int qubits = cfg.option<int>("qubits", 1);
  const int jumps = cfg.option<int>("jumps", 1);
  const double t = cfg.option<double>("t", 1.0);
  if (instances < 1 || qubits < 1 || qubits > 3 || jumps < 1 || jumps > 3 || !(t >= 0))
    throw ConfigError("dense-simulation: instances >= 1, qubits in 1..3, jumps in 1..3, t >= 0");

  const std::vector<std::string> columns = {"instance", "qubits", "jumps", "omega", "t", "trace_distance"};
  const size_t per = cfg.grids.omega.size();
  std::vector<double> err(instances * per, kNaN);
  std::vector<PointTask> tasks;
  for (int i = 0; i < instances; ++i) {
    PointTask task;
    for (double w : cfg.grids.omega) task.failed_rows.push_back(pad({num(i), num(qubits), num(jumps), num(w), num(t)}, 6));
    task.run = [&, i](std::uint64_t seed, PointOutcome& out) {
      std::mt19937_64 rng(seed);
      const LindbladGenerator target = random_qubit_target(qubits, jumps, rng);
      const Mat rho0 = random_density_matrix(target.space.total_dim(), rng);
      const Mat want = evolve(target, rho0, t);
      for (size_t j = 0; j < per; ++j) {
        const double w = cfg.grids.omega[j];
        err[i * per + j] = trace_norm_distance(run_simulator(encode(target, w), rho0, t), want);
        out.rows.push_back({num(i), num(qubits), num(jumps), num(w), num(t), num(err[i * per + j])});
      }
    };
    tasks.push_back(std::move(task));
  }
  SweepResult r = run_points(cfg, cfg.output, columns, tasks);
  const auto [lo, hi] = fit_range(cfg, "fit_omega");
  json fits = json::array();
  for (int i = 0; i < instances; ++i) {
    std::vector<double> e(err.begin() + i * per, err.begin() + (i + 1) * per);
    auto [fx, fy] = window(cfg.grids.omega, e, lo, hi);
    json f = {{"instance", i}};
    if (fx.size() >= 2) f["omega_slope"] = fit_json(fit_loglog(fx, fy));
    fits.push_back(f);
  }
  r.summary["fits"] = fits;
  return r;
}

SweepResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::NoiselessSweep: return run_noiseless_sweep(cfg);
    case ExperimentKind::NoisySweep: return run_noisy_sweep(cfg);
    case ExperimentKind::PhaseMap: return run_phase_map(cfg);
    case ExperimentKind::EncodingCheck: return run_encoding_check(cfg);
    case ExperimentKind::BoundsTable: return run_bounds_table(cfg);
    case ExperimentKind::RemainderCheck: return run_remainder_check(cfg);
    case ExperimentKind::DenseSimulation: return run_dense_simulation(cfg);
  }
  throw ConfigError("unhandled experiment kind");
}

json encoding_document(const ExperimentConfig& cfg) {
  const json c = cfg.options.value("circuit", json::object());
  const std::string encoding = c.value("encoding", "grid");
  const int qubits = c.value("qubits", 2), rounds = c.value("rounds", 2);
  const std::string kind = c.value("kind", "random");
  if (qubits < 1 || rounds < 1) throw ConfigError("circuit: qubits and rounds must be >= 1");
  if (kind != "random" && kind != "identity") throw ConfigError("circuit.kind must be random or identity");
  std::mt19937_64 rng(point_seed(cfg.seed, 0));
  const RoundCircuit circ = kind == "random" ? random_circuit(qubits, rounds, rng) : identity_circuit(qubits, rounds);

  // nonzero entries as [row, col, re, im]
  auto matrix = [](const Mat& m) {
    json entries = json::array();
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (m(i, j) != cplx(0.0)) entries.push_back({i, j, m(i, j).real(), m(i, j).imag()});
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
  };
  json doc = {{"schema", kSchemaVersion}, {"config_hash", hex64(cfg.hash)}, {"encoding", encoding},
              {"qubits", qubits},         {"rounds", rounds},                {"circuit", kind}};
  if (encoding == "grid") {
    if (static_cast<long>(qubits) * rounds > 12) throw ConfigError("grid: N R <= 12");
    const GridEncoding enc = encode_grid(circ, c.value("output_row", -1));
    doc["levels"] = {"0", "1", "0bar", "1bar", "cross", "dot"};
    doc["output_row"] = enc.output_row;
    doc["clock_count"] = grid_clock_count(qubits, rounds);
    doc["z_c"] = reference_output_z(circ, enc.output_row - 1);
    json jumps = json::array();
    for (const GridJump& j : enc.jumps)
      jumps.push_back({{"kind", j.kind},
                       {"rule", j.rule},
                       {"sites", j.sites},
                       {"block", matrix(j.block)},
                       {"check_sites", j.check_sites},
                       {"check_masks", j.check_masks}});
    doc["jumps"] = jumps;
    doc["counts"] = {{"gate", enc.count("gate")}, {"swap", enc.count("swap")}, {"penalty", enc.count("penalty")},
                     {"init", enc.count("init")}};
  } else if (encoding == "clock") {
    const ClockEncoding enc = encode_clock(circ);
    doc["site_dims"] = enc.generator.space.site_dims;
    doc["steps"] = enc.steps;
    doc["z_c"] = reference_output_z(circ);
    json jumps = json::array();
    for (const LocalOperator& j : enc.generator.jump_terms)
      jumps.push_back({{"support", j.support}, {"matrix", matrix(j.matrix)}});
    doc["jumps"] = jumps;
  } else {
    throw ConfigError("circuit.encoding must be grid or clock");
  }
  return doc;
}

}  // namespace aqs::harness
