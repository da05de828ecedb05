// One PASS/FAIL line per acceptance criterion.
//   acceptance [--only <name>]... [--known-failures <file>]
// Exit status: 0 when every criterion passes, 1 otherwise. With --known-failures the status is 0
// exactly when the failing set equals the listed names (one per line, '#' comments).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "aqs/analogue.hpp"
#include "aqs/budgets.hpp"
#include "aqs/circuit.hpp"
#include "aqs/fermion_studies.hpp"
#include "aqs/gaussian.hpp"
#include "aqs/grid.hpp"
#include "aqs/harness.hpp"
#include "aqs/jordan_wigner.hpp"
#include "aqs/lattice.hpp"
#include "aqs/majorana_moments.hpp"
#include "aqs/remainder.hpp"
#include "random.hpp"

using namespace aqs;
using aqs::harness::json;
using aqs::testing::Rng;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<Verdict()> run;
};

std::string sci(double v) { return fmt::format("{:.3g}", v); }

harness::SweepResult run_config(const std::string& text) {
  return harness::run_experiment(harness::parse_config(json::parse(text)));
}

int column(const harness::Table& t, const std::string& name) {
  for (size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return static_cast<int>(i);
  throw std::out_of_range(name);
}

void require_complete(const harness::SweepResult& r) {
  if (r.failed > 0) throw std::runtime_error(fmt::format("{} of {} points failed", r.failed, r.points));
}

// --- dense oracles --------------------------------------------------------------------------

double trace_norm_svd(const Mat& x) { return Eigen::JacobiSVD<Mat>(x).singularValues().sum(); }

// trace over the trailing `anc` qubits
Mat trace_out_tail(const Mat& x, int sys_dim, int anc_dim) {
  Mat out = Mat::Zero(sys_dim, sys_dim);
  for (int i = 0; i < sys_dim; ++i)
    for (int j = 0; j < sys_dim; ++j)
      for (int a = 0; a < anc_dim; ++a) out(i, j) += x(i * anc_dim + a, j * anc_dim + a);
  return out;
}

// |0><1| on ancilla alpha of m, identity elsewhere, system register first
Mat ancilla_sigma(int sys_dim, int m, int alpha) {
  const int anc = 1 << m;
  Mat s = Mat::Zero(sys_dim * anc, sys_dim * anc);
  const int bit = 1 << (m - 1 - alpha);
  for (int i = 0; i < sys_dim; ++i)
    for (int a = 0; a < anc; ++a)
      if (a & bit) s(i * anc + (a ^ bit), i * anc + a) = 1.0;
  return s;
}

struct DenseObs {
  std::vector<double> occupation;
  RMat covariance;
};

DenseObs dense_observables(const Mat& rho, int count) {
  int modes = 0;
  while ((1 << modes) < rho.rows()) ++modes;
  std::vector<Mat> n(count);
  for (int x = 0; x < count; ++x) n[x] = jw_annihilation(modes, x).adjoint() * jw_annihilation(modes, x);
  DenseObs o;
  o.occupation.resize(count);
  o.covariance = RMat::Zero(count, count);
  for (int x = 0; x < count; ++x) o.occupation[x] = (rho * n[x]).trace().real();
  for (int x = 0; x < count; ++x)
    for (int y = 0; y < count; ++y)
      o.covariance(x, y) = (rho * n[x] * n[y]).trace().real() - o.occupation[x] * o.occupation[y];
  return o;
}

double obs_diff(const FermionObservables& g, const DenseObs& d) {
  double m = 0.0;
  double mean = 0.0;
  for (size_t x = 0; x < d.occupation.size(); ++x) {
    m = std::max(m, std::abs(g.occupation[x] - d.occupation[x]));
    mean += d.occupation[x] / d.occupation.size();
  }
  m = std::max(m, std::abs(g.density - mean));
  return std::max(m, (g.covariance - d.covariance).cwiseAbs().maxCoeff());
}

// --- criteria -------------------------------------------------------------------------------

Verdict check_oracle_equivalence() {
  double worst = 0.0;
  int checks = 0;
  for (int n : {2, 3}) {
    const QuadraticModel target = build_target_chain(n, 1.0, 0.5, 1.1, 1.0);
    const QuadraticModel sim = build_simulator_chain(target, 0.5);
    const QuadraticModel noisy = add_depolarizing(sim, 0.05);
    std::vector<int> occ(n, 0);
    occ[0] = 1;
    for (const QuadraticModel* m : {&target, &sim, &noisy}) {
      const int extra = m->modes - n;
      const Mat rho0 = kron(jw_fock_state(occ), basis_projector(1 << extra, 0));
      RMat g0 = RMat::Zero(2 * m->modes, 2 * m->modes);
      g0.topLeftCorner(2 * n, 2 * n) = fock_covariance(occ);
      if (extra > 0) g0.bottomRightCorner(2 * extra, 2 * extra) = vacuum_covariance(extra);
      const CompiledGenerator cg(jw_generator(*m));
      std::vector<double> times;
      for (int i = 1; i <= 10; ++i) times.push_back(0.5 * i);
      const auto states = evolve_times(cg, rho0, times);
      const auto fast = exact_observables_times(*m, g0, times, n);
      for (size_t i = 0; i < times.size(); ++i, ++checks) worst = std::max(worst, obs_diff(fast[i], dense_observables(states[i], n)));
      worst = std::max(worst, obs_diff(exact_steady_observables(*m, n), dense_observables(fixed_point(cg).state, n)));
      ++checks;
    }
  }
  return {worst <= 1e-6, fmt::format("{} comparisons (n=2,3; target/simulator/noisy), max |diff| {} (tol 1e-6)", checks, sci(worst))};
}

Verdict check_excitation_bounds() {
  Rng rng(20251);
  std::uniform_real_distribution<double> uw(0.05, 1.0);
  const std::vector<double> deltas = {0.0, 1e-3, 1e-2, 0.1};
  double worst = 0.0, agree = 0.0;
  long samples = 0;
  const int instances = 60;
  for (int k = 0; k < instances; ++k) {
    const int jumps = 1 + k % 3;
    const int qubits = jumps == 3 ? 1 : 1 + (k / 3) % 2;
    const double w = uw(rng), delta = deltas[k % deltas.size()];
    SimulatorGenerator sim = encode(aqs::testing::random_qubit_generator(qubits, jumps, rng), w);
    if (delta > 0) {
      std::vector<NoiseTerm> terms;
      for (int s = 0; s < static_cast<int>(sim.combined.space.site_dims.size()); ++s) terms.push_back(depolarizing_noise(s));
      sim = add_noise(sim, make_noise_model(sim, delta, terms));
    }
    const int ds = sim.system_dim(), m = sim.ancilla_count, da = 1 << m;
    const Trajectory traj = simulate_trajectory(sim, aqs::testing::random_density(ds, rng), 10.0, 0.25);
    const double zd = sim.z_prime * delta;
    const double b1 = w / 2 + zd, b2 = w * w / 4 + w * zd / 2 + zd;
    std::vector<Mat> s(m);
    for (int a = 0; a < m; ++a) s[a] = ancilla_sigma(ds, m, a);
    double inst = 0.0;
    for (const Mat& rho : traj.states)
      for (int a = 0; a < m; ++a) {
        inst = std::max(inst, trace_norm_svd(trace_out_tail(s[a] * rho, ds, da)) / b1);
        ++samples;
        for (int b = 0; b < m; ++b) {
          inst = std::max(inst, trace_norm_svd(trace_out_tail(s[a].adjoint() * s[b] * rho, ds, da)) / b2);
          inst = std::max(inst, trace_norm_svd(trace_out_tail(s[a] * s[b] * rho, ds, da)) / b2);
          samples += 2;
        }
      }
    worst = std::max(worst, inst);
    agree = std::max(agree, std::abs(inst - ancilla_excitation_norms(sim, traj).max_ratio));
  }
  return {worst <= 1 + 1e-6 && agree < 1e-8,
          fmt::format("{} instances (M<=3, delta in {{0,1e-3,1e-2,0.1}}), {} sampled norms, max norm/bound {} "
                      "(tol 1+1e-6); module table agrees to {}",
                      instances, samples, sci(worst), sci(agree))};
}

Verdict check_remainder_decomposition() {
  Rng rng(777);
  std::uniform_real_distribution<double> uw(0.1, 0.8);
  double worst = 0.0, worst_fd = 0.0;
  bool sampled = true;
  for (int k = 0; k < 10; ++k) {
    const int jumps = 1 + k % 3, qubits = jumps == 3 ? 1 : 1 + (k / 3) % 2;
    SimulatorGenerator sim = encode(aqs::testing::random_qubit_generator(qubits, jumps, rng), uw(rng));
    if (k % 2 == 1) {
      std::vector<NoiseTerm> terms;
      for (int s = 0; s < static_cast<int>(sim.combined.space.site_dims.size()); ++s) terms.push_back(depolarizing_noise(s));
      sim = add_noise(sim, make_noise_model(sim, 0.02, terms));
    }
    const Trajectory traj = simulate_trajectory(sim, aqs::testing::random_density(sim.system_dim(), rng), 3.0, 0.02);
    const RemainderReport r = remainder_diagnostics(sim, traj);
    sampled = sampled && r.sufficient_sampling;
    worst = std::max(worst, r.max_mismatch);
    worst_fd = std::max(worst_fd, r.max_fd_mismatch);
  }
  const double tol = std::max(1e-6, 10 * 1e-10);
  return {sampled && worst <= tol,
          fmt::format("10 instances (5 noisy), assembled vs exact-derivative remainder max {} (tol {}); "
                      "central difference on the 0.02 grid differs by {}",
                      sci(worst), sci(tol), sci(worst_fd))};
}

Verdict check_omega_squared() {
  const auto r = run_config(R"({
    "experiment": "noiseless-sweep", "seed": 1,
    "model": {"k": 1.0, "j": 0.5, "lambda0": 1.1, "lambda1": 1.0},
    "grids": {"n": [21], "omega": [0.025, 0.05, 0.1, 0.2]},
    "options": {"modes": ["steady", "transient"], "t": 1.0}
  })");
  require_complete(r);
  bool pass = true;
  std::string detail;
  for (const auto& f : r.summary["fits"]) {
    const double slope = f["omega_slope"]["slope"];
    pass = pass && slope >= 1.7 && slope <= 2.3;
    detail += fmt::format("{} slope {:.3f} +/- {:.3f}; ", f["mode"].get<std::string>(), slope,
                          f["omega_slope"]["half_width"].get<double>());
  }
  return {pass, "n=21, omega 0.025..0.2: " + detail + "window [1.7, 2.3]"};
}

Verdict check_size_uniformity() {
  const auto r = run_config(R"({
    "experiment": "noiseless-sweep", "seed": 1,
    "grids": {"n": [21, 41], "omega": [0.2]},
    "options": {"modes": ["steady", "transient"], "t": 1.0}
  })");
  require_complete(r);
  bool pass = true;
  std::string detail;
  for (const auto& s : r.summary["size_dependence"]) {
    const double rel = s["relative_change"];
    pass = pass && rel <= 0.1;
    detail += fmt::format("{} |e41-e21|/e21 = {}; ", s["mode"].get<std::string>(), sci(rel));
  }
  return {pass, "omega=0.2: " + detail + "tol 0.1"};
}

Verdict check_noisy_optimum() {
  const auto r = run_config(R"({
    "experiment": "noisy-sweep", "seed": 2,
    "model": {"k": 1.0, "j": 0.5, "lambda0": 1.1, "lambda1": 0.5},
    "grids": {"n": [21], "delta": [0.0001, 0.0003, 0.001, 0.003, 0.01],
              "omega": [0.02, 0.03, 0.05, 0.07, 0.1, 0.14, 0.2, 0.28, 0.4, 0.56, 0.8]},
    "options": {"refine": true, "fit_delta": [0.0001, 0.01]}
  })");
  require_complete(r);
  const json& f = r.summary["fits"][0];
  const double so = f["omega_opt_slope"]["slope"], se = f["error_min_slope"]["slope"];
  const bool interior = f["all_interior"];
  return {interior && std::abs(so - 0.25) <= 0.10 && std::abs(se - 0.5) <= 0.15,
          fmt::format("n=21, lambda1=0.5, delta 1e-4..1e-2: argmin-omega slope {:.3f} (0.25 +/- 0.10), "
                      "min-error slope {:.3f} (0.50 +/- 0.15), interior optima {}",
                      so, se, interior)};
}

Verdict check_phase_study() {
  const auto r = run_config(R"({
    "experiment": "phase-map",
    "grids": {"n": [160], "h": [0.4, 0.7, 0.9], "delta": [0, 0.01]},
    "options": {"pairing_gamma": 0.5, "gamma_l": 0.5, "gamma_r": 0.5, "covariance": false}
  })");
  require_complete(r);
  const auto& t = r.table;
  const int h = column(t, "h"), d = column(t, "delta"), len = column(t, "decay_length"), r2 = column(t, "decay_r2"),
            tail = column(t, "tail_length");
  auto row = [&](double hv, double dv) -> const std::vector<std::string>& {
    for (const auto& x : t.rows)
      if (std::stod(x[h]) == hv && std::stod(x[d]) == dv) return x;
    throw std::runtime_error("missing phase point");
  };
  const double n = 160;
  const double l04 = std::stod(row(0.4, 0)[tail]);
  const double l09 = std::stod(row(0.9, 0)[len]), r09 = std::stod(row(0.9, 0)[r2]);
  const double n04 = std::stod(row(0.4, 0.01)[tail]), n07 = std::stod(row(0.7, 0.01)[tail]);
  const bool pass = l04 >= n / 4 && r09 > 0.9 && l09 < n / 10 && n04 >= n / 10 && n07 < n / 10;
  return {pass, fmt::format("n=160: h=0.4 tail length {:.1f} (>= 40); h=0.9 length {:.3f} (< 16), R2 {:.3f} (> 0.9); "
                            "delta=0.01: h=0.4 tail {:.1f} (>= 16), h=0.7 tail {:.2f} (< 16)",
                            l04, l09, r09, n04, n07)};
}

Verdict check_clock_encoding() {
  const auto r = run_config(R"({
    "experiment": "encoding-check", "seed": 8,
    "options": {"circuits": 3, "grid": [], "clock": [[1, 1], [1, 2], [1, 3], [1, 4], [2, 1], [2, 2]]}
  })");
  require_complete(r);
  const int fid = column(r.table, "fidelity");
  double worst = 1.0;
  for (const auto& row : r.table.rows) worst = std::min(worst, std::stod(row[fid]));
  double spec = 0.0;
  for (int k = 1; k <= 64; ++k) {
    Eigen::SelfAdjointEigenSolver<RMat> es(tridiagonal_matrix(k), Eigen::EigenvaluesOnly);
    std::vector<double> want(k);
    for (int j = 0; j < k; ++j) want[j] = -4 * std::pow(std::sin(j * M_PI / (2.0 * k)), 2);
    std::sort(want.begin(), want.end());
    for (int j = 0; j < k; ++j) spec = std::max(spec, std::abs(es.eigenvalues()(j) - want[j]));
    const RVec closed = tridiagonal_spectrum(k).eigenvalues;
    std::vector<double> got(closed.data(), closed.data() + k);
    std::sort(got.begin(), got.end());
    for (int j = 0; j < k; ++j) spec = std::max(spec, std::abs(got[j] - want[j]));
  }
  return {worst > 1 - 1e-8 && spec <= 1e-12,
          fmt::format("{} random circuits with N<=2, T<=4 (data random, clock at 0): min fidelity 1-{} (tol 1e-8); "
                      "tridiagonal k<=64 max eigenvalue error {} (tol 1e-12)",
                      r.table.rows.size(), sci(1 - worst), sci(spec))};
}

Verdict check_grid_encoding() {
  const auto r = run_config(R"({
    "experiment": "encoding-check", "seed": 9,
    "options": {"circuits": 5, "grid": [[2, 1], [2, 2]], "invalid_grid": [[2, 1]], "invalid_starts": 10}
  })");
  require_complete(r);
  const auto& t = r.table;
  const int enc = column(t, "encoding"), zc = column(t, "z_c"), val = column(t, "value"),
            qk = column(t, "qubits"), rk = column(t, "rounds"), weight = column(t, "error_weight");
  double dev_stated = 0.0, dev_k = 0.0, max_weight = 0.0;
  int grid_rows = 0, invalid_rows = 0;
  for (const auto& row : t.rows) {
    const double z = std::stod(row[zc]), v = std::stod(row[val]);
    const int nq = std::stoi(row[qk]), nr = std::stoi(row[rk]);
    if (row[enc] == "grid") {
      ++grid_rows;
      dev_stated = std::max(dev_stated, std::abs(v - z / (2.0 * nq * nr)));
      dev_k = std::max(dev_k, std::abs(v - z / (2.0 * nq * nr - nq + 1)));
    } else {
      ++invalid_rows;
      max_weight = std::max(max_weight, std::stod(row[weight]));
    }
  }
  // exhaustive 2x2: checker verdict against the kernel of the error-count operator
  std::mt19937_64 rng(3);
  const GridEncoding g = encode_grid(random_circuit(2, 2, rng));
  int disagree = 0, accepted = 0;
  const long total = 6 * 6 * 6 * 6;
  for (long i = 0; i < total; ++i) {
    const std::vector<int> labels = g.shape.labels(i);
    const bool valid = validate_configuration(g.shape, labels).valid;
    accepted += valid;
    disagree += valid != (g.error_weight(labels) == 0.0);
  }
  const bool stated_ok = dev_stated <= 1e-4;
  const bool pass = stated_ok && grid_rows == 10 && disagree == 0 && invalid_rows == 10 && max_weight < 1e-3;
  return {pass, fmt::format("Tr(O sigma) vs z_C/(2NR): max dev {} (tol 1e-4) {}; vs z_C/(2NR-N+1): max dev {}; "
                            "exhaustive 2x2: {} disagreements over {} ({} valid); max final <F> from 10 invalid "
                            "starts {} (tol 1e-3)",
                            sci(dev_stated), stated_ok ? "ok" : "FAILS", sci(dev_k), disagree, total, accepted,
                            sci(max_weight))};
}

// 3-qubit open chain with one term per bond, each of cb norm <= 1
LindbladGenerator bond_chain(Rng& rng) {
  LindbladGenerator g;
  g.space.site_dims = {2, 2, 2};
  for (int x = 0; x < 2; ++x) {
    Mat h = aqs::testing::random_hermitian(4, rng);
    h *= 0.25 / op_norm(h);
    Mat l = aqs::testing::random_matrix(4, rng);
    l *= 0.5 / op_norm(l);
    g.hamiltonian_terms.push_back({h, {x, x + 1}});
    g.jump_terms.push_back({l, {x, x + 1}});
  }
  return g;
}

Verdict check_lr_bounds() {
  Rng rng(4242);
  const Lattice lat({3});
  const SupportFamily fam{{{0, 1}, {1, 2}}};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> start(0, 2), len(1, 2);
  auto support = [&]() -> Support {
    const int s = start(rng);
    if (len(rng) == 2 && s + 1 < 3) return {s, s + 1};
    return {s};
  };
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const LindbladGenerator g = bond_chain(rng);
    const Support sk = support(), so = support();
    const Mat kl = aqs::testing::random_hermitian(1 << sk.size(), rng);
    Mat ol = aqs::testing::random_hermitian(1 << so.size(), rng);
    ol /= op_norm(ol);
    const double t = u(rng);
    const Mat kf = Mat(embed(kl, sk, g.space.site_dims));
    const Mat ot = heisenberg_evolve(g, LocalOperator{ol, so}, t);
    Eigen::SelfAdjointEigenSolver<Mat> es(kl, Eigen::EigenvaluesOnly);
    const double cb = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
    worst = std::max(worst, op_norm(kf * ot - ot * kf) / lr_bound(lat, fam, sk, so, cb, t));
  }
  const Lattice sq({15, 15});
  double worst_xi = 0.0;
  for (int k = 0; k < 50; ++k) {
    SupportFamily f;
    for (int s = 0; s < sq.site_count(); ++s) {
      const auto c = sq.coords(s);
      if (u(rng) < 0.5 && c[0] + 1 < 15)
        f.supports.push_back({s, sq.index({c[0] + 1, c[1]})});
      else if (u(rng) < 0.8)
        f.supports.push_back({s});
    }
    const Support s{static_cast<int>(u(rng) * sq.site_count())};
    const double lambda = 0.2 + 3 * u(rng), x = 3 * u(rng), t = 4 * u(rng);
    const int m = k % 2, kk = 1 + k % 3;
    worst_xi = std::max(worst_xi, lattice_sum_xi(sq, f, s, lambda, x, t, m, kk) /
                                      xi_upper_bound(lambda, x, t, m, kk, f.degree(), 1, 2));
  }
  return {worst <= 1 + 1e-12 && worst_xi <= 1 + 1e-12,
          fmt::format("20 random 3-site instances: max ||[K, O(t)]|| / lr_bound = {}; 50 lattice-sum draws: "
                      "max xi / nu-bound = {}",
                      sci(worst), sci(worst_xi))};
}

Verdict check_budgets() {
  const double v = prop1_budget(1, 0.0, 1.0, 0.1).t_sim;
  int violations = 0, checks = 0;
  auto expect = [&](bool ok) {
    ++checks;
    violations += !ok;
  };
  for (const auto& kind : local_budget_kinds()) {
    LocalBudgetParams p;
    p.d = 2;
    p.t = 1.5;
    p.gamma = 0.5;
    p.kappa = 1.0;
    p.eps = 0.01;
    p.delta = 1e-3;
    const Budget base = prop_budget_local(kind, p);
    LocalBudgetParams e = p, t = p, g = p, dl = p;
    e.eps = 0.02;
    t.t = 3.0;
    g.gamma = 0.25;
    dl.delta = 1e-5;
    expect(prop_budget_local(kind, e).t_sim <= base.t_sim);
    expect(prop_budget_local(kind, t).t_sim >= base.t_sim);
    expect(prop_budget_local(kind, g).t_sim >= base.t_sim);
    expect(prop_budget_local(kind, dl).precision <= base.precision);
  }
  for (int m = 1; m < 5; ++m) expect(prop1_budget(m, 1.0, 1.0, 0.1).t_sim < prop1_budget(m + 1, 1.0, 1.0, 0.1).t_sim);
  expect(prop1_budget(1, 1.0, 1.0, 0.1).t_sim < prop1_budget(1, 1.0, 2.0, 0.1).t_sim);
  expect(prop1_budget(1, 0.0, 1.0, 0.05).t_sim > v);
  return {std::abs(v - 50.0) <= 1e-9 && violations == 0,
          fmt::format("prop1_budget(M=1, H=0, t=1, eps=0.1) = {}; monotonicity {}/{} hold", harness::format_number(v),
                      checks - violations, checks)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only;
  std::string known_path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc)
      only.insert(argv[++i]);
    else if (a == "--known-failures" && i + 1 < argc)
      known_path = argv[++i];
    else {
      std::cerr << "usage: acceptance [--only <name>]... [--known-failures <file>]\n";
      return 2;
    }
  }
  const std::vector<Criterion> criteria = {
      {"oracle-equivalence", 60, check_oracle_equivalence},
      {"excitation-bounds", 120, check_excitation_bounds},
      {"remainder-decomposition", 120, check_remainder_decomposition},
      {"omega-squared-convergence", 120, check_omega_squared},
      {"system-size-uniformity", 60, check_size_uniformity},
      {"noisy-optimum", 600, check_noisy_optimum},
      {"phase-study", 600, check_phase_study},
      {"clock-encoding", 120, check_clock_encoding},
      {"grid-encoding", 900, check_grid_encoding},
      {"lr-bound-domination", 60, check_lr_bounds},
      {"budget-calculators", 1, check_budgets},
  };
  std::set<std::string> failed;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.name)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = v.pass && in_time;
    if (!pass) failed.insert(c.name);
    std::cout << fmt::format("{} {}: {} [{:.2f} s, limit {:g} s{}]", pass ? "PASS" : "FAIL", c.name, v.detail, secs,
                             c.limit_seconds, in_time ? "" : ", over time")
              << std::endl;
  }
  if (known_path.empty()) return failed.empty() ? 0 : 1;

  std::ifstream in(known_path);
  if (!in) {
    std::cerr << "cannot read " << known_path << "\n";
    return 2;
  }
  std::set<std::string> known;
  for (std::string line; std::getline(in, line);) {
    line = line.substr(0, line.find('#'));
    line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
    if (!line.empty() && (only.empty() || only.count(line))) known.insert(line);
  }
  bool match = true;
  for (const auto& f : failed)
    if (!known.count(f)) {
      std::cout << "unexpected failure: " << f << "\n";
      match = false;
    }
  for (const auto& k : known)
    if (!failed.count(k)) {
      std::cout << "listed as failing but passed: " << k << "\n";
      match = false;
    }
  std::cout << fmt::format("{} failing, all listed in {}: {}", failed.size(), known_path, match ? "yes" : "no")
            << std::endl;
  return match ? 0 : 1;
}
