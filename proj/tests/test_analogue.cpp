#include <cmath>

#include <gtest/gtest.h>

#include "aqs/analogue.hpp"
#include "aqs/remainder.hpp"
#include "random.hpp"

using namespace aqs;
using aqs::testing::Rng;

namespace {

Mat lowering() {
  Mat s = Mat::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

Mat pauli_z() {
  Mat z = Mat::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

LindbladGenerator amplitude_damping() {
  LindbladGenerator g;
  g.space.site_dims = {2};
  g.jump_terms.push_back({lowering(), {0}});
  return g;
}

Mat excited() { return basis_projector(2, 1); }

// Simulator generator written out with explicit Kronecker products, ancillae
// after the system register.
Mat reference_simulator_rhs(const LindbladGenerator& target, double w, const Mat& rho) {
  const int ds = target.space.total_dim();
  const int m = target.jump_count();
  const int da = 1 << m;
  Mat h = Mat::Zero(ds, ds);
  for (const auto& t : target.hamiltonian_terms) h += Mat(embed(t.matrix, t.support, target.space.site_dims));
  Mat htot = w * w * kron(h, Mat::Identity(da, da));
  std::vector<Mat> sig(m);
  for (int a = 0; a < m; ++a) {
    Mat left = Mat::Identity(1 << a, 1 << a);
    Mat right = Mat::Identity(1 << (m - a - 1), 1 << (m - a - 1));
    sig[a] = kron(Mat::Identity(ds, ds), kron(kron(left, lowering()), right));
    Mat l = kron(Mat(embed(target.jump_terms[a].matrix, target.jump_terms[a].support, target.space.site_dims)),
                 Mat::Identity(da, da));
    htot += w * (l * sig[a].adjoint() + l.adjoint() * sig[a]);
  }
  Mat out = -I1 * (htot * rho - rho * htot);
  for (int a = 0; a < m; ++a) out += 4.0 * dissipator(sig[a], rho);
  return out;
}

}  // namespace

TEST(Encode, MatchesExplicitConstruction) {
  Rng rng(11);
  for (int rep = 0; rep < 3; ++rep) {
    LindbladGenerator target = aqs::testing::random_qubit_generator(2, 2, rng);
    const double w = 0.37;
    SimulatorGenerator sim = encode(target, w);
    ASSERT_EQ(sim.ancilla_count, 2);
    ASSERT_EQ(sim.combined.space.total_dim(), 16);
    CompiledGenerator cg(sim.combined);
    for (int k = 0; k < 5; ++k) {
      Mat rho = aqs::testing::random_density(16, rng);
      EXPECT_LT((cg.apply(rho) - reference_simulator_rhs(target, w, rho)).norm(), 1e-12);
    }
  }
}

TEST(Encode, RejectsEmptyJumpListAndBadOmega) {
  LindbladGenerator g;
  g.space.site_dims = {2};
  g.hamiltonian_terms.push_back({pauli_z(), {0}});
  EXPECT_THROW(encode(g, 0.1), std::invalid_argument);
  EXPECT_THROW(encode(amplitude_damping(), 0.0), std::invalid_argument);
}

TEST(Simulator, AmplitudeDampingConvergesAtSmallOmega) {
  SimulatorGenerator sim = encode(amplitude_damping(), 0.1);
  Mat out = run_simulator(sim, excited(), 1.0);
  Mat ref = evolve(amplitude_damping(), excited(), 1.0);
  EXPECT_NEAR(out(1, 1).real(), std::exp(-1.0), 0.05);
  EXPECT_LT(trace_norm_distance(out, ref), 0.05);
}

TEST(Simulator, ZeroTimeReturnsInput) {
  SimulatorGenerator sim = encode(amplitude_damping(), 0.3);
  Rng rng(3);
  Mat rho = aqs::testing::random_density(2, rng);
  EXPECT_LT((run_simulator(sim, rho, 0.0) - rho).norm(), 1e-15);
}

TEST(Simulator, ZeroJumpsDecoupleAncillae) {
  LindbladGenerator g;
  g.space.site_dims = {2};
  Mat x = Mat::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  g.hamiltonian_terms.push_back({0.7 * x, {0}});
  g.jump_terms.push_back({Mat::Zero(2, 2), {0}});
  const double w = 0.2;
  SimulatorGenerator sim = encode(g, w);
  Rng rng(5);
  Mat rho = aqs::testing::random_density(2, rng);
  Mat out = run_simulator(sim, rho, 1.3);
  Mat ref = evolve(g, rho, 1.3);
  EXPECT_LT(trace_norm_distance(out, ref), 1e-8);
}

TEST(Simulator, ErrorDecreasesAsOmegaHalves) {
  Rng rng(21);
  LindbladGenerator target = aqs::testing::random_qubit_generator(1, 1, rng);
  Mat rho = aqs::testing::random_density(2, rng);
  Mat ref = evolve(target, rho, 1.0);
  double prev = 1e9;
  for (double w : {0.4, 0.2, 0.1}) {
    double err = trace_norm_distance(run_simulator(encode(target, w), rho, 1.0), ref);
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(Excitation, ZeroAtStartAndBoundedNoiseless) {
  const double w = 0.3;
  SimulatorGenerator sim = encode(amplitude_damping(), w);
  Trajectory traj = simulate_trajectory(sim, excited(), 3.0 / (w * w), 0.25);
  ExcitationTable tab = ancilla_excitation_norms(sim, traj);
  double max_sigma = 0.0;
  for (const auto& r : tab.rows) {
    if (r.time_index == 0) EXPECT_LT(r.norm, 1e-15);
    if (r.kind == "sigma") max_sigma = std::max(max_sigma, r.norm);
  }
  EXPECT_LE(max_sigma, 0.15 + 1e-9);
  EXPECT_GT(max_sigma, 0.0);
  EXPECT_TRUE(tab.within_bounds());
}

TEST(Excitation, RandomTargetsRespectBounds) {
  Rng rng(99);
  for (int rep = 0; rep < 4; ++rep) {
    const int jumps = 1 + rep % 3;
    LindbladGenerator target = aqs::testing::random_qubit_generator(jumps == 3 ? 1 : 2, jumps, rng);
    for (double w : {0.05, 0.3, 0.8}) {
      SimulatorGenerator sim = encode(target, w);
      Trajectory traj = simulate_trajectory(sim, aqs::testing::random_density(sim.system_dim(), rng), 10.0, 0.2);
      ExcitationTable tab = ancilla_excitation_norms(sim, traj);
      EXPECT_TRUE(tab.within_bounds()) << "rep " << rep << " w " << w << " ratio " << tab.max_ratio;
    }
  }
}

TEST(Excitation, CrossTermBoundTwoJumps) {
  Rng rng(8);
  LindbladGenerator target = aqs::testing::random_qubit_generator(2, 2, rng);
  const double w = 0.5;
  SimulatorGenerator sim = encode(target, w);
  Trajectory traj = simulate_trajectory(sim, aqs::testing::random_density(4, rng), 8.0, 0.1);
  for (const auto& r : ancilla_excitation_norms(sim, traj).rows)
    if (r.kind != "sigma" && r.alpha != r.alpha2) EXPECT_LE(r.norm, w * w / 4 + 1e-9);
}

TEST(Noise, CatalogScaledToUnitDiamondEstimate) {
  const std::vector<int> dims = {2, 2};
  EXPECT_NEAR(diamond_norm_lower_estimate(dephasing_noise(0), dims), 1.0, 1e-10);
  EXPECT_NEAR(diamond_norm_lower_estimate(depolarizing_noise(1), dims), 1.0, 1e-10);
  double ad = diamond_norm_lower_estimate(amplitude_damping_noise(0), dims);
  EXPECT_LE(ad, 1.0 + 1e-10);
  EXPECT_GT(ad, 0.5);
  Mat v = Mat::Zero(2, 2);
  v(0, 1) = v(1, 0) = 3.0;
  NoiseTerm c = coherent_noise(v, {1});
  EXPECT_NEAR(c.scale, 1.0 / 6.0, 1e-14);
  EXPECT_LE(diamond_norm_lower_estimate(c, dims), 1.0 + 1e-10);
}

TEST(Noise, UnscaledDepolarizingHasNormThreeHalves) {
  NoiseTerm t = depolarizing_noise(0);
  for (auto& j : t.jumps) j.matrix *= std::sqrt(1.5);
  EXPECT_NEAR(diamond_norm_lower_estimate(t, {2}), 1.5, 1e-10);
}

TEST(Noise, UserTermGetsUpperBound) {
  std::vector<LocalOperator> jumps = {{lowering(), {0}}};
  NoiseTerm t = user_noise({}, jumps, {0}, {2, 2});
  EXPECT_FALSE(t.analytic);
  EXPECT_GE(t.diamond_bound, diamond_norm_lower_estimate(t, {2, 2}));
}

TEST(Noise, ZeroDeltaIsIdentical) {
  Rng rng(4);
  LindbladGenerator target = aqs::testing::random_qubit_generator(1, 1, rng);
  SimulatorGenerator sim = encode(target, 0.3);
  SimulatorGenerator noisy = add_noise(sim, make_noise_model(sim, 0.0, {depolarizing_noise(0), dephasing_noise(1)}));
  CompiledGenerator a(sim.combined), b(noisy.combined);
  for (int k = 0; k < 10; ++k) {
    Mat rho = aqs::testing::random_density(4, rng);
    EXPECT_LT((a.apply(rho) - b.apply(rho)).norm(), 1e-12);
  }
}

TEST(Noise, AncillaDephasingPreservesTrace) {
  SimulatorGenerator sim = encode(amplitude_damping(), 0.3);
  SimulatorGenerator noisy = add_noise(sim, make_noise_model(sim, 0.1, {dephasing_noise(1)}));
  Mat out = evolve(CompiledGenerator(noisy.combined), initial_combined_state(noisy, excited()), 5.0);
  EXPECT_NEAR(out.trace().real(), 1.0, 1e-9);
}

TEST(Noise, SupportOutOfRange) {
  SimulatorGenerator sim = encode(amplitude_damping(), 0.3);
  NoiseModel m;
  m.delta = 0.1;
  m.terms = {dephasing_noise(2)};
  EXPECT_THROW(add_noise(sim, m), std::out_of_range);
}

TEST(Noise, ZPrimeCountsOverlaps) {
  // target: one jump on site 0; combined sites {0, anc 1}
  SimulatorGenerator sim = encode(amplitude_damping(), 0.3);
  // each term meets itself, the other single-site term on its own site, and S_0 = {0, 1}
  EXPECT_EQ(compute_z_prime(sim, {dephasing_noise(0), dephasing_noise(1)}), 2);
  EXPECT_EQ(compute_z_prime(sim, {dephasing_noise(0), depolarizing_noise(0)}), 3);
}

TEST(Excitation, NoisyBoundsHold) {
  Rng rng(31);
  LindbladGenerator target = aqs::testing::random_qubit_generator(2, 1, rng);
  SimulatorGenerator sim = encode(target, 0.3);
  std::vector<NoiseTerm> terms = {depolarizing_noise(0), depolarizing_noise(1), depolarizing_noise(2)};
  for (double delta : {0.01, 0.1}) {
    SimulatorGenerator noisy = add_noise(sim, make_noise_model(sim, delta, terms));
    Trajectory traj = simulate_trajectory(noisy, aqs::testing::random_density(4, rng), 20.0, 0.25);
    EXPECT_TRUE(ancilla_excitation_norms(noisy, traj).within_bounds());
  }
}

TEST(Remainder, AssembledMatchesDirectNoiseless) {
  Rng rng(2024);
  for (int rep = 0; rep < 3; ++rep) {
    LindbladGenerator target = aqs::testing::random_qubit_generator(1 + rep % 2, 1 + rep % 2, rng);
    SimulatorGenerator sim = encode(target, 0.4);
    Trajectory traj = simulate_trajectory(sim, aqs::testing::random_density(sim.system_dim(), rng), 4.0, 0.02);
    RemainderReport r = remainder_diagnostics(sim, traj);
    ASSERT_TRUE(r.sufficient_sampling);
    EXPECT_LT(r.max_mismatch, 1e-6) << "rep " << rep;
    EXPECT_LT(r.max_fd_mismatch, 1e-3);
  }
}

TEST(Remainder, AssembledMatchesDirectNoisy) {
  Rng rng(77);
  LindbladGenerator target = aqs::testing::random_qubit_generator(2, 2, rng);
  SimulatorGenerator sim = encode(target, 0.3);
  SimulatorGenerator noisy =
      add_noise(sim, make_noise_model(sim, 0.05, {depolarizing_noise(0), amplitude_damping_noise(2), dephasing_noise(3)}));
  Trajectory traj = simulate_trajectory(noisy, aqs::testing::random_density(4, rng), 3.0, 0.02);
  RemainderReport r = remainder_diagnostics(noisy, traj);
  EXPECT_LT(r.max_mismatch, 1e-6);
}

TEST(Remainder, TrapezoidIsSecondOrder) {
  Rng rng(6);
  LindbladGenerator target = aqs::testing::random_qubit_generator(1, 1, rng);
  SimulatorGenerator sim = encode(target, 0.5);
  Mat rho = aqs::testing::random_density(2, rng);
  RemainderOptions opt;
  opt.quadrature = Quadrature::Trapezoid;
  double e1 = remainder_diagnostics(sim, simulate_trajectory(sim, rho, 2.0, 0.04), opt).max_mismatch;
  double e2 = remainder_diagnostics(sim, simulate_trajectory(sim, rho, 2.0, 0.02), opt).max_mismatch;
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.3);
}

TEST(Remainder, ZeroJumpTargetHasNoRemainder) {
  LindbladGenerator g;
  g.space.site_dims = {2};
  g.hamiltonian_terms.push_back({pauli_z(), {0}});
  g.jump_terms.push_back({Mat::Zero(2, 2), {0}});
  SimulatorGenerator sim = encode(g, 0.3);
  Rng rng(1);
  RemainderReport r = remainder_diagnostics(sim, simulate_trajectory(sim, aqs::testing::random_density(2, rng), 1.0, 0.05));
  for (double v : r.direct_norm) EXPECT_LT(v, 1e-12);
  for (double v : r.assembled_norm) EXPECT_LT(v, 1e-12);
}

TEST(Remainder, LeadingOrderOmegaSquared) {
  // fixed target-time grid, R is O(w^2) in target-time units
  Rng rng(13);
  LindbladGenerator target = aqs::testing::random_qubit_generator(1, 1, rng);
  Mat rho = aqs::testing::random_density(2, rng);
  auto peak = [&](double w) {
    SimulatorGenerator sim = encode(target, w);
    RemainderReport r = remainder_diagnostics(sim, simulate_trajectory(sim, rho, 1.0 / (w * w), 0.05));
    EXPECT_TRUE(r.sufficient_sampling);
    double mx = 0.0;
    for (size_t k = 0; k < r.direct_norm.size(); ++k)
      if (r.times[k] * w * w >= 0.5) mx = std::max(mx, r.direct_norm[k] / (w * w));
    return mx;
  };
  const double slope = std::log2(peak(0.2) / peak(0.1));
  EXPECT_NEAR(slope, 2.0, 0.3);
}

TEST(Remainder, QTermsBoundedByTwo) {
  Rng rng(17);
  LindbladGenerator target = aqs::testing::random_qubit_generator(1, 1, rng);
  SimulatorGenerator sim = encode(target, 0.3);
  RemainderReport r = remainder_diagnostics(sim, simulate_trajectory(sim, aqs::testing::random_density(2, rng), 0.5, 0.05));
  for (const auto& t : r.terms)
    if (t.id == "q[0]") EXPECT_LE(t.norm.front(), 2.0);
}

TEST(Remainder, CoarseGridReported) {
  SimulatorGenerator sim = encode(amplitude_damping(), 0.3);
  RemainderReport r = remainder_diagnostics(sim, simulate_trajectory(sim, excited(), 1.0, 0.2));
  EXPECT_FALSE(r.sufficient_sampling);
  EXPECT_NE(r.message.find("insufficient"), std::string::npos);
}
