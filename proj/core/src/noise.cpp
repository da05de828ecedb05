#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "aqs/analogue.hpp"

namespace aqs {

namespace {

Mat pauli(char p) {
  Mat m = Mat::Zero(2, 2);
  switch (p) {
    case 'X':
      m(0, 1) = m(1, 0) = 1.0;
      break;
    case 'Y':
      m(0, 1) = cplx(0, -1);
      m(1, 0) = cplx(0, 1);
      break;
    default:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
  }
  return m;
}

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  return false;
}

// Generator of one noise term on its own support, as a standalone generator.
CompiledGenerator local_generator(const NoiseTerm& term, const std::vector<int>& combined_dims) {
  LindbladGenerator g;
  std::vector<int> remap(combined_dims.size(), -1);
  for (size_t i = 0; i < term.support.size(); ++i) {
    remap[term.support[i]] = static_cast<int>(i);
    g.space.site_dims.push_back(combined_dims[term.support[i]]);
  }
  auto local = [&](const LocalOperator& op) {
    LocalOperator out{op.matrix, {}};
    for (int s : op.support) {
      if (s < 0 || s >= static_cast<int>(remap.size()) || remap[s] < 0)
        throw std::invalid_argument("noise operator acts outside its declared support");
      out.support.push_back(remap[s]);
    }
    return out;
  };
  for (const auto& h : term.hamiltonian) g.hamiltonian_terms.push_back(local(h));
  for (const auto& l : term.jumps) g.jump_terms.push_back(local(l));
  return CompiledGenerator(g);
}

}  // namespace

NoiseTerm dephasing_noise(int site) {
  // ||D_Z||_dia = 2
  NoiseTerm t{"dephasing", {site}, {}, {{std::sqrt(0.5) * pauli('Z'), {site}}}, 0.5, 1.0, true};
  return t;
}

NoiseTerm amplitude_damping_noise(int site) {
  Mat s = Mat::Zero(2, 2);
  s(0, 1) = 1.0;
  NoiseTerm t{"amplitude_damping", {site}, {}, {{std::sqrt(0.5) * s, {site}}}, 0.5, 1.0, true};
  return t;
}

NoiseTerm depolarizing_noise(int site) {
  // Tr(.) I/2 - id = (1/4) sum_P D_P has diamond norm 3/2
  const double scale = 2.0 / 3.0;
  NoiseTerm t{"depolarizing", {site}, {}, {}, scale, 1.0, true};
  for (char p : {'X', 'Y', 'Z'}) t.jumps.push_back({std::sqrt(scale / 4.0) * pauli(p), {site}});
  return t;
}

NoiseTerm coherent_noise(const Mat& v, const std::vector<int>& support) {
  if (!is_hermitian(v, 1e-12)) throw std::invalid_argument("coherent_noise: v must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(v, Eigen::EigenvaluesOnly);
  const double spread = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
  if (spread <= 0) throw std::invalid_argument("coherent_noise: v proportional to identity");
  NoiseTerm t{"coherent", support, {{v / spread, support}}, {}, 1.0 / spread, 1.0, true};
  return t;
}

NoiseTerm user_noise(const std::vector<LocalOperator>& hamiltonian, const std::vector<LocalOperator>& jumps,
                     const std::vector<int>& support, const std::vector<int>& combined_dims) {
  NoiseTerm t{"user", support, hamiltonian, jumps, 1.0, 0.0, false};
  SpMat s = local_generator(t, combined_dims).superoperator();
  t.diamond_bound = 2.0 * op_norm(Mat(s));
  spdlog::warn("user noise term: diamond norm not computed exactly, using upper bound {:.4g}", t.diamond_bound);
  return t;
}

double diamond_norm_lower_estimate(const NoiseTerm& term, const std::vector<int>& combined_dims) {
  CompiledGenerator g = local_generator(term, combined_dims);
  const int d = g.dim();
  Mat choi = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) choi += kron(g.apply(ket_bra(d, i, j)), ket_bra(d, i, j));
  return trace_norm(choi / static_cast<double>(d));
}

int compute_z_prime(const SimulatorGenerator& sim, const std::vector<NoiseTerm>& terms) {
  std::vector<std::vector<int>> s_alpha;
  for (int a = 0; a < sim.ancilla_count; ++a) {
    auto s = sim.target.jump_terms[a].support;
    s.push_back(sim.ancilla_site(a));
    s_alpha.push_back(s);
  }
  for (const auto& h : sim.target.hamiltonian_terms) s_alpha.push_back(h.support);
  int z = 0;
  for (const auto& b : terms) {
    int c = 0;
    for (const auto& b2 : terms) c += intersects(b.support, b2.support);
    for (const auto& s : s_alpha) c += intersects(b.support, s);
    z = std::max(z, c);
  }
  return z;
}

NoiseModel make_noise_model(const SimulatorGenerator& sim, double delta, std::vector<NoiseTerm> terms) {
  NoiseModel m;
  m.delta = delta;
  m.terms = std::move(terms);
  m.z_prime = compute_z_prime(sim, m.terms);
  return m;
}

SimulatorGenerator add_noise(const SimulatorGenerator& sim, const NoiseModel& noise) {
  const auto& dims = sim.combined.space.site_dims;
  const int nsites = static_cast<int>(dims.size());
  SimulatorGenerator out = sim;
  for (const auto& t : noise.terms) {
    for (int s : t.support)
      if (s < 0 || s >= nsites) throw std::out_of_range("add_noise: support out of range");
    if (t.diamond_bound > 1.0 + 1e-6)
      spdlog::warn("noise term '{}' has diamond bound {:.4g} > 1", t.kind, t.diamond_bound);
    local_generator(t, dims);  // validates operator supports
    for (const auto& h : t.hamiltonian) out.combined.hamiltonian_terms.push_back({noise.delta * h.matrix, h.support});
    for (const auto& l : t.jumps) out.combined.jump_terms.push_back({std::sqrt(noise.delta) * l.matrix, l.support});
    out.noise.push_back(t);
  }
  out.delta = noise.delta;
  out.z_prime = std::max(noise.z_prime, compute_z_prime(sim, out.noise));
  return out;
}

}  // namespace aqs
