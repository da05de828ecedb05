#include "aqs/circuit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/QR>

namespace aqs {

namespace {

bool is_unitary(const Mat& u, double tol) {
  return u.rows() == u.cols() && (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

void RoundCircuit::validate(double tol) const {
  if (qubits < 1) throw std::invalid_argument("RoundCircuit: need at least one qubit");
  for (const Round& r : rounds) {
    if (r.single.rows() != 2 || !is_unitary(r.single, tol)) throw std::invalid_argument("RoundCircuit: U_1 must be a 2x2 unitary");
    if (static_cast<int>(r.pairs.size()) != qubits - 1)
      throw std::invalid_argument("RoundCircuit: each round needs N - 1 two-qubit gates");
    for (const Mat& u : r.pairs)
      if (u.rows() != 4 || !is_unitary(u, tol)) throw std::invalid_argument("RoundCircuit: two-qubit gates must be 4x4 unitaries");
  }
}

std::vector<CircuitStep> RoundCircuit::steps() const {
  validate();
  std::vector<CircuitStep> out;
  for (const Round& r : rounds) {
    out.push_back({r.single, {0}});
    for (int y = 0; y + 1 < qubits; ++y) out.push_back({r.pairs[y], {y, y + 1}});
  }
  return out;
}

Mat haar_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

RoundCircuit identity_circuit(int qubits, int rounds) {
  RoundCircuit c;
  c.qubits = qubits;
  c.rounds.assign(rounds, {Mat::Identity(2, 2), std::vector<Mat>(std::max(qubits - 1, 0), Mat::Identity(4, 4))});
  c.validate();
  return c;
}

RoundCircuit random_circuit(int qubits, int rounds, std::mt19937_64& rng) {
  RoundCircuit c;
  c.qubits = qubits;
  for (int r = 0; r < rounds; ++r) {
    RoundCircuit::Round round{haar_unitary(2, rng), {}};
    for (int y = 0; y + 1 < qubits; ++y) round.pairs.push_back(haar_unitary(4, rng));
    c.rounds.push_back(std::move(round));
  }
  c.validate();
  return c;
}

std::vector<Vec> circuit_history(int qubits, const std::vector<CircuitStep>& steps) {
  if (qubits < 1 || qubits > kMaxStatevectorQubits) throw std::invalid_argument("circuit_history: qubit count out of range");
  const std::vector<int> dims(qubits, 2);
  Vec psi = Vec::Zero(1 << qubits);
  psi(0) = 1.0;
  std::vector<Vec> out{psi};
  for (const CircuitStep& s : steps) {
    for (int q : s.qubits)
      if (q < 0 || q >= qubits) throw std::invalid_argument("circuit_history: gate qubit out of range");
    psi = embed(s.gate, s.qubits, dims) * psi;
    out.push_back(psi);
  }
  return out;
}

double reference_output_z(const RoundCircuit& c, int output_qubit) {
  if (c.qubits > kMaxStatevectorQubits) throw std::invalid_argument("reference_output_z: too many qubits for statevector");
  if (output_qubit < 0) output_qubit = c.qubits - 1;
  if (output_qubit >= c.qubits) throw std::invalid_argument("reference_output_z: output qubit out of range");
  const Vec psi = circuit_history(c.qubits, c.steps()).back();
  double z = 0.0;
  for (int i = 0; i < psi.size(); ++i) {
    const int bit = (i >> (c.qubits - 1 - output_qubit)) & 1;
    z += (bit ? -1.0 : 1.0) * std::norm(psi(i));
  }
  return z;
}

Mat ClockEncoding::expected_fixed_point() const {
  const int d = 1 << qubits;
  Mat sigma = Mat::Zero(d * (steps + 1), d * (steps + 1));
  for (int s = 0; s <= steps; ++s)
    sigma += kron(history[s] * history[s].adjoint(), basis_projector(steps + 1, s));
  return sigma / static_cast<double>(steps + 1);
}

ClockEncoding encode_clock(int qubits, const std::vector<CircuitStep>& steps) {
  const int t = static_cast<int>(steps.size());
  if (t == 0) throw std::invalid_argument("encode_clock: circuit has no steps");
  for (int s = 0; s < t; ++s)
    for (int q : steps[s].qubits)
      if (q > s) throw std::invalid_argument("encode_clock: step touches a qubit before its reset window closes");
  ClockEncoding e;
  e.qubits = qubits;
  e.steps = t;
  e.history = circuit_history(qubits, steps);
  e.generator.space.site_dims.assign(qubits, 2);
  e.generator.space.site_dims.push_back(t + 1);
  const int clock = qubits;
  for (int a = 0; a < qubits; ++a) {
    Mat window = Mat::Zero(t + 1, t + 1);
    for (int s = 0; s <= std::min(a, t); ++s) window(s, s) = 1.0;
    e.generator.jump_terms.push_back({kron(ket_bra(2, 0, 1), window), {a, clock}});
  }
  for (int s = 1; s <= t; ++s) {
    const Mat l = kron(steps[s - 1].gate, ket_bra(t + 1, s, s - 1));
    std::vector<int> support = steps[s - 1].qubits;
    support.push_back(clock);
    e.generator.jump_terms.push_back({l + l.adjoint(), support});
  }
  e.generator.validate();
  return e;
}

ClockEncoding encode_clock(const RoundCircuit& c) { return encode_clock(c.qubits, c.steps()); }

ClockConstants clock_convergence_constants(int qubits, int steps) {
  if (qubits < 1 || steps < 1) throw std::invalid_argument("clock_convergence_constants: N, T >= 1");
  const double t1 = steps + 1.0;
  const double s = std::sin(std::numbers::pi / (2.0 * t1));
  return {64.0 * std::sqrt(t1) * std::pow(qubits, 4) * std::pow(2.0, 4.5 * qubits), 4.0 / t1 * s * s};
}

RMat tridiagonal_matrix(int k) {
  if (k < 1) throw std::invalid_argument("tridiagonal_matrix: k >= 1");
  RMat m = RMat::Zero(k, k);
  for (int i = 0; i + 1 < k; ++i) {
    m(i, i + 1) += 1.0;
    m(i + 1, i) += 1.0;
    m(i, i) -= 1.0;
    m(i + 1, i + 1) -= 1.0;
  }
  return m;
}

TridiagonalSpectrum tridiagonal_spectrum(int k) {
  if (k < 1) throw std::invalid_argument("tridiagonal_spectrum: k >= 1");
  TridiagonalSpectrum out;
  out.eigenvalues.resize(k);
  out.eigenvectors.resize(k, k);
  const double pi = std::numbers::pi;
  for (int n = 0; n < k; ++n) {
    const double s = std::sin(n * pi / (2.0 * k));
    out.eigenvalues(n) = -4.0 * s * s;
    const double norm = n == 0 ? std::sqrt(1.0 / k) : std::sqrt(2.0 / k);
    for (int m = 0; m < k; ++m) out.eigenvectors(m, n) = norm * std::cos(pi * n * (m + 0.5) / k);
  }
  return out;
}

}  // namespace aqs
