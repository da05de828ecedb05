#pragma once

#include <random>
#include <vector>

#include "aqs/lindblad.hpp"

namespace aqs {

// A gate in a flattened circuit; qubits are 0-based, qubit 0 is the most significant.
struct CircuitStep {
  Mat gate;
  std::vector<int> qubits;
};

// Round architecture: each round applies U_1 on qubit 1, then U_{1,2}, U_{2,3}, ..., U_{N-1,N}.
// Two-qubit gates are indexed (a a'; b b') with a on the upper qubit y.
struct RoundCircuit {
  struct Round {
    Mat single;
    std::vector<Mat> pairs;  // pairs[y] acts on qubits (y, y + 1), 0-based
  };

  int qubits = 0;
  std::vector<Round> rounds;

  int round_count() const { return static_cast<int>(rounds.size()); }
  int step_count() const { return qubits * round_count(); }
  void validate(double tol = 1e-12) const;
  std::vector<CircuitStep> steps() const;
};

Mat haar_unitary(int dim, std::mt19937_64& rng);
RoundCircuit identity_circuit(int qubits, int rounds);
RoundCircuit random_circuit(int qubits, int rounds, std::mt19937_64& rng);

// |phi_s> = U_s ... U_1 |0...0> for s = 0..steps.size().
std::vector<Vec> circuit_history(int qubits, const std::vector<CircuitStep>& steps);

// <Z> on output_qubit (0-based, default last) after the circuit acts on |0...0>.
double reference_output_z(const RoundCircuit& c, int output_qubit = -1);

constexpr int kMaxStatevectorQubits = 12;

struct ClockEncoding {
  int qubits = 0;
  int steps = 0;
  LindbladGenerator generator;  // sites: data qubits, then the clock qudit of dimension steps + 1
  std::vector<Vec> history;

  // (1 / (T + 1)) sum_s |phi_s><phi_s| (x) |s><s|
  Mat expected_fixed_point() const;
};

// Jumps S_a = |0_a><1_a| (x) sum_{t < a} |t><t| (a = 1..N) and L_s = U_s (x) |s><s-1| + h.c.
// Requires qubit a (1-based) untouched by steps 1..a-1 so that S_a only resets fresh qubits.
ClockEncoding encode_clock(int qubits, const std::vector<CircuitStep>& steps);
ClockEncoding encode_clock(const RoundCircuit& c);

struct ClockConstants {
  double c0 = 0.0;
  double a0 = 0.0;
};
ClockConstants clock_convergence_constants(int qubits, int steps);

// M = sum_i (|i><i+1| + |i+1><i| - |i><i| - |i+1><i+1|) on k sites.
RMat tridiagonal_matrix(int k);

struct TridiagonalSpectrum {
  RVec eigenvalues;   // -4 sin^2(n pi / 2k), n = 0..k-1
  RMat eigenvectors;  // column n: sqrt(2/k) cos(pi n (m + 1/2) / k), column 0 uniform
};
TridiagonalSpectrum tridiagonal_spectrum(int k);

}  // namespace aqs
