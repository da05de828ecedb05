#pragma once

#include <random>

#include "aqs/lindblad.hpp"

namespace aqs::testing {

using Rng = std::mt19937_64;

Mat random_matrix(int dim, Rng& rng);
Mat random_hermitian(int dim, Rng& rng);
Mat random_density(int dim, Rng& rng);
Mat random_unitary(int dim, Rng& rng);
Mat random_pure(int dim, Rng& rng);
// Random generator on `qubits` qubits: one Hamiltonian term and `jumps`
// random jump terms on random one- or two-site supports.
LindbladGenerator random_qubit_generator(int qubits, int jumps, Rng& rng, double jump_norm = 1.0);

}  // namespace aqs::testing
