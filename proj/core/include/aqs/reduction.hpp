#pragma once

#include <functional>
#include <vector>

#include "aqs/lindblad.hpp"

namespace aqs {

// (output basis index, amplitude) pairs of op |index>.
std::vector<std::pair<long, cplx>> apply_to_basis(const LocalOperator& op, const HilbertSpec& space, long index);

using BasisMap = std::function<std::vector<std::pair<long, cplx>>(long)>;

// Operator given by its action on computational basis states.
struct BasisOperator {
  BasisMap apply;
  BasisMap apply_adjoint;
};
BasisOperator basis_operator(const LocalOperator& op, const HilbertSpec& space);

// Dynamics restricted to the span V of computational basis states reachable from the seeds
// under every jump L and L^dag L (and H). Since L V and L^dag L V stay in V, states supported
// on V evolve exactly inside it.
struct ReducedGenerator {
  HilbertSpec space;
  std::vector<long> basis;  // ascending full-space indices
  CompiledGenerator generator;

  int dim() const { return static_cast<int>(basis.size()); }
  int index_of(long full) const;  // -1 if outside V
  // Compression P O P of a local operator onto V.
  Mat restrict_operator(const BasisOperator& op) const;
  Mat restrict_operator(const LocalOperator& op) const;
  Mat basis_state(long full) const;
};

ReducedGenerator reduce_to_reachable(const HilbertSpec& space, const std::vector<BasisOperator>& hamiltonian,
                                     const std::vector<BasisOperator>& jumps, const std::vector<long>& seeds,
                                     long max_dim = 4096);
ReducedGenerator reduce_to_reachable(const LindbladGenerator& gen, const std::vector<long>& seeds, long max_dim = 4096);

}  // namespace aqs
