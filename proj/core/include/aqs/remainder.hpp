#pragma once

#include <string>
#include <vector>

#include "aqs/analogue.hpp"

namespace aqs {

enum class Quadrature { Trapezoid, Cubic };

struct RemainderOptions {
  Quadrature quadrature = Quadrature::Cubic;
  double max_spacing = 0.05;
};

struct RemainderTerm {
  std::string id;  // e.g. "q[0]", "Q3[0,1]", "K1[0,2]"
  std::vector<double> norm;
};

struct RemainderReport {
  std::vector<double> times;  // simulator time
  std::vector<RemainderTerm> terms;
  std::vector<double> direct_norm;     // ||Tr_A L(rho) - w^2 L(Tr_A rho)||_1
  std::vector<double> assembled_norm;  // same quantity from the decomposition
  std::vector<double> fd_norm;         // central differences, NaN at the endpoints
  std::vector<double> mismatch;        // ||assembled - direct||_1
  std::vector<double> fd_mismatch;     // ||fd - direct||_1, NaN at the endpoints
  double max_mismatch = 0.0;           // over interior samples
  double max_fd_mismatch = 0.0;
  bool sufficient_sampling = true;
  std::string message;
};

// The trajectory must come from sim (combined states on a grid starting at 0
// with the ancillae in |0>).
RemainderReport remainder_diagnostics(const SimulatorGenerator& sim, const Trajectory& traj,
                                      const RemainderOptions& opt = {});

std::string remainder_csv(const RemainderReport& r);

}  // namespace aqs
