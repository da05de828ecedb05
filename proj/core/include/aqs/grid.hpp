#pragma once

#include <string>
#include <vector>

#include "aqs/circuit.hpp"
#include "aqs/reduction.hpp"

namespace aqs {

// Qudit levels, serialized as these integers.
enum Level : int { kZero = 0, kOne = 1, kZeroBar = 2, kOneBar = 3, kCross = 4, kDot = 5 };
constexpr int kGridLevels = 6;

const char* level_name(int level);

// Grid of `rows` (qubits, y = 1..N top to bottom) by `cols` (rounds, x = 1..R left to right).
// Site index of (x, y) is (y - 1) * cols + (x - 1); labels are indexed the same way.
struct GridShape {
  int rows = 0;
  int cols = 0;

  int sites() const { return rows * cols; }
  int site(int x, int y) const;
  bool inside(int x, int y) const { return x >= 1 && x <= cols && y >= 1 && y <= rows; }
  long basis_index(const std::vector<int>& labels) const;
  std::vector<int> labels(long index) const;
  HilbertSpec space() const { return {std::vector<int>(sites(), kGridLevels)}; }
};

// block on `sites` times the projectors onto the allowed levels of each check site
// (bit l of a mask set: level l passes). Factored so wide check windows stay cheap.
struct GridJump {
  std::string kind;  // "gate", "swap", "penalty", "init"
  int rule = 0;      // invalid-configuration family for penalties
  std::vector<int> sites;
  Mat block;
  std::vector<int> check_sites;
  std::vector<unsigned> check_masks;

  std::vector<int> support() const;
  std::vector<std::pair<long, cplx>> apply(const GridShape& g, long index, bool adjoint = false) const;
  BasisOperator basis_operator(const GridShape& g) const;
  // Dense operator on support(); dimension 6^|support|.
  LocalOperator local() const;
};

struct GridEncoding {
  GridShape shape;
  int output_row = 0;  // 1-based
  std::vector<GridJump> jumps;
  LocalOperator observable;  // |0bar><0bar| - |1bar><1bar| on (R, output_row)

  // Dense generator; only feasible for small grids.
  LindbladGenerator generator() const;
  std::vector<BasisOperator> basis_jumps() const;
  std::vector<int> initial_labels() const;  // column 1 in |0>, all else |dot>
  int count(const std::string& kind) const;
  // <labels| F |labels> with F = sum over penalties P^dag P (F is diagonal).
  double error_weight(const std::vector<int>& labels) const;
};

// output_row < 1 selects the last row.
GridEncoding encode_grid(const RoundCircuit& c, int output_row = -1);

// Number of configuration shapes the computation jumps visit from the initial state.
int grid_clock_count(int rows, int cols);

struct Violation {
  int rule = 0;  // 1..9
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
};
struct ConfigurationCheck {
  bool valid = true;
  std::vector<Violation> violations;
};
ConfigurationCheck validate_configuration(const GridShape& shape, const std::vector<int>& labels);

struct GridRunOptions {
  double dt = 1.0;
  double rate_tol = 1e-9;  // stop when ||rho(t + dt) - rho(t)||_1 / dt falls below this
  double time_cap = -1.0;  // default 50 N^3 R^3
  long max_reduced_dim = 4096;
};

struct GridRun {
  std::vector<double> times;
  std::vector<double> error_weight;  // <F(t)>
  std::vector<double> observable;    // Tr(O rho(t))
  double final_rate = 0.0;
  bool converged = false;
  int reduced_dim = 0;
  Mat state;  // on the reduced subspace
};

// Exact evolution from a basis configuration inside its reachable invariant subspace.
GridRun run_grid(const GridEncoding& enc, const std::vector<int>& initial_labels, const GridRunOptions& opt = {});

}  // namespace aqs
