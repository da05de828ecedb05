#include "aqs/grid.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace aqs {

namespace {

Mat proj(int level) { return basis_projector(kGridLevels, level); }
Mat flip(int to, int from) { return ket_bra(kGridLevels, to, from); }

bool is_unbarred(int l) { return l == kZero || l == kOne; }
bool is_barred(int l) { return l == kZeroBar || l == kOneBar; }
bool is_qubit(int l) { return is_unbarred(l) || is_barred(l); }

struct Check {
  int x, y;
  unsigned mask;
};

unsigned bits(std::initializer_list<int> levels) {
  unsigned m = 0;
  for (int l : levels) m |= 1u << l;
  return m;
}

const unsigned kUnbarredMask = bits({kZero, kOne});
const unsigned kBarredMask = bits({kZeroBar, kOneBar});
const unsigned kCrossMask = bits({kCross});
const unsigned kDotMask = bits({kDot});

// Hermitian jump block + block^dag on the active sites, with the checks that fall inside the grid.
GridJump computation_jump(const GridShape& g, const std::string& kind, const std::vector<std::pair<int, int>>& active,
                          const Mat& block, const std::vector<Check>& checks) {
  GridJump j;
  j.kind = kind;
  j.block = (block + block.adjoint()).eval();
  for (const auto& [x, y] : active) j.sites.push_back(g.site(x, y));
  for (const Check& c : checks) {
    if (!g.inside(c.x, c.y)) continue;
    j.check_sites.push_back(g.site(c.x, c.y));
    j.check_masks.push_back(c.mask);
  }
  return j;
}

// Penalty |keep, t><keep, old| / sqrt(#targets) for each target t, changing the second site.
void add_pair_penalties(GridEncoding& e, int rule, int x1, int y1, int x2, int y2, const std::vector<int>& keep,
                        const std::vector<int>& old, const std::vector<int>& targets) {
  const double c = 1.0 / std::sqrt(static_cast<double>(targets.size()));
  for (int k : keep)
    for (int o : old)
      for (int t : targets) {
        GridJump j;
        j.kind = "penalty";
        j.rule = rule;
        j.sites = {e.shape.site(x1, y1), e.shape.site(x2, y2)};
        j.block = c * kron(proj(k), flip(t, o));
        e.jumps.push_back(std::move(j));
      }
}

void add_single(GridEncoding& e, const std::string& kind, int rule, int x, int y, const Mat& block) {
  GridJump j;
  j.kind = kind;
  j.rule = rule;
  j.sites = {e.shape.site(x, y)};
  j.block = block;
  e.jumps.push_back(std::move(j));
}

void add_site_penalties(GridEncoding& e, int x, int y, int old) {
  for (int t : {kZero, kOne, kZeroBar, kOneBar}) add_single(e, "penalty", 9, x, y, 0.5 * flip(t, old));
}

}  // namespace

const char* level_name(int level) {
  static const char* names[] = {"0", "1", "0bar", "1bar", "cross", "dot"};
  if (level < 0 || level >= kGridLevels) throw std::out_of_range("level_name");
  return names[level];
}

int GridShape::site(int x, int y) const {
  if (!inside(x, y)) throw std::out_of_range("GridShape::site: coordinate outside the grid");
  return (y - 1) * cols + (x - 1);
}

long GridShape::basis_index(const std::vector<int>& labels) const {
  if (static_cast<int>(labels.size()) != sites()) throw DimensionMismatch("GridShape::basis_index: label count");
  long index = 0;
  for (int l : labels) {
    if (l < 0 || l >= kGridLevels) throw std::out_of_range("GridShape::basis_index: level");
    index = index * kGridLevels + l;
  }
  return index;
}

std::vector<int> GridShape::labels(long index) const {
  std::vector<int> out(sites());
  for (int i = sites() - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % kGridLevels);
    index /= kGridLevels;
  }
  return out;
}

std::vector<int> GridJump::support() const {
  std::vector<int> s = sites;
  s.insert(s.end(), check_sites.begin(), check_sites.end());
  return s;
}

std::vector<std::pair<long, cplx>> GridJump::apply(const GridShape& g, long index, bool adjoint) const {
  std::vector<int> l = g.labels(index);
  for (size_t c = 0; c < check_sites.size(); ++c)
    if (!((check_masks[c] >> l[check_sites[c]]) & 1u)) return {};
  int col = 0;
  for (int s : sites) col = col * kGridLevels + l[s];
  std::vector<std::pair<long, cplx>> out;
  for (int row = 0; row < block.rows(); ++row) {
    const cplx a = adjoint ? std::conj(block(col, row)) : block(row, col);
    if (a == 0.0) continue;
    int r = row;
    for (int k = static_cast<int>(sites.size()) - 1; k >= 0; --k) {
      l[sites[k]] = r % kGridLevels;
      r /= kGridLevels;
    }
    out.emplace_back(g.basis_index(l), a);
  }
  return out;
}

BasisOperator GridJump::basis_operator(const GridShape& g) const {
  return {[j = *this, g](long k) { return j.apply(g, k); }, [j = *this, g](long k) { return j.apply(g, k, true); }};
}

LocalOperator GridJump::local() const {
  Mat m = block;
  for (unsigned mask : check_masks) {
    Mat p = Mat::Zero(kGridLevels, kGridLevels);
    for (int l = 0; l < kGridLevels; ++l)
      if ((mask >> l) & 1u) p(l, l) = 1.0;
    m = kron(m, p);
  }
  return {m, support()};
}

LindbladGenerator GridEncoding::generator() const {
  LindbladGenerator g;
  g.space = shape.space();
  for (const GridJump& j : jumps) g.jump_terms.push_back(j.local());
  return g;
}

std::vector<BasisOperator> GridEncoding::basis_jumps() const {
  std::vector<BasisOperator> out;
  for (const GridJump& j : jumps) out.push_back(j.basis_operator(shape));
  return out;
}

std::vector<int> GridEncoding::initial_labels() const {
  std::vector<int> l(shape.sites(), kDot);
  for (int y = 1; y <= shape.rows; ++y) l[shape.site(1, y)] = kZero;
  return l;
}

int GridEncoding::count(const std::string& kind) const {
  int n = 0;
  for (const GridJump& j : jumps) n += j.kind == kind;
  return n;
}

double GridEncoding::error_weight(const std::vector<int>& labels) const {
  const long index = shape.basis_index(labels);
  double f = 0.0;
  for (const GridJump& j : jumps)
    if (j.kind == "penalty")
      for (const auto& [k, a] : j.apply(shape, index)) f += std::norm(a);
  return f;
}

GridEncoding encode_grid(const RoundCircuit& c, int output_row) {
  c.validate();
  const int n = c.qubits, r = c.round_count();
  if (r < 1) throw std::invalid_argument("encode_grid: circuit has no rounds");
  GridEncoding e;
  e.shape = {n, r};
  e.output_row = output_row < 1 ? n : output_row;
  if (e.output_row > n) throw std::invalid_argument("encode_grid: output row out of range");
  const GridShape& g = e.shape;

  for (int x = 1; x <= r; ++x) {
    const RoundCircuit::Round& round = c.rounds[x - 1];
    Mat a1 = Mat::Zero(kGridLevels, kGridLevels);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) a1(kZeroBar + a, b) = round.single(a, b);
    e.jumps.push_back(
        computation_jump(g, "gate", {{x, 1}}, a1, {{x - 1, 1, kCrossMask}, {x + 1, 1, kDotMask}, {x, 2, kUnbarredMask}}));
    for (int y = 1; y < n; ++y) {
      const Mat& u = round.pairs[y - 1];
      Mat a2 = Mat::Zero(kGridLevels * kGridLevels, kGridLevels * kGridLevels);
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
          for (int b = 0; b < 2; ++b)
            for (int bp = 0; bp < 2; ++bp)
              a2((kZeroBar + a) * kGridLevels + kZeroBar + ap, (kZeroBar + b) * kGridLevels + bp) = u(2 * a + ap, 2 * b + bp);
      e.jumps.push_back(computation_jump(g, "gate", {{x, y}, {x, y + 1}}, a2,
                                         {{x - 1, y + 1, kCrossMask}, {x + 1, y + 1, kDotMask}, {x, y + 2, kUnbarredMask}}));
    }
  }

  // column x hands its row y over to column x + 1; rows are handed over bottom first
  for (int x = 1; x < r; ++x)
    for (int y = 1; y <= n; ++y) {
      Mat s = Mat::Zero(kGridLevels * kGridLevels, kGridLevels * kGridLevels);
      for (int a = 0; a < 2; ++a) s += kron(flip(kCross, kZeroBar + a), flip(a, kDot));
      e.jumps.push_back(computation_jump(g, "swap", {{x, y}, {x + 1, y}}, s,
                                         {{x - 1, y, kCrossMask},
                                          {x + 2, y, kDotMask},
                                          {x, y - 1, kBarredMask},
                                          {x + 1, y - 1, kDotMask},
                                          {x, y + 1, kCrossMask},
                                          {x + 1, y + 1, kUnbarredMask}}));
    }

  const std::vector<int> u{kZero, kOne}, b{kZeroBar, kOneBar}, q{kZero, kOne, kZeroBar, kOneBar};
  const std::vector<int> X{kCross}, D{kDot};
  for (int y = 1; y <= n; ++y)
    for (int x = 2; x <= r; ++x) {
      auto h = [&](int rule, const std::vector<int>& l, const std::vector<int>& o, const std::vector<int>& t) {
        add_pair_penalties(e, rule, x - 1, y, x, y, l, o, t);
      };
      h(1, D, q, D);
      h(2, q, X, D);
      h(3, D, X, D);
      h(3, X, D, {kCross, kZero, kOne, kZeroBar, kOneBar});
      h(4, q, q, D);
    }
  for (int y = 2; y <= n; ++y)
    for (int x = 1; x <= r; ++x) {
      auto v = [&](int rule, const std::vector<int>& top, const std::vector<int>& o, const std::vector<int>& t) {
        add_pair_penalties(e, rule, x, y - 1, x, y, top, o, t);
      };
      v(5, D, b, {kDot, kZero, kOne});
      v(5, X, b, X);
      v(5, u, b, u);
      v(6, u, D, u);
      v(6, u, X, u);
      v(7, D, X, {kDot, kZero, kOne});
      v(7, X, D, X);
      v(8, b, D, {kCross, kZero, kOne, kZeroBar, kOneBar});
      v(8, X, u, X);
    }
  for (int y = 1; y <= n; ++y) {
    add_site_penalties(e, 1, y, kDot);
    add_site_penalties(e, r, y, kCross);
  }

  for (int y = 1; y <= n; ++y) add_single(e, "init", 0, 1, y, flip(kZero, kOne));
  e.observable = {proj(kZeroBar) - proj(kOneBar), {g.site(r, e.output_row)}};
  return e;
}

int grid_clock_count(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid_clock_count: positive sizes");
  // initial shape, N gates per round, N hand-overs between rounds
  return 1 + rows * cols + rows * (cols - 1);
}

ConfigurationCheck validate_configuration(const GridShape& g, const std::vector<int>& labels) {
  if (static_cast<int>(labels.size()) != g.sites()) throw DimensionMismatch("validate_configuration: label count");
  ConfigurationCheck out;
  auto at = [&](int x, int y) { return labels[g.site(x, y)]; };
  auto flag = [&](int rule, int x1, int y1, int x2, int y2) {
    out.valid = false;
    out.violations.push_back({rule, x1, y1, x2, y2});
  };
  for (int y = 1; y <= g.rows; ++y)
    for (int x = 2; x <= g.cols; ++x) {
      const int l = at(x - 1, y), r = at(x, y);
      if (l == kDot && is_qubit(r)) flag(1, x - 1, y, x, y);
      if (is_qubit(l) && r == kCross) flag(2, x - 1, y, x, y);
      if ((l == kDot && r == kCross) || (l == kCross && r == kDot)) flag(3, x - 1, y, x, y);
      if (is_qubit(l) && is_qubit(r)) flag(4, x - 1, y, x, y);
    }
  for (int y = 2; y <= g.rows; ++y)
    for (int x = 1; x <= g.cols; ++x) {
      const int t = at(x, y - 1), b = at(x, y);
      if (is_barred(b) && !is_barred(t)) flag(5, x, y - 1, x, y);
      if (is_unbarred(t) && (b == kDot || b == kCross)) flag(6, x, y - 1, x, y);
      if ((t == kDot && b == kCross) || (t == kCross && b == kDot)) flag(7, x, y - 1, x, y);
      if ((is_barred(t) && b == kDot) || (t == kCross && is_unbarred(b))) flag(8, x, y - 1, x, y);
    }
  for (int y = 1; y <= g.rows; ++y) {
    if (at(1, y) == kDot) flag(9, 1, y, 1, y);
    if (at(g.cols, y) == kCross) flag(9, g.cols, y, g.cols, y);
  }
  return out;
}

GridRun run_grid(const GridEncoding& enc, const std::vector<int>& initial_labels, const GridRunOptions& opt) {
  if (!(opt.dt > 0)) throw std::invalid_argument("run_grid: dt > 0");
  const double n = enc.shape.rows, r = enc.shape.cols;
  const double cap = opt.time_cap > 0 ? opt.time_cap : 50.0 * n * n * n * r * r * r;
  const ReducedGenerator red = reduce_to_reachable(enc.shape.space(), {}, enc.basis_jumps(),
                                                  {enc.shape.basis_index(initial_labels)}, opt.max_reduced_dim);
  RVec f(red.dim());
  for (int i = 0; i < red.dim(); ++i) f(i) = enc.error_weight(enc.shape.labels(red.basis[i]));
  const Mat o = red.restrict_operator(enc.observable);

  GridRun run;
  run.reduced_dim = red.dim();
  Mat rho = red.basis_state(enc.shape.basis_index(initial_labels));
  auto record = [&](double t) {
    run.times.push_back(t);
    run.error_weight.push_back((rho.diagonal().real().array() * f.array()).sum());
    run.observable.push_back((o * rho).trace().real());
  };
  record(0.0);
  const bool dense = static_cast<long>(red.dim()) * red.dim() <= 1024;
  std::optional<DensePropagator> prop;
  if (dense) prop.emplace(red.generator, opt.dt);
  PropagationOptions popt;
  popt.tol = 1e-12;
  for (double t = 0.0; t < cap;) {
    Mat next = dense ? prop->step(rho) : evolve(red.generator, rho, opt.dt, popt);
    next = 0.5 * (next + next.adjoint()).eval();
    run.final_rate = trace_norm_distance(next, rho) / opt.dt;
    rho = std::move(next);
    t += opt.dt;
    record(t);
    if (run.final_rate <= opt.rate_tol) {
      run.converged = true;
      break;
    }
  }
  run.state = rho;
  return run;
}

}  // namespace aqs
