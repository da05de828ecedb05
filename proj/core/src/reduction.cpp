#include "aqs/reduction.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace aqs {

namespace {

constexpr double kZero = 1e-15;

std::vector<int> digits(long index, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    d[i] = static_cast<int>(index % dims[i]);
    index /= dims[i];
  }
  return d;
}

long from_digits(const std::vector<int>& d, const std::vector<int>& dims) {
  long index = 0;
  for (size_t i = 0; i < dims.size(); ++i) index = index * dims[i] + d[i];
  return index;
}

}  // namespace

std::vector<std::pair<long, cplx>> apply_to_basis(const LocalOperator& op, const HilbertSpec& space, long index) {
  const std::vector<int>& dims = space.site_dims;
  std::vector<int> d = digits(index, dims);
  int col = 0;
  for (int s : op.support) col = col * dims[s] + d[s];
  std::vector<std::pair<long, cplx>> out;
  for (int row = 0; row < op.matrix.rows(); ++row) {
    const cplx a = op.matrix(row, col);
    if (std::abs(a) <= kZero) continue;
    int r = row;
    for (int k = static_cast<int>(op.support.size()) - 1; k >= 0; --k) {
      d[op.support[k]] = r % dims[op.support[k]];
      r /= dims[op.support[k]];
    }
    out.emplace_back(from_digits(d, dims), a);
  }
  return out;
}

BasisOperator basis_operator(const LocalOperator& op, const HilbertSpec& space) {
  const LocalOperator dag{op.matrix.adjoint(), op.support};
  return {[op, space](long k) { return apply_to_basis(op, space, k); },
          [dag, space](long k) { return apply_to_basis(dag, space, k); }};
}

int ReducedGenerator::index_of(long full) const {
  auto it = std::lower_bound(basis.begin(), basis.end(), full);
  return it != basis.end() && *it == full ? static_cast<int>(it - basis.begin()) : -1;
}

Mat ReducedGenerator::restrict_operator(const BasisOperator& op) const {
  Mat m = Mat::Zero(dim(), dim());
  for (int c = 0; c < dim(); ++c)
    for (const auto& [k, a] : op.apply(basis[c])) {
      const int r = index_of(k);
      if (r >= 0) m(r, c) += a;
    }
  return m;
}

Mat ReducedGenerator::restrict_operator(const LocalOperator& op) const { return restrict_operator(basis_operator(op, space)); }

Mat ReducedGenerator::basis_state(long full) const {
  const int i = index_of(full);
  if (i < 0) throw std::out_of_range("ReducedGenerator::basis_state: state outside the subspace");
  return basis_projector(dim(), i);
}

ReducedGenerator reduce_to_reachable(const HilbertSpec& space, const std::vector<BasisOperator>& hamiltonian,
                                     const std::vector<BasisOperator>& jumps, const std::vector<long>& seeds,
                                     long max_dim) {
  std::set<long> seen;
  std::deque<long> queue;
  auto visit = [&](long k) {
    if (seen.insert(k).second) {
      if (static_cast<long>(seen.size()) > max_dim) throw std::length_error("reduce_to_reachable: subspace exceeds max_dim");
      queue.push_back(k);
    }
  };
  for (long s : seeds) visit(s);
  while (!queue.empty()) {
    const long k = queue.front();
    queue.pop_front();
    for (const BasisOperator& h : hamiltonian)
      for (const auto& [o, a] : h.apply(k)) visit(o);
    for (const BasisOperator& l : jumps) {
      std::map<long, cplx> ldl;
      for (const auto& [o, a] : l.apply(k)) {
        visit(o);
        for (const auto& [o2, b] : l.apply_adjoint(o)) ldl[o2] += a * b;
      }
      for (const auto& [o, a] : ldl)
        if (std::abs(a) > kZero) visit(o);
    }
  }
  ReducedGenerator r;
  r.space = space;
  r.basis.assign(seen.begin(), seen.end());
  auto sparse = [&](const Mat& m) {
    SpMat s = m.sparseView(1.0, 1e-300);
    s.makeCompressed();
    return s;
  };
  Mat h = Mat::Zero(r.dim(), r.dim());
  for (const BasisOperator& t : hamiltonian) h += r.restrict_operator(t);
  std::vector<SpMat> ops;
  for (const BasisOperator& l : jumps) {
    SpMat s = sparse(r.restrict_operator(l));
    if (s.nonZeros() > 0) ops.push_back(std::move(s));
  }
  r.generator = CompiledGenerator(r.dim(), sparse(h), std::move(ops));
  return r;
}

ReducedGenerator reduce_to_reachable(const LindbladGenerator& gen, const std::vector<long>& seeds, long max_dim) {
  gen.validate();
  std::vector<BasisOperator> h, l;
  for (const LocalOperator& t : gen.hamiltonian_terms) h.push_back(basis_operator(t, gen.space));
  for (const LocalOperator& t : gen.jump_terms) l.push_back(basis_operator(t, gen.space));
  return reduce_to_reachable(gen.space, h, l, seeds, max_dim);
}

}  // namespace aqs
