#include "aqs/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aqs {

Lattice::Lattice(std::vector<int> ext, std::vector<bool> per) : extent(std::move(ext)), periodic(std::move(per)) {
  for (int e : extent)
    if (e <= 0) throw std::invalid_argument("Lattice: extents must be positive");
  if (!periodic.empty() && periodic.size() != extent.size())
    throw std::invalid_argument("Lattice: periodic flags must match the dimension");
}

int Lattice::site_count() const {
  int n = 1;
  for (int e : extent) n *= e;
  return n;
}

std::vector<int> Lattice::coords(int site) const {
  if (site < 0 || site >= site_count()) throw std::out_of_range("Lattice: site index");
  std::vector<int> c(extent.size());
  for (int i = dimension() - 1; i >= 0; --i) {
    c[i] = site % extent[i];
    site /= extent[i];
  }
  return c;
}

int Lattice::index(const std::vector<int>& c) const {
  int s = 0;
  for (int i = 0; i < dimension(); ++i) {
    if (c[i] < 0 || c[i] >= extent[i]) throw std::out_of_range("Lattice: coordinate");
    s = s * extent[i] + c[i];
  }
  return s;
}

int Lattice::distance(int a, int b) const {
  const auto ca = coords(a), cb = coords(b);
  int d = 0;
  for (int i = 0; i < dimension(); ++i) {
    int diff = std::abs(ca[i] - cb[i]);
    if (!periodic.empty() && periodic[i]) diff = std::min(diff, extent[i] - diff);
    d += diff;
  }
  return d;
}

int set_distance(const Lattice& lat, const Support& a, const Support& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("set_distance: empty support");
  int d = std::numeric_limits<int>::max();
  for (int x : a)
    for (int y : b) d = std::min(d, lat.distance(x, y));
  return d;
}

int diameter(const Lattice& lat, const Support& s) {
  int d = 0;
  for (int x : s)
    for (int y : s) d = std::max(d, lat.distance(x, y));
  return d;
}

bool overlaps(const Support& a, const Support& b) {
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  return false;
}

int SupportFamily::boundary(const Support& s) const {
  int c = 0;
  for (const auto& t : supports) c += overlaps(s, t);
  return c;
}

int SupportFamily::degree() const {
  int z = 0;
  for (const auto& s : supports) z = std::max(z, boundary(s));
  return z;
}

int SupportFamily::range(const Lattice& lat) const {
  int a = 0;
  for (const auto& s : supports) a = std::max(a, diameter(lat, s));
  return a;
}

SupportFamily support_family(const LindbladGenerator& gen) {
  SupportFamily f;
  for (const auto& h : gen.hamiltonian_terms) f.supports.push_back(h.support);
  for (const auto& l : gen.jump_terms) f.supports.push_back(l.support);
  return f;
}

namespace {

double check_range(const Lattice& lat, const SupportFamily& fam) {
  const int a = fam.range(lat);
  if (a <= 0) throw std::invalid_argument("lr_bound: family range must be >= 1");
  return a;
}

}  // namespace

double lr_bound(const Lattice& lat, const SupportFamily& fam, const Support& s_k, const Support& s_o, double norm_k,
                double t) {
  const double a = check_range(lat, fam);
  const double z = fam.degree();
  return fam.eta(s_o) * norm_k * std::exp(4 * M_E * z * t - set_distance(lat, s_k, s_o) / a);
}

double lr_bound_two(const Lattice& lat, const SupportFamily& fam, const Support& x, const Support& y,
                    const Support& s_o, double norm_x, double norm_y, double t) {
  const double a = check_range(lat, fam);
  if (diameter(lat, x) > a || diameter(lat, y) > a)
    throw std::invalid_argument("lr_bound_two: diam(X) and diam(Y) must not exceed the interaction range");
  const double z = fam.degree();
  const double d = set_distance(lat, x, s_o) + set_distance(lat, y, s_o);
  return M_E * fam.eta(s_o) * norm_x * norm_y * std::exp(4 * M_E * z * t - d / (2 * a));
}

double lattice_sum_xi(const Lattice& lat, const SupportFamily& tilde, const Support& s, double lambda, double x,
                      double t, int m, int k) {
  if (k < 1 || (m != 0 && m != 1) || lambda <= 0 || x < 0)
    throw std::invalid_argument("lattice_sum_xi: need k >= 1, m in {0,1}, lambda > 0, x >= 0");
  std::vector<double> hist;
  for (const auto& st : tilde.supports) {
    const int d = set_distance(lat, s, st);
    if (d >= static_cast<int>(hist.size())) hist.resize(d + 1, 0.0);
    hist[d] += 1.0;
  }
  std::vector<double> acc = hist;
  for (int j = 1; j < k; ++j) {
    std::vector<double> next(acc.size() + hist.size() - 1, 0.0);
    for (size_t p = 0; p < acc.size(); ++p)
      for (size_t q = 0; q < hist.size(); ++q) next[p + q] += acc[p] * hist[q];
    acc.swap(next);
  }
  double sum = 0.0;
  for (size_t d = 0; d < acc.size(); ++d) {
    if (acc[d] == 0.0) continue;
    const double dm = m == 0 ? 1.0 : static_cast<double>(d);
    sum += acc[d] * dm * std::min(x * std::exp(t - d / lambda), 1.0);
  }
  return sum;
}

double series_x(int p, double lambda) {
  if (lambda <= 0) return p == 0 ? 1.0 : 0.0;
  // terms grow until n ~ p lambda, then decay geometrically
  double sum = 0.0;
  const double r = std::exp(-1.0 / lambda);
  double geo = 1.0;
  for (long n = 0;; ++n) {
    const double term = (n == 0 ? (p == 0 ? 1.0 : 0.0) : std::pow(static_cast<double>(n), p)) * geo;
    sum += term;
    if (n > p * lambda + 10 && term < 1e-17 * sum) break;
    geo *= r;
    if (geo == 0.0) break;
  }
  return sum;
}

double series_y(int m, double z, int dim) {
  const long top = static_cast<long>(std::ceil(z));
  double sum = 0.0;
  for (long n = 0; n <= top; ++n) {
    const double a = (m == 0) ? 1.0 : std::pow(static_cast<double>(n), m);
    const double b = (dim == 1) ? 1.0 : std::pow(static_cast<double>(n + dim - 1), dim - 1);
    sum += a * b;
  }
  return sum;
}

namespace {

// 0^0 = 1
double ipow(double base, int e) { return e == 0 ? 1.0 : std::pow(base, e); }

}  // namespace

double nu_bound(double lambda, double t, int m, double z_tilde, int s_size, int dim) {
  if (lambda < 0 || t < 0 || dim < 1 || (m != 0 && m != 1)) throw std::invalid_argument("nu_bound: bad arguments");
  const double lt = lambda * t;
  const double fl = std::floor(lt + 1e-12);
  const double ce = std::ceil(lt - 1e-12);
  double inner = series_y(m, ce, dim);
  double tail = 0.0;
  for (int sg = 0; sg <= 1; ++sg)
    for (int sgp = 0; sgp <= 1; ++sgp)
      tail += ipow(fl, (1 - sg) * m) * ipow(dim - 1 + fl, (1 - sgp) * (dim - 1)) *
              series_x(sg * m + sgp * (dim - 1), lambda);
  inner += std::pow(2.0, dim - 2) * tail;
  return std::pow(2.0, dim) * z_tilde * s_size / std::tgamma(dim) * inner;
}

double xi_upper_bound(double lambda, double x, double t, int m, int k, double z_tilde, int s_size, int dim) {
  const double nu0 = nu_bound(lambda, t, 0, z_tilde, s_size, dim);
  const double nu1 = nu_bound(lambda, t, 1, z_tilde, s_size, dim);
  return std::pow(std::max(x, 1.0), k) * std::pow(static_cast<double>(k), m) * std::pow(nu0, k - m) *
         std::pow(nu1, m);
}

}  // namespace aqs
