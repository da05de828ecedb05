#include "aqs/fermion_studies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/minima.hpp>

namespace aqs {

QuadraticModel target_chain(int n, const ChainParams& p) {
  return build_target_chain(n, p.k, p.j, p.lambda0, p.lambda1, p.periodic);
}

QuadraticModel noisy_simulator_chain(int n, const ChainParams& p, double omega, double delta) {
  return add_depolarizing(build_simulator_chain(target_chain(n, p), omega), delta);
}

double target_steady_density(int n, const ChainParams& p) {
  return observables(steady_state_covariance(target_chain(n, p))).density;
}

double simulator_steady_density(int n, const ChainParams& p, double omega, double delta) {
  return observables(steady_state_covariance(noisy_simulator_chain(n, p, omega, delta)), n).density;
}

double steady_density_error(int n, const ChainParams& p, double omega, double delta) {
  return std::abs(simulator_steady_density(n, p, omega, delta) - target_steady_density(n, p));
}

std::vector<int> alternating_occupation(int n) {
  std::vector<int> occ(n);
  for (int x = 0; x < n; ++x) occ[x] = (x + 1) % 2;
  return occ;
}

double transient_density_error(int n, const ChainParams& p, double omega, double t, const std::vector<int>& occupation) {
  if (static_cast<int>(occupation.size()) != n) throw std::invalid_argument("transient_density_error: occupation size");
  const QuadraticModel target = target_chain(n, p);
  const QuadraticModel sim = build_simulator_chain(target, omega);
  const RMat g0 = fock_covariance(occupation);
  RMat gs = RMat::Zero(2 * sim.modes, 2 * sim.modes);
  gs.topLeftCorner(2 * n, 2 * n) = g0;
  gs.bottomRightCorner(2 * (sim.modes - n), 2 * (sim.modes - n)) = vacuum_covariance(sim.modes - n);
  const double want = observables(evolve_covariance(target, g0, t)).density;
  const double got = observables(evolve_covariance(sim, gs, t / (omega * omega)), n).density;
  return std::abs(got - want);
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_linear: need >= 2 matching points");
  const int n = static_cast<int>(x.size());
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_linear: degenerate abscissae");
  LinearFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double sse = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  if (n > 2) {
    const boost::math::students_t dist(n - 2);
    f.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * std::sqrt(sse / (n - 2) / sxx);
  }
  return f;
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("fit_loglog: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_linear(lx, ly);
}

NoisyOptimum noisy_optimum(int n, const ChainParams& p, double delta, const std::vector<double>& omega_grid, bool refine) {
  if (omega_grid.size() < 3) throw std::invalid_argument("noisy_optimum: need >= 3 omega values");
  std::vector<double> grid = omega_grid;
  std::sort(grid.begin(), grid.end());
  const QuadraticModel target = target_chain(n, p);
  const double want = observables(steady_state_covariance(target)).density;
  auto error = [&](double w) {
    const QuadraticModel s = add_depolarizing(build_simulator_chain(target, w), delta);
    return std::abs(observables(steady_state_covariance(s), n).density - want);
  };
  NoisyOptimum o;
  o.delta = delta;
  o.omega_grid = grid;
  for (double w : grid) o.error_grid.push_back(error(w));
  const auto best = std::min_element(o.error_grid.begin(), o.error_grid.end()) - o.error_grid.begin();
  o.omega_opt = grid[best];
  o.error_min = o.error_grid[best];
  o.interior = best > 0 && best + 1 < static_cast<long>(grid.size());
  if (refine && o.interior) {
    auto f = [&](double lw) { return std::log(std::max(error(std::exp(lw)), 1e-300)); };
    const auto r = boost::math::tools::brent_find_minima(f, std::log(grid[best - 1]), std::log(grid[best + 1]), 30);
    if (std::exp(r.second) < o.error_min) {
      o.omega_opt = std::exp(r.first);
      o.error_min = std::exp(r.second);
    }
  }
  return o;
}

std::vector<double> correlation_profile(const RMat& cov, int lo, int hi, int max_r) {
  const int size = static_cast<int>(cov.rows());
  std::vector<double> c(max_r + 1, 0.0);
  for (int r = 0; r <= max_r; ++r) {
    double s = 0.0;
    int count = 0;
    for (int x = lo; x < hi && x + r < size; ++x) {
      s += std::abs(cov(x, x + r));
      ++count;
    }
    c[r] = count ? s / count : 0.0;
  }
  return c;
}

DecayFit fit_decay(const std::vector<double>& profile, int r_lo, int r_hi, double rel_floor) {
  double peak = 0.0;
  for (double v : profile) peak = std::max(peak, v);
  std::vector<double> r, y;
  int window = 0;
  for (int i = std::max(r_lo, 0); i <= r_hi && i < static_cast<int>(profile.size()); ++i, ++window)
    if (profile[i] > rel_floor * peak && profile[i] > 0) {
      r.push_back(i);
      y.push_back(std::log(profile[i]));
    }
  DecayFit d;
  d.points = static_cast<int>(r.size());
  if (d.points < 3) {
    // everything in the window sits below the floor: decayed
    if (window >= 3) d.length = 0.0;
    return d;
  }
  const LinearFit f = fit_linear(r, y);
  d.r2 = f.r2;
  d.length = f.slope < 0 ? -1.0 / f.slope : std::numeric_limits<double>::infinity();
  return d;
}

PhasePoint phase_point(const PhaseParams& p, double h, double delta) {
  const QuadraticModel m = build_boundary_chain(p.n, h, p.pairing_gamma, p.gamma_l, p.gamma_r, delta);
  const FermionObservables o = observables(steady_state_covariance(m));
  PhasePoint pt;
  pt.h = h;
  pt.delta = delta;
  pt.density = o.density;
  pt.covariance = o.covariance;
  const int half = p.n / 2;
  const std::vector<double> prof = correlation_profile(o.covariance, p.n / 4, 3 * p.n / 4, half);
  pt.full = fit_decay(prof, 1, half);
  pt.tail = fit_decay(prof, p.n / 8, half);
  pt.long_range = pt.tail.length >= p.n / 4.0;
  pt.signal = pt.tail.length >= p.n / 10.0;
  return pt;
}

}  // namespace aqs
