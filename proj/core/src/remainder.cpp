#include "aqs/remainder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace aqs {

namespace {

Mat comm(const Mat& a, const Mat& b) { return a * b - b * a; }
Mat plus_hc(const Mat& x) { return x + x.adjoint(); }

// Weights w_m with int_{a}^{b} e^{-2(b-s)} p(s) ds = sum_m w_m p(nodes[m]) for
// the Lagrange interpolant p through the given nodes.
std::vector<double> exp_weights(const std::vector<double>& nodes, double a, double b) {
  std::vector<double> w(nodes.size());
  for (size_t m = 0; m < nodes.size(); ++m) {
    auto f = [&](double s) {
      double l = 1.0;
      for (size_t j = 0; j < nodes.size(); ++j)
        if (j != m) l *= (s - nodes[j]) / (nodes[m] - nodes[j]);
      return std::exp(-2.0 * (b - s)) * l;
    };
    w[m] = boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
  }
  return w;
}

}  // namespace

RemainderReport remainder_diagnostics(const SimulatorGenerator& sim, const Trajectory& traj,
                                      const RemainderOptions& opt) {
  RemainderReport rep;
  rep.times = traj.times;
  const int n = static_cast<int>(traj.times.size());
  if (static_cast<int>(traj.states.size()) != n) throw std::invalid_argument("remainder: trajectory mismatch");
  const int min_points = opt.quadrature == Quadrature::Cubic ? 4 : 3;
  double hmax = 0.0;
  for (int k = 1; k < n; ++k) hmax = std::max(hmax, traj.times[k] - traj.times[k - 1]);
  if (n < min_points || hmax > opt.max_spacing * (1 + 1e-9) || traj.times.front() != 0.0) {
    rep.sufficient_sampling = false;
    std::ostringstream os;
    os << "insufficient sampling: " << n << " points, max spacing " << hmax << " (need >= " << min_points
       << " points from t=0, spacing <= " << opt.max_spacing << ")";
    rep.message = os.str();
    return rep;
  }

  const int m = sim.ancilla_count;
  const double w = sim.omega;
  const double delta = sim.delta;
  const int sd = sim.system_dim();
  const auto& tdims = sim.target.space.site_dims;

  Mat h = Mat::Zero(sd, sd);
  for (const auto& t : sim.target.hamiltonian_terms) h += Mat(embed(t.matrix, t.support, tdims));
  std::vector<Mat> l(m), ld(m);
  for (int a = 0; a < m; ++a) {
    l[a] = Mat(embed(sim.target.jump_terms[a].matrix, sim.target.jump_terms[a].support, tdims));
    ld[a] = l[a].adjoint();
  }
  std::vector<SpMat> s(m), sdg(m);
  for (int a = 0; a < m; ++a) {
    s[a] = ancilla_lowering(sim, a);
    sdg[a] = s[a].adjoint();
  }

  std::vector<CompiledGenerator> noise_gens;
  for (const auto& t : sim.noise) {
    LindbladGenerator g;
    g.space = sim.combined.space;
    g.hamiltonian_terms = t.hamiltonian;
    g.jump_terms = t.jumps;
    noise_gens.emplace_back(g);
  }
  const int nb = static_cast<int>(noise_gens.size());

  CompiledGenerator full(sim.combined);
  CompiledGenerator target(sim.target);
  auto tr = [&](const Mat& x) { return reduce_to_system(sim, x); };

  const Mat p0 = tr(traj.states.front());
  std::vector<Mat> q(m);
  Mat qsum = Mat::Zero(sd, sd);
  for (int a = 0; a < m; ++a) {
    q[a] = -dissipator(l[a], p0);
    qsum += q[a];
  }

  // term ids are laid out once, norms appended per sample
  std::vector<std::string> ids;
  for (int a = 0; a < m; ++a) ids.push_back("q[" + std::to_string(a) + "]");
  for (int a = 0; a < m; ++a) {
    ids.push_back("Q1[" + std::to_string(a) + "]");
    ids.push_back("Q2[" + std::to_string(a) + "]");
    for (int b = 0; b < m; ++b) ids.push_back("Q3[" + std::to_string(a) + "," + std::to_string(b) + "]");
    for (int b = 0; b < m; ++b) ids.push_back("Q4[" + std::to_string(a) + "," + std::to_string(b) + "]");
  }
  for (int b = 0; b < nb; ++b) ids.push_back("K0[" + std::to_string(b) + "]");
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < nb; ++b) {
      ids.push_back("K1[" + std::to_string(a) + "," + std::to_string(b) + "]");
      ids.push_back("K2[" + std::to_string(a) + "," + std::to_string(b) + "]");
    }
  for (const auto& id : ids) rep.terms.push_back({id, {}});

  std::vector<Mat> p(n), g(n), k0sum(n), direct(n);
  for (int k = 0; k < n; ++k) {
    const Mat& rho = traj.states[k];
    p[k] = tr(rho);
    std::vector<Mat> x(m), nn(m);
    std::vector<Mat> srho(m);
    for (int a = 0; a < m; ++a) {
      srho[a] = s[a] * rho;
      x[a] = tr(srho[a]);
      nn[a] = tr(sdg[a] * srho[a]);
    }
    std::vector<Mat> noise_rho(nb), k0(nb);
    k0sum[k] = Mat::Zero(sd, sd);
    for (int b = 0; b < nb; ++b) {
      noise_rho[b] = noise_gens[b].apply(rho);
      k0[b] = tr(noise_rho[b]);
      k0sum[k] += k0[b];
    }
    direct[k] = tr(full.apply(rho)) - w * w * target.apply(p[k]);

    std::vector<Mat> y(m);
    for (int a = 0; a < m; ++a) y[a] = comm(l[a], x[a].adjoint()) + comm(ld[a], x[a]);
    const Mat hp = comm(h, p[k]);

    size_t ti = 0;
    for (int a = 0; a < m; ++a) rep.terms[ti++].norm.push_back(trace_norm(q[a]));
    Mat gk = Mat::Zero(sd, sd);
    for (int a = 0; a < m; ++a) {
      const Mat q1 = plus_hc(-(1.0 / w) * comm(ld[a], comm(h, x[a])));
      const Mat q2 = plus_hc(cplx(0, -0.5) * comm(ld[a], l[a] * hp));
      gk += q1 + q2;
      rep.terms[ti++].norm.push_back(trace_norm(q1));
      rep.terms[ti++].norm.push_back(trace_norm(q2));
      for (int b = 0; b < m; ++b) {
        const Mat q3 = (I1 / w) * dissipator(l[a], y[b]);
        gk += q3;
        rep.terms[ti++].norm.push_back(trace_norm(q3));
      }
      for (int b = 0; b < m; ++b) {
        Mat q4;
        if (a == b) {
          q4 = (2.0 / (w * w)) * (dissipator(ld[a], nn[a]) - dissipator(l[a], nn[a]));
        } else {
          const Mat amat = tr(s[a] * (sdg[b] * rho));
          const Mat bmat = tr(s[a] * (s[b] * rho));
          q4 = plus_hc(-(1.0 / (w * w)) * (comm(ld[a], comm(l[b], amat)) + comm(ld[a], comm(ld[b], bmat))));
        }
        gk += q4;
        rep.terms[ti++].norm.push_back(trace_norm(q4));
      }
    }
    gk *= std::pow(w, 4);
    for (int b = 0; b < nb; ++b) rep.terms[ti++].norm.push_back(trace_norm(k0[b]));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < nb; ++b) {
        const Mat tab = tr(s[a] * noise_rho[b]);
        const Mat k1 = plus_hc(-I1 * comm(ld[a], tab));
        const Mat k2 = plus_hc(0.5 * comm(ld[a], l[a] * k0[b]));
        gk += delta * (w * k1 + w * w * k2);
        rep.terms[ti++].norm.push_back(trace_norm(k1));
        rep.terms[ti++].norm.push_back(trace_norm(k2));
      }
    g[k] = gk;
  }

  // C(t) = int_0^t e^{-2(t-s)} G(s) ds by the recursion C_{k+1} = e^{-2h} C_k + step integral
  std::vector<Mat> c(n, Mat::Zero(sd, sd));
  for (int k = 0; k + 1 < n; ++k) {
    const double a = traj.times[k], b = traj.times[k + 1];
    Mat inc = Mat::Zero(sd, sd);
    if (opt.quadrature == Quadrature::Trapezoid) {
      inc = 0.5 * (b - a) * (std::exp(-2.0 * (b - a)) * g[k] + g[k + 1]);
    } else {
      const int j0 = std::clamp(k - 1, 0, n - 4);
      std::vector<double> nodes(traj.times.begin() + j0, traj.times.begin() + j0 + 4);
      const auto wt = exp_weights(nodes, a, b);
      for (int j = 0; j < 4; ++j) inc += wt[j] * g[j0 + j];
    }
    c[k + 1] = std::exp(-2.0 * (b - a)) * c[k] + inc;
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < n; ++k) {
    const double t = traj.times[k];
    const Mat assembled = w * w * std::exp(-2.0 * t) * qsum + delta * k0sum[k] + c[k];
    rep.direct_norm.push_back(trace_norm(direct[k]));
    rep.assembled_norm.push_back(trace_norm(assembled));
    rep.mismatch.push_back(trace_norm(assembled - direct[k]));
    if (k > 0 && k + 1 < n) {
      const Mat fd = (p[k + 1] - p[k - 1]) / (traj.times[k + 1] - traj.times[k - 1]) - w * w * target.apply(p[k]);
      rep.fd_norm.push_back(trace_norm(fd));
      rep.fd_mismatch.push_back(trace_norm(fd - direct[k]));
      rep.max_mismatch = std::max(rep.max_mismatch, rep.mismatch.back());
      rep.max_fd_mismatch = std::max(rep.max_fd_mismatch, rep.fd_mismatch.back());
    } else {
      rep.fd_norm.push_back(nan);
      rep.fd_mismatch.push_back(nan);
    }
  }
  return rep;
}

std::string remainder_csv(const RemainderReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "t,term_id,norm\n";
  for (size_t k = 0; k < r.direct_norm.size(); ++k) {
    const double t = r.times[k];
    os << t << ",R_direct," << r.direct_norm[k] << "\n";
    os << t << ",R_assembled," << r.assembled_norm[k] << "\n";
    if (!std::isnan(r.fd_norm[k])) os << t << ",R_fd," << r.fd_norm[k] << "\n";
    for (const auto& term : r.terms) os << t << "," << term.id << "," << term.norm[k] << "\n";
  }
  return os.str();
}

}  // namespace aqs
