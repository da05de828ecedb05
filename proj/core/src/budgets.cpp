#include "aqs/budgets.hpp"

#include <cmath>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace aqs {

namespace {

double need(const std::optional<double>& v, const char* name, const std::string& kind) {
  if (!v) throw std::invalid_argument(kind + ": missing parameter '" + name + "'");
  if (!(*v > 0)) throw std::invalid_argument(kind + ": parameter '" + std::string(name) + "' must be > 0");
  return *v;
}

}  // namespace

Budget prop1_budget(int m, double h_norm, double t, double eps) {
  if (m <= 0 || h_norm < 0 || !(t > 0) || !(eps > 0))
    throw std::invalid_argument("prop1_budget: need M > 0, ||H|| >= 0, t > 0, eps > 0");
  Budget b;
  b.kind = "prop1";
  b.precision = eps;
  const double denom = m + 4.0 * m * h_norm * t + 4.0 * m * m * t;
  b.omega = std::sqrt(eps / denom);
  if (b.omega > 1.0) {
    b.warnings.push_back("omega capped at 1 (eps exceeds the error budget denominator)");
    spdlog::warn("prop1_budget: omega = {:.4g} > 1, capping at 1", b.omega);
    b.omega = 1.0;
  }
  b.t_sim = t / (b.omega * b.omega);
  return b;
}

std::vector<std::string> local_budget_kinds() {
  return {"prop2_summary", "prop2_analysis", "prop3", "prop3_fixed_point", "prop5", "prop6", "prop6_fixed_point"};
}

Budget prop_budget_local(const std::string& kind, const LocalBudgetParams& p) {
  if (p.d < 1) throw std::invalid_argument(kind + ": lattice dimension must be >= 1");
  const double d = p.d;
  Budget b;
  b.kind = kind;
  b.asymptotic = true;
  if (kind == "prop2_summary") {
    const double t = need(p.t, "t", kind), eps = need(p.eps, "eps", kind);
    b.omega = std::pow(t, -(d + 0.5)) * std::sqrt(eps);
    b.t_sim = std::pow(t, 2 * d + 2) / eps;
    b.precision = eps;
  } else if (kind == "prop2_analysis") {
    const double t = need(p.t, "t", kind), eps = need(p.eps, "eps", kind);
    b.omega = std::pow(t, -(2 * d + 1)) * std::sqrt(eps);
    b.t_sim = std::pow(t, 4 * d + 3) / eps;
    b.precision = eps;
  } else if (kind == "prop3" || kind == "prop3_fixed_point") {
    const double g = need(p.gamma, "gamma", kind), eps = need(p.eps, "eps", kind);
    if (!p.kappa || *p.kappa < 0) throw std::invalid_argument(kind + ": missing parameter 'kappa'");
    const double k1 = *p.kappa + 1;
    b.omega = std::pow(g, (d + 0.5) * k1) * std::sqrt(eps);
    if (kind == "prop3") {
      const double t = need(p.t, "t", kind);
      b.t_sim = t * std::pow(g, -(2 * d + 1) * k1) / eps;
    } else {
      b.t_sim = std::pow(g, -(2 * d + 2) * k1) / eps * std::log(1.0 / eps);
    }
    b.precision = eps;
  } else if (kind == "prop5") {
    const double t = need(p.t, "t", kind), delta = need(p.delta, "delta", kind);
    b.omega = std::pow(delta, 0.25);
    b.precision = std::sqrt(delta) * std::pow(t, 2 * d + 1);
    b.t_sim = t / std::sqrt(delta);
  } else if (kind == "prop6" || kind == "prop6_fixed_point") {
    const double g = need(p.gamma, "gamma", kind), delta = need(p.delta, "delta", kind);
    if (!p.kappa || *p.kappa < 0) throw std::invalid_argument(kind + ": missing parameter 'kappa'");
    const double k1 = *p.kappa + 1;
    b.omega = std::pow(delta, 0.25);
    b.precision = std::sqrt(delta) * std::pow(g, -k1 * (2 * d + 1));
    if (kind == "prop6") {
      const double t = need(p.t, "t", kind);
      b.t_sim = t / std::sqrt(delta);
    } else {
      b.t_sim = std::pow(g, -k1) / std::sqrt(delta) * (std::log(1.0 / delta) + std::log(1.0 / g));
    }
  } else {
    throw std::invalid_argument("unknown budget kind '" + kind + "'");
  }
  return b;
}

}  // namespace aqs
