#pragma once

#include <optional>
#include <string>
#include <vector>

namespace aqs {

// Closed-form simulator budgets. Every Theta/O expression is evaluated with
// constant 1; `asymptotic` marks values that are scalings only.
struct Budget {
  std::string kind;
  double omega = 0.0;
  double t_sim = 0.0;
  double precision = 0.0;  // target precision (input) or predicted precision (noisy kinds)
  bool asymptotic = true;
  std::vector<std::string> warnings;
};

Budget prop1_budget(int m, double h_norm, double t, double eps);

struct LocalBudgetParams {
  int d = 1;
  std::optional<double> t;
  std::optional<double> gamma;
  std::optional<double> kappa;
  std::optional<double> eps;
  std::optional<double> delta;
};

// kind: prop2_summary, prop2_analysis, prop3, prop3_fixed_point, prop5, prop6, prop6_fixed_point
Budget prop_budget_local(const std::string& kind, const LocalBudgetParams& p);

std::vector<std::string> local_budget_kinds();

}  // namespace aqs
