#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mfhmc/model.hpp"

namespace mfhmc {

/// One admissibility inequality lhs <= rhs.
struct Condition {
  std::string name;
  std::string formula;
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs / rhs; 0 when lhs is 0, +inf when rhs is 0 < lhs.
  double ratio = 0.0;
  bool pass = false;
};

struct ConditionReport {
  Condition cond_T;           ///< nHMC duration condition
  Condition cond_eps;         ///< nHMC interaction condition
  Condition cond_T_strong;    ///< strongly convex duration condition
  Condition cond_eps_strong;  ///< strongly convex interaction condition
  Condition cond_t;           ///< (L + 2 eps L~) T^2 <= 1/4 (flow and moment bounds)
  Condition cond_C_eps;       ///< eps L~ <= K/3
  Condition cond_onestep;     ///< (L + 2 eps L~) T^2 <= 1 (one-step chaos bound)
  Condition cond_CT;          ///< uHMC duration condition
  Condition cond_Cepsi;       ///< uHMC interaction condition
  /// The strongly convex corollary also needs R_conv = 0.
  bool strongly_convex = false;

  std::vector<const Condition*> all() const;
};

struct TheoryConstants {
  double R_tilde = 0.0;
  double R1 = 0.0;
  double gamma = 0.0;
  double C_hat = 0.0;
  double c_nhmc = 0.0;
  double c_strongconvex = 0.0;
  double c_uhmc = 0.0;
  double A = 0.0;
  double f_prime_R1 = 0.0;
  double B1 = 0.0;
  double B = 0.0;
  double B2 = 0.0;
  double B3 = 1.0;
  double C = 0.0;
  double L_e = 0.0;
  ConditionReport conditions;
};

struct TheoryInputs {
  AssumptionConstants constants;
  double epsilon = 0.0;  ///< interaction strength
  double T = 1.0;
  std::size_t d = 1;
  double m2_init = 0.0;  ///< initial second moment E[N^{-1} sum |x^i|^2]
  /// Unspecified numerical constant in the uHMC complexity bound; C scales linearly in it.
  double B3 = 1.0;
};

/// Throws ConfigError for K <= 0 or T <= 0.
TheoryConstants compute_constants(const TheoryInputs& in);
TheoryConstants compute_constants(const MeanFieldModel& model, double T, double m2_init, double B3 = 1.0);

ConditionReport check_conditions(const AssumptionConstants& constants, double epsilon, double T);
ConditionReport check_conditions(const MeanFieldModel& model, double T);

enum class ConditionSet { nhmc, strong_convex, uhmc };

/// Largest T satisfying the duration conditions of `set`. The interaction
/// conditions only loosen as T grows, so they cannot cap T; check them at the
/// returned value.
double max_admissible_T(const AssumptionConstants& constants, double epsilon, ConditionSet set);
double max_admissible_T(const MeanFieldModel& model, ConditionSet set);

/// Gradient-evaluation scaling of uHMC under strongly convex confinement, as a
/// human-readable proportionality (no absolute constant is available).
std::string complexity_scaling_expression();

}  // namespace mfhmc
