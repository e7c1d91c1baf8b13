#include "mfhmc/theory.hpp"

#include <cmath>
#include <limits>

#include "mfhmc/errors.hpp"

namespace mfhmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Boundary saturation (e.g. T chosen so that L T^2 hits its bound) must not
// fail on the last bit of rounding.
constexpr double kPassSlack = 1e-12;

Condition make_condition(std::string name, std::string formula, double lhs, double rhs) {
  Condition c{std::move(name), std::move(formula), lhs, rhs, 0.0, false};
  if (lhs == 0.0)
    c.ratio = 0.0;
  else if (rhs == 0.0)
    c.ratio = kInf;
  else
    c.ratio = lhs / rhs;
  c.pass = lhs <= rhs * (1.0 + kPassSlack);
  return c;
}

double r_tilde(const AssumptionConstants& c) { return std::sqrt((2.0 * c.L + c.K) / (6.0 * c.K)) * c.R_conv; }

// 1 / (a * R~^2), +inf at R~ = 0.
double inv_r2(double a, double rt) { return rt > 0.0 ? 1.0 / (a * rt * rt) : kInf; }

double cond_T_rhs(const AssumptionConstants& c, double rt) { return 0.6 * std::min(0.25, 3.0 * inv_r2(1280.0 * c.L, rt)); }
double cond_CT_rhs(const AssumptionConstants& c, double rt) { return std::min(1.0 / 9.0, inv_r2(1296.0 * c.L, rt)); }

}  // namespace

std::vector<const Condition*> ConditionReport::all() const {
  return {&cond_T, &cond_eps, &cond_T_strong, &cond_eps_strong, &cond_t, &cond_C_eps, &cond_onestep, &cond_CT,
          &cond_Cepsi};
}

ConditionReport check_conditions(const AssumptionConstants& c, double epsilon, double T) {
  if (!(c.K > 0.0)) throw ConfigError("K must be positive");
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  const double rt = r_tilde(c);
  const double K = c.K, L = c.L;
  const double eL = epsilon * c.L_tilde;
  const double Le = L + 2.0 * eL;
  const double T2 = T * T;

  ConditionReport r;
  r.cond_T = make_condition("cond_T", "L T^2 <= (3/5) min(1/4, 3/(1280 L R~^2))", L * T2, cond_T_rhs(c, rt));
  r.cond_eps = make_condition("cond_eps", "eps L~ <= (5/64) K / sqrt(7/6 + 3/(2 K T^2)) exp(-5R~/(2T) - 5)", eL,
                              5.0 / 64.0 * K / std::sqrt(7.0 / 6.0 + 3.0 / (2.0 * K * T2)) *
                                  std::exp(-5.0 * rt / (2.0 * T) - 5.0));
  r.cond_T_strong = make_condition("cond_T_strong", "L T^2 <= 3/20", L * T2, 3.0 / 20.0);
  r.cond_eps_strong = make_condition("cond_eps_strong", "eps L~ <= (K/15) (7/6 + 3/(2 K T^2))^(-1/2)", eL,
                                     K / 15.0 / std::sqrt(7.0 / 6.0 + 3.0 / (2.0 * K * T2)));
  r.cond_t = make_condition("cond_t", "(L + 2 eps L~) T^2 <= 1/4", Le * T2, 0.25);
  r.cond_C_eps = make_condition("cond_C_eps", "eps L~ <= K/3", eL, K / 3.0);
  r.cond_onestep = make_condition("cond_onestep", "(L + 2 eps L~) T^2 <= 1", Le * T2, 1.0);
  r.cond_CT = make_condition("cond_CT", "(L + 2 eps L~) T^2 <= min(1/9, 1/(1296 L R~^2))", Le * T2, cond_CT_rhs(c, rt));
  r.cond_Cepsi = make_condition(
      "cond_Cepsi", "eps L~ <= min(K/3, 125 K / (624 sqrt(7 + 1/(K T^2))) exp(-5R~/(2T) - 5))", eL,
      std::min(K / 3.0, 125.0 * K / (624.0 * std::sqrt(7.0 + 1.0 / (K * T2))) * std::exp(-5.0 * rt / (2.0 * T) - 5.0)));
  r.strongly_convex = c.R_conv == 0.0;
  return r;
}

ConditionReport check_conditions(const MeanFieldModel& model, double T) {
  return check_conditions(model.constants(), model.interaction_strength(), T);
}

TheoryConstants compute_constants(const TheoryInputs& in) {
  const AssumptionConstants& c = in.constants;
  if (!(c.K > 0.0)) throw ConfigError("K must be positive");
  if (!(in.T > 0.0)) throw ConfigError("T must be positive");
  const double T = in.T, K = c.K, L = c.L, eps = in.epsilon, R = c.R_conv, W0 = c.W0;
  const double d = static_cast<double>(in.d);

  TheoryConstants out;
  out.R_tilde = r_tilde(c);
  out.R1 = 1.25 * (out.R_tilde + 2.0 * T);
  out.gamma = out.R_tilde > 0.0 ? std::min(1.0 / T, 1.0 / (4.0 * out.R_tilde)) : 1.0 / T;
  out.C_hat = (2.0 * L + K) * R * R;
  out.c_nhmc = K * T * T / 156.0 * std::exp(-5.0 * out.R_tilde / (4.0 * T));
  out.c_strongconvex = K * T * T / 8.0;
  out.c_uhmc = K * T * T / 156.0 * std::exp(-out.R_tilde / T);
  // A = 1/f'(R1) = exp(R1/T) = exp((5/4)(R~/T + 2)).
  out.f_prime_R1 = std::exp(-out.R1 / T);
  out.A = 1.0 / out.f_prime_R1;

  // Uniform second-moment bounds of the nonlinear chain and of the particle chain.
  const double drift = R * R * (2.0 * L + K) + 11.0 * d + 6.0 * eps * eps * W0 * W0 * T * T +
                       22.5 * eps * eps / K * W0 * W0;
  out.B1 = in.m2_init + 1280.0 / (13.0 * K) * drift;
  out.B2 = in.m2_init + 1280.0 / (13.0 * K) * drift;
  out.B = 4.0 * T * T * eps * c.L_tilde * std::sqrt(out.B1);
  out.B3 = in.B3;
  out.L_e = L + 2.0 * eps * c.L_tilde;
  out.C = std::pow(L, 0.75) * in.B3 * (T * std::sqrt(d) + std::sqrt(out.B2) + eps / K * W0) / out.c_uhmc;
  out.conditions = check_conditions(c, eps, T);
  return out;
}

TheoryConstants compute_constants(const MeanFieldModel& model, double T, double m2_init, double B3) {
  return compute_constants(TheoryInputs{model.constants(), model.interaction_strength(), T, model.dim(), m2_init, B3});
}

double max_admissible_T(const AssumptionConstants& c, double epsilon, ConditionSet set) {
  if (!(c.K > 0.0) || !(c.L > 0.0)) throw ConfigError("K and L must be positive");
  const double rt = r_tilde(c);
  const double Le = c.L + 2.0 * epsilon * c.L_tilde;
  double bound = 0.0;  // T^2 times the coefficient
  double coeff = c.L;
  switch (set) {
    case ConditionSet::nhmc: bound = cond_T_rhs(c, rt); break;
    case ConditionSet::strong_convex: bound = 3.0 / 20.0; break;
    case ConditionSet::uhmc:
      bound = cond_CT_rhs(c, rt);
      coeff = Le;
      break;
  }
  double T = std::sqrt(bound / coeff);
  while (coeff * T * T > bound) T = std::nextafter(T, 0.0);
  return T;
}

double max_admissible_T(const MeanFieldModel& model, ConditionSet set) {
  return max_admissible_T(model.constants(), model.interaction_strength(), set);
}

std::string complexity_scaling_expression() {
  return "N*m*T/h ~ (L/K)^(5/3) * acc^(-8/3) * (B4^(4/3) + (d/K)^(4/3) + (eps*W0/K)^(8/3)) * log(Delta0/acc)";
}

}  // namespace mfhmc
