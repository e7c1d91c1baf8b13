#include "mfhmc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "mfhmc/errors.hpp"
#include "mfhmc/integrators.hpp"
#include "mfhmc/parallel.hpp"
#include "mfhmc/statistics.hpp"

namespace mfhmc {

namespace {

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v, int) { return std::to_string(v); }

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (const auto& x : xs) {
    if (!s.empty()) s += ' ';
    s += fmt(x);
  }
  return s;
}

void append(ConfigEntries& to, const ConfigEntries& from, const std::string& prefix = "") {
  for (const auto& [k, v] : from) to.emplace_back(prefix + k, v);
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive and finite");
}

void require_nonzero(std::size_t v, const char* name) {
  if (v == 0) throw ConfigError(std::string(name) + " must be at least 1");
}

double h_from_rule(HRule rule, double eps_acc, double h_fixed) {
  switch (rule) {
    case HRule::eps_2_3: return std::pow(eps_acc, 2.0 / 3.0);
    case HRule::eps_1_2: return std::sqrt(eps_acc);
    case HRule::fixed: return h_fixed;
  }
  return h_fixed;
}

void write_theory_footer(std::ostream& out, const TheoryConstants& c) {
  out << "# theory R_tilde=" << fmt(c.R_tilde) << " R1=" << fmt(c.R1) << " gamma=" << fmt(c.gamma)
      << " c_uhmc=" << fmt(c.c_uhmc) << " c_nhmc=" << fmt(c.c_nhmc) << " c_strongconvex=" << fmt(c.c_strongconvex)
      << " A=" << fmt(c.A) << " B=" << fmt(c.B) << " C=" << fmt(c.C) << " L_e=" << fmt(c.L_e) << '\n';
  for (const Condition* cond : c.conditions.all())
    out << "# condition " << cond->name << " lhs=" << fmt(cond->lhs) << " rhs=" << fmt(cond->rhs)
        << " pass=" << (cond->pass ? "yes" : "no") << '\n';
}

}  // namespace

ConfigEntries ModelSpec::entries() const {
  ConfigEntries e{{"model", name}, {"eps", fmt(eps)}};
  if (name == "multiwell") {
    e.emplace_back("a", fmt(a));
    e.emplace_back("dim", fmt(dim));
    e.emplace_back("interaction", interaction ? "yes" : "no");
  }
  if (name == "shallow-net") e.emplace_back("data", data_path);
  return e;
}

MeanFieldModel build_model(const ModelSpec& spec) {
  if (spec.name == "gaussian") return gaussian_model(spec.eps);
  if (spec.name == "multiwell") return multiwell_model(spec.a, spec.dim, spec.eps, spec.interaction);
  if (spec.name == "shallow-net") {
    if (spec.data_path.empty()) throw ConfigError("shallow-net model needs a dataset (--data)");
    ShallowNetOptions options;
    options.epsilon = spec.eps;
    return shallow_net_model(read_shallow_net_csv(spec.data_path), options);
  }
  throw ConfigError("unknown model '" + spec.name + "'");
}

HRule parse_h_rule(const std::string& text) {
  if (text == "fixed") return HRule::fixed;
  if (text == "eps^(2/3)" || text == "eps23" || text == "2/3") return HRule::eps_2_3;
  if (text == "eps^(1/2)" || text == "eps12" || text == "1/2") return HRule::eps_1_2;
  throw ConfigError("unknown h-rule '" + text + "'");
}

std::string to_string(HRule rule) {
  switch (rule) {
    case HRule::fixed: return "fixed";
    case HRule::eps_2_3: return "eps^(2/3)";
    case HRule::eps_1_2: return "eps^(1/2)";
  }
  return "fixed";
}

double snap_step(double T, double h) {
  require_positive(T, "T");
  require_positive(h, "h");
  const double ratio = T / h;
  double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) n = std::ceil(ratio);
  return T / std::max(1.0, n);
}

InitKind parse_init_kind(const std::string& text) {
  if (text == "cold") return InitKind::cold;
  if (text == "normal") return InitKind::normal;
  if (text == "stationary") return InitKind::stationary;
  throw ConfigError("unknown init '" + text + "'");
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::cold: return "cold";
    case InitKind::normal: return "normal";
    case InitKind::stationary: return "stationary";
  }
  return "normal";
}

// ---------------------------------------------------------------- bias scan

ConfigEntries BiasScanConfig::entries() const {
  ConfigEntries e{{"seed", fmt(seed, 0)},       {"k_min", fmt(k_min)},   {"k_max", fmt(k_max)},
                  {"steps", fmt(steps)},        {"h_rule", to_string(h_rule)}, {"eps", fmt(epsilon)},
                  {"T", fmt(T)},                {"burn_in", fmt(burn_in)},
                  {"pool", all_particles ? "all particles" : "first particle"}};
  if (h_rule == HRule::fixed) e.emplace_back("h", fmt(h_fixed));
  return e;
}

BiasScanResult bias_scan(const BiasScanConfig& config) {
  require_nonzero(config.steps, "steps");
  if (config.k_min == 0 || config.k_max < config.k_min || config.k_max > 5)
    throw ConfigError("bias scan needs 1 <= k_min <= k_max <= 5");
  if (!(config.burn_in >= 0.0 && config.burn_in < 1.0)) throw ConfigError("burn-in fraction must be in [0, 1)");
  require_positive(config.T, "T");
  if (config.h_rule == HRule::fixed) require_positive(config.h_fixed, "h");
  const MeanFieldModel model = gaussian_model(config.epsilon);
  const std::size_t count = config.k_max - config.k_min + 1;
  const std::size_t burn = static_cast<std::size_t>(std::floor(config.burn_in * static_cast<double>(config.steps)));

  BiasScanResult result;
  result.rows.resize(count);
  parallel_for(count, config.threads, [&](std::size_t idx) {
    const std::size_t k = config.k_min + idx;
    BiasRow row;
    row.k = k;
    row.eps_acc = std::ldexp(1.0, -static_cast<int>(k));
    row.N = std::size_t{1} << (2 * k);
    row.h = snap_step(config.T, h_from_rule(config.h_rule, row.eps_acc, config.h_fixed));
    row.steps = config.steps;

    RngStream stream = RngStream::for_chain(config.seed, k);
    RngStream init_stream = stream.derive(0);
    const auto x0 = initial_state(model, row.N, InitKind::normal, init_stream);
    KernelParams params{config.T, row.h, 1};
    BinnedKde pooled;
    run_chain_observed(model, x0, KernelKind::uhmc, config.steps, params, stream,
                       [&](std::size_t step, std::span<const double> x) {
                         if (step <= burn) return;
                         if (config.all_particles)
                           for (double v : x) pooled.add(v);
                         else
                           pooled.add(x[0]);
                       });
    row.kde_rel_error = pooled.relative_error();
    row.variance = pooled.variance();
    result.rows[idx] = row;
  });

  std::vector<double> lx, ly;
  for (const auto& r : result.rows) {
    lx.push_back(std::log2(r.eps_acc));
    ly.push_back(std::log2(r.kde_rel_error));
  }
  result.slope = lx.size() >= 2 ? linear_fit(lx, ly).slope : std::numeric_limits<double>::quiet_NaN();
  return result;
}

void write_bias_csv(std::ostream& out, const BiasScanConfig& config, const BiasScanResult& result) {
  write_reproducibility_header(out, "bias-scan", config.entries());
  out << "k,eps_acc,N,h,steps,kde_rel_error\n";
  for (const auto& r : result.rows) {
    CsvRow row;
    row << r.k << r.eps_acc << r.N << r.h << r.steps << r.kde_rel_error;
    out << row.str() << '\n';
  }
  out << "# slope_log2_error_vs_log2_eps_acc: " << fmt(result.slope) << '\n';
  for (const auto& r : result.rows)
    out << "# pooled_variance k=" << r.k << ": " << fmt(r.variance) << '\n';
}

void write_bias_svg(std::ostream& out, const BiasScanResult& result) {
  SvgSeries measured{{}, {}, "KDE relative error", false};
  SvgSeries guide{{}, {}, "slope 1 guide (2^-k)", true};
  const double anchor = result.rows.empty() ? 1.0 : result.rows.front().kde_rel_error / result.rows.front().eps_acc;
  for (const auto& r : result.rows) {
    measured.x.push_back(static_cast<double>(r.k));
    measured.y.push_back(r.kde_rel_error);
    guide.x.push_back(static_cast<double>(r.k));
    guide.y.push_back(anchor * r.eps_acc);
  }
  write_svg_log_plot(out, "Asymptotic bias of uHMC", "k (accuracy 2^-k)", "relative L1 error of KDE",
                     {measured, guide});
}

// --------------------------------------------------------------- chaos scan

ConfigEntries ChaosScanConfig::entries() const {
  return {{"seed", fmt(seed, 0)}, {"N_list", join(N_list)}, {"steps", fmt(steps)},
          {"replicas", fmt(replicas)}, {"eps", fmt(epsilon)}, {"T", fmt(T)}};
}

ChaosScanResult chaos_scan(const ChaosScanConfig& config) {
  require_nonzero(config.steps, "steps");
  if (config.replicas < 2) throw ConfigError("chaos scan needs at least 2 replicas");
  if (config.N_list.empty()) throw ConfigError("chaos scan needs at least one N");
  for (std::size_t N : config.N_list)
    if (N < 2) throw ConfigError("every N in the chaos scan must be at least 2");
  require_positive(config.T, "T");
  if (!(config.epsilon >= 0.0 && config.epsilon < 1.0)) throw InvalidModel("Gaussian epsilon must lie in [0, 1)");

  const std::size_t n_points = config.N_list.size();
  const std::size_t R = config.replicas;
  const std::size_t m = config.steps;
  std::vector<double> var_rep(n_points * R), meanvar_rep(n_points * R);
  std::vector<std::vector<double>> first(n_points * R);

  parallel_for(n_points * R, config.threads, [&](std::size_t task) {
    const std::size_t point = task / R, r = task % R;
    const std::size_t N = config.N_list[point];
    RngStream stream = RngStream::for_chain(config.seed, N).derive(r);
    std::vector<double> x = stationary_gaussian_sample(config.epsilon, N, stream);
    KernelWorkspace ws;
    double sum_sq = 0.0, sum_mean_sq = 0.0;
    auto& firsts = first[task];
    firsts.reserve(m);
    for (std::size_t step = 1; step <= m; ++step) {
      xhmc_step_gaussian_inplace(config.epsilon, x, config.T, stream, ws);
      double s = 0.0, s2 = 0.0;
      for (double v : x) {
        s += v;
        s2 += v * v;
      }
      const double mean = s / static_cast<double>(N);
      sum_sq += s2 / static_cast<double>(N);
      sum_mean_sq += mean * mean;
      firsts.push_back(x[0]);
    }
    var_rep[task] = sum_sq / static_cast<double>(m);
    meanvar_rep[task] = sum_mean_sq / static_cast<double>(m);
  });

  ChaosScanResult result;
  for (std::size_t point = 0; point < n_points; ++point) {
    const std::size_t N = config.N_list[point];
    ChaosRow row;
    row.N = N;
    const auto v = mean_with_stderr(std::span<const double>(var_rep).subspan(point * R, R));
    const auto mv = mean_with_stderr(std::span<const double>(meanvar_rep).subspan(point * R, R));
    row.var_hat = v.mean;
    row.var_se = v.se;
    row.var_err = std::abs(v.mean - 1.0);
    row.var_exact = 1.0 + config.epsilon / (static_cast<double>(N) * (1.0 - config.epsilon));
    row.mean_coord_var = mv.mean;
    row.mean_coord_var_se = mv.se;
    row.mean_coord_var_exact = 1.0 / ((1.0 - config.epsilon) * static_cast<double>(N));

    std::vector<double> pooled;
    pooled.reserve(R * m);
    for (std::size_t r = 0; r < R; ++r) {
      const auto& f = first[point * R + r];
      pooled.insert(pooled.end(), f.begin(), f.end());
    }
    RngStream reference = RngStream::for_chain(config.seed, N).derive(std::numeric_limits<std::uint64_t>::max());
    std::vector<double> exact(pooled.size());
    reference.fill_normal(exact);
    row.w1_marginal = wasserstein1_1d(pooled, exact);
    result.rows.push_back(row);
  }

  std::vector<double> ns, emp, ana;
  for (const auto& r : result.rows) {
    ns.push_back(static_cast<double>(r.N));
    emp.push_back(r.var_err);
    ana.push_back(r.var_exact - 1.0);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool can_fit = ns.size() >= 3 && std::all_of(emp.begin(), emp.end(), [](double e) { return e > 0.0; });
  result.slope_empirical = can_fit ? loglog_slope(ns, emp).slope : nan;
  result.slope_analytic = (ns.size() >= 3 && config.epsilon > 0.0) ? loglog_slope(ns, ana).slope : nan;
  return result;
}

void write_chaos_csv(std::ostream& out, const ChaosScanConfig& config, const ChaosScanResult& result) {
  write_reproducibility_header(out, "chaos-scan", config.entries());
  out << "N,var_err,mean_coord_var,w1_marginal,var_hat,var_se,var_exact,mean_coord_var_se,mean_coord_var_exact\n";
  for (const auto& r : result.rows) {
    CsvRow row;
    row << r.N << r.var_err << r.mean_coord_var << r.w1_marginal << r.var_hat << r.var_se << r.var_exact
        << r.mean_coord_var_se << r.mean_coord_var_exact;
    out << row.str() << '\n';
  }
  out << "# slope_var_err_vs_N_empirical: " << fmt(result.slope_empirical) << '\n';
  out << "# slope_var_err_vs_N_analytic: " << fmt(result.slope_analytic) << '\n';
}

// -------------------------------------------------------------- contraction

ConfigEntries ContractionConfig::entries() const {
  ConfigEntries e{{"seed", fmt(seed, 0)}};
  append(e, model.entries());
  append(e, {{"N", fmt(N)},
             {"T", T > 0 ? fmt(T) : "auto"},
             {"h", h > 0 ? fmt(h) : "auto"},
             {"steps", fmt(steps)},
             {"replicas", fmt(replicas)},
             {"offset", fmt(offset)},
             {"coupling", synchronous ? "synchronous" : "reflection"}});
  return e;
}

ContractionResult contraction_experiment(const ContractionConfig& config) {
  require_nonzero(config.steps, "steps");
  require_nonzero(config.N, "N");
  const MeanFieldModel model = build_model(config.model);
  ContractionResult result;
  result.T = config.T > 0 ? config.T : max_admissible_T(model, ConditionSet::uhmc);
  require_positive(result.T, "T");
  result.h = config.h > 0 ? config.h : result.T / 10.0;
  KernelParams params{result.T, result.h, 1};
  params.validate();

  const auto d = static_cast<double>(model.dim());
  result.theory = compute_constants(model, result.T, d);
  const auto& conds = result.theory.conditions;
  result.conditions_hold = conds.cond_CT.pass && conds.cond_Cepsi.pass;
  for (const Condition* c : {&conds.cond_CT, &conds.cond_Cepsi})
    if (!c->pass)
      result.warnings.push_back("condition " + c->name + " fails: " + fmt(c->lhs) + " > " + fmt(c->rhs));

  const CouplingParams cp = config.synchronous ? CouplingParams::synchronous(result.T)
                                               : CouplingParams::make(result.theory.R_tilde, result.T);
  ContractionOptions options;
  options.steps = config.steps;
  options.replicas = config.replicas;
  options.threads = config.threads;
  options.R1 = result.theory.R1;
  const std::size_t N = config.N;
  const double offset = config.offset;
  PairSampler init = [&](std::size_t, RngStream& stream) {
    std::vector<double> x = initial_state(model, N, InitKind::normal, stream);
    std::vector<double> y = x;
    for (double& v : y) v += offset;
    return std::make_pair(std::move(x), std::move(y));
  };
  result.table = estimate_contraction(model, params, cp, options, init, config.seed);
  const double rho0 = result.table.mean_rho.front();
  for (std::size_t k = 0; k < result.table.mean_rho.size(); ++k)
    result.bound.push_back(result.theory.A * std::exp(-result.theory.c_uhmc * static_cast<double>(k)) * rho0);
  return result;
}

void write_contraction_csv(std::ostream& out, const ContractionConfig& config, const ContractionResult& result) {
  auto entries = config.entries();
  entries.emplace_back("T_used", fmt(result.T));
  entries.emplace_back("h_used", fmt(result.h));
  write_reproducibility_header(out, "contraction", entries);
  for (const auto& w : result.warnings) out << "# warning: " << w << '\n';
  out << "step,mean_rhoN,stderr,bound\n";
  for (std::size_t k = 0; k < result.table.mean_rho.size(); ++k) {
    CsvRow row;
    row << k << result.table.mean_rho[k] << result.table.stderr_rho[k] << result.bound[k];
    out << row.str() << '\n';
  }
  out << "# fitted_decay_factor: " << fmt(result.table.decay_factor) << '\n';
  out << "# fitted_decay_factor_se: " << fmt(result.table.decay_factor_se) << '\n';
  out << "# theory_decay_factor_1_minus_c_uhmc: " << fmt(1.0 - result.theory.c_uhmc) << '\n';
  out << "# branches synchronous=" << result.table.branches.synchronous << " shift=" << result.table.branches.shift
      << " reflection=" << result.table.branches.reflection << '\n';
  write_theory_footer(out, result.theory);
}

// -------------------------------------------------------------- order check

ConfigEntries OrderCheckConfig::entries() const {
  return {{"seed", fmt(seed, 0)}, {"h_list", join(h_list)}, {"T", fmt(T)},
          {"N", fmt(N)},         {"eps", fmt(epsilon)},    {"replicas", fmt(replicas)}};
}

OrderCheckResult order_check(const OrderCheckConfig& config) {
  if (config.h_list.empty()) throw ConfigError("order check needs at least one h");
  require_nonzero(config.replicas, "replicas");
  require_nonzero(config.N, "N");
  std::vector<IntegratorParams> integrators;
  for (double h : config.h_list) integrators.emplace_back(config.T, h);

  const MeanFieldModel model = gaussian_model(config.epsilon);
  const double L_e = compute_constants(model, config.T, 1.0).L_e;
  const std::size_t H = config.h_list.size(), R = config.replicas, N = config.N;
  std::vector<double> errors(H * R);

  parallel_for(R, config.threads, [&](std::size_t r) {
    RngStream base = RngStream::for_chain(config.seed, r);
    RngStream init = base.derive(0);
    std::vector<double> q0 = stationary_gaussian_sample(config.epsilon, N, init);
    std::vector<double> p0 = init.normal_vector(N);
    std::vector<double> qe = q0, pe = p0, scratch;
    exact_gaussian_flow_inplace(config.epsilon, qe, pe, config.T, scratch);
    IntegratorWorkspace ws;
    for (std::size_t j = 0; j < H; ++j) {
      RngStream stream = base.derive(j + 1);
      std::vector<double> q = q0, p = p0;
      randomized_flow_inplace(model, q, p, integrators[j], stream, ws);
      double sum = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double dq = q[i] - qe[i], dp = p[i] - pe[i];
        sum += std::sqrt(dq * dq + dp * dp / L_e);
      }
      errors[j * R + r] = sum / static_cast<double>(N);
    }
  });

  OrderCheckResult result;
  std::vector<double> hs, es;
  for (std::size_t j = 0; j < H; ++j) {
    const auto s = mean_with_stderr(std::span<const double>(errors).subspan(j * R, R));
    OrderRow row;
    row.h = config.h_list[j];
    row.mean_weighted_error = s.mean;
    row.stderr_error = s.se;
    row.theory_bound = 5.0 * std::pow(std::sqrt(L_e) * row.h, 1.5);
    result.rows.push_back(row);
    hs.push_back(row.h);
    es.push_back(row.mean_weighted_error);
  }
  result.slope = hs.size() >= 3 ? loglog_slope(hs, es).slope : std::numeric_limits<double>::quiet_NaN();
  return result;
}

void write_order_csv(std::ostream& out, const OrderCheckConfig& config, const OrderCheckResult& result) {
  write_reproducibility_header(out, "order-check", config.entries());
  out << "h,mean_weighted_error,stderr,theory_bound\n";
  for (const auto& r : result.rows) {
    CsvRow row;
    row << r.h << r.mean_weighted_error << r.stderr_error << r.theory_bound;
    out << row.str() << '\n';
  }
  out << "# loglog_slope: " << fmt(result.slope) << '\n';
}

// ------------------------------------------------------------------- sample

ConfigEntries SampleConfig::entries() const {
  ConfigEntries e{{"seed", fmt(seed, 0)}};
  append(e, model.entries());
  append(e, {{"N", fmt(N)},
             {"T", fmt(T)},
             {"h", h > 0 ? fmt(h) : "exact"},
             {"steps", fmt(steps)},
             {"thin", fmt(thin)},
             {"init", to_string(init)},
             {"cold_value", fmt(cold_value)},
             {"coords", coords ? fmt(coords) : "all"}});
  return e;
}

void sample_command(const SampleConfig& config, std::ostream& out) {
  require_nonzero(config.N, "N");
  KernelParams params{config.T, config.h, config.thin};
  params.validate();
  const MeanFieldModel model = build_model(config.model);
  const KernelKind kind = config.h > 0 ? KernelKind::uhmc : KernelKind::xhmc;
  if (kind == KernelKind::xhmc && !model.gaussian_epsilon())
    throw ConfigError("the exact flow (h = 0) is only available for the Gaussian model");

  RngStream stream = RngStream::for_chain(config.seed, 0);
  RngStream init_stream = stream.derive(0);
  const auto x0 = initial_state(model, config.N, config.init, init_stream, config.cold_value);
  const std::size_t total = x0.size();
  const std::size_t width = config.coords ? std::min(config.coords, total) : total;

  write_reproducibility_header(out, "sample", config.entries());
  out << "step";
  for (std::size_t c = 1; c <= width; ++c) out << ",x_" << c;
  out << '\n';
  run_chain_observed(model, x0, kind, config.steps, params, stream,
                     [&](std::size_t step, std::span<const double> x) {
                       if (step % config.thin != 0) return;
                       CsvRow row;
                       row << step;
                       for (std::size_t c = 0; c < width; ++c) row << x[c];
                       out << row.str() << '\n';
                     });
  write_theory_footer(out, compute_constants(model, config.T, mean_square(x0, model.dim())));
}

// ---------------------------------------------------------------- constants

ConfigEntries ConstantsConfig::entries() const {
  ConfigEntries e = model.entries();
  append(e, {{"T", T > 0 ? fmt(T) : "auto"}, {"m2_init", m2_init > 0 ? fmt(m2_init) : "d"}, {"B3", fmt(B3)}});
  return e;
}

ConstantsReport constants_report(const ConstantsConfig& config) {
  const MeanFieldModel model = build_model(config.model);
  ConstantsReport report;
  report.model = model.name();
  report.epsilon = model.interaction_strength();
  report.T = config.T > 0 ? config.T : max_admissible_T(model, ConditionSet::uhmc);
  report.assumptions = model.constants();
  const double m2 = config.m2_init > 0 ? config.m2_init : static_cast<double>(model.dim());
  report.theory = compute_constants(model, report.T, m2, config.B3);
  return report;
}

namespace {

struct NamedValue {
  const char* name;
  double value;
  const char* formula;
};

std::vector<NamedValue> constant_rows(const ConstantsReport& r) {
  const auto& a = r.assumptions;
  const auto& t = r.theory;
  return {
      {"K", a.K, "co-coercivity outside the ball"},
      {"L1", a.L1, "Lipschitz constant of grad V"},
      {"L2", a.L2, "co-coercivity constant"},
      {"L", a.L, "max(L1, L2)"},
      {"L_tilde", a.L_tilde, "Lipschitz constant of grad W"},
      {"R", a.R_conv, "radius of non-convexity"},
      {"W0", a.W0, "|grad_1 W(0,0)|"},
      {"strength", r.epsilon, "interaction strength multiplying W"},
      {"T", r.T, "duration"},
      {"C_hat", t.C_hat, "(2L+K) R^2"},
      {"R_tilde", t.R_tilde, "sqrt((2L+K)/(6K)) R"},
      {"R1", t.R1, "(5/4)(R_tilde + 2T)"},
      {"gamma", t.gamma, "min(1/T, 1/(4 R_tilde))"},
      {"c_nhmc", t.c_nhmc, "(K T^2/156) exp(-5 R_tilde/(4T))"},
      {"c_strongconvex", t.c_strongconvex, "K T^2/8"},
      {"c_uhmc", t.c_uhmc, "(K T^2/156) exp(-R_tilde/T)"},
      {"A", t.A, "exp((5/4)(R_tilde/T + 2))"},
      {"f_prime_R1", t.f_prime_R1, "exp(-R1/T)"},
      {"B1", t.B1, "second-moment bound along the chain"},
      {"B", t.B, "4 T^2 eps L_tilde sqrt(B1)"},
      {"B2", t.B2, "particle second-moment bound"},
      {"B3", t.B3, "numerical constant of the uHMC bound"},
      {"C", t.C, "c_uhmc^-1 L^(3/4) B3 (T sqrt(d) + sqrt(B2) + (eps/K) W0)"},
      {"L_e", t.L_e, "L + 2 eps L_tilde"},
  };
}

}  // namespace

void write_constants_table(std::ostream& out, const ConstantsConfig& config, const ConstantsReport& report) {
  write_reproducibility_header(out, "constants", config.entries());
  if (!report.assumptions.certified)
    out << "# note: assumption constants are numerical estimates, not certified bounds\n";
  out << "name,value,formula\n";
  for (const auto& row : constant_rows(report))
    out << row.name << ',' << fmt(row.value) << ",\"" << row.formula << "\"\n";
  out << "condition,lhs,rhs,ratio,pass,formula\n";
  for (const Condition* c : report.theory.conditions.all())
    out << c->name << ',' << fmt(c->lhs) << ',' << fmt(c->rhs) << ',' << fmt(c->ratio) << ','
        << (c->pass ? "yes" : "no") << ",\"" << c->formula << "\"\n";
  out << "# strongly_convex: " << (report.theory.conditions.strongly_convex ? "yes" : "no") << '\n';
  out << "# complexity: " << complexity_scaling_expression() << '\n';
}

void write_constants_json(std::ostream& out, const ConstantsConfig& config, const ConstantsReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["tool"] = std::string("meanfield-hmc ") + kVersion;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : config.entries()) cfg[k] = v;
  j["config"] = cfg;
  j["model"] = report.model;
  j["certified"] = report.assumptions.certified;
  ordered_json constants = ordered_json::object();
  for (const auto& row : constant_rows(report))
    constants[row.name] = {{"value", row.value}, {"formula", row.formula}};
  j["constants"] = constants;
  ordered_json conditions = ordered_json::array();
  for (const Condition* c : report.theory.conditions.all())
    conditions.push_back({{"name", c->name},
                          {"formula", c->formula},
                          {"lhs", c->lhs},
                          {"rhs", c->rhs},
                          {"ratio", std::isfinite(c->ratio) ? ordered_json(c->ratio) : ordered_json("inf")},
                          {"pass", c->pass}});
  j["conditions"] = conditions;
  j["strongly_convex"] = report.theory.conditions.strongly_convex;
  j["complexity"] = complexity_scaling_expression();
  out << j.dump(2) << '\n';
}

}  // namespace mfhmc
