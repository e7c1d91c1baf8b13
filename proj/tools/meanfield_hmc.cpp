#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "mfhmc/errors.hpp"
#include "mfhmc/experiments.hpp"

using namespace mfhmc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

struct ModelFlags {
  std::string name = "gaussian";
  std::optional<double> eps;
  double a = 1.0;
  std::size_t dim = 1;
  bool no_interaction = false;
  std::string data;

  void attach(CLI::App* app) {
    app->add_option("--model", name, "gaussian, multiwell or shallow-net")
        ->check(CLI::IsMember({"gaussian", "multiwell", "shallow-net"}));
    app->add_option("--eps", eps, "interaction strength (default 1/4, shallow-net 1)");
    app->add_option("--a", a, "multiwell depth parameter");
    app->add_option("--dim", dim, "multiwell dimension");
    app->add_flag("--no-interaction", no_interaction, "multiwell without the pairwise term");
    app->add_option("--data", data, "shallow-net dataset CSV (header y,z_1,...)");
  }

  ModelSpec spec() const {
    ModelSpec s;
    s.name = name;
    s.eps = eps.value_or(name == "shallow-net" ? 1.0 : 0.25);
    s.a = a;
    s.dim = dim;
    s.interaction = !no_interaction;
    s.data_path = data;
    return s;
  }
};

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::size_t threads = 1;

  void attach(CLI::App* app, bool threaded = true) {
    app->add_option("--seed", seed, "random seed");
    app->add_option("--out", out, "output path (default: standard output)");
    if (threaded) app->add_option("--threads", threads, "worker threads (0 = all cores)");
  }
};

/// Writes `text` to `path`, or standard output when `path` is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  file << text;
  if (!file) throw ConfigError("failed writing output file '" + path + "'");
}

std::string svg_path(const std::string& out) {
  if (out.empty()) return "bias_scan.svg";
  const auto dot = out.find_last_of('.');
  const auto slash = out.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return out.substr(0, dot) + ".svg";
  return out + ".svg";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field unadjusted HMC sampler and verification experiments"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("meanfield-hmc ") + kVersion);

  // sample
  auto* sample = app.add_subcommand("sample", "run one chain and write its states");
  ModelFlags sample_model;
  Common sample_common;
  SampleConfig sample_cfg;
  std::string sample_init = "normal";
  sample_model.attach(sample);
  sample_common.attach(sample, false);
  sample->add_option("--N", sample_cfg.N, "number of particles");
  sample->add_option("--T", sample_cfg.T, "duration");
  sample->add_option("--h", sample_cfg.h, "time step; 0 runs the exact flow (Gaussian model)");
  sample->add_option("--steps", sample_cfg.steps, "number of transitions");
  sample->add_option("--thin", sample_cfg.thin, "record every thin-th state");
  sample->add_option("--init", sample_init, "cold, normal or stationary");
  sample->add_option("--cold-value", sample_cfg.cold_value, "coordinate value for the cold start");
  sample->add_option("--coords", sample_cfg.coords, "write only the first k coordinates");

  // bias-scan
  auto* bias = app.add_subcommand("bias-scan", "asymptotic bias against the accuracy level");
  Common bias_common;
  BiasScanConfig bias_cfg;
  std::string h_rule = "eps^(2/3)";
  std::optional<double> bias_h;
  bool bias_plot = false;
  bias_common.attach(bias);
  bias->add_option("--k-min", bias_cfg.k_min, "smallest k (accuracy 2^-k)");
  bias->add_option("--k-max", bias_cfg.k_max, "largest k, at most 5");
  bias->add_option("--steps", bias_cfg.steps, "transitions per scan point");
  bias->add_option("--h-rule", h_rule, "eps^(2/3), eps^(1/2) or fixed");
  bias->add_option("--h", bias_h, "time step for the fixed rule");
  bias->add_option("--eps", bias_cfg.epsilon, "Gaussian interaction parameter");
  bias->add_option("--T", bias_cfg.T, "duration");
  bias->add_option("--burn-in", bias_cfg.burn_in, "discarded fraction of steps");
  bias->add_flag("--all-particles", bias_cfg.all_particles, "pool every particle, not only the first");
  bias->add_flag("--plot", bias_plot, "also write an SVG plot next to the CSV");

  // chaos-scan
  auto* chaos = app.add_subcommand("chaos-scan", "marginal error of the particle system against N");
  Common chaos_common;
  ChaosScanConfig chaos_cfg;
  chaos_common.attach(chaos);
  chaos->add_option("--N", chaos_cfg.N_list, "particle counts")->delimiter(',');
  chaos->add_option("--steps", chaos_cfg.steps, "transitions per replica");
  chaos->add_option("--replicas", chaos_cfg.replicas, "independent chains per N");
  chaos->add_option("--eps", chaos_cfg.epsilon, "Gaussian interaction parameter");
  chaos->add_option("--T", chaos_cfg.T, "duration");

  // contraction
  auto* contraction = app.add_subcommand("contraction", "decay of the coupling distance");
  ModelFlags contraction_model;
  Common contraction_common;
  ContractionConfig contraction_cfg;
  contraction_model.attach(contraction);
  contraction_common.attach(contraction);
  contraction->add_option("--N", contraction_cfg.N, "number of particles");
  contraction->add_option("--T", contraction_cfg.T, "duration (default: largest admissible)");
  contraction->add_option("--h", contraction_cfg.h, "time step (default T/10)");
  contraction->add_option("--steps", contraction_cfg.steps, "coupled transitions");
  contraction->add_option("--replicas", contraction_cfg.replicas, "coupled pairs");
  contraction->add_option("--offset", contraction_cfg.offset, "initial shift x' = x + offset");
  contraction->add_flag("--synchronous", contraction_cfg.synchronous, "synchronous instead of reflection coupling");

  // order-check
  auto* order = app.add_subcommand("order-check", "strong error of the randomized integrator");
  Common order_common;
  OrderCheckConfig order_cfg;
  order_common.attach(order);
  order->add_option("--h", order_cfg.h_list, "time steps")->delimiter(',');
  order->add_option("--T", order_cfg.T, "duration");
  order->add_option("--N", order_cfg.N, "number of particles");
  order->add_option("--eps", order_cfg.epsilon, "Gaussian interaction parameter");
  order->add_option("--replicas", order_cfg.replicas, "initial conditions per h");

  // constants
  auto* constants = app.add_subcommand("constants", "theory constants and condition margins");
  ModelFlags constants_model;
  ConstantsConfig constants_cfg;
  std::string constants_out;
  bool json = false;
  constants_model.attach(constants);
  constants->add_option("--T", constants_cfg.T, "duration (default: largest admissible)");
  constants->add_option("--m2", constants_cfg.m2_init, "initial second moment (default d)");
  constants->add_option("--B3", constants_cfg.B3, "numerical constant of the uHMC bound");
  constants->add_option("--out", constants_out, "output path (default: standard output)");
  constants->add_flag("--json", json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    std::ostringstream text;
    if (*sample) {
      sample_cfg.model = sample_model.spec();
      sample_cfg.init = parse_init_kind(sample_init);
      sample_cfg.seed = sample_common.seed;
      if (sample_common.out.empty()) {
        sample_command(sample_cfg, std::cout);
      } else {
        std::ofstream file(sample_common.out, std::ios::binary);
        if (!file) throw ConfigError("cannot open output file '" + sample_common.out + "'");
        sample_command(sample_cfg, file);
        if (!file) throw ConfigError("failed writing output file '" + sample_common.out + "'");
      }
    } else if (*bias) {
      bias_cfg.h_rule = parse_h_rule(h_rule);
      if (bias_h) {
        bias_cfg.h_fixed = *bias_h;
        if (bias->count("--h-rule") == 0) bias_cfg.h_rule = HRule::fixed;
      }
      bias_cfg.seed = bias_common.seed;
      bias_cfg.threads = bias_common.threads;
      const auto result = bias_scan(bias_cfg);
      write_bias_csv(text, bias_cfg, result);
      emit(bias_common.out, text.str());
      if (bias_plot) {
        std::ostringstream svg;
        write_bias_svg(svg, result);
        emit(svg_path(bias_common.out), svg.str());
      }
    } else if (*chaos) {
      chaos_cfg.seed = chaos_common.seed;
      chaos_cfg.threads = chaos_common.threads;
      write_chaos_csv(text, chaos_cfg, chaos_scan(chaos_cfg));
      emit(chaos_common.out, text.str());
    } else if (*contraction) {
      contraction_cfg.model = contraction_model.spec();
      contraction_cfg.seed = contraction_common.seed;
      contraction_cfg.threads = contraction_common.threads;
      const auto result = contraction_experiment(contraction_cfg);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      write_contraction_csv(text, contraction_cfg, result);
      emit(contraction_common.out, text.str());
    } else if (*order) {
      order_cfg.seed = order_common.seed;
      order_cfg.threads = order_common.threads;
      write_order_csv(text, order_cfg, order_check(order_cfg));
      emit(order_common.out, text.str());
    } else if (*constants) {
      constants_cfg.model = constants_model.spec();
      const auto report = constants_report(constants_cfg);
      if (json)
        write_constants_json(text, constants_cfg, report);
      else
        write_constants_table(text, constants_cfg, report);
      emit(constants_out, text.str());
    }
  } catch (const IntegrationDiverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
