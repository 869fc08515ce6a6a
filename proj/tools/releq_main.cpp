// Command-line driver: strata tables, relative-equilibrium solving and
// analysis, and the genericity experiment, configured by flags or a JSON
// configuration file. Exit codes: 0 success, 1 task failure, 2 bad
// configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "releq/report.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  bool quiet = false;
  std::int64_t seed = -1;  // overrides task seeds when >= 0
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path,
                  "JSON configuration file (overrides other flags)");
  cmd->add_option("--seed", args->seed, "Override every task seed");
  cmd->add_option("--out", args->out_path, "Write the JSON report here");
  cmd->add_flag("--quiet", args->quiet, "Suppress the stdout summary");
}

releq::RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw releq::ConfigError("cannot open config file '" + path + "'");
  nlohmann::ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw releq::ConfigError(std::string("config is not valid JSON: ") +
                             e.what());
  }
  return releq::parse_config(doc);
}

int execute(releq::RunConfig config, const CommonArgs& args,
            const std::string& wanted) {
  if (!args.config_path.empty()) {
    // A configuration file drives the run completely: its task list is
    // executed in order and the subcommand's own flags are ignored.
    config = load_config(args.config_path);
    if (config.tasks.empty())
      throw releq::ConfigError("config has no tasks");
    (void)wanted;
  }
  if (args.seed >= 0)
    for (auto& t : config.tasks) {
      t.seed = static_cast<std::uint64_t>(args.seed);
      t.has_seed = true;
    }
  if (!args.out_path.empty()) config.output = args.out_path;

  releq::RunResult result = releq::run(config);
  if (!config.output.empty()) {
    std::ofstream out(config.output);
    if (!out)
      throw releq::ConfigError("cannot write report to '" + config.output + "'");
    out << result.report.dump(2) << "\n";
  }
  if (!args.quiet) {
    std::cout << result.summary;
    if (config.output.empty()) std::cout << result.report.dump(2) << "\n";
  }
  return result.exit_code;
}

releq::SystemSpec system_from_flags(const std::string& preset,
                                    const std::vector<double>& inertia) {
  releq::SystemSpec spec;
  spec.preset = preset;
  if (!inertia.empty()) {
    if (inertia.size() != 3)
      throw releq::ConfigError("--inertia needs three values");
    spec.inertia = inertia;
  }
  if (preset != "rigid_body" && preset != "rigid_body_rotors")
    throw releq::ConfigError(
        "flag-built systems support rigid_body and rigid_body_rotors; use "
        "--config for cotangent_group");
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative-equilibrium toolkit: orbit-type strata of commuting "
               "pairs, equilibrium solving, transversality analysis"};
  app.require_subcommand(1);

  CommonArgs strata_args, solve_args, analyze_args, generic_args;
  std::string algebra = "so(3)";
  int samples = 1000;
  std::vector<std::string> strategies{"generic", "origin"};
  std::string solve_system = "rigid_body", analyze_system = "rigid_body",
              generic_system = "rigid_body";
  std::vector<double> solve_inertia, analyze_inertia, generic_inertia;
  int multistart = 100, analyze_multistart = 100, generic_multistart = 24;
  double momentum_scale = 1.0;
  bool include_origin = false;
  int trials = 100;
  double scale = 0.05;

  CLI::App* strata = app.add_subcommand("strata", "Sample and classify the "
                                        "commuting-pair strata of an algebra");
  strata->add_option("--algebra", algebra, "Algebra descriptor, e.g. so(3)");
  strata->add_option("--samples", samples, "Samples per strategy");
  strata->add_option("--strategies", strategies,
                     "generic, origin, cartan, center");
  add_common(strata, &strata_args);

  CLI::App* solve = app.add_subcommand("solve", "Multistart relative-"
                                       "equilibrium search");
  solve->add_option("--system", solve_system, "rigid_body | rigid_body_rotors");
  solve->add_option("--inertia", solve_inertia, "Rigid-body moments");
  solve->add_option("--multistart", multistart, "Number of starts");
  solve->add_option("--momentum-scale", momentum_scale, "Start momentum scale");
  solve->add_flag("--include-origin", include_origin,
                  "Also solve from the zero-momentum point");
  add_common(solve, &solve_args);

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Solve and run the full transversality analysis");
  analyze->add_option("--system", analyze_system, "rigid_body | rigid_body_rotors");
  analyze->add_option("--inertia", analyze_inertia, "Rigid-body moments");
  analyze->add_option("--multistart", analyze_multistart, "Number of starts");
  add_common(analyze, &analyze_args);

  CLI::App* generic = app.add_subcommand(
      "generic", "Transversality fraction under random form perturbations");
  generic->add_option("--system", generic_system, "rigid_body | rigid_body_rotors");
  generic->add_option("--inertia", generic_inertia, "Rigid-body moments");
  generic->add_option("--trials", trials, "Perturbation trials");
  generic->add_option("--scale", scale, "Perturbation scale");
  generic->add_option("--multistart", generic_multistart, "Starts per trial");
  add_common(generic, &generic_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    releq::RunConfig config;
    if (strata->parsed()) {
      config.algebra = algebra;
      releq::TaskSpec t;
      t.type = "strata";
      t.samples = samples;
      t.strategies = strategies;
      t.seed = 0;
      t.has_seed = true;
      config.tasks.push_back(t);
      return execute(config, strata_args, "strata");
    }
    if (solve->parsed()) {
      config.system = system_from_flags(solve_system, solve_inertia);
      releq::TaskSpec t;
      t.type = "solve";
      t.multistart = multistart;
      t.momentum_scale = momentum_scale;
      t.include_origin = include_origin;
      t.seed = 0;
      t.has_seed = true;
      config.tasks.push_back(t);
      return execute(config, solve_args, "solve");
    }
    if (analyze->parsed()) {
      config.system = system_from_flags(analyze_system, analyze_inertia);
      releq::TaskSpec s;
      s.type = "solve";
      s.multistart = analyze_multistart;
      s.seed = 0;
      s.has_seed = true;
      config.tasks.push_back(s);
      releq::TaskSpec t;
      t.type = "analyze";
      config.tasks.push_back(t);
      return execute(config, analyze_args, "analyze");
    }
    config.system = system_from_flags(generic_system, generic_inertia);
    releq::TaskSpec t;
    t.type = "generic";
    t.trials = trials;
    t.scale = scale;
    t.multistart = generic_multistart;
    t.seed = 0;
    t.has_seed = true;
    config.tasks.push_back(t);
    return execute(config, generic_args, "generic");
  } catch (const releq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
