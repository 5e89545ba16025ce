#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "afmass/cli.hpp"
#include "afmass/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mass functionals of asymptotically flat metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", afmass::kToolVersion);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<int> quadrature;
  std::optional<int> threads;
  std::uint64_t seed = 0;

  const char* commands[][2] = {
      {"adm-mass", "Extrapolated ADM mass from flux integrals"},
      {"fg-profile", "F_g on coordinate spheres and its limit"},
      {"weighted-mass", "Divergence-form mass, matter integral and defect"},
      {"sequence", "Semicontinuity experiment (blow-up, escaping, shells)"},
      {"cone-angle", "Cone mass of an asymptotically conical surface"},
      {"cone-sequence", "Semicontinuity experiment for cone surfaces"},
  };
  for (auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--quadrature", quadrature, "Nodes per angle (default 32)");
    sub->add_option("--threads", threads, "Worker threads (fallback: AFMASS_THREADS)");
    sub->add_option("--seed", seed, "Seed recorded with the run");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  afmass::RunConfig cfg;
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.out_dir = out_dir;
  cfg.quadrature = quadrature;
  cfg.seed = seed;
  try {
    cfg.threads = afmass::resolve_threads(threads);
    cfg.document = afmass::read_json_file(config_path);
  } catch (const afmass::Error& e) {
    std::cerr << "afmass: " << e.what() << '\n';
    return e.kind() == afmass::ErrorKind::ConfigInvalid ? 2 : 1;
  }

  const afmass::RunResult res = afmass::run(cfg);
  if (res.exit_code != 0) {
    std::cerr << "afmass: " << res.report["error"]["message"].get<std::string>() << '\n';
  } else {
    for (const auto& path : res.written) std::cout << path << '\n';
  }
  return res.exit_code;
}
