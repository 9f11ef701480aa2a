#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gbs/cli.hpp"
#include "gbs/errors.hpp"

int main(int argc, char** argv) {
  using namespace gbs::cli;
  CLI::App app{"Geodesic simplices and simplicial Gauss-Bonnet checks"};
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_path, seed_text;
  double tol = 0.0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--model", flags.model, "model descriptor, e.g. hyperbolic:4 or product(hyperbolic:2,hyperbolic:2)");
    sub->add_option("--vertices-file", flags.vertices_file, "vertex coordinates (JSON or plain text)");
    sub->add_option("--preset", flags.preset, "named vertex set");
    sub->add_option("--seed", seed_text, "64-bit seed");
    sub->add_option("--mc-samples", flags.mc_samples, "Monte Carlo samples per cone evaluation");
    sub->add_option("--order", flags.order, "Gauss points per axis of the face quadrature");
    sub->add_option("--arc-points", flags.arc_points, "Gauss points on dual-cone arcs");
    sub->add_option("--generators", flags.generators, "normal cone generators: geodesic or adjacent");
    sub->add_option("--tol", tol, "pass tolerance");
    sub->add_option("--out", flags.out, "report path (default stdout)");
    sub->add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", flags.threads, "worker threads (0: all cores)");
  };

  auto* verify = app.add_subcommand("verify", "check that the face contributions of each simplex sum to 1");
  auto* budget = app.add_subcommand("budget", "per-simplex bound budget and chain-level bound");
  auto* oracle = app.add_subcommand("oracle", "closed-form integrand oracle on random tensors");
  auto* twod = app.add_subcommand("2d", "angle defect of geodesic triangles");
  for (auto* sub : {verify, budget, oracle, twod}) add_common(sub);
  std::string chain_file;
  budget->add_option("--chain-file", chain_file, "plain-text chain over simplex ids");
  oracle->add_option("--trials", flags.trials, "number of random tensors");
  oracle->add_flag("--mutate-psi3", flags.mutate_psi3, "flip the normal in the engine's r=3 integrand");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig cfg;
  cfg.command = sub->get_name();
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw gbs::GeometryError(gbs::ErrorKind::ConfigError, "cannot read config '" + config_path + "'");
      apply_config_json(nlohmann::json::parse(in), cfg);
    }
    auto set = [&](const char* name) { return sub->count(name) > 0; };
    if (set("--model")) cfg.model = flags.model;
    if (set("--vertices-file")) cfg.vertices_file = flags.vertices_file;
    if (set("--preset")) cfg.preset = flags.preset;
    if (set("--seed")) {
      std::size_t used = 0;
      cfg.seed = std::stoull(seed_text, &used, 0);
      if (used != seed_text.size()) throw std::invalid_argument("seed");
    }
    if (set("--mc-samples")) cfg.mc_samples = flags.mc_samples;
    if (set("--order")) cfg.order = flags.order;
    if (set("--arc-points")) cfg.arc_points = flags.arc_points;
    if (set("--generators")) cfg.generators = flags.generators;
    if (set("--tol")) cfg.tol = tol;
    if (set("--out")) cfg.out = flags.out;
    if (set("--format")) cfg.format = flags.format;
    if (set("--threads")) cfg.threads = flags.threads;
    if (cfg.command == "oracle") {
      if (set("--trials")) cfg.trials = flags.trials;
      cfg.mutate_psi3 = flags.mutate_psi3;
    }
    if (cfg.command == "budget" && !chain_file.empty()) {
      std::ifstream in(chain_file);
      if (!in) throw gbs::GeometryError(gbs::ErrorKind::ConfigError, "cannot read chain '" + chain_file + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      cfg.chain = ss.str();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: ConfigError: " << e.what() << "\n";
    nlohmann::json err = {{"schema", 1},
                          {"command", cfg.command},
                          {"status", "error"},
                          {"exit_code", kConfig},
                          {"error", {{"kind", "ConfigError"}, {"message", e.what()}}}};
    std::cout << err.dump(2) << "\n";
    return kConfig;
  }
  return run(std::move(cfg));
}
