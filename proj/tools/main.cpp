#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Finsler (alpha, beta)-metric toolkit"};
  cli.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string out_path;
  std::string format = "text";

  for (const char* name : {"tensors", "audit", "classify", "geodesic"}) {
    CLI::App* sub = cli.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--seed", seed, "override every seed in the configuration");
    sub->add_option("--out", out_path, "also write CSV rows to this file");
    sub->add_option("--format", format, "stdout format")->check(CLI::IsMember({"text", "csv"}));
    sub->add_option("--tol", tol, "override the classify and geodesic tolerance")
        ->check(CLI::PositiveNumber);
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const auto command = finsler::app::parse_command(cli.get_subcommands().front()->get_name());
    finsler::app::RunConfig cfg = finsler::app::load_config(config_path);
    if (seed) finsler::app::apply_seed(cfg, *seed);
    if (tol) {
      cfg.classify.tol = *tol;
      cfg.geodesic.tol = *tol;
    }
    const finsler::app::RunOutput result = finsler::app::run(command, cfg);
    std::cout << (format == "csv" ? result.csv : result.text);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out || !(out << result.csv)) throw finsler::Error("cannot write '" + out_path + "'");
    }
    return result.status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
