// Command-line driver for the real-Dirac-field lattice laboratory.

#include <iostream>

#include <CLI11.hpp>

#include "rdfield/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rdfield: real eight-component Dirac field lattice laboratory"};
  app.require_subcommand(1);

  int z_index = 0;
  std::string config_path;
  std::string out_dir = "out";

  auto* verify = app.add_subcommand("algebra-verify",
                                    "verify the eta-matrix algebra and Z structures");
  auto* findz = app.add_subcommand("find-z", "print a Z structure and its residuals");
  findz->add_option("--index", z_index, "generator index")->required();
  auto* disp = app.add_subcommand("dispersion", "measure plane-wave frequencies");
  disp->add_option("--config", config_path, "config file")->required();
  auto* evol = app.add_subcommand("evolve", "run an evolution and write diagnostics");
  evol->add_option("--config", config_path, "config file")->required();
  evol->add_option("--out", out_dir, "output directory")->required();
  auto* reduce = app.add_subcommand("reduce-check", "verify the case-I reduction identities");
  reduce->add_option("--config", config_path, "config file")->required();
  auto* conv = app.add_subcommand("convergence", "free plane-wave convergence study");
  conv->add_option("--config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : rdf::kExitValidation;
  }

  try {
    if (verify->parsed()) return rdf::cmd_algebra_verify(std::cout);
    if (findz->parsed()) return rdf::cmd_find_z(z_index, std::cout);
    if (disp->parsed())
      return rdf::cmd_dispersion(rdf::load_config(config_path), std::cout);
    if (evol->parsed())
      return rdf::cmd_evolve(rdf::load_config(config_path), out_dir, std::cout);
    if (reduce->parsed())
      return rdf::cmd_reduce_check(rdf::load_config(config_path), std::cout);
    if (conv->parsed())
      return rdf::cmd_convergence(rdf::load_config(config_path), std::cout);
  } catch (const rdf::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return rdf::kExitValidation;
  } catch (const rdf::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return rdf::kExitNumerical;
  }
  return rdf::kExitValidation;
}
