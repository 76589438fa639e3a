#ifndef RDFIELD_CONFIG_HPP
#define RDFIELD_CONFIG_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rdfield/lattice.hpp"

namespace rdf {

struct InitialPlaneWave {
  int mode_number = 0;
  int branch = 1;
  double amplitude = 1.0;
};

struct InitialGaussian {
  double center = 0.0;
  double width = 1.0;
  double carrier_k = 0.0;
  double amplitude = 1.0;
  int branch = 1;
};

struct InitialSnapshot {
  std::string path;
};

using InitialSpec = std::variant<InitialPlaneWave, InitialGaussian, InitialSnapshot>;

/// Profile for the potential: the fixed field of the `external` mode, or
/// optional initial data for coupled modes (E^0 is then set so that the
/// gauge residual G vanishes at t = 0).
struct PotentialProfile {
  enum class Kind { None, Constant, Sine };
  Kind kind = Kind::None;
  FourVector constant = FourVector::Zero();
  int component = 3;    // sine: which A^alpha carries the wave
  double amplitude = 0.0;
  int mode_number = 1;  // sine: spatial mode number
};

struct DispersionSpec {
  std::vector<int> mode_numbers;
  double periods = 4.0;
};

struct ConvergenceSpec {
  int levels = 4;
  double t_final = 2.0;
  int mode_number = 2;
};

struct RunConfig {
  GridSpec grid;
  double cfl_factor = 0.5;  // used when the config gives cfl_factor, not dt
  PhysicalParams params;
  ModeTag mode = ModeTag::Free;
  int z_index = 0;
  InitialSpec initial = InitialPlaneWave{};
  PotentialProfile potential;
  int n_steps = 1;
  int sample_every = 1;
  std::optional<DispersionSpec> dispersion;
  std::optional<ConvergenceSpec> convergence;
};

/// Parses and validates a config file. Unknown keys are rejected; every
/// module precondition is checked before any state is allocated.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

/// Realizes the configured potential profile on a grid.
VectorField potential_values(const PotentialProfile& p, const GridSpec& grid);

}  // namespace rdf

#endif
