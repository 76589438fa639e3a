#ifndef RDFIELD_COMMANDS_HPP
#define RDFIELD_COMMANDS_HPP

#include <iosfwd>
#include <string>

#include "rdfield/config.hpp"
#include "rdfield/dynamics.hpp"

namespace rdf {

// Exit codes shared by the CLI:
//   0 success, 1 validation error, 2 numerical failure, 3 check failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitCheckFailed = 3;

/// Realizes the configured initial state: initial-condition constructor,
/// potential profile (with E^0 chosen so the gauge residual vanishes),
/// and the case lock matching the evolution mode.
FieldState build_initial_state(const RunConfig& cfg, const EtaSet& eta,
                               const ZStructure& z);

int cmd_algebra_verify(std::ostream& out);
int cmd_find_z(int index, std::ostream& out);
int cmd_dispersion(const RunConfig& cfg, std::ostream& out);
int cmd_evolve(const RunConfig& cfg, const std::string& out_dir, std::ostream& out);
int cmd_reduce_check(const RunConfig& cfg, std::ostream& out);
int cmd_convergence(const RunConfig& cfg, std::ostream& out);

}  // namespace rdf

#endif
