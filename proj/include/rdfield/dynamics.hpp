#ifndef RDFIELD_DYNAMICS_HPP
#define RDFIELD_DYNAMICS_HPP

#include <utility>
#include <vector>

#include "rdfield/lattice.hpp"
#include "rdfield/observables.hpp"

namespace rdf {

struct StateDerivative {
  SpinorField d_phi;  // n x 8
  SpinorField d_pi;   // n x 8
  VectorField d_A;    // n x 4
  VectorField d_E;    // n x 4
};

struct EvolutionMode {
  ModeTag tag = ModeTag::Free;
};

/// Wave-equation right-hand side: d_A = E, d_E = d3^2 A + source.
std::pair<VectorField, VectorField> rhs_maxwell(const FieldState& state,
                                                const VectorField& source);

/// Case-I/II spinor dynamics: solves D Phi = s kappa (1+a) Z Phi for the
/// time derivative (s = +1 case I, -1 case II); the momentum derivative
/// mirrors the case lock. When `coupled`, A and E evolve with the reduced
/// current source; otherwise they are frozen (free/external modes).
/// Case II with Z is computed as case I with -Z, so the two are bitwise
/// interchangeable.
StateDerivative rhs_linear(const FieldState& state, CaseTag c,
                           const PhysicalParams& params, const EtaSet& eta,
                           const ZStructure& z, bool coupled);

/// Full canonical equations:
///   d0 Phi = eta^0 [(1+a)(c/K) Pi - eta^3 d3 Phi]
///   d0 Pi  = eta^0 [-(K/c) kappa^2 (1+a) Phi - eta^3 d3 Pi]
/// When `coupled`, A and E evolve with the general current source (which
/// throws at the interaction singularity a^2 = 1).
StateDerivative rhs_canonical(const FieldState& state, const PhysicalParams& params,
                              const EtaSet& eta, bool coupled);

/// Classic RK4 step of size grid.dt. Throws NumericalError if the result
/// is not finite.
FieldState step_rk4(const FieldState& state, const EvolutionMode& mode,
                    const PhysicalParams& params, const EtaSet& eta,
                    const ZStructure& z);

struct EvolveResult {
  FieldState final_state;
  std::vector<DiagnosticsRecord> records;
};

/// Repeated step_rk4 with diagnostics sampled every sample_every steps
/// (including t = 0). The continuity residual of a sample is centered on
/// that step and therefore stays 0 for the first and final samples.
EvolveResult evolve(FieldState state, const EvolutionMode& mode,
                    const PhysicalParams& params, const EtaSet& eta,
                    const ZStructure& z, int n_steps, int sample_every);

/// Diagnostics of a single state (continuity_norm left at 0).
DiagnosticsRecord compute_diagnostics(const FieldState& state,
                                      const PhysicalParams& params, const EtaSet& eta,
                                      const ZStructure& z);

}  // namespace rdf

#endif
