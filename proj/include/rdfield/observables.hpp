#ifndef RDFIELD_OBSERVABLES_HPP
#define RDFIELD_OBSERVABLES_HPP

#include <utility>
#include <vector>

#include "rdfield/lattice.hpp"

namespace rdf {

/// Per-sample scalar diagnostics. Serialized as one CSV row per sample.
struct DiagnosticsRecord {
  double t = 0.0;
  double Q = 0.0;            // sum j^0 dx, mode-appropriate current
  double H_total = 0.0;      // Hamiltonian density integral
  double L_DI_total = 0.0;   // Dirac-interaction Lagrangian integral
  double L_em_total = 0.0;   // electromagnetic Lagrangian integral
  double gauge_norm = 0.0;   // max |E^0 + d3 A^3|
  double x_norm = 0.0;       // max site norm of X
  double y_norm = 0.0;       // max site norm of Y
  double continuity_norm = 0.0;  // max |d0 j^0 + d3 j^3| (centered window)

  static const char* csv_header();
  std::string csv_row() const;
};

/// General current (all evolution modes admit it while a^2 != 1):
/// j^a = ce[kappa^2 bar(Phi) eta^a Phi + bar(Psi) eta^a Psi / (1-a^2)
///       - 2 (e/K) A^a bar(Psi)(1-a)Psi / (1-a^2)^2],
/// Psi reconstructed as (1+a)(c/K) Pi. Throws NumericalError at a^2 = 1.
VectorField current_general(const FieldState& state, const PhysicalParams& params,
                            const EtaSet& eta);

/// Reduced case-I/II current j^a = 2 c e kappa^2 bar(Phi) eta^a Phi.
VectorField current_case(const FieldState& state, const PhysicalParams& params,
                         const EtaSet& eta);

/// Riemann sum of j^0; uses the reduced current except in the
/// coupled-nonlinear mode.
double charge(const FieldState& state, const PhysicalParams& params, const EtaSet& eta);

/// Hamiltonian density per site, with Pi_Phi realized as bar(Pi_{Phi+}).
Eigen::VectorXd hamiltonian_density(const FieldState& state, const PhysicalParams& params,
                                    const EtaSet& eta);

/// Dirac-interaction Lagrangian density; vanishes identically on case-I
/// and case-II states. Throws at a^2 = 1.
Eigen::VectorXd lagrangian_DI_density(const FieldState& state,
                                      const PhysicalParams& params, const EtaSet& eta);

/// Electromagnetic Lagrangian density -F_{mu nu}F^{mu nu}/(16 pi), with
/// the scalar F set to zero and G monitored separately.
Eigen::VectorXd lagrangian_em_density(const FieldState& state);

/// max over sites of |E^0 + d3 A^3| (the Lorenz-type residual G in 1-D).
double gauge_residual(const FieldState& state);

/// Semi-discrete residual fields of the case equations with the time
/// derivative substituted from the canonical right-hand side:
///   r17 = D Phi  - s kappa (1+a) Z Phi
///   r19 = D ZPhi + s kappa (1+a) Phi      (s = +1 case I, -1 case II)
/// r19 equals Z applied to r17 up to roundoff.
std::pair<SpinorField, SpinorField> case_residual_fields(const FieldState& state,
                                                         const ZStructure& z,
                                                         const PhysicalParams& params,
                                                         const EtaSet& eta, CaseTag c);

/// Max site norms of the two residual fields above.
std::pair<double, double> residual_case_equations(const FieldState& state,
                                                  const ZStructure& z,
                                                  const PhysicalParams& params,
                                                  const EtaSet& eta, CaseTag c);

/// Residual of the second-order Lagrange equation for Phi, evaluated on a
/// centered three-state time window. The bracketed first-order term
/// collapses to (c/K) Pi once Psi is reconstructed canonically, so this is
/// the discrete form of D[(c/K)Pi] + kappa^2 (1+a) Phi.
double residual_lagrange_phi(const FieldState& prev, const FieldState& mid,
                             const FieldState& next, const PhysicalParams& params,
                             const EtaSet& eta);

/// Max over interior samples of |d0 j^0 + d3 j^3| for a uniformly spaced
/// series of currents (spacing dt, at least 3 samples).
double continuity_residual(const std::vector<VectorField>& j_series,
                           const GridSpec& grid, double dt);

}  // namespace rdf

#endif
