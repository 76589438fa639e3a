#include "rdfield/observables.hpp"

#include <cmath>
#include <cstdio>

#include "rdfield/dynamics.hpp"

namespace rdf {

namespace {

constexpr double kSingularTol = 1e-12;

void check_not_singular(double a2, int site) {
  if (std::fabs(1.0 - a2) < kSingularTol)
    throw NumericalError("interaction singularity a^2 = 1 at site " +
                         std::to_string(site));
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const char* DiagnosticsRecord::csv_header() {
  return "t,Q,H_total,L_DI_total,L_em_total,gauge_norm,x_norm,y_norm,continuity_norm";
}

std::string DiagnosticsRecord::csv_row() const {
  return fmt17(t) + "," + fmt17(Q) + "," + fmt17(H_total) + "," + fmt17(L_DI_total) +
         "," + fmt17(L_em_total) + "," + fmt17(gauge_norm) + "," + fmt17(x_norm) + "," +
         fmt17(y_norm) + "," + fmt17(continuity_norm);
}

VectorField current_case(const FieldState& state, const PhysicalParams& params,
                         const EtaSet& eta) {
  const int n = state.grid.n_sites;
  VectorField j(n, 4);
  const double pref = 2.0 * params.e * params.kappa * params.kappa;  // c = 1
  std::array<Mat8, 4> B;  // bar(Phi) eta^a Phi = Phi^T (eta^0 eta^a) Phi
  for (int a = 0; a < 4; ++a) B[a] = eta.eta[0] * eta.eta[a];
  for (int i = 0; i < n; ++i) {
    Spinor8 phi = state.phi.row(i).transpose();
    for (int a = 0; a < 4; ++a) j(i, a) = pref * phi.dot(B[a] * phi);
  }
  return j;
}

VectorField current_general(const FieldState& state, const PhysicalParams& params,
                            const EtaSet& eta) {
  const int n = state.grid.n_sites;
  const double eok = params.e / params.K;
  VectorField j(n, 4);
  std::array<Mat8, 4> B;
  for (int a = 0; a < 4; ++a) B[a] = eta.eta[0] * eta.eta[a];
  const double kap2 = params.kappa * params.kappa;

  for (int i = 0; i < n; ++i) {
    FourVector A = state.A.row(i).transpose();
    const double a2 = a_squared_scalar(A, eok);
    check_not_singular(a2, i);
    Mat8 a = build_a(A, eok, eta);
    Mat8 one_plus_a = Mat8::Identity() + a;
    Spinor8 phi = state.phi.row(i).transpose();
    Spinor8 psi = one_plus_a * (state.pi.row(i).transpose() / params.K);
    const double psi_bar_1ma_psi = psi.dot(eta.eta[0] * ((Mat8::Identity() - a) * psi));
    for (int al = 0; al < 4; ++al) {
      double t1 = kap2 * phi.dot(B[al] * phi);
      double t2 = psi.dot(B[al] * psi) / (1.0 - a2);
      double t3 = -2.0 * eok * A(al) * psi_bar_1ma_psi / ((1.0 - a2) * (1.0 - a2));
      j(i, al) = params.e * (t1 + t2 + t3);  // c = 1
    }
  }
  return j;
}

double charge(const FieldState& state, const PhysicalParams& params, const EtaSet& eta) {
  VectorField j = (state.tag == ModeTag::CoupledNonlinear)
                      ? current_general(state, params, eta)
                      : current_case(state, params, eta);
  return j.col(0).sum() * state.grid.dx;
}

Eigen::VectorXd hamiltonian_density(const FieldState& state, const PhysicalParams& params,
                                    const EtaSet& eta) {
  const int n = state.grid.n_sites;
  const double eok = params.e / params.K;
  SpinorField dphi = spatial_derivative(state.phi, state.grid);
  const Mat8 eta03 = eta.eta[0] * eta.eta[3];
  const double kap2 = params.kappa * params.kappa;

  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) {
    FourVector A = state.A.row(i).transpose();
    Mat8 one_plus_a = Mat8::Identity() + build_a(A, eok, eta);
    Spinor8 pi = state.pi.row(i).transpose();
    Spinor8 phi = state.phi.row(i).transpose();
    Spinor8 dph = dphi.row(i).transpose();
    // Pi_Phi = bar(Pi_{Phi+}); the eta^0 factors collapse pairwise.
    h(i) = (1.0 / params.K) * pi.dot(one_plus_a * pi)       // c^2/K Pi_Phi eta^0 (1+a) Pi
           - pi.dot(eta.eta[3] * dph)                       // -c Pi_Phi eta^0 eta^3 d3 Phi
           - dph.dot(eta03 * pi)                            // -c d3 bar(Phi) eta^3 Pi
           + params.K * kap2 * phi.dot(eta.eta[0] * (one_plus_a * phi));
  }
  return h;
}

Eigen::VectorXd lagrangian_DI_density(const FieldState& state,
                                      const PhysicalParams& params, const EtaSet& eta) {
  const int n = state.grid.n_sites;
  const double eok = params.e / params.K;
  const double kap2 = params.kappa * params.kappa;
  Eigen::VectorXd l(n);
  for (int i = 0; i < n; ++i) {
    FourVector A = state.A.row(i).transpose();
    const double a2 = a_squared_scalar(A, eok);
    check_not_singular(a2, i);
    Mat8 a = build_a(A, eok, eta);
    Spinor8 phi = state.phi.row(i).transpose();
    Spinor8 psi = (Mat8::Identity() + a) * (state.pi.row(i).transpose() / params.K);
    double kinetic = psi.dot(eta.eta[0] * ((Mat8::Identity() - a) * psi)) / (1.0 - a2);
    double mass = kap2 * phi.dot(eta.eta[0] * ((Mat8::Identity() + a) * phi));
    l(i) = params.K * (kinetic - mass);
  }
  return l;
}

Eigen::VectorXd lagrangian_em_density(const FieldState& state) {
  const int n = state.grid.n_sites;
  VectorField dA = spatial_derivative(state.A, state.grid);
  Eigen::VectorXd l(n);
  const double pref = 1.0 / (8.0 * M_PI);
  for (int i = 0; i < n; ++i) {
    // Nonzero components of F_{mu nu} in 1-D: F_{0i} from E, F_{3i} and
    // F_{30} from the d3 stencil. -F^2/2 = sum F_{0i}^2 - F_{31}^2 - F_{32}^2.
    const double f01 = state.E(i, 1);
    const double f02 = state.E(i, 2);
    const double f03 = state.E(i, 3) + dA(i, 0);
    const double f31 = dA(i, 1);
    const double f32 = dA(i, 2);
    l(i) = pref * (f01 * f01 + f02 * f02 + f03 * f03 - f31 * f31 - f32 * f32);
  }
  return l;
}

double gauge_residual(const FieldState& state) {
  VectorField dA = spatial_derivative(state.A, state.grid);
  return (state.E.col(0) + dA.col(3)).cwiseAbs().maxCoeff();
}

std::pair<SpinorField, SpinorField> case_residual_fields(const FieldState& state,
                                                         const ZStructure& z,
                                                         const PhysicalParams& params,
                                                         const EtaSet& eta, CaseTag c) {
  const int n = state.grid.n_sites;
  const double s = (c == CaseTag::I) ? 1.0 : -1.0;
  const double eok = params.e / params.K;

  StateDerivative d = rhs_canonical(state, params, eta, /*coupled=*/false);
  SpinorField zphi = state.phi * z.z.transpose();
  SpinorField dphi3 = spatial_derivative(state.phi, state.grid);
  SpinorField dzphi3 = spatial_derivative(zphi, state.grid);

  SpinorField r17(n, 8), r19(n, 8);
  for (int i = 0; i < n; ++i) {
    Mat8 one_plus_a =
        Mat8::Identity() + build_a(state.A.row(i).transpose(), eok, eta);
    Spinor8 phi = state.phi.row(i).transpose();
    Spinor8 zph = zphi.row(i).transpose();
    Spinor8 d0phi = d.d_phi.row(i).transpose();
    Spinor8 v17 = eta.eta[0] * d0phi + eta.eta[3] * dphi3.row(i).transpose() -
                  s * params.kappa * (one_plus_a * zph);
    Spinor8 v19 = eta.eta[0] * (z.z * d0phi) + eta.eta[3] * dzphi3.row(i).transpose() +
                  s * params.kappa * (one_plus_a * phi);
    r17.row(i) = v17.transpose();
    r19.row(i) = v19.transpose();
  }
  return {r17, r19};
}

std::pair<double, double> residual_case_equations(const FieldState& state,
                                                  const ZStructure& z,
                                                  const PhysicalParams& params,
                                                  const EtaSet& eta, CaseTag c) {
  auto [r17, r19] = case_residual_fields(state, z, params, eta, c);
  double m17 = 0.0, m19 = 0.0;
  for (int i = 0; i < state.grid.n_sites; ++i) {
    m17 = std::max(m17, r17.row(i).norm());
    m19 = std::max(m19, r19.row(i).norm());
  }
  return {m17, m19};
}

double residual_lagrange_phi(const FieldState& prev, const FieldState& mid,
                             const FieldState& next, const PhysicalParams& params,
                             const EtaSet& eta) {
  const int n = mid.grid.n_sites;
  const double eok = params.e / params.K;
  const double two_dt = next.t - prev.t;
  if (!(two_dt > 0.0))
    throw ValidationError("residual_lagrange_phi: window states must be time-ordered");

  // With Psi reconstructed canonically the bracket is (c/K) Pi, so the
  // equation reduces to D[(c/K)Pi] + kappa^2 (1+a) Phi = 0.
  SpinorField w_prev = prev.pi / params.K;
  SpinorField w_mid = mid.pi / params.K;
  SpinorField w_next = next.pi / params.K;
  SpinorField dw0 = (w_next - w_prev) / two_dt;
  SpinorField dw3 = spatial_derivative(w_mid, mid.grid);

  double worst = 0.0;
  const double kap2 = params.kappa * params.kappa;
  for (int i = 0; i < n; ++i) {
    Mat8 one_plus_a = Mat8::Identity() + build_a(mid.A.row(i).transpose(), eok, eta);
    Spinor8 r = eta.eta[0] * dw0.row(i).transpose() +
                eta.eta[3] * dw3.row(i).transpose() +
                kap2 * (one_plus_a * mid.phi.row(i).transpose());
    worst = std::max(worst, r.norm());
  }
  return worst;
}

double continuity_residual(const std::vector<VectorField>& j_series,
                           const GridSpec& grid, double dt) {
  if (j_series.size() < 3)
    throw ValidationError("continuity_residual: need at least 3 time samples");
  double worst = 0.0;
  for (std::size_t m = 1; m + 1 < j_series.size(); ++m) {
    Eigen::VectorXd d0 = (j_series[m + 1].col(0) - j_series[m - 1].col(0)) / (2.0 * dt);
    VectorField d3 = spatial_derivative(j_series[m], grid);
    worst = std::max(worst, (d0 + d3.col(3)).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace rdf
