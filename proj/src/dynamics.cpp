#include "rdfield/dynamics.hpp"

#include <cmath>
#include <deque>

namespace rdf {

namespace {

constexpr double kFourPi = 4.0 * M_PI;

int first_bad_site(const FieldState& s) {
  for (int i = 0; i < s.grid.n_sites; ++i) {
    if (!s.phi.row(i).allFinite() || !s.pi.row(i).allFinite() ||
        !s.A.row(i).allFinite() || !s.E.row(i).allFinite())
      return i;
  }
  return -1;
}

StateDerivative frozen_em(const FieldState& state, StateDerivative d) {
  d.d_A = VectorField::Zero(state.grid.n_sites, 4);
  d.d_E = VectorField::Zero(state.grid.n_sites, 4);
  return d;
}

StateDerivative rhs_for_mode(const FieldState& state, ModeTag tag,
                             const PhysicalParams& params, const EtaSet& eta,
                             const ZStructure& z) {
  switch (tag) {
    case ModeTag::Free:
    case ModeTag::External:
      return rhs_linear(state, CaseTag::I, params, eta, z, /*coupled=*/false);
    case ModeTag::CoupledLinearI:
      return rhs_linear(state, CaseTag::I, params, eta, z, /*coupled=*/true);
    case ModeTag::CoupledLinearII:
      return rhs_linear(state, CaseTag::II, params, eta, z, /*coupled=*/true);
    case ModeTag::CoupledNonlinear:
      return rhs_canonical(state, params, eta, /*coupled=*/true);
  }
  throw ValidationError("rhs_for_mode: unknown mode tag");
}

FieldState advance(const FieldState& base, const StateDerivative& d, double h) {
  FieldState s = base;
  s.t = base.t + h;
  s.phi = base.phi + h * d.d_phi;
  s.pi = base.pi + h * d.d_pi;
  s.A = base.A + h * d.d_A;
  s.E = base.E + h * d.d_E;
  return s;
}

}  // namespace

std::pair<VectorField, VectorField> rhs_maxwell(const FieldState& state,
                                                const VectorField& source) {
  if (!source.allFinite()) throw NumericalError("rhs_maxwell: non-finite source");
  VectorField d_A = state.E;
  VectorField d_E = spatial_second_derivative(state.A, state.grid) + source;
  return {d_A, d_E};
}

StateDerivative rhs_linear(const FieldState& state, CaseTag c,
                           const PhysicalParams& params, const EtaSet& eta,
                           const ZStructure& z, bool coupled) {
  if (!state.all_finite()) throw NumericalError("rhs_linear: non-finite state");
  const int n = state.grid.n_sites;
  const double s = (c == CaseTag::I) ? 1.0 : -1.0;
  const Mat8 zeff = s * z.z;
  const double eok = params.e / params.K;

  SpinorField dphi3 = spatial_derivative(state.phi, state.grid);
  StateDerivative d;
  d.d_phi.resize(n, 8);
  for (int i = 0; i < n; ++i) {
    Mat8 one_plus_a =
        Mat8::Identity() + build_a(state.A.row(i).transpose(), eok, eta);
    Spinor8 drive =
        params.kappa * (one_plus_a * (zeff * state.phi.row(i).transpose()));
    Spinor8 v = eta.eta[0] * (drive - eta.eta[3] * dphi3.row(i).transpose());
    d.d_phi.row(i) = v.transpose();
  }
  // The momentum stays on the case lock (c/K) Pi = s Z kappa Phi.
  d.d_pi = params.K * params.kappa * (d.d_phi * zeff.transpose());

  if (coupled) {
    VectorField source = kFourPi * current_case(state, params, eta);
    std::tie(d.d_A, d.d_E) = rhs_maxwell(state, source);
  } else {
    d = frozen_em(state, std::move(d));
  }
  return d;
}

StateDerivative rhs_canonical(const FieldState& state, const PhysicalParams& params,
                              const EtaSet& eta, bool coupled) {
  if (!state.all_finite()) throw NumericalError("rhs_canonical: non-finite state");
  const int n = state.grid.n_sites;
  const double eok = params.e / params.K;
  const double kap2 = params.kappa * params.kappa;

  SpinorField dphi3 = spatial_derivative(state.phi, state.grid);
  SpinorField dpi3 = spatial_derivative(state.pi, state.grid);
  StateDerivative d;
  d.d_phi.resize(n, 8);
  d.d_pi.resize(n, 8);
  for (int i = 0; i < n; ++i) {
    Mat8 one_plus_a =
        Mat8::Identity() + build_a(state.A.row(i).transpose(), eok, eta);
    Spinor8 phi = state.phi.row(i).transpose();
    Spinor8 pi = state.pi.row(i).transpose();
    Spinor8 vphi = eta.eta[0] * (one_plus_a * (pi / params.K) -
                                 eta.eta[3] * dphi3.row(i).transpose());
    Spinor8 vpi = eta.eta[0] * (-params.K * kap2 * (one_plus_a * phi) -
                                eta.eta[3] * dpi3.row(i).transpose());
    d.d_phi.row(i) = vphi.transpose();
    d.d_pi.row(i) = vpi.transpose();
  }

  if (coupled) {
    VectorField source = kFourPi * current_general(state, params, eta);
    std::tie(d.d_A, d.d_E) = rhs_maxwell(state, source);
  } else {
    d = frozen_em(state, std::move(d));
  }
  return d;
}

FieldState step_rk4(const FieldState& state, const EvolutionMode& mode,
                    const PhysicalParams& params, const EtaSet& eta,
                    const ZStructure& z) {
  const double dt = state.grid.dt;
  StateDerivative k1 = rhs_for_mode(state, mode.tag, params, eta, z);
  StateDerivative k2 = rhs_for_mode(advance(state, k1, 0.5 * dt), mode.tag, params, eta, z);
  StateDerivative k3 = rhs_for_mode(advance(state, k2, 0.5 * dt), mode.tag, params, eta, z);
  StateDerivative k4 = rhs_for_mode(advance(state, k3, dt), mode.tag, params, eta, z);

  FieldState out = state;
  out.t = state.t + dt;
  const double w = dt / 6.0;
  out.phi = state.phi + w * (k1.d_phi + 2.0 * k2.d_phi + 2.0 * k3.d_phi + k4.d_phi);
  out.pi = state.pi + w * (k1.d_pi + 2.0 * k2.d_pi + 2.0 * k3.d_pi + k4.d_pi);
  out.A = state.A + w * (k1.d_A + 2.0 * k2.d_A + 2.0 * k3.d_A + k4.d_A);
  out.E = state.E + w * (k1.d_E + 2.0 * k2.d_E + 2.0 * k3.d_E + k4.d_E);

  if (!out.all_finite()) {
    int site = first_bad_site(out);
    throw NumericalError("step_rk4: non-finite state after step at t = " +
                         std::to_string(out.t) + ", site " + std::to_string(site));
  }
  return out;
}

DiagnosticsRecord compute_diagnostics(const FieldState& state,
                                      const PhysicalParams& params, const EtaSet& eta,
                                      const ZStructure& z) {
  DiagnosticsRecord r;
  r.t = state.t;
  r.Q = charge(state, params, eta);
  r.H_total = hamiltonian_density(state, params, eta).sum() * state.grid.dx;
  r.L_DI_total = lagrangian_DI_density(state, params, eta).sum() * state.grid.dx;
  r.L_em_total = lagrangian_em_density(state).sum() * state.grid.dx;
  r.gauge_norm = gauge_residual(state);
  XYFields xy = xy_transform(state, z, params);
  for (int i = 0; i < state.grid.n_sites; ++i) {
    r.x_norm = std::max(r.x_norm, xy.x_field.row(i).norm());
    r.y_norm = std::max(r.y_norm, xy.y_field.row(i).norm());
  }
  return r;
}

EvolveResult evolve(FieldState state, const EvolutionMode& mode,
                    const PhysicalParams& params, const EtaSet& eta,
                    const ZStructure& z, int n_steps, int sample_every) {
  if (n_steps < 1) throw ValidationError("evolve: n_steps must be >= 1");
  if (sample_every < 1) throw ValidationError("evolve: sample_every must be >= 1");

  auto mode_current = [&](const FieldState& s) {
    return (mode.tag == ModeTag::CoupledNonlinear) ? current_general(s, params, eta)
                                                   : current_case(s, params, eta);
  };

  EvolveResult res;
  res.records.push_back(compute_diagnostics(state, params, eta, z));

  std::deque<VectorField> j_window;  // currents at the last three steps
  j_window.push_back(mode_current(state));

  // A sample at step m needs currents at m-1, m, m+1 for its centered
  // continuity residual; it is patched once step m+1 has been taken.
  long pending_record = -1;

  for (int step = 1; step <= n_steps; ++step) {
    state = step_rk4(state, mode, params, eta, z);
    j_window.push_back(mode_current(state));
    if (j_window.size() > 3) j_window.pop_front();

    if (pending_record >= 0 && j_window.size() == 3) {
      res.records[pending_record].continuity_norm = continuity_residual(
          {j_window[0], j_window[1], j_window[2]}, state.grid, state.grid.dt);
      pending_record = -1;
    }
    if (step % sample_every == 0) {
      res.records.push_back(compute_diagnostics(state, params, eta, z));
      if (step < n_steps) pending_record = static_cast<long>(res.records.size()) - 1;
    }
  }
  res.final_state = std::move(state);
  return res;
}

}  // namespace rdf
