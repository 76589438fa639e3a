#include "rdfield/lattice.hpp"

#include <cmath>

namespace rdf {

GridSpec GridSpec::make(int n_sites, double dx, double dt) {
  if (n_sites < 8) throw ValidationError("GridSpec: n_sites must be >= 8");
  if (!(dx > 0.0)) throw ValidationError("GridSpec: dx must be positive");
  if (!(dt > 0.0)) throw ValidationError("GridSpec: dt must be positive");
  if (dt > dx) throw ValidationError("GridSpec: dt exceeds the CFL guard dt <= dx");
  return GridSpec{n_sites, dx, dt};
}

GridSpec GridSpec::make_cfl(int n_sites, double dx, double cfl_factor) {
  if (!(cfl_factor > 0.0) || cfl_factor > 1.0)
    throw ValidationError("GridSpec: cfl_factor must lie in (0, 1]");
  return make(n_sites, dx, cfl_factor * dx);
}

PhysicalParams PhysicalParams::natural(double kappa, double e) {
  if (!(kappa > 0.0)) throw ValidationError("PhysicalParams: kappa must be positive");
  return PhysicalParams{kappa, e, kappa};
}

const char* to_string(ModeTag tag) {
  switch (tag) {
    case ModeTag::Free: return "free";
    case ModeTag::External: return "external";
    case ModeTag::CoupledLinearI: return "coupled-linear-I";
    case ModeTag::CoupledLinearII: return "coupled-linear-II";
    case ModeTag::CoupledNonlinear: return "coupled-nonlinear";
  }
  return "?";
}

ModeTag mode_from_string(const std::string& s) {
  if (s == "free") return ModeTag::Free;
  if (s == "external") return ModeTag::External;
  if (s == "coupled-linear-I") return ModeTag::CoupledLinearI;
  if (s == "coupled-linear-II") return ModeTag::CoupledLinearII;
  if (s == "coupled-nonlinear") return ModeTag::CoupledNonlinear;
  throw ValidationError("unknown mode tag: " + s);
}

FieldState FieldState::zero(const GridSpec& grid, ModeTag tag) {
  FieldState s;
  s.grid = grid;
  s.t = 0.0;
  s.phi = SpinorField::Zero(grid.n_sites, 8);
  s.pi = SpinorField::Zero(grid.n_sites, 8);
  s.A = VectorField::Zero(grid.n_sites, 4);
  s.E = VectorField::Zero(grid.n_sites, 4);
  s.tag = tag;
  return s;
}

bool FieldState::all_finite() const {
  return phi.allFinite() && pi.allFinite() && A.allFinite() && E.allFinite() &&
         std::isfinite(t);
}

FieldState init_plane_wave(const GridSpec& grid, const PhysicalParams& params,
                           const ZStructure& z, const EtaSet& eta, int mode_number,
                           int branch, double amplitude, ModeTag tag) {
  if (std::abs(mode_number) > grid.n_sites / 2)
    throw ValidationError("init_plane_wave: mode_number beyond the grid Nyquist limit");
  const double k = 2.0 * M_PI * mode_number / grid.length();
  PlaneWaveMode mode = plane_wave_mode(eta, z, k, branch, params.kappa);

  FieldState s = FieldState::zero(grid, tag);
  for (int i = 0; i < grid.n_sites; ++i) {
    Spinor8 v = amplitude * (exp_z(z.z, -k * grid.site_x(i)) * mode.chi);
    s.phi.row(i) = v.transpose();
  }
  return enforce_case(std::move(s), z, CaseTag::I, params);
}

FieldState init_gaussian(const GridSpec& grid, const PhysicalParams& params,
                         const ZStructure& z, const EtaSet& eta, double center,
                         double width, double carrier_k, double amplitude, int branch,
                         ModeTag tag) {
  if (width < 4.0 * grid.dx)
    throw ValidationError("init_gaussian: width must be at least 4 dx");
  PlaneWaveMode mode = plane_wave_mode(eta, z, carrier_k, branch, params.kappa);

  const double L = grid.length();
  FieldState s = FieldState::zero(grid, tag);
  for (int i = 0; i < grid.n_sites; ++i) {
    const double x = grid.site_x(i);
    double d = std::fabs(x - center);
    d = std::min(d, L - d);  // periodic wrap
    const double env = amplitude * std::exp(-d * d / (2.0 * width * width));
    Spinor8 v = env * (exp_z(z.z, -carrier_k * x) * mode.chi);
    s.phi.row(i) = v.transpose();
  }
  return enforce_case(std::move(s), z, CaseTag::I, params);
}

FieldState enforce_case(FieldState state, const ZStructure& z, CaseTag c,
                        const PhysicalParams& params) {
  const double sign = (c == CaseTag::I) ? 1.0 : -1.0;
  const Mat8 zeff = sign * z.z;
  // (c/K) Pi = Z kappa Phi  (case I; negated Z for case II), c = 1.
  state.pi = params.K * params.kappa * (state.phi * zeff.transpose());
  return state;
}

XYFields xy_transform(const FieldState& state, const ZStructure& z,
                      const PhysicalParams& params) {
  XYFields xy;
  SpinorField zkphi = params.kappa * (state.phi * z.z.transpose());
  SpinorField pin = state.pi / params.K;  // (c/K) Pi
  xy.x_field = pin - zkphi;
  xy.y_field = pin + zkphi;
  return xy;
}

void xy_reconstruct(const XYFields& xy, const ZStructure& z, const PhysicalParams& params,
                    SpinorField& phi_out, SpinorField& pi_out) {
  pi_out = params.K * 0.5 * (xy.x_field + xy.y_field);
  phi_out = (0.5 / params.kappa) * ((xy.x_field - xy.y_field) * z.z.transpose());
}

}  // namespace rdf
