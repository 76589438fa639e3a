#include "rdfield/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <vector>

#include "rdfield/snapshot.hpp"

namespace rdf {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

void apply_potential(FieldState& state, const RunConfig& cfg) {
  if (cfg.potential.kind == PotentialProfile::Kind::None) {
    if (cfg.mode == ModeTag::External)
      throw ValidationError("external mode requires a potential profile");
    return;
  }
  if (cfg.mode == ModeTag::Free)
    throw ValidationError("free mode does not take a potential profile");
  state.A = potential_values(cfg.potential, state.grid);
  state.E = VectorField::Zero(state.grid.n_sites, 4);
  if (cfg.mode != ModeTag::External) {
    // Lorenz-type gauge at t = 0: E^0 = -d3 A^3.
    VectorField dA = spatial_derivative(state.A, state.grid);
    state.E.col(0) = -dA.col(3);
  }
}

}  // namespace

FieldState build_initial_state(const RunConfig& cfg, const EtaSet& eta,
                               const ZStructure& z) {
  FieldState state = FieldState::zero(cfg.grid, cfg.mode);
  if (const auto* pw = std::get_if<InitialPlaneWave>(&cfg.initial)) {
    state = init_plane_wave(cfg.grid, cfg.params, z, eta, pw->mode_number, pw->branch,
                            pw->amplitude, cfg.mode);
  } else if (const auto* ga = std::get_if<InitialGaussian>(&cfg.initial)) {
    state = init_gaussian(cfg.grid, cfg.params, z, eta, ga->center, ga->width,
                          ga->carrier_k, ga->amplitude, ga->branch, cfg.mode);
  } else {
    const auto& snap = std::get<InitialSnapshot>(cfg.initial);
    SnapshotData data = read_snapshot(snap.path);
    if (data.state.grid.n_sites != cfg.grid.n_sites ||
        std::fabs(data.state.grid.dx - cfg.grid.dx) > 1e-12)
      throw ValidationError("snapshot grid does not match the configured grid");
    state = std::move(data.state);
    state.grid.dt = cfg.grid.dt;
    state.tag = cfg.mode;
  }
  apply_potential(state, cfg);
  if (cfg.mode == ModeTag::CoupledLinearII)
    state = enforce_case(std::move(state), z, CaseTag::II, cfg.params);
  return state;
}

int cmd_algebra_verify(std::ostream& out) {
  EtaSet eta = build_eta();
  AlgebraVerification v = verify_algebra(eta);

  out << "anticommutator metric g^{alpha beta} (from {eta^a, eta^b} / 2):\n";
  for (int a = 0; a < 4; ++a) {
    out << " ";
    for (int b = 0; b < 4; ++b) out << " " << fmt("%+.0f", v.metric_observed[a][b]);
    out << "\n";
  }
  out << "anticommutators exact (integer arithmetic): "
      << (v.anticommutators_exact ? "yes" : ("NO, first failure " + v.failing_pair))
      << "\n";
  out << "eta^0 (eta^j)^T = eta^j eta^0 exact: " << (v.eq14_exact ? "yes" : "NO") << "\n";
  out << "max |a^2 - (e/K)^2 A.A| over 100 random draws: "
      << fmt("%.3e", v.max_a_squared_residual) << "\n";
  out << "commutant dimension: " << v.commutant_dim << "\n";
  out << "antisymmetric Z generators: " << v.z_count << "\n";
  out << "max Z invariant residual: " << fmt("%.3e", v.max_z_residual) << "\n";
  out << (v.ok() ? "algebra-verify: PASS" : "algebra-verify: FAIL") << "\n";
  return v.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_find_z(int index, std::ostream& out) {
  EtaSet eta = build_eta();
  ZStructure zs = find_z(eta, index);

  out << "Z[" << index << "]:\n";
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) out << (c ? " " : "") << fmt("%+.12f", zs.z(r, c));
    out << "\n";
  }
  const Mat8& Z = zs.z;
  double comm = 0.0;
  for (int a = 0; a < 4; ++a)
    comm = std::max(comm, (Z * eta.eta[a] - eta.eta[a] * Z).norm());
  out << "||Z^2 + I||       = " << fmt("%.3e", (Z * Z + Mat8::Identity()).norm()) << "\n";
  out << "||Z^T + Z||       = " << fmt("%.3e", (Z.transpose() + Z).norm()) << "\n";
  out << "max ||[Z,eta^a]|| = " << fmt("%.3e", comm) << "\n";
  return kExitOk;
}

int cmd_dispersion(const RunConfig& cfg, std::ostream& out) {
  if (cfg.mode != ModeTag::Free)
    throw ValidationError("dispersion requires mode \"free\"");
  if (!cfg.dispersion)
    throw ValidationError("dispersion requires a dispersion section in the config");

  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, cfg.z_index);
  EvolutionMode mode{ModeTag::Free};

  out << "k omega_measured omega_exact rel_error\n";
  for (int m : cfg.dispersion->mode_numbers) {
    FieldState state =
        init_plane_wave(cfg.grid, cfg.params, z, eta, m, 1, 1.0, ModeTag::Free);
    const double k = 2.0 * M_PI * m / cfg.grid.length();
    const double omega_exact = std::sqrt(k * k + cfg.params.kappa * cfg.params.kappa);
    const int n_steps = static_cast<int>(
        std::ceil(cfg.dispersion->periods * 2.0 * M_PI / omega_exact / cfg.grid.dt));

    // Track the largest spinor component at site 0; its zero crossings are
    // spaced by half a period.
    int comp = 0;
    state.phi.row(0).cwiseAbs().maxCoeff(&comp);
    std::vector<double> crossings;
    double s_prev = state.phi(0, comp);
    double t_prev = state.t;
    for (int step = 0; step < n_steps; ++step) {
      state = step_rk4(state, mode, cfg.params, eta, z);
      const double s_cur = state.phi(0, comp);
      if (s_prev == 0.0)
        crossings.push_back(t_prev);
      else if (s_prev * s_cur < 0.0)
        crossings.push_back(t_prev + cfg.grid.dt * s_prev / (s_prev - s_cur));
      s_prev = s_cur;
      t_prev = state.t;
    }
    if (crossings.size() < 3)
      throw NumericalError("dispersion: too few zero crossings for mode " +
                           std::to_string(m));
    const double mean_half_period = (crossings.back() - crossings.front()) /
                                    static_cast<double>(crossings.size() - 1);
    const double omega_meas = M_PI / mean_half_period;
    const double rel = std::fabs(omega_meas - omega_exact) / omega_exact;
    out << fmt("%.10g", k) << " " << fmt("%.10g", omega_meas) << " "
        << fmt("%.10g", omega_exact) << " " << fmt("%.3e", rel) << "\n";
  }
  return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, const std::string& out_dir, std::ostream& out) {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, cfg.z_index);
  FieldState state = build_initial_state(cfg, eta, z);

  EvolveResult res = evolve(std::move(state), EvolutionMode{cfg.mode}, cfg.params, eta,
                            z, cfg.n_steps, cfg.sample_every);

  std::filesystem::create_directories(out_dir);
  const std::string csv_path = out_dir + "/diagnostics.csv";
  {
    std::ofstream csv(csv_path, std::ios::trunc);
    if (!csv) throw ValidationError("cannot open " + csv_path);
    csv << DiagnosticsRecord::csv_header() << "\n";
    for (const auto& rec : res.records) csv << rec.csv_row() << "\n";
  }
  write_snapshot(out_dir + "/final.snap", res.final_state, cfg.params, cfg.z_index);

  out << "evolved " << cfg.n_steps << " steps to t = " << fmt("%.10g", res.final_state.t)
      << ", " << res.records.size() << " samples -> " << out_dir << "\n";
  return kExitOk;
}

int cmd_reduce_check(const RunConfig& cfg, std::ostream& out) {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, cfg.z_index);

  // Case-I base state from the configured initial data and potential.
  RunConfig base_cfg = cfg;
  base_cfg.mode = ModeTag::CoupledLinearI;
  FieldState state = build_initial_state(base_cfg, eta, z);
  state = enforce_case(std::move(state), z, CaseTag::I, cfg.params);

  bool ok = true;
  auto report = [&](const char* name, double value, double tol) {
    const bool pass = value <= tol;
    ok = ok && pass;
    out << (pass ? "PASS" : "FAIL") << "  " << name << " = " << fmt("%.3e", value)
        << " (tol " << fmt("%.0e", tol) << ")\n";
  };

  // (a) the Dirac-interaction Lagrangian density vanishes on case I.
  double ldi = lagrangian_DI_density(state, cfg.params, eta).cwiseAbs().maxCoeff();
  report("max |L_DI density| on case-I state", ldi, 1e-10);

  // (b) general and reduced currents coincide on case I.
  VectorField j34 = current_general(state, cfg.params, eta);
  VectorField j35 = current_case(state, cfg.params, eta);
  const double jscale = std::max(j35.cwiseAbs().maxCoeff(), 1e-300);
  double jgap = (j34 - j35).cwiseAbs().maxCoeff() / jscale;
  report("max relative current gap (general vs case)", jgap, 1e-10);

  // (c) one canonical step equals one linear-I step on the case-I manifold.
  {
    FieldState s_lin = state;
    s_lin.tag = ModeTag::CoupledLinearI;
    FieldState s_can = state;
    s_can.tag = ModeTag::CoupledNonlinear;
    FieldState a = step_rk4(s_lin, EvolutionMode{ModeTag::CoupledLinearI}, cfg.params,
                            eta, z);
    FieldState b = step_rk4(s_can, EvolutionMode{ModeTag::CoupledNonlinear}, cfg.params,
                            eta, z);
    double gap = std::max({(a.phi - b.phi).cwiseAbs().maxCoeff(),
                           (a.pi - b.pi).cwiseAbs().maxCoeff(),
                           (a.A - b.A).cwiseAbs().maxCoeff(),
                           (a.E - b.E).cwiseAbs().maxCoeff()});
    report("max gap: linear-I step vs canonical step", gap, 1e-12);
  }

  // (d) a linear-II step with Z bitwise-equals a linear-I step with -Z.
  {
    FieldState s2 = enforce_case(state, z, CaseTag::II, cfg.params);
    s2.tag = ModeTag::CoupledLinearII;
    ZStructure zneg{-z.z, z.index};
    FieldState s1 = enforce_case(state, zneg, CaseTag::I, cfg.params);
    s1.tag = ModeTag::CoupledLinearI;
    FieldState a = step_rk4(s2, EvolutionMode{ModeTag::CoupledLinearII}, cfg.params,
                            eta, z);
    FieldState b = step_rk4(s1, EvolutionMode{ModeTag::CoupledLinearI}, cfg.params,
                            eta, zneg);
    const bool bitwise = (a.phi.array() == b.phi.array()).all() &&
                         (a.pi.array() == b.pi.array()).all() &&
                         (a.A.array() == b.A.array()).all() &&
                         (a.E.array() == b.E.array()).all();
    ok = ok && bitwise;
    out << (bitwise ? "PASS" : "FAIL")
        << "  linear-II step with Z vs linear-I step with -Z: "
        << (bitwise ? "bitwise equal" : "MISMATCH") << "\n";
  }

  // Fault injection: a 1e-3 constraint violation must reopen the gaps.
  {
    FieldState bad = state;
    const double L = bad.grid.length();
    for (int i = 0; i < bad.grid.n_sites; ++i)
      for (int c = 0; c < 8; ++c)
        bad.pi(i, c) += 1e-3 * cfg.params.K * cfg.params.kappa *
                        std::cos(2.0 * M_PI * bad.grid.site_x(i) / L + c);
    double ldi_bad = lagrangian_DI_density(bad, cfg.params, eta).cwiseAbs().maxCoeff();
    VectorField j34b = current_general(bad, cfg.params, eta);
    VectorField j35b = current_case(bad, cfg.params, eta);
    double jgap_bad = (j34b - j35b).cwiseAbs().maxCoeff() /
                      std::max(j35b.cwiseAbs().maxCoeff(), 1e-300);
    const bool witness = ldi_bad >= 1e-4 && jgap_bad >= 1e-4;
    ok = ok && witness;
    out << (witness ? "PASS" : "FAIL") << "  fault injection witness: |L_DI| = "
        << fmt("%.3e", ldi_bad) << ", current gap = " << fmt("%.3e", jgap_bad)
        << " (both must reach 1e-4)\n";
  }

  out << (ok ? "reduce-check: PASS" : "reduce-check: FAIL") << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_convergence(const RunConfig& cfg, std::ostream& out) {
  if (cfg.mode != ModeTag::Free)
    throw ValidationError("convergence requires mode \"free\"");
  if (!cfg.convergence)
    throw ValidationError("convergence requires a convergence section in the config");

  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, cfg.z_index);
  const ConvergenceSpec& spec = *cfg.convergence;
  const double L = cfg.grid.length();
  const double cfl = cfg.grid.dt / cfg.grid.dx;
  const double t_final = spec.t_final;

  out << "dx dt error observed_order\n";
  double prev_err = 0.0;
  for (int level = 0; level < spec.levels; ++level) {
    const int n = cfg.grid.n_sites << level;
    const double dx = L / n;
    int steps = static_cast<int>(std::ceil(t_final / (cfl * dx)));
    const double dt = t_final / steps;  // land exactly on t_final
    GridSpec grid = GridSpec::make(n, dx, dt);

    FieldState state =
        init_plane_wave(grid, cfg.params, z, eta, spec.mode_number, 1, 1.0, ModeTag::Free);
    EvolutionMode mode{ModeTag::Free};
    for (int s = 0; s < steps; ++s) state = step_rk4(state, mode, cfg.params, eta, z);

    const double k = 2.0 * M_PI * spec.mode_number / L;
    PlaneWaveMode pw = plane_wave_mode(eta, z, k, 1, cfg.params.kappa);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      Spinor8 exact = exp_z(z.z, pw.omega * t_final - k * grid.site_x(i)) * pw.chi;
      err = std::max(err, (state.phi.row(i).transpose() - exact).cwiseAbs().maxCoeff());
    }
    out << fmt("%.6g", dx) << " " << fmt("%.6g", dt) << " " << fmt("%.6e", err);
    if (level > 0) out << " " << fmt("%.3f", std::log2(prev_err / err));
    out << "\n";
    prev_err = err;
  }
  return kExitOk;
}

}  // namespace rdf
