#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "rdfield/dynamics.hpp"
#include "rdfield/observables.hpp"

using namespace rdf;

namespace {

const double kPi = 3.14159265358979323846;

SpinorField random_field(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  SpinorField f(n, 8);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 8; ++c) f(i, c) = uni(rng);
  return f;
}

FieldState locked_state(const GridSpec& g, const PhysicalParams& p, const EtaSet& eta,
                        const ZStructure& z, CaseTag c, unsigned seed) {
  FieldState s = FieldState::zero(g, ModeTag::External);
  s.phi = random_field(g.n_sites, seed);
  return enforce_case(s, z, c, p);
}

}  // namespace

TEST_CASE("reduced current: scaling, parity, rest mode") {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, 0);
  GridSpec g = GridSpec::make(32, 0.25, 0.1);
  PhysicalParams p = PhysicalParams::natural(1.5, 0.7);

  FieldState s = init_plane_wave(g, p, z, eta, 2, 1, 1.0);
  VectorField j = current_case(s, p, eta);

  SUBCASE("j^0 is the site density 2 e kappa^2 |phi|^2") {
    for (int i = 0; i < g.n_sites; ++i)
      CHECK(j(i, 0) ==
            doctest::Approx(2.0 * p.e * p.kappa * p.kappa * s.phi.row(i).squaredNorm())
                .epsilon(1e-14));
  }

  SUBCASE("quadratic amplitude scaling") {
    FieldState s2 = s;
    s2.phi *= 2.0;
    s2.pi *= 2.0;
    VectorField j2 = current_case(s2, p, eta);
    CHECK((j2 - 4.0 * j).cwiseAbs().maxCoeff() <= 1e-12 * j.cwiseAbs().maxCoeff());
  }

  SUBCASE("parity under phi, pi -> -phi, -pi") {
    FieldState sm = s;
    sm.phi = -sm.phi;
    sm.pi = -sm.pi;
    CHECK((current_case(sm, p, eta) - j).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("rest mode carries no spatial current") {
    FieldState rest = init_plane_wave(g, p, z, eta, 0, 1, 1.0);
    VectorField jr = current_case(rest, p, eta);
    CHECK(jr.rightCols(3).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(jr.col(0).minCoeff() > 0.0);
  }
}

TEST_CASE("general current reduces to the case current on locked states") {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, 0);
  GridSpec g = GridSpec::make(48, 0.25, 0.1);
  PhysicalParams p = PhysicalParams::natural(1.2, 0.6);

  for (CaseTag c : {CaseTag::I, CaseTag::II}) {
    FieldState s = locked_state(g, p, eta, z, c, 101u);
    // nonzero potential well below the singularity
    for (int i = 0; i < g.n_sites; ++i) {
      s.A(i, 0) = 0.3 * std::sin(2 * kPi * g.site_x(i) / g.length());
      s.A(i, 3) = 0.2;
    }
    VectorField gap = current_general(s, p, eta) - current_case(s, p, eta);
    double scale = current_case(s, p, eta).cwiseAbs().maxCoeff();
    CHECK(gap.cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }

  // a generic unlocked state is a witness that the check is non-trivial
  FieldState w = FieldState::zero(g, ModeTag::External);
  w.phi = random_field(g.n_sites, 55u);
  w.pi = random_field(g.n_sites, 56u);
  VectorField gap = current_general(w, p, eta) - current_case(w, p, eta);
  CHECK(gap.cwiseAbs().maxCoeff() >= 1e-3);
}

TEST_CASE("general current throws at the interaction singularity") {
  EtaSet eta = build_eta();
  GridSpec g = GridSpec::make(32, 0.25, 0.1);
  PhysicalParams p = PhysicalParams::natural(1.0, 1.0);
  FieldState s = FieldState::zero(g, ModeTag::CoupledNonlinear);
  s.phi = random_field(g.n_sites, 61u);
  s.A.col(0).setConstant(1.0);
  CHECK_THROWS_AS(current_general(s, p, eta), NumericalError);
}

TEST_CASE("charge: plane-wave value and site-relabeling invariance") {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, 0);
  GridSpec g = GridSpec::make(64, 0.25, 0.1);
  PhysicalParams p = PhysicalParams::natural(1.0, 0.4);

  // exp(Z theta) is orthogonal, so each site has |phi| = amplitude
  FieldState s = init_plane_wave(g, p, z, eta, 3, 1, 0.9);
  double expect = 2.0 * p.e * p.kappa * p.kappa * 0.81 * g.length();
  CHECK(charge(s, p, eta) == doctest::Approx(expect).epsilon(1e-12));

  FieldState shifted = s;
  for (int i = 0; i < g.n_sites; ++i) {
    shifted.phi.row((i + 7) % g.n_sites) = s.phi.row(i);
    shifted.pi.row((i + 7) % g.n_sites) = s.pi.row(i);
  }
  CHECK(charge(shifted, p, eta) == doctest::Approx(charge(s, p, eta)).epsilon(1e-14));
}

TEST_CASE("Hamiltonian is conserved by the free evolution") {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, 0);
  GridSpec g = GridSpec::make(64, 0.25, 0.02);
  PhysicalParams p = PhysicalParams::natural(1.0, 0.0);
  FieldState s = init_gaussian(g, p, z, eta, 8.0, 1.5, 0.8, 1.0, 1);

  double h0 = hamiltonian_density(s, p, eta).sum() * g.dx;
  CHECK(h0 > 0.0);
  EvolutionMode mode{ModeTag::Free};
  for (int n = 0; n < 300; ++n) s = step_rk4(s, mode, p, eta, z);
  double h1 = hamiltonian_density(s, p, eta).sum() * g.dx;
  CHECK(std::abs(h1 - h0) <= 1e-7 * std::abs(h0));
}

TEST_CASE("interaction Lagrangian vanishes on both case locks") {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, 0);
  GridSpec g = GridSpec::make(48, 0.25, 0.1);
  PhysicalParams p = PhysicalParams::natural(1.1, 0.5);

  for (CaseTag c : {CaseTag::I, CaseTag::II}) {
    FieldState s = locked_state(g, p, eta, z, c, 71u);
    for (int i = 0; i < g.n_sites; ++i) s.A(i, 0) = 0.4, s.A(i, 2) = -0.3;
    CHECK(lagrangian_DI_density(s, p, eta).cwiseAbs().maxCoeff() <= 1e-12);
  }

  FieldState w = FieldState::zero(g, ModeTag::External);
  w.phi = random_field(g.n_sites, 81u);
  w.pi = random_field(g.n_sites, 82u);
  CHECK(lagrangian_DI_density(w, p, eta).cwiseAbs().maxCoeff() >= 1e-3);
}

TEST_CASE("electromagnetic Lagrangian density") {
  GridSpec g = GridSpec::make(64, 0.25, 0.1);
  FieldState s = FieldState::zero(g, ModeTag::CoupledNonlinear);

  SUBCASE("uniform E^1 gives (E^1)^2 / 8 pi per site") {
    s.E.col(1).setConstant(0.6);
    Eigen::VectorXd d = lagrangian_em_density(s);
    for (int i = 0; i < g.n_sites; ++i)
      CHECK(d(i) == doctest::Approx(0.36 / (8.0 * kPi)).epsilon(1e-14));
  }

  SUBCASE("static A^1 sine gives a negative magnetic-type density") {
    const double k = 2 * kPi * 2 / g.length();
    for (int i = 0; i < g.n_sites; ++i) s.A(i, 1) = std::sin(k * g.site_x(i));
    Eigen::VectorXd d = lagrangian_em_density(s);
    CHECK(d.maxCoeff() <= 0.0);
    double expect = -k * k / (8.0 * kPi);  // at the cos = 1 site (x = 0)
    CHECK(d(0) == doctest::Approx(expect).epsilon(1e-4));
  }

  SUBCASE("pure A^3 profile contributes nothing") {
    for (int i = 0; i < g.n_sites; ++i)
      s.A(i, 3) = std::cos(2 * kPi * g.site_x(i) / g.length());
    CHECK(lagrangian_em_density(s).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("gauge residual") {
  GridSpec g = GridSpec::make(64, 0.25, 0.1);
  FieldState s = FieldState::zero(g, ModeTag::CoupledNonlinear);
  CHECK(gauge_residual(s) == 0.0);

  const double k = 2 * kPi * 3 / g.length();
  for (int i = 0; i < g.n_sites; ++i) s.A(i, 3) = std::sin(k * g.site_x(i));
  // E^0 = -d3 A^3 cancels the residual
  VectorField dA = spatial_derivative(s.A, g);
  s.E.col(0) = -dA.col(3);
  CHECK(gauge_residual(s) <= 1e-12);
  s.E.col(0).setZero();
  CHECK(gauge_residual(s) == doctest::Approx(dA.col(3).cwiseAbs().maxCoeff()));
}

TEST_CASE("case-equation residuals vanish on locked states") {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, 0);
  GridSpec g = GridSpec::make(64, 0.25, 0.1);
  PhysicalParams p = PhysicalParams::natural(1.3, 0.5);

  for (CaseTag c : {CaseTag::I, CaseTag::II}) {
    FieldState s = locked_state(g, p, eta, z, c, 91u);
    for (int i = 0; i < g.n_sites; ++i) s.A(i, 0) = 0.2, s.A(i, 3) = -0.1;
    auto [r17, r19] = residual_case_equations(s, z, p, eta, c);
    CHECK(r17 <= 1e-12);
    CHECK(r19 <= 1e-12);
  }

  // the wrong case lock is rejected
  FieldState s = locked_state(g, p, eta, z, CaseTag::I, 92u);
  auto [r17, r19] = residual_case_equations(s, z, p, eta, CaseTag::II);
  CHECK(r17 >= 1e-2);
  (void)r19;
}

TEST_CASE("the two case residual fields are Z-duals on arbitrary states") {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, 0);
  GridSpec g = GridSpec::make(48, 0.25, 0.1);
  PhysicalParams p = PhysicalParams::natural(1.0, 0.8);

  FieldState s = FieldState::zero(g, ModeTag::External);
  s.phi = random_field(g.n_sites, 111u);
  s.pi = random_field(g.n_sites, 112u);
  for (int i = 0; i < g.n_sites; ++i) s.A(i, 0) = 0.3, s.A(i, 1) = -0.2;

  for (CaseTag c : {CaseTag::I, CaseTag::II}) {
    auto [r17, r19] = case_residual_fields(s, z, p, eta, c);
    SpinorField dual = r17 * z.z.transpose();
    CHECK((r19 - dual).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(r17.cwiseAbs().maxCoeff() >= 1e-2);  // non-trivial on random data
  }
}

TEST_CASE("second-order field-equation residual over an RK4 triplet") {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, 0);
  GridSpec g = GridSpec::make(64, 0.25, 0.01);
  PhysicalParams p = PhysicalParams::natural(1.0, 0.0);
  FieldState a = init_gaussian(g, p, z, eta, 8.0, 1.5, 0.6, 1.0, 1);
  EvolutionMode mode{ModeTag::Free};
  FieldState b = step_rk4(a, mode, p, eta, z);
  FieldState c = step_rk4(b, mode, p, eta, z);
  // centered difference of (c/K)Pi in time is 2nd order in dt
  CHECK(residual_lagrange_phi(a, b, c, p, eta) <= 5e-4);
}

TEST_CASE("continuity residual on an analytic conserved current") {
  GridSpec g = GridSpec::make(128, 0.1, 0.02);
  const double k = 2 * kPi * 4 / g.length();
  const double w = k;  // light-like: j = (f, 0, 0, f), f = sin(kx - wt)
  std::vector<VectorField> series;
  for (int m = 0; m < 5; ++m) {
    VectorField j = VectorField::Zero(g.n_sites, 4);
    double t = m * g.dt;
    for (int i = 0; i < g.n_sites; ++i) {
      double f = std::sin(k * g.site_x(i) - w * t);
      j(i, 0) = f;
      j(i, 3) = f;
    }
    series.push_back(j);
  }
  // d0 j^0 + d3 j^3 = 0 analytically; discretization leaves
  // O(dt^2) + O(dx^4) remainders
  double r = continuity_residual(series, g, g.dt);
  CHECK(r <= w * (w * g.dt) * (w * g.dt) / 6.0 + k * std::pow(k * g.dx, 4) / 30.0 + 1e-12);
  CHECK_THROWS_AS(continuity_residual({series[0], series[1]}, g, g.dt), ValidationError);
}

TEST_CASE("diagnostics CSV layout") {
  CHECK(std::string(DiagnosticsRecord::csv_header()) ==
        "t,Q,H_total,L_DI_total,L_em_total,gauge_norm,x_norm,y_norm,continuity_norm");
  DiagnosticsRecord r;
  r.t = 0.5;
  r.Q = 1.0 / 3.0;
  std::string row = r.csv_row();
  CHECK(row.substr(0, 4) == "0.5,");
  CHECK(std::count(row.begin(), row.end(), ',') == 8);
  // full precision round trip
  CHECK(std::stod(row.substr(4)) == 1.0 / 3.0);
}
