#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rdfield/commands.hpp"
#include "rdfield/snapshot.hpp"

using namespace rdf;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  fs::path p = fs::temp_directory_path() / "rdfield_test_io";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string base_config(const std::string& mode, int n_steps,
                        const std::string& extra = "") {
  return std::string(R"({
    "format-version": 1,
    "grid": {"n_sites": 64, "dx": 0.25, "dt": 0.1},
    "params": {"kappa": 1.0, "e": 0.2},
    "mode": ")") + mode + R"(",
    "z_index": 0,
    "initial": {"type": "gaussian", "center": 8.0, "width": 1.5,
                "carrier_k": 0.8, "amplitude": 1.0, "branch": 1},
    "n_steps": )" + std::to_string(n_steps) + R"(,
    "sample_every": 5)" + extra + "\n}";
}

}  // namespace

TEST_CASE("snapshot round trip is bit-exact") {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, 1);
  GridSpec g = GridSpec::make(48, 0.25, 0.1);
  PhysicalParams p = PhysicalParams::natural(1.3, 0.7);
  FieldState s = init_gaussian(g, p, z, eta, 6.0, 1.5, 0.9, 0.8, 1,
                               ModeTag::CoupledNonlinear);
  s.t = 1.0 / 3.0;
  s.A.col(3).setConstant(0.1);
  s.E.col(0).setConstant(-0.05);

  fs::path path = temp_dir() / "roundtrip.snap";
  write_snapshot(path.string(), s, p, z.index);
  SnapshotData back = read_snapshot(path.string());

  CHECK(back.state.grid.n_sites == g.n_sites);
  CHECK(back.state.grid.dx == g.dx);
  CHECK(back.state.grid.dt == g.dt);
  CHECK(back.state.t == s.t);
  CHECK(back.state.tag == ModeTag::CoupledNonlinear);
  CHECK(back.params.kappa == p.kappa);
  CHECK(back.params.e == p.e);
  CHECK(back.z_index == z.index);
  // payload must round trip bitwise
  CHECK(std::memcmp(back.state.phi.data(), s.phi.data(), sizeof(double) * 48 * 8) == 0);
  CHECK(std::memcmp(back.state.pi.data(), s.pi.data(), sizeof(double) * 48 * 8) == 0);
  CHECK(std::memcmp(back.state.A.data(), s.A.data(), sizeof(double) * 48 * 4) == 0);
  CHECK(std::memcmp(back.state.E.data(), s.E.data(), sizeof(double) * 48 * 4) == 0);

  SUBCASE("truncated payload is rejected") {
    std::string bytes = slurp(path);
    fs::path bad = temp_dir() / "truncated.snap";
    std::ofstream f(bad, std::ios::binary);
    f.write(bytes.data(), std::streamsize(bytes.size() - 16));
    f.close();
    CHECK_THROWS_AS(read_snapshot(bad.string()), ValidationError);
  }

  SUBCASE("missing file is rejected") {
    CHECK_THROWS_AS(read_snapshot((temp_dir() / "nope.snap").string()), ValidationError);
  }
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(parse_config(base_config("free", 10)));

  SUBCASE("unknown keys are rejected at every level") {
    CHECK_THROWS_AS(parse_config(R"({"format-version": 1, "bogus": 1})"),
                    ValidationError);
    std::string cfg = base_config("free", 10);
    cfg.replace(cfg.find("\"dx\""), 4, "\"dX\"");
    CHECK_THROWS_AS(parse_config(cfg), ValidationError);
  }

  SUBCASE("format version must be 1") {
    std::string cfg = base_config("free", 10);
    cfg.replace(cfg.find("\"format-version\": 1"), 19, "\"format-version\": 2");
    CHECK_THROWS_AS(parse_config(cfg), ValidationError);
  }

  SUBCASE("n_steps must be positive") {
    CHECK_THROWS_AS(parse_config(base_config("free", 0)), ValidationError);
  }

  SUBCASE("gaussian width must resolve the grid") {
    std::string cfg = base_config("free", 10);
    cfg.replace(cfg.find("\"width\": 1.5"), 12, "\"width\": 0.5");
    CHECK_THROWS_AS(parse_config(cfg), ValidationError);
  }

  SUBCASE("plane-wave mode number is Nyquist-limited") {
    std::string cfg = R"({
      "format-version": 1,
      "grid": {"n_sites": 64, "dx": 0.25, "cfl_factor": 0.4},
      "params": {"kappa": 1.0, "e": 0.0},
      "mode": "free",
      "initial": {"type": "plane-wave", "mode_number": 40, "branch": 1, "amplitude": 1.0},
      "n_steps": 10})";
    CHECK_THROWS_AS(parse_config(cfg), ValidationError);
  }

  SUBCASE("dt and cfl_factor are mutually exclusive") {
    std::string cfg = base_config("free", 10);
    cfg.replace(cfg.find("\"dt\": 0.1"), 9, "\"dt\": 0.1, \"cfl_factor\": 0.5");
    CHECK_THROWS_AS(parse_config(cfg), ValidationError);
  }

  SUBCASE("external mode needs a potential") {
    CHECK_THROWS_AS(parse_config(base_config("external", 10)), ValidationError);
    std::string with_pot = base_config(
        "external", 10,
        R"(,
    "potential": {"profile": "constant", "value": [0.3, 0.0, 0.0, 0.1]})");
    CHECK_NOTHROW(parse_config(with_pot));
  }

  SUBCASE("bad mode and bad branch") {
    CHECK_THROWS_AS(parse_config(base_config("warp", 10)), ValidationError);
    std::string cfg = base_config("free", 10);
    cfg.replace(cfg.find("\"branch\": 1"), 11, "\"branch\": 2");
    CHECK_THROWS_AS(parse_config(cfg), ValidationError);
  }
}

TEST_CASE("potential profiles") {
  GridSpec g = GridSpec::make(32, 0.5, 0.2);
  PotentialProfile c;
  c.kind = PotentialProfile::Kind::Constant;
  c.constant = FourVector(0.5, 0.0, -0.25, 0.0);
  VectorField A = potential_values(c, g);
  CHECK(A(7, 0) == 0.5);
  CHECK(A(11, 2) == -0.25);
  CHECK(A.col(3).cwiseAbs().maxCoeff() == 0.0);

  PotentialProfile s;
  s.kind = PotentialProfile::Kind::Sine;
  s.component = 3;
  s.amplitude = 0.4;
  s.mode_number = 1;
  VectorField As = potential_values(s, g);
  CHECK(As(0, 3) == doctest::Approx(0.0));
  CHECK(As(8, 3) == doctest::Approx(0.4));  // quarter period of mode 1
  CHECK(As.col(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("initial-state construction respects the mode") {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, 0);

  RunConfig cfg = parse_config(base_config("coupled-linear-II", 10));
  FieldState s = build_initial_state(cfg, eta, z);
  XYFields xy = xy_transform(s, z, cfg.params);
  CHECK(xy.y_field.cwiseAbs().maxCoeff() <= 1e-15);  // case II lock

  RunConfig cfree = parse_config(base_config("free", 10));
  FieldState sf = build_initial_state(cfree, eta, z);
  XYFields xyf = xy_transform(sf, z, cfree.params);
  CHECK(xyf.x_field.cwiseAbs().maxCoeff() <= 1e-15);  // case I lock

  SUBCASE("gauge-clean potential for coupled modes") {
    std::string cfg_text = base_config(
        "coupled-nonlinear", 10,
        R"(,
    "potential": {"profile": "sine", "component": 3, "amplitude": 0.2, "mode_number": 2})");
    RunConfig cn = parse_config(cfg_text);
    FieldState sn = build_initial_state(cn, eta, z);
    CHECK(gauge_residual(sn) <= 1e-12);
    CHECK(sn.A.col(3).cwiseAbs().maxCoeff() > 0.1);
  }

  SUBCASE("snapshot initial data must match the configured grid") {
    GridSpec g = GridSpec::make(32, 0.25, 0.1);
    PhysicalParams p = PhysicalParams::natural(1.0, 0.2);
    FieldState snap = FieldState::zero(g, ModeTag::Free);
    fs::path path = temp_dir() / "wrong_grid.snap";
    write_snapshot(path.string(), snap, p, 0);
    std::string cfg_text = base_config("free", 10);
    auto pos = cfg_text.find("{\"type\": \"gaussian\"");
    auto end = cfg_text.find("}", pos);
    cfg_text.replace(pos, end - pos + 1,
                     "{\"type\": \"snapshot\", \"path\": \"" + path.string() + "\"}");
    RunConfig cs = parse_config(cfg_text);
    CHECK_THROWS_AS(build_initial_state(cs, eta, z), ValidationError);
  }
}

TEST_CASE("algebra-verify and find-z commands") {
  std::ostringstream out;
  CHECK(cmd_algebra_verify(out) == kExitOk);
  CHECK(out.str().find("commutant dimension: 4") != std::string::npos);
  CHECK(out.str().find("algebra-verify: PASS") != std::string::npos);

  std::ostringstream zout;
  CHECK(cmd_find_z(0, zout) == kExitOk);
  CHECK(zout.str().find("Z[0]:") != std::string::npos);
  CHECK(zout.str().find("||Z^2 + I||") != std::string::npos);
}

TEST_CASE("dispersion command") {
  std::string cfg_text = R"({
    "format-version": 1,
    "grid": {"n_sites": 128, "dx": 0.1, "dt": 0.025},
    "params": {"kappa": 1.0, "e": 0.0},
    "mode": "free",
    "initial": {"type": "plane-wave", "mode_number": 0, "branch": 1, "amplitude": 1.0},
    "n_steps": 1,
    "dispersion": {"mode_numbers": [0, 1, 2], "periods": 3.0}})";
  RunConfig cfg = parse_config(cfg_text);
  std::ostringstream out;
  CHECK(cmd_dispersion(cfg, out) == kExitOk);
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "k omega_measured omega_exact rel_error");
  int rows = 0;
  double k, wm, we, rel;
  while (lines >> k >> wm >> we >> rel) {
    CHECK(std::abs(we - std::sqrt(k * k + 1.0)) <= 1e-8);  // %.10g table output
    CHECK(rel <= 1e-3);
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("evolve command writes diagnostics and a final snapshot, deterministically") {
  EtaSet eta = build_eta();
  ZStructure z = find_z(eta, 0);
  RunConfig cfg = parse_config(base_config("coupled-linear-I", 20));

  fs::path d1 = temp_dir() / "run1", d2 = temp_dir() / "run2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  std::ostringstream out1, out2;
  CHECK(cmd_evolve(cfg, d1.string(), out1) == kExitOk);
  CHECK(cmd_evolve(cfg, d2.string(), out2) == kExitOk);

  std::string csv = slurp(d1 / "diagnostics.csv");
  CHECK(csv.rfind("t,Q,H_total,L_DI_total,L_em_total,gauge_norm,x_norm,y_norm,"
                  "continuity_norm\n", 0) == 0);
  // header + 5 samples (steps 0,5,10,15,20)
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

  // reruns are byte-identical
  CHECK(csv == slurp(d2 / "diagnostics.csv"));
  CHECK(slurp(d1 / "final.snap") == slurp(d2 / "final.snap"));

  SnapshotData fin = read_snapshot((d1 / "final.snap").string());
  CHECK(fin.state.t == doctest::Approx(2.0));
  CHECK(fin.state.tag == ModeTag::CoupledLinearI);
}

TEST_CASE("reduce-check command passes on a case-locked configuration") {
  std::string cfg_text = base_config(
      "coupled-linear-I", 10,
      R"(,
    "potential": {"profile": "sine", "component": 0, "amplitude": 0.3, "mode_number": 1})");
  RunConfig cfg = parse_config(cfg_text);
  std::ostringstream out;
  CHECK(cmd_reduce_check(cfg, out) == kExitOk);
  CHECK(out.str().find("reduce-check: PASS") != std::string::npos);
  CHECK(out.str().find("FAIL") == std::string::npos);
  CHECK(out.str().find("fault injection witness") != std::string::npos);
}

TEST_CASE("convergence command reports fourth-order decay") {
  std::string cfg_text = R"({
    "format-version": 1,
    "grid": {"n_sites": 32, "dx": 1.0, "cfl_factor": 0.25},
    "params": {"kappa": 1.0, "e": 0.0},
    "mode": "free",
    "initial": {"type": "plane-wave", "mode_number": 2, "branch": 1, "amplitude": 1.0},
    "n_steps": 1,
    "convergence": {"levels": 3, "t_final": 1.0, "mode_number": 2}})";
  RunConfig cfg = parse_config(cfg_text);
  std::ostringstream out;
  CHECK(cmd_convergence(cfg, out) == kExitOk);
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "dx dt error observed_order");
  std::vector<double> orders;
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream row(line);
    double dx, dt, err, order;
    row >> dx >> dt >> err;
    if (row >> order) orders.push_back(order);
  }
  REQUIRE(orders.size() == 2);
  for (double o : orders) CHECK(o >= 3.5);
}
