#include "rdfield/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace rdf {

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace {

void write_array(std::ofstream& f, const double* data, std::size_t count) {
  f.write(reinterpret_cast<const char*>(data),
          static_cast<std::streamsize>(count * sizeof(double)));
}

void read_array(std::ifstream& f, double* data, std::size_t count) {
  f.read(reinterpret_cast<char*>(data),
         static_cast<std::streamsize>(count * sizeof(double)));
  if (!f) throw ValidationError("snapshot: truncated payload");
}

}  // namespace

void write_snapshot(const std::string& path, const FieldState& state,
                    const PhysicalParams& params, int z_index) {
  nlohmann::ordered_json header;
  header["format-version"] = 1;
  header["n_sites"] = state.grid.n_sites;
  // nlohmann serializes doubles with shortest round-trip precision, so the
  // header values reparse bit-exactly.
  header["dx"] = state.grid.dx;
  header["dt"] = state.grid.dt;
  header["t"] = state.t;
  header["kappa"] = params.kappa;
  header["e"] = params.e;
  header["mode-tag"] = to_string(state.tag);
  header["z-index"] = z_index;

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("snapshot: cannot open for writing: " + path);
  f << header.dump() << '\n';
  const std::size_t n = static_cast<std::size_t>(state.grid.n_sites);
  write_array(f, state.phi.data(), n * 8);  // row-major = site-major
  write_array(f, state.pi.data(), n * 8);
  write_array(f, state.A.data(), n * 4);
  write_array(f, state.E.data(), n * 4);
  if (!f) throw ValidationError("snapshot: write failed: " + path);
}

SnapshotData read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("snapshot: cannot open: " + path);
  std::string line;
  if (!std::getline(f, line)) throw ValidationError("snapshot: missing header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("snapshot: bad header: ") + ex.what());
  }
  if (header.value("format-version", -1) != 1)
    throw ValidationError("snapshot: unsupported format-version");

  auto num = [&](const char* key) {
    const auto& v = header.at(key);
    return v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>();
  };

  SnapshotData snap;
  const int n = header.at("n_sites").get<int>();
  GridSpec grid = GridSpec::make(n, num("dx"), num("dt"));
  snap.state = FieldState::zero(grid, mode_from_string(header.at("mode-tag")));
  snap.state.t = num("t");
  snap.params = PhysicalParams::natural(num("kappa"), num("e"));
  snap.z_index = header.at("z-index").get<int>();

  const std::size_t ns = static_cast<std::size_t>(n);
  read_array(f, snap.state.phi.data(), ns * 8);
  read_array(f, snap.state.pi.data(), ns * 8);
  read_array(f, snap.state.A.data(), ns * 4);
  read_array(f, snap.state.E.data(), ns * 4);
  if (!snap.state.all_finite())
    throw NumericalError("snapshot: non-finite field data in " + path);
  return snap;
}

}  // namespace rdf
