#ifndef RDFIELD_LATTICE_HPP
#define RDFIELD_LATTICE_HPP

#include <string>

#include "rdfield/algebra.hpp"

namespace rdf {

/// Site-major lattice arrays: row i holds the values at site i.
using SpinorField = Eigen::Matrix<double, Eigen::Dynamic, 8, Eigen::RowMajor>;
using VectorField = Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor>;

/// Periodic 1-D grid along x^3.
struct GridSpec {
  int n_sites = 0;
  double dx = 0.0;
  double dt = 0.0;

  double length() const { return n_sites * dx; }
  double site_x(int i) const { return i * dx; }

  /// Validates n_sites >= 8, dx > 0, 0 < dt <= dx.
  static GridSpec make(int n_sites, double dx, double dt);
  /// dt = cfl_factor * dx, cfl_factor in (0, 1], default 0.5.
  static GridSpec make_cfl(int n_sites, double dx, double cfl_factor = 0.5);
};

/// Natural units c = hbar = 1, so K = kappa = m. K and kappa are kept as
/// separate named values to mirror the formulas; equality is enforced.
struct PhysicalParams {
  double kappa = 1.0;  // mc/hbar
  double e = 0.0;      // point charge
  double K = 1.0;      // mc^2, equal to kappa in natural units

  static PhysicalParams natural(double kappa, double e);
};

enum class ModeTag {
  Free,
  External,
  CoupledLinearI,
  CoupledLinearII,
  CoupledNonlinear,
};

const char* to_string(ModeTag tag);
ModeTag mode_from_string(const std::string& s);

enum class CaseTag { I, II };

/// Full lattice state: spinor field phi, conjugate momentum pi
/// (Pi_{Phi+}), potential A^alpha and its time derivative E^alpha.
struct FieldState {
  GridSpec grid;
  double t = 0.0;
  SpinorField phi;  // n x 8
  SpinorField pi;   // n x 8
  VectorField A;    // n x 4
  VectorField E;    // n x 4, E^alpha = d0 A^alpha
  ModeTag tag = ModeTag::Free;

  static FieldState zero(const GridSpec& grid, ModeTag tag);
  bool all_finite() const;
};

struct XYFields {
  SpinorField x_field;  // (c/K) Pi - Z kappa Phi
  SpinorField y_field;  // (c/K) Pi + Z kappa Phi
};

/// 4th-order periodic central difference d/dx^3, applied row-wise.
template <typename Derived>
typename Derived::PlainObject spatial_derivative(const Eigen::MatrixBase<Derived>& f,
                                                 const GridSpec& grid) {
  const int n = grid.n_sites;
  if (n < 5) throw ValidationError("spatial_derivative: need at least 5 sites");
  typename Derived::PlainObject d(n, f.cols());
  const double w = 1.0 / (12.0 * grid.dx);
  for (int i = 0; i < n; ++i) {
    const int ip1 = (i + 1) % n, ip2 = (i + 2) % n;
    const int im1 = (i + n - 1) % n, im2 = (i + n - 2) % n;
    d.row(i) = w * (-f.row(ip2) + 8.0 * f.row(ip1) - 8.0 * f.row(im1) + f.row(im2));
  }
  return d;
}

/// 4th-order periodic second derivative d^2/d(x^3)^2.
template <typename Derived>
typename Derived::PlainObject spatial_second_derivative(
    const Eigen::MatrixBase<Derived>& f, const GridSpec& grid) {
  const int n = grid.n_sites;
  if (n < 5) throw ValidationError("spatial_second_derivative: need at least 5 sites");
  typename Derived::PlainObject d(n, f.cols());
  const double w = 1.0 / (12.0 * grid.dx * grid.dx);
  for (int i = 0; i < n; ++i) {
    const int ip1 = (i + 1) % n, ip2 = (i + 2) % n;
    const int im1 = (i + n - 1) % n, im2 = (i + n - 2) % n;
    d.row(i) = w * (-f.row(ip2) + 16.0 * f.row(ip1) - 30.0 * f.row(i) +
                    16.0 * f.row(im1) - f.row(im2));
  }
  return d;
}

/// Plane-wave initial data at t = 0: phi(x) = amplitude exp(Z(-k x)) chi
/// with k = 2 pi mode_number / L, momentum locked to the case-I relation
/// (c/K) Pi = Z kappa Phi, A = E = 0.
FieldState init_plane_wave(const GridSpec& grid, const PhysicalParams& params,
                           const ZStructure& z, const EtaSet& eta, int mode_number,
                           int branch, double amplitude, ModeTag tag = ModeTag::Free);

/// Gaussian wave packet with carrier exp(Z(-carrier_k x)); envelope uses
/// the periodic wrap distance. width must be at least 4 dx.
FieldState init_gaussian(const GridSpec& grid, const PhysicalParams& params,
                         const ZStructure& z, const EtaSet& eta, double center,
                         double width, double carrier_k, double amplitude, int branch,
                         ModeTag tag = ModeTag::Free);

/// Locks the momentum to the selected case: I sets Pi = (K/c) kappa Z Phi
/// (X = 0), II the negative (Y = 0). Idempotent; phi, A, E untouched.
FieldState enforce_case(FieldState state, const ZStructure& z, CaseTag c,
                        const PhysicalParams& params);

XYFields xy_transform(const FieldState& state, const ZStructure& z,
                      const PhysicalParams& params);

/// Inverse of xy_transform: (c/K) Pi = (x+y)/2, kappa Phi = Z(x-y)/2.
void xy_reconstruct(const XYFields& xy, const ZStructure& z, const PhysicalParams& params,
                    SpinorField& phi_out, SpinorField& pi_out);

}  // namespace rdf

#endif
