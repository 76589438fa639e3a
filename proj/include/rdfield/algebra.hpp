#ifndef RDFIELD_ALGEBRA_HPP
#define RDFIELD_ALGEBRA_HPP

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rdfield/errors.hpp"

namespace rdf {

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat8i = Eigen::Matrix<std::int64_t, 8, 8>;
using Spinor8 = Eigen::Matrix<double, 8, 1>;
using RowSpinor8 = Eigen::Matrix<double, 1, 8>;
using FourVector = Eigen::Vector4d;

/// The four real 8x8 eta matrices with metric diag(+1,-1,-1,-1).
/// eta^0 = diag(I4, -I4); eta^i are antisymmetric block matrices built
/// from the 4x4 a^i blocks. Entries are exact integers; the integer
/// copies back the zero-tolerance anticommutator checks.
struct EtaSet {
  std::array<Mat8i, 4> eta_int;
  std::array<Mat8, 4> eta;
  std::array<double, 4> metric;  // +1, -1, -1, -1
};

/// Constructs the EtaSet and verifies the anticommutation relation
/// {eta^a, eta^b} = 2 g^{ab} I and eta^0 (eta^j)^T = eta^j eta^0 in
/// integer arithmetic. Throws NumericalError if the tables are broken.
EtaSet build_eta();

/// eta^a eta^b + eta^b eta^a, exact.
Mat8i anticommutator(const EtaSet& eta, int alpha, int beta);

/// bar(s) = s^T eta^0: first four components unchanged, last four negated.
RowSpinor8 bar(const Spinor8& s, const EtaSet& eta);

/// Minimal-coupling matrix a = (e/K) A_mu eta^mu
///                          = (e/K)(A^0 eta^0 - A^1 eta^1 - A^2 eta^2 - A^3 eta^3).
Mat8 build_a(const FourVector& A, double e_over_K, const EtaSet& eta);

/// The scalar (e/K)^2 A_mu A^mu; equals the square of build_a as a
/// multiple of the identity.
double a_squared_scalar(const FourVector& A, double e_over_K);

/// Orthonormal (Frobenius) basis of { M : M eta^a = eta^a M for all a }.
/// Deterministic: nullspace of the stacked commutation constraints,
/// canonicalised by Gram-Schmidt over projected unit matrices scanned in
/// row-major order, sign fixed so the first significant entry is positive.
std::vector<Mat8> commutant_basis(const EtaSet& eta);

/// A complex structure on the real spinor space: commutes with every
/// eta^a, Z^2 = -I, Z^T = -Z = Z^{-1}.
struct ZStructure {
  Mat8 z;
  int index = 0;
};

/// Deterministic Z construction: antisymmetric part of the commutant
/// basis, orthonormalised, each generator rescaled so Z^2 = -I.
/// `index` selects among the resulting generators (three for this
/// algebra). Throws ValidationError for a bad index, NumericalError if
/// the commutant holds no antisymmetric square root of -I.
ZStructure find_z(const EtaSet& eta, int index);

/// Number of Z generators available to find_z.
int z_generator_count(const EtaSet& eta);

/// exp(Z theta) = cos(theta) I + sin(theta) Z, exact for Z^2 = -I.
Mat8 exp_z(const Mat8& z, double theta);

struct PlaneWaveMode {
  double k = 0.0;
  double omega = 0.0;
  int branch = 1;  // sign of the kappa eigenvalue
  Spinor8 chi;     // unit norm, (omega eta^0 - k eta^3) chi = branch kappa chi
};

/// Free plane-wave mode data: omega = sqrt(k^2 + kappa^2) and a unit
/// eigenspinor obtained by projecting canonical seeds with
/// (branch kappa I + omega eta^0 - k eta^3) / (2 kappa).
/// The lattice field exp(Z(omega t - k x)) chi solves the free case-I
/// equation for branch = +1 (and the case-II one for branch = -1).
PlaneWaveMode plane_wave_mode(const EtaSet& eta, const ZStructure& z, double k,
                              int branch, double kappa);

/// Summary of the algebra self-checks used by `algebra-verify` and tests.
struct AlgebraVerification {
  bool anticommutators_exact = false;
  bool eq14_exact = false;
  std::string failing_pair;                   // first failing (alpha,beta), if any
  std::array<std::array<double, 4>, 4> metric_observed{};
  double max_a_squared_residual = 0.0;        // over random draws
  int commutant_dim = 0;
  int z_count = 0;
  double max_z_residual = 0.0;                // worst of the Z invariants
  bool ok() const;
};

AlgebraVerification verify_algebra(const EtaSet& eta, int n_random = 100,
                                   unsigned seed = 20240817u);

}  // namespace rdf

#endif
