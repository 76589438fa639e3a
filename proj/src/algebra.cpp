#include "rdfield/algebra.hpp"

#include <cmath>
#include <random>

namespace rdf {

namespace {

Mat8i assemble_eta_i(const int block[4][4]) {
  Mat8i m = Mat8i::Zero();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      m(r, 4 + c) = block[r][c];        // top-right: a^i
      m(4 + r, c) = -block[c][r];       // bottom-left: -(a^i)^T
    }
  return m;
}

}  // namespace

EtaSet build_eta() {
  // 4x4 blocks as printed; eta^0 = diag(I4, -I4) is forced by the
  // anticommutation relation (the verification below is a hard check).
  static const int a1[4][4] = {{0, 0, 0, 1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}};
  static const int a2[4][4] = {{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}};
  static const int a3[4][4] = {{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};

  EtaSet s;
  s.metric = {1.0, -1.0, -1.0, -1.0};
  s.eta_int[0] = Mat8i::Zero();
  for (int d = 0; d < 8; ++d) s.eta_int[0](d, d) = d < 4 ? 1 : -1;
  s.eta_int[1] = assemble_eta_i(a1);
  s.eta_int[2] = assemble_eta_i(a2);
  s.eta_int[3] = assemble_eta_i(a3);
  for (int a = 0; a < 4; ++a) s.eta[a] = s.eta_int[a].cast<double>();

  // Startup verification, exact integer arithmetic.
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      Mat8i ac = s.eta_int[a] * s.eta_int[b] + s.eta_int[b] * s.eta_int[a];
      std::int64_t g = (a == b) ? (a == 0 ? 2 : -2) : 0;
      Mat8i expect = g * Mat8i::Identity();
      if (ac != expect)
        throw NumericalError("build_eta: anticommutator (" + std::to_string(a) + "," +
                             std::to_string(b) + ") violates the metric relation");
    }
  for (int j = 1; j < 4; ++j) {
    Mat8i lhs = s.eta_int[0] * s.eta_int[j].transpose();
    Mat8i rhs = s.eta_int[j] * s.eta_int[0];
    if (lhs != rhs)
      throw NumericalError("build_eta: eta^0 (eta^" + std::to_string(j) +
                           ")^T != eta^" + std::to_string(j) + " eta^0");
  }
  return s;
}

Mat8i anticommutator(const EtaSet& eta, int alpha, int beta) {
  if (alpha < 0 || alpha > 3 || beta < 0 || beta > 3)
    throw ValidationError("anticommutator: index out of range");
  return eta.eta_int[alpha] * eta.eta_int[beta] + eta.eta_int[beta] * eta.eta_int[alpha];
}

RowSpinor8 bar(const Spinor8& s, const EtaSet& eta) {
  return s.transpose() * eta.eta[0];
}

Mat8 build_a(const FourVector& A, double e_over_K, const EtaSet& eta) {
  // A_0 = A^0, A_i = -A^i under diag(+,-,-,-).
  return e_over_K * (A(0) * eta.eta[0] - A(1) * eta.eta[1] - A(2) * eta.eta[2] -
                     A(3) * eta.eta[3]);
}

double a_squared_scalar(const FourVector& A, double e_over_K) {
  return e_over_K * e_over_K * (A(0) * A(0) - A(1) * A(1) - A(2) * A(2) - A(3) * A(3));
}

std::vector<Mat8> commutant_basis(const EtaSet& eta) {
  // Stack the linear constraints (M eta^a - eta^a M)_{ij} = 0 over vec(M),
  // row-major: column p*8+q carries the coefficient of M_{pq}.
  Eigen::MatrixXd C(4 * 64, 64);
  C.setZero();
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const int row = a * 64 + i * 8 + j;
        for (int q = 0; q < 8; ++q) C(row, i * 8 + q) += eta.eta[a](q, j);
        for (int p = 0; p < 8; ++p) C(row, p * 8 + j) -= eta.eta[a](i, p);
      }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-9 * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  const int nullity = 64 - rank;
  Eigen::MatrixXd N = svd.matrixV().rightCols(nullity);  // orthonormal nullspace

  // Deterministic canonical basis: project unit matrices (row-major scan)
  // into the nullspace and run modified Gram-Schmidt.
  std::vector<Eigen::VectorXd> kept;
  for (int idx = 0; idx < 64 && static_cast<int>(kept.size()) < nullity; ++idx) {
    Eigen::VectorXd v = N * N.row(idx).transpose();  // P e_idx, P = N N^T
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : kept) v -= b.dot(v) * b;
    if (v.norm() <= 1e-6) continue;
    v.normalize();
    for (int k = 0; k < 64; ++k) {
      if (std::abs(v(k)) > 1e-8) {
        if (v(k) < 0) v = -v;
        break;
      }
    }
    kept.push_back(v);
  }

  std::vector<Mat8> basis;
  basis.reserve(kept.size());
  for (const auto& v : kept) {
    Mat8 m;
    for (int p = 0; p < 8; ++p)
      for (int q = 0; q < 8; ++q) m(p, q) = v(p * 8 + q);
    basis.push_back(m);
  }
  return basis;
}

namespace {

std::vector<Mat8> z_generators(const EtaSet& eta) {
  std::vector<Mat8> gens;
  for (const Mat8& m : commutant_basis(eta)) {
    Mat8 anti = 0.5 * (m - m.transpose());
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& g : gens) anti -= (g.cwiseProduct(anti)).sum() * g;
    if (anti.norm() <= 1e-6) continue;
    anti /= anti.norm();
    for (int k = 0; k < 64; ++k) {
      if (std::abs(anti(k / 8, k % 8)) > 1e-8) {
        if (anti(k / 8, k % 8) < 0) anti = -anti;
        break;
      }
    }
    gens.push_back(anti);
  }
  return gens;
}

}  // namespace

int z_generator_count(const EtaSet& eta) {
  return static_cast<int>(z_generators(eta).size());
}

ZStructure find_z(const EtaSet& eta, int index) {
  auto gens = z_generators(eta);
  if (gens.empty())
    throw NumericalError("find_z: commutant contains no antisymmetric generator");
  if (index < 0 || index >= static_cast<int>(gens.size()))
    throw ValidationError("find_z: index out of range [0," +
                          std::to_string(gens.size()) + ")");

  const Mat8& m = gens[index];
  Mat8 m2 = m * m;
  const double c = -m2.trace() / 8.0;  // M^2 = -c I for these generators
  if (c <= 1e-12 || (m2 + c * Mat8::Identity()).norm() > 1e-8)
    throw NumericalError("find_z: generator does not square to a negative multiple of I");
  ZStructure zs;
  zs.z = m / std::sqrt(c);
  zs.index = index;

  const Mat8& Z = zs.z;
  double worst = (Z * Z + Mat8::Identity()).norm();
  worst = std::max(worst, (Z.transpose() + Z).norm());
  for (int a = 0; a < 4; ++a)
    worst = std::max(worst, (Z * eta.eta[a] - eta.eta[a] * Z).norm());
  if (worst > 1e-12)
    throw NumericalError("find_z: Z invariants violated, residual " + std::to_string(worst));
  return zs;
}

Mat8 exp_z(const Mat8& z, double theta) {
  return std::cos(theta) * Mat8::Identity() + std::sin(theta) * z;
}

PlaneWaveMode plane_wave_mode(const EtaSet& eta, const ZStructure& z, double k,
                              int branch, double kappa) {
  if (kappa <= 0.0) throw ValidationError("plane_wave_mode: kappa must be positive");
  if (branch != 1 && branch != -1)
    throw ValidationError("plane_wave_mode: branch must be +1 or -1");

  PlaneWaveMode mode;
  mode.k = k;
  mode.branch = branch;
  mode.omega = std::sqrt(k * k + kappa * kappa);

  Mat8 M = mode.omega * eta.eta[0] - k * eta.eta[3];
  if ((z.z * M - M * z.z).norm() > 1e-10)
    throw NumericalError("plane_wave_mode: Z does not commute with the mode operator");

  // On shell M^2 = kappa^2, so (branch kappa + M)/(2 kappa) projects (up to
  // sign) onto the branch eigenspace, which has rank 4.
  Mat8 P = (branch * kappa * Mat8::Identity() + M) / (2.0 * kappa);
  bool found = false;
  for (int seed = 0; seed < 8 && !found; ++seed) {
    Spinor8 v = P.col(seed);  // P e_seed
    if (v.norm() > 1e-8) {
      mode.chi = v / v.norm();
      found = true;
    }
  }
  if (!found)
    throw NumericalError("plane_wave_mode: projector annihilated every canonical seed");

  if ((M * mode.chi - branch * kappa * mode.chi).norm() > 1e-12)
    throw NumericalError("plane_wave_mode: eigenvector residual too large");
  return mode;
}

bool AlgebraVerification::ok() const {
  return anticommutators_exact && eq14_exact && max_a_squared_residual <= 1e-12 &&
         commutant_dim == 4 && z_count >= 2 && max_z_residual <= 1e-12;
}

AlgebraVerification verify_algebra(const EtaSet& eta, int n_random, unsigned seed) {
  AlgebraVerification v;

  v.anticommutators_exact = true;
  for (int a = 0; a < 4 && v.anticommutators_exact; ++a)
    for (int b = 0; b < 4; ++b) {
      Mat8i ac = anticommutator(eta, a, b);
      v.metric_observed[a][b] = static_cast<double>(ac(0, 0)) / 2.0;
      std::int64_t g = (a == b) ? (a == 0 ? 2 : -2) : 0;
      if (ac != Mat8i(g * Mat8i::Identity())) {
        v.anticommutators_exact = false;
        v.failing_pair = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
        break;
      }
    }

  v.eq14_exact = true;
  for (int j = 1; j < 4; ++j)
    if (Mat8i(eta.eta_int[0] * eta.eta_int[j].transpose()) !=
        Mat8i(eta.eta_int[j] * eta.eta_int[0])) {
      v.eq14_exact = false;
      if (v.failing_pair.empty()) v.failing_pair = "(0," + std::to_string(j) + ") [transpose]";
    }

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  std::uniform_real_distribution<double> coup(0.1, 2.0);
  for (int t = 0; t < n_random; ++t) {
    FourVector A(uni(rng), uni(rng), uni(rng), uni(rng));
    double eok = coup(rng);
    Mat8 a = build_a(A, eok, eta);
    double r = (a * a - a_squared_scalar(A, eok) * Mat8::Identity())
                   .cwiseAbs()
                   .maxCoeff();
    v.max_a_squared_residual = std::max(v.max_a_squared_residual, r);
  }

  auto basis = commutant_basis(eta);
  v.commutant_dim = static_cast<int>(basis.size());
  v.z_count = z_generator_count(eta);
  for (int i = 0; i < v.z_count; ++i) {
    try {
      ZStructure zs = find_z(eta, i);
      const Mat8& Z = zs.z;
      double worst = (Z * Z + Mat8::Identity()).norm();
      worst = std::max(worst, (Z.transpose() + Z).norm());
      for (int a = 0; a < 4; ++a)
        worst = std::max(worst, (Z * eta.eta[a] - eta.eta[a] * Z).norm());
      v.max_z_residual = std::max(v.max_z_residual, worst);
    } catch (const NumericalError&) {
      v.max_z_residual = 1.0;
    }
  }
  return v;
}

}  // namespace rdf
