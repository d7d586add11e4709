#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <vector>

#include "antiloc/scatter.hpp"

using namespace antiloc;

namespace {

const LevelScheme kRb = rb85_default();
const ScatteringModel kModel(kRb);

complex chi(int q, double delta) { return kModel.susceptibility(q, delta, 1.0); }

// Root of f on [a, b] by bisection; f(a) and f(b) must differ in sign.
template <class F>
double bisect(F f, double a, double b, double tol) {
  double fa = f(a);
  REQUIRE(fa * f(b) < 0.0);
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double phase_gap(complex a, complex b) {
  double d = std::abs(std::arg(a) - std::arg(b));
  return d > kPi ? 2 * kPi - d : d;
}

// Rotation exp(-i theta n.J) of the |F m> sublevels, m ascending.
Eigen::MatrixXcd sublevel_rotation(HalfInt F, const Vec3& n, double theta) {
  const int dim = F.twice() + 1;
  const double j = F.value();
  Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(dim, dim), jz = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = -j + k;
    jz(k, k) = m;
    if (k + 1 < dim) jp(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const Eigen::MatrixXcd jm = jp.adjoint();
  const Eigen::MatrixXcd jx = 0.5 * (jp + jm);
  const Eigen::MatrixXcd jy = (jp - jm) / complex(0, 2);
  const Eigen::MatrixXcd g = n.x() * jx + n.y() * jy + n.z() * jz;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  Eigen::VectorXcd phases(dim);
  for (int k = 0; k < dim; ++k) phases(k) = std::exp(complex(0, -theta * es.eigenvalues()(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::Matrix3d rotation(const Vec3& n, double theta) {
  return Eigen::AngleAxisd(theta, n).toRotationMatrix();
}

}  // namespace

TEST_CASE("spherical basis is orthonormal and round-trips") {
  for (int q = -1; q <= 1; ++q)
    for (int p = -1; p <= 1; ++p)
      CHECK(std::abs(spherical_unit(q).dot(spherical_unit(p)) - (p == q ? 1.0 : 0.0)) < 1e-15);
  const CVec3 v(complex(0.3, -1.0), complex(2.0, 0.5), complex(-0.7, 0.1));
  const SphericalVector s = SphericalVector::from_cartesian(v);
  CHECK((s.cartesian() - v).norm() < 1e-14);
  CHECK(s.norm2() == doctest::Approx(v.squaredNorm()));
  CHECK(SphericalVector::unit(1).norm2() == 1.0);
}

TEST_CASE("amplitude vanishes unless angular momentum is conserved") {
  for (HalfInt mi = -3; mi <= 3; mi += 1)
    for (HalfInt mo = -3; mo <= 3; mo += 1)
      for (int qi = -1; qi <= 1; ++qi)
        for (int qo = -1; qo <= 1; ++qo) {
          const complex a = kModel.amplitude(mi, mo, qi, qo, -7.3);
          if (mo != mi + HalfInt(qi - qo))
            CHECK(a == 0.0);
          else if (valid_projection(4, mi + HalfInt(qi)))
            CHECK(a != 0.0);
        }
}

TEST_CASE("stretched sigma- Rayleigh amplitude has only the top pole") {
  for (double delta : {-35.0, -30.34, -19.89, -10.0, 0.0, 4.0}) {
    CHECK(kModel.amplitude_from_level(3, -3, -3, -1, -1, delta) == 0.0);
    CHECK(kModel.amplitude_from_level(2, -3, -3, -1, -1, delta) == 0.0);
    CHECK(kModel.amplitude_from_level(1, -3, -3, -1, -1, delta) == 0.0);
    CHECK(kModel.amplitude(-3, -3, -1, -1, delta) ==
          kModel.amplitude_from_level(4, -3, -3, -1, -1, delta));
  }
  // no resonant enhancement on the Fe = 3 line: a single Lorentzian 19.89 widths off
  const double e3 = kRb.excited(3).energy;
  const complex on4 = kModel.amplitude(-3, -3, -1, -1, 0.0);
  const complex at3 = kModel.amplitude(-3, -3, -1, -1, e3);
  CHECK(std::abs(at3) / std::abs(on4) ==
        doctest::Approx(0.5 / std::abs(complex(e3, 0.5))).epsilon(1e-12));
}

TEST_CASE("stretched sigma- transition has the two-level cross section") {
  CHECK(kModel.total_cross_section(-1, 0.0) == doctest::Approx(6 * kPi).epsilon(1e-12));
  CHECK(kModel.total_cross_section(-1, 3.0) ==
        doctest::Approx(6 * kPi / (1 + 36.0)).epsilon(1e-12));
  CHECK(total_cross_section(kRb, -1, 0.0) == kModel.total_cross_section(-1, 0.0));
}

TEST_CASE("extinction is positive for every mode and detuning") {
  for (double d = -60.0; d <= 20.0; d += 0.05)
    for (int q = -1; q <= 1; ++q) {
      CHECK(chi(q, d).imag() > 0.0);
      CHECK(kModel.total_cross_section(q, d) > 0.0);
    }
}

TEST_CASE("sigma+ dominates sigma- extinction on the Fe = 3 line") {
  const double e3 = kRb.excited(3).energy;
  CHECK(kModel.total_cross_section(1, e3) > 10.0 * kModel.total_cross_section(-1, e3));
}

TEST_CASE("sigma+ forward amplitude crosses zero between the top two lines") {
  const double e3 = kRb.excited(3).energy;
  auto re = [](double d) { return kModel.amplitude(-3, -3, 1, 1, d).real(); };
  const double root = bisect(re, e3 + 0.5, -0.5, 1e-7);
  CHECK(root > e3);
  CHECK(root < 0.0);
  // same zero in the susceptibility
  const double chi_root = bisect([](double d) { return chi(1, d).real(); }, e3 + 0.5, -0.5, 1e-7);
  CHECK(std::abs(chi_root - root) < 1e-6);
  // regression constant
  CHECK(std::abs(root - -2.5094343) < 1e-6);
}

TEST_CASE("helicity modes have opposite dispersion between the top two lines") {
  const double e3 = kRb.excited(3).energy;
  int window = 0;
  for (double d = e3 + 0.01; d < 0.0; d += 0.01)
    if (chi(1, d).real() < 0.0 && chi(-1, d).real() > 0.0) ++window;
  CHECK(window > 100);
}

TEST_CASE("Rayleigh amplitudes of the two helicities are nearly opposite in phase") {
  const double e3 = kRb.excited(3).energy;
  double best = 0.0;
  for (double d = e3 + 0.01; d < 0.0; d += 0.01)
    best = std::max(best, phase_gap(kModel.amplitude(-3, -3, 1, 1, d),
                                    kModel.amplitude(-3, -3, -1, -1, d)));
  CHECK(best > 0.9 * kPi);
}

TEST_CASE("far detuned amplitude falls off as 1/delta") {
  const double a1 = std::abs(kModel.amplitude(-3, -3, 1, 1, -1e6));
  const double a2 = std::abs(kModel.amplitude(-3, -3, 1, 1, -2e6));
  CHECK(a1 < 1e-5);
  CHECK(a1 / a2 == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("sigma+ amplitude peaks at each allowed resonance") {
  std::vector<double> grid, mag;
  for (double d = -40.0; d <= 5.0; d += 0.01) {
    grid.push_back(d);
    mag.push_back(std::abs(kModel.amplitude(-3, -3, 1, 1, d)));
  }
  for (double res : resonance_positions(kRb)) {
    bool found = false;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i)
      if (mag[i] > mag[i - 1] && mag[i] > mag[i + 1] && std::abs(grid[i] - res) < 0.5) found = true;
    CHECK_MESSAGE(found, "no peak near " << res);
  }
}

TEST_CASE("dispersion and absorption obey the Kramers-Kronig relation") {
  // Re chi(x) = (1/pi) PV int Im chi(x') / (x' - x) dx', subtracted form
  for (int q = -1; q <= 1; ++q)
    for (double x : {-25.0, -15.0, -5.0, 3.0}) {
      const double L = 200.0, h = 1e-3;
      const double im0 = chi(q, x).imag();
      double s = 0.0;
      const int n = static_cast<int>(2 * L / h);
      for (int i = 0; i <= n; ++i) {
        const double t = -L + i * h;
        if (t == 0.0) continue;  // integrand is regular there; one node is negligible
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        s += w * (chi(q, x + t).imag() - im0) / t;
      }
      const double kk = s * h / kPi;
      const double re = chi(q, x).real();
      CHECK_MESSAGE(std::abs(kk - re) <= 0.01 * std::abs(re),
                    "q=" << q << " x=" << x << " kk=" << kk << " re=" << re);
    }
}

TEST_CASE("lab-frame contraction") {
  const double d = -8.0;
  const auto sp = SphericalVector::unit(1);
  CHECK(amplitude_lab_frame(kRb, -3, -3, sp, sp, d) == kh_amplitude(kRb, -3, -3, 1, 1, d));
  const auto sm = SphericalVector::unit(-1);
  CHECK(amplitude_lab_frame(kRb, -3, -1, sp, sm, d) == kh_amplitude(kRb, -3, -1, 1, -1, d));

  std::mt19937 g(9);
  std::normal_distribution<double> n;
  auto random_vec = [&] {
    SphericalVector v;
    for (int q = -1; q <= 1; ++q) v[q] = complex(n(g), n(g));
    return v;
  };
  const complex alpha(0.3, -1.2), beta(-0.8, 0.4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto e1 = random_vec(), e2 = random_vec(), eo = random_vec();
    SphericalVector mix;
    for (int q = -1; q <= 1; ++q) mix[q] = alpha * e1[q] + beta * e2[q];
    const complex lhs = amplitude_lab_frame(kRb, -3, -2, mix, eo, d);
    const complex rhs = alpha * amplitude_lab_frame(kRb, -3, -2, e1, eo, d) +
                        beta * amplitude_lab_frame(kRb, -3, -2, e2, eo, d);
    CHECK(std::abs(lhs - rhs) <= 1e-14 * (1 + std::abs(lhs)));
  }
}

TEST_CASE("tensor contracts to the spherical amplitudes") {
  const double d = -22.0;
  for (HalfInt mi = -3; mi <= 3; mi += 1)
    for (HalfInt mo = -3; mo <= 3; mo += 1) {
      const CMat3 t = kModel.tensor(mi, mo, d);
      for (int qi = -1; qi <= 1; ++qi)
        for (int qo = -1; qo <= 1; ++qo) {
          const complex viaT = spherical_unit(qo).dot(t * spherical_unit(qi));
          CHECK(std::abs(viaT - kModel.amplitude(mi, mo, qi, qo, d)) < 1e-15);
        }
    }
}

TEST_CASE("scattering operator is rotationally covariant") {
  // U^dagger T_ab U = R_aa' R_bb' T_a'b' for the sublevel operator
  // <m'|T_ab|m> = tensor(m, m')_ab and U = exp(-i theta n.J).
  const HalfInt F = 3;
  const int dim = F.twice() + 1;
  const double d = -13.0;
  std::vector<CMat3> t(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i)
    for (int o = 0; o < dim; ++o)
      t[static_cast<std::size_t>(o * dim + i)] = kModel.tensor(-F + HalfInt(i), -F + HalfInt(o), d);

  std::mt19937 g(17);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 6; ++trial) {
    const Vec3 axis = Vec3(n(g), n(g), n(g)).normalized();
    const double theta = 0.05 + 0.3 * trial;
    const Eigen::MatrixXcd U = sublevel_rotation(F, axis, theta);
    const Eigen::Matrix3d R = rotation(axis, theta);
    double worst = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Eigen::MatrixXcd op(dim, dim), rotated = Eigen::MatrixXcd::Zero(dim, dim);
        for (int i = 0; i < dim; ++i)
          for (int o = 0; o < dim; ++o) {
            op(o, i) = t[static_cast<std::size_t>(o * dim + i)](a, b);
            complex s = 0.0;
            for (int a2 = 0; a2 < 3; ++a2)
              for (int b2 = 0; b2 < 3; ++b2)
                s += R(a, a2) * R(b, b2) * t[static_cast<std::size_t>(o * dim + i)](a2, b2);
            rotated(o, i) = s;
          }
        worst = std::max(worst, (U.adjoint() * op * U - rotated).cwiseAbs().maxCoeff());
      }
    CHECK(worst < 1e-13);
  }
}
