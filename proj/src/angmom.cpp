#include "antiloc/angmom.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "antiloc/errors.hpp"

namespace antiloc::angmom {

namespace {

// Largest factorial argument reached by the 6j sum: j1+j2+j4+j5+1 with
// every j at the supported maximum.
constexpr int kMaxFactorial = 2 * kMaxTwiceJ + 2;

const std::vector<mpz_class>& factorial_table() {
  static const std::vector<mpz_class> table = [] {
    std::vector<mpz_class> t(kMaxFactorial + 1);
    t[0] = 1;
    for (int n = 1; n <= kMaxFactorial; ++n) t[n] = t[n - 1] * n;
    return t;
  }();
  return table;
}

const mpz_class& fact(int n) {
  if (n < 0 || n > kMaxFactorial) throw std::out_of_range("factorial argument out of range");
  return factorial_table()[static_cast<std::size_t>(n)];
}

// Half of a twice-valued integer combination; callers guarantee evenness.
constexpr int h(int twice) { return twice / 2; }

void check_range(std::initializer_list<HalfInt> js) {
  for (HalfInt j : js)
    if (j.twice() > kMaxTwiceJ)
      throw std::out_of_range("angular momentum " + j.str() + " above supported maximum");
}

// Triangle coefficient (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!
mpq_class triangle_coefficient(HalfInt a, HalfInt b, HalfInt c) {
  const int ta = a.twice(), tb = b.twice(), tc = c.twice();
  mpq_class num(fact(h(ta + tb - tc)) * fact(h(ta - tb + tc)) * fact(h(-ta + tb + tc)));
  mpq_class r(num / mpq_class(fact(h(ta + tb + tc) + 1)));
  r.canonicalize();
  return r;
}

// sign(sum) * sqrt(sum^2 * prefactor), rounded once at the end.
double signed_sqrt_product(const mpq_class& sum, const mpq_class& prefactor) {
  const int s = sgn(sum);
  if (s == 0) return 0.0;
  mpq_class sq = sum * sum * prefactor;
  sq.canonicalize();
  return s * std::sqrt(sq.get_d());
}

}  // namespace

bool triangle(HalfInt a, HalfInt b, HalfInt c) {
  const int ta = a.twice(), tb = b.twice(), tc = c.twice();
  if (ta < 0 || tb < 0 || tc < 0) return false;
  if ((ta + tb + tc) % 2 != 0) return false;
  return tc >= std::abs(ta - tb) && tc <= ta + tb;
}

double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  if ((m1 + m2 + m3).twice() != 0) return 0.0;
  if (!triangle(j1, j2, j3)) return 0.0;
  if (!valid_projection(j1, m1) || !valid_projection(j2, m2) || !valid_projection(j3, m3))
    return 0.0;
  check_range({j1, j2, j3});

  const int t1 = j1.twice(), t2 = j2.twice(), t3 = j3.twice();
  const int u1 = m1.twice(), u2 = m2.twice(), u3 = m3.twice();

  const int kmin = std::max({0, h(t2 - t3 - u1), h(t1 - t3 + u2)});
  const int kmax = std::min({h(t1 + t2 - t3), h(t1 - u1), h(t2 + u2)});
  if (kmin > kmax) return 0.0;

  mpq_class sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    mpz_class den = fact(k) * fact(h(t1 + t2 - t3) - k) * fact(h(t1 - u1) - k) *
                    fact(h(t2 + u2) - k) * fact(h(t3 - t2 + u1) + k) * fact(h(t3 - t1 - u2) + k);
    mpq_class term(k % 2 == 0 ? 1 : -1, 1);
    term /= den;
    sum += term;
  }

  mpq_class prefactor = triangle_coefficient(j1, j2, j3);
  prefactor *= fact(h(t1 + u1)) * fact(h(t1 - u1)) * fact(h(t2 + u2)) * fact(h(t2 - u2)) *
               fact(h(t3 + u3)) * fact(h(t3 - u3));

  const int phase = h(t1 - t2 - u3);
  const double value = signed_sqrt_product(sum, prefactor);
  return (phase % 2 == 0) ? value : -value;
}

double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  if (!triangle(j1, j2, j3) || !triangle(j1, j5, j6) || !triangle(j4, j2, j6) ||
      !triangle(j4, j5, j3))
    return 0.0;
  check_range({j1, j2, j3, j4, j5, j6});

  const int a1 = h(j1.twice() + j2.twice() + j3.twice());
  const int a2 = h(j1.twice() + j5.twice() + j6.twice());
  const int a3 = h(j4.twice() + j2.twice() + j6.twice());
  const int a4 = h(j4.twice() + j5.twice() + j3.twice());
  const int b1 = h(j1.twice() + j2.twice() + j4.twice() + j5.twice());
  const int b2 = h(j2.twice() + j3.twice() + j5.twice() + j6.twice());
  const int b3 = h(j3.twice() + j1.twice() + j6.twice() + j4.twice());

  const int tmin = std::max({a1, a2, a3, a4});
  const int tmax = std::min({b1, b2, b3});
  if (tmin > tmax) return 0.0;

  mpq_class sum = 0;
  for (int t = tmin; t <= tmax; ++t) {
    mpz_class den = fact(t - a1) * fact(t - a2) * fact(t - a3) * fact(t - a4) * fact(b1 - t) *
                    fact(b2 - t) * fact(b3 - t);
    mpq_class term(fact(t + 1) * (t % 2 == 0 ? 1 : -1));
    term /= den;
    sum += term;
  }

  mpq_class prefactor = triangle_coefficient(j1, j2, j3) * triangle_coefficient(j1, j5, j6) *
                        triangle_coefficient(j4, j2, j6) * triangle_coefficient(j4, j5, j3);
  return signed_sqrt_product(sum, prefactor);
}

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  // <j1 m1; j2 m2|J M> = (-1)^(j1-j2+M) sqrt(2J+1) (j1 j2 J; m1 m2 -M)
  const double w = wigner3j(j1, j2, J, m1, m2, -M);
  if (w == 0.0) return 0.0;
  const int phase = (j1 - j2 + M).twice() / 2;
  const double v = std::sqrt(J.twice() + 1.0) * w;
  return (phase % 2 == 0) ? v : -v;
}

double hyperfine_reduced_element(const LevelScheme& scheme, HalfInt F0, HalfInt Fe) {
  scheme.ground(F0);
  scheme.excited(Fe);
  const HalfInt I = scheme.nuclear_spin;
  // <(Je I)Fe||d||(Jg I)F0> = (-1)^(Je+I+F0+1) sqrt((2Fe+1)(2F0+1)) {Je Fe I; F0 Jg 1}
  const double sixj = wigner6j(scheme.Je, Fe, I, F0, scheme.Jg, 1);
  if (sixj == 0.0) return 0.0;
  const int phase = (scheme.Je + I + F0 + HalfInt(1)).twice() / 2;
  const double v = std::sqrt((Fe.twice() + 1.0) * (F0.twice() + 1.0)) * sixj;
  return (phase % 2 == 0) ? v : -v;
}

double dipole_element(HalfInt F0, HalfInt m0, int q, HalfInt Fe, HalfInt me,
                      const LevelScheme& scheme) {
  scheme.ground(F0);
  scheme.excited(Fe);
  if (q < -1 || q > 1) return 0.0;
  if (me != m0 + HalfInt(q)) return 0.0;
  const double threej = wigner3j(Fe, 1, F0, -me, q, m0);
  if (threej == 0.0) return 0.0;
  // Wigner-Eckart: (-1)^(Fe-me) (Fe 1 F0; -me q m0) <Fe||d||F0>
  const int phase = (Fe - me).twice() / 2;
  const double v = threej * hyperfine_reduced_element(scheme, F0, Fe);
  return (phase % 2 == 0) ? v : -v;
}

}  // namespace antiloc::angmom
