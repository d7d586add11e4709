#pragma once

#include "antiloc/atom.hpp"
#include "antiloc/half_int.hpp"

namespace antiloc::angmom {

/// Largest angular momentum for which the exact Racah sums are supported.
inline constexpr int kMaxTwiceJ = 40;

/// Triangle rule |a-b| <= c <= a+b with a+b+c integral.
bool triangle(HalfInt a, HalfInt b, HalfInt c);

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3). Selection-rule violations give 0.
///
/// The alternating Racah sum is accumulated in exact rational arithmetic and
/// only the final value is rounded to double.
double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}. Zero when any triad fails the
/// triangle rule.
double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6);

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>, Condon-Shortley phases.
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

/// Hyperfine reduced element <(Je I) Fe || d || (Jg I) F0> in units of the
/// fine-structure element <Je||d||Jg> = 1.
double hyperfine_reduced_element(const LevelScheme& scheme, HalfInt F0, HalfInt Fe);

/// <Fe me| d_q |F0 m0> in units of <Je||d||Jg> = 1 (Wigner-Eckart with the
/// hyperfine 6j reduction). Throws UnknownLevel if F0 is not a ground level or
/// Fe not an excited level of `scheme`.
double dipole_element(HalfInt F0, HalfInt m0, int q, HalfInt Fe, HalfInt me,
                      const LevelScheme& scheme);

}  // namespace antiloc::angmom
