#pragma once

#include "qzeta/qcore.hpp"

namespace qzeta::reference {

// Hurwitz zeta(s, a) for 0 < a <= 1, s != 1, by Euler-Maclaurin after an
// integer head shift. M = 0 picks the order automatically (together with
// the head length) for full double accuracy on |s| <= 40.
Cx hurwitz_zeta(Cx s, double a, int M = 0);

Cx riemann_zeta(Cx s);

// L(s, chi) = N^{-s} sum_k chi(k) zeta(s, k/N).
Cx dirichlet_L(Cx s, const DirichletCharacter& chi);

// Digamma on the real line away from non-positive integers.
double digamma(double x);

// Zeros of the classical Riemann zeta used as trajectory seeds.
// trivial_zero(j) = -2j; nontrivial_zero(j) = 1/2 + i Im(rho_j),
// j = 1..5, imaginary parts tabulated to 7 digits.
Cx trivial_zero(int j);
Cx nontrivial_zero(int j);
int nontrivial_zero_count();

} // namespace qzeta::reference
