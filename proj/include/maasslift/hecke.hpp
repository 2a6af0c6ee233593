#pragma once
// Hecke operators on formal q-expansions. Integral weight kappa gets T(p)
// with the p^{alpha_kappa} renormalization (alpha = 1 - kappa for kappa < 0,
// else 0); half-integral weight kappa = lambda + 1/2 gets T(p^2) with
// p^{2 alpha_kappa}. The renormalization keeps principal parts of weakly
// holomorphic inputs integral.

#include "maasslift/qseries.hpp"

namespace ml {

// (f|T(p))(n) = p^alpha (c(np) + p^{kappa-1} c(n/p)); even twice_weight.
// Output horizon floor(h/p).
QSeries hecke_integral(const QSeries& f, i64 p);

// (f|T(p^2))(n) = p^{2 alpha} (c(np^2)
//                 + ((-1)^lambda n | p) p^{lambda-1} c(n)
//                 + p^{2 lambda - 1} c(n/p^2));
// odd twice_weight = 2 lambda + 1. Output horizon floor(h/p^2).
// Plus-space input is projected back to supported exponents, which is the
// plus-space operator at p = 2 and a no-op at odd p.
QSeries hecke_half(const QSeries& f, i64 p);

// T(m) for even twice_weight, T(m^2) for odd: prime powers through the
// standard recursions, multiplicative across coprime factors. T(1) = id.
QSeries hecke_composite(const QSeries& f, i64 m);

}  // namespace ml
