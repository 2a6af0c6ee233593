#pragma once
// Bases of holomorphic and weakly holomorphic spaces: the plus space on
// Gamma0(4) in half-integral weight via theta/F monomials, Cohen's Eisenstein
// series, and integral-weight q^{-m} + O(1) / q^{-m} + O(q) forms for the
// weights whose cusp space vanishes.

#include "maasslift/qseries.hpp"

#include <map>
#include <vector>

namespace ml {

struct NoFormError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exponent -> coefficient, all exponents negative
using PrincipalPart = std::map<i64, Rational>;

// Echelonized (increasing leading exponent, leading coefficient 1) basis of
// the holomorphic plus space of weight twice_weight/2 on Gamma0(4).
std::vector<QSeries> plus_space_basis(int twice_weight, i64 horizon);

// Cohen's Eisenstein series of weight k+1/2; constant term zeta(1-2k),
// coefficient at |d| f^2 given by L_d(1-k) twisted divisor sums.
QSeries cohen_eisenstein(int k, i64 horizon);

// The weakly holomorphic plus form with the given principal part, normalized
// O(q) in positive weight and O(1) in negative weight. Unique whenever the
// holomorphic plus cusp subspace vanishes; otherwise the representative with
// vanishing coefficients at the cusp echelon pivots is returned. Throws
// NoFormError when no form exists.
QSeries weakly_holo_plus_basis(int twice_weight, const PrincipalPart& principal,
                               i64 horizon);

// Unique form of nonpositive even weight = 2-2k with expansion q^{-m} + O(1);
// restricted to 2k in {4, 6, 8, 10, 14} where S_{2k} = 0 makes it unique.
QSeries weakly_holo_integral_basis(int weight, i64 m, i64 horizon);

// Companion family: unique weight-2k form q^{-m} + O(q), same weight
// restriction.
QSeries weakly_holo_integral_dual(int weight2k, i64 m, i64 horizon);

}  // namespace ml
