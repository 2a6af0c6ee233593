#pragma once
// Number-theoretic scalars: Kronecker symbols, Bernoulli machinery, values of
// quadratic Dirichlet L-functions at nonpositive integers, divisor sums.

#include "maasslift/rational.hpp"

#include <utility>
#include <vector>

namespace ml {

// Kronecker symbol (a|n), full extension: (a|0) = [|a| = 1],
// (a|-1) = sign-of-a rule, (a|2) by a mod 8.
int kronecker(const Int& a, const Int& n);
int kronecker(i64 a, i64 n);

// d = 1 counts as fundamental (trivial character).
bool is_fundamental_discriminant(i64 d);

// d = fundamental * conductor^2, valid for any nonzero d = 0, 1 (mod 4)
// and for d = 1. Throws for d not a discriminant.
struct DiscriminantSplit {
  i64 fundamental;
  i64 conductor;
};
DiscriminantSplit split_discriminant(i64 d);

// B_0 = 1, B_1 = -1/2, memoized.
Rational bernoulli(unsigned n);

// Bernoulli polynomial B_n(x).
Rational bernoulli_poly(unsigned n, const Rational& x);

// Generalized Bernoulli number attached to the Kronecker character chi_d
// (d fundamental; d = 1 gives B_n(1), matching the trivial character mod 1).
Rational bernoulli_chi(unsigned n, i64 d);

// L_d(1-k) = -B_{k,chi_d}/k for k >= 1. d = 1 yields zeta(1-k).
Rational l_value_neg(i64 d, unsigned k);

// sigma_v(n) = sum over positive divisors t of n of t^v; requires n >= 1.
Int divisor_sum(i64 n, unsigned v);

std::vector<i64> divisors(i64 n);

int moebius(i64 n);

// (prime, exponent) pairs with increasing primes; n >= 1.
std::vector<std::pair<i64, int>> factorize(i64 n);

// eps_v = i^{eps_exponent(v)} for odd v: 0 when v = 1 (mod 4), 1 when
// v = 3 (mod 4).
int eps_exponent(i64 v);

}  // namespace ml
