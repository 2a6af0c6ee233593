#pragma once
// Binary quadratic forms [a,b,c] = aX^2 + bXY + cY^2: class enumeration for
// definite and indefinite discriminants, genus characters, Pell solutions and
// automorphs, Heegner points, geodesic data.

#include "maasslift/rational.hpp"

#include <complex>
#include <vector>

namespace ml {

struct BQForm {
  Int a, b, c;
  Int disc() const { return b * b - 4 * a * c; }
  Int eval(const Int& x, const Int& y) const {
    return a * x * x + b * x * y + c * y * y;
  }
  bool operator==(const BQForm& o) const {
    return a == o.a && b == o.b && c == o.c;
  }
  bool operator!=(const BQForm& o) const { return !(*this == o); }
  bool operator<(const BQForm& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
};

// row-major [[a, b], [c, d]]
struct Mat22 {
  Int a, b, c, d;
};

// Q given by the column action (Q o M)(v) = Q(M v); det(M) = 1 preserves disc
BQForm apply_matrix(const BQForm& q, const Mat22& m);

// One representative per SL2(Z)-class of discriminant disc, imprimitive forms
// included. disc < 0: reduced positive-definite forms. disc > 0 (non-square):
// one representative per cycle of reduced forms.
struct ClassSet {
  i64 disc;
  std::vector<BQForm> reps;
};
ClassSet enumerate_classes(i64 disc);

// All reduced indefinite forms of the discriminant and the right-neighbor
// step; exposed for cycle walks in cycle integrals.
std::vector<BQForm> reduced_indefinite_forms(i64 disc);
BQForm rho_step(const BQForm& q, i64 disc);

// reduced representative of the class of q (definite case, a > 0)
BQForm reduce_definite(const BQForm& q);

// chi_{d1}(r) for a primitively represented r coprime to d1 when
// gcd(a,b,c,d1) = 1, else 0. Needs disc(q) = d1 d2, both = 0,1 mod 4.
int genus_character(const BQForm& q, i64 d1, i64 d2);

// minimal t, u > 0 with t^2 - disc u^2 = 4 (disc > 0 non-square)
struct PellSolution {
  Int t, u;
};
PellSolution pell(i64 disc);

// g_Q = [[(t+bu)/2, cu], [-au, (t-bu)/2]] with (t,u) = pell(disc Q); fixes Q
Mat22 automorph(const BQForm& q);

// root of Q(tau, 1) = 0 in the upper half-plane (disc < 0, a > 0) and the
// stabilizer weight: omega = 2 for the class of [a,0,a], 3 for [a,a,a], else 1
struct HeegnerPoint {
  std::complex<double> tau;
  int omega;
};
HeegnerPoint heegner_point(const BQForm& q);

// semicircle a|tau|^2 + b Re(tau) + c = 0: center -b/2a, radius sqrt(disc)/2|a|,
// directed counterclockwise iff a > 0
struct Geodesic {
  Rational center;
  double radius;
  int orientation;
};
Geodesic geodesic(const BQForm& q);

}  // namespace ml
