#pragma once
// Exact dense linear algebra over Q, sized for the small systems coming out
// of modular-form basis solves (at most a few hundred rows/columns).

#include "maasslift/rational.hpp"

#include <vector>

namespace ml {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;  // row-major, rectangular

// Reduced row echelon form in place; returns pivot column indices in order.
std::vector<int> rref(QMat& m);

int rank(QMat m);

// Basis of { x : m x = 0 }.
std::vector<QVec> kernel_basis(QMat m);

struct AffineSolution {
  bool consistent = false;
  QVec particular;            // free variables set to zero
  std::vector<QVec> kernel;   // homogeneous solutions
};

AffineSolution solve_affine(QMat a, QVec b);

}  // namespace ml
