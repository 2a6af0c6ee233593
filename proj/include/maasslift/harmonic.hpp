#pragma once
// Harmonic Maass form model in weight 2-2k: a holomorphic part given as an
// exact Laurent q-expansion (principal part, constant term, and positive
// coefficients up to the horizon) plus a shadow cusp form of weight 2k.
// A zero shadow means the form is weakly holomorphic.

#include "maasslift/qseries.hpp"

namespace ml {

struct HarmonicModel {
  QSeries holo_part;  // twice_weight = 2(2-2k), Laurent
  QSeries shadow;     // twice_weight = 4k, in S_{2k}; zero() if weakly holo
  int twice_weight = 0;
  int k = 0;
};

// throws std::domain_error unless weights are consistent, k >= 2, and the
// shadow (when nonzero) is cuspidal
void check_harmonic_model(const HarmonicModel& m);

// weakly holomorphic model for the unique weight 2-2k form q^{-m} + O(1);
// requires dim S_{2k} = 0, i.e. 2k in {4,6,8,10,14}
HarmonicModel poincare_model(int k, i64 m, i64 horizon);

}  // namespace ml
