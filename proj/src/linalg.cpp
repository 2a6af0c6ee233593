#include "maasslift/linalg.hpp"

#include <stdexcept>

namespace ml {

std::vector<int> rref(QMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && m[sel][c] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[r]);
    Rational inv = make_rational(1) / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

int rank(QMat m) {
  return static_cast<int>(rref(m).size());
}

std::vector<QVec> kernel_basis(QMat m) {
  if (m.empty()) return {};
  size_t cols = m[0].size();
  auto pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<QVec> out;
  for (size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    QVec v(cols, make_rational(0));
    v[fc] = make_rational(1);
    for (size_t pi = 0; pi < pivots.size(); ++pi) {
      size_t pc = static_cast<size_t>(pivots[pi]);
      v[pc] = -m[pi][fc];
    }
    out.push_back(std::move(v));
  }
  return out;
}

AffineSolution solve_affine(QMat a, QVec b) {
  if (a.size() != b.size()) throw std::invalid_argument("shape mismatch");
  AffineSolution sol;
  if (a.empty()) {
    sol.consistent = true;
    return sol;
  }
  size_t rows = a.size(), cols = a[0].size();
  QMat aug = a;
  for (size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
  auto pivots = rref(aug);
  // pivot in the last (augmented) column means inconsistent
  for (int c : pivots)
    if (static_cast<size_t>(c) == cols) return sol;
  sol.consistent = true;
  sol.particular.assign(cols, make_rational(0));
  for (size_t pi = 0; pi < pivots.size(); ++pi)
    sol.particular[static_cast<size_t>(pivots[pi])] = aug[pi][cols];
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
  for (size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    QVec v(cols, make_rational(0));
    v[fc] = make_rational(1);
    for (size_t pi = 0; pi < pivots.size(); ++pi)
      v[static_cast<size_t>(pivots[pi])] = -aug[pi][fc];
    sol.kernel.push_back(std::move(v));
  }
  return sol;
}

}  // namespace ml
