#pragma once

#include <cmath>

namespace kminit::detail {

// Neumaier-compensated accumulator; rounding error stays O(eps) regardless
// of how many terms are added, and the result depends only on the order of
// add() calls. Every multi-point sum in the library feeds one of these in
// the dataset's canonical row order so results are invariant under input
// row permutation, bit for bit.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }

  double value() const { return sum + comp; }
};

}  // namespace kminit::detail
