/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

// Derivative-free compass refinement shared by the angle optimizers.

#pragma once

#include <cstddef>
#include <vector>

namespace rqaoa::detail {

// Probe +/- step along each coordinate of x, move to the best strictly
// improving probe, otherwise halve the step; stop after `iters` rounds or
// when the step drops below 1e-10. Deterministic: ties prefer the earliest
// probe (coordinate order, +step before -step). Returns the refined value.
template <class EnergyFn>
inline double pattern_search(std::vector<double>& x, double step, int iters,
                             const EnergyFn& energy) {
  double best = energy(x);
  for (int it = 0; it < iters && step > 1e-10; ++it) {
    double cand_best = best;
    std::size_t cand_dim = 0;
    double cand_delta = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
      for (double delta : {step, -step}) {
        x[d] += delta;
        double e = energy(x);
        x[d] -= delta;
        if (e > cand_best) {
          cand_best = e;
          cand_dim = d;
          cand_delta = delta;
        }
      }
    }
    if (cand_best > best) {
      x[cand_dim] += cand_delta;
      best = cand_best;
    } else {
      step *= 0.5;
    }
  }
  return best;
}

}  // namespace rqaoa::detail
