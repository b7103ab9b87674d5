/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

// Test-only oracles and generators. The oracles are written naively and
// independently of the library code paths they check: straight re-summation
// for energies and plain 2^n loops for maxima.

#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "rqaoa/model.hpp"
#include "rqaoa/rng.hpp"

namespace testutil {

// Spins from a bitmask: bit v set -> spin -1.
inline rqaoa::SpinAssignment bits_to_spins(std::uint64_t bits, int n) {
  rqaoa::SpinAssignment x(n);
  for (int v = 0; v < n; ++v) x[v] = ((bits >> v) & 1) ? -1 : 1;
  return x;
}

// Re-evaluate raw (possibly uncanonicalized) terms without touching
// IsingInstance at all.
inline double naive_evaluate(const std::vector<rqaoa::Edge>& terms, double constant,
                             const rqaoa::SpinAssignment& x) {
  double acc = constant;
  for (const auto& [verts, weight] : terms) {
    int prod = 1;
    for (int v : verts) prod *= x[v];
    acc += weight * prod;
  }
  return acc;
}

struct NaiveMax {
  double value = 0.0;
  rqaoa::SpinAssignment argmax;
};

// Plain enumeration in bitmask order (0, 1, 2, ...), full re-evaluation per
// state; first argmax wins. Independent of the Gray-code path.
inline NaiveMax naive_max(const rqaoa::IsingInstance& inst) {
  NaiveMax out;
  bool first = true;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << inst.n); ++bits) {
    rqaoa::SpinAssignment x = bits_to_spins(bits, inst.n);
    double e = naive_evaluate(inst.edges, inst.constant, x);
    if (first || e > out.value) {
      out.value = e;
      out.argmax = x;
      first = false;
    }
  }
  return out;
}

// Maximum subject to the constraint x(f) == sigma.
inline NaiveMax naive_constrained_max(const rqaoa::IsingInstance& inst,
                                      const std::vector<int>& f, int sigma) {
  NaiveMax out;
  bool first = true;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << inst.n); ++bits) {
    rqaoa::SpinAssignment x = bits_to_spins(bits, inst.n);
    if (rqaoa::spin_product(x, f) != sigma) continue;
    double e = naive_evaluate(inst.edges, inst.constant, x);
    if (first || e > out.value) {
      out.value = e;
      out.argmax = x;
      first = false;
    }
  }
  return out;
}

enum class WeightMode { PlusMinusOne, DyadicQuarters, Uniform };

inline double draw_weight(rqaoa::SplitMix64& rng, WeightMode mode) {
  switch (mode) {
    case WeightMode::PlusMinusOne:
      return rng.next_sign();
    case WeightMode::DyadicQuarters: {
      // Multiples of 1/4 in [-2, 2] excluding 0: sums stay exact in doubles.
      std::int64_t q = 0;
      while (q == 0) q = rng.next_int(-8, 8);
      return static_cast<double>(q) / 4.0;
    }
    case WeightMode::Uniform: {
      double w = 0.0;
      while (w == 0.0) w = 4.0 * rng.next_double() - 2.0;
      return w;
    }
  }
  return 1.0;
}

// Random graph instance: each pair kept with probability `prob_percent`/100.
inline rqaoa::IsingInstance random_pair_instance(int n, rqaoa::SplitMix64& rng,
                                                 WeightMode mode = WeightMode::Uniform,
                                                 int prob_percent = 50) {
  std::vector<rqaoa::Edge> terms;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_below(100) < static_cast<std::uint64_t>(prob_percent))
        terms.push_back({{u, v}, draw_weight(rng, mode)});
  return rqaoa::make_instance(n, terms);
}

// Random hypergraph instance with terms of arity 1..3.
inline rqaoa::IsingInstance random_hyper_instance(int n, int terms_count,
                                                  rqaoa::SplitMix64& rng,
                                                  WeightMode mode = WeightMode::Uniform) {
  std::vector<rqaoa::Edge> terms;
  for (int t = 0; t < terms_count; ++t) {
    int arity = 1 + static_cast<int>(rng.next_below(3));
    arity = std::min(arity, n);
    std::vector<int> verts;
    while (static_cast<int>(verts.size()) < arity) {
      int v = static_cast<int>(rng.next_below(n));
      bool dup = false;
      for (int w : verts) dup = dup || (w == v);
      if (!dup) verts.push_back(v);
    }
    terms.push_back({verts, draw_weight(rng, mode)});
  }
  return rqaoa::make_instance(n, terms);
}

// Random subset of vertices.
inline rqaoa::GaugeMask random_mask(int n, rqaoa::SplitMix64& rng) {
  rqaoa::GaugeMask mask;
  for (int v = 0; v < n; ++v)
    if (rng.next() & 1) mask.push_back(v);
  return mask;
}

}  // namespace testutil
