/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

// Exact and heuristic maximizers used for denominators and core solving.

#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqaoa/model.hpp"
#include "rqaoa/rng.hpp"

namespace rqaoa {

struct ExactResult {
  double max_energy = 0.0;
  SpinAssignment argmax;
  std::uint64_t states_visited = 0;
};

// Exhaustive maximum by Gray-code enumeration: each step flips the single
// spin indexed by the ruler sequence and updates the energy with the
// incident terms only. Ties keep the first argmax in enumeration order
// (enumeration starts at all-+1, Gray order). The energy returned is
// re-evaluated from the argmax, so it is exact for the reported assignment.
inline ExactResult brute_force_max(const IsingInstance& inst, int cap = 26) {
  if (cap < 0 || cap > 48)
    throw std::invalid_argument("brute_force_max: cap must be in [0, 48]");
  if (inst.n > cap)
    throw std::invalid_argument("brute_force_max: n=" + std::to_string(inst.n) +
                                " exceeds cap=" + std::to_string(cap));
  ExactResult out;
  if (inst.n == 0) {
    out.max_energy = inst.constant;
    out.states_visited = 1;
    return out;
  }

  std::vector<std::vector<int>> incident(inst.n);
  for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e)
    for (int v : inst.edges[e].first) incident[v].push_back(e);

  SpinAssignment spins(inst.n, 1);
  double current = evaluate(inst, spins);
  double best = current;
  SpinAssignment best_spins = spins;

  const std::uint64_t total = std::uint64_t{1} << inst.n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int j = std::countr_zero(k);
    // Terms containing j flip sign: new - old = -2 * old.
    double delta = 0.0;
    for (int e : incident[j]) {
      const auto& [verts, weight] = inst.edges[e];
      int prod = 1;
      for (int v : verts) prod *= spins[v];
      delta -= 2.0 * weight * prod;
    }
    current += delta;
    spins[j] = -spins[j];
    // Periodically resync against drift on non-representable weights.
    if ((k & 0xFFFFF) == 0) current = evaluate(inst, spins);
    if (current > best) {
      best = current;
      best_spins = spins;
    }
  }
  out.max_energy = evaluate(inst, best_spins);
  out.argmax = std::move(best_spins);
  out.states_visited = total;
  return out;
}

struct LocalSearchResult {
  double best_energy = 0.0;
  SpinAssignment best_assignment;
};

// Steepest-ascent single-spin-flip search from `restarts` uniform random
// starts. Plateau moves are rejected (strict ascent), so runs terminate and
// results are reproducible from the seed; the price is that plateau-locked
// local maxima are never escaped. Ties across restarts keep the earlier
// restart's result.
inline LocalSearchResult local_search_max(const IsingInstance& inst, int restarts,
                                          std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("local_search_max: restarts must be >= 1");
  LocalSearchResult out;
  if (inst.n == 0) {
    out.best_energy = inst.constant;
    return out;
  }
  std::vector<std::vector<int>> incident(inst.n);
  for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e)
    for (int v : inst.edges[e].first) incident[v].push_back(e);

  SplitMix64 rng(seed);
  bool have_result = false;
  for (int r = 0; r < restarts; ++r) {
    SpinAssignment spins(inst.n);
    for (int v = 0; v < inst.n; ++v) spins[v] = rng.next_sign();
    for (;;) {
      int best_vertex = -1;
      double best_delta = 0.0;
      for (int v = 0; v < inst.n; ++v) {
        double delta = 0.0;
        for (int e : incident[v]) {
          const auto& [verts, weight] = inst.edges[e];
          int prod = 1;
          for (int w : verts) prod *= spins[w];
          delta -= 2.0 * weight * prod;
        }
        if (delta > best_delta) {
          best_delta = delta;
          best_vertex = v;
        }
      }
      if (best_vertex < 0) break;   // no strictly improving flip
      spins[best_vertex] = -spins[best_vertex];
    }
    double energy = evaluate(inst, spins);
    if (!have_result || energy > out.best_energy) {
      out.best_energy = energy;
      out.best_assignment = spins;
      have_result = true;
    }
  }
  return out;
}

// The 1-local rule for +/-1 rings: vertex v looks only at its two incident
// couplings and sets bit b_v = 1 exactly when both are -1; the spin is
// (-1)^{b_v}. On every ring whose couplings have parity +1 this already
// attains the optimum n. Requires inst to be exactly a +/-1 ring with edges
// {k, k+1 mod n} (edge k's weight is J_k).
inline SpinAssignment one_local_ring_assignment(const IsingInstance& inst) {
  const int n = inst.n;
  if (n < 3) throw std::invalid_argument("one_local_ring_assignment: need n >= 3");
  if (static_cast<int>(inst.edges.size()) != n)
    throw std::invalid_argument("one_local_ring_assignment: a ring on " + std::to_string(n) +
                                " vertices has " + std::to_string(n) + " edges, got " +
                                std::to_string(inst.edges.size()));
  // Extract J_k, edge k = {k, k+1 mod n}; canonical form stores {0, n-1} for
  // the wrap-around edge k = n-1.
  std::vector<double> coupling(n, 0.0);
  std::vector<char> found(n, 0);
  for (const auto& [verts, weight] : inst.edges) {
    if (verts.size() != 2)
      throw std::invalid_argument("one_local_ring_assignment: edge " +
                                  detail::vertex_set_to_string(verts) + " is not a pair");
    int k = -1;
    if (verts[1] == verts[0] + 1) k = verts[0];
    else if (verts[0] == 0 && verts[1] == n - 1) k = n - 1;
    if (k < 0)
      throw std::invalid_argument("one_local_ring_assignment: edge " +
                                  detail::vertex_set_to_string(verts) +
                                  " is not a ring edge {k, k+1 mod n}");
    if (weight != 1.0 && weight != -1.0)
      throw std::domain_error("one_local_ring_assignment: coupling of edge " +
                              detail::vertex_set_to_string(verts) + " is " +
                              std::to_string(weight) + ", expected +1 or -1");
    coupling[k] = weight;
    found[k] = 1;
  }
  for (int k = 0; k < n; ++k)
    if (!found[k])
      throw std::invalid_argument("one_local_ring_assignment: ring edge {" + std::to_string(k) +
                                  "," + std::to_string((k + 1) % n) + "} missing");

  SpinAssignment spins(n);
  for (int v = 0; v < n; ++v) {
    const double left = coupling[(v + n - 1) % n];   // edge (v-1, v)
    const double right = coupling[v];                // edge (v, v+1)
    const bool bit = (left == -1.0) && (right == -1.0);
    spins[v] = bit ? -1 : 1;
  }
  return spins;
}

}  // namespace rqaoa
