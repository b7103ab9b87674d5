/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

// Instance generators and graph diagnostics.
//
// Generators are deterministic in (spec, seed): generating the same spec
// twice yields byte-identical canonical JSON. Supported spec strings:
//
//   ring:n=24                 cycle with all couplings +1
//   ring:n=24,coupling=pm1,seed=5   cycle with seeded uniform +/-1 couplings
//   rr3:n=32,seed=7           random 3-regular graph, uniform +/-1 couplings
//   rr4:n=20,seed=1,coupling=plus   other degrees / all-+1 couplings
//   appd:n=12,s=10            sign-pattern ring family (see sign_pattern_ring)
//   file:/path/to/inst.json   load an instance from canonical JSON
//
// Keys may appear in any order; unknown keys are rejected.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rqaoa/model.hpp"
#include "rqaoa/rng.hpp"

namespace rqaoa {

enum class CouplingKind { AllPlus, UniformPm1 };

struct GraphSpec {
  std::string kind;                    // "ring", "rr", "appd", "file"
  int n = 0;
  int degree = 0;                      // rr only
  std::uint64_t seed = 0;
  std::uint64_t s = 0;                 // appd sign pattern, bit a = s_a
  bool has_seed = false;
  bool has_s = false;
  CouplingKind coupling = CouplingKind::AllPlus;
  bool has_coupling = false;
  std::string path;                    // file only
};

// Cycle on n >= 3 vertices, edges {i, i+1 mod n}. With UniformPm1 the
// couplings J_0..J_{n-1} are drawn in edge order from SplitMix64(seed).
inline IsingInstance ring_instance(int n, CouplingKind coupling = CouplingKind::AllPlus,
                                   std::uint64_t seed = 0) {
  if (n < 3) throw std::invalid_argument("ring_instance: n must be >= 3, got " + std::to_string(n));
  SplitMix64 rng(seed);
  std::vector<Edge> terms;
  terms.reserve(n);
  for (int i = 0; i < n; ++i) {
    double weight = (coupling == CouplingKind::UniformPm1) ? rng.next_sign() : 1.0;
    terms.push_back({{i, (i + 1) % n}, weight});
  }
  return make_instance(n, terms);
}

// Cycle of length n = 3k whose couplings around the ring follow the sign
// pattern s in {0,1}^k: edges 3a and 3a+1 carry (-1)^{s_a}, edge 3a+2
// carries +1 (edge k joins vertices k and k+1 mod n). All members of the
// family are gauge-equivalent to the all-+1 ring via the mask
// {3a+1 : s_a = 1}, so they share its optimum n and its coupling parity +1.
inline IsingInstance sign_pattern_ring(int n, std::uint64_t s) {
  if (n < 3 || n % 3 != 0)
    throw std::invalid_argument("sign_pattern_ring: n must be a positive multiple of 3, got " +
                                std::to_string(n));
  int k = n / 3;
  if (k < 64 && (s >> k) != 0)
    throw std::invalid_argument("sign_pattern_ring: sign pattern s=" + std::to_string(s) +
                                " does not fit in " + std::to_string(k) + " bits");
  std::vector<Edge> terms;
  terms.reserve(n);
  for (int a = 0; a < k; ++a) {
    double sign = ((s >> a) & 1) ? -1.0 : 1.0;
    terms.push_back({{3 * a, 3 * a + 1}, sign});
    terms.push_back({{3 * a + 1, 3 * a + 2}, sign});
    terms.push_back({{3 * a + 2, (3 * a + 3) % n}, 1.0});
  }
  return make_instance(n, terms);
}

// Gauge mask {3a+1 : s_a = 1} carrying sign_pattern_ring(n, s) to the all-+1 ring.
inline GaugeMask sign_pattern_mask(int n, std::uint64_t s) {
  GaugeMask mask;
  for (int a = 0; a < n / 3; ++a)
    if ((s >> a) & 1) mask.push_back(3 * a + 1);
  return mask;
}

// Random d-regular simple graph on n vertices via the configuration model
// with rejection: pair up d stubs per vertex uniformly, reject pairings with
// self-loops or parallel edges. Couplings are then drawn in canonical edge
// order from the same generator. Throws std::runtime_error if no simple
// pairing is found within 10000 attempts.
inline IsingInstance random_regular_instance(int n, int degree, std::uint64_t seed,
                                             CouplingKind coupling = CouplingKind::UniformPm1) {
  if (n < 1 || degree < 1)
    throw std::invalid_argument("random_regular_instance: need n >= 1 and degree >= 1");
  if ((static_cast<long long>(n) * degree) % 2 != 0)
    throw std::invalid_argument("random_regular_instance: n*degree must be even, got n=" +
                                std::to_string(n) + " degree=" + std::to_string(degree));
  if (degree >= n)
    throw std::invalid_argument("random_regular_instance: degree must be < n for a simple graph");

  SplitMix64 rng(seed);
  std::vector<int> stubs(static_cast<std::size_t>(n) * degree);
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::size_t idx = 0;
    for (int v = 0; v < n; ++v)
      for (int r = 0; r < degree; ++r) stubs[idx++] = v;
    // Fisher-Yates with the pinned generator.
    for (std::size_t i = stubs.size() - 1; i > 0; --i) {
      std::size_t j = rng.next_below(i + 1);
      std::swap(stubs[i], stubs[j]);
    }
    std::set<std::pair<int, int>> seen;
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && simple; i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) simple = false;
      else if (!seen.insert({std::min(u, v), std::max(u, v)}).second) simple = false;
    }
    if (!simple) continue;
    std::vector<Edge> terms;
    terms.reserve(seen.size());
    for (const auto& [u, v] : seen) {
      double weight = (coupling == CouplingKind::UniformPm1) ? rng.next_sign() : 1.0;
      terms.push_back({{u, v}, weight});
    }
    return make_instance(n, terms);
  }
  throw std::runtime_error("random_regular_instance: no simple pairing in " +
                           std::to_string(kMaxAttempts) + " attempts for n=" + std::to_string(n) +
                           " degree=" + std::to_string(degree));
}

namespace detail {

inline std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw std::invalid_argument("graph spec: malformed key=value pair '" + item + "'");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("graph spec: key '" + key + "' needs an unsigned integer, got '" +
                                value + "'");
  }
}

}  // namespace detail

// Parse a spec string "kind:key=value,...". See file header for the grammar.
inline GraphSpec parse_graph_spec(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0)
    throw std::invalid_argument("graph spec '" + text + "': expected kind:key=value,...");
  GraphSpec spec;
  std::string kind = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);

  if (kind == "file") {
    spec.kind = "file";
    spec.path = rest;
    if (spec.path.empty()) throw std::invalid_argument("graph spec: file: needs a path");
    return spec;
  }
  if (kind == "ring" || kind == "appd") {
    spec.kind = kind;
  } else if (kind.size() > 2 && kind.compare(0, 2, "rr") == 0) {
    spec.kind = "rr";
    spec.degree = static_cast<int>(detail::parse_u64("degree", kind.substr(2)));
  } else {
    throw std::invalid_argument("graph spec: unknown kind '" + kind + "'");
  }

  for (const auto& [key, value] : detail::parse_key_values(rest)) {
    if (key == "n") {
      spec.n = static_cast<int>(detail::parse_u64(key, value));
    } else if (key == "seed") {
      spec.seed = detail::parse_u64(key, value);
      spec.has_seed = true;
    } else if (key == "s" && spec.kind == "appd") {
      spec.s = detail::parse_u64(key, value);
      spec.has_s = true;
    } else if (key == "coupling") {
      if (value == "plus") spec.coupling = CouplingKind::AllPlus;
      else if (value == "pm1") spec.coupling = CouplingKind::UniformPm1;
      else throw std::invalid_argument("graph spec: coupling must be 'plus' or 'pm1', got '" +
                                       value + "'");
      spec.has_coupling = true;
    } else {
      throw std::invalid_argument("graph spec: unknown key '" + key + "' for kind '" + spec.kind +
                                  "'");
    }
  }
  if (spec.n <= 0) throw std::invalid_argument("graph spec '" + text + "': n is required");
  if (spec.kind == "rr" && !spec.has_seed)
    throw std::invalid_argument("graph spec '" + text + "': rr needs seed=<value>");
  if (spec.kind == "appd" && !spec.has_s)
    throw std::invalid_argument("graph spec '" + text + "': appd needs s=<pattern>");
  return spec;
}

// Materialize a spec. Defaults: ring -> all-+1 couplings, rr -> uniform +/-1.
inline IsingInstance generate(const GraphSpec& spec) {
  if (spec.kind == "ring") {
    CouplingKind coupling = spec.has_coupling ? spec.coupling : CouplingKind::AllPlus;
    if (coupling == CouplingKind::UniformPm1 && !spec.has_seed)
      throw std::invalid_argument("generate: ring with coupling=pm1 needs a seed");
    return ring_instance(spec.n, coupling, spec.seed);
  }
  if (spec.kind == "rr") {
    CouplingKind coupling = spec.has_coupling ? spec.coupling : CouplingKind::UniformPm1;
    return random_regular_instance(spec.n, spec.degree, spec.seed, coupling);
  }
  if (spec.kind == "appd") {
    if (!spec.has_s) throw std::invalid_argument("generate: appd spec needs s=<pattern>");
    return sign_pattern_ring(spec.n, spec.s);
  }
  if (spec.kind == "file") {
    std::ifstream in(spec.path);
    if (!in) throw std::runtime_error("generate: cannot open instance file '" + spec.path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_string(buffer.str());
  }
  throw std::invalid_argument("generate: unknown graph kind '" + spec.kind + "'");
}

inline IsingInstance generate(const std::string& spec_text) {
  return generate(parse_graph_spec(spec_text));
}

namespace detail {

// Pairwise edge list as (u, v) with u < v; rejects hyperedges.
inline std::vector<std::pair<int, int>> pair_edges(const IsingInstance& inst,
                                                   const char* caller) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(inst.edges.size());
  for (const auto& [verts, weight] : inst.edges) {
    if (verts.size() != 2)
      throw std::invalid_argument(std::string(caller) + ": edge " +
                                  vertex_set_to_string(verts) + " is not a pair");
    edges.emplace_back(verts[0], verts[1]);
  }
  return edges;
}

}  // namespace detail

// Cheeger (edge expansion) constant h = min over 0 < |S| <= n/2 of
// |boundary(S)| / |S|, by exhaustive enumeration of vertex subsets.
// Weights are ignored; edges define adjacency. Requires 1 <= n <= 24.
// A disconnected graph has h = 0.
inline double cheeger_constant(const IsingInstance& inst) {
  if (inst.n < 1) throw std::invalid_argument("cheeger_constant: need n >= 1");
  if (inst.n > 24)
    throw std::invalid_argument("cheeger_constant: exhaustive enumeration capped at n=24, got n=" +
                                std::to_string(inst.n));
  auto edges = detail::pair_edges(inst, "cheeger_constant");
  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t total = 1u << inst.n;
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    int size = std::popcount(mask);
    if (2 * size > inst.n) continue;
    int boundary = 0;
    for (const auto& [u, v] : edges) {
      if (((mask >> u) & 1) != ((mask >> v) & 1)) ++boundary;
    }
    best = std::min(best, static_cast<double>(boundary) / size);
  }
  return best;
}

struct BoundaryEnergy {
  double maxcut_energy = 0.0;  // evaluate(inst, x)
  int boundary_size = 0;       // |edges leaving supp(x)|
};

// For the MaxCut form of an all-+1 graph, the energy of an assignment equals
// the edge boundary of supp(x) = {v : x_v = -1}. Verifies the instance has
// exactly that shape (every weight -1/2, constant = m/2) and returns both
// sides so callers can assert the identity and expansion lower bounds.
inline BoundaryEnergy boundary_energy_identity_check(const IsingInstance& inst,
                                                     const SpinAssignment& x) {
  auto edges = detail::pair_edges(inst, "boundary_energy_identity_check");
  for (const auto& [verts, weight] : inst.edges) {
    if (weight != -0.5)
      throw std::invalid_argument(
          "boundary_energy_identity_check: weight of edge " +
          detail::vertex_set_to_string(verts) + " is " + std::to_string(weight) +
          ", instance is not the MaxCut form of an all-+1 graph");
  }
  if (inst.constant != static_cast<double>(edges.size()) / 2.0)
    throw std::invalid_argument(
        "boundary_energy_identity_check: constant " + std::to_string(inst.constant) +
        " != m/2 = " + std::to_string(edges.size() / 2.0));
  check_assignment(inst, x);
  BoundaryEnergy out;
  out.maxcut_energy = evaluate(inst, x);
  for (const auto& [u, v] : edges)
    if (x[u] != x[v]) ++out.boundary_size;
  return out;
}

}  // namespace rqaoa
