/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

// Ising cost functions on hypergraphs.
//
// An instance is C(x) = constant + sum_e J_e * prod_{v in e} x_v over spin
// assignments x in {+1,-1}^n, where each hyperedge e is a set of distinct
// vertices. Instances are kept canonical at all times: every edge's vertex
// list sorted ascending, the edge list sorted lexicographically, duplicate
// vertex sets merged by summing weights, zero-weight edges dropped, and an
// empty vertex set folded into the constant. Canonical form is what makes
// instance equality, JSON round-trips and elimination bookkeeping exact.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace rqaoa {

// Spins are +1/-1 integers, index == vertex.
using SpinAssignment = std::vector<int>;

// A gauge mask is the subset of vertices whose spins are flipped.
using GaugeMask = std::vector<int>;

// One interaction term: (sorted vertex set, coupling weight).
using Edge = std::pair<std::vector<int>, double>;

struct IsingInstance {
  int n = 0;
  std::vector<Edge> edges;   // canonical: sorted, unique vertex sets
  double constant = 0.0;

  bool operator==(const IsingInstance&) const = default;
};

namespace detail {

inline std::string vertex_set_to_string(const std::vector<int>& e) {
  std::string s = "{";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e[i]);
  }
  return s + "}";
}

}  // namespace detail

// Build a canonical instance from raw terms. Throws std::invalid_argument on
// out-of-range vertices, repeated vertices within a term, or n < 0.
inline IsingInstance make_instance(int n, const std::vector<Edge>& terms, double constant = 0.0) {
  if (n < 0) throw std::invalid_argument("make_instance: n must be >= 0");
  IsingInstance inst;
  inst.n = n;
  inst.constant = constant;
  std::map<std::vector<int>, double> merged;
  for (const auto& [verts_raw, weight] : terms) {
    std::vector<int> verts = verts_raw;
    std::sort(verts.begin(), verts.end());
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (verts[i] < 0 || verts[i] >= n)
        throw std::invalid_argument("make_instance: vertex " + std::to_string(verts[i]) +
                                    " out of range for n=" + std::to_string(n) + " in edge " +
                                    detail::vertex_set_to_string(verts_raw));
      if (i > 0 && verts[i] == verts[i - 1])
        throw std::invalid_argument("make_instance: repeated vertex " + std::to_string(verts[i]) +
                                    " in edge " + detail::vertex_set_to_string(verts_raw));
    }
    if (verts.empty()) {
      inst.constant += weight;   // x(empty set) == 1
      continue;
    }
    merged[verts] += weight;
  }
  inst.edges.reserve(merged.size());
  for (auto& [verts, weight] : merged) {
    if (weight != 0.0) inst.edges.emplace_back(verts, weight);
  }
  return inst;
}

inline void check_assignment(const IsingInstance& inst, const SpinAssignment& x) {
  if (static_cast<int>(x.size()) != inst.n)
    throw std::invalid_argument("spin assignment has size " + std::to_string(x.size()) +
                                ", instance has n=" + std::to_string(inst.n));
  for (int v = 0; v < inst.n; ++v) {
    if (x[v] != 1 && x[v] != -1)
      throw std::invalid_argument("spin at vertex " + std::to_string(v) + " is " +
                                  std::to_string(x[v]) + ", expected +1 or -1");
  }
}

// Cost value C(x).
inline double evaluate(const IsingInstance& inst, const SpinAssignment& x) {
  check_assignment(inst, x);
  double acc = inst.constant;
  for (const auto& [verts, weight] : inst.edges) {
    int prod = 1;
    for (int v : verts) prod *= x[v];
    acc += weight * prod;
  }
  return acc;
}

// Spin value of a vertex set: x(e) = prod_{v in e} x_v.
inline int spin_product(const SpinAssignment& x, const std::vector<int>& verts) {
  int prod = 1;
  for (int v : verts) {
    if (v < 0 || v >= static_cast<int>(x.size()))
      throw std::invalid_argument("spin_product: vertex " + std::to_string(v) + " out of range");
    prod *= x[v];
  }
  return prod;
}

// MaxCut objective of a pairwise instance: (1/2) * (m*I - H) generalized to
// weighted graphs, i.e. constant += m/2 and every weight becomes -J/2 where
// m = sum of weights. For an all-J=1 graph, evaluate() of the result counts
// cut edges. Throws std::invalid_argument if any edge is not a pair.
inline IsingInstance max_cut_form(const IsingInstance& inst) {
  double total_weight = 0.0;
  for (const auto& [verts, weight] : inst.edges) {
    if (verts.size() != 2)
      throw std::invalid_argument("max_cut_form: edge " + detail::vertex_set_to_string(verts) +
                                  " has arity " + std::to_string(verts.size()) +
                                  ", only pairwise instances supported");
    total_weight += weight;
  }
  IsingInstance out;
  out.n = inst.n;
  out.constant = inst.constant + total_weight / 2.0;
  out.edges.reserve(inst.edges.size());
  for (const auto& [verts, weight] : inst.edges) out.edges.emplace_back(verts, -weight / 2.0);
  return out;
}

// Flip the spins in `mask`: each weight picks up (-1)^{|e & mask|}. This is an
// involution and maps optima onto optima (the optimum value is unchanged).
inline IsingInstance apply_gauge(const IsingInstance& inst, const GaugeMask& mask) {
  std::vector<char> flipped(inst.n, 0);
  for (int v : mask) {
    if (v < 0 || v >= inst.n)
      throw std::invalid_argument("apply_gauge: vertex " + std::to_string(v) +
                                  " out of range for n=" + std::to_string(inst.n));
    flipped[v] = 1;
  }
  IsingInstance out = inst;
  for (auto& [verts, weight] : out.edges) {
    int overlap = 0;
    for (int v : verts) overlap += flipped[v];
    if (overlap % 2 != 0) weight = -weight;
  }
  // Weights only change sign, so canonical order and non-zero-ness persist.
  return out;
}

// Product of all couplings of a +/-1-weighted instance, as +1 or -1.
// Throws std::domain_error if any weight is not exactly +1 or -1.
inline int coupling_parity(const IsingInstance& inst) {
  int parity = 1;
  for (const auto& [verts, weight] : inst.edges) {
    if (weight == 1.0) continue;
    if (weight == -1.0) {
      parity = -parity;
      continue;
    }
    throw std::domain_error("coupling_parity: edge " + detail::vertex_set_to_string(verts) +
                            " has weight " + std::to_string(weight) + ", expected +1 or -1");
  }
  return parity;
}

// Variational angles for a level-p circuit: one (beta, gamma) pair per layer.
struct QaoaParams {
  int p = 0;
  std::vector<double> beta;
  std::vector<double> gamma;

  bool operator==(const QaoaParams&) const = default;
};

inline void check_params(const QaoaParams& params) {
  if (params.p < 0) throw std::invalid_argument("QaoaParams: p must be >= 0");
  if (static_cast<int>(params.beta.size()) != params.p ||
      static_cast<int>(params.gamma.size()) != params.p)
    throw std::invalid_argument("QaoaParams: beta/gamma must each hold p=" +
                                std::to_string(params.p) + " angles");
}

// Two-point correlations <Z_u Z_v> of a variational state, one value per
// instance edge, in the instance's canonical edge order. Produced by either
// the closed-form level-1 route or the statevector route; consumed by the
// rounding step of the recursive algorithm.
struct CorrelationTable {
  QaoaParams params;
  std::vector<std::pair<std::vector<int>, double>> values;   // (vertex set, M)
};

// Result of an angle optimization: the best angles found, the energy there,
// and the correlations needed for rounding.
struct VariationalOptimum {
  QaoaParams params;
  double energy = 0.0;
  CorrelationTable correlations;
};

// Search period for the phase angle gamma. For integer-valued couplings the
// energy is pi-periodic in gamma (shifting gamma by pi multiplies the phase
// operator by a global sign); otherwise use [0, 2*pi), which covers
// half-integer weights such as MaxCut forms. The mixing angle beta is always
// pi-periodic.
inline double gamma_search_period(const IsingInstance& inst) {
  for (const auto& [verts, weight] : inst.edges) {
    if (weight != std::floor(weight)) return 2.0 * std::numbers::pi;
  }
  return std::numbers::pi;
}

// Number of vertices a depth-p level-type circuit on a degree-D interaction
// graph can correlate: p*(D+1) in general, p*D when the graph is bipartite
// and regular.
inline int depth_bound(int degree, int level, bool bipartite_regular = false) {
  if (degree < 1) throw std::invalid_argument("depth_bound: degree must be >= 1");
  if (level < 1) throw std::invalid_argument("depth_bound: level must be >= 1");
  return bipartite_regular ? level * degree : level * (degree + 1);
}

// Level-1 approximation-ratio upper bound 5/6 + sqrt(D-1)/(3D) for MaxCut on
// D-regular triangle-free graphs; decreasing in D, tends to 5/6.
inline double degree_ratio_bound(int degree) {
  if (degree < 3) throw std::domain_error("degree_ratio_bound: degree must be >= 3, got " +
                                          std::to_string(degree));
  double d = static_cast<double>(degree);
  return 5.0 / 6.0 + std::sqrt(d - 1.0) / (3.0 * d);
}

// JSON format: {"n": int, "edges": [[[v0,v1,...], J], ...], "constant": float}
// with edges in canonical (lexicographic) order.
inline nlohmann::json to_json(const IsingInstance& inst) {
  nlohmann::json j;
  j["n"] = inst.n;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [verts, weight] : inst.edges) {
    edges.push_back(nlohmann::json::array({verts, weight}));
  }
  j["edges"] = std::move(edges);
  j["constant"] = inst.constant;
  return j;
}

inline IsingInstance from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw std::invalid_argument("instance JSON must be an object with keys n, edges[, constant]");
  int n = j.at("n").get<int>();
  std::vector<Edge> terms;
  for (const auto& entry : j.at("edges")) {
    if (!entry.is_array() || entry.size() != 2)
      throw std::invalid_argument("instance JSON edge entries must be [vertex_list, weight]");
    terms.emplace_back(entry.at(0).get<std::vector<int>>(), entry.at(1).get<double>());
  }
  double constant = j.value("constant", 0.0);
  return make_instance(n, terms, constant);
}

inline std::string to_json_string(const IsingInstance& inst) { return to_json(inst).dump(); }

inline IsingInstance from_json_string(const std::string& text) {
  return from_json(nlohmann::json::parse(text));
}

}  // namespace rqaoa
