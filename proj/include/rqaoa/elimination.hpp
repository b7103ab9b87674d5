/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

// Recursive variable elimination.
//
// Each round optimizes variational angles, picks the edge f with the largest
// |<Z(f)>|, rounds that correlation into the constraint x(f) = sigma with
// sigma = sign(M_f), and eliminates one variable of f by substituting
// x_v = sigma * x(f \ {v}): every term containing v is rewritten onto the
// symmetric difference with f (picking up the factor sigma * J), duplicates
// merge, and the term f itself becomes the constant shift sigma * J_f. The
// constrained optimum of the original instance equals the optimum of the
// eliminated instance exactly. When n_c variables remain the core is solved
// by brute force and the eliminated spins are reconstructed in reverse.

#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rqaoa/analytic.hpp"
#include "rqaoa/exact.hpp"
#include "rqaoa/model.hpp"
#include "rqaoa/statevector.hpp"

namespace rqaoa {

// Outcome of one rounding decision.
struct RoundingChoice {
  std::vector<int> f;      // canonical vertex set of the chosen edge
  int v = -1;              // the vertex of f to eliminate (smallest index)
  int sigma = 1;           // sign(M_f); +1 when M_f == 0 (degenerate)
  double m_value = 0.0;    // M_f
};

// Pick the edge with the largest |M| from a correlation table. Ties keep the
// first edge in canonical order (lexicographically smallest vertex set);
// M == 0 rounds to sigma = +1 and is reported as degenerate by callers.
inline RoundingChoice choose_rounding(const CorrelationTable& table) {
  if (table.values.empty())
    throw std::invalid_argument("choose_rounding: correlation table is empty");
  std::size_t best = 0;
  double best_abs = std::abs(table.values[0].second);
  for (std::size_t i = 1; i < table.values.size(); ++i) {
    double a = std::abs(table.values[i].second);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  RoundingChoice choice;
  choice.f = table.values[best].first;
  choice.v = choice.f.front();
  choice.m_value = table.values[best].second;
  choice.sigma = (choice.m_value >= 0.0) ? 1 : -1;
  return choice;
}

struct EliminatedInstance {
  IsingInstance instance;        // n-1 vertices, contiguous labels
  int removed_vertex = -1;       // original label of the eliminated vertex
  std::vector<int> old_to_new;   // old label -> new label, -1 for the removed one
};

// Substitute x(f) = sigma and remove vertex v (a member of f) from the
// instance. f must be an existing edge; sigma must be +1 or -1.
inline EliminatedInstance eliminate_variable(const IsingInstance& inst, std::vector<int> f, int v,
                                             int sigma) {
  if (sigma != 1 && sigma != -1)
    throw std::invalid_argument("eliminate_variable: sigma must be +1 or -1, got " +
                                std::to_string(sigma));
  std::sort(f.begin(), f.end());
  const bool f_is_edge =
      std::any_of(inst.edges.begin(), inst.edges.end(),
                  [&f](const Edge& e) { return e.first == f; });
  if (!f_is_edge)
    throw std::invalid_argument("eliminate_variable: " + detail::vertex_set_to_string(f) +
                                " is not an edge of the instance");
  if (!std::binary_search(f.begin(), f.end(), v))
    throw std::invalid_argument("eliminate_variable: vertex " + std::to_string(v) +
                                " is not in " + detail::vertex_set_to_string(f));
  if (inst.n < 2)
    throw std::invalid_argument("eliminate_variable: cannot eliminate from n=" +
                                std::to_string(inst.n));

  EliminatedInstance out;
  out.removed_vertex = v;
  out.old_to_new.assign(inst.n, 0);
  for (int w = 0; w < inst.n; ++w) out.old_to_new[w] = (w < v) ? w : (w == v ? -1 : w - 1);

  std::vector<Edge> terms;
  terms.reserve(inst.edges.size());
  for (const auto& [verts, weight] : inst.edges) {
    std::vector<int> support;
    double w = weight;
    if (std::binary_search(verts.begin(), verts.end(), v)) {
      // x(e) = sigma * x(e symdiff f) under the constraint.
      std::set_symmetric_difference(verts.begin(), verts.end(), f.begin(), f.end(),
                                    std::back_inserter(support));
      w *= sigma;
    } else {
      support = verts;
    }
    for (int& x : support) x = out.old_to_new[x];
    terms.push_back({std::move(support), w});
  }
  out.instance = make_instance(inst.n - 1, terms, inst.constant);
  return out;
}

// One elimination round as recorded in the trace, in original vertex labels.
struct EliminationRecord {
  int round = 0;
  std::vector<int> f;
  int v = -1;
  int sigma = 1;
  double m_value = 0.0;
  std::vector<double> beta;
  std::vector<double> gamma;
  double energy_estimate = 0.0;   // optimized variational energy of the
                                  // reduced instance (constant included)
};

// Everything needed to lift a core solution back to the original variables.
struct ReconstructionMap {
  int original_n = 0;
  std::vector<EliminationRecord> records;   // in elimination order
  std::vector<int> core_to_original;        // core index -> original label
};

// Reverse-replay the eliminations: the core spins are placed at their
// original labels, then each record, last first, sets
// x_v = sigma * prod_{w in f, w != v} x_w.
inline SpinAssignment reconstruct(const ReconstructionMap& map, const SpinAssignment& core) {
  if (core.size() != map.core_to_original.size())
    throw std::invalid_argument("reconstruct: core has " + std::to_string(core.size()) +
                                " spins, map expects " +
                                std::to_string(map.core_to_original.size()));
  SpinAssignment full(map.original_n, 0);
  for (std::size_t i = 0; i < core.size(); ++i) {
    if (core[i] != 1 && core[i] != -1)
      throw std::invalid_argument("reconstruct: core spins must be +1 or -1");
    full[map.core_to_original[i]] = core[i];
  }
  for (auto it = map.records.rbegin(); it != map.records.rend(); ++it) {
    int prod = it->sigma;
    for (int w : it->f) {
      if (w == it->v) continue;
      if (full[w] == 0)
        throw std::logic_error("reconstruct: vertex " + std::to_string(w) +
                               " needed before it was assigned; records are inconsistent");
      prod *= full[w];
    }
    full[it->v] = prod;
  }
  for (int v = 0; v < map.original_n; ++v) {
    if (full[v] == 0)
      throw std::logic_error("reconstruct: vertex " + std::to_string(v) + " never assigned");
  }
  return full;
}

struct RqaoaConfig {
  int level = 1;          // variational level p
  int grid = 64;          // grid per axis for the closed-form level-1 route
  int refine_iters = 200;
  int sv_grid = 16;       // grid per axis for the statevector route
  int core_cap = 26;      // brute-force cap for the final core
};

struct RqaoaResult {
  SpinAssignment assignment;   // all original variables
  double energy = 0.0;         // evaluate(original instance, assignment)
  ReconstructionMap map;       // records double as the round-by-round trace
  int degenerate_roundings = 0;
};

// Full recursion down to n_c remaining variables. Level 1 on pairwise
// instances uses the closed form; higher levels, hyperedges and
// single-vertex terms go through the statevector route (n <= 24 applies
// there). If an intermediate instance runs out of edges early, the loop
// stops and the remaining free variables are solved by brute force (they
// only carry the constant, so all-+1 is returned for them).
inline RqaoaResult rqaoa(const IsingInstance& inst, int n_c, const RqaoaConfig& cfg = {}) {
  if (n_c < 1) throw std::invalid_argument("rqaoa: n_c must be >= 1");
  if (n_c > cfg.core_cap)
    throw std::invalid_argument("rqaoa: n_c=" + std::to_string(n_c) +
                                " exceeds the core brute-force cap " +
                                std::to_string(cfg.core_cap));
  if (cfg.level < 1) throw std::invalid_argument("rqaoa: level must be >= 1");

  RqaoaResult result;
  result.map.original_n = inst.n;

  IsingInstance cur = inst;
  std::vector<int> cur_to_orig(inst.n);
  for (int i = 0; i < inst.n; ++i) cur_to_orig[i] = i;

  int round = 0;
  while (cur.n > n_c && !cur.edges.empty()) {
    const bool pairwise = std::all_of(cur.edges.begin(), cur.edges.end(),
                                      [](const Edge& e) { return e.first.size() == 2; });
    VariationalOptimum opt;
    if (cfg.level == 1 && pairwise) {
      opt = optimize_level1(cur, cfg.grid, cfg.refine_iters);
    } else {
      opt = optimize_levelp_sv(cur, cfg.level, cfg.sv_grid, cfg.refine_iters);
    }
    RoundingChoice choice = choose_rounding(opt.correlations);
    if (choice.m_value == 0.0) ++result.degenerate_roundings;

    EliminationRecord rec;
    rec.round = round++;
    rec.f.reserve(choice.f.size());
    for (int w : choice.f) rec.f.push_back(cur_to_orig[w]);
    rec.v = cur_to_orig[choice.v];
    rec.sigma = choice.sigma;
    rec.m_value = choice.m_value;
    rec.beta = opt.params.beta;
    rec.gamma = opt.params.gamma;
    rec.energy_estimate = opt.energy;
    result.map.records.push_back(std::move(rec));

    EliminatedInstance next = eliminate_variable(cur, choice.f, choice.v, choice.sigma);
    cur = std::move(next.instance);
    cur_to_orig.erase(cur_to_orig.begin() + choice.v);
  }

  result.map.core_to_original = cur_to_orig;
  ExactResult core = brute_force_max(cur, cfg.core_cap);
  result.assignment = reconstruct(result.map, core.argmax);
  result.energy = evaluate(inst, result.assignment);
  return result;
}

// Trace as JSON lines, one record per round, keys exactly
// {round, f, v, sigma, m_value, beta, gamma, energy_estimate}; beta and
// gamma are scalars at level 1 and arrays otherwise.
inline std::string trace_to_jsonl(const std::vector<EliminationRecord>& records) {
  std::ostringstream out;
  for (const auto& rec : records) {
    nlohmann::json j;
    j["round"] = rec.round;
    j["f"] = rec.f;
    j["v"] = rec.v;
    j["sigma"] = rec.sigma;
    j["m_value"] = rec.m_value;
    if (rec.beta.size() == 1) {
      j["beta"] = rec.beta[0];
      j["gamma"] = rec.gamma[0];
    } else {
      j["beta"] = rec.beta;
      j["gamma"] = rec.gamma;
    }
    j["energy_estimate"] = rec.energy_estimate;
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace rqaoa
