/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

// Closed-form level-1 correlations and energies for pairwise instances.
//
// For the level-1 state with angles (beta, gamma) on a weighted graph, the
// correlation M_{u,v} = <Z_u Z_v> has an exact O(deg(u)+deg(v)) expression:
// with c = cos(2*beta), s = sin(2*beta) and theta_{a,b} = gamma * J_{a,b}
// (zero for absent edges),
//
//   M_{u,v} = (s^2/2) * [ prod_{p != u,v} cos(2*theta_{u,p} - 2*theta_{v,p})
//                        - prod_{p != u,v} cos(2*theta_{u,p} + 2*theta_{v,p}) ]
//           + c*s*sin(2*theta_{u,v}) * [ prod_{p != u,v} cos(2*theta_{u,p})
//                                       + prod_{p != u,v} cos(2*theta_{v,p}) ]
//
// which makes level-1 energies and their angle optimization O(m) per point
// instead of O(2^n). Instances with hyperedges or single-vertex terms are
// rejected; use the statevector route for those.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rqaoa/model.hpp"
#include "rqaoa/optimize.hpp"

namespace rqaoa {

namespace detail {

// Preprocessed pairwise instance: adjacency with edge indices, so per-gamma
// trigonometry can be cached per edge and shared across the beta sweep.
class Level1Evaluator {
 public:
  explicit Level1Evaluator(const IsingInstance& inst) : inst_(&inst) {
    adj_.assign(inst.n, {});
    endpoints_.reserve(inst.edges.size());
    weights_.reserve(inst.edges.size());
    for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
      const auto& [verts, weight] = inst.edges[e];
      if (verts.size() != 2)
        throw std::invalid_argument("level-1 closed form needs pairwise edges, got arity " +
                                    std::to_string(verts.size()) + " edge " +
                                    vertex_set_to_string(verts));
      adj_[verts[0]].push_back({verts[1], e});
      adj_[verts[1]].push_back({verts[0], e});
      endpoints_.push_back({verts[0], verts[1]});
      weights_.push_back(weight);
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());
  }

  const IsingInstance& instance() const { return *inst_; }
  int edge_count() const { return static_cast<int>(weights_.size()); }

  // M_{u,v} at (beta, gamma); (u, v) need not be an edge.
  double zz(int u, int v, double beta, double gamma) const {
    if (u < 0 || u >= inst_->n || v < 0 || v >= inst_->n || u == v)
      throw std::invalid_argument("level1_zz: need distinct vertices in range, got u=" +
                                  std::to_string(u) + " v=" + std::to_string(v));
    const double c = std::cos(2.0 * beta), s = std::sin(2.0 * beta);
    double prod_diff = 1.0, prod_sum = 1.0, pu = 1.0, pv = 1.0;
    double j_uv = 0.0;
    auto iu = adj_[u].begin(), eu = adj_[u].end();
    auto iv = adj_[v].begin(), ev = adj_[v].end();
    while (iu != eu || iv != ev) {
      int pu_vertex = (iu != eu) ? iu->first : inst_->n;
      int pv_vertex = (iv != ev) ? iv->first : inst_->n;
      if (pu_vertex < pv_vertex) {
        if (pu_vertex != v) {
          double au = 2.0 * gamma * weights_[iu->second];
          double ca = std::cos(au);
          prod_diff *= ca;
          prod_sum *= ca;
          pu *= ca;
        } else {
          j_uv = weights_[iu->second];
        }
        ++iu;
      } else if (pv_vertex < pu_vertex) {
        if (pv_vertex != u) {
          double av = 2.0 * gamma * weights_[iv->second];
          double ca = std::cos(av);
          prod_diff *= ca;
          prod_sum *= ca;
          pv *= ca;
        }
        ++iv;
      } else {
        // Common neighbor p of u and v (p can equal neither u nor v here).
        double au = 2.0 * gamma * weights_[iu->second];
        double av = 2.0 * gamma * weights_[iv->second];
        prod_diff *= std::cos(au - av);
        prod_sum *= std::cos(au + av);
        pu *= std::cos(au);
        pv *= std::cos(av);
        ++iu;
        ++iv;
      }
    }
    return 0.5 * s * s * (prod_diff - prod_sum) +
           c * s * std::sin(2.0 * gamma * j_uv) * (pu + pv);
  }

  // Per-gamma reduction: M_e = s^2 * A_e + c*s * B_e for every edge, so that
  // energy(beta, gamma) = constant + s^2 * sum_e J_e A_e + c*s * sum_e J_e B_e
  // and a whole beta sweep reuses one pass of trigonometry.
  void gamma_components(double gamma, double* sum_ja, double* sum_jb) const {
    cos_cache_.resize(weights_.size());
    sin_cache_.resize(weights_.size());
    for (std::size_t e = 0; e < weights_.size(); ++e) {
      cos_cache_[e] = std::cos(2.0 * gamma * weights_[e]);
      sin_cache_[e] = std::sin(2.0 * gamma * weights_[e]);
    }
    double ja = 0.0, jb = 0.0;
    for (std::size_t e = 0; e < weights_.size(); ++e) {
      auto [a, b] = edge_components(static_cast<int>(e));
      ja += weights_[e] * a;
      jb += weights_[e] * b;
    }
    *sum_ja = ja;
    *sum_jb = jb;
  }

  double energy(double beta, double gamma) const {
    double ja, jb;
    gamma_components(gamma, &ja, &jb);
    const double c = std::cos(2.0 * beta), s = std::sin(2.0 * beta);
    return inst_->constant + s * s * ja + c * s * jb;
  }

  CorrelationTable correlations(double beta, double gamma) const {
    CorrelationTable table;
    table.params = QaoaParams{1, {beta}, {gamma}};
    table.values.reserve(weights_.size());
    for (std::size_t e = 0; e < weights_.size(); ++e) {
      auto [u, v] = endpoints_[e];
      table.values.push_back({inst_->edges[e].first, zz(u, v, beta, gamma)});
    }
    return table;
  }

 private:
  // (A_e, B_e) for edge e using the per-gamma trig caches; cos of angle sums
  // and differences come from the addition identities on cached values.
  std::pair<double, double> edge_components(int e) const {
    auto [u, v] = endpoints_[e];
    double prod_diff = 1.0, prod_sum = 1.0, pu = 1.0, pv = 1.0;
    auto iu = adj_[u].begin(), eu = adj_[u].end();
    auto iv = adj_[v].begin(), ev = adj_[v].end();
    while (iu != eu || iv != ev) {
      int pu_vertex = (iu != eu) ? iu->first : inst_->n;
      int pv_vertex = (iv != ev) ? iv->first : inst_->n;
      if (pu_vertex < pv_vertex) {
        if (pu_vertex != v) {
          double ca = cos_cache_[iu->second];
          prod_diff *= ca;
          prod_sum *= ca;
          pu *= ca;
        }
        ++iu;
      } else if (pv_vertex < pu_vertex) {
        if (pv_vertex != u) {
          double ca = cos_cache_[iv->second];
          prod_diff *= ca;
          prod_sum *= ca;
          pv *= ca;
        }
        ++iv;
      } else {
        double cu = cos_cache_[iu->second], su = sin_cache_[iu->second];
        double cv = cos_cache_[iv->second], sv = sin_cache_[iv->second];
        prod_diff *= cu * cv + su * sv;   // cos(au - av)
        prod_sum *= cu * cv - su * sv;    // cos(au + av)
        pu *= cu;
        pv *= cv;
        ++iu;
        ++iv;
      }
    }
    return {0.5 * (prod_diff - prod_sum), sin_cache_[e] * (pu + pv)};
  }

  const IsingInstance* inst_;
  std::vector<std::vector<std::pair<int, int>>> adj_;   // (neighbor, edge index)
  std::vector<std::pair<int, int>> endpoints_;
  std::vector<double> weights_;
  mutable std::vector<double> cos_cache_, sin_cache_;
};

}  // namespace detail

// M_{u,v} for the level-1 state; (u, v) need not be an edge. O(n) per call
// after an O(m) adjacency build — use optimize_level1/correlation_table for
// bulk evaluation.
inline double level1_zz(const IsingInstance& inst, int u, int v, double beta, double gamma) {
  return detail::Level1Evaluator(inst).zz(u, v, beta, gamma);
}

// Level-1 energy constant + sum_e J_e M_e at (beta, gamma).
inline double level1_energy(const IsingInstance& inst, double beta, double gamma) {
  return detail::Level1Evaluator(inst).energy(beta, gamma);
}

// Correlations of every instance edge at (beta, gamma).
inline CorrelationTable correlation_table(const IsingInstance& inst, double beta, double gamma) {
  return detail::Level1Evaluator(inst).correlations(beta, gamma);
}

// Maximize the level-1 energy over (beta, gamma): exhaustive grid scan over
// [0, pi) x [0, gamma period) followed by compass refinement. Grid ties are
// broken toward the lexicographically smallest (beta index, gamma index).
inline VariationalOptimum optimize_level1(const IsingInstance& inst, int grid = 64,
                                          int refine_iters = 200) {
  if (grid < 2) throw std::invalid_argument("optimize_level1: grid must be >= 2");
  if (refine_iters < 0) throw std::invalid_argument("optimize_level1: refine_iters must be >= 0");
  detail::Level1Evaluator eval(inst);
  const double gamma_period = gamma_search_period(inst);

  std::vector<double> energy(static_cast<std::size_t>(grid) * grid);
  for (int ig = 0; ig < grid; ++ig) {
    double ja, jb;
    eval.gamma_components(gamma_period * ig / grid, &ja, &jb);
    for (int ib = 0; ib < grid; ++ib) {
      const double beta = std::numbers::pi * ib / grid;
      const double c = std::cos(2.0 * beta), s = std::sin(2.0 * beta);
      energy[static_cast<std::size_t>(ib) * grid + ig] = inst.constant + s * s * ja + c * s * jb;
    }
  }
  int best_ib = 0, best_ig = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int ib = 0; ib < grid; ++ib) {
    for (int ig = 0; ig < grid; ++ig) {
      double e = energy[static_cast<std::size_t>(ib) * grid + ig];
      if (e > best) {
        best = e;
        best_ib = ib;
        best_ig = ig;
      }
    }
  }

  std::vector<double> x = {std::numbers::pi * best_ib / grid, gamma_period * best_ig / grid};
  double refined = detail::pattern_search(
      x, std::numbers::pi / grid, refine_iters,
      [&eval](const std::vector<double>& angles) { return eval.energy(angles[0], angles[1]); });

  VariationalOptimum out;
  out.params = QaoaParams{1, {x[0]}, {x[1]}};
  out.energy = refined;
  out.correlations = eval.correlations(x[0], x[1]);
  return out;
}

}  // namespace rqaoa
