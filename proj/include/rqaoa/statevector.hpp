/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

// Dense statevector simulation of level-p circuits.
//
// This is the slow-but-exact route: 2^n complex amplitudes, bit j of a basis
// index is the spin of vertex j ((-1)^bit), capacity capped at n = 24. It
// serves as the correctness oracle for the closed-form level-1 module and as
// the only route for entangled-block states, higher levels and hyperedges.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqaoa/graphs.hpp"
#include "rqaoa/model.hpp"
#include "rqaoa/optimize.hpp"
#include "rqaoa/rng.hpp"

namespace rqaoa {

inline constexpr int kMaxQubits = 24;

class Statevector {
 public:
  explicit Statevector(int n) : n_(n) {
    if (n < 1 || n > kMaxQubits)
      throw std::invalid_argument("Statevector: n must be in [1, " +
                                  std::to_string(kMaxQubits) + "], got " + std::to_string(n));
    amps_.assign(std::size_t{1} << n, {0.0, 0.0});
  }

  static Statevector plus_state(int n) {
    Statevector sv(n);
    double amp = std::pow(2.0, -0.5 * n);
    std::fill(sv.amps_.begin(), sv.amps_.end(), std::complex<double>{amp, 0.0});
    return sv;
  }

  static Statevector basis_state(int n, std::uint64_t index) {
    Statevector sv(n);
    if (index >= sv.dim())
      throw std::invalid_argument("Statevector::basis_state: index out of range");
    sv.amps_[index] = {1.0, 0.0};
    return sv;
  }

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::complex<double>& operator[](std::size_t i) { return amps_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return std::sqrt(acc);
  }

  void normalize() {
    double inv = 1.0 / norm();
    for (auto& a : amps_) a *= inv;
  }

  // Pauli X on qubit q.
  void apply_x(int q) {
    check_qubit(q);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
  }

  // Pauli Z on qubit q.
  void apply_z(int q) {
    check_qubit(q);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if (i & bit) amps_[i] = -amps_[i];
  }

  // exp(i * theta * X) on qubit q.
  void apply_exp_ix(int q, double theta) {
    check_qubit(q);
    const std::size_t bit = std::size_t{1} << q;
    const double c = std::cos(theta);
    const std::complex<double> is{0.0, std::sin(theta)};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      std::complex<double> a0 = amps_[i];
      std::complex<double> a1 = amps_[i | bit];
      amps_[i] = c * a0 + is * a1;
      amps_[i | bit] = is * a0 + c * a1;
    }
  }

  // exp(i * theta * Z_q1 Z_q2).
  void apply_exp_izz(int q1, int q2, double theta) {
    check_qubit(q1);
    check_qubit(q2);
    if (q1 == q2) throw std::invalid_argument("apply_exp_izz: qubits must differ");
    const std::size_t b1 = std::size_t{1} << q1, b2 = std::size_t{1} << q2;
    const std::complex<double> plus{std::cos(theta), std::sin(theta)};
    const std::complex<double> minus = std::conj(plus);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      bool same = ((i & b1) != 0) == ((i & b2) != 0);
      amps_[i] *= same ? plus : minus;
    }
  }

  // Controlled-Z between q1 and q2.
  void apply_cz(int q1, int q2) {
    check_qubit(q1);
    check_qubit(q2);
    if (q1 == q2) throw std::invalid_argument("apply_cz: qubits must differ");
    const std::size_t b1 = std::size_t{1} << q1, b2 = std::size_t{1} << q2;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if ((i & b1) && (i & b2)) amps_[i] = -amps_[i];
  }

  // amp_x *= exp(i * gamma * diag[x]) for a precomputed diagonal.
  void apply_diagonal_phase(const std::vector<double>& diag, double gamma) {
    if (diag.size() != amps_.size())
      throw std::invalid_argument("apply_diagonal_phase: diagonal has wrong dimension");
    for (std::size_t i = 0; i < amps_.size(); ++i)
      amps_[i] *= std::complex<double>{std::cos(gamma * diag[i]), std::sin(gamma * diag[i])};
  }

 private:
  void check_qubit(int q) const {
    if (q < 0 || q >= n_)
      throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range for n=" +
                                  std::to_string(n_));
  }

  int n_;
  std::vector<std::complex<double>> amps_;
};

inline std::complex<double> inner_product(const Statevector& a, const Statevector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("inner_product: dimension mismatch");
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double fidelity(const Statevector& a, const Statevector& b) {
  return std::norm(inner_product(a, b));
}

// Haar-ish random unit vector (i.i.d. complex gaussians via Box-Muller,
// normalized). The two Box-Muller outputs give the real and imaginary parts.
inline Statevector random_state(int n, SplitMix64& rng) {
  Statevector sv(n);
  for (std::size_t i = 0; i < sv.dim(); ++i) {
    double u = 1.0 - rng.next_double();   // (0, 1]
    double r = std::sqrt(-2.0 * std::log(u));
    double phi = 2.0 * std::numbers::pi * rng.next_double();
    sv[i] = {r * std::cos(phi), r * std::sin(phi)};
  }
  sv.normalize();
  return sv;
}

// Cost values C(x) for every basis state, including the constant term.
inline std::vector<double> diagonal_energies(const IsingInstance& inst) {
  if (inst.n < 1 || inst.n > kMaxQubits)
    throw std::invalid_argument("diagonal_energies: n must be in [1, " +
                                std::to_string(kMaxQubits) + "]");
  std::vector<double> diag(std::size_t{1} << inst.n, inst.constant);
  for (const auto& [verts, weight] : inst.edges) {
    std::uint64_t mask = 0;
    for (int v : verts) mask |= std::uint64_t{1} << v;
    for (std::size_t x = 0; x < diag.size(); ++x)
      diag[x] += (std::popcount(x & mask) & 1) ? -weight : weight;
  }
  return diag;
}

// <state| Z(e) |state> for a vertex set e (any arity, including |e| = 1).
inline double expectation_zz(const Statevector& state, const std::vector<int>& verts) {
  std::uint64_t mask = 0;
  for (int v : verts) {
    if (v < 0 || v >= state.num_qubits())
      throw std::invalid_argument("expectation_zz: vertex " + std::to_string(v) +
                                  " out of range");
    mask |= std::uint64_t{1} << v;
  }
  double acc = 0.0;
  for (std::size_t x = 0; x < state.dim(); ++x) {
    double w = std::norm(state[x]);
    acc += (std::popcount(x & mask) & 1) ? -w : w;
  }
  return acc;
}

// <state| C |state> = constant + sum_e J_e <Z(e)>.
inline double expectation_energy(const Statevector& state, const IsingInstance& inst) {
  if (inst.n != state.num_qubits())
    throw std::invalid_argument("expectation_energy: instance/state dimension mismatch");
  double acc = inst.constant;
  for (const auto& [verts, weight] : inst.edges) acc += weight * expectation_zz(state, verts);
  return acc;
}

// |<state| X^{otimes n} |state>|; equals 1 for states with the global
// spin-flip symmetry and detects its absence otherwise.
inline double check_z2_symmetry(const Statevector& state) {
  const std::size_t all = state.dim() - 1;
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t x = 0; x < state.dim(); ++x) acc += std::conj(state[x]) * state[all ^ x];
  return std::abs(acc);
}

// Level-p state: layers of phase exp(i*gamma_m*C) followed by mixer
// exp(i*beta_m*X) on every qubit, applied to |+>^n in layer order m = 1..p.
inline Statevector qaoa_state(const IsingInstance& inst, const QaoaParams& params) {
  check_params(params);
  Statevector sv = Statevector::plus_state(inst.n);
  if (params.p == 0) return sv;
  const std::vector<double> diag = diagonal_energies(inst);
  for (int m = 0; m < params.p; ++m) {
    sv.apply_diagonal_phase(diag, params.gamma[m]);
    for (int q = 0; q < inst.n; ++q) sv.apply_exp_ix(q, params.beta[m]);
  }
  return sv;
}

// ---------------------------------------------------------------------------
// Small gate-list circuits (needed for block states and range checks).

enum class GateKind { X, Z, CZ, RotX, RotZZ };

struct Gate {
  GateKind kind;
  int a = 0;
  int b = 0;        // second qubit for CZ / RotZZ
  double theta = 0.0;
};

struct Circuit {
  int n = 0;
  std::vector<Gate> gates;
};

inline void apply_gate(Statevector& sv, const Gate& g, bool inverse = false) {
  switch (g.kind) {
    case GateKind::X: sv.apply_x(g.a); break;
    case GateKind::Z: sv.apply_z(g.a); break;
    case GateKind::CZ: sv.apply_cz(g.a, g.b); break;
    case GateKind::RotX: sv.apply_exp_ix(g.a, inverse ? -g.theta : g.theta); break;
    case GateKind::RotZZ: sv.apply_exp_izz(g.a, g.b, inverse ? -g.theta : g.theta); break;
  }
}

inline void apply_circuit(Statevector& sv, const Circuit& circ) {
  if (sv.num_qubits() != circ.n)
    throw std::invalid_argument("apply_circuit: circuit/state dimension mismatch");
  for (const Gate& g : circ.gates) apply_gate(sv, g);
}

inline void apply_circuit_inverse(Statevector& sv, const Circuit& circ) {
  if (sv.num_qubits() != circ.n)
    throw std::invalid_argument("apply_circuit_inverse: circuit/state dimension mismatch");
  for (auto it = circ.gates.rbegin(); it != circ.gates.rend(); ++it)
    apply_gate(sv, *it, /*inverse=*/true);
}

// ---------------------------------------------------------------------------
// Entangled-block preparation: n/(2R+1) disjoint blocks, each block prepared
// into a (2R+1)-qubit GHZ-type state by one central qubit c coupled to its
// R neighbors on each side: first exp(-i*pi/4 * Z_c Z_{c+-j}) for j = 1..R,
// then exp(-i*pi/4 * X_q) on every non-central qubit of the block. Scalar
// prefactors are dropped (they only contribute a global phase).

inline void check_block_shape(int n, int radius) {
  if (radius < 1) throw std::invalid_argument("block radius must be >= 1");
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("block states need even n, got " + std::to_string(n));
  const int block = 2 * radius + 1;
  if (n % block != 0)
    throw std::invalid_argument("block size " + std::to_string(block) +
                                " must divide n=" + std::to_string(n));
}

inline Circuit ghz_block_circuit(int n, int radius) {
  check_block_shape(n, radius);
  const int block = 2 * radius + 1;
  Circuit circ;
  circ.n = n;
  for (int start = 0; start < n; start += block) {
    const int c = start + radius;
    for (int j = 1; j <= radius; ++j) {
      circ.gates.push_back({GateKind::RotZZ, c, c - j, -std::numbers::pi / 4.0});
      circ.gates.push_back({GateKind::RotZZ, c, c + j, -std::numbers::pi / 4.0});
    }
    for (int q = start; q < start + block; ++q)
      if (q != c) circ.gates.push_back({GateKind::RotX, q, 0, -std::numbers::pi / 4.0});
  }
  return circ;
}

// Block circuit applied to |+>^n, then X on every even-indexed qubit (the
// staggered flip that turns within-block agreement into ring disagreement).
inline Statevector ghz_block_state(int n, int radius) {
  check_block_shape(n, radius);
  Statevector sv = Statevector::plus_state(n);
  apply_circuit(sv, ghz_block_circuit(n, radius));
  for (int q = 0; q < n; q += 2) sv.apply_x(q);
  return sv;
}

// Energy-per-vertex ceiling (2R + 1/2) / (2R + 1) that radius-R block states
// can reach on the even ring's MaxCut objective.
inline double block_state_bound(int radius) {
  if (radius < 1) throw std::invalid_argument("block_state_bound: radius must be >= 1");
  return (2.0 * radius + 0.5) / (2.0 * radius + 1.0);
}

// ---------------------------------------------------------------------------
// Range check: a circuit has range R (on the n-cycle) if U^dag Z_j U is
// supported within cyclic distance R of j for every j. Verified by testing
// that A = U^dag Z_j U commutes with Z_k and X_k for all k with
// dist(j, k) > R, on `trials` random states. Capped at n <= 12.

inline int cyclic_distance(int a, int b, int n) {
  int d = std::abs(a - b) % n;
  return std::min(d, n - d);
}

inline bool check_range(const Circuit& circ, int radius, std::uint64_t seed = 0x5eed,
                        int trials = 3, double tol = 1e-9) {
  if (circ.n > 12)
    throw std::invalid_argument("check_range: capped at n=12, got n=" + std::to_string(circ.n));
  if (radius < 0) throw std::invalid_argument("check_range: radius must be >= 0");
  SplitMix64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    Statevector psi = random_state(circ.n, rng);
    for (int j = 0; j < circ.n; ++j) {
      // a = U^dag Z_j U |psi>
      Statevector a = psi;
      apply_circuit(a, circ);
      a.apply_z(j);
      apply_circuit_inverse(a, circ);
      for (int k = 0; k < circ.n; ++k) {
        if (cyclic_distance(j, k, circ.n) <= radius) continue;
        for (GateKind pauli : {GateKind::Z, GateKind::X}) {
          // P * (A |psi>)
          Statevector pa = a;
          apply_gate(pa, {pauli, k});
          // A * (P |psi>)
          Statevector ap = psi;
          apply_gate(ap, {pauli, k});
          apply_circuit(ap, circ);
          ap.apply_z(j);
          apply_circuit_inverse(ap, circ);
          double diff = 0.0;
          for (std::size_t i = 0; i < pa.dim(); ++i) diff += std::norm(pa[i] - ap[i]);
          if (std::sqrt(diff) > tol) return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Level-1 angle sweep with the phase layer hoisted out of the beta loop.

struct SweepResult {
  double max_energy = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// Sweeps a grid x grid lattice of (beta, gamma) in [0, pi) x [0, period)
// for the level-1 state and returns the maximum energy. Ties are broken
// toward the smallest (beta index, gamma index) pair.
inline SweepResult sweep_level1_energy(const IsingInstance& inst, int grid) {
  if (grid < 2) throw std::invalid_argument("sweep_level1_energy: grid must be >= 2");
  const std::vector<double> diag = diagonal_energies(inst);
  const double gamma_period = gamma_search_period(inst);
  const double base_amp = std::pow(2.0, -0.5 * inst.n);
  const std::size_t dim = diag.size();

  std::vector<double> energy(static_cast<std::size_t>(grid) * grid, 0.0);
  Statevector phase_state(inst.n);
  for (int ig = 0; ig < grid; ++ig) {
    const double gamma = gamma_period * ig / grid;
    for (std::size_t x = 0; x < dim; ++x)
      phase_state[x] = std::polar(base_amp, gamma * diag[x]);
    for (int ib = 0; ib < grid; ++ib) {
      const double beta = std::numbers::pi * ib / grid;
      Statevector sv = phase_state;
      for (int q = 0; q < inst.n; ++q) sv.apply_exp_ix(q, beta);
      double e = 0.0;
      for (std::size_t x = 0; x < dim; ++x) e += std::norm(sv[x]) * diag[x];
      energy[static_cast<std::size_t>(ib) * grid + ig] = e;
    }
  }
  SweepResult best;
  best.max_energy = -std::numeric_limits<double>::infinity();
  for (int ib = 0; ib < grid; ++ib) {
    for (int ig = 0; ig < grid; ++ig) {
      double e = energy[static_cast<std::size_t>(ib) * grid + ig];
      if (e > best.max_energy) {
        best.max_energy = e;
        best.beta = std::numbers::pi * ib / grid;
        best.gamma = gamma_period * ig / grid;
      }
    }
  }
  return best;
}

// Correlations of every instance edge in a given state.
inline CorrelationTable correlation_table_sv(const Statevector& state, const IsingInstance& inst,
                                             const QaoaParams& params) {
  CorrelationTable table;
  table.params = params;
  table.values.reserve(inst.edges.size());
  for (const auto& [verts, weight] : inst.edges)
    table.values.push_back({verts, expectation_zz(state, verts)});
  return table;
}

// Maximize the level-p energy by full statevector simulation: a grid^(2p)
// scan (beta axes over [0, pi), gamma axes over the instance's gamma period)
// followed by compass refinement. This is the route for p >= 2, hyperedges
// and single-vertex terms; cost grows as grid^(2p) * 2^n, so keep the grid
// small for p >= 2. Scan ties keep the first point in odometer order
// (beta_1 fastest).
inline VariationalOptimum optimize_levelp_sv(const IsingInstance& inst, int p, int grid = 16,
                                             int refine_iters = 200) {
  if (p < 1) throw std::invalid_argument("optimize_levelp_sv: p must be >= 1");
  if (grid < 2) throw std::invalid_argument("optimize_levelp_sv: grid must be >= 2");
  const double gamma_period = gamma_search_period(inst);
  const std::vector<double> diag = diagonal_energies(inst);

  auto energy_at = [&](const std::vector<double>& angles) {
    QaoaParams params;
    params.p = p;
    params.beta.assign(angles.begin(), angles.begin() + p);
    params.gamma.assign(angles.begin() + p, angles.end());
    Statevector sv = qaoa_state(inst, params);
    double e = 0.0;
    for (std::size_t x = 0; x < sv.dim(); ++x) e += std::norm(sv[x]) * diag[x];
    return e;
  };

  std::vector<double> best_angles(2 * p, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  if (p == 1) {
    SweepResult sweep = sweep_level1_energy(inst, grid);
    best = sweep.max_energy;
    best_angles = {sweep.beta, sweep.gamma};
  } else {
    std::vector<int> odo(2 * p, 0);   // [beta_1..beta_p, gamma_1..gamma_p]
    for (;;) {
      std::vector<double> angles(2 * p);
      for (int m = 0; m < p; ++m) {
        angles[m] = std::numbers::pi * odo[m] / grid;
        angles[p + m] = gamma_period * odo[p + m] / grid;
      }
      double e = energy_at(angles);
      if (e > best) {
        best = e;
        best_angles = angles;
      }
      int pos = 0;
      while (pos < 2 * p && ++odo[pos] == grid) odo[pos++] = 0;
      if (pos == 2 * p) break;
    }
  }

  double refined = detail::pattern_search(best_angles, std::numbers::pi / grid, refine_iters,
                                          energy_at);

  VariationalOptimum out;
  out.params.p = p;
  out.params.beta.assign(best_angles.begin(), best_angles.begin() + p);
  out.params.gamma.assign(best_angles.begin() + p, best_angles.end());
  out.energy = refined;
  out.correlations =
      correlation_table_sv(qaoa_state(inst, out.params), inst, out.params);
  return out;
}

// Max approximation ratio a level-p sweep finds for the even-ring MaxCut
// objective (optimum n). p = 0 is the unrotated |+>^n; p = 1 uses the fast
// sweep; higher p enumerates the full grid^{2p} lattice and is only
// practical for small grids.
inline double ring_bound_sweep(int n, int p, int grid = 64) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("ring_bound_sweep: need even n >= 4, got " + std::to_string(n));
  if (p < 0) throw std::invalid_argument("ring_bound_sweep: p must be >= 0");
  const IsingInstance mc = max_cut_form(ring_instance(n));
  if (p == 0) return expectation_energy(Statevector::plus_state(n), mc) / n;
  if (p == 1) return sweep_level1_energy(mc, grid).max_energy / n;

  const std::vector<double> diag = diagonal_energies(mc);
  const double gamma_period = gamma_search_period(mc);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> odo(2 * p, 0);   // [beta_1..beta_p, gamma_1..gamma_p]
  for (;;) {
    QaoaParams params;
    params.p = p;
    for (int m = 0; m < p; ++m) {
      params.beta.push_back(std::numbers::pi * odo[m] / grid);
      params.gamma.push_back(gamma_period * odo[p + m] / grid);
    }
    best = std::max(best, expectation_energy(qaoa_state(mc, params), mc));
    int pos = 0;
    while (pos < 2 * p && ++odo[pos] == grid) odo[pos++] = 0;
    if (pos == 2 * p) break;
  }
  return best / n;
}

}  // namespace rqaoa
