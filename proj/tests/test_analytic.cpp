/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

#include "rqaoa/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "rqaoa/graphs.hpp"
#include "rqaoa/statevector.hpp"
#include "test_util.hpp"

using rqaoa::IsingInstance;
using rqaoa::QaoaParams;

namespace {

double weight_of(const IsingInstance& inst, int a, int b) {
  std::vector<int> key{std::min(a, b), std::max(a, b)};
  for (const auto& [verts, weight] : inst.edges)
    if (verts == key) return weight;
  return 0.0;
}

}  // namespace

TEST(Analytic, ClosedFormMatchesStatevectorOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    rqaoa::SplitMix64 rng(seed);
    const int n = 4 + static_cast<int>(rng.next_below(6));
    IsingInstance inst =
        testutil::random_pair_instance(n, rng, testutil::WeightMode::Uniform);
    const double beta = rng.next_double() * std::numbers::pi;
    const double gamma = rng.next_double() * 2.0 * std::numbers::pi;
    rqaoa::Statevector state = rqaoa::qaoa_state(inst, QaoaParams{1, {beta}, {gamma}});
    // Every pair, edges and non-edges alike.
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        EXPECT_NEAR(rqaoa::level1_zz(inst, u, v, beta, gamma),
                    rqaoa::expectation_zz(state, {u, v}), 1e-10)
            << "pair (" << u << "," << v << ") seed " << seed;
    EXPECT_NEAR(rqaoa::level1_energy(inst, beta, gamma),
                rqaoa::expectation_energy(state, inst), 1e-9);
  }
}

TEST(Analytic, EnergyIsWeightedSumOfCorrelations) {
  rqaoa::SplitMix64 rng(99);
  IsingInstance inst =
      testutil::random_pair_instance(7, rng, testutil::WeightMode::Uniform);
  const double beta = 0.37, gamma = 1.21;
  double acc = inst.constant;
  for (const auto& [verts, weight] : inst.edges)
    acc += weight * rqaoa::level1_zz(inst, verts[0], verts[1], beta, gamma);
  EXPECT_NEAR(rqaoa::level1_energy(inst, beta, gamma), acc, 1e-12);
}

TEST(Analytic, CorrelationTableListsEveryEdge) {
  rqaoa::SplitMix64 rng(5);
  IsingInstance inst =
      testutil::random_pair_instance(6, rng, testutil::WeightMode::PlusMinusOne);
  rqaoa::CorrelationTable table = rqaoa::correlation_table(inst, 0.4, 0.9);
  ASSERT_EQ(table.values.size(), inst.edges.size());
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    EXPECT_EQ(table.values[i].first, inst.edges[i].first);
    EXPECT_NEAR(table.values[i].second,
                rqaoa::level1_zz(inst, inst.edges[i].first[0], inst.edges[i].first[1], 0.4, 0.9),
                1e-14);
  }
  EXPECT_EQ(table.params.p, 1);
  ASSERT_EQ(table.params.beta.size(), 1u);
  EXPECT_DOUBLE_EQ(table.params.beta[0], 0.4);
}

TEST(Analytic, RingNeighborCorrelationHasClosedForm) {
  // On a +/-1 ring the edge correlation is (J_e/2) sin(4 beta) sin(4 gamma)
  // and the distance-2 correlation is (J_a J_b/4) sin^2(2 beta) sin^2(4 gamma).
  for (int n : {5, 8, 11}) {
    IsingInstance ring = rqaoa::ring_instance(n, rqaoa::CouplingKind::UniformPm1, 42);
    for (double beta : {0.2, 0.7}) {
      for (double gamma : {0.3, 1.1}) {
        for (int i = 0; i < n; ++i) {
          const int j = (i + 1) % n;
          const int k = (i + 2) % n;
          const double ji = weight_of(ring, i, j);
          const double jj = weight_of(ring, j, k);
          EXPECT_NEAR(rqaoa::level1_zz(ring, i, j, beta, gamma),
                      0.5 * ji * std::sin(4 * beta) * std::sin(4 * gamma), 1e-12);
          EXPECT_NEAR(rqaoa::level1_zz(ring, i, k, beta, gamma),
                      0.25 * ji * jj * std::pow(std::sin(2 * beta), 2) *
                          std::pow(std::sin(4 * gamma), 2),
                      1e-12);
        }
      }
    }
  }
}

TEST(Analytic, CorrelationsVanishBeyondDistanceTwo) {
  IsingInstance ring = rqaoa::ring_instance(12, rqaoa::CouplingKind::UniformPm1, 3);
  for (int d = 3; d <= 6; ++d)
    EXPECT_NEAR(rqaoa::level1_zz(ring, 0, d, 0.61, 0.83), 0.0, 1e-14);
}

TEST(Analytic, OptimizeIsDeterministic) {
  rqaoa::SplitMix64 rng(17);
  IsingInstance inst =
      testutil::random_pair_instance(8, rng, testutil::WeightMode::Uniform);
  rqaoa::VariationalOptimum a = rqaoa::optimize_level1(inst);
  rqaoa::VariationalOptimum b = rqaoa::optimize_level1(inst);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.energy, b.energy);
}

TEST(Analytic, OptimizeRefinementOnlyImproves) {
  rqaoa::SplitMix64 rng(23);
  IsingInstance inst =
      testutil::random_pair_instance(8, rng, testutil::WeightMode::Uniform);
  rqaoa::VariationalOptimum coarse = rqaoa::optimize_level1(inst, 32, 0);
  rqaoa::VariationalOptimum refined = rqaoa::optimize_level1(inst, 32, 200);
  EXPECT_GE(refined.energy, coarse.energy);
}

TEST(Analytic, UniformRingOptimumIsHalfTheEdges) {
  for (int n : {6, 9, 12}) {
    IsingInstance ring = rqaoa::ring_instance(n);
    rqaoa::VariationalOptimum opt = rqaoa::optimize_level1(ring);
    EXPECT_NEAR(opt.energy, n / 2.0, 1e-9);
    ASSERT_EQ(opt.correlations.values.size(), static_cast<std::size_t>(n));
    for (const auto& [verts, m] : opt.correlations.values) EXPECT_NEAR(m, 0.5, 1e-9);
    // Maximizers form the family sin(4 beta) sin(4 gamma) = 1 (pi/8 is one).
    EXPECT_NEAR(std::sin(4 * opt.params.beta[0]) * std::sin(4 * opt.params.gamma[0]), 1.0,
                1e-9);
  }
}

TEST(Analytic, SignedRingOptimumMatchesUniformValue) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    IsingInstance ring = rqaoa::ring_instance(10, rqaoa::CouplingKind::UniformPm1, seed);
    rqaoa::VariationalOptimum opt = rqaoa::optimize_level1(ring);
    EXPECT_NEAR(opt.energy, 5.0, 1e-9);
    for (const auto& [verts, m] : opt.correlations.values)
      EXPECT_NEAR(m, 0.5 * weight_of(ring, verts[0], verts[1]), 1e-9);
  }
}

TEST(Analytic, EnergyLandscapeIsGaugeInvariant) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    rqaoa::SplitMix64 rng(seed);
    const int n = 5 + static_cast<int>(rng.next_below(4));
    IsingInstance inst =
        testutil::random_pair_instance(n, rng, testutil::WeightMode::Uniform);
    IsingInstance gauged = rqaoa::apply_gauge(inst, testutil::random_mask(n, rng));
    for (int rep = 0; rep < 5; ++rep) {
      const double beta = rng.next_double() * std::numbers::pi;
      const double gamma = rng.next_double() * 2 * std::numbers::pi;
      EXPECT_NEAR(rqaoa::level1_energy(inst, beta, gamma),
                  rqaoa::level1_energy(gauged, beta, gamma), 1e-10);
    }
    EXPECT_NEAR(rqaoa::optimize_level1(inst).energy, rqaoa::optimize_level1(gauged).energy,
                1e-9);
  }
}

TEST(Analytic, RejectsHyperedges) {
  IsingInstance hyper = rqaoa::make_instance(4, {{{0, 1, 2}, 1.0}, {{2, 3}, 1.0}});
  EXPECT_THROW(rqaoa::level1_energy(hyper, 0.1, 0.2), std::invalid_argument);
  EXPECT_THROW(rqaoa::optimize_level1(hyper), std::invalid_argument);
}

TEST(Analytic, EdgelessInstanceEnergyIsConstant) {
  IsingInstance empty = rqaoa::make_instance(3, {}, 2.5);
  EXPECT_DOUBLE_EQ(rqaoa::level1_energy(empty, 0.4, 1.0), 2.5);
  EXPECT_DOUBLE_EQ(rqaoa::optimize_level1(empty).energy, 2.5);
}
