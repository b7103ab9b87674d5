/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

#include "rqaoa/elimination.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rqaoa/exact.hpp"
#include "rqaoa/graphs.hpp"
#include "test_util.hpp"

using rqaoa::IsingInstance;

namespace {

// +/-1 ring with an explicit sign pattern, one bit per edge {k, k+1 mod n}.
IsingInstance signed_ring(int n, std::uint64_t bits) {
  std::vector<rqaoa::Edge> terms;
  for (int k = 0; k < n; ++k) {
    const int u = k, v = (k + 1) % n;
    terms.push_back({{std::min(u, v), std::max(u, v)}, (bits >> k & 1) ? -1.0 : 1.0});
  }
  return rqaoa::make_instance(n, terms);
}

bool is_pm1_ring(const IsingInstance& inst) {
  if (inst.edges.size() != static_cast<std::size_t>(inst.n)) return false;
  std::vector<int> degree(inst.n, 0);
  for (const auto& [verts, weight] : inst.edges) {
    if (verts.size() != 2 || std::abs(weight) != 1.0) return false;
    ++degree[verts[0]];
    ++degree[verts[1]];
  }
  for (int d : degree)
    if (d != 2) return false;
  return true;
}

}  // namespace

TEST(Elimination, ChooseRoundingPicksLargestMagnitudeFirstCanonical) {
  rqaoa::CorrelationTable table;
  table.values = {{{0, 1}, 0.3}, {{0, 2}, -0.5}, {{1, 2}, 0.5}};
  rqaoa::RoundingChoice choice = rqaoa::choose_rounding(table);
  EXPECT_EQ(choice.f, (std::vector<int>{0, 2}));   // tie at 0.5, first canonical wins
  EXPECT_EQ(choice.v, 0);
  EXPECT_EQ(choice.sigma, -1);
  EXPECT_DOUBLE_EQ(choice.m_value, -0.5);
}

TEST(Elimination, ChooseRoundingZeroCorrelationDefaultsToPlus) {
  rqaoa::CorrelationTable table;
  table.values = {{{1, 3}, 0.0}};
  rqaoa::RoundingChoice choice = rqaoa::choose_rounding(table);
  EXPECT_EQ(choice.sigma, 1);
  EXPECT_DOUBLE_EQ(choice.m_value, 0.0);
  rqaoa::CorrelationTable empty;
  EXPECT_THROW(rqaoa::choose_rounding(empty), std::invalid_argument);
}

TEST(Elimination, SquareCollapsesToTriangleWithUnitConstant) {
  IsingInstance square = rqaoa::ring_instance(4);
  rqaoa::EliminatedInstance out = rqaoa::eliminate_variable(square, {0, 1}, 0, 1);
  IsingInstance triangle = rqaoa::make_instance(
      3, {{{0, 1}, 1.0}, {{1, 2}, 1.0}, {{0, 2}, 1.0}}, 1.0);
  EXPECT_EQ(out.instance, triangle);
  EXPECT_EQ(out.removed_vertex, 0);
}

TEST(Elimination, TriangleMergesParallelEdges) {
  IsingInstance triangle =
      rqaoa::make_instance(3, {{{0, 1}, 1.0}, {{1, 2}, 1.0}, {{0, 2}, 1.0}});
  rqaoa::EliminatedInstance out = rqaoa::eliminate_variable(triangle, {0, 1}, 0, 1);
  // {0,1} folds into the constant; {0,2} maps onto {1,2} and doubles it.
  EXPECT_EQ(out.instance, rqaoa::make_instance(2, {{{0, 1}, 2.0}}, 1.0));
}

TEST(Elimination, LastEdgeFoldsIntoConstant) {
  IsingInstance pair = rqaoa::make_instance(2, {{{0, 1}, 1.0}});
  EXPECT_EQ(rqaoa::eliminate_variable(pair, {0, 1}, 0, 1).instance,
            rqaoa::make_instance(1, {}, 1.0));
  EXPECT_EQ(rqaoa::eliminate_variable(pair, {0, 1}, 0, -1).instance,
            rqaoa::make_instance(1, {}, -1.0));
}

TEST(Elimination, RelabelingIsContiguous) {
  IsingInstance inst = rqaoa::make_instance(
      5, {{{1, 2}, 1.0}, {{2, 3}, -2.0}, {{0, 4}, 0.5}, {{0, 2}, 1.5}});
  rqaoa::EliminatedInstance out = rqaoa::eliminate_variable(inst, {1, 2}, 2, -1);
  // Vertices 0,1 keep their labels; 3,4 shift down to 2,3.
  ASSERT_EQ(out.old_to_new.size(), 5u);
  EXPECT_EQ(out.old_to_new[0], 0);
  EXPECT_EQ(out.old_to_new[1], 1);
  EXPECT_EQ(out.old_to_new[2], -1);
  EXPECT_EQ(out.old_to_new[3], 2);
  EXPECT_EQ(out.old_to_new[4], 3);
  // {1,2} folds into the constant as sigma * 1; {2,3} becomes -1 * x({1,3})
  // -> edge {1,2} weight +2 after relabel; {0,2} becomes edge {0,1} weight -1.5.
  EXPECT_EQ(out.instance,
            rqaoa::make_instance(4, {{{0, 3}, 0.5}, {{0, 1}, -1.5}, {{1, 2}, 2.0}}, -1.0));
}

TEST(Elimination, EliminationValidation) {
  IsingInstance square = rqaoa::ring_instance(4);
  EXPECT_THROW(rqaoa::eliminate_variable(square, {0, 1}, 0, 2), std::invalid_argument);
  EXPECT_THROW(rqaoa::eliminate_variable(square, {0, 2}, 0, 1), std::invalid_argument);
  EXPECT_THROW(rqaoa::eliminate_variable(square, {0, 1}, 2, 1), std::invalid_argument);
  IsingInstance single = rqaoa::make_instance(1, {});
  EXPECT_THROW(rqaoa::eliminate_variable(single, {0}, 0, 1), std::invalid_argument);
}

TEST(Elimination, PreservesConstrainedOptimumExactly) {
  // Quarter-integer weights make both sides exact, so the invariant
  // max_{x : x_f = sigma} E(x) = max_y E'(y) holds bit for bit.
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    rqaoa::SplitMix64 rng(seed);
    const int n = 4 + static_cast<int>(rng.next_below(5));
    IsingInstance inst =
        testutil::random_pair_instance(n, rng, testutil::WeightMode::DyadicQuarters);
    if (inst.edges.empty()) continue;
    const std::size_t pick = rng.next_below(inst.edges.size());
    const std::vector<int> f = inst.edges[pick].first;
    const int v = f.front();
    for (int sigma : {1, -1}) {
      IsingInstance reduced = rqaoa::eliminate_variable(inst, f, v, sigma).instance;
      EXPECT_DOUBLE_EQ(testutil::naive_constrained_max(inst, f, sigma).value,
                       testutil::naive_max(reduced).value)
          << "seed " << seed << " sigma " << sigma;
    }
  }
}

TEST(Elimination, PreservesConstrainedOptimumOnHypergraphs) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    rqaoa::SplitMix64 rng(seed);
    const int n = 4 + static_cast<int>(rng.next_below(4));
    IsingInstance inst = testutil::random_hyper_instance(n, 2 * n, rng);
    if (inst.edges.empty()) continue;
    const std::size_t pick = rng.next_below(inst.edges.size());
    const std::vector<int> f = inst.edges[pick].first;
    const int v = f.front();
    for (int sigma : {1, -1}) {
      IsingInstance reduced = rqaoa::eliminate_variable(inst, f, v, sigma).instance;
      EXPECT_NEAR(testutil::naive_constrained_max(inst, f, sigma).value,
                  testutil::naive_max(reduced).value, 1e-12)
          << "seed " << seed << " sigma " << sigma;
    }
  }
}

TEST(Elimination, RingEliminationKeepsRingShapeAndParity) {
  for (std::uint64_t bits : {0ull, 0b000011ull, 0b010101ull, 0b100000ull}) {
    IsingInstance cur = signed_ring(8, bits);
    const int parity = rqaoa::coupling_parity(cur);
    while (cur.n > 3) {
      // On a +/-1 ring every edge ties at |M|, so the rounding picks the
      // first canonical edge; sigma at the optimum is the edge sign.
      const std::vector<int> f = cur.edges[0].first;
      const int sigma = cur.edges[0].second > 0 ? 1 : -1;
      cur = rqaoa::eliminate_variable(cur, f, f.front(), sigma).instance;
      ASSERT_TRUE(is_pm1_ring(cur)) << "bits " << bits << " n " << cur.n;
      EXPECT_EQ(rqaoa::coupling_parity(cur), parity);
    }
  }
}

TEST(Elimination, ReconstructReplaysRecordsInReverse) {
  rqaoa::ReconstructionMap map;
  map.original_n = 4;
  // Eliminated 0 via {0,1} with sigma -1, then (after 1,2,3 -> 0,1,2)
  // eliminated original 3 via {1,3} with sigma +1.
  rqaoa::EliminationRecord r0;
  r0.round = 0, r0.f = {0, 1}, r0.v = 0, r0.sigma = -1;
  rqaoa::EliminationRecord r1;
  r1.round = 1, r1.f = {1, 3}, r1.v = 3, r1.sigma = 1;
  map.records = {r0, r1};
  map.core_to_original = {1, 2};
  rqaoa::SpinAssignment full = rqaoa::reconstruct(map, {-1, 1});
  EXPECT_EQ(full, (rqaoa::SpinAssignment{1, -1, 1, -1}));
  EXPECT_THROW(rqaoa::reconstruct(map, {1}), std::invalid_argument);
  EXPECT_THROW(rqaoa::reconstruct(map, {1, 0}), std::invalid_argument);
}

TEST(Elimination, ReconstructDetectsInconsistentRecords) {
  rqaoa::ReconstructionMap map;
  map.original_n = 3;
  rqaoa::EliminationRecord r0;
  r0.round = 0, r0.f = {0, 1}, r0.v = 0, r0.sigma = 1;   // needs vertex 1
  map.records = {r0};
  map.core_to_original = {2};   // vertex 1 never placed
  EXPECT_THROW(rqaoa::reconstruct(map, {1}), std::logic_error);
}

TEST(Elimination, RecursionSolvesUniformAndSignedRings) {
  // Coupling parity +1 rings have optimum n, parity -1 rings n-2, and the
  // recursion lands exactly there.
  for (auto [bits, n] : {std::pair<std::uint64_t, int>{0, 10},
                         {0b0000000011, 10},
                         {0b0000000001, 10},
                         {0b0001010110, 10}}) {
    IsingInstance ring = signed_ring(n, bits);
    const double expect = rqaoa::coupling_parity(ring) == 1 ? n : n - 2;
    rqaoa::RqaoaResult res = rqaoa::rqaoa(ring, 4);
    EXPECT_DOUBLE_EQ(res.energy, expect) << "bits " << bits;
    EXPECT_DOUBLE_EQ(rqaoa::evaluate(ring, res.assignment), res.energy);
    EXPECT_EQ(res.degenerate_roundings, 0);
    EXPECT_EQ(res.map.records.size(), static_cast<std::size_t>(n - 4));
  }
}

TEST(Elimination, RecursionHonorsRecordedConstraints) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    rqaoa::SplitMix64 rng(seed);
    IsingInstance inst =
        testutil::random_pair_instance(9, rng, testutil::WeightMode::Uniform);
    rqaoa::RqaoaResult res = rqaoa::rqaoa(inst, 3);
    EXPECT_NEAR(rqaoa::evaluate(inst, res.assignment), res.energy, 1e-12);
    int round = 0;
    for (const auto& rec : res.map.records) {
      EXPECT_EQ(rec.round, round++);
      EXPECT_EQ(rqaoa::spin_product(res.assignment, rec.f), rec.sigma);
      ASSERT_EQ(rec.beta.size(), 1u);
      ASSERT_EQ(rec.gamma.size(), 1u);
    }
  }
}

TEST(Elimination, RecursionAtLevelTwoUsesWiderParams) {
  rqaoa::SplitMix64 rng(2);
  IsingInstance inst =
      testutil::random_pair_instance(6, rng, testutil::WeightMode::PlusMinusOne);
  rqaoa::RqaoaConfig cfg;
  cfg.level = 2;
  cfg.sv_grid = 6;
  rqaoa::RqaoaResult res = rqaoa::rqaoa(inst, 4, cfg);
  ASSERT_FALSE(res.map.records.empty());
  for (const auto& rec : res.map.records) {
    EXPECT_EQ(rec.beta.size(), 2u);
    EXPECT_EQ(rec.gamma.size(), 2u);
  }
  EXPECT_NEAR(rqaoa::evaluate(inst, res.assignment), res.energy, 1e-12);
}

TEST(Elimination, RecursionHandlesHyperedges) {
  IsingInstance inst = rqaoa::make_instance(
      6, {{{0, 1, 2}, 1.0}, {{2, 3, 4}, -1.0}, {{4, 5}, 1.0}, {{1, 3}, 0.5}});
  rqaoa::RqaoaConfig cfg;
  cfg.sv_grid = 8;
  rqaoa::RqaoaResult res = rqaoa::rqaoa(inst, 3, cfg);
  EXPECT_NEAR(rqaoa::evaluate(inst, res.assignment), res.energy, 1e-12);
  EXPECT_LE(res.energy, rqaoa::brute_force_max(inst).max_energy + 1e-12);
}

TEST(Elimination, RecursionStopsWhenEdgesRunOut) {
  IsingInstance two_edges = rqaoa::make_instance(4, {{{0, 1}, 1.0}, {{2, 3}, 1.0}});
  rqaoa::RqaoaResult res = rqaoa::rqaoa(two_edges, 1);
  // Both edges fold into the constant after two rounds; the recursion must
  // stop instead of grinding on an edgeless instance.
  EXPECT_EQ(res.map.records.size(), 2u);
  EXPECT_DOUBLE_EQ(res.energy, 2.0);
}

TEST(Elimination, RecursionValidatesConfig) {
  IsingInstance ring = rqaoa::ring_instance(6);
  EXPECT_THROW(rqaoa::rqaoa(ring, 0), std::invalid_argument);
  rqaoa::RqaoaConfig tiny;
  tiny.core_cap = 3;
  EXPECT_THROW(rqaoa::rqaoa(ring, 4, tiny), std::invalid_argument);
  rqaoa::RqaoaConfig bad_level;
  bad_level.level = 0;
  EXPECT_THROW(rqaoa::rqaoa(ring, 4, bad_level), std::invalid_argument);
}

TEST(Elimination, TraceLinesCarryExactlyTheContractKeys) {
  rqaoa::RqaoaResult res = rqaoa::rqaoa(rqaoa::ring_instance(8), 4);
  std::string text = rqaoa::trace_to_jsonl(res.map.records);
  std::istringstream lines(text);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    nlohmann::json j = nlohmann::json::parse(line);
    std::set<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.insert(it.key());
    EXPECT_EQ(keys, (std::set<std::string>{"round", "f", "v", "sigma", "m_value", "beta",
                                           "gamma", "energy_estimate"}));
    EXPECT_EQ(j["round"], count);
    EXPECT_TRUE(j["beta"].is_number());   // scalar at level 1
    EXPECT_TRUE(j["f"].is_array());
    ++count;
  }
  EXPECT_EQ(count, 4);
}
