#include <gtest/gtest.h>

#include <numeric>

#include "hiergen/generator.hpp"
#include "hiergen/metrics.hpp"
#include "support.hpp"

using namespace hiergen;
using hiergen::testing::make_tree;
using hiergen::testing::small_params;

TEST(ComputeStats, SingleRoot) {
  const auto s = compute_stats(make_tree({NodePath{}}));
  EXPECT_EQ(s.node_count, 1u);
  EXPECT_EQ(s.leaf_count, 1u);
  EXPECT_EQ(s.depth, 0u);
  EXPECT_EQ(s.breadth, (MeanStd{1.0, 0.0}));
  EXPECT_EQ(s.path_length, (MeanStd{0.0, 0.0}));
}

TEST(ComputeStats, Chain) {
  const auto s = compute_stats(make_tree({NodePath{}, NodePath{0}, NodePath{0, 0}}));
  EXPECT_EQ(s.node_count, 3u);
  EXPECT_EQ(s.leaf_count, 1u);
  EXPECT_EQ(s.depth, 2u);
  EXPECT_EQ(s.breadth, (MeanStd{1.0, 0.0}));
  EXPECT_EQ(s.path_length, (MeanStd{2.0, 0.0}));
}

TEST(ComputeStats, Star) {
  const auto s = compute_stats(make_tree({NodePath{}, NodePath{0}, NodePath{1}, NodePath{2}}));
  EXPECT_EQ(s.node_count, 4u);
  EXPECT_EQ(s.leaf_count, 3u);
  EXPECT_EQ(s.depth, 1u);
  EXPECT_DOUBLE_EQ(s.breadth.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.breadth.std, 1.0);
  EXPECT_EQ(s.path_length, (MeanStd{1.0, 0.0}));
}

TEST(ComputeStats, MeanPointDepth) {
  Hierarchy h = make_tree({NodePath{}, NodePath{0}, NodePath{0, 0}});
  h.at(NodePath{}).point_ids = {0};
  h.at(NodePath{0, 0}).point_ids = {1, 2, 3};
  EXPECT_DOUBLE_EQ(compute_stats(h).mean_point_depth, 6.0 / 4.0);
}

TEST(ComputeHistograms, AllPointsAtRoot) {
  Hierarchy h = make_tree({NodePath{}});
  h.at(NodePath{}).point_ids = {0, 1, 2, 3, 4};
  const auto hist = compute_histograms(h);
  EXPECT_EQ(hist.instances, std::vector<double>{5.0});
  EXPECT_EQ(hist.width, std::vector<double>{1.0});
}

TEST(ComputeHistograms, StarBranching) {
  const auto hist = compute_histograms(make_tree({NodePath{}, NodePath{0}, NodePath{1}, NodePath{2}}));
  EXPECT_EQ(hist.branching, (std::map<std::size_t, double>{{0, 3.0}, {3, 1.0}}));
  EXPECT_EQ(hist.width, (std::vector<double>{1.0, 3.0}));
  EXPECT_EQ(hist.leaves, (std::vector<double>{0.0, 3.0}));
  EXPECT_EQ(hist.children_per_node, (std::vector<double>{3.0, 0.0}));
}

TEST(ComputeHistograms, ConservationOnGeneratedTrees) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset data = generate(small_params(seed, 400));
    const auto s = compute_stats(data.hierarchy);
    const auto h = compute_histograms(data.hierarchy);
    EXPECT_DOUBLE_EQ(std::accumulate(h.instances.begin(), h.instances.end(), 0.0), 400.0);
    EXPECT_EQ(h.instances, instances_per_level(data.points));
    EXPECT_DOUBLE_EQ(std::accumulate(h.width.begin(), h.width.end(), 0.0), static_cast<double>(s.node_count));
    double branching_total = 0;
    for (const auto& [k, v] : h.branching) branching_total += v;
    EXPECT_DOUBLE_EQ(branching_total, static_cast<double>(s.node_count));
    EXPECT_EQ(h.width.size() - 1, s.depth);
    EXPECT_GT(h.width.back(), 0.0);
    EXPECT_DOUBLE_EQ(h.branching.count(0) ? h.branching.at(0) : 0.0, static_cast<double>(s.leaf_count));
    EXPECT_LE(s.leaf_count, s.node_count);
    EXPECT_LE(s.path_length.mean, static_cast<double>(s.depth));
  }
}

TEST(Aggregate, EmptyBatchThrows) {
  EXPECT_THROW(aggregate(std::vector<HierarchyStats>{}), std::invalid_argument);
}

TEST(Aggregate, SingleHierarchyHasNoSpread) {
  const auto s = compute_stats(make_tree({NodePath{}, NodePath{0}, NodePath{1}, NodePath{2}}));
  const auto b = aggregate(std::vector{s});
  EXPECT_EQ(b.node_count, (MeanStd{4.0, 0.0}));
  EXPECT_EQ(b.leaf_count, (MeanStd{3.0, 0.0}));
  EXPECT_EQ(b.depth, (MeanStd{1.0, 0.0}));
  EXPECT_EQ(b.breadth, s.breadth);  // mean of means, mean of stds
  EXPECT_EQ(b.path_length, s.path_length);
}

TEST(Aggregate, IdenticalHierarchiesHaveZeroCrossRunDeviation) {
  const Hierarchy h = make_tree({NodePath{}, NodePath{0}, NodePath{0, 0}, NodePath{1}});
  const auto s = compute_stats(h);
  const auto hist = compute_histograms(h);
  const auto b = aggregate(std::vector{s, s}, std::vector{hist, hist});
  EXPECT_EQ(b.node_count.std, 0.0);
  EXPECT_EQ(b.leaf_count.std, 0.0);
  EXPECT_EQ(b.depth.std, 0.0);
  for (const auto& w : b.width) EXPECT_EQ(w.std, 0.0);
}

TEST(Aggregate, AverageStandardDeviationConvention) {
  HierarchyStats a, b;
  a.node_count = 2;
  b.node_count = 6;
  a.breadth = {1.0, 0.5};
  b.breadth = {3.0, 1.5};
  a.path_length = {2.0, 0.0};
  b.path_length = {4.0, 2.0};
  const auto s = aggregate(std::vector{a, b});
  EXPECT_DOUBLE_EQ(s.node_count.mean, 4.0);
  EXPECT_DOUBLE_EQ(s.node_count.std, std::sqrt(8.0));  // n-1 denominator
  EXPECT_EQ(s.breadth, (MeanStd{2.0, 1.0}));
  EXPECT_EQ(s.path_length, (MeanStd{3.0, 1.0}));
}

TEST(Aggregate, ShorterHierarchiesContributeZeroAtDeeperLevels) {
  const Hierarchy shallow = make_tree({NodePath{}});
  const Hierarchy deep = make_tree({NodePath{}, NodePath{0}, NodePath{1}});
  const auto b = aggregate(std::vector{compute_stats(shallow), compute_stats(deep)},
                           std::vector{compute_histograms(shallow), compute_histograms(deep)});
  ASSERT_EQ(b.width.size(), 2u);
  EXPECT_DOUBLE_EQ(b.width[1].mean, 1.0);
  EXPECT_DOUBLE_EQ(b.branching.at(2).mean, 0.5);
  EXPECT_DOUBLE_EQ(b.branching.at(0).mean, 1.5);
}
