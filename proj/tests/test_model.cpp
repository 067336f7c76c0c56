#include <gtest/gtest.h>

#include "hiergen/model.hpp"
#include "hiergen/presets.hpp"

using namespace hiergen;

TEST(Validate, AcceptsTableOnePresets) {
  for (const auto& preset : kPresets) {
    EXPECT_FALSE(check(preset_params(preset)).has_value()) << preset.name;
  }
  const GeneratorParams s00 = preset_params(*find_preset("s00"));
  EXPECT_EQ(s00.n, 10000u);
  EXPECT_EQ(s00.d, 2u);
  EXPECT_EQ(s00.alpha0, 1.0);
  EXPECT_EQ(s00.lambda, 0.5);
  EXPECT_EQ(s00.gamma, 0.2);
  EXPECT_EQ(s00.p, 1.0);
  EXPECT_EQ(s00.q, 5.0);
  EXPECT_EQ(s00.sigma_min, 0.05);
  EXPECT_EQ(s00.sigma_max, 10.0);
}

TEST(Validate, NamesTheViolatedField) {
  auto field_of = [](GeneratorParams p) {
    auto err = check(p);
    return err ? err->field() : std::string("ok");
  };
  GeneratorParams base = preset_params(kPresets[0]);
  auto with = [&](auto&& edit) {
    GeneratorParams p = base;
    edit(p);
    return field_of(p);
  };
  EXPECT_EQ(with([](auto& p) { p.gamma = 0.0; }), "gamma");
  EXPECT_EQ(with([](auto& p) { p.alpha0 = -1.0; }), "alpha0");
  EXPECT_EQ(with([](auto& p) { p.lambda = 0.0; }), "lambda");
  EXPECT_EQ(with([](auto& p) { p.p = 0.0; }), "p");
  EXPECT_EQ(with([](auto& p) { p.q = 0.0; }), "q");
  EXPECT_EQ(with([](auto& p) { p.d = 0; }), "d");
  EXPECT_EQ(with([](auto& p) { p.sigma_min = p.sigma_max; }), "sigma_min");
  EXPECT_EQ(with([](auto& p) { p.sigma_min = -0.1; }), "sigma_min");
  EXPECT_EQ(with([](auto& p) { p.max_depth = 0; }), "max_depth");
  EXPECT_EQ(with([](auto& p) { p.n = 0; }), "ok");
  EXPECT_THROW(validate([&] { auto p = base; p.gamma = 0; return p; }()), ParameterError);
}

TEST(NodePath, OrderingIsDepthFirst) {
  const NodePath root;
  const NodePath a{0};
  const NodePath aa{0, 5};
  const NodePath b{1};
  const NodePath ten{10};
  EXPECT_LT(root, a);
  EXPECT_LT(a, aa);
  EXPECT_LT(aa, b);
  EXPECT_LT(b, ten);  // numeric, not textual
  EXPECT_TRUE(a.is_ancestor_of(aa));
  EXPECT_FALSE(aa.is_ancestor_of(a));
  EXPECT_FALSE(b.is_ancestor_of(aa));
  EXPECT_TRUE(root.is_ancestor_of(b));
  EXPECT_EQ(aa.parent(), a);
  EXPECT_EQ(aa.prefix(0), root);
  EXPECT_EQ(aa.depth(), 2u);
  EXPECT_EQ(root.to_string(), "/");
  EXPECT_EQ(NodePath({0, 12, 3}).to_string(), "/0/12/3");
}

TEST(Hierarchy, ChildrenAreDirectAndOrdered) {
  GeneratorParams params;
  params.d = 1;
  Hierarchy h(params);
  for (NodePath p : {NodePath{}, NodePath{0}, NodePath{0, 0}, NodePath{2}, NodePath{1}}) {
    NodeState s;
    s.path = p;
    h.insert(s);
  }
  const auto kids = h.children(NodePath{});
  ASSERT_EQ(kids.size(), 3u);
  EXPECT_EQ(kids[0], NodePath{0});
  EXPECT_EQ(kids[1], NodePath{1});
  EXPECT_EQ(kids[2], NodePath{2});
  EXPECT_EQ(h.children(NodePath{0}).size(), 1u);
  EXPECT_TRUE(h.children(NodePath{2}).empty());
}
