#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "treeshift/tree.hpp"

namespace treeshift {
namespace {

using testing::vname;

VertexId n(std::int64_t i) { return profiles::integer_vertex(i); }
const VertexId kOmega = VertexId::core("omega");

FiniteTree path3() {
  return FiniteTree::from_edges({VertexId::core("0"), VertexId::core("1"), VertexId::core("2")},
                                {{VertexId::core("0"), VertexId::core("1")}, {VertexId::core("1"), VertexId::core("2")}});
}

FiniteTree binary_depth2() { return testing::tree_from_parents({0, 0, 1, 1, 2, 2}); }

TEST(VertexId, OrderPutsStemThenCoreThenRays) {
  EXPECT_LT(VertexId::stem(-3), VertexId::stem(-1));
  EXPECT_LT(VertexId::stem(-1), VertexId::core("0"));
  EXPECT_LT(VertexId::core("zzz"), VertexId::ray("a", 1));
  EXPECT_LT(VertexId::ray("a", 9), VertexId::ray("b", 1));
  EXPECT_LT(VertexId::ray("a", 2), VertexId::ray("a", 10));
}

TEST(VertexId, IndexRangesAreEnforced) {
  EXPECT_THROW(VertexId::stem(1), DomainError);
  EXPECT_THROW(VertexId::ray("z", 0), DomainError);
}

TEST(VertexId, TextFormRoundTrips) {
  for (const auto& v : {VertexId::core("omega"), VertexId::stem(-4), VertexId::ray("z", 12)}) {
    EXPECT_EQ(parse_vertex(to_string(v)), v);
  }
  EXPECT_THROW(parse_vertex("z[x]"), DomainError);
  EXPECT_THROW(parse_vertex("[3]"), DomainError);
  EXPECT_THROW(parse_vertex(""), DomainError);
}

TEST(FiniteTree, RejectsNonTrees) {
  const auto a = VertexId::core("a"), b = VertexId::core("b"), c = VertexId::core("c");
  EXPECT_THROW(FiniteTree({a, b}, {}), DomainError);                     // two roots
  EXPECT_THROW(FiniteTree({a, b}, {{a, b}, {b, a}}), DomainError);       // cycle, no root
  EXPECT_THROW(FiniteTree({a, b, c}, {{b, c}, {c, b}}), DomainError);    // cycle off the root
  EXPECT_THROW(FiniteTree::from_edges({a, b, c}, {{a, c}, {b, c}}), DomainError);
  EXPECT_THROW(FiniteTree({}, {}), DomainError);
}

TEST(TreeProfile, RejectsBadRays) {
  const auto core = FiniteTree({VertexId::core("0")}, {});
  EXPECT_THROW(TreeProfile(core, false, {{VertexId::core("x"), "z"}}), DomainError);
  EXPECT_THROW(TreeProfile(core, false, {{VertexId::core("0"), "z"}, {VertexId::core("0"), "z"}}), DomainError);
  EXPECT_THROW(TreeProfile(core, false, {{VertexId::core("0"), "stem"}}), DomainError);
}

TEST(Children, ZhatRootHasRayAndLeaf) {
  const auto t = profiles::zhat();
  EXPECT_EQ(t.children(n(0)), (std::vector<VertexId>{kOmega, n(1)}));
  EXPECT_TRUE(t.children(kOmega).empty());
  EXPECT_EQ(t.children(n(-1)), std::vector<VertexId>{n(0)});
  EXPECT_EQ(t.children(n(-4)), std::vector<VertexId>{n(-3)});
  EXPECT_EQ(t.children(n(7)), std::vector<VertexId>{n(8)});
}

TEST(Children, FinitePath) {
  const auto t = path3();
  EXPECT_EQ(t.children(VertexId::core("1")), std::vector<VertexId>{VertexId::core("2")});
  EXPECT_TRUE(t.children(VertexId::core("2")).empty());
  EXPECT_THROW(t.children(VertexId::core("9")), DomainError);
}

TEST(Parent, ProfilesAndRoots) {
  EXPECT_EQ(profiles::zhat().parent(kOmega), n(0));
  EXPECT_FALSE(path3().parent(VertexId::core("0")).has_value());
  const auto z = profiles::z();
  for (std::int64_t i = -5; i <= 5; ++i) EXPECT_EQ(z.parent(n(i)), n(i - 1));
  EXPECT_FALSE(profiles::zplus().parent(n(0)).has_value());
  EXPECT_THROW(profiles::zplus().parent(n(-1)), DomainError);
}

TEST(IterParent, Basics) {
  const auto zp = profiles::zplus();
  EXPECT_EQ(iter_parent(zp, n(4), 0), n(4));
  EXPECT_EQ(iter_parent(zp, n(5), 3), n(2));
  EXPECT_FALSE(iter_parent(zp, n(1), 2).has_value());
  EXPECT_EQ(iter_parent(profiles::z(), n(1), 4), n(-3));
}

TEST(ChiN, Examples) {
  EXPECT_EQ(chi_n(profiles::zhat(), n(0), 0), std::set<VertexId>{n(0)});
  EXPECT_EQ(chi_n(profiles::zhat(), n(0), 1), (std::set<VertexId>{kOmega, n(1)}));
  EXPECT_EQ(chi_n(profiles::zhat(), n(0), 3), std::set<VertexId>{n(3)});

  // Depth-2 vertices of the full binary tree, found from par^2 directly.
  const auto t = binary_depth2();
  const auto expected = testing::chi_n_by_parents(t, vname(0), 2);
  EXPECT_EQ(expected.size(), 4u);
  EXPECT_EQ(chi_n(t, vname(0), 2), expected);
}

TEST(Descendants, Examples) {
  const auto t = path3();
  EXPECT_EQ(descendants(t, VertexId::core("2")).all(), std::set<VertexId>{VertexId::core("2")});
  EXPECT_EQ(descendants(profiles::zhat(), n(0), Window{0, 3}).all(), (std::set<VertexId>{n(0), kOmega, n(1), n(2), n(3)}));
  EXPECT_THROW(descendants(profiles::z(), n(-5), Window{3, 3}), WindowError);
}

TEST(Leafless, Examples) {
  EXPECT_TRUE(is_leafless(profiles::zplus()));
  EXPECT_TRUE(is_leafless(profiles::z()));
  EXPECT_FALSE(is_leafless(profiles::zhat()));
  EXPECT_FALSE(is_leafless(path3()));
}

TEST(Branching, Examples) {
  EXPECT_EQ(branching_vertices(profiles::zhat()), std::set<VertexId>{n(0)});
  EXPECT_TRUE(branching_vertices(profiles::z()).empty());
  const auto star = testing::tree_from_parents({0, 0, 0});
  EXPECT_EQ(branching_vertices(star), std::set<VertexId>{vname(0)});
}

TEST(PathShape, Examples) {
  const auto zp = path_shape(profiles::zplus());
  ASSERT_EQ(zp.shape, PathShape::ZPlusPath);
  EXPECT_EQ(zp.enumeration->at(0), n(0));
  EXPECT_EQ(zp.enumeration->at(3), n(3));
  EXPECT_THROW(zp.enumeration->at(-1), DomainError);

  EXPECT_EQ(path_shape(profiles::zhat()).shape, PathShape::NotAPath);

  const auto z = path_shape(profiles::z());
  ASSERT_EQ(z.shape, PathShape::ZPath);
  for (std::int64_t i = -4; i <= 4; ++i) {
    EXPECT_EQ(z.enumeration->at(i), n(i));
    EXPECT_EQ(z.enumeration->index_of(n(i)), i);
  }
}

TEST(PathShape, LongCoreChain) {
  // a -> b -> c, ray at c: still Z+.
  const auto a = VertexId::core("a"), b = VertexId::core("b"), c = VertexId::core("c");
  const TreeProfile p(FiniteTree::from_edges({a, b, c}, {{a, b}, {b, c}}), false, {{c, "tail"}});
  const auto r = path_shape(p);
  ASSERT_EQ(r.shape, PathShape::ZPlusPath);
  EXPECT_EQ(r.enumeration->at(1), b);
  EXPECT_EQ(r.enumeration->at(3), VertexId::ray("tail", 1));
  EXPECT_EQ(r.enumeration->index_of(VertexId::ray("tail", 4)), 6);
  // A ray hung mid-chain makes b branching.
  const TreeProfile q(FiniteTree::from_edges({a, b, c}, {{a, b}, {b, c}}), false, {{c, "tail"}, {b, "side"}});
  EXPECT_EQ(path_shape(q).shape, PathShape::NotAPath);
}

TEST(Truncate, Examples) {
  const auto z = truncate(profiles::z(), Window{3, 3});
  EXPECT_EQ(z.tree.size(), 7u);
  EXPECT_EQ(z.boundary, (std::set<VertexId>{n(-3), n(3)}));
  EXPECT_EQ(z.tree.root(), n(-3));

  const auto core = testing::tree_from_parents({0, 0, 1});
  const auto plain = truncate(TreeProfile(core), Window{0, 0});
  EXPECT_EQ(plain.tree, core);
  EXPECT_TRUE(plain.boundary.empty());

  const auto zh = truncate(profiles::zhat(), Window{2, 2});
  EXPECT_EQ(zh.tree.vertices(), (std::set<VertexId>{n(-2), n(-1), n(0), n(1), n(2), kOmega}));
  EXPECT_EQ(zh.boundary, (std::set<VertexId>{n(-2), n(2)}));
}

TEST(Truncate, ZeroWindowOnStemCutsAtCoreRoot) {
  const auto t = truncate(profiles::z(), Window{0, 0});
  EXPECT_EQ(t.tree.size(), 1u);
  EXPECT_EQ(t.boundary, std::set<VertexId>{n(0)});
}

TEST(Truncate, IsMonotoneInTheWindow) {
  const auto p = profiles::zhat();
  for (std::int64_t h = 0; h < 5; ++h) {
    for (std::int64_t r = 0; r < 5; ++r) {
      const auto small = truncate(p, Window{h, r});
      const auto big = truncate(p, Window{h + 1, r + 1});
      EXPECT_TRUE(std::includes(big.tree.vertices().begin(), big.tree.vertices().end(), small.tree.vertices().begin(),
                                small.tree.vertices().end()));
      for (const auto& v : big.boundary) EXPECT_FALSE(small.tree.contains(v) && !small.boundary.contains(v));
    }
  }
}

// Iterated-children identities, checked on every tree shape with up to 9
// vertices: chi_{n+1} = Chi(chi_n), chi_n = par^{-n}(u), descendant
// levels are disjoint and sibling subtrees are disjoint.
void check_tree_identities(const FiniteTree& t) {
  for (const auto& u : t.vertices()) {
    const auto des = descendants(t, u);
    std::size_t total = 0;
    for (std::size_t k = 0; k < des.levels.size() + 1; ++k) {
      const auto level = chi_n(t, u, static_cast<std::int64_t>(k));
      ASSERT_EQ(level, testing::chi_n_by_parents(t, u, k));
      ASSERT_EQ(chi_n(t, u, static_cast<std::int64_t>(k) + 1), children_of_set(t, level));
      total += level.size();
    }
    ASSERT_EQ(total, des.all().size());
    const auto kids = t.children(u);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      for (std::size_t j = i + 1; j < kids.size(); ++j) {
        const auto a = descendants(t, kids[i]).all();
        const auto b = descendants(t, kids[j]).all();
        for (const auto& v : a) ASSERT_FALSE(b.contains(v));
      }
    }
  }
}

TEST(TreeIdentities, ExhaustiveUpToNineVertices) {
  // Rooted tree shapes on 1..9 vertices: 1, 1, 2, 4, 9, 20, 48, 115, 286.
  const std::vector<std::size_t> expected{1, 1, 2, 4, 9, 20, 48, 115, 286};
  for (std::size_t n = 1; n <= 9; ++n) {
    std::size_t shapes = 0;
    testing::for_each_tree(n, [&](const FiniteTree& t) {
      ++shapes;
      check_tree_identities(t);
    });
    EXPECT_EQ(shapes, expected[n - 1]);
  }
}

TEST(TreeIdentities, RandomTreesUpTo200Vertices) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 100; ++trial) {
    const auto size = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    const auto t = testing::random_tree(rng, size);
    const auto u = vname(std::uniform_int_distribution<std::size_t>(0, size - 1)(rng));
    for (std::int64_t k = 0; k < 6; ++k) {
      ASSERT_EQ(chi_n(t, u, k), testing::chi_n_by_parents(t, u, static_cast<std::size_t>(k)));
    }
    const auto kids = t.children(u);
    if (kids.size() >= 2) {
      const auto a = descendants(t, kids[0]).all();
      for (const auto& v : descendants(t, kids[1]).all()) ASSERT_FALSE(a.contains(v));
    }
  }
}

TEST(TreeIdentities, CommonAncestorContainsBoth) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto size = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
    const auto t = testing::random_tree(rng, size);
    std::uniform_int_distribution<std::size_t> pick(0, size - 1);
    const auto u1 = vname(pick(rng)), u2 = vname(pick(rng));
    const auto a = common_ancestor(t, u1, u2);
    const auto des = descendants(t, a).all();
    EXPECT_TRUE(des.contains(u1));
    EXPECT_TRUE(des.contains(u2));
  }
}

}  // namespace
}  // namespace treeshift
