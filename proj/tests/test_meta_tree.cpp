#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "metags/meta_tree.hpp"

using namespace metags;

namespace {

// every vertex and edge covered exactly once
bool partitions(const InteractionTree& t, const std::vector<const Region*>& parts, const Region& whole) {
    std::vector<int> cv(t.n(), 0), ce(t.num_edges(), 0);
    for (auto* r : parts) {
        for (int v : r->vertices) ++cv[v];
        for (int e : r->edges) ++ce[e];
    }
    for (int v = 0; v < t.n(); ++v)
        if (cv[v] != (whole.has_vertex(v) ? 1 : 0)) return false;
    for (int e = 0; e < t.num_edges(); ++e)
        if (ce[e] != (whole.has_edge(e) ? 1 : 0)) return false;
    return true;
}

void check_meta(const InteractionTree& t, const MetaTree& mt, bool levels_partition) {
    const double shrink = (4.0 * t.d() - 1) / (4.0 * t.d());
    auto all = whole_tree(t);
    if (levels_partition)
        for (int l = 0; l <= mt.depth(); ++l) {
            std::vector<const Region*> parts;
            for (int v : mt.level(l)) parts.push_back(&mt.subtree(v));
            REQUIRE(partitions(t, parts, all));
        }
    std::vector<const Region*> leaves;
    for (int v = 0; v < mt.size(); ++v)
        if (mt.is_leaf(v)) leaves.push_back(&mt.subtree(v));
    CHECK(static_cast<int>(leaves.size()) == 2 * t.n() - 1);
    CHECK(partitions(t, leaves, all));
    for (int v = 0; v < mt.size(); ++v) {
        const auto& m = mt.node(v);
        check_lean(t, m.part);
        if (mt.is_leaf(v)) {
            CHECK(m.part.is_singleton());
            continue;
        }
        CHECK(m.children.size() <= 5);
        std::vector<const Region*> parts;
        for (int w : m.children) {
            parts.push_back(&mt.subtree(w));
            CHECK(mt.node(w).parent == v);
            CHECK(mt.node(w).level == m.level + 1);
            CHECK(mt.node(w).part.num_vertices() <= std::max(shrink * m.part.num_vertices(), 1.0) + 1e-12);
        }
        CHECK(partitions(t, parts, m.part.region));
    }
    for (int x = 0; x < t.n(); ++x) CHECK(mt.subtree(mt.leaf_of_vertex(x)).vertices == std::vector<int>{x});
    for (int e = 0; e < t.num_edges(); ++e) CHECK(mt.subtree(mt.leaf_of_edge(e)).edges == std::vector<int>{e});
}

} // namespace

TEST_CASE("branch and section construction") {
    auto p = gen_path(6);
    auto s = make_section(p, 1, 4);
    CHECK(s.region.vertices == std::vector<int>{2, 3});
    CHECK(s.region.edges == std::vector<int>{1, 2, 3});
    check_lean(p, s);
    auto b = make_branch(p, 2, {{1, 2}});
    CHECK(b.region.vertices == std::vector<int>{2, 3, 4, 5});
    check_lean(p, b);
    CHECK_THROWS_AS(make_branch(p, 2, {{0, 2}}), InvalidInput);
    LeanSubtree bad = s;
    bad.kind = PartKind::Branch;
    CHECK_THROWS_AS(check_lean(p, bad), InvalidInput);
}

TEST_CASE("trisection of a single vertex") {
    auto t = gen_path(1);
    auto parts = trisect_branch(t, whole_tree_branch(t));
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].region.vertices == std::vector<int>{0});
}

TEST_CASE("path branch of 8 rooted at an end") {
    auto t = gen_path(8);
    auto b = whole_tree_branch(t, 0);
    auto parts = trisect_branch(t, b);
    REQUIRE(parts.size() == 3);
    const int cap = static_cast<int>(std::ceil(8 * (4.0 * t.d() - 1) / (4.0 * t.d())));
    for (auto& part : parts) {
        check_lean(t, part);
        CHECK(part.num_vertices() <= cap);
    }
    CHECK(partitions(t, {&parts[0].region, &parts[1].region, &parts[2].region}, b.region));
    CHECK(parts[2].num_vertices() == 4);
}

TEST_CASE("star branch rooted at a leaf") {
    auto t = gen_star(3); // centre 0
    auto b = whole_tree_branch(t, 1);
    auto parts = trisect_branch(t, b);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].num_vertices() + parts[1].num_vertices() + parts[2].num_vertices() == 4);
    CHECK(parts[2].num_vertices() >= 4.0 / (4 * t.d()));
    CHECK(parts[2].region.vertices == std::vector<int>{2});
    CHECK(parts[1].kind == PartKind::Section);
}

TEST_CASE("section trisection picks the balanced split") {
    auto t = gen_path(5);
    auto s = make_section(t, 0, 4);
    auto parts = trisect_section(t, s);
    REQUIRE(parts.size() == 3);
    CHECK(parts[1].root == 2);
    CHECK(parts[0].num_vertices() == 1);
    CHECK(parts[2].num_vertices() == 1);
    CHECK(partitions(t, {&parts[0].region, &parts[1].region, &parts[2].region}, s.region));
    CHECK_THROWS_AS(trisect_section(t, make_section(t, 1, 2)), PreconditionError);
}

TEST_CASE("caterpillar section: the heavy branch becomes the middle part") {
    // spine 0-1-2-3-4-5-6 with a 6-vertex tail hanging off 4
    std::vector<Edge> es;
    for (int i = 0; i < 6; ++i) es.push_back({i, i + 1});
    es.push_back({4, 7});
    for (int i = 7; i < 12; ++i) es.push_back({i, i + 1});
    InteractionTree t(13, es, 4, 2);
    auto parts = trisect_section(t, make_section(t, 0, 6));
    CHECK(parts[1].root == 4);
    CHECK(parts[1].num_vertices() == 7);
    for (auto& part : parts) check_lean(t, part);
}

TEST_CASE("refine arities") {
    auto t = gen_path(6);
    auto e = make_section(t, 2, 3);
    CHECK(refine(t, e).size() == 1);
    CHECK(refine(t, whole_tree_branch(t)).size() == 3);
    auto parts = refine(t, make_section(t, 0, 5));
    CHECK(parts.size() <= 5);
    CHECK(parts.size() >= 3);
}

TEST_CASE("meta tree of one vertex") {
    auto t = gen_path(1);
    MetaTree mt(t);
    CHECK(mt.size() == 1);
    CHECK(mt.depth() == 0);
    CHECK(mt.is_leaf(0));
    CHECK(mt.leaf_of_vertex(0) == 0);
}

TEST_CASE("meta tree of a 16-path") {
    auto t = gen_path(16);
    MetaTree mt(t, true);
    CHECK(mt.depth() <= 10);
    CHECK(mt.depth() <= meta_depth_bound(t) + 1e-9);
    check_meta(t, mt, true);
    CHECK(static_cast<int>(mt.level(mt.depth()).size()) == 2 * t.n() - 1);
    MetaTree lean(t);
    CHECK(lean.depth() == mt.depth());
    check_meta(t, lean, false);
}

TEST_CASE("meta trees of random trees satisfy the shrink and size bounds") {
    int worst_ratio_x100 = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const int n = 2 + static_cast<int>(s % 199);
        auto t = gen_random_tree(n, 2 + static_cast<int>(s % 5), s);
        MetaTree mt(t);
        check_meta(t, mt, false);
        CHECK(mt.depth() <= meta_depth_bound(t) + 1e-9);
        CHECK(mt.size() <= 10 * n);
        worst_ratio_x100 = std::max(worst_ratio_x100, 100 * mt.size() / n);
        if (s % 10 == 0) check_meta(t, MetaTree(t, true), true);
    }
    MESSAGE("max |MV|/n over random trees: " << worst_ratio_x100 / 100.0);
}

TEST_CASE("meta tree size on generated fractals") {
    for (auto t : {gen_vicsek(3), gen_ust({30, 30}, 2), gen_path(1000)}) {
        MetaTree dup(t, true), lean(t);
        check_meta(t, lean, false);
        MESSAGE("n=" << t.n() << " depth " << dup.depth() << " |MV| dup " << dup.size() << " lean " << lean.size());
        CHECK(lean.size() <= 10 * t.n());
    }
}

TEST_CASE("meta tree json lists every node") {
    auto t = gen_vicsek(1);
    MetaTree mt(t);
    auto j = mt.to_json();
    CHECK(j["nodes"].size() == static_cast<std::size_t>(mt.size()));
    CHECK(j["nodes"][0]["vertices"].size() == 7);
    CHECK(j["tree_hash"] == std::to_string(t.hash()));
}
