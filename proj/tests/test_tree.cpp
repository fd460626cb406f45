#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "metags/tree.hpp"

using namespace metags;

namespace {

// all-pairs distances by Floyd-Warshall, independent of the BFS code
std::vector<std::vector<int>> apsp(const InteractionTree& t) {
    const int n = t.n(), inf = 1 << 20;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& e : t.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

bool is_tree(const InteractionTree& t) {
    if (t.num_edges() != t.n() - 1) return false;
    auto d = apsp(t);
    for (int j = 0; j < t.n(); ++j)
        if (d[0][j] >= (1 << 20)) return false;
    return true;
}

} // namespace

TEST_CASE("ball on a path and radius zero") {
    auto p = gen_path(5);
    CHECK(ball(p, 2, 1) == std::vector<int>{1, 2, 3});
    CHECK(ball(p, 4, 0) == std::vector<int>{4});
    CHECK_THROWS_AS(ball(p, 7, 1), InvalidInput);
}

TEST_CASE("ball agrees with brute-force distances on Vicsek order 2") {
    auto t = gen_vicsek(2);
    auto d = apsp(t);
    int origin = -1;
    for (int v = 0; v < t.n(); ++v)
        if (t.coords[v] == std::array<int, 3>{0, 0, 0}) origin = v;
    REQUIRE(origin >= 0);
    int expect = 0;
    for (int v = 0; v < t.n(); ++v) expect += d[origin][v] <= 3;
    CHECK(static_cast<int>(ball(t, origin, 3).size()) == expect);
    for (int r = 0; r < 8; ++r) {
        auto a = ball(t, 5, r), b = ball(t, 5, r + 1);
        CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
    CHECK(static_cast<int>(ball(t, 5, t.diameter()).size()) == t.n());
}

TEST_CASE("fractal dimension exact values") {
    auto fd = fractal_dimension(gen_path(101));
    CHECK(fd.beta == doctest::Approx(std::log(5.0) / std::log(4.0)).epsilon(1e-14));
    CHECK(fd.r == 2);
    auto star = fractal_dimension(gen_star(4));
    CHECK(star.beta == doctest::Approx(std::log(5.0) / std::log(4.0)).epsilon(1e-14));
    auto tiny = fractal_dimension(gen_path(2));
    CHECK(tiny.sentinel);
    CHECK(tiny.beta == 1.0);
    CHECK(std::abs(fractal_dimension(gen_path(1000)).beta - 1.0) < 0.2);
    CHECK_THROWS_AS(fractal_dimension(gen_path(5), 1.5), InvalidInput);
}

TEST_CASE("fractal dimension matches an enumeration of every (x, r)") {
    auto t = gen_random_tree(40, 4, 11);
    auto d = apsp(t);
    double best = 0;
    int diam = 0;
    for (auto& row : d) diam = std::max(diam, *std::max_element(row.begin(), row.end()));
    for (int x = 0; x < t.n(); ++x)
        for (int r = 2; r <= diam; ++r) {
            int vol = 0;
            for (int y = 0; y < t.n(); ++y) vol += d[x][y] <= r;
            best = std::max(best, std::log(vol) / std::log(2.0 * r));
        }
    CHECK(fractal_dimension(t).beta == doctest::Approx(best).epsilon(1e-14));
}

TEST_CASE("region operations") {
    auto p = gen_path(5);
    Region e{{}, {1}};
    auto c = closure(p, e);
    CHECK(c.vertices == std::vector<int>{1, 2});
    CHECK(c.edges == std::vector<int>{1});
    CHECK(closure(p, c) == c);
    auto all = whole_tree(p);
    CHECK(vertex_boundary(p, all).empty());
    CHECK(edge_boundary(p, all).empty());
    CHECK(pad(p, Region{{2}, {}}, 1).vertices == std::vector<int>{1, 2, 3});
    // open section between 0 and 3: vertices 1,2 and edges 0,1,2
    Region sec{{1, 2}, {0, 1, 2}};
    CHECK(vertex_boundary(p, sec) == std::vector<int>{0, 3});
    CHECK(edge_boundary(p, sec) == std::vector<int>{0, 2});
    CHECK(edge_boundary(p, sec) == edge_boundary(p, complement(p, sec)));
    CHECK(components(p, Region{{0, 3}, {0, 3}}).size() == 2);
    CHECK(is_connected(p, sec));
    CHECK_FALSE(is_closed(p, sec));
    CHECK_THROWS_AS(closure(p, Region{{9}, {}}), InvalidInput);
}

TEST_CASE("edge boundary of a region equals that of its complement on random trees") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto t = gen_random_tree(30, 4, s);
        Region r;
        for (int v = 0; v < t.n(); v += 3) r.vertices.push_back(v);
        for (int e = 0; e < t.num_edges(); e += 2) r.edges.push_back(e);
        CHECK(edge_boundary(t, r) == edge_boundary(t, complement(t, r)));
        auto c = closure(t, r);
        CHECK(closure(t, c) == c);
    }
}

TEST_CASE("Vicsek trees") {
    auto v1 = gen_vicsek(1);
    CHECK(v1.n() == 7);
    auto v2 = gen_vicsek(2);
    CHECK(v2.n() == 49);
    CHECK(is_tree(v2));
    auto v3 = gen_vicsek(3);
    CHECK(v3.n() == 343);
    CHECK(v3.num_edges() == 342);
    // no linear section longer than 3: a maximal run of degree-2 vertices holds at most 2 vertices
    for (int v = 0; v < v3.n(); ++v) {
        if (v3.degree(v) != 2) continue;
        int run = 1;
        for (auto [y, e] : v3.adj(v)) {
            int prev = v, cur = y;
            while (v3.degree(cur) == 2) {
                ++run;
                int nxt = v3.adj(cur)[0].first == prev ? v3.adj(cur)[1].first : v3.adj(cur)[0].first;
                prev = cur;
                cur = nxt;
            }
        }
        CHECK(run <= 2);
    }
}

TEST_CASE("Wilson UST on the 2x2 grid is uniform") {
    std::map<std::vector<int>, int> freq;
    const int trials = 100000;
    for (int s = 0; s < trials; ++s) {
        auto t = gen_ust({2, 2}, static_cast<std::uint64_t>(s));
        std::vector<int> key;
        for (const auto& e : t.edges()) key.push_back(e.u * 4 + e.v);
        std::sort(key.begin(), key.end());
        ++freq[key];
    }
    CHECK(freq.size() == 4);
    for (auto& [k, c] : freq) CHECK(std::abs(c / double(trials) - 0.25) < 0.02);
}

TEST_CASE("generators are deterministic trees") {
    auto a = gen_ust({10, 10}, 7), b = gen_ust({10, 10}, 7);
    CHECK(a.edges() == b.edges());
    CHECK(is_tree(a));
    auto c = gen_ust({4, 4, 4}, 3);
    CHECK(c.n() == 64);
    CHECK(is_tree(c));
    auto dla = gen_dla(300, 5);
    CHECK(dla.n() == 300);
    CHECK(is_tree(dla));
    CHECK(dla.max_degree() <= 4);
    auto r = gen_random_tree(200, 6, 1);
    CHECK(is_tree(r));
    CHECK(r.max_degree() <= 6);
    auto pr = tree_from_pruefer({3, 3, 3, 4});
    CHECK(pr.n() == 6);
    CHECK(is_tree(pr));
}

TEST_CASE("ball growth slopes") {
    auto p = ball_growth_profile(gen_path(2000), 50, 1);
    CHECK(std::abs(p.slope - 1.0) < 0.05);
    CHECK(p.rows.front().r == 0);
    CHECK(p.rows.front().volume == 1);
    auto v = ball_growth_profile(gen_vicsek(3), 20, 1);
    MESSAGE("vicsek k=3 slope " << v.slope << " fit r in [" << v.fit_rmin << "," << v.fit_rmax << "]");
    CHECK(std::abs(v.slope - std::log(7.0) / std::log(3.0)) < 0.1);
}

TEST_CASE("tree json round trip") {
    auto t = gen_vicsek(2);
    auto u = tree_from_json(to_json(t));
    CHECK(u.edges() == t.edges());
    CHECK(u.coords == t.coords);
    CHECK(u.hash() == t.hash());
    CHECK_THROWS_AS(tree_from_json(nlohmann::json{{"n", 3}}), InvalidInput);
}
