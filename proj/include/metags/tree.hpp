#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "metags/core.hpp"

namespace metags {

struct Edge {
    int u = 0, v = 0; // u < v
    friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected tree on dense vertex ids 0..n-1 with a degree bound 2d and local dimension q.
class InteractionTree {
public:
    InteractionTree() = default;
    InteractionTree(int n, std::vector<Edge> edges, int degree_bound, int local_dim);

    int n() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int degree_bound() const { return degree_bound_; }
    int d() const { return (degree_bound_ + 1) / 2; }
    int local_dim() const { return local_dim_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_.at(e); }
    // (neighbour, edge id) pairs, neighbours ascending
    const std::vector<std::pair<int, int>>& adj(int v) const { return adj_.at(v); }
    int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }
    int max_degree() const;
    int edge_id(int u, int v) const; // -1 if absent
    int other(int e, int v) const { return edges_[e].u == v ? edges_[e].v : edges_[e].u; }

    std::vector<int> distances(const std::vector<int>& sources) const;
    std::vector<int> path(int from, int to) const;
    int diameter() const;

    // optional lattice embedding, one row per vertex
    std::vector<std::array<int, 3>> coords;

    // FNV-1a over (n, q, degree bound, edges); used to bind dumps to a tree
    std::uint64_t hash() const;

private:
    int n_ = 0;
    int degree_bound_ = 2;
    int local_dim_ = 2;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
};

// A subset of VX ∪ EG, both lists sorted.
struct Region {
    std::vector<int> vertices;
    std::vector<int> edges;

    bool empty() const { return vertices.empty() && edges.empty(); }
    std::size_t size() const { return vertices.size() + edges.size(); }
    bool has_vertex(int v) const;
    bool has_edge(int e) const;
    void normalize();
    friend bool operator==(const Region&, const Region&) = default;
};

Region whole_tree(const InteractionTree& t);
Region vertex_region(const InteractionTree& t, std::vector<int> vertices); // induced, closed
Region closure(const InteractionTree& t, const Region& r);
Region complement(const InteractionTree& t, const Region& r);
std::vector<int> vertex_boundary(const InteractionTree& t, const Region& r);
std::vector<int> edge_boundary(const InteractionTree& t, const Region& r);
// edges with both endpoints among the region's vertices
std::vector<int> internal_edges(const InteractionTree& t, const std::vector<int>& vertices);
Region pad(const InteractionTree& t, const Region& r, int radius);
std::vector<Region> components(const InteractionTree& t, const Region& r);
bool is_closed(const InteractionTree& t, const Region& r);
bool is_connected(const InteractionTree& t, const Region& r);
void check_region(const InteractionTree& t, const Region& r);

std::vector<int> ball(const InteractionTree& t, int x, int r);

struct FractalDimension {
    double beta = 1.0;
    int x = -1;
    int r = -1;
    bool sentinel = false; // fewer than 3 vertices
};
FractalDimension fractal_dimension(const InteractionTree& t, double C = 2.0);

InteractionTree gen_path(int n, int local_dim = 2);
InteractionTree gen_star(int leaves, int local_dim = 2);
InteractionTree gen_vicsek(int order, int local_dim = 2);
InteractionTree gen_ust(const std::vector<int>& dims, std::uint64_t seed, int local_dim = 2);
InteractionTree gen_dla(int n, std::uint64_t seed, int local_dim = 2);
// random recursive tree with a degree cap, randomly relabelled
InteractionTree gen_random_tree(int n, int max_degree, std::uint64_t seed, int local_dim = 2);
InteractionTree tree_from_pruefer(const std::vector<int>& seq, int local_dim = 2);
// induced subtree on a connected vertex subset, relabelled in ascending order
InteractionTree induced_subtree(const InteractionTree& t, const std::vector<int>& vertices);
// BFS-grown connected fragment of n vertices starting at `start`
std::vector<int> grow_fragment(const InteractionTree& t, int start, int n, std::uint64_t seed);

struct BallGrowthProfile {
    struct Row {
        int vertex, r, volume;
    };
    std::vector<Row> rows;
    double slope = 0.0;
    int fit_rmin = 0, fit_rmax = 0;
    std::string csv() const;
};
BallGrowthProfile ball_growth_profile(const InteractionTree& t, int probes, std::uint64_t seed);

nlohmann::json to_json(const InteractionTree& t);
InteractionTree tree_from_json(const nlohmann::json& j);

} // namespace metags
