#pragma once

#include <utility>
#include <vector>

#include "json.hpp"

#include "metags/tree.hpp"

namespace metags {

enum class PartKind { Branch, Section };

// A branch (closed, at most one boundary vertex) or a section (open, two boundary vertices).
struct LeanSubtree {
    PartKind kind = PartKind::Branch;
    Region region;
    // branch: root and the suspending edges, directed (outside vertex, root); empty for the whole tree
    int root = -1;
    std::vector<std::pair<int, int>> ee;
    // section: the two boundary vertices
    int xl = -1, xr = -1;

    int num_vertices() const { return static_cast<int>(region.vertices.size()); }
    bool is_singleton() const { return region.size() == 1; }
    std::vector<int> boundary() const;
};

LeanSubtree make_branch(const InteractionTree& t, int root, std::vector<std::pair<int, int>> ee);
LeanSubtree make_section(const InteractionTree& t, int xl, int xr);
LeanSubtree whole_tree_branch(const InteractionTree& t, int root = 0);
// throws InvalidInput unless s is a well-formed branch or section of t
void check_lean(const InteractionTree& t, const LeanSubtree& s);

// Parts in order (left, middle, right); a single vertex yields just itself.
std::vector<LeanSubtree> trisect_branch(const InteractionTree& t, const LeanSubtree& b);
// requires dist(xl, xr) >= 2
std::vector<LeanSubtree> trisect_section(const InteractionTree& t, const LeanSubtree& s);
std::vector<LeanSubtree> refine(const InteractionTree& t, const LeanSubtree& s);
// path between the two boundary vertices of a section
std::vector<int> spine(const InteractionTree& t, const LeanSubtree& s);

struct MetaVertex {
    int level = 0;
    LeanSubtree part;
    int parent = -1;
    std::vector<int> children;
};

class MetaTree {
public:
    MetaTree() = default;
    // duplicate_singletons keeps a copy of every finished singleton on each later level, so that
    // every level is a partition; off by default since the copies make |MV| grow like n * depth
    explicit MetaTree(const InteractionTree& t, bool duplicate_singletons = false);

    int size() const { return static_cast<int>(nodes_.size()); }
    int root() const { return 0; }
    int depth() const { return depth_; }
    const MetaVertex& node(int v) const { return nodes_.at(v); }
    const std::vector<MetaVertex>& nodes() const { return nodes_; }
    const std::vector<int>& children(int v) const { return nodes_.at(v).children; }
    const Region& subtree(int v) const { return nodes_.at(v).part.region; }
    bool is_leaf(int v) const { return nodes_.at(v).children.empty(); }
    int leaf_of_vertex(int x) const { return leaf_vertex_.at(x); }
    int leaf_of_edge(int e) const { return leaf_edge_.at(e); }
    // meta-vertex ids on one level
    std::vector<int> level(int l) const;
    // ids ordered so that every child precedes its parent
    std::vector<int> postorder() const;
    std::uint64_t tree_hash() const { return tree_hash_; }

    nlohmann::json to_json() const;

private:
    std::vector<MetaVertex> nodes_;
    std::vector<int> leaf_vertex_, leaf_edge_;
    int depth_ = 0;
    std::uint64_t tree_hash_ = 0;
};

// (log(4d/(4d-1)))^-1 log n
double meta_depth_bound(const InteractionTree& t);

} // namespace metags
