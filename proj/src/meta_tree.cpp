#include "metags/meta_tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace metags {

namespace {

bool in_ee(const std::vector<std::pair<int, int>>& ee, int a, int b) {
    for (auto [x, y] : ee)
        if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
}

void check_vertex(const InteractionTree& t, int v) {
    if (v < 0 || v >= t.n()) throw InvalidInput("vertex id out of range: " + std::to_string(v));
}

} // namespace

std::vector<int> LeanSubtree::boundary() const {
    if (kind == PartKind::Section) return xl < xr ? std::vector<int>{xl, xr} : std::vector<int>{xr, xl};
    if (ee.empty()) return {};
    return {root};
}

LeanSubtree make_branch(const InteractionTree& t, int root, std::vector<std::pair<int, int>> ee) {
    check_vertex(t, root);
    for (auto [x, y] : ee)
        if (y != root || t.edge_id(x, y) < 0) throw InvalidInput("suspending edges must point at the root");
    LeanSubtree b;
    b.kind = PartKind::Branch;
    b.root = root;
    b.ee = std::move(ee);
    std::vector<char> seen(t.n(), 0);
    std::deque<int> q{root};
    seen[root] = 1;
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        b.region.vertices.push_back(x);
        for (auto [y, e] : t.adj(x)) {
            if (seen[y] || in_ee(b.ee, x, y)) continue;
            seen[y] = 1;
            b.region.edges.push_back(e);
            q.push_back(y);
        }
    }
    b.region.normalize();
    return b;
}

LeanSubtree make_section(const InteractionTree& t, int xl, int xr) {
    check_vertex(t, xl);
    check_vertex(t, xr);
    if (xl == xr) throw InvalidInput("section needs two distinct boundary vertices");
    LeanSubtree s;
    s.kind = PartKind::Section;
    s.xl = xl;
    s.xr = xr;
    auto p = t.path(xl, xr);
    if (p.size() == 2) {
        s.region.edges.push_back(t.edge_id(xl, xr));
        return s;
    }
    std::vector<char> seen(t.n(), 0);
    seen[xl] = seen[xr] = 1;
    std::deque<int> q;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        seen[p[i]] = 1;
        q.push_back(p[i]);
    }
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        s.region.vertices.push_back(x);
        for (auto [y, e] : t.adj(x)) {
            s.region.edges.push_back(e);
            if (!seen[y]) {
                seen[y] = 1;
                q.push_back(y);
            }
        }
    }
    s.region.normalize();
    return s;
}

LeanSubtree whole_tree_branch(const InteractionTree& t, int root) { return make_branch(t, root, {}); }

void check_lean(const InteractionTree& t, const LeanSubtree& s) {
    check_region(t, s.region);
    if (s.region.empty()) throw InvalidInput("empty lean subtree");
    if (!is_connected(t, s.region)) throw InvalidInput("lean subtree is not connected");
    auto bd = vertex_boundary(t, s.region);
    if (s.kind == PartKind::Branch) {
        if (!is_closed(t, s.region)) throw InvalidInput("branch is not closed");
        if (bd.size() > 1) throw InvalidInput("branch has more than one boundary vertex");
        if (bd.size() == 1 && bd[0] != s.root) throw InvalidInput("branch boundary is not its root");
    } else {
        if (!is_closed(t, complement(t, s.region))) throw InvalidInput("section complement is not closed");
        if (bd != s.boundary()) throw InvalidInput("section boundary does not match its ends");
    }
}

std::vector<LeanSubtree> trisect_branch(const InteractionTree& t, const LeanSubtree& b) {
    if (b.kind != PartKind::Branch) throw InvalidInput("trisect_branch needs a branch");
    const int nb = b.num_vertices();
    if (nb == 0 || !b.region.has_vertex(b.root)) throw InvalidInput("malformed branch");
    if (nb == 1) return {b};

    // parent pointers and subtree sizes inside the branch, rooted at its root
    std::vector<int> parent(t.n(), -2), order{b.root};
    parent[b.root] = -1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        int x = order[i];
        for (auto [y, e] : t.adj(x))
            if (parent[y] == -2 && b.region.has_edge(e)) {
                parent[y] = x;
                order.push_back(y);
            }
    }
    if (static_cast<int>(order.size()) != nb) throw InvalidInput("malformed branch");
    std::vector<int> sz(t.n(), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        sz[*it] += 1;
        if (parent[*it] >= 0) sz[parent[*it]] += sz[*it];
    }

    std::vector<int> xs{b.root};
    while (2 * sz[xs.back()] > nb) {
        int x = xs.back(), best = -1;
        for (auto [y, e] : t.adj(x)) // neighbours ascending, so ties go to the lowest id
            if (parent[y] == x && (best < 0 || sz[y] > sz[best])) best = y;
        xs.push_back(best);
    }
    const int j = static_cast<int>(xs.size()) - 1;
    auto left_ee = b.ee;
    left_ee.emplace_back(xs[1], b.root);
    return {make_branch(t, b.root, std::move(left_ee)), make_section(t, b.root, xs[j]),
            make_branch(t, xs[j], {{xs[j - 1], xs[j]}})};
}

std::vector<LeanSubtree> trisect_section(const InteractionTree& t, const LeanSubtree& s) {
    if (s.kind != PartKind::Section) throw InvalidInput("trisect_section needs a section");
    auto p = t.path(s.xl, s.xr);
    const int dist = static_cast<int>(p.size()) - 1;
    if (dist < 2) throw PreconditionError("a single-edge section cannot be trisected");
    std::vector<LeanSubtree> hang(dist);
    std::vector<long> w(dist + 1, 0);
    for (int j = 1; j < dist; ++j) {
        hang[j] = make_branch(t, p[j], {{p[j - 1], p[j]}, {p[j + 1], p[j]}});
        w[j] = hang[j].num_vertices();
    }
    long total = 0;
    for (int j = 1; j < dist; ++j) total += w[j];
    int mu = 1;
    long before = 0;
    for (int j = 1; j < dist; ++j) {
        if (before <= total - before) mu = j;
        before += w[j];
    }
    // the right part starts at x_mu so that the three parts cover the section
    return {make_section(t, p[0], p[mu]), std::move(hang[mu]), make_section(t, p[mu], p[dist])};
}

std::vector<LeanSubtree> refine(const InteractionTree& t, const LeanSubtree& s) {
    if (s.is_singleton()) return {s};
    if (s.kind == PartKind::Branch) return trisect_branch(t, s);
    auto tri = trisect_section(t, s);
    std::vector<LeanSubtree> out{tri[0]};
    for (auto& part : trisect_branch(t, tri[1])) out.push_back(std::move(part));
    out.push_back(std::move(tri[2]));
    return out;
}

std::vector<int> spine(const InteractionTree& t, const LeanSubtree& s) {
    if (s.kind != PartKind::Section) throw InvalidInput("only sections have a spine");
    return t.path(s.xl, s.xr);
}

MetaTree::MetaTree(const InteractionTree& t, bool duplicate_singletons) : tree_hash_(t.hash()) {
    if (t.n() < 1) throw InvalidInput("empty tree");
    nodes_.push_back({0, whole_tree_branch(t), -1, {}});
    std::vector<int> frontier{0};
    for (int lvl = 0;; ++lvl) {
        bool done = true;
        for (int v : frontier)
            if (!nodes_[v].part.is_singleton()) done = false;
        if (done) {
            depth_ = lvl;
            break;
        }
        std::vector<int> next;
        for (int v : frontier) {
            if (nodes_[v].part.is_singleton() && !duplicate_singletons) continue;
            for (auto& part : refine(t, nodes_[v].part)) {
                int id = static_cast<int>(nodes_.size());
                nodes_.push_back({lvl + 1, std::move(part), v, {}});
                nodes_[v].children.push_back(id);
                next.push_back(id);
            }
        }
        frontier = std::move(next);
    }
    leaf_vertex_.assign(t.n(), -1);
    leaf_edge_.assign(t.num_edges(), -1);
    for (int v = 0; v < size(); ++v) {
        if (!is_leaf(v)) continue;
        const auto& r = nodes_[v].part.region;
        if (r.vertices.size() == 1)
            leaf_vertex_[r.vertices[0]] = v;
        else
            leaf_edge_[r.edges.at(0)] = v;
    }
}

std::vector<int> MetaTree::level(int l) const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (nodes_[v].level == l) out.push_back(v);
    return out;
}

std::vector<int> MetaTree::postorder() const {
    // ids are assigned level by level, so reversing puts children first
    std::vector<int> out(size());
    for (int i = 0; i < size(); ++i) out[i] = size() - 1 - i;
    return out;
}

nlohmann::json MetaTree::to_json() const {
    nlohmann::json j;
    j["tree_hash"] = std::to_string(tree_hash_);
    j["depth"] = depth_;
    auto& arr = j["nodes"] = nlohmann::json::array();
    for (const auto& m : nodes_) {
        nlohmann::json o;
        o["level"] = m.level;
        o["kind"] = m.part.kind == PartKind::Branch ? "branch" : "section";
        o["vertices"] = m.part.region.vertices;
        o["edges"] = m.part.region.edges;
        o["parent"] = m.parent;
        o["children"] = m.children;
        o["boundary"] = m.part.boundary();
        arr.push_back(std::move(o));
    }
    return j;
}

double meta_depth_bound(const InteractionTree& t) {
    const double d = t.d();
    return std::log(static_cast<double>(t.n())) / std::log(4 * d / (4 * d - 1));
}

} // namespace metags
