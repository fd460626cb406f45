#include "metags/tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace metags {

InteractionTree::InteractionTree(int n, std::vector<Edge> edges, int degree_bound, int local_dim)
    : n_(n), degree_bound_(degree_bound), local_dim_(local_dim), edges_(std::move(edges)) {
    if (n < 1) throw InvalidInput("tree needs at least one vertex");
    if (local_dim < 2) throw InvalidInput("local dimension must be >= 2");
    if (degree_bound < 2) throw InvalidInput("degree bound must be >= 2");
    if (static_cast<int>(edges_.size()) != n - 1)
        throw InvalidInput("tree must have n-1 edges");
    adj_.assign(n, {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        auto& ed = edges_[e];
        if (ed.u == ed.v || ed.u < 0 || ed.v < 0 || ed.u >= n || ed.v >= n)
            throw InvalidInput("bad edge endpoints");
        if (ed.u > ed.v) std::swap(ed.u, ed.v);
        adj_[ed.u].push_back({ed.v, e});
        adj_[ed.v].push_back({ed.u, e});
    }
    for (auto& a : adj_) {
        std::sort(a.begin(), a.end());
        if (static_cast<int>(a.size()) > degree_bound)
            throw InvalidInput("vertex degree exceeds degree bound");
        for (std::size_t i = 1; i < a.size(); ++i)
            if (a[i].first == a[i - 1].first) throw InvalidInput("duplicate edge");
    }
    auto dist = distances({0});
    for (int d : dist)
        if (d < 0) throw InvalidInput("tree is not connected");
}

int InteractionTree::max_degree() const {
    int m = 0;
    for (const auto& a : adj_) m = std::max<int>(m, a.size());
    return m;
}

int InteractionTree::edge_id(int u, int v) const {
    for (auto [w, e] : adj_.at(u))
        if (w == v) return e;
    return -1;
}

std::vector<int> InteractionTree::distances(const std::vector<int>& sources) const {
    std::vector<int> dist(n_, -1);
    std::deque<int> q;
    for (int s : sources) {
        if (s < 0 || s >= n_) throw InvalidInput("unknown vertex id " + std::to_string(s));
        if (dist[s] < 0) {
            dist[s] = 0;
            q.push_back(s);
        }
    }
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (auto [y, e] : adj_[x])
            if (dist[y] < 0) {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
    }
    return dist;
}

std::vector<int> InteractionTree::path(int from, int to) const {
    auto dist = distances({to});
    std::vector<int> p{from};
    int x = from;
    while (x != to) {
        for (auto [y, e] : adj_[x])
            if (dist[y] == dist[x] - 1) {
                x = y;
                break;
            }
        p.push_back(x);
    }
    return p;
}

int InteractionTree::diameter() const {
    auto d0 = distances({0});
    int far = static_cast<int>(std::max_element(d0.begin(), d0.end()) - d0.begin());
    auto d1 = distances({far});
    return *std::max_element(d1.begin(), d1.end());
}

std::uint64_t InteractionTree::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(n_);
    mix(local_dim_);
    mix(degree_bound_);
    for (const auto& e : edges_) {
        mix(e.u);
        mix(e.v);
    }
    return h;
}

bool Region::has_vertex(int v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }
bool Region::has_edge(int e) const { return std::binary_search(edges.begin(), edges.end(), e); }

void Region::normalize() {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

void check_region(const InteractionTree& t, const Region& r) {
    for (int v : r.vertices)
        if (v < 0 || v >= t.n()) throw InvalidInput("region vertex outside tree");
    for (int e : r.edges)
        if (e < 0 || e >= t.num_edges()) throw InvalidInput("region edge outside tree");
}

Region whole_tree(const InteractionTree& t) {
    Region r;
    r.vertices.resize(t.n());
    std::iota(r.vertices.begin(), r.vertices.end(), 0);
    r.edges.resize(t.num_edges());
    std::iota(r.edges.begin(), r.edges.end(), 0);
    return r;
}

std::vector<int> internal_edges(const InteractionTree& t, const std::vector<int>& vertices) {
    std::vector<char> in(t.n(), 0);
    for (int v : vertices) in.at(v) = 1;
    std::vector<int> out;
    for (int e = 0; e < t.num_edges(); ++e)
        if (in[t.edge(e).u] && in[t.edge(e).v]) out.push_back(e);
    return out;
}

Region vertex_region(const InteractionTree& t, std::vector<int> vertices) {
    Region r;
    r.vertices = std::move(vertices);
    r.normalize();
    r.edges = internal_edges(t, r.vertices);
    return r;
}

Region closure(const InteractionTree& t, const Region& r) {
    check_region(t, r);
    Region c = r;
    for (int e : r.edges) {
        c.vertices.push_back(t.edge(e).u);
        c.vertices.push_back(t.edge(e).v);
    }
    c.normalize();
    return c;
}

Region complement(const InteractionTree& t, const Region& r) {
    check_region(t, r);
    Region c;
    std::vector<char> mv(t.n(), 0), me(t.num_edges(), 0);
    for (int v : r.vertices) mv[v] = 1;
    for (int e : r.edges) me[e] = 1;
    for (int v = 0; v < t.n(); ++v)
        if (!mv[v]) c.vertices.push_back(v);
    for (int e = 0; e < t.num_edges(); ++e)
        if (!me[e]) c.edges.push_back(e);
    return c;
}

// A vertex touches a set if it belongs to it or ends one of its edges.
std::vector<int> vertex_boundary(const InteractionTree& t, const Region& r) {
    check_region(t, r);
    std::vector<char> mv(t.n(), 0), me(t.num_edges(), 0);
    for (int v : r.vertices) mv[v] = 1;
    for (int e : r.edges) me[e] = 1;
    std::vector<int> out;
    for (int x = 0; x < t.n(); ++x) {
        bool in = mv[x], out_ = !mv[x];
        for (auto [y, e] : t.adj(x)) {
            if (me[e]) in = true;
            else out_ = true;
        }
        if (in && out_) out.push_back(x);
    }
    return out;
}

std::vector<int> edge_boundary(const InteractionTree& t, const Region& r) {
    check_region(t, r);
    std::vector<char> mv(t.n(), 0);
    for (int v : r.vertices) mv[v] = 1;
    std::vector<int> out;
    for (int e = 0; e < t.num_edges(); ++e)
        if (mv[t.edge(e).u] != mv[t.edge(e).v]) out.push_back(e);
    return out;
}

Region pad(const InteractionTree& t, const Region& r, int radius) {
    check_region(t, r);
    if (radius < 0) throw InvalidInput("negative padding radius");
    std::vector<int> src = r.vertices;
    if (src.empty()) src = closure(t, r).vertices;
    if (src.empty()) return r;
    auto dist = t.distances(src);
    std::vector<int> vs;
    for (int v = 0; v < t.n(); ++v)
        if (dist[v] <= radius) vs.push_back(v);
    return vertex_region(t, vs);
}

std::vector<Region> components(const InteractionTree& t, const Region& r) {
    check_region(t, r);
    // union-find over elements: vertices 0..n-1, edges n..
    const int n = t.n();
    std::vector<int> parent(n + t.num_edges());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    std::vector<char> mv(n, 0);
    for (int v : r.vertices) mv[v] = 1;
    for (int e : r.edges) {
        if (mv[t.edge(e).u]) unite(n + e, t.edge(e).u);
        if (mv[t.edge(e).v]) unite(n + e, t.edge(e).v);
    }
    std::unordered_map<int, Region> by_root;
    std::vector<int> order;
    auto add = [&](int elem, bool is_vertex, int id) {
        int root = find(elem);
        auto [it, fresh] = by_root.try_emplace(root);
        if (fresh) order.push_back(root);
        (is_vertex ? it->second.vertices : it->second.edges).push_back(id);
    };
    for (int v : r.vertices) add(v, true, v);
    for (int e : r.edges) add(n + e, false, e);
    std::vector<Region> out;
    for (int root : order) {
        auto reg = by_root[root];
        reg.normalize();
        out.push_back(std::move(reg));
    }
    return out;
}

bool is_closed(const InteractionTree& t, const Region& r) { return closure(t, r) == r; }

bool is_connected(const InteractionTree& t, const Region& r) { return components(t, r).size() <= 1; }

std::vector<int> ball(const InteractionTree& t, int x, int r) {
    if (r < 0) throw InvalidInput("negative radius");
    auto dist = t.distances({x});
    std::vector<int> out;
    for (int v = 0; v < t.n(); ++v)
        if (dist[v] <= r) out.push_back(v);
    return out;
}

FractalDimension fractal_dimension(const InteractionTree& t, double C) {
    if (C < 2.0) throw InvalidInput("fractal dimension constant C must be >= 2");
    FractalDimension fd;
    if (t.n() < 3) {
        fd.sentinel = true;
        return fd;
    }
    const int diam = t.diameter();
    fd.beta = -1.0;
    std::vector<int> count;
    for (int x = 0; x < t.n(); ++x) {
        auto dist = t.distances({x});
        count.assign(diam + 1, 0);
        for (int d : dist) ++count[d];
        int vol = 0;
        for (int r = 0; r <= diam; ++r) {
            vol += count[r];
            if (r < 2) continue;
            double b = std::log(static_cast<double>(vol)) / std::log(C * r);
            if (b > fd.beta + 1e-15) {
                fd.beta = b;
                fd.x = x;
                fd.r = r;
            }
        }
    }
    return fd;
}

InteractionTree gen_path(int n, int local_dim) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return InteractionTree(n, e, 2, local_dim);
}

InteractionTree gen_star(int leaves, int local_dim) {
    std::vector<Edge> e;
    for (int i = 1; i <= leaves; ++i) e.push_back({0, i});
    int db = std::max(2, leaves + (leaves % 2));
    return InteractionTree(leaves + 1, e, db, local_dim);
}

namespace {

std::int64_t pack(const std::array<int, 3>& c) {
    const std::int64_t off = 1 << 20;
    return ((c[0] + off) << 42) | ((c[1] + off) << 21) | (c[2] + off);
}

InteractionTree lattice_tree(const std::vector<std::array<int, 3>>& pts, int local_dim, bool all_adjacent,
                             const std::vector<Edge>& given) {
    std::vector<Edge> edges = given;
    if (all_adjacent) {
        std::unordered_map<std::int64_t, int> idx;
        for (int i = 0; i < static_cast<int>(pts.size()); ++i) idx[pack(pts[i])] = i;
        for (int i = 0; i < static_cast<int>(pts.size()); ++i)
            for (int a = 0; a < 3; ++a) {
                auto c = pts[i];
                ++c[a];
                auto it = idx.find(pack(c));
                if (it != idx.end()) edges.push_back({i, it->second});
            }
    }
    std::vector<int> deg(pts.size(), 0);
    for (auto& e : edges) ++deg[e.u], ++deg[e.v];
    int md = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    InteractionTree t(static_cast<int>(pts.size()), edges, std::max(2, md + (md % 2)), local_dim);
    t.coords = pts;
    return t;
}

} // namespace

InteractionTree gen_vicsek(int order, int local_dim) {
    if (order < 1) throw InvalidInput("Vicsek order must be >= 1");
    if (order > 7) throw BudgetExceeded("Vicsek order too large");
    const std::vector<std::array<int, 3>> v1 = {{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                                {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    auto pts = v1;
    int scale = 1;
    for (int k = 1; k < order; ++k) {
        scale *= 3;
        std::vector<std::array<int, 3>> next;
        for (const auto& a : v1)
            for (const auto& b : pts)
                next.push_back({scale * a[0] + b[0], scale * a[1] + b[1], scale * a[2] + b[2]});
        pts = std::move(next);
    }
    return lattice_tree(pts, local_dim, true, {});
}

InteractionTree gen_ust(const std::vector<int>& dims, std::uint64_t seed, int local_dim) {
    if (dims.empty() || dims.size() > 3) throw InvalidInput("UST needs 1 to 3 lattice dimensions");
    for (int d : dims)
        if (d < 2) throw InvalidInput("UST lattice side must be >= 2");
    std::vector<int> stride(dims.size());
    int n = 1;
    for (std::size_t a = dims.size(); a-- > 0;) {
        stride[a] = n;
        n *= dims[a];
    }
    auto coord = [&](int v) {
        std::array<int, 3> c{0, 0, 0};
        for (std::size_t a = 0; a < dims.size(); ++a) c[a] = (v / stride[a]) % dims[a];
        return c;
    };
    std::mt19937_64 rng(seed);
    std::vector<int> nbr;
    auto random_neighbour = [&](int v) {
        nbr.clear();
        auto c = coord(v);
        for (std::size_t a = 0; a < dims.size(); ++a) {
            if (c[a] > 0) nbr.push_back(v - stride[a]);
            if (c[a] + 1 < dims[a]) nbr.push_back(v + stride[a]);
        }
        return nbr[std::uniform_int_distribution<int>(0, static_cast<int>(nbr.size()) - 1)(rng)];
    };
    // Wilson: loop-erased walks recorded through successor pointers
    std::vector<char> in_tree(n, 0);
    std::vector<int> next(n, -1);
    in_tree[0] = 1;
    std::vector<Edge> edges;
    for (int s = 0; s < n; ++s) {
        int u = s;
        while (!in_tree[u]) {
            next[u] = random_neighbour(u);
            u = next[u];
        }
        u = s;
        while (!in_tree[u]) {
            in_tree[u] = 1;
            edges.push_back({u, next[u]});
            u = next[u];
        }
    }
    std::vector<std::array<int, 3>> pts(n);
    for (int v = 0; v < n; ++v) pts[v] = coord(v);
    return lattice_tree(pts, local_dim, false, edges);
}

InteractionTree gen_dla(int n, std::uint64_t seed, int local_dim) {
    if (n < 1) throw InvalidInput("DLA needs at least one particle");
    std::mt19937_64 rng(seed);
    std::unordered_map<std::int64_t, int> occupied;
    std::vector<std::array<int, 3>> pts{{0, 0, 0}};
    std::vector<Edge> edges;
    occupied[pack(pts[0])] = 0;
    double radius = 0.0;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    std::uniform_int_distribution<int> step(0, 3);
    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    while (static_cast<int>(pts.size()) < n) {
        const double launch = radius + 2.0;
        const double kill = 3.0 * launch;
        double th = angle(rng);
        int x = static_cast<int>(std::lround(launch * std::cos(th)));
        int y = static_cast<int>(std::lround(launch * std::sin(th)));
        for (;;) {
            std::vector<int> stuck;
            for (int k = 0; k < 4; ++k) {
                auto it = occupied.find(pack({x + dx[k], y + dy[k], 0}));
                if (it != occupied.end()) stuck.push_back(it->second);
            }
            if (!stuck.empty() && !occupied.count(pack({x, y, 0}))) {
                int host = stuck[std::uniform_int_distribution<int>(0, static_cast<int>(stuck.size()) - 1)(rng)];
                int id = static_cast<int>(pts.size());
                pts.push_back({x, y, 0});
                occupied[pack({x, y, 0})] = id;
                edges.push_back({host, id});
                radius = std::max(radius, std::hypot(static_cast<double>(x), static_cast<double>(y)));
                break;
            }
            if (std::hypot(static_cast<double>(x), static_cast<double>(y)) > kill) break;
            int k = step(rng);
            x += dx[k];
            y += dy[k];
        }
    }
    return lattice_tree(pts, local_dim, false, edges);
}

InteractionTree gen_random_tree(int n, int max_degree, std::uint64_t seed, int local_dim) {
    if (n < 1) throw InvalidInput("random tree needs n >= 1");
    if (max_degree < 2 && n > 2) throw InvalidInput("max degree < 2 only admits n <= 2");
    std::mt19937_64 rng(seed);
    std::vector<int> deg(n, 0);
    std::vector<Edge> edges;
    std::vector<int> open{0};
    for (int v = 1; v < n; ++v) {
        int i = std::uniform_int_distribution<int>(0, static_cast<int>(open.size()) - 1)(rng);
        int p = open[i];
        edges.push_back({p, v});
        if (++deg[p] == max_degree) {
            open[i] = open.back();
            open.pop_back();
        }
        if (++deg[v] < max_degree) open.push_back(v);
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& e : edges) e = {perm[e.u], perm[e.v]};
    int db = std::max(2, max_degree + (max_degree % 2));
    return InteractionTree(n, edges, db, local_dim);
}

InteractionTree tree_from_pruefer(const std::vector<int>& seq, int local_dim) {
    const int n = static_cast<int>(seq.size()) + 2;
    std::vector<int> deg(n, 1);
    for (int x : seq) {
        if (x < 0 || x >= n) throw InvalidInput("bad Pruefer entry");
        ++deg[x];
    }
    std::vector<Edge> edges;
    for (int x : seq) {
        int leaf = 0;
        while (deg[leaf] != 1) ++leaf;
        edges.push_back({leaf, x});
        --deg[leaf];
        --deg[x];
    }
    int a = -1, b = -1;
    for (int v = 0; v < n; ++v)
        if (deg[v] == 1) (a < 0 ? a : b) = v;
    edges.push_back({a, b});
    int md = 0;
    std::vector<int> dd(n, 0);
    for (auto& e : edges) md = std::max({md, ++dd[e.u], ++dd[e.v]});
    return InteractionTree(n, edges, std::max(2, md + (md % 2)), local_dim);
}

InteractionTree induced_subtree(const InteractionTree& t, const std::vector<int>& vertices) {
    auto vs = vertices;
    std::sort(vs.begin(), vs.end());
    std::vector<int> idx(t.n(), -1);
    for (int i = 0; i < static_cast<int>(vs.size()); ++i) idx[vs[i]] = i;
    std::vector<Edge> edges;
    for (int e : internal_edges(t, vs)) edges.push_back({idx[t.edge(e).u], idx[t.edge(e).v]});
    int md = 0;
    std::vector<int> dd(vs.size(), 0);
    for (auto& e : edges) md = std::max({md, ++dd[e.u], ++dd[e.v]});
    InteractionTree s(static_cast<int>(vs.size()), edges, std::max({2, md + (md % 2)}), t.local_dim());
    if (!t.coords.empty())
        for (int v : vs) s.coords.push_back(t.coords[v]);
    return s;
}

std::vector<int> grow_fragment(const InteractionTree& t, int start, int n, std::uint64_t seed) {
    if (n > t.n()) throw InvalidInput("fragment larger than tree");
    std::mt19937_64 rng(seed);
    std::vector<char> in(t.n(), 0);
    std::vector<int> frag{start}, frontier;
    in[start] = 1;
    for (auto [y, e] : t.adj(start)) frontier.push_back(y);
    while (static_cast<int>(frag.size()) < n) {
        int i = std::uniform_int_distribution<int>(0, static_cast<int>(frontier.size()) - 1)(rng);
        int v = frontier[i];
        frontier[i] = frontier.back();
        frontier.pop_back();
        if (in[v]) continue;
        in[v] = 1;
        frag.push_back(v);
        for (auto [y, e] : t.adj(v))
            if (!in[y]) frontier.push_back(y);
    }
    std::sort(frag.begin(), frag.end());
    return frag;
}

std::string BallGrowthProfile::csv() const {
    std::ostringstream os;
    os << "vertex,r,volume\n";
    for (const auto& r : rows) os << r.vertex << ',' << r.r << ',' << r.volume << '\n';
    return os.str();
}

// Rows cover every radius up to each probe's eccentricity. The slope fits log(mean volume)
// against log(2r+1) on log-spaced radii until the mean ball holds half the tree.
BallGrowthProfile ball_growth_profile(const InteractionTree& t, int probes, std::uint64_t seed) {
    if (probes < 1 || probes > t.n()) throw InvalidInput("probe count must be in [1, n]");
    const int n = t.n();
    // eccentricities from the two ends of a diameter
    auto d0 = t.distances({0});
    int a = static_cast<int>(std::max_element(d0.begin(), d0.end()) - d0.begin());
    auto da = t.distances({a});
    int b = static_cast<int>(std::max_element(da.begin(), da.end()) - da.begin());
    auto db = t.distances({b});
    std::vector<int> ecc(n);
    for (int v = 0; v < n; ++v) ecc[v] = std::max(da[v], db[v]);

    // the most central vertices, ties broken at random; peripheral probes saturate early and drag the slope down
    std::mt19937_64 rng(seed);
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::stable_sort(ids.begin(), ids.end(), [&](int x, int y) { return ecc[x] < ecc[y]; });
    ids.resize(probes);
    std::sort(ids.begin(), ids.end());

    BallGrowthProfile prof;
    const int rcap = *std::min_element(ecc.begin(), ecc.end()) * 2; // every probe has ecc <= 2 * radius
    std::vector<double> sum(rcap + 1, 0.0);
    for (int x : ids) {
        auto dist = t.distances({x});
        std::vector<int> c(ecc[x] + 1, 0);
        for (int d : dist) ++c[d];
        int vol = 0;
        for (int r = 0; r <= rcap; ++r) {
            if (r <= ecc[x]) {
                vol += c[r];
                prof.rows.push_back({x, r, vol});
            }
            sum[r] += vol;
        }
    }

    // log-spaced radii so each scale gets equal weight; linear size of a ball is 2r+1
    std::vector<double> lx, ly;
    int last = -1;
    for (double rr = 1.0; rr <= rcap; rr *= 1.2) {
        int r = static_cast<int>(std::lround(rr));
        if (r == last) continue;
        last = r;
        double mean = sum[r] / probes;
        if (mean > 0.5 * n) break;
        lx.push_back(std::log(2.0 * r + 1.0));
        ly.push_back(std::log(mean));
        if (prof.fit_rmin == 0) prof.fit_rmin = r;
        prof.fit_rmax = r;
    }
    if (lx.size() >= 2) {
        double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
        double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        prof.slope = sxy / sxx;
    }
    return prof;
}

nlohmann::json to_json(const InteractionTree& t) {
    nlohmann::json j;
    j["n"] = t.n();
    j["degree_bound"] = t.degree_bound();
    j["local_dim"] = t.local_dim();
    auto& ed = j["edges"] = nlohmann::json::array();
    for (const auto& e : t.edges()) ed.push_back({e.u, e.v});
    if (!t.coords.empty()) {
        auto& c = j["coords"] = nlohmann::json::array();
        for (const auto& p : t.coords) c.push_back({p[0], p[1], p[2]});
    }
    return j;
}

InteractionTree tree_from_json(const nlohmann::json& j) {
    try {
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
        InteractionTree t(j.at("n").get<int>(), edges, j.at("degree_bound").get<int>(), j.at("local_dim").get<int>());
        if (j.contains("coords")) {
            for (const auto& c : j["coords"]) {
                std::array<int, 3> p{0, 0, 0};
                for (std::size_t a = 0; a < c.size() && a < 3; ++a) p[a] = c[a].get<int>();
                t.coords.push_back(p);
            }
            if (static_cast<int>(t.coords.size()) != t.n()) throw InvalidInput("coords length differs from n");
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("tree json: ") + e.what());
    }
}

} // namespace metags
