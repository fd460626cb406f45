#include "metags/cluster_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

namespace metags {

namespace {

// P M P^dag for the site permutation of permute_sites
Mat permute_op(const Mat& M, int q, const std::vector<int>& perm) {
    return permute_sites(permute_sites(M, q, perm).adjoint(), q, perm).adjoint();
}

// A on sites sa (ascending) times B on sites sb (ascending, disjoint), on the sorted union
Mat op_on(const Mat& A, const std::vector<int>& sa, const Mat& B, const std::vector<int>& sb, int q,
          std::vector<int>* merged = nullptr) {
    std::vector<int> cat(sa);
    cat.insert(cat.end(), sb.begin(), sb.end());
    std::vector<int> sorted(cat);
    std::sort(sorted.begin(), sorted.end());
    Mat K = kron(A, B);
    if (merged) *merged = sorted;
    if (sorted == cat) return K;
    std::vector<int> perm(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        perm[i] = static_cast<int>(std::find(cat.begin(), cat.end(), sorted[i]) - cat.begin());
    return permute_op(K, q, perm);
}

std::vector<int> positions(const std::vector<int>& sub, const std::vector<int>& all) {
    std::vector<int> p;
    for (int x : sub) {
        auto it = std::lower_bound(all.begin(), all.end(), x);
        if (it == all.end() || *it != x) throw InvalidInput("vertex outside the register");
        p.push_back(static_cast<int>(it - all.begin()));
    }
    return p;
}

using Key = std::pair<std::vector<int>, std::vector<int>>;
Key key_of(const Region& r) { return {r.vertices, r.edges}; }

// connected components of an edge set, each as a closed tree
std::vector<Region> edge_components(const InteractionTree& t, const std::vector<int>& edges) {
    std::vector<int> parent(t.n());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int e : edges) parent[find(t.edge(e).u)] = find(t.edge(e).v);
    std::map<int, Region> comp;
    for (int e : edges) {
        auto& r = comp[find(t.edge(e).u)];
        r.edges.push_back(e);
        r.vertices.push_back(t.edge(e).u);
        r.vertices.push_back(t.edge(e).v);
    }
    std::vector<Region> out;
    for (auto& [root, r] : comp) {
        r.normalize();
        out.push_back(std::move(r));
    }
    return out;
}

struct GPlusCache {
    const LocalHamiltonian& h;
    double t;
    std::map<Key, Mat> cache;
    const Mat& get(const Region& tree) {
        auto k = key_of(tree);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
        return cache.emplace(k, g_plus(h, tree, t)).first->second;
    }
};

} // namespace

int mass(const Histogram& h) {
    int m = 0;
    for (auto [e, c] : h) {
        if (c < 0) throw InvalidInput("negative multiplicity");
        m += c;
    }
    return m;
}

Region support_closure(const InteractionTree& t, const Histogram& h) {
    Region r;
    for (auto [e, c] : h)
        if (c > 0) r.edges.push_back(e);
    r.normalize();
    return closure(t, r);
}

std::vector<Region> enumerate_l_trees(const InteractionTree& t, int x, int L) {
    return enumerate_l_trees(t, x, L, std::vector<char>(t.n(), 1), std::vector<char>(t.num_edges(), 1));
}

std::vector<Region> enumerate_l_trees(const InteractionTree& t, int x, int L, const std::vector<char>& vmask,
                                      const std::vector<char>& emask) {
    if (x < 0 || x >= t.n()) throw InvalidInput("anchor vertex out of range");
    if (L < 0) throw InvalidInput("cluster size must be >= 0");
    if (!vmask.at(x)) return {};
    std::vector<Region> out;
    Region seed;
    seed.vertices = {x};
    out.push_back(seed);
    std::vector<Region> layer{seed};
    for (int l = 1; l <= L && !layer.empty(); ++l) {
        std::set<std::vector<int>> seen;
        std::vector<Region> next;
        for (const auto& r : layer)
            for (int u : r.vertices)
                for (auto [y, e] : t.adj(u)) {
                    if (!emask[e] || !vmask[y] || r.has_vertex(y)) continue;
                    Region g = r;
                    g.vertices.push_back(y);
                    g.edges.push_back(e);
                    g.normalize();
                    if (seen.insert(g.edges).second) next.push_back(std::move(g));
                }
        std::sort(next.begin(), next.end(), [](const Region& a, const Region& b) { return a.edges < b.edges; });
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

Mat exp_edges(const LocalHamiltonian& h, const std::vector<int>& vertices, const std::vector<int>& edges, double t) {
    const auto dim = static_cast<Eigen::Index>(ipow(h.q(), static_cast<int>(vertices.size())));
    if (dim > kDenseBudget) throw BudgetExceeded("register too large for a dense exponential");
    if (edges.empty() || t == 0.0) return Mat::Identity(dim, dim);
    auto e = eigh(assemble_dense(h, vertices, edges));
    return apply_function(e, [t](double x) { return std::exp(-t * x); });
}

Mat g_term(const LocalHamiltonian& h, const Histogram& hist, double t, const std::vector<int>& vertices) {
    const int q = h.q();
    const auto dim = static_cast<Eigen::Index>(ipow(q, static_cast<int>(vertices.size())));
    if (dim > kDenseBudget) throw BudgetExceeded("register too large for a dense cluster term");
    std::vector<int> es;
    std::vector<int> top;
    for (auto [e, c] : hist)
        if (c > 0) {
            es.push_back(e);
            top.push_back(c);
        }
    const int total = mass(hist);
    if (es.empty()) return Mat::Identity(dim, dim);
    std::vector<Mat> He;
    for (int e : es) He.push_back(assemble_dense(h, vertices, {e}));
    // S(h) = sum_e H_e S(h - delta_e), indexed in mixed radix over (top_e + 1)
    std::vector<long> radix(es.size());
    long count = 1;
    for (std::size_t i = 0; i < es.size(); ++i) {
        radix[i] = count;
        count *= top[i] + 1;
    }
    if (count > 200000) throw BudgetExceeded("histogram too large");
    std::vector<Mat> S(count);
    S[0] = Mat::Identity(dim, dim);
    std::vector<int> digit(es.size(), 0);
    for (long idx = 1; idx < count; ++idx) {
        long rem = idx;
        for (int i = static_cast<int>(es.size()) - 1; i >= 0; --i) {
            digit[i] = static_cast<int>(rem / radix[i]);
            rem %= radix[i];
        }
        Mat acc = Mat::Zero(dim, dim);
        for (std::size_t i = 0; i < es.size(); ++i)
            if (digit[i] > 0) acc.noalias() += He[i] * S[idx - radix[i]];
        S[idx] = std::move(acc);
    }
    double scale = 1.0;
    for (int j = 1; j <= total; ++j) scale *= -t / j;
    return scale * S[count - 1];
}

Mat g_term(const LocalHamiltonian& h, const Histogram& hist, double t) {
    return g_term(h, hist, t, support_closure(h.tree(), hist).vertices);
}

Mat g_plus(const LocalHamiltonian& h, const Region& forest, double t) {
    const auto& es = forest.edges;
    if (es.size() > 20) throw BudgetExceeded("forest too large for inclusion-exclusion");
    const auto dim = static_cast<Eigen::Index>(ipow(h.q(), static_cast<int>(forest.vertices.size())));
    Mat out = Mat::Zero(dim, dim);
    const unsigned long subsets = 1UL << es.size();
    for (unsigned long s = 0; s < subsets; ++s) {
        std::vector<int> sub;
        for (std::size_t i = 0; i < es.size(); ++i)
            if (s >> i & 1UL) sub.push_back(es[i]);
        const double sign = (es.size() - sub.size()) % 2 ? -1.0 : 1.0;
        out += sign * exp_edges(h, forest.vertices, sub, t);
    }
    return out;
}

Mat trexp_direct(const LocalHamiltonian& h, const Region& region, double t, int L) {
    const auto& tr = h.tree();
    if (!is_closed(tr, region)) throw InvalidInput("truncated cluster expansion needs a closed region");
    if (L < 0) throw InvalidInput("cluster size must be >= 0");
    const int q = h.q();
    const auto& V = region.vertices;
    const auto dim = static_cast<Eigen::Index>(ipow(q, static_cast<int>(V.size())));
    if (dim > kDenseBudget || region.edges.size() > 20) throw BudgetExceeded("region too large for the direct oracle");
    GPlusCache cache{h, t, {}};
    Mat out = Mat::Zero(dim, dim);
    const auto& es = region.edges;
    for (unsigned long s = 0; s < (1UL << es.size()); ++s) {
        std::vector<int> sub;
        for (std::size_t i = 0; i < es.size(); ++i)
            if (s >> i & 1UL) sub.push_back(es[i]);
        auto comps = edge_components(tr, sub);
        bool ok = true;
        for (const auto& c : comps) ok = ok && static_cast<int>(c.edges.size()) <= L;
        if (!ok) continue;
        Mat op = Mat::Ones(1, 1);
        std::vector<int> sites;
        for (const auto& c : comps) {
            std::vector<int> merged;
            op = op_on(op, sites, cache.get(c), c.vertices, q, &merged);
            sites = merged;
        }
        out += embed_operator(op, q, static_cast<int>(V.size()), positions(sites, V));
    }
    return out;
}

Mat trexp(const LocalHamiltonian& h, const std::vector<int>& vertices_in, double t, int L) {
    const auto& tr = h.tree();
    if (L < 0) throw InvalidInput("cluster size must be >= 0");
    std::vector<int> vertices(vertices_in);
    std::sort(vertices.begin(), vertices.end());
    const int q = h.q();
    if (static_cast<Eigen::Index>(ipow(q, static_cast<int>(vertices.size()))) > kDenseBudget)
        throw BudgetExceeded("region too large for a dense cluster expansion");
    GPlusCache cache{h, t, {}};
    std::map<std::vector<int>, Mat> memo;
    std::function<Mat(const std::vector<int>&)> rec = [&](const std::vector<int>& V) -> Mat {
        if (V.empty()) return Mat::Ones(1, 1);
        auto it = memo.find(V);
        if (it != memo.end()) return it->second;
        Region ind = vertex_region(tr, V);
        auto comps = components(tr, ind);
        Mat out;
        if (comps.size() > 1) {
            out = Mat::Ones(1, 1);
            std::vector<int> sites;
            for (const auto& c : comps) {
                std::vector<int> merged;
                out = op_on(out, sites, rec(c.vertices), c.vertices, q, &merged);
                sites = merged;
            }
        } else {
            const int x = V[0];
            std::vector<char> vmask(tr.n(), 0);
            for (int v : V) vmask[v] = 1;
            std::vector<int> rest(V.begin() + 1, V.end());
            out = op_on(Mat::Identity(q, q), {x}, rec(rest), rest, q);
            for (const auto& tau : enumerate_l_trees(tr, x, L, vmask, std::vector<char>(tr.num_edges(), 1))) {
                if (tau.edges.empty()) continue;
                std::vector<int> r;
                std::set_difference(V.begin(), V.end(), tau.vertices.begin(), tau.vertices.end(), std::back_inserter(r));
                out += op_on(cache.get(tau), tau.vertices, rec(r), r, q);
            }
        }
        return memo.emplace(V, std::move(out)).first->second;
    };
    return rec(vertices);
}

double homomorphism_residual(const LocalHamiltonian& h, const Histogram& h1, const Histogram& h2, double t) {
    Histogram sum = h1;
    for (auto [e, c] : h2) sum[e] += c;
    auto reg = support_closure(h.tree(), sum).vertices;
    Mat lhs = g_term(h, sum, t, reg);
    Mat rhs = g_term(h, h1, t, reg) * g_term(h, h2, t, reg);
    return op_norm(lhs - rhs);
}

bool homomorphism_check(const LocalHamiltonian& h, const Histogram& h1, const Histogram& h2, double t, double tol) {
    auto c1 = support_closure(h.tree(), h1).vertices, c2 = support_closure(h.tree(), h2).vertices;
    std::vector<int> common;
    std::set_intersection(c1.begin(), c1.end(), c2.begin(), c2.end(), std::back_inserter(common));
    if (!common.empty()) throw PreconditionError("histogram supports have overlapping closures");
    return homomorphism_residual(h, h1, h2, t) <= tol;
}

TceBound tce_error_bound(int n, int d, double t, int L, double E0) {
    if (n < 1 || d < 1 || t < 0 || L < 0) throw InvalidInput("bad cluster-expansion bound parameters");
    TceBound b;
    b.a = tce_a(d, t);
    b.valid = b.a < 1.0;
    b.bound = b.valid ? std::exp(-t * E0) * std::expm1(n * std::pow(b.a, L) / (1.0 - b.a))
                      : std::numeric_limits<double>::infinity();
    return b;
}

// ---------------------------------------------------------------- meta-TNO

namespace {

// forests of disjoint trees (inside the masks, <= L edges each) covering every anchor
void cover(const InteractionTree& t, const std::vector<int>& anchors, int L, const std::vector<char>& vmask,
           const std::vector<char>& emask, std::vector<std::vector<Region>>& out) {
    std::map<int, std::vector<Region>> trees;
    for (int a : anchors) {
        if (!vmask.at(a)) throw std::logic_error("anchor outside the allowed region");
        trees[a] = enumerate_l_trees(t, a, L, vmask, emask);
    }
    std::vector<char> used(t.n(), 0);
    std::vector<Region> chosen;
    std::function<void()> rec = [&]() {
        int a = -1;
        for (int x : anchors)
            if (!used[x]) {
                a = x;
                break;
            }
        if (a < 0) {
            out.push_back(chosen);
            return;
        }
        for (const auto& tau : trees[a]) {
            bool free = std::none_of(tau.vertices.begin(), tau.vertices.end(), [&](int v) { return used[v]; });
            if (!free) continue;
            for (int v : tau.vertices) used[v] = 1;
            chosen.push_back(tau);
            rec();
            chosen.pop_back();
            for (int v : tau.vertices) used[v] = 0;
        }
    };
    rec();
}

Region merge(const std::vector<Region>& parts) {
    Region r;
    for (const auto& p : parts) {
        r.vertices.insert(r.vertices.end(), p.vertices.begin(), p.vertices.end());
        r.edges.insert(r.edges.end(), p.edges.begin(), p.edges.end());
    }
    r.normalize();
    return r;
}

Region restrict_to(const Region& f, const Region& closed_part, const Region& part) {
    Region r;
    for (int v : f.vertices)
        if (std::binary_search(closed_part.vertices.begin(), closed_part.vertices.end(), v)) r.vertices.push_back(v);
    for (int e : f.edges)
        if (std::binary_search(part.edges.begin(), part.edges.end(), e)) r.edges.push_back(e);
    return r;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> c;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
    return c;
}

struct Nz {
    int j1, j2;
    cplx v;
};

} // namespace

TceNetwork build_tce_tno(const LocalHamiltonian& h, std::shared_ptr<const MetaTree> mt, int root, double t, int L) {
    if (L < 0) throw InvalidInput("cluster size must be >= 0");
    const auto& tr = h.tree();
    if (mt->tree_hash() != tr.hash()) throw InvalidInput("META-tree was built for a different tree");
    const int q = h.q();
    MetaBranch shape(mt, root, q);
    TceNetwork net;
    net.tno = MetaTNO(shape);
    net.L = L;
    net.t = t;
    const int M = mt->size();
    net.stitchings.assign(M, {});
    net.offsets.assign(M, {});
    net.deco_vertices.assign(M, {});
    std::vector<Region> clos(M);
    std::vector<std::vector<int>> bdry(M);
    std::vector<std::map<Key, int>> index(M);

    for (int w : shape.members()) {
        const Region& part = mt->subtree(w);
        clos[w] = closure(tr, part);
        bdry[w] = vertex_boundary(tr, part);
        std::vector<Region> blanks;
        if (w == root) {
            // boundary vertices outside the branch are held fixed, so H reduces to the induced edges
            Region r;
            for (int x : bdry[w])
                if (!part.has_vertex(x)) r.vertices.push_back(x);
            blanks.push_back(r);
        } else {
            std::vector<char> vmask(tr.n(), 0), emask(tr.num_edges(), 0);
            for (int v : clos[w].vertices) vmask[v] = 1;
            for (int e : part.edges) emask[e] = 1;
            std::vector<std::vector<Region>> forests;
            cover(tr, bdry[w], L, vmask, emask, forests);
            for (const auto& f : forests) blanks.push_back(merge(f));
        }
        int off = 0;
        for (std::size_t b = 0; b < blanks.size(); ++b) {
            auto dv = intersect(blanks[b].vertices, part.vertices);
            if (!index[w].emplace(key_of(blanks[b]), static_cast<int>(b)).second)
                throw std::logic_error("duplicate boundary stitching");
            net.offsets[w].push_back(off);
            off += static_cast<int>(ipow(q, 2 * static_cast<int>(dv.size())));
            net.deco_vertices[w].push_back(std::move(dv));
        }
        net.stitchings[w] = std::move(blanks);
        net.tno.set_bond(w, off);
    }

    GPlusCache cache{h, t, {}};
    auto nonzeros = [&](const Region& tau) {
        std::vector<Nz> nz;
        if (tau.edges.empty()) {
            for (int a = 0; a < q; ++a) nz.push_back({a, a, 1.0});
            return nz;
        }
        const Mat& G = cache.get(tau);
        for (Eigen::Index a = 0; a < G.rows(); ++a)
            for (Eigen::Index b = 0; b < G.cols(); ++b)
                if (G(a, b) != cplx(0)) nz.push_back({static_cast<int>(a), static_cast<int>(b), G(a, b)});
        return nz;
    };

    std::vector<int> d1(tr.n(), 0), d2(tr.n(), 0);
    auto word = [&](const std::vector<int>& vs, const std::vector<int>& d) {
        int x = 0;
        for (int v : vs) x = x * q + d[v];
        return x;
    };

    for (int w : shape.members()) {
        const Region& part = mt->subtree(w);
        if (mt->is_leaf(w)) {
            if (part.vertices.empty()) continue; // edge leaf: constant 1
            auto& ops = net.tno.leaf_ops(w);
            for (std::size_t b = 0; b < net.stitchings[w].size(); ++b) {
                if (net.deco_vertices[w][b].empty()) {
                    ops.push_back(Mat::Identity(q, q));
                    continue;
                }
                for (int a = 0; a < q; ++a)
                    for (int c = 0; c < q; ++c) {
                        Mat e = Mat::Zero(q, q);
                        e(a, c) = 1;
                        ops.push_back(e);
                    }
            }
            continue;
        }
        const auto& ch = mt->children(w);
        std::vector<int> inner_anchor_set;
        for (int c : ch) inner_anchor_set.insert(inner_anchor_set.end(), bdry[c].begin(), bdry[c].end());
        std::sort(inner_anchor_set.begin(), inner_anchor_set.end());
        inner_anchor_set.erase(std::unique(inner_anchor_set.begin(), inner_anchor_set.end()), inner_anchor_set.end());

        auto& entries = net.tno.entries(w);
        for (std::size_t b = 0; b < net.stitchings[w].size(); ++b) {
            const Region& xi = net.stitchings[w][b];
            // region T^w minus xi and its edge boundary
            std::vector<char> vmask(tr.n(), 0), emask(tr.num_edges(), 0);
            for (int v : part.vertices)
                if (!xi.has_vertex(v)) vmask[v] = 1;
            for (int e : part.edges) emask[e] = 1;
            std::vector<int> anchors;
            for (int x : inner_anchor_set)
                if (!xi.has_vertex(x)) anchors.push_back(x);
            std::vector<std::vector<Region>> inner;
            cover(tr, anchors, L, vmask, emask, inner);
            const auto& dxi = net.deco_vertices[w][b];
            const int m = static_cast<int>(dxi.size());
            const int span = static_cast<int>(ipow(q, m));
            for (const auto& zeta : inner) {
                std::vector<std::vector<Nz>> nz;
                for (const auto& tau : zeta) nz.push_back(nonzeros(tau));
                Region full = merge({xi, merge(zeta)});
                // child stitchings and their decorated vertices
                std::vector<int> cb(ch.size());
                for (std::size_t i = 0; i < ch.size(); ++i) {
                    int c = ch[i];
                    auto it = index[c].find(key_of(restrict_to(full, clos[c], mt->subtree(c))));
                    if (it == index[c].end()) throw std::logic_error("restricted stitching is not a boundary stitching");
                    cb[i] = it->second;
                }
                std::vector<int> j(zeta.size(), 0);
                for (int i1 = 0; i1 < span; ++i1)
                    for (int i2 = 0; i2 < span; ++i2) {
                        for (int s = m - 1, r1 = i1, r2 = i2; s >= 0; --s, r1 /= q, r2 /= q) {
                            d1[dxi[s]] = r1 % q;
                            d2[dxi[s]] = r2 % q;
                        }
                        std::function<void(std::size_t, cplx)> rec = [&](std::size_t k, cplx val) {
                            if (k == zeta.size()) {
                                TnoEntry e;
                                e.parent = net.offsets[w][b] + i1 * span + i2;
                                e.value = val;
                                for (std::size_t i = 0; i < ch.size(); ++i) {
                                    int c = ch[i];
                                    const auto& dv = net.deco_vertices[c][cb[i]];
                                    const int sp = static_cast<int>(ipow(q, static_cast<int>(dv.size())));
                                    e.children.push_back(net.offsets[c][cb[i]] + word(dv, d1) * sp + word(dv, d2));
                                }
                                entries.push_back(std::move(e));
                                return;
                            }
                            const auto& vs = zeta[k].vertices;
                            const int nv = static_cast<int>(vs.size());
                            for (const auto& z : nz[k]) {
                                for (int s = nv - 1, r1 = z.j1, r2 = z.j2; s >= 0; --s, r1 /= q, r2 /= q) {
                                    d1[vs[s]] = r1 % q;
                                    d2[vs[s]] = r2 % q;
                                }
                                rec(k + 1, val * z.v);
                            }
                        };
                        rec(0, 1.0);
                    }
            }
        }
    }
    return net;
}

int stitching_count(const TceNetwork& net, int w) {
    int total = 0;
    const int q = net.tno.shape().q();
    for (const auto& dv : net.deco_vertices.at(w)) total += static_cast<int>(ipow(q, 2 * static_cast<int>(dv.size())));
    return total;
}

Mat efficient_truncate(const LocalHamiltonian& h, const std::vector<int>& vertices_in, double E, double eta, int k,
                       int L) {
    if (!(eta > 0) || k < 1) throw InvalidInput("efficient truncation needs eta > 0 and k >= 1");
    std::vector<int> vertices(vertices_in);
    std::sort(vertices.begin(), vertices.end());
    const auto& tr = h.tree();
    Region ind = vertex_region(tr, vertices);
    bool exact = true;
    for (const auto& c : components(tr, ind)) exact = exact && static_cast<int>(c.edges.size()) <= L;
    if (exact) return soft_truncate(assemble_dense(h, ind), E, eta, k);
    auto c = soft_trunc_coeffs_double(k);
    const auto dim = static_cast<Eigen::Index>(ipow(h.q(), static_cast<int>(vertices.size())));
    Mat out = (E + eta * c[0]) * Mat::Identity(dim, dim);
    for (int j = 1; j <= k; ++j) out += eta * c[j] * std::exp(j * E / eta) * trexp(h, vertices, j / eta, L);
    return out;
}

} // namespace metags
