#include "metags/pap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace metags {

namespace {

constexpr double kRankTol = 1e-10;
constexpr Eigen::Index kChunk = 256;

Eigen::Index qpow(int q, std::size_t k) {
    return static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(q), static_cast<int>(k)));
}

std::vector<int> positions(const std::vector<int>& reg, const std::vector<int>& sub) {
    std::vector<int> pos;
    for (int v : sub) {
        auto it = std::lower_bound(reg.begin(), reg.end(), v);
        if (it == reg.end() || *it != v) throw InvalidInput("vertex is not on the register");
        pos.push_back(static_cast<int>(it - reg.begin()));
    }
    return pos;
}

// register order with `a_sites` first, then the rest ascending
std::vector<int> a_first(int k, const std::vector<int>& a_sites) {
    std::vector<int> perm = a_sites;
    std::vector<char> in(k, 0);
    for (int s : a_sites) in[s] = 1;
    for (int i = 0; i < k; ++i)
        if (!in[i]) perm.push_back(i);
    return perm;
}

Mat conjugate(const Mat& O, int q, const std::vector<int>& perm) {
    return permute_sites(permute_sites(O, q, perm).adjoint(), q, perm).adjoint();
}

// columns vec(O_ij) of the realigned operator, A first on the register
Mat realign(const Mat& P, Eigen::Index dA, Eigen::Index dB) {
    Mat M(dA * dA, dB * dB);
    for (Eigen::Index j = 0; j < dB; ++j)
        for (Eigen::Index i = 0; i < dB; ++i) {
            auto col = M.col(i + j * dB);
            for (Eigen::Index b = 0; b < dA; ++b)
                for (Eigen::Index a = 0; a < dA; ++a) col(a + b * dA) = P(a * dB + i, b * dB + j);
        }
    return M;
}

Mat matrix_unit(int q, int i, int j) {
    Mat u = Mat::Zero(q, q);
    u(i, j) = 1;
    return u;
}

Mat power(const Mat& H, int a) {
    Mat out = Mat::Identity(H.rows(), H.cols());
    for (int i = 0; i < a; ++i) out = out * H;
    return out;
}

} // namespace

OperatorSubspace::OperatorSubspace(std::vector<int> vertices, int q)
    : vertices_(std::move(vertices)), q_(q), op_dim_(qpow(q, vertices_.size())) {
    if (!std::is_sorted(vertices_.begin(), vertices_.end())) throw InvalidInput("register must be ascending");
    basis_ = Mat::Zero(op_dim_ * op_dim_, 0);
}

void OperatorSubspace::add(const std::vector<Mat>& ops) {
    const Eigen::Index len = op_dim_ * op_dim_;
    for (std::size_t start = 0; start < ops.size() && !full(); start += kChunk) {
        std::size_t stop = std::min(ops.size(), start + kChunk);
        Mat block(len, static_cast<Eigen::Index>(stop - start));
        Eigen::Index c = 0;
        for (std::size_t i = start; i < stop; ++i) {
            const Mat& o = ops[i];
            if (o.rows() != op_dim_ || o.cols() != op_dim_) throw InvalidInput("operator does not fit the register");
            double nrm = o.norm();
            if (nrm == 0) continue;
            block.col(c++) = Eigen::Map<const Vec>(o.data(), len) / nrm;
        }
        block.conservativeResize(len, c);
        if (c == 0) continue;
        for (int pass = 0; pass < 2; ++pass) block -= basis_ * (basis_.adjoint() * block);
        // rank-revealing QR; generators are unit vectors, so the pivots compare to an absolute tolerance
        Eigen::ColPivHouseholderQR<Mat> qr(block);
        const auto& R = qr.matrixQR();
        Eigen::Index r = 0;
        while (r < std::min(len, c) && std::abs(R(r, r)) > kRankTol) ++r;
        if (r == 0) continue;
        Mat fresh = qr.householderQ() * Mat::Identity(len, r);
        // one more pass keeps the new columns orthogonal to the old ones at rounding level
        fresh -= basis_ * (basis_.adjoint() * fresh);
        Eigen::HouseholderQR<Mat> qr2(fresh);
        Mat grown(len, basis_.cols() + r);
        grown << basis_, qr2.householderQ() * Mat::Identity(len, r);
        basis_ = std::move(grown);
    }
}

Mat OperatorSubspace::op(Eigen::Index i) const {
    return Eigen::Map<const Mat>(basis_.col(i).data(), op_dim_, op_dim_);
}

std::vector<Mat> OperatorSubspace::ops() const {
    std::vector<Mat> out;
    for (Eigen::Index i = 0; i < dim(); ++i) out.push_back(op(i));
    return out;
}

double OperatorSubspace::residual(const Mat& O) const {
    double nrm = O.norm();
    if (nrm == 0) return 0;
    Eigen::Map<const Vec> v(O.data(), O.size());
    Vec r = v - basis_ * (basis_.adjoint() * v);
    return r.norm() / nrm;
}

std::vector<int> padded(const InteractionTree& t, const std::vector<int>& region, int r) {
    return pad(t, vertex_region(t, region), r).vertices;
}

std::vector<int> vertex_shell(const InteractionTree& t, const std::vector<int>& region, int r) {
    return vertex_boundary(t, vertex_region(t, padded(t, region, r)));
}

ShellBasis sigma_shell(const InteractionTree& t, const std::vector<int>& region, int r) {
    ShellBasis out;
    out.vertices = padded(t, region, r);
    out.shell = vertex_shell(t, region, r);
    const int q = t.local_dim();
    const int k = static_cast<int>(out.vertices.size());
    auto pos = positions(out.vertices, out.shell);
    for (int p : pos)
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) out.ops.push_back(embed_operator(matrix_unit(q, i, j), q, k, {p}));
    return out;
}

std::vector<std::vector<int>> edge_shells(const InteractionTree& t, const std::vector<int>& region, int s) {
    std::vector<std::vector<int>> out;
    out.push_back(vertex_region(t, region).edges);
    std::vector<int> prev = out[0];
    for (int r = 1; r <= s; ++r) {
        auto cur = vertex_region(t, padded(t, region, r)).edges;
        std::vector<int> diff;
        std::set_difference(cur.begin(), cur.end(), prev.begin(), prev.end(), std::back_inserter(diff));
        out.push_back(std::move(diff));
        prev = std::move(cur);
    }
    return out;
}

Mat weighted_hamiltonian(const std::vector<Mat>& shells, const std::vector<int>& omega) {
    if (shells.empty()) throw InvalidInput("no shells");
    if (omega.size() < shells.size()) throw InvalidInput("one weight per shell");
    Mat out = Mat::Zero(shells[0].rows(), shells[0].cols());
    for (std::size_t j = 0; j < shells.size(); ++j) out += std::ldexp(1.0, omega[j]) * shells[j];
    return out;
}

std::vector<std::vector<double>> span_lemma_coeffs(int m) {
    if (m < 0) throw InvalidInput("negative degree");
    const int n = m + 1;
    Eigen::MatrixXd V(n, n); // V(nu, j) = (2^nu)^j
    for (int nu = 0; nu < n; ++nu)
        for (int j = 0; j < n; ++j) V(nu, j) = std::ldexp(1.0, nu * j);
    // f_b = sum_j c_bj x^j with V c_b = e_b
    Eigen::MatrixXd C = V.fullPivLu().solve(Eigen::MatrixXd::Identity(n, n));
    std::vector<std::vector<double>> out(n, std::vector<double>(n));
    for (int b = 0; b < n; ++b)
        for (int j = 0; j < n; ++j) out[b][j] = C(j, b);
    return out;
}

std::vector<Mat> left_support_ops(const Mat& O, int q, int k, const std::vector<int>& a_sites) {
    if (O.rows() != qpow(q, k) || O.cols() != O.rows()) throw InvalidInput("operator does not fit the register");
    const Eigen::Index dA = qpow(q, a_sites.size()), dB = qpow(q, k - a_sites.size());
    Mat P = conjugate(O, q, a_first(k, a_sites));
    Mat M = realign(P, dA, dB);
    std::vector<Mat> out;
    for (Eigen::Index c = 0; c < M.cols(); ++c) out.push_back(Eigen::Map<const Mat>(M.col(c).data(), dA, dA));
    return out;
}

OperatorSubspace left_support(const std::vector<Mat>& ops, int q, const std::vector<int>& reg,
                              const std::vector<int>& a_vertices) {
    OperatorSubspace L(a_vertices, q);
    auto pos = positions(reg, a_vertices);
    const int k = static_cast<int>(reg.size());
    for (const Mat& o : ops) {
        L.add(left_support_ops(o, q, k, pos));
        if (L.full()) break;
    }
    return L;
}

LmReport build_Lm(const LocalHamiltonian& h, const std::vector<int>& region, const Mat& H0, int m, int s) {
    const auto& t = h.tree();
    const int q = h.q();
    if (m < 0 || s < 1) throw InvalidInput("need m >= 0 and s >= 1");
    std::vector<int> R = vertex_region(t, region).vertices;
    if (H0.rows() != qpow(q, R.size())) throw InvalidInput("H_R does not fit the region");
    LmReport rep;
    rep.L = OperatorSubspace(R, q);
    rep.ell = m / s;
    const int ell = rep.ell;
    auto eshells = edge_shells(t, R, s);

    for (int r = 1; r <= s && !rep.L.full(); ++r) {
        // S_{omega,a} lives on pad(R, r - 1)
        auto sig = sigma_shell(t, R, r - 1);
        const auto& reg = sig.vertices;
        const int k = static_cast<int>(reg.size());
        // an empty shell contributes Id, which a nonempty shell spans anyway
        if (sig.ops.empty()) sig.ops.push_back(Mat::Identity(qpow(q, k), qpow(q, k)));
        auto rpos = positions(reg, R);
        std::vector<Mat> hs{embed_operator(H0, q, k, rpos)};
        for (int j = 1; j < r; ++j) hs.push_back(assemble_dense(h, reg, eshells[j]));
        // the overall scale does not change a span, so r = 1 needs a single weight
        std::vector<int> omega(r, 0);
        bool more = true;
        while (more && !rep.L.full()) {
            Mat H = weighted_hamiltonian(hs, omega);
            std::vector<Mat> pw;
            for (int a = 0; a <= m; ++a) pw.push_back(power(H, a));
            // prefix spans: W = span{H^{a0} sigma H^{a1} ... H^{ai}}
            std::function<void(int, int, const std::vector<Mat>&)> dfs = [&](int level, int left,
                                                                             const std::vector<Mat>& W) {
                if (rep.L.full()) return;
                if (level == ell) {
                    ++rep.index_sets;
                    rep.L.add(left_support(W, q, reg, R).ops());
                    return;
                }
                for (int a = 0; a <= left && !rep.L.full(); ++a) {
                    OperatorSubspace next(reg, q);
                    std::vector<Mat> batch;
                    for (const Mat& w : W)
                        for (const Mat& sg : sig.ops) {
                            batch.push_back(w * sg * pw[a]);
                            ++rep.products;
                            if (batch.size() >= static_cast<std::size_t>(kChunk)) {
                                next.add(batch);
                                batch.clear();
                            }
                        }
                    next.add(batch);
                    dfs(level + 1, left - a, next.ops());
                }
            };
            for (int a0 = 0; a0 <= m && !rep.L.full(); ++a0) {
                ++rep.products;
                dfs(0, m - a0, {pw[a0]});
            }
            // odometer over omega in [m]_0^r
            more = false;
            if (r > 1)
                for (int j = 0; j < r; ++j) {
                    if (omega[j] < m) {
                        ++omega[j];
                        more = true;
                        break;
                    }
                    omega[j] = 0;
                }
        }
    }
    return rep;
}

ViabilityTarget viability_target(const LocalHamiltonian& h, const std::vector<int>& region, const Mat& H0, int s) {
    const auto& t = h.tree();
    const int q = h.q();
    std::vector<int> R = vertex_region(t, region).vertices;
    auto sig = sigma_shell(t, R, s);
    ViabilityTarget out;
    out.vertices = sig.vertices;
    const int k = static_cast<int>(out.vertices.size());
    auto es = edge_shells(t, R, s);
    std::vector<int> barrier;
    for (int j = 1; j <= s; ++j) barrier.insert(barrier.end(), es[j].begin(), es[j].end());
    std::sort(barrier.begin(), barrier.end());
    Mat H = embed_operator(H0, q, k, positions(out.vertices, R)) + assemble_dense(h, out.vertices, barrier);
    out.generators.push_back(std::move(H));
    for (auto& o : sig.ops) out.generators.push_back(std::move(o));
    return out;
}

namespace {

// |P - P_{L (x) lin(B)} P|_HS / |P|_HS
double product_residual(const OperatorSubspace& L, const Mat& P, int q, int k, const std::vector<int>& apos) {
    double nrm = P.norm();
    if (nrm == 0) return 0;
    const Eigen::Index dA = L.op_dim(), dB = P.rows() / dA;
    Mat M = realign(conjugate(P, q, a_first(k, apos)), dA, dB);
    const Mat& Q = L.basis();
    Mat res = M - Q * (Q.adjoint() * M);
    return res.norm() / nrm;
}

} // namespace

ViabilityReport check_degree_viability(const OperatorSubspace& L, const ViabilityTarget& S, int m,
                                       std::mt19937_64& rng, long budget, long samples) {
    const int q = [&] {
        Eigen::Index d = L.op_dim();
        int k = static_cast<int>(L.vertices().size());
        if (k == 0) throw InvalidInput("empty region");
        return static_cast<int>(std::lround(std::pow(double(d), 1.0 / k)));
    }();
    const int k = static_cast<int>(S.vertices.size());
    auto apos = positions(S.vertices, L.vertices());
    const Eigen::Index dim = S.generators.at(0).rows();
    std::vector<Mat> letters{Mat::Identity(dim, dim)};
    for (const auto& g : S.generators) letters.push_back(g);
    const long G = static_cast<long>(letters.size());

    ViabilityReport rep;
    double words = std::pow(double(G), m);
    rep.exhaustive = m <= 3 || words <= double(budget);
    if (rep.exhaustive) {
        // words of length exactly m over {Id} u S cover every degree <= m
        std::function<void(int, const Mat&)> rec = [&](int depth, const Mat& P) {
            if (depth == m) {
                rep.max_residual = std::max(rep.max_residual, product_residual(L, P, q, k, apos));
                ++rep.products;
                return;
            }
            for (const Mat& x : letters) rec(depth + 1, P * x);
        };
        rec(0, Mat::Identity(dim, dim));
        return rep;
    }
    std::normal_distribution<double> nd;
    for (int deg = 1; deg <= m; ++deg)
        for (long i = 0; i < samples; ++i) {
            Mat P = Mat::Identity(dim, dim);
            for (int f = 0; f < deg; ++f) {
                Mat x = Mat::Zero(dim, dim);
                for (const Mat& l : letters) x += cplx(nd(rng), nd(rng)) * l;
                P = P * x;
            }
            rep.max_residual = std::max(rep.max_residual, product_residual(L, P, q, k, apos));
            ++rep.products;
        }
    return rep;
}

PapReport build_efficient_pap(const LocalHamiltonian& h, const std::vector<int>& region, const PapParams& p, int D) {
    const auto& t = h.tree();
    const int q = h.q();
    std::vector<int> R = vertex_region(t, region).vertices;
    double eta = p.eta > 0 ? p.eta : 2.0 * p.k / tce_constant_c(t.d());
    PapReport rep;
    rep.truncated = efficient_truncate(h, R, p.E, eta, p.k, p.L);
    rep.L = build_Lm(h, R, rep.truncated, p.m, p.s).L;
    if (qpow(q, t.n()) > kDenseBudget) return rep;

    // H~ = trunc(H_R) + every edge outside R
    std::vector<int> all(t.n());
    std::iota(all.begin(), all.end(), 0);
    auto inside = vertex_region(t, R).edges;
    std::vector<int> rest;
    for (int e = 0; e < t.num_edges(); ++e)
        if (!std::binary_search(inside.begin(), inside.end(), e)) rest.push_back(e);
    Mat Ht = embed_operator(rep.truncated, q, t.n(), R) + assemble_dense(h, all, rest);
    auto e = eigh(Ht);
    if (D < 1 || D >= e.values.size()) throw InvalidInput("D out of range");
    double a = e.values(D), gap = e.values(D) - e.values(D - 1), b = e.values(e.values.size() - 1);
    if (gap <= 1e-12 || b <= a) return rep;
    auto agsp = chebyshev_agsp(Ht, a, b, gap, p.m);
    rep.sigma_measured = agsp.sigma;
    rep.sigma_bound = agsp.bound;
    rep.measured = true;
    rep.agsp_residual = product_residual(rep.L, agsp.A, q, t.n(), R);
    return rep;
}

} // namespace metags
