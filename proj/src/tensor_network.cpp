#include "metags/tensor_network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace metags {

namespace {

// thin SVD keeping singular values above cut
struct Thin {
    Mat U;
    RVec s;
    Mat V;
};
Thin thin_svd(const Mat& A, double cut) {
    Thin t;
    if (A.size() == 0) {
        t.U = Mat(A.rows(), 0);
        t.V = Mat(A.cols(), 0);
        t.s = RVec(0);
        return t;
    }
    Eigen::JacobiSVD<Mat, Eigen::ColPivHouseholderQRPreconditioner> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::Index r = 0;
    while (r < svd.singularValues().size() && svd.singularValues()(r) > cut) ++r;
    t.U = svd.matrixU().leftCols(r);
    t.V = svd.matrixV().leftCols(r);
    t.s = svd.singularValues().head(r);
    return t;
}

// orthonormal basis of the support of tr_rest(vecs vecs^dag) on `sub` (positions into the register)
Mat left_support(const Mat& vecs, int q, int k, const std::vector<int>& sub, double tol) {
    std::vector<int> perm(sub);
    std::vector<char> used(k, 0);
    for (int s : sub) used[s] = 1;
    for (int s = 0; s < k; ++s)
        if (!used[s]) perm.push_back(s);
    Mat p = permute_sites(vecs, q, perm);
    const auto dl = static_cast<Eigen::Index>(ipow(q, static_cast<int>(sub.size())));
    const Eigen::Index dr = p.rows() / dl;
    // columns of the reshaped matrix: (rest index, vector index); rows: subsystem index
    Mat m(dl, dr * p.cols());
    for (Eigen::Index c = 0; c < p.cols(); ++c)
        for (Eigen::Index a = 0; a < dl; ++a)
            for (Eigen::Index b = 0; b < dr; ++b) m(a, c * dr + b) = p(a * dr + b, c);
    return thin_svd(m, std::sqrt(tol)).U;
}

void fnv(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}

} // namespace

MetaBranch::MetaBranch(std::shared_ptr<const MetaTree> mt, int root, int q) : mt_(std::move(mt)), root_(root), q_(q) {
    if (!mt_) throw InvalidInput("meta-branch needs a META-tree");
    if (root < 0 || root >= mt_->size()) throw InvalidInput("meta-branch root out of range");
    if (q < 2) throw InvalidInput("local dimension must be >= 2");
    in_.assign(mt_->size(), 0);
    perm_.assign(mt_->size(), {});
    members_.push_back(root);
    for (std::size_t i = 0; i < members_.size(); ++i) {
        int w = members_[i];
        in_[w] = 1;
        for (int c : mt_->children(w)) members_.push_back(c);
    }
    for (int w : members_) {
        if (mt_->is_leaf(w)) continue;
        std::vector<int> concat;
        for (int c : mt_->children(w))
            for (int x : mt_->subtree(c).vertices) concat.push_back(x);
        const auto& sorted = mt_->subtree(w).vertices;
        std::vector<int> perm(sorted.size());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            perm[i] = static_cast<int>(std::find(concat.begin(), concat.end(), sorted[i]) - concat.begin());
        perm_[w] = std::move(perm);
    }
}

Mat apply_factor(const Mat& in, const std::vector<Eigen::Index>& dims, int i, const Mat& X) {
    if (X.cols() != dims.at(i)) throw InvalidInput("factor dimension mismatch");
    Eigen::Index pre = 1, post = 1;
    for (int a = 0; a < i; ++a) pre *= dims[a];
    for (std::size_t a = i + 1; a < dims.size(); ++a) post *= dims[a];
    if (pre * dims[i] * post != in.rows()) throw InvalidInput("row count does not match the factor dims");
    const Eigen::Index dn = X.rows();
    Mat out(pre * dn * post, in.cols());
    const Mat Xt = X.transpose();
    for (Eigen::Index c = 0; c < in.cols(); ++c)
        for (Eigen::Index p = 0; p < pre; ++p) {
            Eigen::Map<const Mat> src(in.data() + c * in.rows() + p * dims[i] * post, post, dims[i]);
            Eigen::Map<Mat> dst(out.data() + c * out.rows() + p * dn * post, post, dn);
            dst.noalias() = src * Xt;
        }
    return out;
}

// ---------------------------------------------------------------- MetaTN

MetaTN::MetaTN(MetaBranch shape, std::vector<Mat> tensors) : shape_(std::move(shape)), tensors_(std::move(tensors)) {
    const auto& mt = shape_.meta();
    if (static_cast<int>(tensors_.size()) != mt.size()) throw InvalidInput("one tensor slot per meta-vertex required");
    for (int w : shape_.members()) {
        const Mat& t = tensors_[w];
        Eigen::Index rows = 1;
        if (mt.is_leaf(w))
            rows = mt.subtree(w).vertices.empty() ? 1 : shape_.q();
        else
            for (int c : mt.children(w)) rows *= tensors_[c].cols();
        if (t.rows() != rows) throw InvalidInput("tensor shape does not match its bonds");
    }
}

std::vector<Eigen::Index> MetaTN::child_dims(int w) const {
    std::vector<Eigen::Index> d;
    for (int c : shape_.meta().children(w)) d.push_back(tensors_[c].cols());
    return d;
}

Eigen::Index MetaTN::max_bond() const {
    Eigen::Index b = 0;
    for (int w : shape_.members())
        if (w != shape_.root()) b = std::max(b, bond(w));
    return b;
}

MetaTN MetaTN::product(const MetaBranch& shape, const std::vector<Vec>& local) {
    const auto& mt = shape.meta();
    std::vector<Mat> t(mt.size());
    for (int w : shape.members()) {
        if (mt.is_leaf(w)) {
            const auto& vs = mt.subtree(w).vertices;
            if (vs.empty()) {
                t[w] = Mat::Ones(1, 1);
            } else {
                const Vec& v = local.at(vs[0]);
                if (v.size() != shape.q()) throw InvalidInput("local vector has the wrong dimension");
                t[w] = v;
            }
        } else {
            t[w] = Mat::Ones(1, 1);
        }
    }
    return MetaTN(shape, std::move(t));
}

Mat MetaTN::contract() const {
    const auto& mt = shape_.meta();
    std::vector<Mat> M(mt.size());
    const auto& mem = shape_.members();
    for (auto it = mem.rbegin(); it != mem.rend(); ++it) {
        int w = *it;
        if (mt.is_leaf(w)) {
            M[w] = tensors_[w];
            continue;
        }
        Mat x = tensors_[w];
        auto dims = child_dims(w);
        const auto& ch = mt.children(w);
        for (std::size_t i = 0; i < ch.size(); ++i) {
            x = apply_factor(x, dims, static_cast<int>(i), M[ch[i]]);
            dims[i] = M[ch[i]].rows();
            M[ch[i]].resize(0, 0);
        }
        M[w] = permute_sites(x, shape_.q(), shape_.child_perm(w));
    }
    return M[shape_.root()];
}

Subspace MetaTN::encoded_subspace(double tol) const {
    Mat g = contract();
    return Subspace(thin_svd(g, std::sqrt(tol)).U);
}

MetaTN MetaTN::from_dense(const MetaBranch& shape, const Mat& vecs, double tol) {
    const auto& mt = shape.meta();
    const auto& rsites = mt.subtree(shape.root()).vertices;
    const int k = static_cast<int>(rsites.size());
    if (vecs.rows() != static_cast<Eigen::Index>(ipow(shape.q(), k))) throw InvalidInput("vectors do not live on T^v");
    Mat basis = Subspace::span(vecs, 1e-12).iso();
    std::vector<Mat> U(mt.size()), t(mt.size());
    for (int w : shape.members()) {
        if (w == shape.root()) continue;
        const auto& vs = mt.subtree(w).vertices;
        if (vs.empty()) {
            U[w] = Mat::Ones(1, 1);
            continue;
        }
        std::vector<int> pos;
        for (int x : vs) pos.push_back(static_cast<int>(std::lower_bound(rsites.begin(), rsites.end(), x) - rsites.begin()));
        U[w] = left_support(basis, shape.q(), k, pos, tol);
    }
    U[shape.root()] = basis;
    for (int w : shape.members()) {
        if (mt.is_leaf(w)) {
            t[w] = U[w];
            continue;
        }
        // coefficients of U_w in the product of the children's bases
        const auto& perm = shape.child_perm(w);
        std::vector<int> inv(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
        Mat x = permute_sites(U[w], shape.q(), inv);
        std::vector<Eigen::Index> dims;
        const auto& ch = mt.children(w);
        for (int c : ch) dims.push_back(U[c].rows());
        for (std::size_t i = 0; i < ch.size(); ++i) {
            x = apply_factor(x, dims, static_cast<int>(i), U[ch[i]].adjoint());
            dims[i] = U[ch[i]].cols();
        }
        t[w] = x;
    }
    return MetaTN(shape, std::move(t));
}

MetaTN MetaTN::canonicalize() const {
    const auto& mt = shape_.meta();
    std::vector<Mat> t = tensors_;
    const auto& mem = shape_.members();
    for (auto it = mem.rbegin(); it != mem.rend(); ++it) {
        int w = *it;
        if (w == shape_.root()) continue;
        const double scale = t[w].size() ? t[w].cwiseAbs().maxCoeff() : 0.0;
        auto s = thin_svd(t[w], 1e-14 * std::max(scale, 1e-300));
        // t_w = U (S V^dag): keep U, push S V^dag into the parent's index for w
        t[w] = s.U;
        int p = mt.node(w).parent;
        const auto& ch = mt.children(p);
        int pos = static_cast<int>(std::find(ch.begin(), ch.end(), w) - ch.begin());
        std::vector<Eigen::Index> dims;
        for (int c : ch) dims.push_back(c == w ? s.V.rows() : t[c].cols());
        Mat X = s.s.cast<cplx>().asDiagonal() * s.V.adjoint();
        t[p] = apply_factor(t[p], dims, pos, X);
    }
    int r = shape_.root();
    const double scale = t[r].size() ? t[r].cwiseAbs().maxCoeff() : 0.0;
    t[r] = thin_svd(t[r], 1e-14 * std::max(scale, 1e-300)).U;
    return MetaTN(shape_, std::move(t));
}

bool MetaTN::is_canonical(double tol) const {
    for (int w : shape_.members()) {
        const Mat& t = tensors_[w];
        if ((t.adjoint() * t - Mat::Identity(t.cols(), t.cols())).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

Mat MetaTN::bond_density(int w) const {
    const auto& mt = shape_.meta();
    if (!shape_.contains(w)) throw InvalidInput("meta-vertex outside the branch");
    if (w == shape_.root()) return Mat::Identity(bond(w), bond(w));
    // path from the root down to w
    std::vector<int> path{w};
    while (path.back() != shape_.root()) path.push_back(mt.node(path.back()).parent);
    std::reverse(path.begin(), path.end());
    Mat sigma = Mat::Identity(bond(path[0]), bond(path[0]));
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        int v = path[i], c = path[i + 1];
        const Mat& T = tensors_[v];
        auto dims = child_dims(v);
        const auto& ch = mt.children(v);
        int pos = static_cast<int>(std::find(ch.begin(), ch.end(), c) - ch.begin());
        // Omega = T sigma T^dag on the child bonds, then trace out everything but child c
        Mat omega = T * sigma * T.adjoint();
        Eigen::Index pre = 1, post = 1;
        for (int a = 0; a < pos; ++a) pre *= dims[a];
        for (std::size_t a = pos + 1; a < dims.size(); ++a) post *= dims[a];
        const Eigen::Index dc = dims[pos];
        Mat next = Mat::Zero(dc, dc);
        for (Eigen::Index p = 0; p < pre; ++p)
            for (Eigen::Index q = 0; q < post; ++q)
                for (Eigen::Index a = 0; a < dc; ++a)
                    for (Eigen::Index b = 0; b < dc; ++b)
                        next(a, b) += omega((p * dc + a) * post + q, (p * dc + b) * post + q);
        sigma = std::move(next);
    }
    return sigma;
}

MetaTN MetaTN::trim(int w, double xi) const {
    if (!(xi > 0)) throw InvalidInput("trim threshold must be positive");
    if (w == shape_.root() || !shape_.contains(w)) throw InvalidInput("trim needs a non-root member");
    MetaTN c = canonicalize();
    const auto& mt = shape_.meta();
    auto e = eigh(c.bond_density(w));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
        if (e.values(i) > xi) keep.push_back(i);
    Mat Q(e.vectors.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) Q.col(i) = e.vectors.col(keep[i]);
    std::vector<Mat> t = c.tensors_;
    int p = mt.node(w).parent;
    auto dims = c.child_dims(p);
    const auto& ch = mt.children(p);
    int pos = static_cast<int>(std::find(ch.begin(), ch.end(), w) - ch.begin());
    t[w] = t[w] * Q;
    t[p] = apply_factor(t[p], dims, pos, Q.adjoint());
    return MetaTN(shape_, std::move(t));
}

MetaTN MetaTN::global_trim(double xi) const {
    MetaTN cur = *this;
    const auto& mem = shape_.members();
    for (auto it = mem.rbegin(); it != mem.rend(); ++it)
        if (*it != shape_.root()) cur = cur.trim(*it, xi);
    return cur.canonicalize();
}

MetaTN MetaTN::restrict_root(Eigen::Index target_dim, std::uint64_t seed) const {
    MetaTN c = canonicalize();
    if (target_dim < 0 || target_dim > c.root_dim()) throw InvalidInput("target dimension exceeds the root dimension");
    std::mt19937_64 rng(seed);
    Mat u = haar_isometry(c.root_dim(), target_dim, rng);
    c.tensors_[shape_.root()] = c.tensors_[shape_.root()] * u;
    return c;
}

nlohmann::json MetaTN::to_json() const {
    nlohmann::json j;
    j["format"] = "metags-metatn-1";
    j["tree_hash"] = std::to_string(shape_.meta().tree_hash());
    j["meta_size"] = shape_.meta().size();
    j["root"] = shape_.root();
    j["q"] = shape_.q();
    std::uint64_t h = 1469598103934665603ULL;
    auto& ts = j["tensors"] = nlohmann::json::array();
    for (int w : shape_.members()) {
        const Mat& t = tensors_[w];
        std::vector<double> flat;
        flat.reserve(2 * t.size());
        for (Eigen::Index c = 0; c < t.cols(); ++c)
            for (Eigen::Index r = 0; r < t.rows(); ++r) {
                flat.push_back(t(r, c).real());
                flat.push_back(t(r, c).imag());
            }
        fnv(h, &w, sizeof w);
        fnv(h, flat.data(), flat.size() * sizeof(double));
        ts.push_back({{"vertex", w}, {"rows", t.rows()}, {"cols", t.cols()}, {"data", flat}});
    }
    j["checksum"] = std::to_string(h);
    return j;
}

MetaTN MetaTN::from_json(const nlohmann::json& j, std::shared_ptr<const MetaTree> mt) {
    try {
        if (j.at("format").get<std::string>() != "metags-metatn-1") throw InvalidInput("unknown MetaTN format");
        if (j.at("tree_hash").get<std::string>() != std::to_string(mt->tree_hash()))
            throw InvalidInput("MetaTN was written for a different tree");
        if (j.at("meta_size").get<int>() != mt->size()) throw InvalidInput("MetaTN was written for a different META-tree");
        MetaBranch shape(mt, j.at("root").get<int>(), j.at("q").get<int>());
        std::vector<Mat> t(mt->size());
        std::uint64_t h = 1469598103934665603ULL;
        for (const auto& item : j.at("tensors")) {
            int w = item.at("vertex").get<int>();
            auto rows = item.at("rows").get<Eigen::Index>(), cols = item.at("cols").get<Eigen::Index>();
            auto flat = item.at("data").get<std::vector<double>>();
            if (!shape.contains(w) || static_cast<Eigen::Index>(flat.size()) != 2 * rows * cols)
                throw InvalidInput("malformed tensor record");
            fnv(h, &w, sizeof w);
            fnv(h, flat.data(), flat.size() * sizeof(double));
            Mat m(rows, cols);
            for (Eigen::Index c = 0; c < cols; ++c)
                for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = cplx(flat[2 * (c * rows + r)], flat[2 * (c * rows + r) + 1]);
            t[w] = std::move(m);
        }
        if (std::to_string(h) != j.at("checksum").get<std::string>()) throw InvalidInput("MetaTN checksum mismatch");
        return MetaTN(shape, std::move(t));
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidInput(std::string("bad MetaTN JSON: ") + ex.what());
    }
}

// ---------------------------------------------------------------- MetaTNO

MetaTNO::MetaTNO(MetaBranch shape) : shape_(std::move(shape)) {
    const int n = shape_.meta().size();
    bond_.assign(n, 1);
    entries_.assign(n, {});
    leaf_ops_.assign(n, {});
}

int MetaTNO::max_bond() const {
    int b = 0;
    for (int w : shape_.members())
        if (w != shape_.root()) b = std::max(b, bond_[w]);
    return b;
}

std::vector<std::vector<Mat>> MetaTNO::contract_all() const {
    const auto& mt = shape_.meta();
    std::vector<std::vector<Mat>> O(mt.size());
    const auto& mem = shape_.members();
    for (auto it = mem.rbegin(); it != mem.rend(); ++it) {
        int w = *it;
        if (mt.is_leaf(w)) {
            if (mt.subtree(w).vertices.empty())
                O[w].assign(bond_[w], Mat::Ones(1, 1));
            else
                O[w] = leaf_ops_[w];
            if (static_cast<int>(O[w].size()) != bond_[w]) throw InvalidInput("leaf operator count does not match the bond");
            continue;
        }
        const auto dim = shape_.phys_dim(w);
        O[w].assign(bond_[w], Mat::Zero(dim, dim));
        const auto& ch = mt.children(w);
        const auto& perm = shape_.child_perm(w);
        Mat Pm = permute_sites(Mat::Identity(dim, dim), shape_.q(), perm);
        for (const auto& e : entries_[w]) {
            if (e.children.size() != ch.size()) throw InvalidInput("TNO entry arity mismatch");
            Mat acc = Mat::Ones(1, 1);
            for (std::size_t i = 0; i < ch.size(); ++i) acc = kron(acc, O[ch[i]].at(e.children[i]));
            O[w].at(e.parent) += e.value * acc;
        }
        for (auto& m : O[w]) m = Pm * m * Pm.adjoint();
    }
    return O;
}

MetaTN apply_tno(const MetaTNO& ops, const MetaTN& tn) {
    const auto& sa = ops.shape();
    const auto& sb = tn.shape();
    if (sa.meta_ptr() != sb.meta_ptr() || sa.root() != sb.root() || sa.q() != sb.q())
        throw InvalidInput("TNO and TN live on different meta-branches");
    const auto& mt = sb.meta();
    const int q = sb.q();
    std::vector<Mat> t(mt.size());
    for (int w : sb.members()) {
        const Mat& T = tn.tensor(w);
        const Eigen::Index bt = T.cols();
        const int bo = ops.bond(w);
        if (mt.is_leaf(w)) {
            if (mt.subtree(w).vertices.empty()) {
                t[w] = Mat::Ones(1, bo * bt);
                continue;
            }
            t[w] = Mat(q, bo * bt);
            for (int a = 0; a < bo; ++a) t[w].middleCols(a * bt, bt) = ops.leaf_ops(w).at(a) * T;
            continue;
        }
        const auto& ch = mt.children(w);
        std::vector<Eigen::Index> dt, dop;
        for (int c : ch) {
            dt.push_back(tn.bond(c));
            dop.push_back(ops.bond(c));
        }
        Eigen::Index rows = 1;
        for (std::size_t i = 0; i < ch.size(); ++i) rows *= dt[i] * dop[i];
        Mat out = Mat::Zero(rows, bo * bt);
        const Eigen::Index rt = T.rows();
        std::vector<Eigen::Index> bidx(ch.size());
        for (const auto& e : ops.entries(w)) {
            for (Eigen::Index r = 0; r < rt; ++r) {
                // split r into per-child TN indices, then interleave with the entry's op indices
                Eigen::Index rem = r;
                for (int i = static_cast<int>(ch.size()) - 1; i >= 0; --i) {
                    bidx[i] = rem % dt[i];
                    rem /= dt[i];
                }
                Eigen::Index row = 0;
                for (std::size_t i = 0; i < ch.size(); ++i) row = row * (dop[i] * dt[i]) + e.children[i] * dt[i] + bidx[i];
                for (Eigen::Index b = 0; b < bt; ++b) out(row, e.parent * bt + b) += e.value * T(r, b);
            }
        }
        t[w] = std::move(out);
    }
    return MetaTN(sb, std::move(t));
}

MetaTNO tno_from_dense(const MetaBranch& shape, const std::vector<Mat>& opsv) {
    const auto& mt = shape.meta();
    const int q = shape.q();
    MetaTNO out(shape);
    // every non-root member carries matrix-unit words on its vertices
    for (int w : shape.members()) {
        if (w == shape.root()) continue;
        const auto& vs = mt.subtree(w).vertices;
        if (mt.is_leaf(w)) {
            if (vs.empty()) continue;
            out.set_bond(w, q * q);
            for (int a = 0; a < q; ++a)
                for (int b = 0; b < q; ++b) {
                    Mat e = Mat::Zero(q, q);
                    e(a, b) = 1;
                    out.leaf_ops(w).push_back(e);
                }
        } else {
            out.set_bond(w, static_cast<int>(ipow(q * q, static_cast<int>(vs.size()))));
        }
    }
    // value of w for the word pair (i, j) given as digits per vertex
    auto value_of = [&](auto&& self, int w, const std::vector<int>& di, const std::vector<int>& dj) -> int {
        const auto& vs = mt.subtree(w).vertices;
        if (mt.is_leaf(w)) return vs.empty() ? 0 : di.at(vs[0]) * q + dj.at(vs[0]);
        int v = 0;
        for (int c : mt.children(w)) v = v * out.bond(c) + self(self, c, di, dj);
        return v;
    };
    // pass-through entries for internal non-root members: value = mixed radix of the children
    for (int w : shape.members()) {
        if (w == shape.root() || mt.is_leaf(w)) continue;
        const auto& ch = mt.children(w);
        for (int v = 0; v < out.bond(w); ++v) {
            TnoEntry e;
            e.parent = v;
            e.children.resize(ch.size());
            int rem = v;
            for (int i = static_cast<int>(ch.size()) - 1; i >= 0; --i) {
                e.children[i] = rem % out.bond(ch[i]);
                rem /= out.bond(ch[i]);
            }
            out.entries(w).push_back(std::move(e));
        }
    }
    const int r = shape.root();
    const auto& rs = mt.subtree(r).vertices;
    const int k = static_cast<int>(rs.size());
    const Eigen::Index dim = shape.phys_dim(r);
    out.set_bond(r, static_cast<int>(opsv.size()));
    int maxv = rs.empty() ? 0 : rs.back();
    std::vector<int> di(maxv + 1, 0), dj(maxv + 1, 0);
    for (std::size_t o = 0; o < opsv.size(); ++o) {
        const Mat& m = opsv[o];
        if (m.rows() != dim || m.cols() != dim) throw InvalidInput("operator does not act on T^v");
        if (mt.is_leaf(r)) {
            out.leaf_ops(r).push_back(m);
            continue;
        }
        for (Eigen::Index a = 0; a < dim; ++a)
            for (Eigen::Index b = 0; b < dim; ++b) {
                if (m(a, b) == cplx(0)) continue;
                Eigen::Index ra = a, rb = b;
                for (int s = k - 1; s >= 0; --s) {
                    di[rs[s]] = static_cast<int>(ra % q);
                    dj[rs[s]] = static_cast<int>(rb % q);
                    ra /= q;
                    rb /= q;
                }
                TnoEntry e;
                e.parent = static_cast<int>(o);
                for (int c : mt.children(r)) e.children.push_back(value_of(value_of, c, di, dj));
                e.value = m(a, b);
                out.entries(r).push_back(std::move(e));
            }
    }
    return out;
}

} // namespace metags
