#include "metags/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace metags {

namespace {

bool is_real(const Mat& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

double lambda_min_psd(const Mat& G) {
    if (G.rows() == 0) return 1.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

} // namespace

Subspace::Subspace(Mat iso) : iso_(std::move(iso)), ambient_(iso_.rows()) {
    if (iso_.cols() > iso_.rows()) throw InvalidInput("subspace dimension exceeds ambient dimension");
    if (iso_.cols() > 0) {
        double err = (iso_.adjoint() * iso_ - Mat::Identity(iso_.cols(), iso_.cols())).cwiseAbs().maxCoeff();
        if (err > 1e-10) throw InvalidInput("subspace columns are not orthonormal");
    }
}

Subspace Subspace::span(const Mat& cols, double tol) {
    Subspace s;
    s.ambient_ = cols.rows();
    if (cols.cols() == 0 || cols.rows() == 0) {
        s.iso_ = Mat(cols.rows(), 0);
        return s;
    }
    // BDCSVD in Eigen 3.4.0 can crash on clustered singular values
    Eigen::JacobiSVD<Mat, Eigen::ColPivHouseholderQRPreconditioner> svd(cols, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = tol * std::max(1.0, sv(0));
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    s.iso_ = svd.matrixU().leftCols(r);
    return s;
}

Subspace Subspace::full(Eigen::Index ambient) { return Subspace(Mat::Identity(ambient, ambient)); }
Subspace Subspace::zero(Eigen::Index ambient) { return Subspace(Mat(ambient, 0)); }

Subspace Subspace::perp() const {
    if (dim() == 0) return full(ambient_);
    Eigen::HouseholderQR<Mat> qr(iso_);
    Mat q = qr.householderQ();
    return Subspace::span(q.rightCols(ambient_ - dim()));
}

double omega(const Subspace& Y, const Subspace& Z) {
    if (Y.ambient() != Z.ambient()) throw InvalidInput("subspaces live in different ambient spaces");
    if (Z.dim() == 0) return 1.0;
    if (Y.dim() < Z.dim()) return 0.0;
    Mat M = Y.iso().adjoint() * Z.iso();
    return std::clamp(lambda_min_psd(M.adjoint() * M), 0.0, 1.0);
}

double almost_majorization_error(const Subspace& Y, const Subspace& Z) { return 1.0 - omega(Y, Z); }

ClosenessReport closeness(const Subspace& Y, const Subspace& Z) {
    if (Y.ambient() != Z.ambient()) throw InvalidInput("subspaces live in different ambient spaces");
    ClosenessReport r;
    r.same_dim = Y.dim() == Z.dim();
    r.omega = omega(Y, Z);
    Mat M = Y.iso().adjoint() * Z.iso();
    if (M.size() > 0) {
        Eigen::JacobiSVD<Mat> svd(M);
        r.singular_values = svd.singularValues();
    } else {
        r.singular_values = RVec(0);
    }
    const auto k = r.singular_values.size();
    r.angles = RVec(k);
    for (Eigen::Index i = 0; i < k; ++i) r.angles(i) = std::acos(std::min(1.0, r.singular_values(i)));
    if (r.same_dim) {
        double smin = k ? r.singular_values(k - 1) : 1.0;
        r.bijective = smin > 1e-9;
        if (r.bijective) r.delta = std::max(0.0, 1.0 - smin * smin);
    }
    return r;
}

Mat apply_left(const Mat& op_l, const Mat& vecs, Eigen::Index dim_l, Eigen::Index dim_r) {
    if (vecs.rows() != dim_l * dim_r || op_l.cols() != dim_l) throw InvalidInput("cut does not factor the ambient dimension");
    const Eigen::Index out_l = op_l.rows();
    Mat out(out_l * dim_r, vecs.cols());
    for (Eigen::Index a = 0; a < vecs.cols(); ++a) {
        Eigen::Map<const Mat> zm(vecs.col(a).data(), dim_r, dim_l);
        Eigen::Map<Mat> om(out.col(a).data(), dim_r, out_l);
        om.noalias() = zm * op_l.transpose();
    }
    return out;
}

Mat reduced_left(const Mat& vecs, Eigen::Index dim_l, Eigen::Index dim_r) {
    if (vecs.rows() != dim_l * dim_r) throw InvalidInput("cut does not factor the ambient dimension");
    Mat rho = Mat::Zero(dim_l, dim_l);
    for (Eigen::Index a = 0; a < vecs.cols(); ++a) {
        Eigen::Map<const Mat> zm(vecs.col(a).data(), dim_r, dim_l);
        rho.noalias() += zm.transpose() * zm.conjugate();
    }
    return rho;
}

Mat reduced_right(const Mat& vecs, Eigen::Index dim_l, Eigen::Index dim_r) {
    if (vecs.rows() != dim_l * dim_r) throw InvalidInput("cut does not factor the ambient dimension");
    Mat rho = Mat::Zero(dim_r, dim_r);
    for (Eigen::Index a = 0; a < vecs.cols(); ++a) {
        Eigen::Map<const Mat> zm(vecs.col(a).data(), dim_r, dim_l);
        rho.noalias() += zm * zm.adjoint();
    }
    return rho;
}

double viability(const Subspace& V, const Subspace& Z, Eigen::Index dim_l, Eigen::Index dim_r) {
    if (V.ambient() != dim_l || Z.ambient() != dim_l * dim_r) throw InvalidInput("cut does not factor the ambient dimension");
    if (Z.dim() == 0) return 0.0;
    // columns vec((V^dag (x) Id) z_a); their Gram matrix is iota_Z^dag (P_V (x) Id) iota_Z
    Mat w = apply_left(V.iso().adjoint(), Z.iso(), dim_l, dim_r);
    return 1.0 - std::clamp(lambda_min_psd(w.adjoint() * w), 0.0, 1.0);
}

Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            double re = g(rng), im = g(rng);
            m(i, j) = cplx(re, im);
        }
    return m;
}

Mat haar_isometry(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    if (cols > rows) throw InvalidInput("isometry wider than tall");
    Mat g = gaussian_matrix(rows, cols, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(rows, cols);
    Mat r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < cols; ++j) {
        double a = std::abs(r(j, j));
        if (a > 0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

Mat random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
    Mat g = gaussian_matrix(n, n, rng);
    return 0.5 * (g + g.adjoint());
}

Subspace haar_sample(const Subspace& W, Eigen::Index target_dim, std::uint64_t seed) {
    if (target_dim < 0 || target_dim > W.dim()) throw InvalidInput("target dimension exceeds dim W");
    std::mt19937_64 rng(seed);
    Mat c = haar_isometry(W.dim(), target_dim, rng);
    return Subspace::span(W.iso() * c);
}

Eigh eigh(const Mat& H) {
    Eigh out;
    if (H.rows() == 0) {
        out.values = RVec(0);
        out.vectors = Mat(0, 0);
        return out;
    }
    if (is_real(H)) {
        Eigen::SelfAdjointEigenSolver<RMat> es(H.real());
        if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
        out.values = es.eigenvalues();
        out.vectors = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
        out.values = es.eigenvalues();
        out.vectors = es.eigenvectors();
    }
    return out;
}

Subspace spectral_subspace(const Eigh& e, double lo, double hi) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
        if (e.values(i) >= lo && e.values(i) <= hi) keep.push_back(i);
    Mat iso(e.vectors.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) iso.col(j) = e.vectors.col(keep[j]);
    return Subspace(iso);
}

Subspace bottom_subspace(const Eigh& e, Eigen::Index count) {
    if (count > e.vectors.cols()) throw InvalidInput("more eigenvectors requested than available");
    return Subspace(e.vectors.leftCols(count));
}

Mat apply_function(const Eigh& e, const std::function<double(double)>& f) {
    RVec fv = e.values.unaryExpr(f);
    return e.vectors * fv.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

ChebyshevAgsp chebyshev_agsp(const Mat& H, double a, double b, double gap, int m) {
    if (m < 0) throw InvalidInput("negative Chebyshev degree");
    if (!(b > a) || gap <= 0) throw PreconditionError("need b > a and a positive gap");
    auto e = eigh(H);
    const double tol = 1e-9;
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
        double x = e.values(i);
        if (!(x <= a - gap + tol || (x >= a - tol && x <= b + tol)))
            throw PreconditionError("spectrum violates the gap precondition");
    }
    const Eigen::Index n = H.rows();
    Mat hp = Mat::Identity(n, n) - (2.0 / (b - a)) * (H - a * Mat::Identity(n, n));
    Mat t0 = Mat::Identity(n, n), t1 = hp;
    ChebyshevAgsp out;
    out.lemma_regime = 8 * gap <= (b - a) * (1 + 1e-12);
    if (m == 0) {
        out.A = t0;
    } else {
        for (int k = 1; k < m; ++k) {
            Mat t2 = 2.0 * hp * t1 - t0;
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        out.A = t1;
    }
    out.target = spectral_subspace(e, -std::numeric_limits<double>::infinity(), a - gap / 2);
    auto zp = out.target.perp();
    double lmin = lambda_min_psd(out.target.iso().adjoint() * out.A * out.target.iso());
    double leak = zp.dim() ? op_norm(out.A * zp.iso()) : 0.0;
    out.sigma = leak * leak / (lmin * lmin);
    out.bound = 2.0 * std::exp(-m * std::sqrt(2.0 * gap / (b - a)));
    return out;
}

RVec schmidt(const Vec& state, Eigen::Index dim_l, Eigen::Index dim_r) {
    if (state.size() != dim_l * dim_r) throw InvalidInput("cut does not factor the ambient dimension");
    if (std::abs(state.norm() - 1.0) > 1e-10) throw InvalidInput("state is not a unit vector");
    Eigen::Map<const Mat> zm(state.data(), dim_r, dim_l);
    Eigen::JacobiSVD<Mat> svd(zm);
    RVec s = svd.singularValues().array().square();
    return s;
}

double entanglement_entropy(const Vec& state, Eigen::Index dim_l, Eigen::Index dim_r) {
    RVec lam = schmidt(state, dim_l, dim_r);
    double s = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) > 0) s -= lam(i) * std::log(lam(i));
    return s;
}

ApproxProjectorReport check_approx_projector(const Mat& A, const Subspace& Z, double tol) {
    ApproxProjectorReport r;
    Mat p = Z.projector();
    r.commutator = op_norm(A * p - p * A);
    r.dilation = Z.dim() ? lambda_min_psd(Z.iso().adjoint() * A * Z.iso()) : 1.0;
    auto zp = Z.perp();
    double leak = zp.dim() ? op_norm(A * zp.iso()) : 0.0;
    r.sigma = leak * leak;
    r.is_ap = r.commutator <= tol && r.dilation >= 1.0 - tol;
    return r;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double op_norm(const Mat& A) {
    if (A.size() == 0) return 0.0;
    // largest eigenvalue of the smaller Gram matrix
    Mat g = A.rows() <= A.cols() ? Mat(A * A.adjoint()) : Mat(A.adjoint() * A);
    Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double herm_norm(const Mat& A) {
    if (A.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
    return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(A.rows() - 1)));
}

Mat permute_sites(const Mat& vecs, int q, const std::vector<int>& perm) {
    const int k = static_cast<int>(perm.size());
    const auto n = static_cast<Eigen::Index>(ipow(q, k));
    if (vecs.rows() != n) throw InvalidInput("register size does not match the permutation");
    std::vector<Eigen::Index> stride(k);
    for (int s = 0; s < k; ++s) stride[s] = static_cast<Eigen::Index>(ipow(q, k - 1 - s));
    Mat out(n, vecs.cols());
    std::vector<int> dig(k, 0);
    for (Eigen::Index idx = 0; idx < n; ++idx) {
        Eigen::Index old = 0;
        for (int i = 0; i < k; ++i) old += dig[i] * stride[perm[i]];
        out.row(idx) = vecs.row(old);
        for (int s = k - 1; s >= 0; --s) {
            if (++dig[s] < q) break;
            dig[s] = 0;
        }
    }
    return out;
}

Mat embed_operator(const Mat& op, int q, int k, const std::vector<int>& sites) {
    const int m = static_cast<int>(sites.size());
    const auto nsub = static_cast<Eigen::Index>(ipow(q, m));
    if (op.rows() != nsub || op.cols() != nsub) throw InvalidInput("operator does not match the site list");
    const auto n = static_cast<Eigen::Index>(ipow(q, k));
    std::vector<char> on(k, 0);
    for (int s : sites) {
        if (s < 0 || s >= k || on[s]) throw InvalidInput("bad site list");
        on[s] = 1;
    }
    // offset of each sub-index inside the full register
    std::vector<Eigen::Index> off(nsub, 0);
    for (Eigen::Index a = 0; a < nsub; ++a) {
        Eigen::Index rem = a;
        for (int i = m - 1; i >= 0; --i) {
            off[a] += (rem % q) * static_cast<Eigen::Index>(ipow(q, k - 1 - sites[i]));
            rem /= q;
        }
    }
    Mat out = Mat::Zero(n, n);
    for (Eigen::Index base = 0; base < n; ++base) {
        Eigen::Index rem = base;
        bool clean = true;
        for (int s = k - 1; s >= 0; --s) {
            if (on[s] && rem % q != 0) clean = false;
            rem /= q;
        }
        if (!clean) continue;
        for (Eigen::Index a = 0; a < nsub; ++a)
            for (Eigen::Index b = 0; b < nsub; ++b)
                if (op(a, b) != cplx(0)) out(base + off[a], base + off[b]) = op(a, b);
    }
    return out;
}

void apply_two_site(const Mat& term, int q, int k, int i, int j, const Mat& in, Mat& out, cplx scale) {
    const auto n = static_cast<Eigen::Index>(ipow(q, k));
    if (i == j || i < 0 || j < 0 || i >= k || j >= k) throw InvalidInput("bad site pair");
    if (in.rows() != n || out.rows() != n || out.cols() != in.cols()) throw InvalidInput("register size mismatch");
    const auto si = static_cast<Eigen::Index>(ipow(q, k - 1 - i));
    const auto sj = static_cast<Eigen::Index>(ipow(q, k - 1 - j));
    const int q2 = q * q;
    std::vector<Eigen::Index> off(q2);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) off[a * q + b] = a * si + b * sj;
    Mat g(q2, in.cols()), h(q2, in.cols());
    const Mat ts = scale * term;
    for (Eigen::Index base = 0; base < n; ++base) {
        if ((base / si) % q != 0 || (base / sj) % q != 0) continue;
        for (int a = 0; a < q2; ++a) g.row(a) = in.row(base + off[a]);
        h.noalias() = ts * g;
        for (int a = 0; a < q2; ++a) out.row(base + off[a]) += h.row(a);
    }
}

} // namespace metags
