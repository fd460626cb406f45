#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "metags/core.hpp"

namespace metags {

// A subspace stored as an isometry with orthonormal columns.
class Subspace {
public:
    Subspace() = default;
    // columns must be orthonormal to 1e-10
    explicit Subspace(Mat iso);
    // orthonormal basis of the column span; singular values <= tol are dropped
    static Subspace span(const Mat& cols, double tol = 1e-10);
    static Subspace full(Eigen::Index ambient);
    static Subspace zero(Eigen::Index ambient);

    Eigen::Index ambient() const { return ambient_; }
    Eigen::Index dim() const { return iso_.cols(); }
    const Mat& iso() const { return iso_; }
    Mat projector() const { return iso_ * iso_.adjoint(); }
    // orthonormal basis of the complement
    Subspace perp() const;

private:
    Mat iso_;
    Eigen::Index ambient_ = 0;
};

struct ClosenessReport {
    RVec singular_values;   // of M = iota_Y^dag iota_Z, descending
    RVec angles;            // principal angles, ascending
    bool same_dim = false;
    bool bijective = false; // same dims and min singular value > 1e-9
    double delta = 1.0;     // 1 - min sigma^2 when bijective, else 1 (not close for any delta < 1)
    double omega = 0.0;     // omega(Y; Z)
};

// omega(Y;Z) = min over unit z in Z of |P_Y z|^2
double omega(const Subspace& Y, const Subspace& Z);
// 1 - omega(Y;Z)
double almost_majorization_error(const Subspace& Y, const Subspace& Z);
ClosenessReport closeness(const Subspace& Y, const Subspace& Z);

// Ambient space H_L (x) H_R with the L index most significant.
// Viability error of V (on L) for Z, i.e. 1 - omega(V (x) H_R; Z).
double viability(const Subspace& V, const Subspace& Z, Eigen::Index dim_l, Eigen::Index dim_r);
// (P_V (x) Id) Z, unnormalised columns
Mat apply_left(const Mat& op_l, const Mat& vecs, Eigen::Index dim_l, Eigen::Index dim_r);
// tr_R of sum_a |z_a><z_a|
Mat reduced_left(const Mat& vecs, Eigen::Index dim_l, Eigen::Index dim_r);
Mat reduced_right(const Mat& vecs, Eigen::Index dim_l, Eigen::Index dim_r);

Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
Mat haar_isometry(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
Mat random_hermitian(Eigen::Index n, std::mt19937_64& rng);
// Haar-random subspace of W of the given dimension
Subspace haar_sample(const Subspace& W, Eigen::Index target_dim, std::uint64_t seed);

struct Eigh {
    RVec values; // ascending
    Mat vectors;
};
// Hermitian eigendecomposition; uses the real solver when the input is real
Eigh eigh(const Mat& H);
// span of eigenvectors with eigenvalue in [lo, hi]
Subspace spectral_subspace(const Eigh& e, double lo, double hi);
Subspace bottom_subspace(const Eigh& e, Eigen::Index count);
Mat apply_function(const Eigh& e, const std::function<double(double)>& f);

struct ChebyshevAgsp {
    Mat A;
    double sigma = 1.0; // measured |A iota_{Z^perp}|^2 / lambda_min(iota_Z^dag A iota_Z)^2
    double bound = 2.0; // 2 exp(-m sqrt(2 Delta / (b - a)))
    Subspace target;    // spectral subspace below a
    bool lemma_regime = false; // 8 gap <= b - a, where the bound is guaranteed
};
// T_m(Id - 2(H - a)/(b - a)) by the three-term recurrence
ChebyshevAgsp chebyshev_agsp(const Mat& H, double a, double b, double gap, int m);

// squared Schmidt coefficients across L|R, descending
RVec schmidt(const Vec& state, Eigen::Index dim_l, Eigen::Index dim_r);
double entanglement_entropy(const Vec& state, Eigen::Index dim_l, Eigen::Index dim_r);

struct ApproxProjectorReport {
    double commutator = 0.0; // |[A, P_Z]|
    double dilation = 0.0;   // lambda_min(iota_Z^dag A iota_Z)
    double sigma = 0.0;      // |A iota_{Z^perp}|^2
    bool is_ap = false;
};
ApproxProjectorReport check_approx_projector(const Mat& A, const Subspace& Z, double tol = 1e-9);

// first factor most significant
Mat kron(const Mat& a, const Mat& b);
double op_norm(const Mat& A);
// largest |eigenvalue| of a Hermitian matrix
double herm_norm(const Mat& A);

// Qudit registers: k sites of dimension q, first site most significant.
// New register whose site i is old site perm[i].
Mat permute_sites(const Mat& vecs, int q, const std::vector<int>& perm);
// Embed an operator on the listed sites (in its own order) into k sites.
Mat embed_operator(const Mat& op, int q, int k, const std::vector<int>& sites);
// Apply a q^2 x q^2 two-site term on sites (i, j) to every column, matrix-free.
void apply_two_site(const Mat& term, int q, int k, int i, int j, const Mat& in, Mat& out, cplx scale = 1.0);

} // namespace metags
