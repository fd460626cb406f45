#pragma once

#include <random>
#include <vector>

#include "metags/cluster_expansion.hpp"
#include "metags/hamiltonian.hpp"

namespace metags {

// Operators on the register of `vertices` (ascending), stored as HS-orthonormal columns vec(O) (column-major).
class OperatorSubspace {
public:
    OperatorSubspace() = default;
    OperatorSubspace(std::vector<int> vertices, int q);
    // adds span(ops); generators are normalized first, rank tolerance 1e-10
    void add(const std::vector<Mat>& ops);
    void add(const Mat& op) { add(std::vector<Mat>{op}); }

    const std::vector<int>& vertices() const { return vertices_; }
    Eigen::Index op_dim() const { return op_dim_; }
    Eigen::Index dim() const { return basis_.cols(); }
    bool full() const { return dim() == op_dim_ * op_dim_; }
    const Mat& basis() const { return basis_; }
    Mat op(Eigen::Index i) const;
    std::vector<Mat> ops() const;
    // |O - P_L O|_HS / |O|_HS (0 for O = 0)
    double residual(const Mat& O) const;

private:
    std::vector<int> vertices_;
    int q_ = 2;
    Eigen::Index op_dim_ = 1;
    Mat basis_;
};

// padded region on {x : dist(x, R) <= r}
std::vector<int> padded(const InteractionTree& t, const std::vector<int>& region, int r);
// vertex shell: the boundary of the padded region
std::vector<int> vertex_shell(const InteractionTree& t, const std::vector<int>& region, int r);

struct ShellBasis {
    std::vector<int> vertices; // register: padded region
    std::vector<int> shell;
    std::vector<Mat> ops;      // Id (x) |i><j|_x, x in the shell, index (x, i, j)
};
ShellBasis sigma_shell(const InteractionTree& t, const std::vector<int>& region, int r);

// E_0 = edges of R, E_r = edges of pad(R, r) not in pad(R, r - 1)
std::vector<std::vector<int>> edge_shells(const InteractionTree& t, const std::vector<int>& region, int s);

// sum_j 2^{omega_j} H_j over the given shell operators (all on one register)
Mat weighted_hamiltonian(const std::vector<Mat>& shells, const std::vector<int>& omega);
// c[b][j]: f_b(x) = sum_j c[b][j] x^j with f_b(2^nu) = delta_{b nu}, nu = 0..m
std::vector<std::vector<double>> span_lemma_coeffs(int m);

// A-support of operators on A (x) B; A is the listed sites of the register (positions), B the rest
std::vector<Mat> left_support_ops(const Mat& O, int q, int k, const std::vector<int>& a_sites);
OperatorSubspace left_support(const std::vector<Mat>& ops, int q, const std::vector<int>& reg,
                              const std::vector<int>& a_vertices);

struct LmReport {
    OperatorSubspace L;
    long products = 0;     // products generated
    long index_sets = 0;   // (r, omega, a) triples
    int ell = 0;
};
// m-powered operator subspace: H0 acts on R (the region's register), shells 1..s from the tree's terms
LmReport build_Lm(const LocalHamiltonian& h, const std::vector<int>& region, const Mat& H0, int m, int s);

// generators of S = C H_{pad(R, s)} + lin(shell_s), on the pad(R, s) register
struct ViabilityTarget {
    std::vector<int> vertices;
    std::vector<Mat> generators;
};
ViabilityTarget viability_target(const LocalHamiltonian& h, const std::vector<int>& region, const Mat& H0, int s);

struct ViabilityReport {
    double max_residual = 0;
    long products = 0;
    bool exhaustive = false;
};
// products of <= m generators (and Id); every product if there are at most `budget`, else `samples` random ones
ViabilityReport check_degree_viability(const OperatorSubspace& L, const ViabilityTarget& S, int m,
                                       std::mt19937_64& rng, long budget = 20000, long samples = 200);

struct PapParams {
    int m = 2;
    int s = 1;
    int k = 3;
    int L = 4;
    double E = 0;    // lower bound on E_0(H_{T^v})
    double eta = 0;  // 0: 2k / c
};
struct PapReport {
    OperatorSubspace L;
    Mat truncated;   // efficient truncation of H_R
    double sigma_measured = 1;
    double sigma_bound = 2;
    double agsp_residual = 1; // distance of the AGSP from L (x) lin(complement)
    bool measured = false;
};
// L_m applied to the efficient truncation of H_R plus the barrier shells. When the whole tree fits the
// dense budget, sigma is measured from the Chebyshev AGSP of H~ = trunc(H_R) + H_barrier + hard(H_out)
// against its D lowest states.
PapReport build_efficient_pap(const LocalHamiltonian& h, const std::vector<int>& region, const PapParams& p,
                              int D = 1);

} // namespace metags
