#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

#include "metags/linalg.hpp"
#include "metags/tree.hpp"

namespace metags {

// Largest dense matrix dimension we are willing to build.
inline constexpr Eigen::Index kDenseBudget = 4096;
// Largest register handled by matrix-free code.
inline constexpr Eigen::Index kVectorBudget = Eigen::Index(1) << 20;

// H = sum over edges of H_e (x) Id. terms[e] acts on (edge(e).u, edge(e).v), u most significant.
class LocalHamiltonian {
public:
    LocalHamiltonian() = default;
    // validates shapes, hermiticity (1e-12) and |H_e| <= 1 + 1e-9
    LocalHamiltonian(InteractionTree t, std::vector<Mat> terms);

    const InteractionTree& tree() const { return tree_; }
    int q() const { return tree_.local_dim(); }
    int n() const { return tree_.n(); }
    const Mat& term(int e) const { return terms_.at(e); }
    const std::vector<Mat>& terms() const { return terms_; }

private:
    InteractionTree tree_;
    std::vector<Mat> terms_;
};

// (XX + YY + ZZ) / 3 on every edge
LocalHamiltonian heisenberg(const InteractionTree& t);
// -J ZZ - h (X_u / deg u + X_v / deg v) on every edge, so the fields sum to -h X on each vertex
LocalHamiltonian transverse_ising(const InteractionTree& t, double J, double h);
// Haar-random Hermitian terms rescaled to operator norm 1
LocalHamiltonian random_two_local(const InteractionTree& t, std::uint64_t seed);
LocalHamiltonian make_model(const std::string& name, const InteractionTree& t, const nlohmann::json& params);

nlohmann::json to_json(const LocalHamiltonian& h);
// terms are complex row-major matrices, interleaved re/im
LocalHamiltonian hamiltonian_from_json(const nlohmann::json& j, const InteractionTree& t);

// Dense H_R on the qudits of a closed region (vertex order ascending), summing the region's edges.
Mat assemble_dense(const LocalHamiltonian& h, const Region& r);
Mat assemble_dense(const LocalHamiltonian& h);
// Same sum over an arbitrary edge list, registered on `vertices` (ascending).
Mat assemble_dense(const LocalHamiltonian& h, const std::vector<int>& vertices, const std::vector<int>& edges);
// out = H_edges in, matrix-free, on the register of `vertices`
Mat apply_edges(const LocalHamiltonian& h, const std::vector<int>& vertices, const std::vector<int>& edges,
                const Mat& in);

// F_{E0 + eta}(H) with E0 from the eigendecomposition
Mat hard_truncate(const Mat& H, double eta);
// min(H, ceiling) with an explicit ceiling (running energy estimate in the solver)
Mat hard_truncate_at(const Mat& H, double ceiling);

using Rational = boost::multiprecision::cpp_rational;
// c_0 .. c_k of f_k(x) = sum_j c_j e^{-jx}, exact
std::vector<Rational> soft_trunc_coeffs(int k);
std::vector<double> soft_trunc_coeffs_double(int k);
// sum_{j=1}^k (1 - e^{-x})^j / j
double soft_f(double x, int k);

// E + eta f_k((H - E) / eta)
Mat soft_truncate(const Mat& H, double E, double eta, int k, bool verify_lower_bound = false);

struct SandwichReport {
    double lower_violation = 0; // lambda_max(lower - soft)
    double upper_violation = 0; // lambda_max(soft - upper)
    double dE = 0;
    bool ok = false;
};
// hard(eta - dE) - 2^{-0.66k} eta <= soft <= hard((1 + log k) eta), slack 1e-9
SandwichReport check_sandwich(const Mat& H, double E, double eta, int k);

// a_t = 6d e^{2dt} (e^t - 1)
double tce_a(int d, double t);
// the t solving a_t = 1/2
double tce_constant_c(int d);

// 96 sqrt2 d^{3/2} exp[(E_j - E0~ - eta + 33 |de L|) / (8d)]
double hard_trunc_gap_bound(int d, double eta, double Ej, double E0_truncated, int boundary_edges);

} // namespace metags
