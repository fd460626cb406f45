#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "metags/pap.hpp"
#include "metags/tensor_network.hpp"

namespace metags {

// Reference ground space by dense diagonalization, or ARPACK (matrix-free) above the dense budget.
struct GroundSpace {
    Subspace Z;
    RVec energies;       // lowest computed eigenvalues, ascending
    double E0 = 0;
    double gap = 0;      // E_D - E_0
    int D = 0;
    bool gapped = false; // an eigenvalue above E_0 + gap_tol was resolved
};
GroundSpace exact_ground_space(const LocalHamiltonian& h, double gap_tol = 1e-8, int nev = 8);

// r(eps) = r0 + r1 log2(1/eps), nonincreasing in eps
struct TrimPolicy {
    double r0 = 2;
    double r1 = 1;
    double r(double eps) const;
};

struct SolverParams {
    double gap = 0;          // promised Delta (required)
    int degeneracy = 1;      // promised D
    double eps = 1e-4;       // target closeness
    double delta = 0.1;      // per-level viability target
    double phi = 0.1;        // failure budget, theta = phi / n
    double xi = 0;           // 0: c_xi delta^2 / (n^2 r(delta/n)^2)
    double xi_final = 0;     // 0: c_xi_final eps^4 / (D^2 n^8)
    double c_xi = 1;
    double c_xi_final = 1;
    double c_iter = 1;       // final loop budget c_iter (n/Delta) ln(n/(eps Delta))
    double c_eps_final = 1;  // eps' = c eps^2 Delta^2 / n^2
    double trim_floor = 1e-14;
    int d_floor = 8;         // D'
    bool use_pap = false;    // try the PAP step before Rayleigh-Ritz (needs sigma |L|^2 <= delta, see README)
    int pap_max_sites = 6;   // dense PAP only on meta-vertices this small
    Eigen::Index dense_max = 1024; // largest T^v register truncated densely; above it H itself is used
    int retries = 3;
    PapParams pap{2, 1, 0, 0, 0, 0}; // k, L = 0: 40d and ceil(log2 n) + 3k
    TrimPolicy trim;
    std::uint64_t seed = 1;
    bool oracle = false;     // measure against the exact ground space

    nlohmann::json to_json() const;
    static SolverParams from_json(const nlohmann::json& j);
};

struct VertexTrace {
    int v = 0;
    int sites = 0;
    Eigen::Index dim_in = 0, dim_out = 0, max_bond = 0;
    double E_in = 0, E_out = 0;
    double ritz = 0;             // E_0 of the truncated Hamiltonian on the output
    double surrogate_error = 0;  // |H~ - H| bound on the relevant window when H is used matrix-free
    std::string path;            // "leaf", "pap", "rayleigh-ritz"
    int pap_dim = 0;
    int attempts = 0;
    double trimmed_weight = 0;
    // oracle only
    double E0_local = 0;
    double viability = -1;       // 1 - omega(V (x) H_rest; Z)
    bool precondition_ok = true; // E0 - k <= E_in <= E0
    double seconds = 0;
};

struct FinalTrace {
    int iterations = 0;
    int budget = 0;
    double eps_prime = 0;
    double xi_final = 0;
    bool trimmed = false;            // false when xi_final is below the numerical floor
    bool converged = false;
    std::vector<double> estimate;    // residual-based majorization error estimate per iteration
    std::vector<double> error;       // oracle majorization error per iteration
    std::vector<double> predicted;   // oracle: delta' = delta / (mu / sigma + delta) from the previous error
    double sqrt_sigma = 0;           // oracle: measured shrink of |EG| - H
};

struct SolveReport {
    Subspace output;
    MetaTN tn;
    RVec output_energies;
    double E0 = 0;
    double xi = 0;
    std::vector<VertexTrace> vertices;
    FinalTrace final;
    bool has_oracle = false;
    GroundSpace oracle;
    double delta = 1;                // closeness of the output to the oracle
    double markov = 1;               // |P_{Z perp} iota_out|^2
    double seconds = 0;
    SolverParams params;

    nlohmann::json to_json() const;
};

// Sample V of dimension floor(|W| / (2|L|)), apply L, trim at xi on the meta-branch below v.
Subspace enhance_step(const Subspace& W, const std::vector<Mat>& L, double xi, const MetaBranch& shape,
                      std::mt19937_64& rng);

struct EnhanceResult {
    Subspace V;
    double E = 0;
    VertexTrace trace;
};
// Enhance on the meta-vertex v with fused input W (register: VX(T^v) ascending)
EnhanceResult enhance(const LocalHamiltonian& h, std::shared_ptr<const MetaTree> mt, int v, const Subspace& W,
                      double E, const SolverParams& p, const GroundSpace* oracle = nullptr);

// A = |EG| - H; measured sqrt(sigma) against a ground space (dense only)
struct SimpleAgsp {
    Mat A;
    double sqrt_sigma = 1;
    double predicted = 1; // 1 - Delta / (|EG| - E0)
};
SimpleAgsp simple_agsp(const LocalHamiltonian& h, const GroundSpace& gs);

struct FinalResult {
    Subspace Y;
    FinalTrace trace;
};
FinalResult final_error_reduction(const LocalHamiltonian& h, std::shared_ptr<const MetaTree> mt, const Subspace& Y,
                                  const SolverParams& p, const GroundSpace* oracle = nullptr);

SolveReport gs(const LocalHamiltonian& h, const SolverParams& p);

} // namespace metags
