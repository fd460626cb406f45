#pragma once

#include <map>
#include <memory>
#include <vector>

#include "metags/hamiltonian.hpp"
#include "metags/meta_tree.hpp"
#include "metags/tensor_network.hpp"

namespace metags {

// edge id -> multiplicity >= 1
using Histogram = std::map<int, int>;
int mass(const Histogram& h);
Region support_closure(const InteractionTree& t, const Histogram& h);

// Closed subtrees containing x with at most L edges, sorted by (edge count, edges).
std::vector<Region> enumerate_l_trees(const InteractionTree& t, int x, int L);
// Same, restricted to allowed vertices and edges (an edge also needs both endpoints allowed).
std::vector<Region> enumerate_l_trees(const InteractionTree& t, int x, int L, const std::vector<char>& vmask,
                                      const std::vector<char>& emask);

// e^{-t H_edges} on the register of `vertices`
Mat exp_edges(const LocalHamiltonian& h, const std::vector<int>& vertices, const std::vector<int>& edges, double t);
// G_h(tH) = (-t)^{|h|}/|h|! * (sum of the ordered products with histogram h), on `vertices`
Mat g_term(const LocalHamiltonian& h, const Histogram& hist, double t, const std::vector<int>& vertices);
Mat g_term(const LocalHamiltonian& h, const Histogram& hist, double t);
// terms of e^{-tH_F} with support exactly F (a closed forest), on VX(F); by inclusion-exclusion
Mat g_plus(const LocalHamiltonian& h, const Region& forest, double t);

// Oracle: sum of G^+_S over every edge set S whose components have <= L edges. Region closed.
Mat trexp_direct(const LocalHamiltonian& h, const Region& region, double t, int L);
// Same operator by recursion on the smallest vertex, memoized on the remaining vertex set.
// The region is the induced forest on `vertices`.
Mat trexp(const LocalHamiltonian& h, const std::vector<int>& vertices, double t, int L);

// G_{h1+h2} against G_{h1} G_{h2}; throws PreconditionError if the support closures meet
bool homomorphism_check(const LocalHamiltonian& h, const Histogram& h1, const Histogram& h2, double t,
                        double tol = 1e-10);
// the same residual without the precondition (negative control)
double homomorphism_residual(const LocalHamiltonian& h, const Histogram& h1, const Histogram& h2, double t);

struct TceBound {
    double a = 0;        // 6d e^{2dt}(e^t - 1)
    bool valid = false;  // a < 1
    double bound = 0;    // e^{-t E0} (exp(n a^L / (1 - a)) - 1), +inf when invalid
};
TceBound tce_error_bound(int n, int d, double t, int L, double E0);

// Meta-TNO for the truncated cluster expansion on the meta-branch below `root`.
// Bond values of a non-root member w: decorated boundary stitchings (forest, i1 i2), grouped by forest,
// decoration index i1 * q^m + i2 over the forest's vertices inside T^w. The root has the single value 0.
struct TceNetwork {
    MetaTNO tno;
    std::vector<std::vector<Region>> stitchings; // blank stitchings per member
    std::vector<std::vector<int>> offsets;       // first bond value of each blank stitching
    std::vector<std::vector<std::vector<int>>> deco_vertices; // decorated vertices per blank stitching
    int L = 0;
    double t = 0;
};
TceNetwork build_tce_tno(const LocalHamiltonian& h, std::shared_ptr<const MetaTree> mt, int root, double t, int L);
// sum over blank stitchings of q^{2m}
int stitching_count(const TceNetwork& net, int w);

// E + eta * sum_j c_j trexp_L(-(j/eta)(H_R - E)) on the induced region of `vertices`; the shift is pulled
// out as e^{jE/eta}. When no component of the region exceeds L edges this is the soft truncation itself.
Mat efficient_truncate(const LocalHamiltonian& h, const std::vector<int>& vertices, double E, double eta, int k, int L);

} // namespace metags
