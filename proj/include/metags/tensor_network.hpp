#pragma once

#include <memory>
#include <vector>

#include "json.hpp"

#include "metags/linalg.hpp"
#include "metags/meta_tree.hpp"

namespace metags {

// Shape shared by meta-TNs and meta-TNOs: a meta-branch of a META-tree.
class MetaBranch {
public:
    MetaBranch() = default;
    MetaBranch(std::shared_ptr<const MetaTree> mt, int root, int q);

    const MetaTree& meta() const { return *mt_; }
    std::shared_ptr<const MetaTree> meta_ptr() const { return mt_; }
    int root() const { return root_; }
    int q() const { return q_; }
    // members of the meta-branch, parents before children
    const std::vector<int>& members() const { return members_; }
    bool contains(int w) const { return w >= 0 && w < static_cast<int>(in_.size()) && in_[w]; }
    const std::vector<int>& sites(int w) const { return mt_->subtree(w).vertices; }
    Eigen::Index phys_dim(int w) const { return static_cast<Eigen::Index>(ipow(q_, static_cast<int>(sites(w).size()))); }
    // new site i (ascending vertex order) = old site perm[i] of the children's concatenated registers
    const std::vector<int>& child_perm(int w) const { return perm_.at(w); }

private:
    std::shared_ptr<const MetaTree> mt_;
    int root_ = 0;
    int q_ = 2;
    std::vector<int> members_;
    std::vector<char> in_;
    std::vector<std::vector<int>> perm_;
};

// rows of `in` carry a multi-index over `dims` (first most significant); apply X to factor i
Mat apply_factor(const Mat& in, const std::vector<Eigen::Index>& dims, int i, const Mat& X);

// Meta-TN. Tensor layout: rows = child bonds in META child order (first most significant),
// or the physical index at a vertex leaf (a single row at an edge leaf); columns = parent bond.
// The root's columns are the dimension index.
class MetaTN {
public:
    MetaTN() = default;
    MetaTN(MetaBranch shape, std::vector<Mat> tensors);
    // exact hierarchical decomposition of span(vecs); reduced-density eigenvalues <= tol are dropped
    static MetaTN from_dense(const MetaBranch& shape, const Mat& vecs, double tol = 1e-13);
    // product state: one vector per vertex of the branch
    static MetaTN product(const MetaBranch& shape, const std::vector<Vec>& local);

    const MetaBranch& shape() const { return shape_; }
    const Mat& tensor(int w) const { return tensors_.at(w); }
    Eigen::Index bond(int w) const { return tensors_.at(w).cols(); }
    Eigen::Index root_dim() const { return bond(shape_.root()); }
    Eigen::Index max_bond() const; // over non-root members

    // q^{|T^v|} x root_dim, one column per value of the dimension index
    Mat contract() const;
    Subspace encoded_subspace(double tol = 1e-10) const;
    // non-root tensors isometric, root isometric (regular form); rank-deficient bonds shrink
    MetaTN canonicalize() const;
    // density on the bond above w (canonical form required), so rho_{T^w} = M_w sigma M_w^dag
    Mat bond_density(int w) const;
    bool is_canonical(double tol = 1e-10) const;
    // xi-trimming relative to T^w (w not the root)
    MetaTN trim(int w, double xi) const;
    // trims every non-root member, deepest first, recanonicalizing in between
    MetaTN global_trim(double xi) const;
    MetaTN restrict_root(Eigen::Index target_dim, std::uint64_t seed) const;

    nlohmann::json to_json() const;
    static MetaTN from_json(const nlohmann::json& j, std::shared_ptr<const MetaTree> mt);

private:
    std::vector<Eigen::Index> child_dims(int w) const;
    MetaBranch shape_;
    std::vector<Mat> tensors_; // indexed by meta-vertex id, empty outside the branch
};

// Sparse meta-TNO. Internal meta-vertices hold entries (parent value, child values, coefficient);
// vertex leaves hold one q x q operator per bond value; edge leaves are the constant 1 on every value.
struct TnoEntry {
    int parent = 0;
    std::vector<int> children;
    cplx value = 1.0;
};

class MetaTNO {
public:
    MetaTNO() = default;
    explicit MetaTNO(MetaBranch shape);

    const MetaBranch& shape() const { return shape_; }
    int bond(int w) const { return bond_.at(w); }
    void set_bond(int w, int dim) { bond_.at(w) = dim; }
    std::vector<TnoEntry>& entries(int w) { return entries_.at(w); }
    const std::vector<TnoEntry>& entries(int w) const { return entries_.at(w); }
    std::vector<Mat>& leaf_ops(int w) { return leaf_ops_.at(w); }
    const std::vector<Mat>& leaf_ops(int w) const { return leaf_ops_.at(w); }
    int max_bond() const; // over non-root members

    // operator on H_{T^w} for every value of w's parent bond, for every member w
    std::vector<std::vector<Mat>> contract_all() const;
    std::vector<Mat> contract() const { return contract_all().at(shape_.root()); }

private:
    MetaBranch shape_;
    std::vector<int> bond_;
    std::vector<std::vector<TnoEntry>> entries_;
    std::vector<std::vector<Mat>> leaf_ops_;
};

// span{L psi : L in family, psi in span Gamma}; bond dims multiply, op index most significant
MetaTN apply_tno(const MetaTNO& ops, const MetaTN& tn);
// dense operator family as a meta-TNO with a single non-trivial tensor at the root
MetaTNO tno_from_dense(const MetaBranch& shape, const std::vector<Mat>& ops);

} // namespace metags
