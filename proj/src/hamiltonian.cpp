#include "metags/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace metags {

namespace {

Mat pauli(char c) {
    Mat m = Mat::Zero(2, 2);
    switch (c) {
    case 'x': m(0, 1) = m(1, 0) = 1; break;
    case 'y': m(0, 1) = cplx(0, -1); m(1, 0) = cplx(0, 1); break;
    case 'z': m(0, 0) = 1; m(1, 1) = -1; break;
    default: m = Mat::Identity(2, 2);
    }
    return m;
}

// positions of `vertices` (ascending) and a check that every edge lies inside
std::vector<int> site_index(const InteractionTree& t, const std::vector<int>& vertices,
                            const std::vector<int>& edges) {
    std::vector<int> pos(t.n(), -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        int v = vertices[i];
        if (v < 0 || v >= t.n()) throw InvalidInput("vertex id out of range");
        if (i > 0 && vertices[i - 1] >= v) throw InvalidInput("vertex list must be strictly ascending");
        pos[v] = static_cast<int>(i);
    }
    for (int e : edges) {
        if (e < 0 || e >= t.num_edges()) throw InvalidInput("edge id out of range");
        if (pos[t.edge(e).u] < 0 || pos[t.edge(e).v] < 0) throw InvalidInput("edge endpoint outside the register");
    }
    return pos;
}

void check_hermitian(const Mat& H) {
    if (H.rows() != H.cols()) throw InvalidInput("operator is not square");
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, H.cwiseAbs().maxCoeff()))
        throw InvalidInput("operator is not Hermitian");
}

} // namespace

LocalHamiltonian::LocalHamiltonian(InteractionTree t, std::vector<Mat> terms)
    : tree_(std::move(t)), terms_(std::move(terms)) {
    if (static_cast<int>(terms_.size()) != tree_.num_edges()) throw InvalidInput("one term per edge required");
    const Eigen::Index q2 = Eigen::Index(q()) * q();
    for (const auto& h : terms_) {
        if (h.rows() != q2 || h.cols() != q2) throw InvalidInput("edge term must be q^2 x q^2");
        if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InvalidInput("edge term is not Hermitian");
        if (herm_norm(h) > 1 + 1e-9) throw InvalidInput("edge term has operator norm above 1");
    }
}

LocalHamiltonian heisenberg(const InteractionTree& t) {
    if (t.local_dim() != 2) throw InvalidInput("Heisenberg model needs q = 2");
    Mat h = (kron(pauli('x'), pauli('x')) + kron(pauli('y'), pauli('y')) + kron(pauli('z'), pauli('z'))) / 3.0;
    return LocalHamiltonian(t, std::vector<Mat>(t.num_edges(), h));
}

LocalHamiltonian transverse_ising(const InteractionTree& t, double J, double h) {
    if (t.local_dim() != 2) throw InvalidInput("Ising model needs q = 2");
    std::vector<Mat> terms;
    const Mat id = Mat::Identity(2, 2);
    for (const auto& e : t.edges()) {
        Mat m = -J * kron(pauli('z'), pauli('z')) - (h / t.degree(e.u)) * kron(pauli('x'), id) -
                (h / t.degree(e.v)) * kron(id, pauli('x'));
        terms.push_back(m);
    }
    return LocalHamiltonian(t, std::move(terms));
}

LocalHamiltonian random_two_local(const InteractionTree& t, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int q2 = t.local_dim() * t.local_dim();
    std::vector<Mat> terms;
    for (int e = 0; e < t.num_edges(); ++e) {
        Mat m = random_hermitian(q2, rng);
        m = 0.5 * (m + m.adjoint()).eval();
        terms.push_back(m / herm_norm(m));
    }
    return LocalHamiltonian(t, std::move(terms));
}

LocalHamiltonian make_model(const std::string& name, const InteractionTree& t, const nlohmann::json& params) {
    if (name == "heisenberg") return heisenberg(t);
    if (name == "ising" || name == "tfim")
        return transverse_ising(t, params.value("J", 0.25), params.value("h", 0.5));
    if (name == "random") return random_two_local(t, params.value("seed", std::uint64_t{0}));
    throw InvalidInput("unknown model '" + name + "'");
}

nlohmann::json to_json(const LocalHamiltonian& h) {
    nlohmann::json j;
    j["tree_hash"] = std::to_string(h.tree().hash());
    j["local_dim"] = h.q();
    auto& terms = j["terms"] = nlohmann::json::array();
    for (int e = 0; e < h.tree().num_edges(); ++e) {
        std::vector<double> flat;
        const Mat& m = h.term(e);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                flat.push_back(m(r, c).real());
                flat.push_back(m(r, c).imag());
            }
        terms.push_back({{"edge", {h.tree().edge(e).u, h.tree().edge(e).v}}, {"matrix", flat}});
    }
    return j;
}

LocalHamiltonian hamiltonian_from_json(const nlohmann::json& j, const InteractionTree& t) {
    try {
        if (j.contains("model")) return make_model(j.at("model").get<std::string>(), t, j.value("params", nlohmann::json::object()));
        if (j.contains("tree_hash") && j.at("tree_hash").get<std::string>() != std::to_string(t.hash()))
            throw InvalidInput("Hamiltonian was written for a different tree");
        if (j.at("local_dim").get<int>() != t.local_dim()) throw InvalidInput("local dimension mismatch");
        const int q2 = t.local_dim() * t.local_dim();
        std::vector<Mat> terms(t.num_edges());
        std::vector<char> seen(t.num_edges(), 0);
        for (const auto& item : j.at("terms")) {
            auto uv = item.at("edge").get<std::vector<int>>();
            if (uv.size() != 2) throw InvalidInput("edge must have two endpoints");
            int e = t.edge_id(uv[0], uv[1]);
            if (e < 0) throw InvalidInput("term on a pair that is not an edge");
            if (seen[e]) throw InvalidInput("duplicate edge term");
            seen[e] = 1;
            auto flat = item.at("matrix").get<std::vector<double>>();
            if (static_cast<int>(flat.size()) != 2 * q2 * q2) throw InvalidInput("matrix has the wrong size");
            Mat m(q2, q2);
            for (int r = 0; r < q2; ++r)
                for (int c = 0; c < q2; ++c) m(r, c) = cplx(flat[2 * (r * q2 + c)], flat[2 * (r * q2 + c) + 1]);
            if (uv[0] > uv[1]) { // stored as (v, u): swap the two tensor factors
                std::vector<int> perm{1, 0};
                m = permute_sites(permute_sites(m, t.local_dim(), perm).adjoint(), t.local_dim(), perm).adjoint();
            }
            terms[e] = m;
        }
        if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw InvalidInput("missing edge term");
        return LocalHamiltonian(t, std::move(terms));
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidInput(std::string("bad Hamiltonian JSON: ") + ex.what());
    }
}

Mat assemble_dense(const LocalHamiltonian& h, const std::vector<int>& vertices, const std::vector<int>& edges) {
    const auto& t = h.tree();
    auto pos = site_index(t, vertices, edges);
    const int k = static_cast<int>(vertices.size());
    const double dim = std::pow(double(h.q()), k);
    if (dim > double(kDenseBudget)) throw BudgetExceeded("dense operator dimension over budget");
    const auto n = static_cast<Eigen::Index>(dim);
    Mat out = Mat::Zero(n, n);
    if (edges.empty()) return out;
    Mat id = Mat::Identity(n, n);
    for (int e : edges) apply_two_site(h.term(e), h.q(), k, pos[t.edge(e).u], pos[t.edge(e).v], id, out);
    return out;
}

Mat assemble_dense(const LocalHamiltonian& h, const Region& r) {
    if (!is_closed(h.tree(), r)) throw InvalidInput("region must be closed");
    return assemble_dense(h, r.vertices, r.edges);
}

Mat assemble_dense(const LocalHamiltonian& h) { return assemble_dense(h, whole_tree(h.tree())); }

Mat apply_edges(const LocalHamiltonian& h, const std::vector<int>& vertices, const std::vector<int>& edges,
                const Mat& in) {
    const auto& t = h.tree();
    auto pos = site_index(t, vertices, edges);
    const int k = static_cast<int>(vertices.size());
    if (std::pow(double(h.q()), k) > double(kVectorBudget)) throw BudgetExceeded("register over budget");
    Mat out = Mat::Zero(in.rows(), in.cols());
    for (int e : edges) apply_two_site(h.term(e), h.q(), k, pos[t.edge(e).u], pos[t.edge(e).v], in, out);
    return out;
}

Mat hard_truncate_at(const Mat& H, double ceiling) {
    check_hermitian(H);
    auto e = eigh(H);
    return apply_function(e, [&](double x) { return std::min(x, ceiling); });
}

Mat hard_truncate(const Mat& H, double eta) {
    check_hermitian(H);
    if (H.rows() == 0) return H;
    auto e = eigh(H);
    const double ceiling = e.values(0) + eta;
    return apply_function(e, [&](double x) { return std::min(x, ceiling); });
}

std::vector<Rational> soft_trunc_coeffs(int k) {
    if (k < 1) throw InvalidInput("soft truncation degree must be >= 1");
    std::vector<Rational> c(k + 1);
    Rational harmonic = 0;
    boost::multiprecision::cpp_int binom = 1; // C(k, j)
    for (int j = 1; j <= k; ++j) {
        harmonic += Rational(1, j);
        binom = binom * (k - j + 1) / j;
        c[j] = Rational(binom, j) * (j % 2 ? -1 : 1);
    }
    c[0] = harmonic;
    return c;
}

std::vector<double> soft_trunc_coeffs_double(int k) {
    auto c = soft_trunc_coeffs(k);
    std::vector<double> out;
    for (const auto& x : c) out.push_back(static_cast<double>(x));
    return out;
}

double soft_f(double x, int k) {
    if (k < 1) throw InvalidInput("soft truncation degree must be >= 1");
    const double y = -std::expm1(-x);
    double s = 0, p = 1;
    for (int j = 1; j <= k; ++j) {
        p *= y;
        s += p / j;
    }
    return s;
}

Mat soft_truncate(const Mat& H, double E, double eta, int k, bool verify_lower_bound) {
    if (!(eta > 0)) throw InvalidInput("eta must be positive");
    check_hermitian(H);
    auto e = eigh(H);
    if (verify_lower_bound && e.values.size() && e.values(0) < E - 1e-12)
        throw PreconditionError("E is not a lower bound on the spectrum");
    return apply_function(e, [&](double x) { return E + eta * soft_f((x - E) / eta, k); });
}

SandwichReport check_sandwich(const Mat& H, double E, double eta, int k) {
    if (k <= 2) throw PreconditionError("sandwich bounds need k > 2");
    check_hermitian(H);
    auto e = eigh(H);
    SandwichReport r;
    r.dE = e.values(0) - E;
    if (r.dE < -1e-12) throw PreconditionError("E is not a lower bound on the spectrum");
    Mat soft = soft_truncate(H, E, eta, k);
    const Eigen::Index n = H.rows();
    Mat lower = hard_truncate(H, eta - r.dE) - std::pow(2.0, -0.66 * k) * eta * Mat::Identity(n, n);
    Mat upper = hard_truncate(H, (1 + std::log(double(k))) * eta);
    r.lower_violation = eigh(lower - soft).values.maxCoeff();
    r.upper_violation = eigh(soft - upper).values.maxCoeff();
    r.ok = r.lower_violation <= 1e-9 && r.upper_violation <= 1e-9;
    return r;
}

double tce_a(int d, double t) { return 6.0 * d * std::exp(2.0 * d * t) * std::expm1(t); }

double tce_constant_c(int d) {
    if (d < 1) throw InvalidInput("d must be >= 1");
    double lo = 0, hi = 1;
    while (tce_a(d, hi) < 0.5) hi *= 2;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (tce_a(d, mid) < 0.5 ? lo : hi) = mid;
    }
    return lo;
}

double hard_trunc_gap_bound(int d, double eta, double Ej, double E0_truncated, int boundary_edges) {
    return 96 * std::sqrt(2.0) * std::pow(double(d), 1.5) *
           std::exp((Ej - E0_truncated - eta + 33.0 * boundary_edges) / (8.0 * d));
}

} // namespace metags
