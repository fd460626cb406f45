#include "metags/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include <arpack/arpack.h>

namespace metags {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// METAGS_LOG=info|debug
int log_level() {
    static const int level = [] {
        const char* s = std::getenv("METAGS_LOG");
        if (!s) return 0;
        std::string v(s);
        if (v == "debug") return 2;
        if (v == "info" || v == "1") return 1;
        return 0;
    }();
    return level;
}

template <class... A>
void log(int level, const A&... a) {
    if (log_level() < level) return;
    std::cerr << "[metags] ";
    (std::cerr << ... << a);
    std::cerr << '\n';
}

std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

Mat orthonormalize(const Mat& X, double tol = 1e-12) { return Subspace::span(X, tol).iso(); }

// lowest eigenpairs of a Hermitian operator given matrix-free, shift-free Lanczos-Arnoldi
Eigh arpack_lowest(Eigen::Index N, int nev, const std::function<Mat(const Mat&)>& apply) {
    a_int n = static_cast<a_int>(N);
    a_int ncv = std::min<a_int>(n, std::max<a_int>(2 * nev + 1, 24));
    a_int ldv = n;
    a_int lworkl = 3 * ncv * ncv + 5 * ncv;
    std::vector<cplx> resid(n), v(static_cast<std::size_t>(n) * ncv), workd(3 * static_cast<std::size_t>(n)),
        workl(lworkl);
    std::vector<double> rwork(ncv);
    a_int iparam[11] = {}, ipntr[14] = {};
    iparam[0] = 1;
    iparam[2] = 5000;
    iparam[6] = 1;
    // deterministic start vector
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> g;
    for (auto& r : resid) r = cplx(g(rng), g(rng));
    a_int info = 1, ido = 0;
    const double tol = 1e-13;
    auto z = [](cplx* p) { return reinterpret_cast<double _Complex*>(p); };
    while (true) {
        znaupd_c(&ido, "I", n, "SR", nev, tol, z(resid.data()), ncv, z(v.data()), ldv, iparam, ipntr,
                 z(workd.data()), z(workl.data()), lworkl, rwork.data(), &info);
        if (ido == -1 || ido == 1) {
            Eigen::Map<Mat> x(workd.data() + ipntr[0] - 1, n, 1);
            Eigen::Map<Mat> y(workd.data() + ipntr[1] - 1, n, 1);
            y = apply(x);
        } else {
            break;
        }
    }
    if (info < 0) throw NumericalError("znaupd failed with info " + std::to_string(info));
    std::vector<a_int> select(ncv);
    std::vector<cplx> d(nev + 1), workev(2 * static_cast<std::size_t>(ncv));
    Mat Zv(n, nev);
    double _Complex sigma = 0;
    a_int rvec = 1;
    zneupd_c(rvec, "A", select.data(), z(d.data()), z(Zv.data()), n, sigma, z(workev.data()), "I", n, "SR", nev, tol,
             z(resid.data()), ncv, z(v.data()), ldv, iparam, ipntr, z(workd.data()), z(workl.data()), lworkl,
             rwork.data(), &info);
    if (info != 0) throw NumericalError("zneupd failed with info " + std::to_string(info));
    a_int nconv = iparam[4];
    if (nconv < nev) throw NumericalError("ARPACK converged " + std::to_string(nconv) + " of " + std::to_string(nev));
    // Rayleigh-Ritz on the returned block cleans up ordering and near-degenerate mixing
    Mat Q = orthonormalize(Zv, 1e-10);
    Mat HQ = apply(Q);
    Mat M = Q.adjoint() * HQ;
    M = (M + M.adjoint()).eval() * 0.5;
    auto e = eigh(M);
    Eigh out;
    out.values = e.values;
    out.vectors = Q * e.vectors;
    Mat R = apply(out.vectors) - out.vectors * e.values.cast<cplx>().asDiagonal();
    for (Eigen::Index i = 0; i < R.cols(); ++i)
        if (R.col(i).norm() > 1e-7 * std::max(1.0, std::abs(e.values(i))))
            throw NumericalError("ARPACK eigenpair residual too large");
    return out;
}

// edges with exactly one endpoint among verts
std::vector<int> cut_edges(const InteractionTree& t, const std::vector<int>& verts) {
    std::vector<char> in(t.n(), 0);
    for (int x : verts) in[x] = 1;
    std::vector<int> c;
    for (int e = 0; e < t.num_edges(); ++e)
        if (in[t.edge(e).u] != in[t.edge(e).v]) c.push_back(e);
    return c;
}

int default_k(const InteractionTree& t) { return 40 * t.d(); }

// 1 - omega(V (x) H_rest; Z) with V on the sorted register `verts`
double local_viability(const Subspace& V, const std::vector<int>& verts, const Subspace& Z, int q, int n) {
    std::vector<int> perm = verts;
    std::vector<char> in(n, 0);
    for (int x : verts) in[x] = 1;
    for (int x = 0; x < n; ++x)
        if (!in[x]) perm.push_back(x);
    Mat Zp = permute_sites(Z.iso(), q, perm);
    auto dl = static_cast<Eigen::Index>(ipow(q, static_cast<int>(verts.size())));
    return viability(V, Subspace(Zp), dl, Zp.rows() / dl);
}

} // namespace

double TrimPolicy::r(double eps) const {
    if (!(eps > 0)) throw InvalidInput("trim policy needs eps > 0");
    return r0 + r1 * std::max(0.0, std::log2(1.0 / eps));
}

nlohmann::json SolverParams::to_json() const {
    nlohmann::json j;
    j["gap"] = gap;
    j["degeneracy"] = degeneracy;
    j["eps"] = eps;
    j["delta"] = delta;
    j["phi"] = phi;
    j["xi"] = xi;
    j["xi_final"] = xi_final;
    j["c_xi"] = c_xi;
    j["c_xi_final"] = c_xi_final;
    j["c_iter"] = c_iter;
    j["c_eps_final"] = c_eps_final;
    j["trim_floor"] = trim_floor;
    j["d_floor"] = d_floor;
    j["use_pap"] = use_pap;
    j["pap_max_sites"] = pap_max_sites;
    j["dense_max"] = dense_max;
    j["retries"] = retries;
    j["pap"] = {{"m", pap.m}, {"s", pap.s}, {"k", pap.k}, {"L", pap.L}, {"eta", pap.eta}};
    j["trim"] = {{"r0", trim.r0}, {"r1", trim.r1}};
    j["seed"] = seed;
    j["oracle"] = oracle;
    return j;
}

SolverParams SolverParams::from_json(const nlohmann::json& j) {
    SolverParams p;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("gap", p.gap);
    get("degeneracy", p.degeneracy);
    get("eps", p.eps);
    get("delta", p.delta);
    get("phi", p.phi);
    get("xi", p.xi);
    get("xi_final", p.xi_final);
    get("c_xi", p.c_xi);
    get("c_xi_final", p.c_xi_final);
    get("c_iter", p.c_iter);
    get("c_eps_final", p.c_eps_final);
    get("trim_floor", p.trim_floor);
    get("d_floor", p.d_floor);
    get("use_pap", p.use_pap);
    get("pap_max_sites", p.pap_max_sites);
    get("dense_max", p.dense_max);
    get("retries", p.retries);
    get("seed", p.seed);
    get("oracle", p.oracle);
    if (j.contains("pap")) {
        const auto& a = j.at("pap");
        if (a.contains("m")) p.pap.m = a.at("m");
        if (a.contains("s")) p.pap.s = a.at("s");
        if (a.contains("k")) p.pap.k = a.at("k");
        if (a.contains("L")) p.pap.L = a.at("L");
        if (a.contains("eta")) p.pap.eta = a.at("eta");
    }
    if (j.contains("trim")) {
        const auto& a = j.at("trim");
        if (a.contains("r0")) p.trim.r0 = a.at("r0");
        if (a.contains("r1")) p.trim.r1 = a.at("r1");
    }
    return p;
}

GroundSpace exact_ground_space(const LocalHamiltonian& h, double gap_tol, int nev) {
    const int n = h.n();
    const int q = h.q();
    const auto N = static_cast<Eigen::Index>(ipow(q, n));
    if (N > kVectorBudget) throw BudgetExceeded("register exceeds the vector budget");
    GroundSpace g;
    Eigh e;
    auto count_low = [&](const RVec& vals) {
        double cut = vals(0) + gap_tol * std::max(1.0, std::abs(vals(0)));
        int D = 0;
        while (D < vals.size() && vals(D) <= cut) ++D;
        return D;
    };
    // a dense 4096 eigensolve costs minutes on one core; Lanczos takes over well before that
    if (N <= 1024) {
        e = eigh(assemble_dense(h));
    } else {
        auto all = iota_vec(n);
        std::vector<int> edges = iota_vec(h.tree().num_edges());
        auto apply = [&](const Mat& x) { return apply_edges(h, all, edges, x); };
        int k = std::max(2, nev);
        while (true) {
            e = arpack_lowest(N, k, apply);
            if (count_low(e.values) < k || 2 * k > std::min<Eigen::Index>(N - 2, 128)) break;
            k *= 2;
        }
    }
    g.D = count_low(e.values);
    g.E0 = e.values(0);
    g.gapped = g.D < e.values.size();
    g.gap = g.gapped ? e.values(g.D) - g.E0 : 0.0;
    g.energies = e.values.head(std::min<Eigen::Index>(e.values.size(), 64));
    g.Z = Subspace::span(e.vectors.leftCols(g.D));
    return g;
}

SimpleAgsp simple_agsp(const LocalHamiltonian& h, const GroundSpace& gs) {
    const auto N = static_cast<Eigen::Index>(ipow(h.q(), h.n()));
    if (N > kDenseBudget) throw BudgetExceeded("simple AGSP is measured densely");
    if (!gs.gapped) throw PreconditionError("simple AGSP needs a resolved gap");
    SimpleAgsp out;
    const double EG = h.tree().num_edges();
    out.A = EG * Mat::Identity(N, N) - assemble_dense(h);
    const Mat& Z = gs.Z.iso();
    Mat M = Z.adjoint() * out.A * Z;
    M = (M + M.adjoint()).eval() * 0.5;
    double lam = eigh(M).values(0);
    out.sqrt_sigma = op_norm(out.A * gs.Z.perp().iso()) / lam;
    out.predicted = 1.0 - gs.gap / (EG - gs.E0);
    return out;
}

Subspace enhance_step(const Subspace& W, const std::vector<Mat>& L, double xi, const MetaBranch& shape,
                      std::mt19937_64& rng) {
    if (L.empty()) throw InvalidInput("enhance needs a non-empty operator family");
    const auto target = W.dim() / (2 * static_cast<Eigen::Index>(L.size()));
    if (target < 1) throw PreconditionError("enhance needs |W| >= 2|L|");
    Subspace V = haar_sample(W, target, rng());
    Mat cols(W.ambient(), target * static_cast<Eigen::Index>(L.size()));
    for (std::size_t i = 0; i < L.size(); ++i) {
        if (L[i].rows() != W.ambient() || L[i].cols() != W.ambient()) throw InvalidInput("operator shape mismatch");
        cols.middleCols(static_cast<Eigen::Index>(i) * target, target) = L[i] * V.iso();
    }
    Subspace out = Subspace::span(cols);
    if (xi > 0 && out.dim() > 0) {
        Mat trimmed = MetaTN::from_dense(shape, out.iso()).global_trim(xi).contract();
        out = Subspace::span(trimmed);
    }
    return out;
}

EnhanceResult enhance(const LocalHamiltonian& h, std::shared_ptr<const MetaTree> mt, int v, const Subspace& W,
                      double E, const SolverParams& p, const GroundSpace* oracle) {
    auto t0 = Clock::now();
    const auto& t = h.tree();
    const int q = h.q();
    const auto& verts = mt->subtree(v).vertices;
    const int k = static_cast<int>(verts.size());
    const auto N = static_cast<Eigen::Index>(ipow(q, k));
    if (W.ambient() != N) throw InvalidInput("input subspace does not live on the meta-vertex register");
    auto edges = internal_edges(t, verts);
    const int cut = static_cast<int>(cut_edges(t, verts).size());
    const int kk = p.pap.k > 0 ? p.pap.k : default_k(t);
    const double eta = p.pap.eta > 0 ? p.pap.eta : 2.0 * kk / tce_constant_c(t.d());
    const int Lcut = p.pap.L > 0 ? p.pap.L : static_cast<int>(std::ceil(std::log2(std::max(2, t.n())))) + 3 * kk;
    const double xi = p.xi > 0 ? p.xi
                               : p.c_xi * p.delta * p.delta /
                                     (double(t.n()) * t.n() * std::pow(p.trim.r(p.delta / t.n()), 2));

    EnhanceResult res;
    VertexTrace& tr = res.trace;
    tr.v = v;
    tr.sites = k;
    tr.dim_in = W.dim();
    tr.E_in = E;

    const bool dense = N <= p.dense_max;
    Mat Ht;
    if (dense) Ht = efficient_truncate(h, verts, E, eta, kk, Lcut);
    auto apply_t = [&](const Mat& X) -> Mat { return dense ? Mat(Ht * X) : apply_edges(h, verts, edges, X); };

    const MetaBranch shape(mt, v, q);
    Subspace V;
    double ritz0 = 0;

    // PAP only where it can be certified densely; everywhere else Rayleigh-Ritz compression
    bool done = false;
    // the certificate sigma |L|^2 <= delta needs the whole tree densely
    const bool certifiable = static_cast<Eigen::Index>(ipow(q, t.n())) <= p.dense_max;
    if (p.use_pap && dense && certifiable && k <= p.pap_max_sites && W.dim() > 2) {
        PapParams pp = p.pap;
        pp.k = kk;
        pp.L = Lcut;
        pp.E = E;
        pp.eta = eta;
        auto rep = build_efficient_pap(h, verts, pp, p.degeneracy);
        tr.pap_dim = static_cast<int>(rep.L.dim());
        const double ld = static_cast<double>(rep.L.dim());
        if (rep.measured && W.dim() > 2 * rep.L.dim() && rep.sigma_measured * ld * ld <= p.delta) {
            std::mt19937_64 rng(p.seed * 1000003ULL + static_cast<std::uint64_t>(v));
            for (int a = 1; a <= p.retries && !done; ++a) {
                tr.attempts = a;
                Subspace cand = enhance_step(W, rep.L.ops(), xi, shape, rng);
                if (cand.dim() == 0) continue;
                Mat M = cand.iso().adjoint() * apply_t(cand.iso());
                ritz0 = eigh((M + M.adjoint()) * 0.5).values(0);
                V = cand;
                done = true;
                tr.path = "pap";
            }
        }
    }
    if (!done) {
        Mat HW = W.iso().adjoint() * apply_t(W.iso());
        HW = (HW + HW.adjoint()).eval() * 0.5;
        auto e = eigh(HW);
        const Eigen::Index keep = std::min<Eigen::Index>(W.dim(), std::max(p.d_floor, p.degeneracy));
        Mat X = W.iso() * e.vectors.leftCols(keep);
        Subspace before(orthonormalize(X));
        Mat trimmed = MetaTN::from_dense(shape, before.iso()).global_trim(xi).contract();
        V = Subspace::span(trimmed);
        tr.trimmed_weight = V.dim() > 0 ? almost_majorization_error(V, before) : 1.0;
        Mat M = V.iso().adjoint() * apply_t(V.iso());
        auto ev = eigh((M + M.adjoint()) * 0.5);
        ritz0 = ev.values(0);
        tr.attempts = 1;
        tr.path = "rayleigh-ritz";
        if (!dense) {
            // deviation of E + eta f_k((x - E)/eta) from x over the Ritz window
            double lo = std::max(0.0, ev.values(0) - E), hi = std::max(lo, ev.values(ev.values.size() - 1) - E);
            double dev = 0;
            for (int i = 0; i <= 200; ++i) {
                double y = lo + (hi - lo) * i / 200.0;
                dev = std::max(dev, std::abs(y - eta * soft_f(y / eta, kk)));
            }
            tr.surrogate_error = dev;
        }
    }
    if (V.dim() == 0) throw NumericalError("enhance produced an empty subspace");

    res.V = V;
    res.E = ritz0 - 2.0 * cut;
    tr.E_out = res.E;
    tr.ritz = ritz0;
    tr.dim_out = V.dim();
    tr.max_bond = MetaTN::from_dense(shape, V.iso()).max_bond();

    if (oracle) {
        if (edges.empty()) {
            tr.E0_local = 0;
        } else if (N <= 1024) {
            tr.E0_local = eigh(assemble_dense(h, verts, edges)).values(0);
        } else {
            tr.E0_local = arpack_lowest(N, 2, [&](const Mat& X) { return apply_edges(h, verts, edges, X); }).values(0);
        }
        tr.precondition_ok = E <= tr.E0_local + 1e-9 && E >= tr.E0_local - kk - 1e-9;
        tr.viability = local_viability(V, verts, oracle->Z, q, t.n());
    }
    tr.seconds = seconds_since(t0);
    log(2, "enhance v=", v, " sites=", k, " |W|=", W.dim(), " -> ", V.dim(), " path=", tr.path, " E'=", res.E,
        " viab=", tr.viability);
    return res;
}

FinalResult final_error_reduction(const LocalHamiltonian& h, std::shared_ptr<const MetaTree> mt, const Subspace& Y,
                                  const SolverParams& p, const GroundSpace* oracle) {
    const auto& t = h.tree();
    const int n = t.n();
    if (!(p.gap > 0)) throw InvalidInput("the final loop needs a positive gap");
    const double EG = t.num_edges();
    auto all = iota_vec(n);
    auto edges = iota_vec(t.num_edges());
    auto H = [&](const Mat& X) { return apply_edges(h, all, edges, X); };

    FinalResult out;
    FinalTrace& tr = out.trace;
    tr.eps_prime = p.c_eps_final * p.eps * p.eps * p.gap * p.gap / (double(n) * n);
    tr.budget = static_cast<int>(std::ceil(p.c_iter * (n / p.gap) * std::log(n / (p.eps * p.gap))));
    tr.xi_final = p.xi_final > 0 ? p.xi_final
                                 : p.c_xi_final * std::pow(p.eps, 4) /
                                       (double(p.degeneracy) * p.degeneracy * std::pow(double(n), 8));
    tr.trimmed = tr.xi_final >= p.trim_floor;
    if (oracle && oracle->gapped) {
        double r = 1.0 - oracle->gap / (EG - oracle->E0);
        tr.sqrt_sigma = r;
    }
    const double sigma = tr.sqrt_sigma * tr.sqrt_sigma;
    const MetaBranch shape(mt, mt->root(), h.q());
    const int D = p.degeneracy;

    Mat X = Y.iso();
    double prev = oracle ? almost_majorization_error(Subspace(X), oracle->Z) : 0.0;
    const int cap = 10 * std::max(tr.budget, 1);
    for (int it = 1; it <= cap; ++it) {
        X = EG * X - H(X);
        if (tr.trimmed) X = MetaTN::from_dense(shape, orthonormalize(X)).global_trim(tr.xi_final).contract();
        X = orthonormalize(X);
        if (X.cols() < D) throw NumericalError("final loop collapsed below the promised degeneracy");
        Mat HX = H(X);
        Mat M = X.adjoint() * HX;
        auto e = eigh((M + M.adjoint()) * 0.5);
        double est = 0;
        for (int i = 0; i < D; ++i) {
            Vec y = X * e.vectors.col(i);
            Vec r = HX * e.vectors.col(i) - e.values(i) * y;
            est += std::pow(r.norm() / p.gap, 2);
        }
        tr.estimate.push_back(est);
        tr.iterations = it;
        if (oracle) {
            double err = almost_majorization_error(Subspace(X), oracle->Z);
            tr.predicted.push_back(prev / ((1.0 - prev) / sigma + prev));
            tr.error.push_back(err);
            prev = err;
        }
        if (est <= tr.eps_prime) {
            tr.converged = true;
            break;
        }
    }
    out.Y = Subspace(X);
    log(1, "final loop: ", tr.iterations, " iterations (budget ", tr.budget, "), converged=", tr.converged);
    return out;
}

SolveReport gs(const LocalHamiltonian& h, const SolverParams& p) {
    auto t0 = Clock::now();
    const auto& t = h.tree();
    const int q = h.q();
    if (!(p.gap > 0)) throw InvalidInput("gs needs the promised gap");
    if (p.degeneracy < 1) throw InvalidInput("gs needs a degeneracy >= 1");
    SolveReport rep;
    rep.params = p;
    if (p.oracle) {
        rep.oracle = exact_ground_space(h);
        rep.has_oracle = true;
    }
    const GroundSpace* oracle = rep.has_oracle ? &rep.oracle : nullptr;
    auto mt = std::make_shared<const MetaTree>(t);
    const MetaBranch whole(mt, mt->root(), q);
    rep.xi = p.xi > 0 ? p.xi
                      : p.c_xi * p.delta * p.delta / (double(t.n()) * t.n() * std::pow(p.trim.r(p.delta / t.n()), 2));

    std::vector<Subspace> V(mt->size());
    std::vector<double> E(mt->size(), 0.0);
    for (int v : mt->postorder()) {
        if (mt->is_leaf(v)) {
            V[v] = Subspace::full(static_cast<Eigen::Index>(ipow(q, static_cast<int>(mt->subtree(v).vertices.size()))));
            continue;
        }
        const auto& ch = mt->children(v);
        Mat iso = Mat::Ones(1, 1);
        double Ein = 0;
        // minus |union of the children's edge boundaries|, each such term costs at least -1
        std::vector<char> bnd(t.num_edges(), 0);
        for (int w : ch) {
            iso = kron(iso, V[w].iso());
            Ein += E[w];
            for (int e : cut_edges(t, mt->subtree(w).vertices)) bnd[e] = 1;
        }
        Ein -= std::count(bnd.begin(), bnd.end(), 1);
        Subspace W(permute_sites(iso, q, whole.child_perm(v)));
        auto r = enhance(h, mt, v, W, Ein, p, oracle);
        V[v] = std::move(r.V);
        E[v] = r.E;
        rep.vertices.push_back(std::move(r.trace));
        for (int w : ch) V[w] = Subspace();
    }

    auto fin = final_error_reduction(h, mt, V[mt->root()], p, oracle);
    rep.final = std::move(fin.trace);
    const Mat& X = fin.Y.iso();
    auto all = iota_vec(t.n());
    auto edges = iota_vec(t.num_edges());
    Mat M = X.adjoint() * apply_edges(h, all, edges, X);
    auto e = eigh((M + M.adjoint()) * 0.5);
    Eigen::Index keep = 0;
    while (keep < e.values.size() && e.values(keep) <= e.values(0) + p.eps * p.gap) ++keep;
    rep.output = Subspace::span(X * e.vectors.leftCols(keep));
    rep.output_energies = e.values.head(keep);
    rep.E0 = e.values(0);
    rep.tn = MetaTN::from_dense(whole, rep.output.iso());
    if (oracle) {
        auto c = closeness(rep.output, oracle->Z);
        rep.delta = c.delta;
        Mat leak = rep.output.iso() - oracle->Z.iso() * (oracle->Z.iso().adjoint() * rep.output.iso());
        rep.markov = std::pow(op_norm(leak), 2);
    }
    rep.seconds = seconds_since(t0);
    log(1, "gs: n=", t.n(), " output dim ", rep.output.dim(), " E0~ ", rep.E0, " in ", rep.seconds, " s");
    return rep;
}

nlohmann::json SolveReport::to_json() const {
    nlohmann::json j;
    j["params"] = params.to_json();
    j["E0"] = E0;
    j["xi"] = xi;
    j["output_dim"] = output.dim();
    j["output_energies"] = std::vector<double>(output_energies.data(), output_energies.data() + output_energies.size());
    j["max_bond"] = tn.max_bond();
    j["seconds"] = seconds;
    auto& vs = j["vertices"] = nlohmann::json::array();
    for (const auto& v : vertices) {
        nlohmann::json a = {{"v", v.v},
                            {"sites", v.sites},
                            {"dim_in", v.dim_in},
                            {"dim_out", v.dim_out},
                            {"max_bond", v.max_bond},
                            {"E_in", v.E_in},
                            {"E_out", v.E_out},
                            {"ritz", v.ritz},
                            {"surrogate_error", v.surrogate_error},
                            {"path", v.path},
                            {"pap_dim", v.pap_dim},
                            {"attempts", v.attempts},
                            {"trimmed_weight", v.trimmed_weight},
                            {"seconds", v.seconds}};
        if (has_oracle) {
            a["E0_local"] = v.E0_local;
            a["viability"] = v.viability;
            a["precondition_ok"] = v.precondition_ok;
        }
        vs.push_back(a);
    }
    j["final"] = {{"iterations", final.iterations}, {"budget", final.budget},   {"eps_prime", final.eps_prime},
                  {"xi_final", final.xi_final},     {"trimmed", final.trimmed}, {"converged", final.converged},
                  {"estimate", final.estimate}};
    if (has_oracle) {
        j["final"]["error"] = final.error;
        j["final"]["predicted"] = final.predicted;
        j["final"]["sqrt_sigma"] = final.sqrt_sigma;
        j["oracle"] = {{"E0", oracle.E0}, {"gap", oracle.gap}, {"D", oracle.D}, {"gapped", oracle.gapped}};
        j["delta"] = delta;
        j["markov"] = markov;
    }
    return j;
}

} // namespace metags
