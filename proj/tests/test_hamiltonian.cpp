#include "doctest.h"

#include <cmath>

#include "metags/hamiltonian.hpp"
#include "metags/meta_tree.hpp"

using namespace metags;

namespace {

// term on sites (i, j) of a k-site register through explicit Kronecker products
Mat naive_embed(const Mat& term, int q, int k, int i, int j) {
    const Eigen::Index n = static_cast<Eigen::Index>(ipow(q, k));
    Mat out = Mat::Zero(n, n);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c)
                for (int d = 0; d < q; ++d) {
                    cplx coef = term(a * q + b, c * q + d);
                    if (coef == cplx(0)) continue;
                    Mat acc = Mat::Identity(1, 1);
                    for (int s = 0; s < k; ++s) {
                        Mat f = Mat::Identity(q, q);
                        if (s == i) f = Mat::Zero(q, q), f(a, c) = 1;
                        if (s == j) f = Mat::Zero(q, q), f(b, d) = 1;
                        acc = kron(acc, f);
                    }
                    out += coef * acc;
                }
    return out;
}

double lambda_max(const Mat& A) { return eigh(A).values.maxCoeff(); }

} // namespace

TEST_CASE("dense assembly") {
    auto t = gen_path(3);
    auto h = random_two_local(t, 5);
    Region empty{{1}, {}};
    CHECK(assemble_dense(h, empty).norm() == 0);
    Region one{{0, 1}, {0}};
    CHECK((assemble_dense(h, one) - h.term(0)).norm() < 1e-15);
    Mat oracle = naive_embed(h.term(0), 2, 3, 0, 1) + naive_embed(h.term(1), 2, 3, 1, 2);
    CHECK((assemble_dense(h) - oracle).norm() < 1e-13);

    // a star with non-adjacent register positions
    auto s = gen_star(3, 3);
    auto hs = random_two_local(s, 6);
    Mat os = Mat::Zero(81, 81);
    for (int e = 0; e < 3; ++e) os += naive_embed(hs.term(e), 3, 4, s.edge(e).u, s.edge(e).v);
    CHECK((assemble_dense(hs) - os).norm() < 1e-12);
    std::mt19937_64 rng(1);
    Mat x = gaussian_matrix(81, 4, rng);
    CHECK((apply_edges(hs, {0, 1, 2, 3}, {0, 1, 2}, x) - os * x).norm() < 1e-12);

    CHECK_THROWS_AS(assemble_dense(h, Region{{0}, {0}}), InvalidInput);
    CHECK_THROWS_AS(assemble_dense(heisenberg(gen_path(13))), BudgetExceeded);
}

TEST_CASE("term validation and models") {
    auto t = gen_path(2);
    Mat big = 2 * Mat::Identity(4, 4);
    CHECK_THROWS_AS(LocalHamiltonian(t, {big}), InvalidInput);
    Mat nh = Mat::Zero(4, 4);
    nh(0, 1) = 0.5;
    CHECK_THROWS_AS(LocalHamiltonian(t, {nh}), InvalidInput);

    auto e = eigh(assemble_dense(heisenberg(t)));
    CHECK(e.values(0) == doctest::Approx(-1.0));
    CHECK(e.values(1) == doctest::Approx(1.0 / 3));
    CHECK(e.values(1) - e.values(0) == doctest::Approx(4.0 / 3));
    // singlet
    Vec singlet = Vec::Zero(4);
    singlet(1) = 1 / std::sqrt(2.0), singlet(2) = -1 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(e.vectors.col(0).dot(singlet)) - 1) < 1e-12);

    // transverse fields add up to -h X on every vertex
    auto star = gen_star(3);
    auto tf = transverse_ising(star, 0, 0.6);
    Mat sum = assemble_dense(tf);
    Mat x = Mat::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1;
    Mat expect = Mat::Zero(16, 16);
    for (int v = 0; v < 4; ++v) expect -= 0.6 * embed_operator(x, 2, 4, {v});
    CHECK((sum - expect).norm() < 1e-12);
}

TEST_CASE("Hamiltonian JSON round trip") {
    auto t = gen_random_tree(7, 3, 4, 3);
    auto h = random_two_local(t, 9);
    auto j = to_json(h);
    auto back = hamiltonian_from_json(nlohmann::json::parse(j.dump()), t);
    for (int e = 0; e < t.num_edges(); ++e) CHECK((back.term(e) - h.term(e)).norm() == 0);

    // an edge written as (v, u) is swapped into (u, v)
    auto p = gen_path(2, 3);
    auto hp = random_two_local(p, 2);
    auto jp = to_json(hp);
    std::vector<int> perm{1, 0};
    Mat sw = permute_sites(Mat::Identity(9, 9), 3, perm);
    Mat flipped = sw * hp.term(0) * sw.adjoint();
    std::vector<double> flat;
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) flat.push_back(flipped(r, c).real()), flat.push_back(flipped(r, c).imag());
    jp["terms"][0]["edge"] = {1, 0};
    jp["terms"][0]["matrix"] = flat;
    CHECK((hamiltonian_from_json(jp, p).term(0) - hp.term(0)).norm() < 1e-14);

    jp["tree_hash"] = "1";
    CHECK_THROWS_AS(hamiltonian_from_json(jp, p), InvalidInput);
    CHECK_THROWS_AS(hamiltonian_from_json(nlohmann::json{{"local_dim", 3}}, p), InvalidInput);
    auto named = hamiltonian_from_json(nlohmann::json{{"model", "heisenberg"}}, gen_path(3));
    CHECK(named.terms().size() == 2);
}

TEST_CASE("hard truncation") {
    Mat d = Mat::Zero(3, 3);
    d(1, 1) = 1, d(2, 2) = 5;
    Mat expect = d;
    expect(2, 2) = 2;
    CHECK((hard_truncate(d, 2) - expect).norm() < 1e-14);
    CHECK((hard_truncate(d, 5) - d).norm() < 1e-14);
    std::mt19937_64 rng(3);
    Mat H = random_hermitian(16, rng);
    auto e = eigh(H);
    Mat T = hard_truncate(H, 0.7);
    CHECK(lambda_max(T) <= e.values(0) + 0.7 + 1e-12);
    CHECK(eigh(T).values(0) == doctest::Approx(e.values(0)));
    CHECK(lambda_max(T - H) <= 1e-12);
}

TEST_CASE("soft truncation coefficients") {
    auto c1 = soft_trunc_coeffs(1);
    CHECK(c1 == std::vector<Rational>{1, -1});
    auto c2 = soft_trunc_coeffs(2);
    CHECK(c2 == std::vector<Rational>{Rational(3, 2), -2, Rational(1, 2)});
    for (int k = 1; k <= 100; ++k) {
        auto c = soft_trunc_coeffs(k);
        Rational s = 0;
        for (auto& x : c) s += x;
        CHECK(s == 0);
    }
    CHECK_THROWS_AS(soft_trunc_coeffs(0), InvalidInput);
    // the expanded form agrees with the partial sum where cancellation is mild
    for (int k : {3, 8, 20})
        for (double x : {0.0, 0.3, 1.0, 4.0}) {
            auto c = soft_trunc_coeffs_double(k);
            double s = 0;
            for (int j = 0; j <= k; ++j) s += c[j] * std::exp(-j * x);
            CHECK(s == doctest::Approx(soft_f(x, k)).epsilon(1e-9));
        }
}

TEST_CASE("f_k is increasing, 1-Lipschitz and bounded by 1 + log k") {
    for (int k : {1, 2, 3, 5, 8, 64}) {
        double prev = soft_f(0, k);
        CHECK(prev == 0);
        for (int i = 1; i <= 20000; ++i) {
            double x = i * 1e-3, y = soft_f(x, k);
            CHECK(y > prev);
            CHECK(y - prev <= 1e-3 + 1e-12);
            CHECK(y <= 1 + std::log(double(k)) + 1e-15);
            prev = y;
        }
    }
}

TEST_CASE("soft truncation") {
    Mat s = Mat::Constant(1, 1, 0.8);
    CHECK(soft_truncate(s, 0.1, 0.5, 3)(0, 0).real() == doctest::Approx(0.1 + 0.5 * soft_f(1.4, 3)).epsilon(1e-12));
    CHECK_THROWS_AS(soft_truncate(s, 0, 0, 3), InvalidInput);
    CHECK_THROWS_AS(soft_truncate(s, 1, 1, 3, true), PreconditionError);
    // large k on a narrow spectrum reproduces H
    std::mt19937_64 rng(4);
    const double E = -1, eta = 2;
    Mat U = haar_isometry(8, 8, rng);
    RVec ev = RVec::LinSpaced(8, E, E + eta / 2);
    Mat H = U * ev.cast<cplx>().asDiagonal() * U.adjoint();
    CHECK((soft_truncate(H, E, eta, 64) - H).norm() < 1e-6);
}

TEST_CASE("sandwich bounds") {
    // diagonal sweep x in [0, 10 eta]
    const double eta = 0.7;
    RVec grid = RVec::LinSpaced(401, 0, 10 * eta);
    Mat D = grid.cast<cplx>().asDiagonal();
    auto r = check_sandwich(D, 0, eta, 4);
    CHECK(r.ok);
    CHECK(r.dE == 0);
    // scalar inequality directly
    for (int k : {3, 4, 5, 8, 12})
        for (int i = 0; i <= 10000; ++i) {
            double x = i * 1e-3, f = soft_f(x, k);
            CHECK(f >= std::min(x, 1.0) - std::pow(2.0, -0.66 * k) - 1e-15);
            CHECK(f <= std::min(x, 1 + std::log(double(k))) + 1e-15);
        }
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    int bad = 0;
    double worst = -1e9;
    for (int s = 0; s < 100; ++s) {
        Mat H = 3 * random_hermitian(64, rng);
        double e0 = eigh(H).values(0);
        for (int k : {3, 5, 8}) {
            auto rep = check_sandwich(H, e0 - 2 * u(rng), 0.5 + 2 * u(rng), k);
            bad += !rep.ok;
            worst = std::max({worst, rep.lower_violation, rep.upper_violation});
        }
    }
    CHECK(bad == 0);
    MESSAGE("worst sandwich eigenvalue excess: " << worst);
    CHECK_THROWS_AS(check_sandwich(D, 1, eta, 4), PreconditionError);
}

TEST_CASE("cluster-expansion constant") {
    for (int d : {1, 2, 3}) {
        double c = tce_constant_c(d);
        CHECK(tce_a(d, c) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(c > 0);
        CHECK(c < 1);
    }
    CHECK(tce_a(2, 0) == 0);
}

TEST_CASE("eigenvalue closeness implies eigenspace closeness") {
    std::mt19937_64 rng(6);
    int bad = 0;
    for (int s = 0; s < 100; ++s) {
        const int n = 12, D = 1 + s % 3;
        RVec ev(n);
        for (int i = 0; i < n; ++i) ev(i) = i < D ? 0.0 : 1.0 + i;
        Mat U = haar_isometry(n, n, rng);
        Mat H = U * ev.cast<cplx>().asDiagonal() * U.adjoint();
        Mat G = gaussian_matrix(n, 2, rng);
        Mat Ht = H - 0.2 * G * G.adjoint() / G.squaredNorm();
        auto e = eigh(H), et = eigh(Ht);
        double eps = e.values(0) - et.values(0);
        double delta = eps / (et.values(D) - et.values(0));
        double measured = closeness(bottom_subspace(et, D), bottom_subspace(e, D)).delta;
        bad += measured > delta + 1e-9;
    }
    CHECK(bad == 0);
}

TEST_CASE("hard truncation of one side barely moves low eigenvalues") {
    // 8 spins; truncate the branch hanging below vertex 1 and keep the rest
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto t = gen_random_tree(8, 3, seed);
        auto h = seed % 2 ? heisenberg(t) : transverse_ising(t, 0.25, 0.5);
        auto b = whole_tree_branch(t, 0);
        auto parts = trisect_branch(t, b);
        const Region& left = parts.back().region;
        auto lc = closure(t, left);
        std::vector<int> rest_edges;
        for (int e = 0; e < t.num_edges(); ++e)
            if (!std::binary_search(lc.edges.begin(), lc.edges.end(), e)) rest_edges.push_back(e);
        Mat HL = assemble_dense(h, lc);
        Mat full = assemble_dense(h);
        auto all = whole_tree(t);
        Mat rest = assemble_dense(h, all.vertices, rest_edges);
        int boundary = static_cast<int>(edge_boundary(t, lc).size());
        auto e = eigh(full);
        for (double eta : {0.5, 1.0, 2.0, 4.0}) {
            Mat Ht = embed_operator(hard_truncate(HL, eta), 2, t.n(), lc.vertices) + rest;
            auto et = eigh(Ht);
            for (int j = 0; j < 6; ++j) {
                double gapj = e.values(j) - et.values(j);
                CHECK(gapj >= -1e-10);
                CHECK(gapj <= hard_trunc_gap_bound(t.d(), eta, e.values(j), et.values(0), boundary));
            }
        }
    }
}

TEST_CASE("ground state entropy across a leaf cut") {
    auto t = gen_random_tree(10, 3, 11);
    auto h = transverse_ising(t, 0.25, 0.5);
    auto e = eigh(assemble_dense(h));
    CHECK(e.values(1) - e.values(0) > 0.1);
    int leaf = 0;
    while (t.degree(leaf) != 1) ++leaf;
    std::vector<int> perm{leaf};
    for (int v = 0; v < t.n(); ++v)
        if (v != leaf) perm.push_back(v);
    Vec g = permute_sites(Mat(e.vectors.col(0)), 2, perm).col(0);
    double s = entanglement_entropy(g, 2, 512);
    auto rho = eigh(reduced_left(Mat(g), 2, 512));
    double oracle = 0;
    for (int i = 0; i < 2; ++i)
        if (rho.values(i) > 0) oracle -= rho.values(i) * std::log(rho.values(i));
    CHECK(s == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(s > 0);
    CHECK(s <= std::log(2.0) + 1e-12);
}
