#include "doctest.h"

#include <cmath>
#include <random>

#include "metags/solver.hpp"

using namespace metags;

TEST_CASE("oracle on two spins") {
    auto h = heisenberg(gen_path(2));
    auto g = exact_ground_space(h);
    // (XX + YY + ZZ)/3: singlet at -1, triplet at 1/3
    CHECK(g.D == 1);
    CHECK(g.E0 == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(g.gap == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(g.gapped);
    Vec singlet = Vec::Zero(4);
    singlet(1) = 1 / std::sqrt(2.0);
    singlet(2) = -1 / std::sqrt(2.0);
    CHECK(std::abs(g.Z.iso().col(0).dot(singlet)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle without a gap is flagged") {
    // a zero Hamiltonian: everything is ground space
    auto t = gen_path(2);
    LocalHamiltonian h(t, {Mat::Zero(4, 4)});
    auto g = exact_ground_space(h);
    CHECK(g.D == 4);
    CHECK_FALSE(g.gapped);
}

TEST_CASE("oracle degeneracy from the spin doublet") {
    // odd Heisenberg path: spin-1/2 ground doublet
    auto g = exact_ground_space(heisenberg(gen_path(5)));
    CHECK(g.D == 2);
    CHECK(g.gapped);
    CHECK(g.Z.dim() == 2);
}

TEST_CASE("matrix-free oracle eigenpairs") {
    auto t = gen_random_tree(13, 3, 7);
    auto h = transverse_ising(t, 0.25, 0.5);
    auto g = exact_ground_space(h);
    REQUIRE(g.gapped);
    // residual check against the matrix-free action
    std::vector<int> all(13), edges(12);
    for (int i = 0; i < 13; ++i) all[i] = i;
    for (int i = 0; i < 12; ++i) edges[i] = i;
    Mat HZ = apply_edges(h, all, edges, g.Z.iso());
    CHECK((HZ - g.E0 * g.Z.iso()).norm() < 1e-8);
}

TEST_CASE("simple AGSP shrink matches the closed form") {
    for (std::uint64_t seed : {1, 2, 3}) {
        auto t = gen_random_tree(6, 3, seed);
        for (auto h : {heisenberg(t), transverse_ising(t, 0.25, 0.5), random_two_local(t, seed)}) {
            auto g = exact_ground_space(h);
            REQUIRE(g.gapped);
            auto a = simple_agsp(h, g);
            CHECK(std::abs(a.sqrt_sigma - a.predicted) < 1e-10);
            CHECK(a.sqrt_sigma < 1.0);
        }
    }
}

TEST_CASE("enhance step with the identity halves the dimension") {
    auto t = gen_path(4);
    auto mt = std::make_shared<const MetaTree>(t);
    MetaBranch shape(mt, mt->root(), 2);
    std::mt19937_64 rng(3);
    Subspace W(haar_isometry(16, 8, rng));
    auto V = enhance_step(W, {Mat::Identity(16, 16)}, 0, shape, rng);
    CHECK(V.dim() == 4);
    // V sits inside W
    CHECK(almost_majorization_error(W, V) < 1e-12);
    CHECK_THROWS_AS(enhance_step(Subspace(haar_isometry(16, 1, rng)), {Mat::Identity(16, 16)}, 0, shape, rng),
                    PreconditionError);
}

TEST_CASE("final loop leaves the ground space fixed") {
    auto h = heisenberg(gen_random_tree(8, 3, 4));
    auto g = exact_ground_space(h);
    REQUIRE(g.gapped);
    auto mt = std::make_shared<const MetaTree>(h.tree());
    SolverParams p;
    p.gap = g.gap;
    p.degeneracy = g.D;
    auto r = final_error_reduction(h, mt, g.Z, p, &g);
    CHECK(r.trace.converged);
    CHECK(r.trace.iterations == 1);
    CHECK(almost_majorization_error(r.Y, g.Z) < 1e-12);
}

TEST_CASE("final loop contracts at least as fast as the observation predicts") {
    auto h = transverse_ising(gen_random_tree(8, 3, 9), 0.25, 0.5);
    auto g = exact_ground_space(h);
    REQUIRE(g.gapped);
    auto mt = std::make_shared<const MetaTree>(h.tree());
    SolverParams p;
    p.gap = g.gap;
    p.degeneracy = g.D;
    std::mt19937_64 rng(5);
    Subspace Y(haar_isometry(256, 4, rng));
    auto r = final_error_reduction(h, mt, Y, p, &g);
    CHECK(r.trace.converged);
    CHECK(r.trace.iterations <= 2 * r.trace.budget);
    for (std::size_t i = 0; i < r.trace.error.size(); ++i) CHECK(r.trace.error[i] <= r.trace.predicted[i] + 1e-12);
    CHECK(r.trace.error.back() <= r.trace.eps_prime);
}

TEST_CASE("enhance energy sandwich on a small tree") {
    auto h = heisenberg(gen_random_tree(8, 3, 2));
    auto g = exact_ground_space(h);
    auto mt = std::make_shared<const MetaTree>(h.tree());
    SolverParams p;
    p.gap = g.gap;
    p.degeneracy = g.D;
    p.oracle = true;
    auto rep = gs(h, p);
    for (const auto& v : rep.vertices) {
        CAPTURE(v.v);
        CHECK(v.precondition_ok);
        CHECK(v.ritz >= v.E0_local - 1e-9);
        CHECK(v.E_out >= v.E0_local - 2 * 3 * v.sites - 1e-9);
        // below the root the boundary slack covers the Ritz excess
        if (v.sites < h.n()) CHECK(v.E_out <= v.E0_local + 1e-9);
    }
    CHECK(rep.delta <= 1e-4);
}

TEST_CASE("solve on gapped trees") {
    struct Case {
        int n;
        std::uint64_t seed;
        bool tfim;
    };
    for (Case c : {Case{8, 1, true}, Case{9, 2, false}, Case{10, 3, true}}) {
        auto t = gen_random_tree(c.n, 3, c.seed);
        auto h = c.tfim ? transverse_ising(t, 0.25, 0.5) : heisenberg(t);
        auto g = exact_ground_space(h);
        REQUIRE(g.gapped);
        SolverParams p;
        p.gap = g.gap;
        p.degeneracy = g.D;
        p.oracle = true;
        auto rep = gs(h, p);
        CAPTURE(c.n);
        CHECK(rep.output.dim() == g.D);
        CHECK(rep.delta <= 1e-4);
        CHECK(rep.final.converged);
        CHECK(std::abs(rep.E0 - g.E0) < 1e-8);
        // the output round-trips through its meta-TN
        CHECK(closeness(rep.tn.encoded_subspace(), rep.output).delta < 1e-10);
        auto j = rep.to_json();
        CHECK(j["vertices"].size() == rep.vertices.size());
    }
}

TEST_CASE("pap step falls back without a certificate") {
    auto h = transverse_ising(gen_path(6), 0.25, 0.5);
    auto g = exact_ground_space(h);
    SolverParams p;
    p.gap = g.gap;
    p.degeneracy = g.D;
    p.oracle = true;
    p.use_pap = true;
    p.pap.m = 1;
    p.pap.s = 1;
    auto rep = gs(h, p);
    // at m = 1 sigma |L|^2 is far above delta everywhere
    for (const auto& v : rep.vertices) CHECK(v.path == "rayleigh-ritz");
    CHECK(rep.delta <= 1e-4);
}

TEST_CASE("solver parameters round-trip") {
    SolverParams p;
    p.gap = 0.3;
    p.eps = 1e-3;
    p.pap.m = 3;
    p.trim.r1 = 2;
    auto q = SolverParams::from_json(p.to_json());
    CHECK(q.gap == p.gap);
    CHECK(q.eps == p.eps);
    CHECK(q.pap.m == 3);
    CHECK(q.trim.r1 == 2);
    CHECK(q.to_json() == p.to_json());
}
