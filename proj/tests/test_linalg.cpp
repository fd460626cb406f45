#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "metags/linalg.hpp"

using namespace metags;

namespace {

Subspace random_subspace(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
    return Subspace(haar_isometry(n, d, rng));
}

// two-sample Kolmogorov-Smirnov p-value (asymptotic)
double ks_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    double ne = double(a.size()) * b.size() / (a.size() + b.size());
    double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    double p = 0;
    for (int k = 1; k < 100; ++k) p += 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * lam * lam);
    return std::clamp(p, 0.0, 1.0);
}

} // namespace

TEST_CASE("closeness basics") {
    std::mt19937_64 rng(1);
    auto Y = random_subspace(6, 2, rng);
    auto r = closeness(Y, Y);
    CHECK(r.bijective);
    CHECK(r.delta == doctest::Approx(0).epsilon(1e-12));
    Subspace e0(Mat::Identity(2, 1)), e1(Mat(Mat::Identity(2, 2).col(1)));
    auto o = closeness(e0, e1);
    CHECK(o.omega == doctest::Approx(0.0));
    CHECK_FALSE(o.bijective);
    CHECK(o.delta == 1.0);
    CHECK_THROWS_AS(closeness(e0, Y), InvalidInput);
    CHECK_THROWS_AS(Subspace(Mat::Ones(3, 2)), InvalidInput);
}

TEST_CASE("omega agrees with sampling over the unit sphere of Z") {
    std::mt19937_64 rng(2);
    auto Y = random_subspace(8, 3, rng), Z = random_subspace(8, 2, rng);
    double w = omega(Y, Z);
    double best = 1e9;
    for (int s = 0; s < 10000; ++s) {
        Vec c = gaussian_matrix(2, 1, rng).col(0).normalized();
        Vec z = Z.iso() * c;
        best = std::min(best, (Y.iso().adjoint() * z).squaredNorm());
    }
    CHECK(w <= best + 1e-12);
    CHECK(best - w < 0.01);
}

TEST_CASE("viability") {
    std::mt19937_64 rng(3);
    auto Z = random_subspace(8, 2, rng);
    CHECK(viability(Subspace::full(2), Z, 2, 4) == doctest::Approx(0).epsilon(1e-12));
    Vec a = gaussian_matrix(2, 1, rng).col(0).normalized(), b = gaussian_matrix(4, 1, rng).col(0).normalized();
    Subspace prod(kron(a, b));
    CHECK(viability(Subspace(Mat(a)), prod, 2, 4) < 1e-12);
    CHECK_THROWS_AS(viability(Subspace::full(2), Z, 2, 3), InvalidInput);

    // brute force: minimise over the unit sphere of Z (dim 2) on a grid, then refine
    auto V = random_subspace(2, 1, rng);
    Mat big = kron(V.projector(), Mat::Identity(4, 4));
    auto f = [&](double th, double ph) {
        Vec z = std::cos(th) * Z.iso().col(0) + std::polar(std::sin(th), ph) * Z.iso().col(1);
        return 1.0 - z.dot(big * z).real();
    };
    double bt = 0, bp = 0, worst = -1;
    for (int i = 0; i <= 200; ++i)
        for (int j = 0; j < 400; ++j) {
            double th = M_PI / 2 * i / 200, ph = 2 * M_PI * j / 400, v = f(th, ph);
            if (v > worst) worst = v, bt = th, bp = ph;
        }
    for (double h = 0.01; h > 1e-9; h /= 2)
        for (int it = 0; it < 20; ++it)
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    double v = f(bt + di * h, bp + dj * h);
                    if (v > worst) worst = v, bt += di * h, bp += dj * h;
                }
    CHECK(viability(V, Z, 2, 4) == doctest::Approx(worst).epsilon(1e-8));
    // viability equals closeness of (P_V x Id) Z to Z
    auto proj = Subspace::span(apply_left(V.projector(), Z.iso(), 2, 4));
    if (proj.dim() == Z.dim())
        CHECK(closeness(proj, Z).delta == doctest::Approx(viability(V, Z, 2, 4)).epsilon(1e-9));
}

TEST_CASE("haar sampling") {
    std::mt19937_64 rng(4);
    auto W = random_subspace(8, 4, rng);
    CHECK(closeness(haar_sample(W, 4, 9), W).delta < 1e-12);
    CHECK_THROWS_AS(haar_sample(W, 5, 1), InvalidInput);
    auto a = haar_sample(W, 2, 17), b = haar_sample(W, 2, 17);
    CHECK((a.iso() - b.iso()).norm() == 0.0);

    auto full = Subspace::full(8);
    Mat mean = Mat::Zero(8, 8);
    for (int s = 0; s < 10000; ++s) mean += haar_sample(full, 2, s).projector();
    mean /= 10000.0;
    CHECK(op_norm(mean - 0.25 * Mat::Identity(8, 8)) < 0.02);
}

TEST_CASE("Haar restriction keeps a partial majorizer with high probability") {
    std::mt19937_64 rng(5);
    const int dl = 8, dr = 2, wdim = 6, vdim = 3;
    auto W = random_subspace(dl, wdim, rng);
    // Z mostly inside W (x) H_R
    Vec z = kron(W.iso(), Mat::Identity(dr, dr)) * gaussian_matrix(wdim * dr, 1, rng).col(0);
    z += 0.3 * gaussian_matrix(dl * dr, 1, rng).col(0).normalized() * z.norm();
    Subspace Z(Mat(z.normalized()));
    const double mu = 1 - viability(W, Z, dl, dr);
    const double predicted = mu * vdim / (8.0 * wdim);
    int ok = 0;
    for (int s = 0; s < 1000; ++s) ok += (1 - viability(haar_sample(W, vdim, s), Z, dl, dr)) >= predicted;
    CHECK(ok >= 990);
}

TEST_CASE("Haar sampling is basis covariant") {
    std::mt19937_64 rng(6);
    auto W = random_subspace(8, 4, rng);
    Mat U = haar_isometry(8, 8, rng);
    auto UW = Subspace::span(U * W.iso());
    Vec w0 = W.iso().col(0), uw0 = U * w0;
    std::vector<double> a, b;
    for (int s = 0; s < 2000; ++s) {
        a.push_back((haar_sample(W, 2, s).iso().adjoint() * w0).squaredNorm());
        b.push_back((haar_sample(UW, 2, s).iso().adjoint() * uw0).squaredNorm());
    }
    CHECK(ks_pvalue(a, b) > 0.01);
}

TEST_CASE("Chebyshev AGSP") {
    Mat h = Mat::Zero(3, 3);
    h(1, 1) = 1;
    h(2, 2) = 2;
    auto c0 = chebyshev_agsp(h, 1, 2, 1, 0);
    CHECK((c0.A - Mat::Identity(3, 3)).norm() == 0);
    CHECK(c0.sigma == doctest::Approx(1.0));
    auto c3 = chebyshev_agsp(h, 1, 2, 1, 3);
    CHECK_FALSE(c3.lemma_regime);
    CHECK(c3.sigma == doctest::Approx(1.0 / (99.0 * 99.0)).epsilon(1e-12));
    CHECK(c3.sigma <= c3.bound);
    CHECK_THROWS_AS(chebyshev_agsp(h, 1, 2, 1.5, 3), PreconditionError);

    // spectrum touching both ends of [a, b] so that |T_m| reaches 1 on the complement
    std::mt19937_64 rng(7);
    RVec ev(10);
    ev << -0.2, 1.0, 1.3, 2.0, 2.9, 4.4, 5.0, 6.1, 8.0, 9.0;
    Mat U = haar_isometry(10, 10, rng);
    Mat H = U * ev.cast<cplx>().asDiagonal() * U.adjoint();
    std::vector<double> sig(9);
    for (int m = 1; m <= 8; ++m) sig[m] = chebyshev_agsp(H, 1.0, 9.0, 1.0, m).sigma;
    for (int m = 1; m <= 4; ++m) CHECK(std::log(1 / sig[2 * m]) >= 2 * std::log(1 / sig[m]) - 1e-9);
}

TEST_CASE("Chebyshev shrink bound on random gapped spectra") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    int violations = 0;
    for (int inst = 0; inst < 50; ++inst) {
        const int n = 12, nz = 1 + inst % 3;
        const double a = 0, gap = 0.05 + 0.2 * u(rng), b = a + 8 * gap + 5 * u(rng);
        RVec ev(n);
        for (int i = 0; i < n; ++i) ev(i) = i < nz ? a - gap - 2 * u(rng) : a + (b - a) * u(rng);
        ev(nz) = a;
        ev(0) = a - gap;
        Mat U = haar_isometry(n, n, rng);
        Mat H = U * ev.cast<cplx>().asDiagonal() * U.adjoint();
        for (int m = 1; m <= 10; ++m) {
            auto c = chebyshev_agsp(H, a, b, gap, m);
            CHECK(c.lemma_regime);
            violations += c.sigma > c.bound * (1 + 1e-9);
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("approximate projector check") {
    std::mt19937_64 rng(9);
    auto Z = random_subspace(6, 2, rng);
    auto rp = check_approx_projector(Z.projector(), Z);
    CHECK(rp.is_ap);
    CHECK(rp.sigma < 1e-20);
    auto ri = check_approx_projector(Mat::Identity(6, 6), Z);
    CHECK(ri.is_ap);
    CHECK(ri.sigma == doctest::Approx(1.0));

    RVec ev(6);
    ev << 0, 0.1, 1, 1.5, 2, 3;
    Mat U = haar_isometry(6, 6, rng);
    Mat H = U * ev.cast<cplx>().asDiagonal() * U.adjoint();
    auto c = chebyshev_agsp(H, 1, 3, 0.9, 4);
    auto e = eigh(H);
    double lmin = (c.target.iso().adjoint() * c.A * c.target.iso()).selfadjointView<Eigen::Lower>().eigenvalues()(0);
    auto rc = check_approx_projector(c.A / lmin, c.target);
    CHECK(rc.is_ap);
    CHECK(rc.sigma <= c.bound);
    CHECK(rc.sigma == doctest::Approx(c.sigma).epsilon(1e-9));
    CHECK(closeness(c.target, bottom_subspace(e, 2)).delta < 1e-12);
}

TEST_CASE("Schmidt coefficients and entropy") {
    Vec prod = kron(Mat(Vec::Unit(2, 0)), Mat(Vec::Unit(3, 1))).col(0);
    CHECK(entanglement_entropy(prod, 2, 3) == doctest::Approx(0.0));
    Vec bell = Vec::Zero(4);
    bell(0) = bell(3) = 1 / std::sqrt(2.0);
    CHECK(entanglement_entropy(bell, 2, 2) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    auto lam = schmidt(bell, 2, 2);
    CHECK(lam.sum() == doctest::Approx(1.0));
    CHECK_THROWS_AS(schmidt(2 * bell, 2, 2), InvalidInput);
}

TEST_CASE("symmetry lemma, robust transitivity and disjoint viability") {
    std::mt19937_64 rng(10);
    int violations = 0;
    for (auto [dl, dr] : {std::pair<int, int>{2, 2}, {2, 4}, {4, 4}}) {
        const int n = dl * dr;
        for (int inst = 0; inst < 100; ++inst) {
            // symmetry: equal dims, almost-majorization error equals closeness in both orders
            const int d = 1 + inst % (n / 2);
            auto Y = random_subspace(n, d, rng), Z = random_subspace(n, d, rng);
            auto c = closeness(Y, Z);
            if (c.bijective) {
                violations += std::abs(c.delta - almost_majorization_error(Y, Z)) > 1e-9;
                violations += std::abs(c.delta - closeness(Z, Y).delta) > 1e-9;
            }

            // robust transitivity with Y near Z and V near the left support of Y
            auto Z1 = random_subspace(n, 1, rng);
            Mat ycols(n, 2);
            ycols.col(0) = Z1.iso().col(0) + 0.2 * gaussian_matrix(n, 1, rng).col(0);
            ycols.col(1) = gaussian_matrix(n, 1, rng).col(0);
            auto Yt = Subspace::span(ycols);
            auto rho = eigh(reduced_left(Yt.iso(), dl, dr));
            auto V = Subspace::span(rho.vectors.rightCols(dl - 1) + 0.1 * gaussian_matrix(dl, dl - 1, rng));
            double delta = viability(V, Yt, dl, dr), eps = almost_majorization_error(Yt, Z1);
            double bound = delta + eps + 2 * std::sqrt(delta * eps);
            violations += viability(V, Z1, dl, dr) > bound + 1e-9;

            // disjoint viability: A (x) R is delta_A + delta_B viable
            auto A = random_subspace(dl, std::max(1, dl - 1), rng), R = random_subspace(dr, std::max(1, dr - 1), rng);
            auto Z2 = random_subspace(n, 1 + inst % 2, rng);
            double da = viability(A, Z2, dl, dr);
            double db = almost_majorization_error(Subspace(kron(Mat::Identity(dl, dl), R.iso())), Z2);
            double both = almost_majorization_error(Subspace(kron(A.iso(), R.iso())), Z2);
            violations += both > da + db + 1e-9;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("qudit helpers") {
    std::mt19937_64 rng(11);
    const int q = 2, k = 4;
    Mat term = random_hermitian(4, rng);
    // (1, 3) embedded vs a slow double loop over digits
    Mat dense = embed_operator(term, q, k, {1, 3});
    Mat slow = Mat::Zero(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) {
            auto dig = [](int x, int s) { return (x >> (3 - s)) & 1; };
            if (dig(r, 0) != dig(c, 0) || dig(r, 2) != dig(c, 2)) continue;
            slow(r, c) = term(dig(r, 1) * 2 + dig(r, 3), dig(c, 1) * 2 + dig(c, 3));
        }
    CHECK((dense - slow).norm() < 1e-14);
    Mat x = gaussian_matrix(16, 3, rng), y = Mat::Zero(16, 3);
    apply_two_site(term, q, k, 1, 3, x, y);
    CHECK((y - dense * x).norm() < 1e-12);
    Mat y2 = Mat::Zero(16, 3);
    apply_two_site(term, q, k, 3, 1, x, y2);
    CHECK((y2 - embed_operator(term, q, k, {3, 1}) * x).norm() < 1e-12);
    // permuting sites then embedding on permuted positions is consistent
    std::vector<int> perm{2, 0, 3, 1};
    Mat px = permute_sites(x, q, perm);
    Mat lhs = permute_sites(dense * x, q, perm);
    std::vector<int> inv(4);
    for (int i = 0; i < 4; ++i) inv[perm[i]] = i;
    Mat rhs = embed_operator(term, q, k, {inv[1], inv[3]}) * px;
    CHECK((lhs - rhs).norm() < 1e-12);
    CHECK((kron(Mat::Identity(2, 2), Mat::Identity(3, 3)) - Mat::Identity(6, 6)).norm() == 0);
}
