#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "gamow/harmonics.hpp"
#include "gamow/sphere_grid.hpp"

using namespace gamow;

TEST_CASE("basis counts and degree labels") {
    REQUIRE(basis_count(2, 0) == 1);
    REQUIRE(basis_count(2, 5) == 11);
    REQUIRE(basis_count(3, 0) == 1);
    REQUIRE(basis_count(3, 5) == 36);

    SphereGrid g = build_grid(3, 12);
    HarmonicBasis b = make_basis(g, 4);
    REQUIRE(b.count == 25);
    REQUIRE(b.degree[0] == 0);
    for (int i = 1; i <= 3; ++i) REQUIRE(b.degree[i] == 1);
    for (int i = 4; i <= 8; ++i) REQUIRE(b.degree[i] == 2);
    REQUIRE(b.eig[0] == 0.0);
    REQUIRE(b.eig[1] == 2.0);
    REQUIRE(b.eig[4] == 6.0);
    REQUIRE(b.eig[24] == 20.0);

    SphereGrid g2 = build_grid(2, 16);
    HarmonicBasis b2 = make_basis(g2, 4);
    REQUIRE(b2.count == 9);
    REQUIRE(b2.degree[7] == 4);
    REQUIRE(b2.eig[7] == 16.0);
}

TEST_CASE("basis degree cap follows the grid") {
    SphereGrid g = build_grid(3, 8);
    REQUIRE_THROWS_AS(make_basis(g, 8), PreconditionViolation);
    REQUIRE_NOTHROW(make_basis(g, 7));
}

static void check_orthonormal(int N, int m, int L, double tol) {
    SphereGrid g = build_grid(N, m);
    HarmonicBasis b = make_basis(g, L);
    for (int a = 0; a < b.count; ++a)
        for (int c = a; c < b.count; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < g.n; ++i)
                s += g.weights[i] * b.value(a, i) * b.value(c, i);
            double expect = (a == c) ? 1.0 : 0.0;
            REQUIRE(std::abs(s - expect) < tol);
        }
}

TEST_CASE("orthonormality on the grid") {
    check_orthonormal(2, 24, 6, 1e-12);
    check_orthonormal(3, 12, 5, 1e-11);
}

TEST_CASE("analyze inverts synthesize") {
    SphereGrid g = build_grid(3, 12);
    HarmonicBasis b = make_basis(g, 5);
    std::mt19937 rng(99);
    std::vector<double> c(b.count);
    for (double& x : c) x = (static_cast<double>(rng()) / 4294967296.0 - 0.5) * 0.2;
    std::vector<double> v = synthesize(b, c);
    std::vector<double> c2 = analyze(b, v);
    for (int k = 0; k < b.count; ++k) REQUIRE(std::abs(c2[k] - c[k]) < 1e-12);
}

TEST_CASE("dirichlet energy reproduces the eigenvalues") {
    // int |grad Y|^2 = l(l+N-2) for each orthonormal basis function
    for (int N : {2, 3}) {
        SphereGrid g = build_grid(N, N == 2 ? 32 : 14);
        HarmonicBasis b = make_basis(g, 5);
        for (int k = 0; k < b.count; ++k) {
            std::vector<double> c(b.count, 0.0);
            c[k] = 1.0;
            std::vector<double> gn = grad_norm_sq(b, c);
            double s = 0.0;
            for (std::size_t i = 0; i < g.n; ++i) s += g.weights[i] * gn[i];
            REQUIRE(std::abs(s - b.eig[k]) < 1e-9 * std::max(1.0, b.eig[k]));
        }
    }
}

TEST_CASE("eval_expansion matches grid synthesis") {
    for (int N : {2, 3}) {
        SphereGrid g = build_grid(N, 12);
        HarmonicBasis b = make_basis(g, 4);
        std::mt19937 rng(7);
        std::vector<double> c(b.count);
        for (double& x : c) x = (static_cast<double>(rng()) / 4294967296.0 - 0.5) * 0.3;
        std::vector<double> v = synthesize(b, c);
        for (std::size_t i = 0; i < g.n; i += 5)
            REQUIRE(std::abs(eval_expansion(N, 4, c, g.nodes[i]) - v[i]) < 1e-12);
    }
}

TEST_CASE("tangential gradient of z is sin(phi)") {
    SphereGrid g = build_grid(3, 14);
    std::vector<double> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v[i] = g.nodes[i][2];
    std::vector<Vec3> gr = tangential_gradient(g, v);
    for (std::size_t i = 0; i < g.n; i += 7) {
        double t = g.nodes[i][2];
        double want = 1.0 - t * t;               // |grad z|^2 on the sphere
        REQUIRE(std::abs(dot(gr[i], gr[i]) - want) < 1e-8);
        // gradient is tangent
        REQUIRE(std::abs(dot(gr[i], g.nodes[i])) < 1e-8);
    }
}

TEST_CASE("gradient components match great-circle finite differences") {
    for (int N : {2, 3}) {
        SphereGrid g = build_grid(N, 16);
        HarmonicBasis b = make_basis(g, 5);
        std::mt19937 rng(31);
        std::vector<double> c(b.count);
        for (double& x : c) x = (static_cast<double>(rng()) / 4294967296.0 - 0.5) * 0.4;
        std::vector<double> gp, ga;
        grad_components(b, c, gp, ga);
        const double h = 1e-6;
        for (std::size_t i = 0; i < g.n; i += 11) {
            const Vec3& x = g.nodes[i];
            Vec3 tau;
            if (N == 2) {
                tau = {-x[1], x[0], 0.0};
            } else {
                double t = x[2];
                double s = std::sqrt(std::max(1.0 - t * t, 1e-30));
                tau = {t * x[0] / s, t * x[1] / s, -s};   // unit polar direction
            }
            auto at = [&](double eps) {
                Vec3 p{x[0] * std::cos(eps) + tau[0] * std::sin(eps),
                       x[1] * std::cos(eps) + tau[1] * std::sin(eps),
                       x[2] * std::cos(eps) + tau[2] * std::sin(eps)};
                return eval_expansion(N, 5, c, p);
            };
            double fd = (at(h) - at(-h)) / (2.0 * h);
            REQUIRE(std::abs(fd - gp[i]) < 2e-5 * std::max(1.0, std::abs(gp[i])));
        }
    }
}
