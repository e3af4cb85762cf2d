#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gamow/sphere_grid.hpp"

using namespace gamow;

TEST_CASE("grid construction N=2") {
    SphereGrid g = build_grid(2, 16);
    REQUIRE(g.n == 16);
    REQUIRE(g.rows == 16);
    REQUIRE(g.per_row == 1);
    REQUIRE(g.exact_degree == 7);
    double ws = 0.0;
    for (double w : g.weights) ws += w;
    REQUIRE(std::abs(ws - 2.0 * pi) < 1e-13);
    for (const Vec3& x : g.nodes) REQUIRE(std::abs(dot(x, x) - 1.0) < 1e-14);
}

TEST_CASE("grid construction N=3") {
    SphereGrid g = build_grid(3, 12);
    REQUIRE(g.n == 12 * 24);
    REQUIRE(g.rows == 12);
    REQUIRE(g.per_row == 24);
    REQUIRE(g.exact_degree == 11);
    double ws = 0.0;
    for (double w : g.weights) ws += w;
    REQUIRE(std::abs(ws - 4.0 * pi) < 1e-12);
    for (const Vec3& x : g.nodes) REQUIRE(std::abs(dot(x, x) - 1.0) < 1e-13);
    REQUIRE(std::abs(default_delta(g) - 4.0 * g.mean_spacing) < 1e-16);
}

TEST_CASE("grid rejects bad parameters") {
    REQUIRE_THROWS_AS(build_grid(4, 16), UnsupportedDimension);
    REQUIRE_THROWS_AS(build_grid(1, 16), UnsupportedDimension);
    REQUIRE_THROWS_AS(build_grid(3, 7), PreconditionViolation);
}

TEST_CASE("grid integrates polynomial moments exactly") {
    // N=2: int cos^2 = pi, int cos^4 = 3pi/4
    SphereGrid g2 = build_grid(2, 16);
    std::vector<double> f(g2.n);
    for (std::size_t i = 0; i < g2.n; ++i) f[i] = g2.nodes[i][0] * g2.nodes[i][0];
    REQUIRE(std::abs(integrate(g2, f) - pi) < 1e-13);
    for (std::size_t i = 0; i < g2.n; ++i) f[i] *= f[i];
    REQUIRE(std::abs(integrate(g2, f) - 0.75 * pi) < 1e-13);

    // N=3: int z^2 = 4pi/3, int x^2 y^2 = 4pi/15
    SphereGrid g3 = build_grid(3, 10);
    REQUIRE(std::abs(integrate(g3, [](const Vec3& x) { return x[2] * x[2]; }) - 4.0 * pi / 3.0) <
            1e-12);
    REQUIRE(std::abs(integrate(g3,
                               [](const Vec3& x) {
                                   return x[0] * x[0] * x[1] * x[1];
                               }) -
                     4.0 * pi / 15.0) < 1e-12);
    // odd moments vanish
    REQUIRE(std::abs(integrate(g3, [](const Vec3& x) { return x[2]; })) < 1e-13);
    REQUIRE(std::abs(integrate(g3, [](const Vec3& x) { return x[0] * x[1]; })) < 1e-13);
}

TEST_CASE("integrate validates the field") {
    SphereGrid g = build_grid(2, 16);
    std::vector<double> wrong(8, 1.0);
    REQUIRE_THROWS_AS(integrate(g, wrong), PreconditionViolation);
    std::vector<double> bad(g.n, 1.0);
    bad[3] = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(integrate(g, bad), NonFiniteSample);
}

TEST_CASE("cell extents cover the sphere") {
    SphereGrid g = build_grid(3, 12);
    // sum of ext_pol * ext_az recovers the total area (cells tile the sphere)
    double area = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) area += g.ext_pol[i] * g.ext_az[i];
    REQUIRE(std::abs(area - 4.0 * pi) < 1e-10);
    // cell area matches the quadrature weight row by row
    for (std::size_t i = 0; i < g.n; ++i)
        REQUIRE(std::abs(g.ext_pol[i] * g.ext_az[i] - g.weights[i]) < 1e-12);
}

TEST_CASE("polar decomposition integral") {
    SphereGrid g2 = build_grid(2, 24);
    Vec3 x2{1.0, 0.0, 0.0};
    REQUIRE(std::abs(integrate_polar_about(x2, [](const Vec3&) { return 1.0; }, g2) - 2.0 * pi) <
            1e-10);

    SphereGrid g3 = build_grid(3, 12);
    Vec3 np{0.0, 0.0, 1.0};
    REQUIRE(std::abs(integrate_polar_about(np, [](const Vec3&) { return 1.0; }, g3) - 4.0 * pi) <
            1e-9);
    REQUIRE(std::abs(integrate_polar_about(np, [](const Vec3& p) { return p[2] * p[2]; }, g3) -
                     4.0 * pi / 3.0) < 1e-9);
    // invariance of the decomposition point
    Vec3 tilted{std::sqrt(0.5), 0.3, std::sqrt(1.0 - 0.5 - 0.09)};
    REQUIRE(std::abs(integrate_polar_about(tilted, [](const Vec3& p) { return p[2] * p[2]; }, g3) -
                     4.0 * pi / 3.0) < 1e-9);
}
