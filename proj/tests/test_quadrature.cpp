#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gamow/quadrature.hpp"

using namespace gamow;

TEST_CASE("gauss legendre nodes and weights") {
    for (int n : {2, 3, 4, 8, 16, 48}) {
        const GaussRule& r = gauss_legendre(n);
        REQUIRE(static_cast<int>(r.x.size()) == n);
        double wsum = 0.0;
        for (int i = 0; i < n; ++i) {
            REQUIRE(r.x[i] > -1.0);
            REQUIRE(r.x[i] < 1.0);
            if (i > 0) REQUIRE(r.x[i] > r.x[i - 1]);
            wsum += r.w[i];
        }
        REQUIRE(std::abs(wsum - 2.0) < 1e-14);
        // symmetry
        for (int i = 0; i < n / 2; ++i) {
            REQUIRE(std::abs(r.x[i] + r.x[n - 1 - i]) < 1e-14);
            REQUIRE(std::abs(r.w[i] - r.w[n - 1 - i]) < 1e-14);
        }
    }
}

TEST_CASE("gauss legendre polynomial exactness to degree 2n-1") {
    // int_{-1}^{1} x^p dx = 0 (odd) or 2/(p+1) (even)
    for (int n : {3, 4, 6}) {
        const GaussRule& r = gauss_legendre(n);
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.w[i] * std::pow(r.x[i], p);
            double exact = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
            REQUIRE(std::abs(s - exact) < 1e-13);
        }
    }
}

TEST_CASE("integrate_gl on shifted intervals") {
    auto f = [](double x) { return x * x * x * x * x; };
    REQUIRE(std::abs(integrate_gl(f, 0.0, 1.0, 3) - 1.0 / 6.0) < 1e-14);
    REQUIRE(std::abs(integrate_gl(f, 1.0, 2.0, 3) - (64.0 - 1.0) / 6.0) < 1e-12);
    auto g = [](double x) { return std::exp(x); };
    REQUIRE(std::abs(integrate_gl(g, 0.0, 1.0, 16) - (std::exp(1.0) - 1.0)) < 1e-14);
}

TEST_CASE("tanh sinh handles endpoint singularities") {
    REQUIRE(std::abs(tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) - 2.0) <
            1e-10);
    REQUIRE(std::abs(tanh_sinh([](double x) { return std::log(1.0 / x); }, 0.0, 1.0) - 1.0) <
            1e-10);
    REQUIRE(std::abs(tanh_sinh([](double x) { return std::sin(x); }, 0.0, pi) - 2.0) < 1e-12);
    REQUIRE(tanh_sinh([](double) { return 1.0; }, 1.0, 1.0) == 0.0);
    // x^{-0.9}: strong but integrable
    REQUIRE(std::abs(tanh_sinh([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0) - 10.0) <
            1e-8);
}

static void check_tiling(double lo, double hi, double floor_, int levels) {
    std::vector<Panel> p;
    graded_panels(lo, hi, floor_, levels, p);
    REQUIRE(!p.empty());
    double len = 0.0;
    for (const Panel& pn : p) {
        REQUIRE(pn.hi > pn.lo);
        len += pn.hi - pn.lo;
    }
    REQUIRE(std::abs(len - (hi - lo)) < 1e-12 * std::max(1.0, std::abs(hi - lo)));
    // sorted panels must chain exactly from lo to hi
    std::sort(p.begin(), p.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
    REQUIRE(p.front().lo == lo);
    REQUIRE(p.back().hi == hi);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) REQUIRE(p[i].hi == p[i + 1].lo);
}

TEST_CASE("graded panels tile the interval") {
    check_tiling(0.0, 1.0, 1e-4, 20);
    check_tiling(0.0, 1.0, 1e-4, 3);
    check_tiling(0.0, 1.0, 0.5, 20);
    check_tiling(0.2, 1.7, 1e-3, 12);
    check_tiling(-1.0, -0.001, 1e-3, 12);
    check_tiling(-2.5, 0.0, 1e-2, 9);
    // zero levels: a single panel covering everything
    std::vector<Panel> p;
    graded_panels(0.0, 1.0, 1e-6, 0, p);
    REQUIRE(p.size() == 1);
    REQUIRE(p[0].lo == 0.0);
    REQUIRE(p[0].hi == 1.0);
}

TEST_CASE("graded panels refine toward zero") {
    std::vector<Panel> p;
    graded_panels(0.0, 1.0, 1e-6, 40, p);
    REQUIRE(p.size() > 10);
    // widths shrink toward the origin and respect the floor
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        REQUIRE(p[i + 1].hi - p[i + 1].lo <= p[i].hi - p[i].lo + 1e-18);
    double wmin = 1.0;
    for (const Panel& pn : p) wmin = std::min(wmin, pn.hi - pn.lo);
    REQUIRE(wmin >= 0.5e-6);
}

TEST_CASE("geometric integral on (0,1]") {
    REQUIRE(std::abs(geometric_integral_01([](double t) { return 1.0; }) - 1.0) < 1e-10);
    REQUIRE(std::abs(geometric_integral_01([](double t) { return 1.0 / std::sqrt(t); }) - 2.0) <
            1e-8);
    REQUIRE(std::abs(geometric_integral_01([](double t) { return t * t; }) - 1.0 / 3.0) < 1e-10);
    REQUIRE_THROWS_AS(geometric_integral_01([](double t) { return 1.0 / t; }),
                      DivergentIntegral);
    REQUIRE_THROWS_AS(geometric_integral_01([](double t) { return std::pow(t, -1.5); }),
                      DivergentIntegral);
}
