#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "gamow/energy.hpp"

using namespace gamow;

namespace {

// Newtonian potential of the unit-density ball of radius a at distance b
double newtonian_psi(double a, double b) {
    if (b >= a) return 4.0 * pi * a * a * a / (3.0 * b);
    return 2.0 * pi * (a * a - b * b / 3.0);
}

template <class F>
double simpson2d(F&& f, double a0, double a1, double b0, double b1, int n) {
    if (n % 2) ++n;
    auto wt = [n](int i) { return (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
    double hx = (a1 - a0) / n, hy = (b1 - b0) / n, s = 0.0;
    for (int i = 0; i <= n; ++i) {
        double row = 0.0, x = a0 + i * hx;
        for (int j = 0; j <= n; ++j) row += wt(j) * f(x, b0 + j * hy);
        s += wt(i) * row;
    }
    return s * hx * hy / 9.0;
}

} // namespace

TEST_CASE("cap area branches") {
    // outside and degenerate
    REQUIRE(cap_area(3, 0.0, 1.0, 1.0) == 0.0);
    REQUIRE(cap_area(3, 2.5, 1.0, 1.0) == 0.0);
    REQUIRE(cap_area(2, -1.0, 1.0, 1.0) == 0.0);
    // sphere fully inside the ball
    REQUIRE(std::abs(cap_area(3, 1.0, 2.0, 0.5) - 4.0 * pi) < 1e-14);
    REQUIRE(std::abs(cap_area(2, 1.0, 2.0, 0.5) - 2.0 * pi) < 1e-14);
    // a = b = t = 1: half-angle pi/3
    REQUIRE(std::abs(cap_area(2, 1.0, 1.0, 1.0) - 2.0 * pi / 3.0) < 1e-14);
    REQUIRE(std::abs(cap_area(3, 1.0, 1.0, 1.0) - pi) < 1e-14);
    // continuity at the full-sphere transition t = a - b
    double t = 1.5 - 1e-9;
    REQUIRE(std::abs(cap_area(3, t, 2.0, 0.5) - 4.0 * pi * t * t) < 1e-6);
}

TEST_CASE("psi matches the Newtonian closed form") {
    RadialKernel k = make_riesz(2.0);
    for (double a : {0.9, 1.0, 1.1})
        for (double b : {0.5, 1.0, 2.0}) {
            double ref = newtonian_psi(a, b);
            REQUIRE(std::abs(psi(k, 3, a, b) - ref) < 1e-9 * ref);
        }
    REQUIRE_THROWS_AS(psi(k, 3, 0.0, 1.0), DomainError);
    REQUIRE_THROWS_AS(psi(k, 3, 1.0, -0.5), DomainError);
}

TEST_CASE("psi for an exponential kernel against Monte Carlo") {
    RadialKernel k = make_exponential(1.0);
    const double a = 1.0, b = 0.7;
    std::mt19937 rng(12345);
    double sum = 0.0;
    long hits = 0;
    while (hits < 300000) {
        double x = uniform_pm1(rng) * a, y = uniform_pm1(rng) * a, z = uniform_pm1(rng) * a;
        if (x * x + y * y + z * z > a * a) continue;
        ++hits;
        double d = std::sqrt(x * x + y * y + (z - b) * (z - b));
        sum += std::exp(-d);
    }
    double mc = sum / hits * (4.0 * pi / 3.0) * a * a * a;
    double val = psi(k, 3, a, b);
    REQUIRE(std::abs(val - mc) < 6e-3 * val);
}

TEST_CASE("layer potential closed forms") {
    RadialKernel k = make_riesz(2.0);
    for (double s : {0.2, 0.05}) {
        REQUIRE(std::abs(jfun(k, 3, s) - 2.0 * pi * (2.0 * s + s * s)) < 1e-9);
        double inner = (4.0 * pi / 3.0) * (std::pow(1.0 - s, 3) - 1.0);
        REQUIRE(std::abs(jfun(k, 3, -s) - inner) < 1e-9);
        double sym = (jfun(k, 3, s) + jfun(k, 3, -s)) / (s * s);
        REQUIRE(std::abs(sym - (6.0 * pi - 4.0 * pi * s / 3.0)) < 1e-7);
    }
    REQUIRE_THROWS_AS(jfun(k, 3, -1.0), DomainError);
}

TEST_CASE("ball self-interaction closed forms") {
    RadialKernel k = make_riesz(2.0);
    double ref3 = 32.0 * pi * pi / 15.0;
    REQUIRE(std::abs(riesz_ball(k, 3) - ref3) < 1e-10 * ref3);
    // N=2, alpha=2: the kernel is identically 1, so r(B) = |B|^2
    REQUIRE(std::abs(riesz_ball(k, 2) - pi * pi) < 1e-10 * pi * pi);
}

TEST_CASE("pairwise quadrature reproduces the radial reduction on the ball") {
    ShapeSpace sp = make_space(3, 16, 2);
    RadialGraph ball = zero_graph(sp);
    for (auto k : {make_riesz(2.0), make_exponential(1.0)}) {
        double ref = riesz_ball(k, 3);
        double q = riesz_energy(k, ball);
        REQUIRE(std::abs(q - ref) < 1e-3 * ref);
    }
}

TEST_CASE("radial pair integral: constant kernel closed form") {
    RadialKernel k = make_constant(1.0);
    for (double th : {0.01, 0.5, 2.0}) {
        double v = pair_radial_integral(k, 3, 0.2, 0.9, 0.4, 1.1, th);
        double ref = (std::pow(0.9, 3) - std::pow(0.2, 3)) *
                     (std::pow(1.1, 3) - std::pow(0.4, 3)) / 9.0;
        REQUIRE(std::abs(v - ref) < 1e-12 * ref);
        double v2 = pair_radial_integral(k, 2, 0.2, 0.9, 0.4, 1.1, th);
        double ref2 = (0.9 * 0.9 - 0.2 * 0.2) * (1.1 * 1.1 - 0.4 * 0.4) / 4.0;
        REQUIRE(std::abs(v2 - ref2) < 1e-12 * ref2);
    }
}

TEST_CASE("radial pair integral against dense 2-D quadrature") {
    RadialKernel k = make_riesz(2.0);
    auto dense = [&](double a0, double a1, double b0, double b1, double th, int n) {
        double c = std::cos(th);
        return simpson2d(
            [&](double r, double s) {
                double d2 = r * r + s * s - 2.0 * r * s * c;
                return r * r * s * s / std::sqrt(std::max(d2, 1e-300));
            },
            a0, a1, b0, b1, n);
    };
    double wide = pair_radial_integral(k, 3, 0.0, 1.0, 0.0, 1.0, 0.5 * pi);
    double wref = dense(0.0, 1.0, 0.0, 1.0, 0.5 * pi, 2000);
    REQUIRE(std::abs(wide - wref) < 1e-6 * wref);
    double tight = pair_radial_integral(k, 3, 0.5, 1.0, 0.5, 1.0, 0.01);
    double tref = dense(0.5, 1.0, 0.5, 1.0, 0.01, 4000);
    REQUIRE(std::abs(tight - tref) < 1e-4 * tref);
}

TEST_CASE("radial pair integral: symmetry and empty rectangles") {
    RadialKernel k = make_riesz(1.5);
    double ab = pair_radial_integral(k, 3, 0.3, 0.8, 0.9, 1.2, 0.7);
    double ba = pair_radial_integral(k, 3, 0.9, 1.2, 0.3, 0.8, 0.7);
    REQUIRE(ab == ba);   // canonical ordering makes the swap bitwise exact
    REQUIRE(pair_radial_integral(k, 3, 0.5, 0.5, 0.0, 1.0, 0.7) == 0.0);
    REQUIRE(pair_radial_integral(k, 3, 0.0, 1.0, 0.8, 0.8, 0.7) == 0.0);
}

TEST_CASE("same-cell rule has unit mass") {
    PairRuleConfig cfg;
    for (int N : {2, 3}) {
        SphereGrid g = build_grid(N, 16);
        DiagRule d = make_diag_rule(N, g.ext_pol[0], g.ext_az[0], cfg);
        double mass = 0.0;
        for (double w : d.weight) mass += w;
        REQUIRE(std::abs(mass - 1.0) < 1e-14);
        for (double t : d.theta) REQUIRE(t > 0.0);
    }
}

TEST_CASE("constant-kernel cross interaction is a product of volumes") {
    RadialKernel k = make_constant(1.0);
    ShapeSpace sp = make_space(3, 12, 4);
    RadialGraph u = random_shape(9, 0.2, 4, sp);
    SignedLayers lay = split_layers(u);
    ShellSet ep = outer_shell(*sp.grid, lay.plus);
    ShellSet em = inner_shell(*sp.grid, lay.minus);
    double cross = shell_cross_interaction(k, ep, em);
    double ref = shell_volume_plus(u) * shell_volume_minus(u);
    REQUIRE(std::abs(cross - ref) < 1e-12 * ref);
    // self-interaction of the full set likewise equals volume squared
    double self = riesz_energy(k, u);
    double vol = volume(u);
    REQUIRE(std::abs(self - vol * vol) < 1e-12 * vol * vol);
}

TEST_CASE("pair rule is exactly dilation covariant") {
    RadialKernel k = make_riesz(2.0);
    ShapeSpace sp = make_space(3, 12, 2);
    std::vector<double> c(sp.basis->count, 0.0);
    RadialGraph ball = make_graph(sp, c);
    c[0] = 0.2 * std::sqrt(4.0 * pi);
    RadialGraph big = make_graph(sp, c);
    double ratio = riesz_energy(k, big, fast_pair_rule()) /
                   riesz_energy(k, ball, fast_pair_rule());
    // r(RB) = R^{N+alpha} r(B), and the quadrature tracks the scaling exactly,
    // far beyond its own absolute accuracy
    REQUIRE(std::abs(ratio - std::pow(1.2, 5)) < 1e-9);
}

TEST_CASE("mismatched grids are rejected") {
    RadialKernel k = make_constant(1.0);
    SphereGrid ga = build_grid(3, 12), gb = build_grid(3, 16);
    ShellSet a = ball_set(ga), b = ball_set(gb);
    REQUIRE_THROWS_AS(shell_cross_interaction(k, a, b), PreconditionViolation);
}

TEST_CASE("decomposition residual stays small") {
    RadialKernel k = make_riesz(2.0);
    ShapeSpace sp = make_space(3, 12, 4);
    RadialGraph u = random_shape(11, 0.2, 4, sp);
    DecompositionReport r = energy_decomposition(k, u, fast_pair_rule());
    REQUIRE(r.residual < 2e-3 * r.r_ball);
    REQUIRE(r.r_plus > 0.0);
    REQUIRE(r.r_minus > 0.0);
    REQUIRE(std::abs(r.lhs - (r.r_full - r.r_ball)) == 0.0);
}

TEST_CASE("energy report wiring") {
    RadialKernel k = make_riesz(2.0);
    ShapeSpace sp = make_space(2, 32, 3);
    RadialGraph u = random_shape(13, 0.1, 3, sp);
    EnergyReport r = gamow_energy(k, 0.5, u, fast_pair_rule());
    REQUIRE(std::abs(r.f_eps - (r.perimeter + 0.5 * r.riesz)) < 1e-14 * r.f_eps);
    REQUIRE(r.epsilon == 0.5);
    REQUIRE(std::abs(r.ball_perimeter - 2.0 * pi) < 1e-14);
    REQUIRE(std::isfinite(r.quadrature_error_estimate));
    // below the coarse threshold the estimate is absent
    ShapeSpace tiny = make_space(2, 8, 2);
    EnergyReport r2 = gamow_energy(k, 0.5, zero_graph(tiny), fast_pair_rule());
    REQUIRE(std::isnan(r2.quadrature_error_estimate));
}
