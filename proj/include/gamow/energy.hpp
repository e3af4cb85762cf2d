#pragma once

#include <cmath>
#include <limits>

#include "gamow/common.hpp"
#include "gamow/kernel.hpp"
#include "gamow/pair_rule.hpp"
#include "gamow/quadrature.hpp"
#include "gamow/shape.hpp"

namespace gamow {

// Area of the part of the sphere of radius t, centered at distance b from the
// origin, that lies inside the ball of radius a.
inline double cap_area(int N, double t, double a, double b) {
    if (t <= 0.0 || t >= a + b) return 0.0;
    double cth = std::clamp((b * b + t * t - a * a) / (2.0 * b * t), -1.0, 1.0);
    if (cth <= -1.0) return sphere_area(N) * std::pow(t, N - 1);
    double th = std::acos(cth);
    if (N == 2) return 2.0 * t * th;
    return 2.0 * pi * t * t * (1.0 - cth);
}

// psi(a,b) = integral of g(|z - w|) over the ball of radius a, seen from a
// point w at distance b.  Reduced to one dimension through cap areas; the
// possibly singular piece at t = 0 and the cap piece are integrated
// separately so tanh-sinh sees clean endpoints.
inline double psi(const RadialKernel& k, int N, double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw DomainError("psi needs a > 0, b > 0");
    auto f = [&](double t) { return eval_kernel(k, N, t) * cap_area(N, t, a, b); };
    double split = std::abs(a - b);
    double out = 0.0;
    if (b < a && split > 1e-14) {
        auto full = [&](double t) {
            return eval_kernel(k, N, t) * sphere_area(N) * std::pow(t, N - 1);
        };
        out += tanh_sinh(full, 0.0, split);
    }
    double lo = (b < a) ? split : ((b > a) ? split : 0.0);
    out += tanh_sinh(f, lo, a + b);
    return out;
}

// J(sigma) = psi(1 + sigma, 1) - psi(1, 1): layer potential of the radius
// perturbation against the unit sphere.
inline double jfun(const RadialKernel& k, int N, double sigma) {
    if (sigma <= -1.0) throw DomainError("jfun needs sigma > -1");
    return psi(k, N, 1.0 + sigma, 1.0) - psi(k, N, 1.0, 1.0);
}

// Interaction of the unit ball with itself, by the one-dimensional reduction
// r(B) = N omega_N \int_0^1 psi(1, b) b^{N-1} db.
inline double riesz_ball(const RadialKernel& k, int N) {
    auto f = [&](double b) { return psi(k, N, 1.0, b) * std::pow(b, N - 1); };
    return sphere_area(N) * integrate_gl(f, 0.0, 1.0, 48);
}

inline double riesz_energy(const RadialKernel& k, const RadialGraph& u,
                           const PairRuleConfig& cfg = {}) {
    ShellSet e = full_set(u.grid(), u.values);
    return shell_self_interaction(k, e, cfg);
}

// ---------------------------------------------------------------- decomposition

// With E = (B u E+) \ E- and bilinearity,
//   r(E) - r(B) = 2 r(B,E+) - 2 r(B,E-) + r(E+) + r(E-) - 2 r(E+,E-).
// The left side takes r(B) from the one-dimensional reduction, so the
// residual tracks the angular quadrature error and shrinks under grid
// refinement.
struct DecompositionReport {
    double lhs = 0.0, rhs = 0.0, residual = 0.0;
    double r_full = 0.0, r_ball = 0.0;
    double r_cross_plus = 0.0, r_cross_minus = 0.0;
    double r_plus = 0.0, r_minus = 0.0, r_plus_minus = 0.0;
};

inline DecompositionReport energy_decomposition(const RadialKernel& k, const RadialGraph& u,
                                                const PairRuleConfig& cfg = {}) {
    const SphereGrid& g = u.grid();
    SignedLayers lay = split_layers(u);
    ShellSet eq = full_set(g, u.values);
    ShellSet bq = ball_set(g);
    ShellSet ep = outer_shell(g, lay.plus);
    ShellSet em = inner_shell(g, lay.minus);
    DecompositionReport r;
    r.r_full = shell_self_interaction(k, eq, cfg);
    r.r_ball = riesz_ball(k, g.N);
    r.r_cross_plus = shell_cross_interaction(k, bq, ep, cfg);
    r.r_cross_minus = shell_cross_interaction(k, bq, em, cfg);
    r.r_plus = shell_self_interaction(k, ep, cfg);
    r.r_minus = shell_self_interaction(k, em, cfg);
    r.r_plus_minus = shell_cross_interaction(k, ep, em, cfg);
    r.lhs = r.r_full - r.r_ball;
    r.rhs = 2.0 * r.r_cross_plus - 2.0 * r.r_cross_minus + r.r_plus + r.r_minus -
            2.0 * r.r_plus_minus;
    r.residual = std::abs(r.lhs - r.rhs);
    return r;
}

// ---------------------------------------------------------------- Gamow energy

struct EnergyReport {
    double perimeter = 0.0;
    double riesz = 0.0;
    double f_eps = 0.0;
    double epsilon = 0.0;
    double ball_perimeter = 0.0;
    double ball_riesz = 0.0;
    double quadrature_error_estimate = std::numeric_limits<double>::quiet_NaN();
};

inline EnergyReport gamow_energy(const RadialKernel& k, double eps, const RadialGraph& u,
                                 const PairRuleConfig& cfg = {},
                                 bool with_error_estimate = true) {
    const int N = u.N();
    EnergyReport r;
    r.epsilon = eps;
    r.perimeter = perimeter(u);
    r.riesz = riesz_energy(k, u, cfg);
    r.f_eps = r.perimeter + eps * r.riesz;
    r.ball_perimeter = sphere_area(N);
    r.ball_riesz = riesz_ball(k, N);
    int m2 = u.grid().m / 2;
    if (with_error_estimate && m2 >= 8) {
        RadialGraph coarse = resample(u, m2);
        double f2 = perimeter(coarse) + eps * riesz_energy(k, coarse, cfg);
        r.quadrature_error_estimate = std::abs(r.f_eps - f2);
    }
    return r;
}

} // namespace gamow
