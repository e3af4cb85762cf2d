#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "gamow/common.hpp"
#include "gamow/quadrature.hpp"

namespace gamow {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Quadrature mesh on S^{N-1}.  N=2: m uniform angles.  N=3: Gauss-Legendre in
// the polar cosine (m rows, ascending t) x 2m uniform azimuth.  Node ordering
// is row-major and fixed, which the deterministic reductions rely on.
struct SphereGrid {
    int N = 3;
    int m = 0;
    std::size_t n = 0;                // node count
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    std::vector<double> ext_pol;      // angular cell extent, polar direction (N=2: arc)
    std::vector<double> ext_az;       // angular cell extent, azimuthal arc (N=2: 0)
    int rows = 0, per_row = 0;
    double mean_spacing = 0.0;        // h; near-pair threshold defaults to 4h
    int exact_degree = 0;             // largest degree the rule transforms exactly
};

inline SphereGrid build_grid(int N, int m) {
    if (N != 2 && N != 3) throw UnsupportedDimension("grid supports N in {2,3}");
    if (m < 8) throw PreconditionViolation("grid resolution m >= 8 required");
    SphereGrid g;
    g.N = N;
    g.m = m;
    if (N == 2) {
        g.n = static_cast<std::size_t>(m);
        g.rows = m;
        g.per_row = 1;
        double w = 2.0 * pi / m;
        for (int j = 0; j < m; ++j) {
            double th = w * j;
            g.nodes.push_back({std::cos(th), std::sin(th), 0.0});
            g.weights.push_back(w);
            g.ext_pol.push_back(w);
            g.ext_az.push_back(0.0);
        }
        g.mean_spacing = w;
        g.exact_degree = (m - 1) / 2;
    } else {
        const GaussRule& gl = gauss_legendre(m);
        g.n = static_cast<std::size_t>(m) * (2 * m);
        g.rows = m;
        g.per_row = 2 * m;
        double dpsi = 2.0 * pi / (2 * m);
        for (int r = 0; r < m; ++r) {
            double t = gl.x[r];
            double st = std::sqrt(std::max(1.0 - t * t, 0.0));
            double wnode = gl.w[r] * dpsi;
            for (int j = 0; j < 2 * m; ++j) {
                double ps = dpsi * j;
                g.nodes.push_back({st * std::cos(ps), st * std::sin(ps), t});
                g.weights.push_back(wnode);
                g.ext_pol.push_back(gl.w[r] / st);
                g.ext_az.push_back(st * dpsi);
            }
        }
        double wbar = 4.0 * pi / static_cast<double>(g.n);
        g.mean_spacing = std::sqrt(wbar / pi);
        g.exact_degree = m - 1;
    }
    return g;
}

inline double default_delta(const SphereGrid& g) { return 4.0 * g.mean_spacing; }

inline double integrate(const SphereGrid& g, const std::vector<double>& f) {
    if (f.size() != g.n) throw PreconditionViolation("field size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        if (!std::isfinite(f[i])) throw NonFiniteSample("non-finite field sample");
        s += g.weights[i] * f[i];
    }
    return s;
}

inline double integrate(const SphereGrid& g, const std::function<double(const Vec3&)>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        double v = f(g.nodes[i]);
        if (!std::isfinite(v)) throw NonFiniteSample("non-finite field sample");
        s += g.weights[i] * v;
    }
    return s;
}

// ---------------------------------------------------- polar decomposition rule

// Integrates f over the sphere through the polar decomposition about x:
// int_{E_x} int_0^pi f(x cos(th) + w sin(th)) (sin th)^{N-2} dth dw.
// Product rule: Gauss-Legendre in th, uniform rule on the equator E_x.
inline double integrate_polar_about(const Vec3& x, const std::function<double(const Vec3&)>& f,
                                    const SphereGrid& g) {
    int nth = std::max(2 * g.m, 16);
    if (g.N == 2) {
        // E_x is the two unit tangents; decomposition is the two arcs from x.
        Vec3 tau{-x[1], x[0], 0.0};
        double s = 0.0;
        for (int sgn : {-1, 1}) {
            s += integrate_gl(
                [&](double th) {
                    Vec3 p{x[0] * std::cos(th) + sgn * tau[0] * std::sin(th),
                           x[1] * std::cos(th) + sgn * tau[1] * std::sin(th), 0.0};
                    return f(p);
                },
                0.0, pi, nth);
        }
        return s;
    }
    // orthonormal frame (e1,e2) spanning the equator of x
    Vec3 e1;
    if (std::abs(x[0]) < 0.9)
        e1 = {0.0, -x[2], x[1]};
    else
        e1 = {-x[2], 0.0, x[0]};
    double n1 = std::sqrt(dot(e1, e1));
    e1 = {e1[0] / n1, e1[1] / n1, e1[2] / n1};
    Vec3 e2{x[1] * e1[2] - x[2] * e1[1], x[2] * e1[0] - x[0] * e1[2],
            x[0] * e1[1] - x[1] * e1[0]};
    int naz = 2 * g.m;
    double daz = 2.0 * pi / naz;
    double total = 0.0;
    for (int j = 0; j < naz; ++j) {
        double ps = daz * j;
        Vec3 w{e1[0] * std::cos(ps) + e2[0] * std::sin(ps),
               e1[1] * std::cos(ps) + e2[1] * std::sin(ps),
               e1[2] * std::cos(ps) + e2[2] * std::sin(ps)};
        total += daz * integrate_gl(
                           [&](double th) {
                               double ct = std::cos(th), st = std::sin(th);
                               Vec3 p{x[0] * ct + w[0] * st, x[1] * ct + w[1] * st,
                                      x[2] * ct + w[2] * st};
                               return f(p) * st;
                           },
                           0.0, pi, nth);
    }
    return total;
}

} // namespace gamow
