#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <random>
#include <vector>

#include "gamow/common.hpp"
#include "gamow/harmonics.hpp"
#include "gamow/sphere_grid.hpp"

namespace gamow {

// Shared (grid, basis) pair: every RadialGraph lives on one of these.
struct ShapeSpace {
    std::shared_ptr<const SphereGrid> grid;
    std::shared_ptr<const HarmonicBasis> basis;
    int N() const { return grid->N; }
    int L() const { return basis->L; }
};

inline ShapeSpace make_space(int N, int m, int L) {
    ShapeSpace s;
    s.grid = std::make_shared<SphereGrid>(build_grid(N, m));
    s.basis = std::make_shared<HarmonicBasis>(make_basis(*s.grid, L));
    return s;
}

// E(u) = { rho x : 0 <= rho < 1 + u(x) }, |u| < 1/2 enforced at construction.
struct RadialGraph {
    ShapeSpace space;
    std::vector<double> coeffs;   // harmonic coefficients, shape-file order
    std::vector<double> values;   // u at grid nodes, synchronized with coeffs

    const SphereGrid& grid() const { return *space.grid; }
    const HarmonicBasis& basis() const { return *space.basis; }
    int N() const { return space.N(); }
};

inline double sup_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

inline RadialGraph make_graph(const ShapeSpace& space, std::vector<double> coeffs) {
    RadialGraph g;
    g.space = space;
    g.values = synthesize(*space.basis, coeffs);
    g.coeffs = std::move(coeffs);
    if (sup_norm(g.values) >= 0.5)
        throw AmplitudeOverflow("radial graph needs |u| < 1/2");
    return g;
}

inline RadialGraph zero_graph(const ShapeSpace& space) {
    return make_graph(space, std::vector<double>(space.basis->count, 0.0));
}

// ---------------------------------------------------------------- functionals

inline double volume(const RadialGraph& u) {
    const SphereGrid& g = u.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        s += g.weights[i] * std::pow(1.0 + u.values[i], g.N) / g.N;
    return s;
}

inline double perimeter(const RadialGraph& u) {
    const SphereGrid& g = u.grid();
    std::vector<double> gn = grad_norm_sq(u.basis(), u.coeffs);
    double s = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        double r = 1.0 + u.values[i];
        s += g.weights[i] * std::pow(r, g.N - 2) * std::sqrt(r * r + gn[i]);
    }
    return s;
}

inline double w12_norm_sq(const RadialGraph& u) {
    const SphereGrid& g = u.grid();
    std::vector<double> gn = grad_norm_sq(u.basis(), u.coeffs);
    double s = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        s += g.weights[i] * (u.values[i] * u.values[i] + gn[i]);
    return s;
}

// ---------------------------------------------------------------- layers

struct SignedLayers {
    std::vector<double> plus;    // u+ = max(u,0)
    std::vector<double> minus;   // u- = max(-u,0)
};

inline SignedLayers split_layers(const RadialGraph& u) {
    SignedLayers s;
    s.plus.resize(u.values.size());
    s.minus.resize(u.values.size());
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        s.plus[i] = std::max(u.values[i], 0.0);
        s.minus[i] = std::max(-u.values[i], 0.0);
    }
    return s;
}

inline double shell_volume_plus(const RadialGraph& u) {
    const SphereGrid& g = u.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        double p = std::max(u.values[i], 0.0);
        s += g.weights[i] * (std::pow(1.0 + p, g.N) - 1.0) / g.N;
    }
    return s;
}

inline double shell_volume_minus(const RadialGraph& u) {
    const SphereGrid& g = u.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        double q = std::max(-u.values[i], 0.0);
        s += g.weights[i] * (1.0 - std::pow(1.0 - q, g.N)) / g.N;
    }
    return s;
}

// ---------------------------------------------------------------- normalization

// 1 + u' = lambda (1 + u) with lambda = (omega_N / volume)^{1/N}; linear in
// the coefficients, so values and coefficients stay exactly synchronized.
inline RadialGraph normalize_volume(const RadialGraph& u) {
    const SphereGrid& g = u.grid();
    double lam = std::pow(ball_volume(g.N) / volume(u), 1.0 / g.N);
    RadialGraph out;
    out.space = u.space;
    out.coeffs = u.coeffs;
    for (double& c : out.coeffs) c *= lam;
    out.coeffs[0] += (lam - 1.0) * std::sqrt(sphere_area(g.N));
    out.values.resize(u.values.size());
    for (std::size_t i = 0; i < u.values.size(); ++i)
        out.values[i] = lam * (1.0 + u.values[i]) - 1.0;
    if (sup_norm(out.values) >= 0.5)
        throw AmplitudeOverflow("volume normalization pushed |u| past 1/2");
    return out;
}

inline Vec3 barycenter(const RadialGraph& u) {
    const SphereGrid& g = u.grid();
    Vec3 b{0.0, 0.0, 0.0};
    double vol = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        double r = 1.0 + u.values[i];
        double mom = g.weights[i] * std::pow(r, g.N + 1) / (g.N + 1);
        vol += g.weights[i] * std::pow(r, g.N) / g.N;
        for (int d = 0; d < 3; ++d) b[d] += mom * g.nodes[i][d];
    }
    for (int d = 0; d < 3; ++d) b[d] /= vol;
    return b;
}

// Kills the barycenter to first order per iteration by subtracting the
// degree-1 harmonic b.x from u.
inline RadialGraph recenter(const RadialGraph& u, int iters = 3) {
    RadialGraph cur = u;
    for (int it = 0; it < iters; ++it) {
        Vec3 b = barycenter(cur);
        std::vector<double> c = cur.coeffs;
        if (cur.N() == 2) {
            c[1] -= std::sqrt(pi) * b[0];
            c[2] -= std::sqrt(pi) * b[1];
        } else {
            double f = std::sqrt(4.0 * pi / 3.0);
            c[1] -= f * b[2];
            c[2] -= f * b[0];
            c[3] -= f * b[1];
        }
        cur = make_graph(cur.space, std::move(c));
    }
    return cur;
}

// ---------------------------------------------------------------- Fuglede

struct FugledeResult {
    double deficit = 0.0;   // P(E) - P(B)
    double norm_sq = 0.0;   // ||u||_{W^{1,2}}^2
    double ratio = 0.0;
    bool defined = false;   // false when norm_sq ~ 0
};

inline FugledeResult fuglede_deficit(const RadialGraph& u) {
    const int N = u.N();
    double vol = volume(u);
    if (std::abs(vol - ball_volume(N)) > 1e-8 * ball_volume(N))
        throw PreconditionViolation("fuglede: volume not normalized");
    Vec3 b = barycenter(u);
    if (std::sqrt(dot(b, b)) > 1e-3)
        throw PreconditionViolation("fuglede: barycenter not centered");
    if (sup_norm(u.values) > 0.2)
        throw PreconditionViolation("fuglede: amplitude above 0.2");
    FugledeResult r;
    r.deficit = perimeter(u) - sphere_area(N);
    r.norm_sq = w12_norm_sq(u);
    if (r.norm_sq >= 1e-14) {
        r.ratio = r.deficit / r.norm_sq;
        r.defined = true;
    }
    return r;
}

// Same harmonic expansion carried to another grid resolution; degrees beyond
// what the coarse rule can integrate exactly are dropped.
inline RadialGraph resample(const RadialGraph& u, int m2) {
    const int N = u.N();
    SphereGrid probe = build_grid(N, m2);
    int L2 = std::min(u.space.L(), probe.exact_degree);
    ShapeSpace s2 = make_space(N, m2, L2);
    std::vector<double> c2(u.coeffs.begin(), u.coeffs.begin() + s2.basis->count);
    return make_graph(s2, std::move(c2));
}

// ---------------------------------------------------------------- random shapes

inline double uniform_pm1(std::mt19937& rng) {
    // 53-bit uniform in [0,1), portable across standard libraries
    std::uint64_t hi = rng(), lo = rng();
    double x = static_cast<double>(((hi << 21) ^ lo) & ((1ull << 53) - 1)) /
               static_cast<double>(1ull << 53);
    return 2.0 * x - 1.0;
}

// Random band-limited u over degrees 1..L with a mild spectral decay,
// sup-normalized to the requested amplitude.
inline RadialGraph random_shape(long seed, double amplitude, int L, const ShapeSpace& space) {
    if (amplitude > 0.4) throw PreconditionViolation("random shape amplitude cap is 0.4");
    if (L > space.L()) throw PreconditionViolation("random shape degree exceeds basis");
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    const HarmonicBasis& b = *space.basis;
    std::vector<double> c(b.count, 0.0);
    for (int k = 1; k < b.count; ++k) {
        double draw = uniform_pm1(rng);
        if (b.degree[k] <= L) c[k] = draw / (1.0 + b.eig[k]);
    }
    std::vector<double> v = synthesize(b, c);
    double s = sup_norm(v);
    double scale = (amplitude > 0.0 && s > 0.0) ? amplitude / s : 0.0;
    for (double& x : c) x *= scale;
    return make_graph(space, std::move(c));
}

} // namespace gamow
