#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "gamow/common.hpp"
#include "gamow/sphere_grid.hpp"

namespace gamow {

// Fully normalized associated Legendre values P(l,k) at t = cos(phi), with
// int_{-1}^{1} P^2 dt = 1, plus d/dphi.  Flat layout idx = l*(L+1)+k.
struct LegendreTable {
    int L;
    std::vector<double> p, dp;
    double& P(int l, int k) { return p[static_cast<std::size_t>(l) * (L + 1) + k]; }
    double& D(int l, int k) { return dp[static_cast<std::size_t>(l) * (L + 1) + k]; }
    double P(int l, int k) const { return p[static_cast<std::size_t>(l) * (L + 1) + k]; }
    double D(int l, int k) const { return dp[static_cast<std::size_t>(l) * (L + 1) + k]; }
};

inline LegendreTable legendre_table(int L, double t) {
    LegendreTable tab;
    tab.L = L;
    tab.p.assign(static_cast<std::size_t>(L + 1) * (L + 1), 0.0);
    tab.dp.assign(tab.p.size(), 0.0);
    double s = std::sqrt(std::max(1.0 - t * t, 1e-30));
    tab.P(0, 0) = 1.0 / std::sqrt(2.0);
    for (int k = 1; k <= L; ++k)
        tab.P(k, k) = std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s * tab.P(k - 1, k - 1);
    for (int k = 0; k <= L; ++k)
        for (int l = k + 1; l <= L; ++l) {
            double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - k * k));
            double prev2 = (l >= k + 2) ? tab.P(l - 2, k) : 0.0;
            double b = (l >= k + 2)
                           ? std::sqrt(((l - 1.0) * (l - 1.0) - k * k) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0))
                           : 0.0;
            tab.P(l, k) = a * (t * tab.P(l - 1, k) - b * prev2);
        }
    for (int k = 0; k <= L; ++k)
        for (int l = k; l <= L; ++l) {
            double below = (l >= 1 && l - 1 >= k) ? tab.P(l - 1, k) : 0.0;
            double fac = (l >= 1) ? std::sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) *
                                              (static_cast<double>(l) * l - k * k))
                                  : 0.0;
            tab.D(l, k) = (l * t * tab.P(l, k) - fac * below) / s;
        }
    return tab;
}

// Orthonormal real basis on S^{N-1} evaluated on a grid, with tangential
// derivative components.  Index order matches the shape-file layout:
// index 0 is the constant; N=3 then runs l = 1..L with k=0, then (cos,sin)
// pairs for k = 1..l; N=2 runs (cos, sin) pairs by frequency.
struct HarmonicBasis {
    const SphereGrid* grid = nullptr;
    int N = 3, L = 0, count = 0;
    std::vector<int> degree;
    std::vector<double> eig;           // Laplace-Beltrami eigenvalue l(l+N-2)
    std::vector<double> val;           // count x n
    std::vector<double> gpol, gaz;     // tangential components (N=2: gpol only)

    double value(int k, std::size_t i) const { return val[static_cast<std::size_t>(k) * grid->n + i]; }
};

inline int basis_count(int N, int L) { return N == 2 ? 1 + 2 * L : (L + 1) * (L + 1); }

inline HarmonicBasis make_basis(const SphereGrid& grid, int L) {
    if (L < 0 || L > grid.exact_degree)
        throw PreconditionViolation("basis degree exceeds grid exact degree");
    HarmonicBasis b;
    b.grid = &grid;
    b.N = grid.N;
    b.L = L;
    b.count = basis_count(grid.N, L);
    const std::size_t n = grid.n;
    b.degree.assign(b.count, 0);
    b.eig.assign(b.count, 0.0);
    b.val.assign(static_cast<std::size_t>(b.count) * n, 0.0);
    b.gpol.assign(b.val.size(), 0.0);
    b.gaz.assign(b.val.size(), 0.0);

    if (grid.N == 2) {
        const double c0 = 1.0 / std::sqrt(2.0 * pi), c1 = 1.0 / std::sqrt(pi);
        for (std::size_t i = 0; i < n; ++i) {
            double th = std::atan2(grid.nodes[i][1], grid.nodes[i][0]);
            b.val[i] = c0;
            for (int j = 1; j <= L; ++j) {
                std::size_t kc = static_cast<std::size_t>(2 * j - 1) * n + i;
                std::size_t ks = static_cast<std::size_t>(2 * j) * n + i;
                b.val[kc] = c1 * std::cos(j * th);
                b.val[ks] = c1 * std::sin(j * th);
                b.gpol[kc] = -c1 * j * std::sin(j * th);
                b.gpol[ks] = c1 * j * std::cos(j * th);
            }
        }
        for (int j = 1; j <= L; ++j) {
            b.degree[2 * j - 1] = b.degree[2 * j] = j;
            b.eig[2 * j - 1] = b.eig[2 * j] = static_cast<double>(j) * j;
        }
        return b;
    }

    const double inv_s2pi = 1.0 / std::sqrt(2.0 * pi), inv_spi = 1.0 / std::sqrt(pi);
    for (std::size_t i = 0; i < n; ++i) {
        double t = grid.nodes[i][2];
        double s = std::sqrt(std::max(1.0 - t * t, 1e-30));
        double cps = grid.nodes[i][0] / s, sps = grid.nodes[i][1] / s;
        LegendreTable tab = legendre_table(L, t);
        // cos(k psi), sin(k psi) by recurrence
        std::vector<double> ck(L + 1), sk(L + 1);
        ck[0] = 1.0;
        sk[0] = 0.0;
        for (int k = 1; k <= L; ++k) {
            ck[k] = ck[k - 1] * cps - sk[k - 1] * sps;
            sk[k] = sk[k - 1] * cps + ck[k - 1] * sps;
        }
        int idx = 0;
        b.val[static_cast<std::size_t>(idx) * n + i] = tab.P(0, 0) * inv_s2pi;
        ++idx;
        for (int l = 1; l <= L; ++l) {
            b.val[static_cast<std::size_t>(idx) * n + i] = tab.P(l, 0) * inv_s2pi;
            b.gpol[static_cast<std::size_t>(idx) * n + i] = tab.D(l, 0) * inv_s2pi;
            ++idx;
            for (int k = 1; k <= l; ++k) {
                std::size_t pc = static_cast<std::size_t>(idx) * n + i;
                std::size_t ps = static_cast<std::size_t>(idx + 1) * n + i;
                b.val[pc] = tab.P(l, k) * ck[k] * inv_spi;
                b.val[ps] = tab.P(l, k) * sk[k] * inv_spi;
                b.gpol[pc] = tab.D(l, k) * ck[k] * inv_spi;
                b.gpol[ps] = tab.D(l, k) * sk[k] * inv_spi;
                b.gaz[pc] = -k * tab.P(l, k) * sk[k] * inv_spi / s;
                b.gaz[ps] = k * tab.P(l, k) * ck[k] * inv_spi / s;
                idx += 2;
            }
        }
    }
    int idx = 1;
    for (int l = 1; l <= L; ++l) {
        int block = 1 + 2 * l;
        for (int q = 0; q < block; ++q) {
            b.degree[idx + q] = l;
            b.eig[idx + q] = static_cast<double>(l) * (l + 1);
        }
        idx += block;
    }
    return b;
}

inline std::vector<double> analyze(const HarmonicBasis& b, const std::vector<double>& values) {
    const std::size_t n = b.grid->n;
    std::vector<double> c(b.count, 0.0);
    for (int k = 0; k < b.count; ++k) {
        double s = 0.0;
        const double* row = &b.val[static_cast<std::size_t>(k) * n];
        for (std::size_t i = 0; i < n; ++i) s += b.grid->weights[i] * values[i] * row[i];
        c[k] = s;
    }
    return c;
}

inline std::vector<double> synthesize(const HarmonicBasis& b, const std::vector<double>& coeffs) {
    const std::size_t n = b.grid->n;
    std::vector<double> v(n, 0.0);
    for (int k = 0; k < b.count; ++k) {
        double ck = coeffs[k];
        if (ck == 0.0) continue;
        const double* row = &b.val[static_cast<std::size_t>(k) * n];
        for (std::size_t i = 0; i < n; ++i) v[i] += ck * row[i];
    }
    return v;
}

// tangential derivative components per node; gaz unused for N=2
inline void grad_components(const HarmonicBasis& b, const std::vector<double>& coeffs,
                            std::vector<double>& gpol, std::vector<double>& gaz) {
    const std::size_t n = b.grid->n;
    gpol.assign(n, 0.0);
    gaz.assign(n, 0.0);
    for (int k = 0; k < b.count; ++k) {
        double ck = coeffs[k];
        if (ck == 0.0) continue;
        const double* rp = &b.gpol[static_cast<std::size_t>(k) * n];
        const double* ra = &b.gaz[static_cast<std::size_t>(k) * n];
        for (std::size_t i = 0; i < n; ++i) {
            gpol[i] += ck * rp[i];
            gaz[i] += ck * ra[i];
        }
    }
}

inline std::vector<double> grad_norm_sq(const HarmonicBasis& b, const std::vector<double>& coeffs) {
    std::vector<double> gp, ga;
    grad_components(b, coeffs, gp, ga);
    std::vector<double> out(b.grid->n);
    for (std::size_t i = 0; i < b.grid->n; ++i) out[i] = gp[i] * gp[i] + ga[i] * ga[i];
    return out;
}

// full tangent vectors from the expansion of the sampled field
inline std::vector<Vec3> tangential_gradient(const SphereGrid& grid,
                                             const std::vector<double>& values, int L = -1) {
    if (L < 0) L = grid.exact_degree;
    HarmonicBasis b = make_basis(grid, L);
    std::vector<double> c = analyze(b, values);
    std::vector<double> gp, ga;
    grad_components(b, c, gp, ga);
    std::vector<Vec3> out(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const Vec3& x = grid.nodes[i];
        if (grid.N == 2) {
            out[i] = {-x[1] * gp[i], x[0] * gp[i], 0.0};
        } else {
            double t = x[2];
            double s = std::sqrt(std::max(1.0 - t * t, 1e-30));
            double cps = x[0] / s, sps = x[1] / s;
            Vec3 ephi{t * cps, t * sps, -s};
            Vec3 epsv{-sps, cps, 0.0};
            out[i] = {gp[i] * ephi[0] + ga[i] * epsv[0], gp[i] * ephi[1] + ga[i] * epsv[1],
                      gp[i] * ephi[2] + ga[i] * epsv[2]};
        }
    }
    return out;
}

// synthesis at an arbitrary sphere point (used for resampling between grids)
inline double eval_expansion(int N, int L, const std::vector<double>& coeffs, const Vec3& x) {
    if (N == 2) {
        double th = std::atan2(x[1], x[0]);
        double v = coeffs[0] / std::sqrt(2.0 * pi);
        for (int j = 1; j <= L; ++j)
            v += (coeffs[2 * j - 1] * std::cos(j * th) + coeffs[2 * j] * std::sin(j * th)) /
                 std::sqrt(pi);
        return v;
    }
    double t = x[2];
    double s = std::sqrt(std::max(1.0 - t * t, 1e-30));
    double cps = x[0] / s, sps = x[1] / s;
    LegendreTable tab = legendre_table(L, t);
    std::vector<double> ck(L + 1), sk(L + 1);
    ck[0] = 1.0;
    sk[0] = 0.0;
    for (int k = 1; k <= L; ++k) {
        ck[k] = ck[k - 1] * cps - sk[k - 1] * sps;
        sk[k] = sk[k - 1] * cps + ck[k - 1] * sps;
    }
    const double inv_s2pi = 1.0 / std::sqrt(2.0 * pi), inv_spi = 1.0 / std::sqrt(pi);
    double v = coeffs[0] * tab.P(0, 0) * inv_s2pi;
    int idx = 1;
    for (int l = 1; l <= L; ++l) {
        v += coeffs[idx++] * tab.P(l, 0) * inv_s2pi;
        for (int k = 1; k <= l; ++k) {
            v += coeffs[idx] * tab.P(l, k) * ck[k] * inv_spi;
            v += coeffs[idx + 1] * tab.P(l, k) * sk[k] * inv_spi;
            idx += 2;
        }
    }
    return v;
}

} // namespace gamow
