#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gamow/common.hpp"
#include "gamow/kernel.hpp"
#include "gamow/parallel.hpp"
#include "gamow/quadrature.hpp"
#include "gamow/sphere_grid.hpp"

// Deterministic quadrature for pair interactions between radial shells.
// Every node pair reduces to the same radial double integral; the angular
// classes (far / near / same-cell) only decide at which angles it is sampled.

namespace gamow {

struct PairRuleConfig {
    double delta_factor = 4.0;   // near threshold = delta_factor * mean spacing
    int ns = 4;                  // Gauss order across the difference variable
    int nm = 4;                  // Gauss order across the mean variable
    double floor_factor = 0.5;   // grading floor, relative to sqrt(beta)*Rmax
    double floor_abs = 3e-5;     // grading floor, relative to Rmax
    int max_side_levels = 14;    // dyadic grading cap per piece
    int diag_n_chi = 3;          // same-cell rule: Gauss order per chi segment
    int diag_n_r = 2;            // same-cell rule: Gauss order per radial level
    int diag_levels = 8;         // same-cell rule: geometric levels toward 0
};

// Cheaper preset for optimizer inner loops and bulk scans.  Panels still tile
// each piece exactly, so constant-kernel exactness is unaffected; only the
// resolution of the singular grading drops.
inline PairRuleConfig fast_pair_rule() {
    PairRuleConfig c;
    c.ns = 3;
    c.nm = 3;
    c.floor_abs = 3e-4;
    c.max_side_levels = 10;
    c.diag_levels = 5;
    return c;
}

// A set of radial intervals over the nodes of one grid: the region
// { r x : x grid node direction, lo[i] <= r < hi[i] } in quadrature form.
struct ShellSet {
    const SphereGrid* grid = nullptr;
    std::vector<double> lo, hi;
};

inline ShellSet ball_set(const SphereGrid& g) {
    ShellSet s;
    s.grid = &g;
    s.lo.assign(g.n, 0.0);
    s.hi.assign(g.n, 1.0);
    return s;
}

inline ShellSet full_set(const SphereGrid& g, const std::vector<double>& u) {
    ShellSet s;
    s.grid = &g;
    s.lo.assign(g.n, 0.0);
    s.hi.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) s.hi[i] = 1.0 + u[i];
    return s;
}

inline ShellSet outer_shell(const SphereGrid& g, const std::vector<double>& uplus) {
    ShellSet s;
    s.grid = &g;
    s.lo.assign(g.n, 1.0);
    s.hi.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) s.hi[i] = 1.0 + std::max(uplus[i], 0.0);
    return s;
}

inline ShellSet inner_shell(const SphereGrid& g, const std::vector<double>& uminus) {
    ShellSet s;
    s.grid = &g;
    s.lo.resize(g.n);
    s.hi.assign(g.n, 1.0);
    for (std::size_t i = 0; i < g.n; ++i) s.lo[i] = 1.0 - std::max(uminus[i], 0.0);
    return s;
}

namespace detail {

inline double ipow_nm1(double x, int N) {
    if (N == 2) return x;
    if (N == 3) return x * x;
    return std::pow(x, N - 1);
}

} // namespace detail

// Integral of rho^{N-1} sigma^{N-1} g(dist) over [a0,a1] x [b0,b1] at angular
// separation theta, dist^2 = s^2 cos^2(theta/2) + 4 sin^2(theta/2) m^2 with
// s = rho - sigma, m = (rho + sigma)/2.  Pieces split at the kinks of the
// m-range and at s = 0, then graded dyadically toward s = 0.
inline double pair_radial_integral(const RadialKernel& k, int N,
                                   double a0, double a1, double b0, double b1,
                                   double theta, const PairRuleConfig& cfg,
                                   const GaussRule& gs, const GaussRule& gm) {
    if (a1 - a0 <= 1e-14 || b1 - b0 <= 1e-14) return 0.0;
    if (b0 < a0 || (b0 == a0 && b1 < a1)) {
        std::swap(a0, b0);
        std::swap(a1, b1);
    }
    const double sh = std::sin(0.5 * theta);
    const double beta = 4.0 * sh * sh;
    const double chat = 1.0 - 0.25 * beta;
    const double rmax = std::max(a1, b1);
    const double floor_ = std::max(cfg.floor_factor * std::sqrt(beta), cfg.floor_abs) * rmax;

    const double smin = a0 - b1, smax = a1 - b0;
    double brk[5];
    int nbrk = 0;
    brk[nbrk++] = smin;
    for (double v : {0.0, a0 - b0, a1 - b1})
        if (v > smin + 1e-15 * rmax && v < smax - 1e-15 * rmax) brk[nbrk++] = v;
    brk[nbrk++] = smax;
    std::sort(brk, brk + nbrk);

    thread_local std::vector<Panel> panels;
    panels.clear();
    for (int p = 0; p + 1 < nbrk; ++p)
        if (brk[p + 1] - brk[p] > 1e-15)
            graded_panels(brk[p], brk[p + 1], floor_, cfg.max_side_levels, panels);

    double total = 0.0;
    for (const Panel& pn : panels) {
        const double smid = 0.5 * (pn.lo + pn.hi), shalf = 0.5 * (pn.hi - pn.lo);
        for (std::size_t is = 0; is < gs.x.size(); ++is) {
            const double s = smid + shalf * gs.x[is];
            const double ws = shalf * gs.w[is];
            const double mlo = std::max({a0 - 0.5 * s, b0 + 0.5 * s, 0.5 * std::abs(s)});
            const double mhi = std::min(a1 - 0.5 * s, b1 + 0.5 * s);
            if (mhi <= mlo) continue;
            const double mmid = 0.5 * (mlo + mhi), mhalf = 0.5 * (mhi - mlo);
            double inner = 0.0;
            for (std::size_t im = 0; im < gm.x.size(); ++im) {
                const double m = mmid + mhalf * gm.x[im];
                const double t = std::sqrt(std::max(s * s * chat + beta * m * m, 1e-300));
                const double q = detail::ipow_nm1(std::max(m * m - 0.25 * s * s, 0.0), N);
                inner += gm.w[im] * q * eval_kernel(k, N, t);
            }
            total += ws * mhalf * inner;
        }
    }
    return total;
}

inline double pair_radial_integral(const RadialKernel& k, int N,
                                   double a0, double a1, double b0, double b1,
                                   double theta, const PairRuleConfig& cfg = {}) {
    const GaussRule& gs = gauss_legendre(cfg.ns);
    const GaussRule& gm = gauss_legendre(cfg.nm);
    return pair_radial_integral(k, N, a0, a1, b0, b1, theta, cfg, gs, gm);
}

// ------------------------------------------------------------ same-cell rule

// Angular-displacement quadrature for two independent points in one grid
// cell: polar rule over the difference density, graded geometrically toward
// zero separation.  Weights are normalized to unit mass so a constant kernel
// is treated exactly.
struct DiagRule {
    std::vector<double> theta, weight;
};

inline DiagRule make_diag_rule(int N, double ext_a, double ext_b, const PairRuleConfig& cfg) {
    DiagRule out;
    const GaussRule& gr = gauss_legendre(cfg.diag_n_r);
    if (N == 2) {
        const double w = ext_a;
        double hi = w;
        for (int lev = 0; lev < cfg.diag_levels; ++lev) {
            const double lo = (lev == cfg.diag_levels - 1) ? 0.0 : 0.5 * hi;
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (std::size_t q = 0; q < gr.x.size(); ++q) {
                const double r = mid + half * gr.x[q];
                out.theta.push_back(r);
                out.weight.push_back(half * gr.w[q] * 2.0 * (1.0 - r / w) / w);
            }
            hi = lo;
        }
    } else {
        const GaussRule& gc = gauss_legendre(cfg.diag_n_chi);
        const double a = ext_a, b = ext_b;
        const double chi_split = std::atan2(b, a);
        const double seg[2][2] = {{0.0, chi_split}, {chi_split, 0.5 * pi}};
        for (const auto& sg : seg) {
            if (sg[1] - sg[0] < 1e-14) continue;
            const double cmid = 0.5 * (sg[0] + sg[1]), chalf = 0.5 * (sg[1] - sg[0]);
            for (std::size_t qc = 0; qc < gc.x.size(); ++qc) {
                const double chi = cmid + chalf * gc.x[qc];
                const double wchi = chalf * gc.w[qc];
                const double cc = std::cos(chi), sc = std::sin(chi);
                const double rmax = std::min(a / std::max(cc, 1e-300), b / std::max(sc, 1e-300));
                double hi = rmax;
                for (int lev = 0; lev < cfg.diag_levels; ++lev) {
                    const double lo = (lev == cfg.diag_levels - 1) ? 0.0 : 0.5 * hi;
                    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
                    for (std::size_t qr = 0; qr < gr.x.size(); ++qr) {
                        const double r = mid + half * gr.x[qr];
                        const double dens = (1.0 - r * cc / a) * (1.0 - r * sc / b) / (a * b);
                        out.theta.push_back(r);
                        out.weight.push_back(wchi * half * gr.w[qr] * dens * r * 4.0);
                    }
                    hi = lo;
                }
            }
        }
    }
    double mass = 0.0;
    for (double w : out.weight) mass += w;
    for (double& w : out.weight) w /= mass;
    for (double& t : out.theta) t = std::max(t, 1e-12);
    return out;
}

// ------------------------------------------------------------ near-pair rule

// Displacement averaging for distinct cells closer than the near threshold:
// a symmetric 3-point rule per axis matching the second and fourth moments
// of the triangular difference density.
struct NearSamples {
    double theta[9];
    double weight[9];
    int count = 0;
};

inline NearSamples near_samples(int N, double th0, double pol_i, double az_i,
                                double pol_j, double az_j) {
    NearSamples out;
    static const double w3[3] = {5.0 / 24.0, 14.0 / 24.0, 5.0 / 24.0};
    const double wa = std::sqrt(6.0 * (pol_i * pol_i + pol_j * pol_j) / 12.0);
    const double x1 = std::sqrt(0.4) * wa;
    const double nx[3] = {-x1, 0.0, x1};
    if (N == 2) {
        for (int p = 0; p < 3; ++p) {
            out.theta[out.count] = std::max(std::abs(th0 + nx[p]), 1e-12);
            out.weight[out.count++] = w3[p];
        }
        return out;
    }
    const double wb = std::sqrt(6.0 * (az_i * az_i + az_j * az_j) / 12.0);
    const double y1 = std::sqrt(0.4) * wb;
    const double ny[3] = {-y1, 0.0, y1};
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
            const double dx = th0 + nx[p];
            out.theta[out.count] = std::max(std::sqrt(dx * dx + ny[q] * ny[q]), 1e-12);
            out.weight[out.count++] = w3[p] * w3[q];
        }
    return out;
}

// ------------------------------------------------------------ pair engine

namespace detail {

inline double pair_sum(const RadialKernel& k, const ShellSet& A, const ShellSet& B,
                       bool same_set, const PairRuleConfig& cfg) {
    const SphereGrid& g = *A.grid;
    if (B.grid != A.grid)
        throw PreconditionViolation("pair sets must share one grid");
    const int N = g.N;
    const std::size_t n = g.n;
    const double delta = cfg.delta_factor * g.mean_spacing;
    const GaussRule& gs = gauss_legendre(cfg.ns);
    const GaussRule& gm = gauss_legendre(cfg.nm);

    // one same-cell rule per grid row; rows share their cell geometry
    std::vector<DiagRule> diag(g.rows);
    for (int r = 0; r < g.rows; ++r) {
        const std::size_t i = static_cast<std::size_t>(r) * g.per_row;
        diag[r] = make_diag_rule(N, g.ext_pol[i], g.ext_az[i], cfg);
    }

    auto radial = [&](std::size_t i, std::size_t j, double th) {
        return pair_radial_integral(k, N, A.lo[i], A.hi[i], B.lo[j], B.hi[j], th, cfg, gs, gm);
    };

    auto row_fn = [&](std::size_t i) -> double {
        if (A.hi[i] - A.lo[i] <= 1e-14) return 0.0;
        double acc = 0.0;
        const std::size_t jstart = same_set ? i + 1 : 0;
        for (std::size_t j = jstart; j < n; ++j) {
            if (B.hi[j] - B.lo[j] <= 1e-14) continue;
            if (!same_set && j == i) {
                const DiagRule& d = diag[i / g.per_row];
                double s = 0.0;
                for (std::size_t q = 0; q < d.theta.size(); ++q)
                    s += d.weight[q] * radial(i, j, d.theta[q]);
                acc += g.weights[i] * g.weights[j] * s;
                continue;
            }
            const double c = std::clamp(dot(g.nodes[i], g.nodes[j]), -1.0, 1.0);
            const double th = std::acos(c);
            const double ww = g.weights[i] * g.weights[j] * (same_set ? 2.0 : 1.0);
            if (th >= delta) {
                acc += ww * radial(i, j, th);
            } else {
                const NearSamples ns =
                    near_samples(N, th, g.ext_pol[i], g.ext_az[i], g.ext_pol[j], g.ext_az[j]);
                double s = 0.0;
                for (int q = 0; q < ns.count; ++q)
                    s += ns.weight[q] * radial(i, j, ns.theta[q]);
                acc += ww * s;
            }
        }
        if (same_set) {
            const DiagRule& d = diag[i / g.per_row];
            double s = 0.0;
            for (std::size_t q = 0; q < d.theta.size(); ++q)
                s += d.weight[q] * radial(i, i, d.theta[q]);
            acc += g.weights[i] * g.weights[i] * s;
        }
        return acc;
    };
    return parallel_row_sum(n, row_fn);
}

} // namespace detail

inline double shell_self_interaction(const RadialKernel& k, const ShellSet& A,
                                     const PairRuleConfig& cfg = {}) {
    return detail::pair_sum(k, A, A, true, cfg);
}

inline double shell_cross_interaction(const RadialKernel& k, const ShellSet& A,
                                      const ShellSet& B, const PairRuleConfig& cfg = {}) {
    return detail::pair_sum(k, A, B, false, cfg);
}

} // namespace gamow
