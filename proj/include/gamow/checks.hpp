#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gamow/common.hpp"
#include "gamow/energy.hpp"
#include "gamow/kernel.hpp"
#include "gamow/pair_rule.hpp"
#include "gamow/parallel.hpp"
#include "gamow/shape.hpp"

namespace gamow {

// One measured estimate: lhs against the quantity carrying the unknown
// constant.  "pass" compares the empirical constant to a configured ceiling;
// degenerate records (vanishing scale) pass by convention.
struct CheckReport {
    std::string check_name;
    std::string kernel_spec;
    int N = 0;
    int m = 0;
    long seed = -1;
    std::string param;
    double lhs = 0.0;
    double rhs_scale = 0.0;
    double empirical_constant = 0.0;
    double ceiling = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;
    bool degenerate = false;
    std::string error;
    std::vector<std::pair<std::string, double>> extras;
};

namespace detail {

inline void fill_meta(CheckReport& r, const RadialKernel& k, int N, int m) {
    r.kernel_spec = kernel_spec_string(k);
    r.N = N;
    r.m = m;
}

} // namespace detail

// ---------------------------------------------------------- nonlocal Dirichlet

// lhs = double integral of g(y-x) (u(y)-u(x))^2 over the sphere squared.
// Far pairs are evaluated pointwise; pairs closer than the near threshold use
// the density g(max(d, d_floor)) d^2 Lbar^2, whose quadratic factor cancels
// the kernel singularity.  rhs is the tangential Dirichlet energy.
inline CheckReport check_genest(const RadialKernel& k, const RadialGraph& u,
                                double ceiling = 100.0) {
    const SphereGrid& g = u.grid();
    CheckReport r;
    r.check_name = "nonlocal_dirichlet";
    detail::fill_meta(r, k, g.N, g.m);
    r.ceiling = ceiling;
    std::vector<double> gn = grad_norm_sq(u.basis(), u.coeffs);
    double rhs = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) rhs += g.weights[i] * gn[i];
    const double dnear = 2.0 * std::sin(0.5 * default_delta(g));
    const double dfloor = 0.5 * g.mean_spacing;
    auto row_fn = [&](std::size_t i) -> double {
        double acc = 0.0;
        for (std::size_t j = i + 1; j < g.n; ++j) {
            double dx = g.nodes[i][0] - g.nodes[j][0];
            double dy = g.nodes[i][1] - g.nodes[j][1];
            double dz = g.nodes[i][2] - g.nodes[j][2];
            double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            double ww = 2.0 * g.weights[i] * g.weights[j];
            if (d >= dnear) {
                double du = u.values[i] - u.values[j];
                acc += ww * eval_kernel(k, g.N, d) * du * du;
            } else {
                double lbar = 0.5 * (gn[i] + gn[j]);
                acc += ww * eval_kernel(k, g.N, std::max(d, dfloor)) * d * d * lbar;
            }
        }
        return acc;
    };
    r.lhs = parallel_row_sum(g.n, row_fn);
    r.rhs_scale = rhs;
    if (rhs < 1e-14) {
        r.degenerate = true;
        r.pass = true;
    } else {
        r.empirical_constant = r.lhs / rhs;
        r.pass = r.empirical_constant <= ceiling;
    }
    return r;
}

// ---------------------------------------------------------- cross term

// lhs = interaction of the outer layer with the inner layer; the proof needs
// it negligible against the W^{1,2} norm squared.
inline CheckReport check_cross_term(const RadialKernel& k, const RadialGraph& u,
                                    double ceiling = 100.0, const PairRuleConfig& cfg = {}) {
    const SphereGrid& g = u.grid();
    CheckReport r;
    r.check_name = "cross_term";
    detail::fill_meta(r, k, g.N, g.m);
    r.ceiling = ceiling;
    if (sup_norm(u.values) < 1e-14) {
        r.degenerate = true;
        r.pass = true;
        return r;
    }
    SignedLayers lay = split_layers(u);
    r.lhs = shell_cross_interaction(k, outer_shell(g, lay.plus), inner_shell(g, lay.minus), cfg);
    r.rhs_scale = w12_norm_sq(u);
    if (r.rhs_scale < 1e-14) {
        r.degenerate = true;
        r.pass = true;
    } else {
        r.empirical_constant = r.lhs / r.rhs_scale;
        r.pass = r.empirical_constant <= ceiling;
    }
    return r;
}

// ---------------------------------------------------------- layer potentials

// Three difference estimates around the sphere potential psi and the layer
// function J; each is expected linear in its own small parameter.
inline std::array<CheckReport, 3> check_layer_potentials(const RadialKernel& k, int N,
                                                         double rho, double tau,
                                                         double ceiling = 100.0) {
    if (rho < 0.75 || rho > 1.25 || tau < -0.25 || tau > 0.25)
        throw PreconditionViolation("layer potential sample outside stated ranges");
    std::array<CheckReport, 3> out;
    const char* names[3] = {"layer_potential_rho", "layer_potential_tau",
                            "layer_potential_symm"};
    const double jt = jfun(k, N, tau);
    const double lhs1 = std::abs(psi(k, N, rho + tau, rho) - psi(k, N, rho, rho) - jt);
    const double lhs2 = std::abs(psi(k, N, 1.0, 1.0 + tau) - psi(k, N, 1.0, 1.0) + jt);
    const double lhs3 = std::abs(jt + jfun(k, N, -tau));
    const double lhs[3] = {lhs1, lhs2, lhs3};
    const double scale[3] = {std::abs(rho - 1.0), std::abs(tau), std::abs(tau)};
    for (int i = 0; i < 3; ++i) {
        CheckReport& r = out[i];
        r.check_name = names[i];
        detail::fill_meta(r, k, N, 0);
        r.param = "rho=" + format_short(rho) + ";tau=" + format_short(tau);
        r.ceiling = ceiling;
        r.lhs = lhs[i];
        r.rhs_scale = scale[i];
        if (r.rhs_scale < 1e-14) {
            r.degenerate = true;
            r.pass = r.lhs <= 1e-6;
        } else {
            r.empirical_constant = r.lhs / r.rhs_scale;
            r.pass = r.empirical_constant <= ceiling;
        }
    }
    return out;
}

// ---------------------------------------------------------- ball minimality

// lhs = F_eps(E(u)) - F_eps(B) for a volume-normalized, barycentered, small
// u; positivity is the pointwise shadow of ball minimality.  The ball's
// nonlocal term is taken from the same pairwise rule so the quadrature bias
// cancels.
inline CheckReport check_final_inequality(const RadialKernel& k, double eps,
                                          const RadialGraph& u, double ball_pair_riesz,
                                          const PairRuleConfig& cfg = {}) {
    const SphereGrid& g = u.grid();
    const int N = g.N;
    if (std::abs(volume(u) - ball_volume(N)) > 1e-8 * ball_volume(N))
        throw PreconditionViolation("final inequality: volume not normalized");
    Vec3 b = barycenter(u);
    if (std::sqrt(dot(b, b)) > 1e-3)
        throw PreconditionViolation("final inequality: barycenter not centered");
    if (sup_norm(u.values) > 0.1 + 1e-12)
        throw PreconditionViolation("final inequality: amplitude above 0.1");
    CheckReport r;
    r.check_name = "ball_minimality";
    detail::fill_meta(r, k, N, g.m);
    r.param = "eps=" + format_short(eps);
    const double dperim = perimeter(u) - sphere_area(N);
    const double driesz = eps * (riesz_energy(k, u, cfg) - ball_pair_riesz);
    r.lhs = dperim + driesz;
    r.rhs_scale = w12_norm_sq(u);
    r.extras.emplace_back("perimeter_part", dperim);
    r.extras.emplace_back("riesz_part", driesz);
    if (r.rhs_scale >= 1e-14) r.empirical_constant = r.lhs / r.rhs_scale;
    else r.degenerate = true;
    r.pass = r.degenerate ? std::abs(r.lhs) <= 1e-8 : r.lhs > 0.0;
    return r;
}

inline CheckReport check_final_inequality(const RadialKernel& k, double eps,
                                          const RadialGraph& u, const PairRuleConfig& cfg = {}) {
    double rb = shell_self_interaction(k, ball_set(u.grid()), cfg);
    return check_final_inequality(k, eps, u, rb, cfg);
}

// ---------------------------------------------------------- Riesz maximality

// Among sets of ball volume the ball maximizes the interaction; measured with
// one pairwise rule on both sides.
inline CheckReport check_riesz_maximality(const RadialKernel& k, const RadialGraph& u,
                                          double ball_pair_riesz, double slack = 1e-3,
                                          const PairRuleConfig& cfg = {}) {
    const SphereGrid& g = u.grid();
    if (std::abs(volume(u) - ball_volume(g.N)) > 1e-8 * ball_volume(g.N))
        throw PreconditionViolation("riesz maximality: volume not normalized");
    CheckReport r;
    r.check_name = "riesz_maximality";
    detail::fill_meta(r, k, g.N, g.m);
    r.ceiling = 1.0 + slack;
    r.lhs = riesz_energy(k, u, cfg);
    r.rhs_scale = ball_pair_riesz;
    r.empirical_constant = r.lhs / r.rhs_scale;
    r.pass = r.lhs <= ball_pair_riesz * (1.0 + slack);
    return r;
}

// ---------------------------------------------------------- isoperimetric deficit

inline CheckReport check_isoperimetric_deficit(const RadialGraph& u) {
    const SphereGrid& g = u.grid();
    CheckReport r;
    r.check_name = "isoperimetric_deficit";
    r.kernel_spec = "none";
    r.N = g.N;
    r.m = g.m;
    FugledeResult f = fuglede_deficit(u);
    r.lhs = f.deficit;
    r.rhs_scale = f.norm_sq;
    if (!f.defined) {
        r.degenerate = true;
        r.pass = true;
    } else {
        r.empirical_constant = f.ratio;
        r.pass = f.deficit > 0.0;
    }
    return r;
}

// ---------------------------------------------------------- batch runner

struct VerifyConfig {
    std::vector<RadialKernel> kernels;
    std::vector<int> dims = {2, 3};
    int grid_n2 = 64;
    int grid_n3 = 16;
    int degree = 6;
    int shapes = 5;
    double amplitude = 0.1;
    long seed = 1234;
    double eps_final = 1e-3;
    double genest_ceiling = 100.0;
    double cross_ceiling = 100.0;
    double layer_ceiling = 100.0;
    double maximality_slack = 1e-3;
    PairRuleConfig rule;
};

inline VerifyConfig default_verify_config() {
    VerifyConfig c;
    c.kernels = {make_constant(1.0), make_riesz(2.0), make_exponential(1.0)};
    return c;
}

struct CheckSummary {
    int total = 0, failed = 0, errors = 0, degenerate = 0;
};

inline CheckSummary summarize_checks(const std::vector<CheckReport>& reports) {
    CheckSummary s;
    s.total = static_cast<int>(reports.size());
    for (const CheckReport& r : reports) {
        if (!r.error.empty()) ++s.errors;
        else if (!r.pass) ++s.failed;
        if (r.degenerate) ++s.degenerate;
    }
    return s;
}

inline int check_exit_code(const CheckSummary& s) {
    if (s.errors > 0) return 4;
    if (s.failed > 0) return 3;
    return 0;
}

// Deterministic batch: fixed loop order, per-record error capture, stable
// final ordering.
inline std::vector<CheckReport> run_all_checks(const VerifyConfig& cfg) {
    std::vector<CheckReport> out;
    auto capture = [&](const char* name, const RadialKernel& k, int N, int m, long seed,
                       const std::string& param, auto&& fn) {
        try {
            CheckReport r = fn();
            r.seed = seed;
            if (r.param.empty()) r.param = param;
            out.push_back(std::move(r));
        } catch (const Error& e) {
            CheckReport r;
            r.check_name = name;
            detail::fill_meta(r, k, N, m);
            r.seed = seed;
            r.param = param;
            r.error = e.what();
            out.push_back(std::move(r));
        }
    };

    static const double rho_grid[5] = {0.75, 0.875, 1.0, 1.125, 1.25};
    static const double tau_grid[9] = {-0.2, -0.1, -0.05, -0.025, 0.0, 0.025, 0.05, 0.1, 0.2};

    for (std::size_t ik = 0; ik < cfg.kernels.size(); ++ik) {
        const RadialKernel& k = cfg.kernels[ik];
        for (int N : cfg.dims) {
            const int m = (N == 2) ? cfg.grid_n2 : cfg.grid_n3;
            ShapeSpace space;
            double rb = 0.0;
            bool space_ok = true;
            std::string space_err;
            try {
                space = make_space(N, m, cfg.degree);
                rb = shell_self_interaction(k, ball_set(*space.grid), cfg.rule);
            } catch (const Error& e) {
                space_ok = false;
                space_err = e.what();
            }
            const long base = cfg.seed + 10007 * static_cast<long>(ik) + 211 * N;
            for (int s = 0; s < cfg.shapes; ++s) {
                const long sd = base + s;
                if (!space_ok) {
                    for (const char* nm :
                         {"nonlocal_dirichlet", "cross_term", "riesz_maximality",
                          "ball_minimality", "isoperimetric_deficit"}) {
                        CheckReport r;
                        r.check_name = nm;
                        detail::fill_meta(r, k, N, m);
                        r.seed = sd;
                        r.error = space_err;
                        out.push_back(std::move(r));
                    }
                    continue;
                }
                RadialGraph u = random_shape(sd, cfg.amplitude, cfg.degree, space);
                capture("nonlocal_dirichlet", k, N, m, sd, "", [&] {
                    return check_genest(k, u, cfg.genest_ceiling);
                });
                capture("cross_term", k, N, m, sd, "", [&] {
                    return check_cross_term(k, u, cfg.cross_ceiling, cfg.rule);
                });
                capture("riesz_maximality", k, N, m, sd, "", [&] {
                    return check_riesz_maximality(k, normalize_volume(u), rb,
                                                  cfg.maximality_slack, cfg.rule);
                });
                RadialGraph us = normalize_volume(
                    recenter(random_shape(sd, std::min(cfg.amplitude, 0.08), cfg.degree, space)));
                capture("ball_minimality", k, N, m, sd, "", [&] {
                    return check_final_inequality(k, cfg.eps_final, us, rb, cfg.rule);
                });
                capture("isoperimetric_deficit", k, N, m, sd, "", [&] {
                    return check_isoperimetric_deficit(us);
                });
            }
            for (double rho : rho_grid)
                for (double tau : tau_grid) {
                    std::string param = "rho=" + format_short(rho) + ";tau=" + format_short(tau);
                    try {
                        auto trio = check_layer_potentials(k, N, rho, tau, cfg.layer_ceiling);
                        for (CheckReport& r : trio) {
                            r.seed = -1;
                            out.push_back(std::move(r));
                        }
                    } catch (const Error& e) {
                        for (const char* nm : {"layer_potential_rho", "layer_potential_tau",
                                               "layer_potential_symm"}) {
                            CheckReport r;
                            r.check_name = nm;
                            detail::fill_meta(r, k, N, 0);
                            r.param = param;
                            r.error = e.what();
                            out.push_back(std::move(r));
                        }
                    }
                }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const CheckReport& a, const CheckReport& b) {
        return std::tie(a.check_name, a.kernel_spec, a.N, a.m, a.seed, a.param) <
               std::tie(b.check_name, b.kernel_spec, b.N, b.m, b.seed, b.param);
    });
    return out;
}

} // namespace gamow
