#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "gamow/common.hpp"
#include "gamow/energy.hpp"
#include "gamow/kernel.hpp"
#include "gamow/pair_rule.hpp"
#include "gamow/shape.hpp"

namespace gamow {

struct OptimizerConfig {
    int L = 5;
    double step0 = 0.5;
    double shrink = 0.5;
    int max_iters = 200;
    double grad_tol = 3e-5;
    double deviation_tol = 1e-2;   // sup-norm threshold for "is the ball"
    int restarts = 2;
    double fd_step = 1e-4;
    long seed = 7;

    void validate() const {
        if (L < 1 || step0 <= 0.0 || shrink <= 0.0 || shrink >= 1.0 || max_iters < 1 ||
            grad_tol <= 0.0 || deviation_tol <= 0.0 || restarts < 0 || fd_step <= 0.0)
            throw ConfigError("optimizer config out of range");
    }
};

struct TraceRow {
    int iter = 0;
    double energy = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
};

struct MinimizeResult {
    RadialGraph shape;                  // volume-normalized best shape
    EnergyReport report;
    std::vector<TraceRow> trace;        // winning start only
    bool converged = false;
    double deviation = 0.0;             // sup norm of the normalized u
    double ball_objective = 0.0;        // objective at the zero start
    std::vector<double> start_energies; // final objective per start
    int best_start = 0;
};

// Objective with the volume constraint folded in: normalization happens on
// every evaluation, so each probed shape is feasible.  Overflowing the
// amplitude bound reads as +inf.
inline double constrained_objective(const RadialKernel& k, double eps, const ShapeSpace& space,
                                    const std::vector<double>& coeffs,
                                    const PairRuleConfig& rule = {}) {
    try {
        RadialGraph g = normalize_volume(make_graph(space, coeffs));
        double f = perimeter(g);
        if (eps != 0.0) f += eps * riesz_energy(k, g, rule);
        return f;
    } catch (const AmplitudeOverflow&) {
        return std::numeric_limits<double>::infinity();
    }
}

inline std::vector<double> energy_gradient(const RadialKernel& k, double eps,
                                           const ShapeSpace& space,
                                           const std::vector<double>& coeffs, double fd_step,
                                           const PairRuleConfig& rule = {}) {
    std::vector<double> grad(coeffs.size(), 0.0);
    std::vector<double> probe = coeffs;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        probe[i] = coeffs[i] + fd_step;
        double fp = constrained_objective(k, eps, space, probe, rule);
        probe[i] = coeffs[i] - fd_step;
        double fm = constrained_objective(k, eps, space, probe, rule);
        probe[i] = coeffs[i];
        grad[i] = (fp - fm) / (2.0 * fd_step);
    }
    return grad;
}

namespace detail {

struct StartOutcome {
    std::vector<double> coeffs;
    double energy = 0.0;
    bool converged = false;
    std::vector<TraceRow> trace;
};

inline StartOutcome descend(const RadialKernel& k, double eps, const OptimizerConfig& cfg,
                            const ShapeSpace& space, std::vector<double> c,
                            const std::vector<int>& active, const PairRuleConfig& rule) {
    StartOutcome out;
    double energy = constrained_objective(k, eps, space, c, rule);
    double last_step = 0.0;
    if (!std::isfinite(energy)) {
        out.coeffs = std::move(c);
        out.energy = energy;
        return out;
    }
    std::vector<double> probe = c;
    std::vector<double> trial = c;
    for (int it = 0; it < cfg.max_iters; ++it) {
        // projected gradient: only degrees 2..L move
        double gnorm_sq = 0.0;
        std::vector<double> grad(c.size(), 0.0);
        for (int idx : active) {
            probe[idx] = c[idx] + cfg.fd_step;
            double fp = constrained_objective(k, eps, space, probe, rule);
            probe[idx] = c[idx] - cfg.fd_step;
            double fm = constrained_objective(k, eps, space, probe, rule);
            probe[idx] = c[idx];
            grad[idx] = (fp - fm) / (2.0 * cfg.fd_step);
            gnorm_sq += grad[idx] * grad[idx];
        }
        double gnorm = std::sqrt(gnorm_sq);
        out.trace.push_back({it, energy, gnorm, last_step});
        if (gnorm < cfg.grad_tol) {
            out.converged = true;
            break;
        }
        double step = cfg.step0;
        bool accepted = false;
        while (step >= 1e-14) {
            for (int idx : active) trial[idx] = c[idx] - step * grad[idx];
            double etrial = constrained_objective(k, eps, space, trial, rule);
            if (etrial < energy) {
                c = trial;
                probe = trial;
                energy = etrial;
                last_step = step;
                accepted = true;
                break;
            }
            step *= cfg.shrink;
        }
        if (!accepted) {
            // line search exhausted: converged only if the gradient is already
            // near tolerance, otherwise report a genuine stall
            out.converged = gnorm < 10.0 * cfg.grad_tol;
            break;
        }
    }
    out.coeffs = std::move(c);
    out.energy = energy;
    return out;
}

} // namespace detail

inline MinimizeResult minimize(const RadialKernel& k, double eps, const OptimizerConfig& cfg,
                               const ShapeSpace& space,
                               const PairRuleConfig& rule = fast_pair_rule(),
                               const std::vector<std::vector<double>>& extra_starts = {}) {
    cfg.validate();
    if (eps < 0.0) throw DomainError("minimize needs eps >= 0");
    if (cfg.L > space.L()) throw ConfigError("optimizer degree exceeds basis degree");
    const HarmonicBasis& b = *space.basis;
    std::vector<int> active;
    for (int i = 0; i < b.count; ++i)
        if (b.degree[i] >= 2 && b.degree[i] <= cfg.L) active.push_back(i);

    std::vector<std::vector<double>> starts;
    starts.emplace_back(b.count, 0.0);
    for (int s = 0; s < cfg.restarts; ++s) {
        RadialGraph r = random_shape(cfg.seed + 7919 * (s + 1), 0.1, cfg.L, space);
        starts.push_back(r.coeffs);
    }
    for (const auto& e : extra_starts) starts.push_back(e);

    MinimizeResult res;
    res.start_energies.reserve(starts.size());
    detail::StartOutcome best;
    bool have_best = false;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        std::vector<double> c(b.count, 0.0);
        for (std::size_t i = 0; i < starts[s].size() && i < c.size(); ++i) c[i] = starts[s][i];
        for (int i = 0; i < b.count; ++i)
            if (b.degree[i] < 2 || b.degree[i] > cfg.L) c[i] = 0.0;
        detail::StartOutcome o = detail::descend(k, eps, cfg, space, std::move(c), active, rule);
        if (s == 0) res.ball_objective = o.trace.empty() ? o.energy : o.trace.front().energy;
        res.start_energies.push_back(o.energy);
        if (!have_best || o.energy < best.energy) {
            best = std::move(o);
            res.best_start = static_cast<int>(s);
            have_best = true;
        }
    }
    res.shape = normalize_volume(make_graph(space, best.coeffs));
    res.deviation = sup_norm(res.shape.values);
    res.trace = std::move(best.trace);
    res.converged = best.converged;
    // the reported energy always uses the full-accuracy rule
    res.report = gamow_energy(k, eps, res.shape, PairRuleConfig{}, true);
    return res;
}

struct SweepRow {
    double eps = 0.0;
    double deviation = 0.0;
    double energy_gap = 0.0;   // objective minus ball objective, same rule
    int iters = 0;
    bool converged = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double eps_hat = std::numeric_limits<double>::quiet_NaN();
    bool has_eps_hat = false;
    bool any_nonconverged = false;
    std::vector<double> final_coeffs;
};

// Descending epsilons with warm starts; eps_hat marks the empirical onset of
// the ball regime (largest listed eps already indistinguishable from the
// ball).  Heuristic observable only.
inline SweepResult sweep_epsilon(const RadialKernel& k, const OptimizerConfig& cfg,
                                 const std::vector<double>& eps_list, const ShapeSpace& space,
                                 const PairRuleConfig& rule = fast_pair_rule()) {
    if (eps_list.empty()) throw ConfigError("sweep needs a non-empty eps list");
    for (double e : eps_list)
        if (e <= 0.0) throw ConfigError("sweep eps values must be positive");
    SweepResult out;
    std::vector<std::vector<double>> warm;
    OptimizerConfig local = cfg;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        local.seed = cfg.seed + 1000 * static_cast<long>(i);
        MinimizeResult r = minimize(k, eps_list[i], local, space, rule, warm);
        SweepRow row;
        row.eps = eps_list[i];
        row.deviation = r.deviation;
        row.energy_gap = r.start_energies[r.best_start] - r.ball_objective;
        row.iters = static_cast<int>(r.trace.size());
        row.converged = r.converged;
        out.rows.push_back(row);
        if (!r.converged) out.any_nonconverged = true;
        warm.assign(1, r.shape.coeffs);
        out.final_coeffs = r.shape.coeffs;
    }
    for (const SweepRow& row : out.rows)
        if (row.deviation < cfg.deviation_tol &&
            (!out.has_eps_hat || row.eps > out.eps_hat)) {
            out.eps_hat = row.eps;
            out.has_eps_hat = true;
        }
    return out;
}

} // namespace gamow
