#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "gamow/common.hpp"

namespace gamow {

// ---------------------------------------------------------------- Gauss-Legendre

struct GaussRule {
    std::vector<double> x;  // nodes on [-1,1]
    std::vector<double> w;
};

// Newton iteration on P_n; nodes accurate to machine precision, cached per n.
inline const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                p0 = 1.0; p1 = x;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.x[i] = -x;
        rule.w[i] = w;
        rule.x[n - 1 - i] = x;
        rule.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.x[n / 2] = 0.0;
    return cache.emplace(n, std::move(rule)).first->second;
}

template <class F>
double integrate_gl(F&& f, double a, double b, int n) {
    const GaussRule& r = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return half * s;
}

// ---------------------------------------------------------------- tanh-sinh

// Double-exponential rule on [a,b]; handles integrable endpoint singularities.
// Levels refine deterministically until the estimate is stable to rel_tol.
template <class F>
double tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-12, int max_level = 10) {
    if (b <= a) return 0.0;
    const double len = b - a;
    const double umax = 6.5;

    auto term = [&](double u) -> double {
        double v = 0.5 * pi * std::sinh(u);
        double ch = std::cosh(v);
        double w = 0.5 * pi * std::cosh(u) / (ch * ch);  // d(tanh v)/du
        if (w < 1e-280) return 0.0;
        double sig = 1.0 / (1.0 + std::exp(2.0 * v));    // (1 - tanh v)/2, exact near 0
        double fa = f(a + len * sig);                    // node approaching b as u -> -inf? no:
        double fb = f(b - len * sig);                    // sig(u)->0 as u->+inf
        double val = 0.5 * w * (fa + fb);
        // factorized integrands can overflow at the deepest nodes, where the
        // true weighted contribution of a convergent integral is negligible
        if (!std::isfinite(val) && w < 1e-30) return 0.0;
        return val;
    };
    // u>0 contributes the pair (a+eps, b-eps); u=0 handled once
    double h = 1.0;
    double v0 = 0.0;
    {
        double ch = std::cosh(0.0);
        (void)ch;
        double sig = 0.5;
        v0 = 0.5 * pi * f(a + len * sig);
    }
    double sum = v0;
    for (double u = h; u <= umax; u += h) sum += 2.0 * term(u);
    double prev = len * 0.5 * sum * h;
    double last = prev;
    for (int lev = 1; lev <= max_level; ++lev) {
        h *= 0.5;
        double add = 0.0;
        for (double u = h; u <= umax; u += 2.0 * h) add += 2.0 * term(u);
        sum += add;
        last = len * 0.5 * sum * h;
        if (lev >= 3 && std::abs(last - prev) <= rel_tol * std::max(std::abs(last), 1e-300)) break;
        prev = last;
    }
    return last;
}

// ---------------------------------------------------------------- graded panels

struct Panel {
    double lo, hi;
};

// Dyadic subdivision of [lo,hi] by distance from 0, stopping at panel width <= floor_.
// The interval must not straddle 0.
inline void graded_panels(double lo, double hi, double floor_, int max_levels,
                          std::vector<Panel>& out) {
    if (hi - lo < 1e-300) return;
    if (hi <= 0.0) {
        std::size_t first = out.size();
        graded_panels(-hi, -lo, floor_, max_levels, out);
        for (std::size_t i = first; i < out.size(); ++i) {
            double a = out[i].lo, b = out[i].hi;
            out[i].lo = -b;
            out[i].hi = -a;
        }
        return;
    }
    double edge = hi;
    int lev = 0;
    while (0.5 * edge > std::max(lo, floor_) && lev < max_levels) {
        out.push_back({0.5 * edge, edge});
        edge *= 0.5;
        ++lev;
    }
    out.push_back({lo, edge});
}

// ---------------------------------------------------------------- admissibility

// integral of f over (0,1] by geometric refinement toward 0: panels [2^-k-1, 2^-k].
// A panel of t^{alpha-1} shrinks by exactly 2^{-alpha} per level, so once the
// panel ratio is stable the remaining tail is a geometric series and is closed
// analytically; that keeps slowly decaying convergent cases (small alpha) inside
// the level budget.  Divergence is declared when the running sum exceeds the
// threshold or no stable decay emerges over the allowed levels.
template <class F>
double geometric_integral_01(F&& f, double divergence_threshold = 1e12,
                             double cauchy_tol = 1e-10, int levels = 60) {
    double sum = 0.0;
    double prev_inc = -1.0;
    double prev_ratio = -1.0;
    for (int k = 0; k < levels; ++k) {
        double hi = std::ldexp(1.0, -k);
        double inc = integrate_gl(f, 0.5 * hi, hi, 16);
        sum += inc;
        if (!std::isfinite(sum) || std::abs(sum) > divergence_threshold)
            throw DivergentIntegral("integral exceeds divergence threshold");
        double ainc = std::abs(inc);
        if (ainc <= cauchy_tol * std::max(1.0, std::abs(sum))) return sum;
        if (prev_inc > 0.0) {
            double ratio = ainc / prev_inc;
            if (k >= 4 && ratio < 0.9999 && prev_ratio > 0.0 &&
                std::abs(ratio - prev_ratio) <= 1e-9)
                return sum + inc * ratio / (1.0 - ratio);
            prev_ratio = ratio;
        }
        prev_inc = ainc;
    }
    throw DivergentIntegral("integral fails Cauchy criterion under refinement");
}

} // namespace gamow
