#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "gamow/common.hpp"
#include "gamow/quadrature.hpp"

namespace gamow {

enum class KernelFamily { riesz, exponential, constant, truncated };

// Radial non-increasing kernel g(t), dimension-agnostic: the Riesz and
// truncated families read the exponent as alpha - N at evaluation time.
// `scale` is an internal prefactor so scaled_kernel stays inside the family.
struct RadialKernel {
    KernelFamily family = KernelFamily::constant;
    double alpha = 0.0;   // riesz / truncated
    double mu = 0.0;      // exponential
    double c = 1.0;       // constant
    double cutoff = 0.0;  // truncated
    double scale = 1.0;
};

inline RadialKernel make_riesz(double alpha) {
    RadialKernel k;
    k.family = KernelFamily::riesz;
    k.alpha = alpha;
    return k;
}

inline RadialKernel make_exponential(double mu) {
    if (mu <= 0) throw DomainError("exponential kernel needs mu > 0");
    RadialKernel k;
    k.family = KernelFamily::exponential;
    k.mu = mu;
    return k;
}

inline RadialKernel make_constant(double c) {
    if (c <= 0) throw DomainError("constant kernel needs c > 0");
    RadialKernel k;
    k.family = KernelFamily::constant;
    k.c = c;
    return k;
}

// Power kernel with the singularity truncated at height g(cutoff):
// g(t) = max(t, cutoff)^(alpha-N).
inline RadialKernel make_truncated(double alpha, double cutoff) {
    if (cutoff <= 0) throw DomainError("truncated kernel needs cutoff > 0");
    RadialKernel k;
    k.family = KernelFamily::truncated;
    k.alpha = alpha;
    k.cutoff = cutoff;
    return k;
}

inline double eval_kernel(const RadialKernel& k, int N, double t) {
    if (t <= 0) throw DomainError("kernel evaluated at t <= 0");
    switch (k.family) {
        case KernelFamily::riesz:       return k.scale * std::pow(t, k.alpha - N);
        case KernelFamily::exponential: return k.scale * std::exp(-k.mu * t);
        case KernelFamily::constant:    return k.scale * k.c;
        case KernelFamily::truncated:
            return k.scale * std::pow(std::max(t, k.cutoff), k.alpha - N);
    }
    return 0.0;
}

// int_0^1 g(t) t^{N-1} dt; finite iff the kernel is admissible in dimension N.
inline double admissibility_integral(const RadialKernel& k, int N,
                                     double divergence_threshold = 1e12,
                                     double cauchy_tol = 1e-10, int levels = 60) {
    if (N < 2) throw UnsupportedDimension("admissibility needs N >= 2");
    if ((k.family == KernelFamily::riesz || k.family == KernelFamily::truncated) &&
        k.alpha > N)
        throw PreconditionViolation("power kernel with alpha > N is increasing");
    auto f = [&](double t) { return eval_kernel(k, N, t) * std::pow(t, N - 1); };
    return geometric_integral_01(f, divergence_threshold, cauchy_tol, levels);
}

// g~(t) = g(t/2), expressed inside the same family.
inline RadialKernel scaled_kernel(const RadialKernel& k, int N) {
    RadialKernel s = k;
    switch (k.family) {
        case KernelFamily::riesz:
            s.scale = k.scale * std::pow(2.0, N - k.alpha);
            break;
        case KernelFamily::exponential:
            s.mu = 0.5 * k.mu;
            break;
        case KernelFamily::constant:
            break;
        case KernelFamily::truncated:
            s.scale = k.scale * std::pow(2.0, N - k.alpha);
            s.cutoff = 2.0 * k.cutoff;
            break;
    }
    return s;
}

// ---------------------------------------------------------------- spec strings

// Grammar: riesz:alpha=A | exp:mu=M | const:c=C | truncpow:alpha=A,cutoff=B
inline RadialKernel parse_kernel(const std::string& spec) {
    auto colon = spec.find(':');
    std::string family = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    double alpha = 0, mu = 0, c = 0, cutoff = 0;
    bool has_alpha = false, has_mu = false, has_c = false, has_cutoff = false;
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto comma = rest.find(',', pos);
        std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        pos = comma == std::string::npos ? rest.size() : comma + 1;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("kernel spec item without '=': " + item);
        std::string key = item.substr(0, eq);
        double val;
        try {
            std::size_t used = 0;
            val = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError("bad numeric value in kernel spec: " + item);
        }
        if (key == "alpha") { alpha = val; has_alpha = true; }
        else if (key == "mu") { mu = val; has_mu = true; }
        else if (key == "c") { c = val; has_c = true; }
        else if (key == "cutoff") { cutoff = val; has_cutoff = true; }
        else throw ConfigError("unknown kernel parameter: " + key);
    }

    if (family == "riesz") {
        if (!has_alpha || has_mu || has_c || has_cutoff)
            throw ConfigError("riesz kernel needs exactly alpha=");
        return make_riesz(alpha);
    }
    if (family == "exp") {
        if (!has_mu || has_alpha || has_c || has_cutoff)
            throw ConfigError("exp kernel needs exactly mu=");
        return make_exponential(mu);
    }
    if (family == "const") {
        if (!has_c || has_alpha || has_mu || has_cutoff)
            throw ConfigError("const kernel needs exactly c=");
        return make_constant(c);
    }
    if (family == "truncpow") {
        if (!has_alpha || !has_cutoff || has_mu || has_c)
            throw ConfigError("truncpow kernel needs alpha= and cutoff=");
        return make_truncated(alpha, cutoff);
    }
    throw ConfigError("unknown kernel family: " + family);
}

inline std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_short(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

inline std::string kernel_spec_string(const RadialKernel& k) {
    switch (k.family) {
        case KernelFamily::riesz:       return "riesz:alpha=" + format_short(k.alpha);
        case KernelFamily::exponential: return "exp:mu=" + format_short(k.mu);
        case KernelFamily::constant:    return "const:c=" + format_short(k.c);
        case KernelFamily::truncated:
            return "truncpow:alpha=" + format_short(k.alpha) +
                   ",cutoff=" + format_short(k.cutoff);
    }
    return "";
}

} // namespace gamow
