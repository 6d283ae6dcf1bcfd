#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bessel.hpp"
#include "gamma.hpp"
#include "hypergeometric.hpp"
#include "interp.hpp"
#include "kernels.hpp"
#include "quad.hpp"

namespace deltastark {

// (t/2i)^p on the principal branch
inline cplx t_over_2i_pow(double t, double p) { return std::pow(t / 2.0, p) * std::polar(1.0, -pi * p / 2.0); }

inline cplx i2(double t, double f) {
    double g = f * f * t * t * t;
    return std::polar(0.5, -pi / 2.0 - 5.0 * g / 192.0) * bessel_j(0, g / 64.0);
}

// field-free I_n(t) = t^{n/2-1} / ((2i)^{n/2} Gamma(n/2))
inline cplx in_field_free(int n, double t) {
    return std::pow(t, 0.5 * n - 1.0) * std::polar(std::pow(2.0, -0.5 * n), -pi * n / 4.0) *
           recip_gamma(0.5 * n);
}

// exact I_n for n = 2..4 from the multiple hypergeometric form
inline SeriesEval in_exact(int n, double t, double f, double tol) {
    if (n < 2 || n > 4) throw numeric_error("in_exact: n must be 2..4");
    SeriesEval out;
    if (t == 0.0) {
        out.value = n == 2 ? cplx(0.0, -0.5) : cplx(0.0);
        out.converged = true;
        out.terms_used = 1;
        return out;
    }
    FieldTime ft(f, t);
    std::vector<cplx> third = {1.0 / 6.0, 0.5, 5.0 / 6.0};
    MultiFParams p({}, {n / 6.0, (n + 2) / 6.0, (n + 4) / 6.0}, std::vector<std::vector<cplx>>(n, third),
                   std::vector<std::vector<cplx>>(n), std::vector<cplx>(n, ft.a()));
    out = multi_f(p, tol);
    out.value *= in_field_free(n, t);
    out.est_error *= std::abs(in_field_free(n, t));
    return out;
}

inline SeriesEval i2_exact_series(double t, double f, double tol) { return in_exact(2, t, f, tol); }
inline SeriesEval i3_exact(double t, double f, double tol) { return in_exact(3, t, f, tol); }

// six-parameter function of the l-th partial wave
inline SeriesEval partial_wave_f6(int l, cplx z, double tol) {
    double s = 2.0 * l / 3.0;
    return pfq({1.0 / 3.0, 0.5, 0.5, 2.0 / 3.0, 5.0 / 6.0, 7.0 / 6.0},
               {0.5 - s, 5.0 / 6.0 - s, 7.0 / 6.0 - s, 0.5 + s, 5.0 / 6.0 + s, 7.0 / 6.0 + s}, z, tol);
}

inline SeriesEval i3_partial_wave(double t, double f, int l_max, double tol) {
    SeriesEval out;
    out.converged = true;
    double g = f * f * t * t * t;
    cplx z = I * g / 32.0;
    cplx sum = 0.0;
    double last_shell = 0.0;
    for (int l = -l_max; l <= l_max; ++l) {
        double jl = bessel_j(l, g / 64.0);
        if (jl == 0.0) continue;
        auto F = partial_wave_f6(std::abs(l), z, tol);
        out.terms_used += F.terms_used;
        out.converged = out.converged && F.converged;
        cplx term = std::polar(1.0, -pi * l / 2.0) / (1.0 - 16.0 * l * l) * jl * F.value;
        sum += term;
        if (std::abs(l) == l_max) last_shell += std::abs(term);
        out.est_error += F.est_error * std::abs(jl);
    }
    cplx pref = in_field_free(3, t) * std::polar(1.0, -5.0 * g / 192.0);
    out.value = pref * sum;
    out.est_error = std::abs(pref) * (out.est_error + (l_max > 0 ? last_shell : 0.0));
    return out;
}

// leading-partial-wave approximation of I_n
inline SeriesEval in_approx(int n, double t, double f, double tol) {
    if (n < 3) throw numeric_error("in_approx: n must be >= 3");
    SeriesEval out;
    if (t == 0.0) {
        out.converged = true;
        out.terms_used = 1;
        return out;
    }
    double g = f * f * t * t * t;
    auto F = pfq({0.5, (n - 1) / 6.0, (n + 1) / 6.0, (n + 3) / 6.0}, {1.0, n / 6.0, (n + 2) / 6.0, (n + 4) / 6.0},
                 I * g / 32.0, tol);
    cplx pref = i2(t, f) * t_over_2i_pow(t, 0.5 * n - 1.0) * recip_gamma(0.5 * n);
    if (f == 0.0) {
        // exact to rounding in the field-free case
        out.value = in_field_free(n, t);
        out.converged = true;
        out.terms_used = 1;
        return out;
    }
    out = F;
    out.value = pref * F.value;
    out.est_error = std::abs(pref) * F.est_error;
    return out;
}

// I_n from the one-dimensional recursions over I_{2m}(t sin^2 phi), base case i2
inline QuadResult in_recursive_oracle(int n, double t, double f, double tol) {
    if (n < 2 || n > 6) throw numeric_error("in_recursive_oracle: n must be 2..6");
    if (n == 2) return {i2(t, f), 0.0, 1, true};
    if (t == 0.0) return {0.0, 0.0, 1, true};
    const double g = f * f * t * t * t;
    QuadOptions opt;
    opt.initial_panels = std::clamp(int(g / 24.0 / (2.0 * pi)) + 1, 1, 4096);
    opt.relative = true;
    auto inner = [&](double tau) -> cplx {
        // odd n steps from I_{n-1}, even n from I_{n-2}
        int m = n % 2 ? n - 1 : n - 2;
        if (m == 2) return i2(tau, f);
        return in_recursive_oracle(m, tau, f, tol).value;
    };
    if (n % 2 == 1) {
        cplx pref = std::sqrt(2.0 * t / pi) * std::polar(1.0, -pi / 4.0);
        auto r = integrate_1d([&](double ph) -> cplx {
            double s = std::sin(ph), c = std::cos(ph), c6 = std::pow(c, 6);
            return s * std::polar(1.0, -g * c6 / 24.0) * inner(t * s * s);
        }, 0.0, pi / 2.0, tol, opt);
        r.value *= pref;
        r.est_error *= std::abs(pref);
        return r;
    }
    cplx pref = t / (2.0 * I);
    auto r = integrate_1d([&](double ph) -> cplx {
        double s = std::sin(ph), c = std::cos(ph), c6 = std::pow(c, 6);
        return std::sin(2.0 * ph) * std::polar(1.0, -5.0 * g * c6 / 192.0) * bessel_j(0, g * c6 / 64.0) *
               inner(t * s * s);
    }, 0.0, pi / 2.0, tol, opt);
    r.value *= pref;
    r.est_error *= std::abs(pref);
    return r;
}

inline constexpr double exact_series_limit = 50.0;  // f^2 t^3 / 24 bound for the exact I_2, I_3
inline constexpr int default_n_max = 24;
inline constexpr int n_max_cap = 400;

// best available I_n: exact I_2 always (closed form), exact I_3 inside the series limit
inline SeriesEval in_best(int n, double t, double f, double tol) {
    if (n == 2) return {i2(t, f), 1, 0.0, true};
    double g24 = f * f * t * t * t / 24.0;
    if (n == 3 && g24 <= exact_series_limit && f != 0.0) {
        auto e = i3_exact(t, f, tol);
        if (e.converged) return e;
    }
    return in_approx(n, t, f, tol);
}

struct NSeries {
    cplx sum{0.0};
    SeriesEval diag;
};

// sum_{n >= 2} c^n I_n(t) with automatic extension beyond n_max
inline NSeries n_series(cplx c, double t, double f, int n_max, double tol) {
    NSeries out;
    out.diag.converged = true;
    cplx cn = c * c;
    int small = 0;
    int n = 2;
    double last = 0.0;
    for (; n <= n_max_cap; ++n) {
        auto In = in_best(n, t, f, tol);
        cplx term = cn * In.value;
        out.sum += term;
        out.diag.converged = out.diag.converged && In.converged;
        out.diag.est_error += std::abs(cn) * In.est_error;
        last = std::abs(term);
        cn *= c;
        if (n >= n_max) {
            small = last < tol * std::max(1.0, std::abs(out.sum)) ? small + 1 : 0;
            if (small >= 2) break;
        }
    }
    out.diag.terms_used = std::size_t(std::min(n, n_max_cap) - 1);
    out.diag.est_error += last;
    if (n > n_max_cap) out.diag.converged = false;
    out.diag.value = out.sum;
    return out;
}

// Lambda_a sampled on a grid: smooth part iK_f + sum_{n>=2} i^n I_n; the delta(tau)
// term is kept symbolic (consumers add it analytically)
struct LambdaProfile {
    double f = 0.0;
    int n_max = default_n_max;
    double tol = 1e-12;
    std::vector<double> grid;
    std::vector<cplx> smooth_values;
    std::vector<cplx> remainder;  // smooth part minus iK_f
    std::vector<SeriesEval> diagnostics;
    SqrtChebyshev table;          // remainder in sqrt(tau), when built on Chebyshev nodes
    double span = 0.0;            // covered range, may exceed the last sample

    bool all_converged() const {
        return std::all_of(diagnostics.begin(), diagnostics.end(), [](auto& d) { return d.converged; });
    }
    double horizon() const { return std::max(span, grid.empty() ? 0.0 : grid.back()); }

    // sum_{n>=2} i^n I_n at tau, from the table or by local interpolation in sqrt(tau)
    cplx remainder_at(double tau) const {
        if (tau < 0.0 || tau > horizon() * (1.0 + 1e-12))
            throw numeric_error("LambdaProfile: time outside the sampled range");
        if (!table.empty()) return table(tau);
        // four-point Lagrange in u = sqrt(tau) with the exact value i/2 at u = 0
        std::vector<double> us(grid.size() + 1);
        std::vector<cplx> vs(grid.size() + 1);
        us[0] = 0.0;
        vs[0] = cplx(0.0, 0.5);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            us[j + 1] = std::sqrt(grid[j]);
            vs[j + 1] = remainder[j];
        }
        double u = std::sqrt(tau);
        std::size_t k = std::upper_bound(us.begin(), us.end(), u) - us.begin();
        std::size_t lo = k >= 2 ? k - 2 : 0;
        lo = std::min(lo, us.size() >= 4 ? us.size() - 4 : 0);
        std::size_t hi = std::min(us.size(), lo + 4);
        cplx s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            double w = 1.0;
            for (std::size_t j = lo; j < hi; ++j)
                if (j != i) w *= (u - us[j]) / (us[i] - us[j]);
            s += w * vs[i];
        }
        return s;
    }
    cplx smooth_at(double tau) const { return I * kf_origin(tau, f) + remainder_at(tau); }
};

inline LambdaProfile lambda_a(const std::vector<double>& grid, double f, int n_max, double tol) {
    if (n_max < 2) throw numeric_error("lambda_a: n_max must be >= 2");
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (!(grid[j] > 0.0) || (j > 0 && !(grid[j] > grid[j - 1])))
            throw numeric_error("lambda_a: grid must be positive and strictly increasing");
    LambdaProfile p;
    p.f = f;
    p.n_max = n_max;
    p.tol = tol;
    p.grid = grid;
    for (double tau : grid) {
        auto s = n_series(I, tau, f, n_max, tol);
        p.remainder.push_back(s.sum);
        p.smooth_values.push_back(I * kf_origin(tau, f) + s.sum);
        p.diagnostics.push_back(s.diag);
    }
    return p;
}

inline int default_profile_nodes(double horizon, double f) {
    // resolution in sqrt(tau): the cubic phase and the e^{i tau/2} growth both set the scale
    double phase = f * f * horizon * horizon * horizon / 24.0 + horizon;
    return std::clamp(48 + int(6.0 * std::sqrt(phase)), 48, 400);
}

// profile on Chebyshev nodes in sqrt(tau) over (0, horizon], with the interpolating table
inline LambdaProfile lambda_profile(double horizon, double f, int n_max, double tol, int nodes = 0) {
    if (!(horizon > 0.0)) throw numeric_error("lambda_profile: horizon must be positive");
    if (nodes <= 0) nodes = default_profile_nodes(horizon, f);
    auto times = SqrtChebyshev::node_times(horizon, nodes);  // decreasing
    std::vector<double> grid(times.rbegin(), times.rend());
    auto p = lambda_a(grid, f, n_max, tol);
    std::vector<cplx> vals(p.remainder.rbegin(), p.remainder.rend());
    p.table = SqrtChebyshev(horizon, vals);
    p.span = horizon;
    return p;
}

// on-axis propagator K_f(0,t|0,0) = K_f(t) + sum_{n>=2} i^{n-1} I_n(t)
inline SeriesEval k00(double t, double f, int n_max, double tol) {
    if (!(t > 0.0)) throw numeric_error("k00: t must be positive");
    auto s = n_series(I, t, f, n_max, tol);
    SeriesEval out = s.diag;
    out.value = kf_origin(t, f) + s.sum / I;
    return out;
}

}  // namespace deltastark
