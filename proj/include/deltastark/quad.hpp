#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "types.hpp"

namespace deltastark {

struct QuadOptions {
    int initial_panels = 1;  // oscillation guard: callers pre-split oscillatory ranges
    int max_depth = 30;      // bisections of a single panel
    std::size_t max_evaluations = 4'000'000;
    bool relative = false;   // threshold tol*|value| instead of tol*max(1,|value|)
};

namespace detail {

// Gauss-Kronrod 10/21 (QUADPACK qk21)
inline constexpr std::array<double, 11> gk21_x = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720, 0.0};
inline constexpr std::array<double, 11> gk21_wk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208745815353, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> gk21_wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b;
    cplx value;
    double err;
    int depth;
    bool at_floor = false;
};

template <class F>
Panel gk21(F& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx k = gk21_wk[10] * fc, g = 0.0;
    for (int j = 0; j < 10; ++j) {
        double dx = h * gk21_x[j];
        cplx s = f(c - dx) + f(c + dx);
        k += gk21_wk[j] * s;
        if (j % 2 == 1) g += gk21_wg[j / 2] * s;
    }
    k *= h;
    g *= h;
    double err = std::abs(k - g);
    double floor = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(k);
    return {a, b, k, std::max(err, floor), depth, err <= floor};
}

struct PanelOrder {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.err != y.err) return x.err < y.err;
        return x.a > y.a;
    }
};

}  // namespace detail

// Adaptive Gauss-Kronrod on [a, b] for complex integrands, global bisection of
// the worst panel. Returns the best (value, error) pair seen, so a tighter tol
// can only lower the reported error.
template <class F>
QuadResult integrate_1d(F&& f, double a, double b, double tol, const QuadOptions& opt = {}) {
    if (!(a < b)) {
        if (a == b) return {0.0, 0.0, 1, true};
        throw numeric_error("integrate_1d: need a < b");
    }
    std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelOrder> heap;
    QuadResult out;
    cplx total = 0.0;
    double err = 0.0;
    const int n0 = std::max(1, opt.initial_panels);
    for (int i = 0; i < n0; ++i) {
        double lo = a + (b - a) * i / n0, hi = (i + 1 == n0) ? b : a + (b - a) * (i + 1) / n0;
        auto p = detail::gk21(f, lo, hi, 0);
        out.evaluations += 21;
        total += p.value;
        err += p.err;
        heap.push(p);
    }
    auto threshold = [&](cplx v) {
        return opt.relative ? tol * std::abs(v) : tol * std::max(1.0, std::abs(v));
    };
    cplx best_v = total;
    double best_e = err;
    bool rounding_limited = false;
    while (err > threshold(total)) {
        if (out.evaluations + 42 > opt.max_evaluations) break;
        auto p = heap.top();
        if (p.depth >= opt.max_depth) break;
        // worst panel is already at rounding level, nothing left to refine
        if (p.at_floor) {
            rounding_limited = true;
            break;
        }
        heap.pop();
        double m = 0.5 * (p.a + p.b);
        auto l = detail::gk21(f, p.a, m, p.depth + 1);
        auto r = detail::gk21(f, m, p.b, p.depth + 1);
        out.evaluations += 42;
        total += l.value + r.value - p.value;
        err += l.err + r.err - p.err;
        heap.push(l);
        heap.push(r);
        if (err < best_e) {
            best_e = err;
            best_v = total;
        }
    }
    if (err <= best_e) {
        best_e = err;
        best_v = total;
    }
    // re-sum the final panel set in position order, removes drift of the running total
    if (best_v == total) {
        std::vector<detail::Panel> all;
        all.reserve(heap.size());
        while (!heap.empty()) {
            all.push_back(heap.top());
            heap.pop();
        }
        std::sort(all.begin(), all.end(), [](auto& x, auto& y) { return x.a < y.a; });
        cplx s = 0.0;
        double e = 0.0;
        for (auto& p : all) {
            s += p.value;
            e += p.err;
        }
        best_v = s;
        best_e = std::min(best_e, e);
    }
    out.value = best_v;
    out.est_error = best_e;
    out.converged = rounding_limited || best_e <= threshold(best_v);
    return out;
}

// integral over t of g(tau)/sqrt((t - tau) tau), via tau = t sin^2(theta)
template <class G>
QuadResult integrate_singular_half(G&& g, double t, double tol, const QuadOptions& opt = {}) {
    if (!(t > 0.0)) throw numeric_error("integrate_singular_half: need t > 0");
    auto h = [&](double th) -> cplx {
        double s = std::sin(th);
        return 2.0 * g(t * s * s);
    };
    return integrate_1d(h, 0.0, pi / 2.0, tol, opt);
}

// Smooth-in-sqrt convolution helper: integral over (0, t) of F(tau) d tau where F
// may carry tau^{-1/2} and (t - tau)^{-1/2} endpoint factors; F is passed the
// jacobian-weighted form.
template <class F>
QuadResult integrate_sin2(F&& fn, double t, double tol, const QuadOptions& opt = {}) {
    if (t <= 0.0) return {0.0, 0.0, 1, true};
    auto h = [&](double th) -> cplx {
        double s = std::sin(th), c = std::cos(th);
        return 2.0 * t * s * c * fn(t * s * s);
    };
    return integrate_1d(h, 0.0, pi / 2.0, tol, opt);
}

// (-inf, inf) with x = center + scale * tan(theta)
template <class F>
QuadResult integrate_real_line(F&& fn, double center, double scale, double tol, const QuadOptions& opt = {}) {
    auto h = [&](double th) -> cplx {
        double c = std::cos(th);
        if (c <= 0.0) return 0.0;
        return fn(center + scale * std::tan(th)) * (scale / (c * c));
    };
    const double e = 1e-12;
    return integrate_1d(h, -pi / 2.0 + e, pi / 2.0 - e, tol, opt);
}

// panels needed so that a cubic phase f^2 s^3/24 advances at most 2 pi per panel over [0, span]
inline int cubic_phase_panels(double f, double span) {
    double phase = f * f * span * span * span / 24.0;
    return std::clamp(int(std::ceil(phase / (2.0 * pi))) + 1, 1, 4096);
}

struct SimplexSpec {
    int dimension = 1;
    double horizon = 1.0;
    // times ordered horizon >= tau_1 >= ... >= tau_d >= 0
    std::function<cplx(std::span<const double>)> integrand;
};

namespace detail {

inline QuadResult simplex_level(const SimplexSpec& s, std::vector<double>& taus, int level, double upper,
                                double tol, std::size_t& budget) {
    QuadOptions opt;
    opt.max_evaluations = std::max<std::size_t>(42, budget);
    bool ok = true;
    double err_in = 0.0;
    auto h = [&](double th) -> cplx {
        double sn = std::sin(th), cs = std::cos(th);
        double tau = upper * sn * sn;
        double jac = 2.0 * upper * sn * cs;
        taus[level] = tau;
        if (level + 1 == s.dimension) return jac * s.integrand(std::span<const double>(taus));
        auto r = simplex_level(s, taus, level + 1, tau, tol, budget);
        ok = ok && r.converged;
        err_in = std::max(err_in, r.est_error);
        return jac * r.value;
    };
    auto r = integrate_1d(h, 0.0, pi / 2.0, tol, opt);
    budget = budget > r.evaluations ? budget - r.evaluations : 0;
    r.converged = r.converged && ok && budget > 0;
    r.est_error += err_in * upper;
    return r;
}

}  // namespace detail

// Nested quadrature over the ordered simplex, tau_k = tau_{k-1} sin^2(theta_k) at every level
inline QuadResult simplex_integrate(const SimplexSpec& s, double tol, std::size_t budget = 50'000'000) {
    if (s.dimension < 1 || s.dimension > 4) throw numeric_error("simplex_integrate: dimension must be 1..4");
    if (!(s.horizon > 0.0)) throw numeric_error("simplex_integrate: horizon must be positive");
    std::vector<double> taus(std::size_t(s.dimension), 0.0);
    std::size_t b = budget;
    auto r = detail::simplex_level(s, taus, 0, s.horizon, tol, b);
    r.evaluations = budget - b;
    return r;
}

}  // namespace deltastark
