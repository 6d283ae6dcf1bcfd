#pragma once

#include <cmath>

#include "erfc.hpp"
#include "quad.hpp"
#include "types.hpp"

namespace deltastark {

struct FieldTime {
    double f = 0.0;
    double t = 0.0;
    FieldTime(double f_, double t_) : f(f_), t(t_) {
        if (t_ < 0.0) throw numeric_error("FieldTime: t must be >= 0");
    }
    // a = f^2 t^3 / (24 i)
    cplx a() const { return f * f * t * t * t / (24.0 * I); }
};

inline double bound_state(double x) { return std::exp(-std::abs(x)); }
inline constexpr double bound_energy = -0.5;

// sqrt(1/(2 pi i dt)), principal branch
inline cplx kernel_prefactor(double dt) { return std::polar(1.0 / std::sqrt(2.0 * pi * dt), -pi / 4.0); }

inline cplx k0(double x, double xp, double dt) {
    if (!(dt > 0.0)) throw numeric_error("k0: dt must be positive");
    double d = x - xp;
    return kernel_prefactor(dt) * std::polar(1.0, d * d / (2.0 * dt));
}

inline cplx kf(double x, double xp, double dt, double f) {
    if (!(dt > 0.0)) throw numeric_error("kf: dt must be positive");
    double d = x - xp;
    double phase = d * d / (2.0 * dt) + f * (x + xp) * dt / 2.0 - f * f * dt * dt * dt / 24.0;
    return kernel_prefactor(dt) * std::polar(1.0, phase);
}

// K_f(t) = K_f(0,0;t)
inline cplx kf_origin(double t, double f) { return kf(0.0, 0.0, t, f); }

// M(x;k;t) = 1/2 exp(i(kx - k^2 t/2)) erfc((x - kt)/sqrt(2it)), exponents merged
// before exponentiation so large |x| neither overflows nor loses the product
inline cplx moshinsky(double x, cplx k, double t) {
    if (!(t > 0.0)) throw numeric_error("moshinsky: t must be positive");
    cplx E = I * (k * x - k * k * t / 2.0);
    cplx z = (x - k * t) / std::sqrt(2.0 * I * t);
    if (z.real() >= 0.0) return 0.5 * std::exp(E - z * z) * faddeeva_w(I * z);
    cplx tail = std::exp(E - z * z) * faddeeva_w(-I * z);
    return std::exp(E) - 0.5 * tail;
}

struct Classical {
    double p, x, S;
};
inline Classical classical(double t, double f) { return {f * t, f * t * t / 2.0, f * f * t * t * t / 6.0}; }

// homogeneous solution: the bound state evolved under the field alone
inline cplx phi_f(double x, double t, double f) {
    if (t == 0.0) return bound_state(x);
    if (!(t > 0.0)) throw numeric_error("phi_f: t must be >= 0");
    auto c = classical(t, f);
    cplx k = -I;
    return std::polar(1.0, x * c.p - c.S) * (moshinsky(x - c.x, k, t) + moshinsky(c.x - x, k, t));
}

// field-free propagator with the well, closed form
inline cplx exact_field_free_propagator(double x, double xp, double t) {
    if (!(t > 0.0)) throw numeric_error("exact_field_free_propagator: t must be positive");
    return k0(x, xp, t) + moshinsky(std::abs(x) + std::abs(xp), I, t);
}

// the same object as the multiple-scattering series, truncated after `terms`
inline cplx field_free_series(double x, double xp, double t, int terms) {
    cplx s2 = std::sqrt(2.0 * I * t);
    cplx z1 = (std::abs(x) + std::abs(xp)) / s2;
    cplx z2 = t / (I * s2);
    cplx sum = 0.0, p = 1.0;
    for (int n = 1; n <= terms; ++n) {
        sum += p * repeated_erfc(n - 1, z1);
        p *= -2.0 * z2;
    }
    return k0(x, xp, t) + 0.5 * sum;
}

enum class Gauge { to_vector, to_scalar };

// psi_F = exp(i x p_c) psi_A
inline cplx gauge_transform(cplx v, double x, double t, double f, Gauge dir) {
    double ph = x * f * t;
    return dir == Gauge::to_scalar ? v * std::polar(1.0, ph) : v * std::polar(1.0, -ph);
}

// kernels pick up the factor at both ends; the x' end sits at time 0 where p_c = 0
inline cplx gauge_transform_kernel(cplx K, double x, double xp, double t, double f, Gauge dir) {
    (void)xp;
    return gauge_transform(K, x, t, f, dir);
}

namespace detail {

// integral over s in (0, s_c) of K_f(x;s) g(s) for a phase x^2/(2 s_c) >= W, done in
// w = x^2/(2s) by repeated integration by parts at the lower end w = W
template <class G>
cplx kernel_moment_tail(double x, double f, double s_c, G& g) {
    const double a = 0.5 * x * x;
    const double W = a / s_c;
    auto q = [&](double w) -> cplx {
        double s = a / w;
        cplx H = std::polar(1.0, f * x * s / 2.0 - f * f * s * s * s / 24.0) * g(s);
        return std::pow(w, -1.5) * H;
    };
    double d = std::min(1.0, W / 100.0);
    cplx q0 = q(W), qp1 = q(W + d), qm1 = q(W - d), qp2 = q(W + 2 * d), qm2 = q(W - 2 * d);
    cplx d1 = (qp1 - qm1) / (2.0 * d);
    cplx d2 = (qp1 - 2.0 * q0 + qm1) / (d * d);
    cplx d3 = (qp2 - 2.0 * qp1 + 2.0 * qm1 - qm2) / (2.0 * d * d * d);
    cplx series = I * q0 - d1 - I * d2 + d3;
    return kernel_prefactor(1.0) * std::sqrt(a) * std::polar(1.0, W) * series;
}

}  // namespace detail

inline constexpr double kernel_moment_phase_cut = 400.0;

// integral over s in (0, T) of K_f(x,0;s) g(s); g smooth in sqrt(s) near 0 and in
// sqrt(T - s) near T. The e^{i x^2/2s} endpoint is handled asymptotically.
template <class G>
QuadResult kernel_moment(double x, double f, double T, G&& g, double tol) {
    QuadResult out;
    if (!(T > 0.0)) return out;
    const double a = 0.5 * x * x;
    double s_c = 0.0;
    if (a > 0.0) s_c = std::min(a / kernel_moment_phase_cut, 0.5 * T);
    if (s_c > 0.0) {
        out.value += detail::kernel_moment_tail(x, f, s_c, g);
        out.evaluations += 5;
    }
    auto kern = [&](double s) { return kf(x, 0.0, s, f); };
    double mid = std::max(s_c, 0.5 * T);
    auto panels = [&](double lo, double hi) {
        double ph = (lo > 0.0 ? a / lo : 0.0) - a / hi;
        ph += std::abs(f * x) * (hi - lo) / 2.0 + f * f * (hi * hi * hi - lo * lo * lo) / 24.0;
        return std::clamp(int(ph / (2.0 * pi)) + 1, 1, 20000);
    };
    QuadOptions opt;
    if (mid > s_c) {
        // sigma = sqrt(s) removes the 1/sqrt(s) of the kernel
        double lo = std::sqrt(s_c), hi = std::sqrt(mid);
        opt.initial_panels = panels(s_c, mid);
        auto r = integrate_1d([&](double sg) -> cplx {
            double s = sg * sg;
            if (s <= 0.0) return 2.0 * kernel_prefactor(1.0) * g(0.0);
            return 2.0 * sg * kern(s) * g(s);
        }, lo, hi, tol, opt);
        out.value += r.value;
        out.est_error += r.est_error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    {
        // v = sqrt(T - s) for the far end
        double hi = std::sqrt(T - mid);
        opt.initial_panels = panels(mid, T);
        auto r = integrate_1d([&](double v) -> cplx {
            double s = T - v * v;
            return 2.0 * v * kern(s) * g(s);
        }, 0.0, hi, tol, opt);
        out.value += r.value;
        out.est_error += r.est_error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    return out;
}

}  // namespace deltastark
