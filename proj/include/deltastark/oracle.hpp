#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "airy.hpp"
#include "dynamics.hpp"
#include "gamma.hpp"
#include "kernels.hpp"
#include "quad.hpp"

namespace deltastark {

// I_n as the n-fold time-ordered product of on-axis kernels, straight quadrature
inline QuadResult in_bruteforce(int n, double t, double f, double tol, std::size_t budget = 50'000'000) {
    if (n < 2 || n > 5) throw numeric_error("in_bruteforce: n must be in 2..5");
    if (!(t > 0.0)) throw numeric_error("in_bruteforce: t must be positive");
    SimplexSpec s;
    s.dimension = n - 1;
    s.horizon = t;
    s.integrand = [t, f](std::span<const double> tau) {
        cplx p = kf_origin(t - tau[0], f);
        for (std::size_t k = 1; k < tau.size(); ++k) p *= kf_origin(tau[k - 1] - tau[k], f);
        return p * kf_origin(tau.back(), f);
    };
    return simplex_integrate(s, tol, budget);
}

struct VolterraSolution {
    std::vector<double> grid;
    std::vector<cplx> values;
    double order = 1.5;
    double h = 0.0;
    double f = 0.0;

    // <psi_b | psi(t_m)> = A_phi + i (phi0 * psi)(t_m), trapezoid on the solution grid
    cplx bound_amplitude(std::size_t m) const {
        double t = grid[m];
        cplx acc = 0.0;
        for (std::size_t j = 0; j <= m; ++j) {
            double w = (j == 0 || j == m) ? 0.5 : 1.0;
            acc += w * phi0(t - grid[j], f) * values[j];
        }
        return amplitude_phi(t, f) + I * h * acc;
    }
};

namespace detail {

// product-integration weights of int (t_m - tau)^{-1/2} l(tau) over [t_j, t_{j+1}],
// k = m - j - 1, for the left and right nodal values; written without cancellation
inline std::pair<double, double> sqrt_weights(std::size_t k, double h) {
    double a = std::sqrt(double(k)), b = std::sqrt(double(k + 1));
    double d = 1.0 / (a + b);
    double s = std::sqrt(h);
    return {2.0 / 3.0 * d * d * (b + 2.0 * a) * s, 2.0 / 3.0 * d * d * (2.0 * b + a) * s};
}

}  // namespace detail

// psi(0,t) = phi_f(0,t) + i int_0^t K_f(0,0;t-tau) psi(0,tau) dtau
inline VolterraSolution volterra_solve(double t_max, double h, double f) {
    if (!(h > 0.0) || !(t_max > 0.0)) throw numeric_error("volterra_solve: h and t_max must be positive");
    double steps = std::round(t_max / h);
    if (steps > 1e6) throw numeric_error("volterra_solve: more than 1e6 steps");
    if (h > 0.1) throw numeric_error("volterra_solve: step too large");
    std::size_t M = std::size_t(steps);
    VolterraSolution s;
    s.h = h;
    s.f = f;
    s.grid.resize(M + 1);
    s.values.resize(M + 1);
    for (std::size_t m = 0; m <= M; ++m) s.grid[m] = double(m) * h;
    s.values[0] = 1.0;
    // weights depend only on distance to the endpoint
    std::vector<double> wl(M + 1), wr(M + 1);
    for (std::size_t k = 0; k < M; ++k) std::tie(wl[k], wr[k]) = detail::sqrt_weights(k, h);
    std::vector<cplx> phase(M + 1);
    for (std::size_t k = 0; k <= M; ++k) {
        double dt = double(k) * h;
        phase[k] = std::polar(1.0, -f * f * dt * dt * dt / 24.0);
    }
    const cplx c = I / std::sqrt(2.0 * pi * I);
    for (std::size_t m = 1; m <= M; ++m) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            // interval [t_j, t_{j+1}], distance index m - j - 1
            std::size_t k = m - j - 1;
            acc += wl[k] * phase[m - j] * s.values[j];
            if (j + 1 < m) acc += wr[k] * phase[m - j - 1] * s.values[j + 1];
        }
        cplx self = c * wr[0];
        s.values[m] = (phi0(s.grid[m], f) + c * acc) / (1.0 - self);
    }
    return s;
}

// Green function of the field-only kernel at complex frequency (Im w >= 0 for the transform)
inline cplx green_airy_c(double x, double xp, cplx w, double f) {
    if (f == 0.0) throw numeric_error("green_airy: f must be nonzero");
    double af = std::abs(f);
    double alpha = std::cbrt(af / 4.0) * std::abs(x - xp);
    cplx beta = -std::pow(2.0 * af, -2.0 / 3.0) * (f * (x + xp) + 2.0 * w);
    auto p = airy(beta + alpha);
    auto q = airy(beta - alpha);
    cplx v = std::cbrt(4.0 / af) * (pi / I) * p.ai * (q.bi + I * q.ai);
    if (!finite(v)) throw numeric_error("green_airy: overflow");
    return v;
}

inline cplx green_airy(double x, double xp, double w, double f) { return green_airy_c(x, xp, w, f); }

// int_0^inf K_f(x,x';t) e^{(i w - eta) t} dt on the ray t = r e^{-i pi/6}, where the cubic phase decays
inline QuadResult green_transform(double x, double xp, double w, double f, double eta, double tol) {
    const cplx dir = std::polar(1.0, -pi / 6.0);
    auto g = [&](double r) -> cplx {
        if (r <= 0.0) return 0.0;
        cplx t = r * dir;
        cplx d = x - xp;
        cplx e = I * d * d / (2.0 * t) + I * f * (x + xp) * t / 2.0 - I * f * f * t * t * t / 24.0 +
                 (I * w - eta) * t;
        return dir * std::exp(e) / std::sqrt(2.0 * pi * I * t);
    };
    // r = u^2 removes the endpoint square root; the cubic decay sets the useful range
    double rmax = 2.0 * std::cbrt(24.0 * 40.0 / (f * f)) + 2.0;
    auto r = integrate_1d([&](double u) { return 2.0 * u * g(u * u); }, 0.0, std::sqrt(rmax), tol,
                          {.initial_panels = 16});
    return r;
}

struct GreenCheck {
    cplx closed, eta1, eta2, extrapolated;
    double rel_error;
    bool monotone;
};

inline constexpr double green_eta1 = 1e-3, green_eta2 = 5e-4;

inline GreenCheck green_airy_check(double x, double xp, double w, double f) {
    GreenCheck c;
    c.closed = green_airy(x, xp, w, f);
    c.eta1 = green_transform(x, xp, w, f, green_eta1, 1e-12).value;
    c.eta2 = green_transform(x, xp, w, f, green_eta2, 1e-12).value;
    // linear in eta through the two samples
    c.extrapolated = c.eta2 + (c.eta2 - c.eta1) * green_eta2 / (green_eta1 - green_eta2);
    c.rel_error = std::abs(c.extrapolated - c.closed) / std::abs(c.closed);
    double a = std::abs(c.eta1), b = std::abs(c.eta2), e = std::abs(c.extrapolated);
    c.monotone = (a <= b && b <= e) || (a >= b && b >= e);
    return c;
}

// zero of 1 - i G(0,0;w) near the bound level, secant iteration in complex w
inline cplx resolvent_pole(double f, cplx guess = -0.5, double tol = 1e-13) {
    auto d = [&](cplx w) { return 1.0 - I * green_airy_c(0.0, 0.0, w, f); };
    cplx w0 = guess, w1 = guess + cplx(1e-4, 0.0);
    cplx d0 = d(w0), d1 = d(w1);
    for (int it = 0; it < 100; ++it) {
        if (d1 == d0) break;
        cplx w2 = w1 - d1 * (w1 - w0) / (d1 - d0);
        w0 = w1;
        d0 = d1;
        w1 = w2;
        d1 = d(w1);
        if (std::abs(w1 - w0) < tol) return w1;
    }
    throw numeric_error("resolvent_pole: no convergence");
}

struct IdentityCheck {
    std::string name;
    cplx lhs, rhs;
    double residual;
    bool pass;
};

inline constexpr double identity_tol = 1e-10;

inline std::vector<IdentityCheck> identity_checks() {
    std::vector<IdentityCheck> out;
    auto add = [&](std::string name, cplx l, cplx r) {
        double res = std::abs(l - r) / std::max(1.0, std::abs(r));
        out.push_back({std::move(name), l, r, res, res <= identity_tol});
    };
    auto beta_quad = [](double a, double b) {
        // y = sin^2 theta
        return integrate_1d([&](double th) -> cplx {
            return 2.0 * std::pow(std::sin(th), 2 * a - 1) * std::pow(std::cos(th), 2 * b - 1);
        }, 0.0, pi / 2.0, 1e-14).value;
    };
    auto beta_gamma = [](double a, double b) { return gamma_c(a) * gamma_c(b) / gamma_c(a + b); };
    add("beta(0.5,0.5)", beta_quad(0.5, 0.5), pi);
    add("beta(0.5,3.5)", beta_quad(0.5, 3.5), beta_gamma(0.5, 3.5));
    {
        double a = 0.5, b = 0.5, g = 1.5;
        // u = sin^2 theta, v = (1-u) sin^2 phi
        auto q = integrate_1d([&](double th) -> cplx {
            double su = std::sin(th), cu = std::cos(th);
            double u = su * su;
            auto in = integrate_1d([&](double ph) -> cplx {
                double sp = std::sin(ph), cp = std::cos(ph);
                double v = (1.0 - u) * sp * sp;
                double jac = 2.0 * (1.0 - u) * sp * cp;
                return jac * std::pow(v, b - 1) * std::pow(1.0 - u - v, g - 1);
            }, 0.0, pi / 2.0, 1e-14);
            return 2.0 * su * cu * std::pow(u, a - 1) * in.value;
        }, 0.0, pi / 2.0, 1e-14);
        add("dirichlet(0.5,0.5,1.5)", q.value, gamma_c(a) * gamma_c(b) * gamma_c(g) / gamma_c(a + b + g));
    }
    for (auto [p, l] : {std::pair{1, 0}, std::pair{7, 1}}) {
        auto q = integrate_1d([&](double th) -> cplx { return std::pow(std::sin(th), p) * std::cos(4.0 * l * th); },
                              0.0, pi / 2.0, 1e-14);
        cplx r = pi * gamma_c(p + 1.0) * recip_gamma(1.0 + 2 * l + p / 2.0) * recip_gamma(1.0 - 2 * l + p / 2.0) /
                 std::pow(2.0, p + 1);
        add("sin^" + std::to_string(p) + " cos" + std::to_string(4 * l), q.value, r);
    }
    return out;
}

inline std::string format_check(const IdentityCheck& c) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-24s lhs=%.15g%+.15gi rhs=%.15g%+.15gi residual=%.3e %s", c.name.c_str(),
                  c.lhs.real(), c.lhs.imag(), c.rhs.real(), c.rhs.imag(), c.residual, c.pass ? "pass" : "FAIL");
    return buf;
}

}  // namespace deltastark
