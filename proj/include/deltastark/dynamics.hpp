#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "kernels.hpp"
#include "lambda.hpp"
#include "quad.hpp"

namespace deltastark {

struct DecayModel {
    double gamma = 0.0;
    double delta = 0.0;
    double e_b = bound_energy;
};

inline DecayModel wkb_model(double f) {
    if (f == 0.0) throw numeric_error("wkb_model: no decay without a field");
    return {std::exp(-2.0 / (3.0 * std::abs(f))), -5.0 * f * f / 8.0, bound_energy};
}

inline constexpr double small_ft = 1e-6;

// <psi_b | phi_f(t)>, closed form
inline cplx amplitude_phi(double t, double f) {
    if (t < 0.0) throw numeric_error("amplitude_phi: t must be >= 0");
    if (t == 0.0) return 1.0;
    double e = f * t;
    cplx phase = std::polar(1.0, -f * f * t * t * t / 6.0);
    if (std::abs(e) < small_ft) {
        // limit of the closed form, first order in ft is exact to O((ft)^2)
        cplx m0 = moshinsky(0.0, -I, t);
        cplx m1 = m0 - 1.0 / std::sqrt(2.0 * pi * I * t);
        return phase * (2.0 * m0 - 2.0 * I * t * m1);
    }
    double xc = f * t * t / 2.0;
    return 4.0 / e * phase *
           (moshinsky(xc, -I, t) / (2.0 * I + e) - moshinsky(-xc, -I, t) / (2.0 * I - e));
}

// phi_f(0, tau), the source term of the on-axis equation
inline cplx phi0(double tau, double f) { return tau <= 0.0 ? cplx(1.0) : phi_f(0.0, tau, f); }

// Everything on the time axis x = 0 that the amplitude and the norm need, tabulated
// once per (f, horizon):
//   psi0(tau) = phi0 + (phi0 * Lambda_smooth)(tau)      on-axis wavefunction
//   kpsi(tau) = (K_f * psi0)(tau)
// Convolutions use tau' = tau sin^2(theta); tables are Chebyshev in sqrt(tau).
class OnAxisSolution {
public:
    OnAxisSolution(const LambdaProfile& profile, double horizon, double tol, int nodes = 0)
        : profile_(&profile), f_(profile.f), horizon_(horizon), tol_(tol) {
        if (!(horizon > 0.0)) throw numeric_error("OnAxisSolution: horizon must be positive");
        if (profile.horizon() < horizon * (1.0 - 1e-12))
            throw numeric_error("OnAxisSolution: profile does not cover the horizon");
        if (nodes <= 0) nodes = default_profile_nodes(horizon, f_) + 24;
        double qtol = std::max(tol, 1e-13);
        psi0_ = SqrtChebyshev([&](double tau) {
            auto r = integrate_sin2([&](double tp) { return phi0(tau - tp, f_) * lambda_smooth(tp); }, tau, qtol);
            converged_ = converged_ && r.converged;
            return phi0(tau, f_) + r.value;
        }, horizon, nodes);
        kpsi_ = SqrtChebyshev([&](double tau) {
            auto r = integrate_sin2([&](double tp) { return kf_origin(tau - tp, f_) * psi0_(tp); }, tau, qtol);
            converged_ = converged_ && r.converged;
            return r.value;
        }, horizon, nodes);
    }

    cplx lambda_smooth(double tau) const { return profile_->smooth_at(tau); }
    cplx psi0(double tau) const { return tau <= 0.0 ? cplx(1.0) : psi0_(tau); }
    cplx kpsi(double tau) const { return tau <= 0.0 ? cplx(0.0) : kpsi_(tau); }
    double horizon() const { return horizon_; }
    double f() const { return f_; }
    bool converged() const { return converged_; }
    double table_tail() const { return std::max(psi0_.tail(), kpsi_.tail()); }

    // A_delta(t) = i (phi0 * psi0)(t)
    QuadResult amplitude_delta(double t) const {
        check(t);
        auto r = integrate_sin2([&](double tp) { return phi0(t - tp, f_) * psi0(tp); }, t, tol_);
        r.value *= I;
        return r;
    }

    struct Norm {
        cplx overlap;     // <phi(t), C(t)>
        double c_norm2;   // ||C(t)||^2
        double c;         // scale that restores unit norm
        bool converged;
    };

    Norm norm_terms(double t) const {
        check(t);
        if (t == 0.0) return {0.0, 0.0, 1.0, true};
        auto ov = integrate_sin2([&](double tp) { return std::conj(phi0(tp, f_)) * psi0(tp); }, t, tol_);
        auto nn = integrate_sin2([&](double tp) { return std::conj(psi0(tp)) * kpsi(tp); }, t, tol_);
        Norm n{I * ov.value, 2.0 * nn.value.real(), 1.0, ov.converged && nn.converged};
        // tiny ||C|| only at t -> 0 where no correction is needed
        if (n.c_norm2 > 1e-10) n.c = -2.0 * n.overlap.real() / n.c_norm2;
        return n;
    }

private:
    void check(double t) const {
        if (t < 0.0 || t > horizon_ * (1.0 + 1e-12)) throw numeric_error("OnAxisSolution: time outside horizon");
    }

    const LambdaProfile* profile_;
    double f_, horizon_, tol_;
    bool converged_ = true;
    SqrtChebyshev psi0_, kpsi_;
};

// A_delta by the double time integral, delta(tau') reduced analytically
inline cplx amplitude_delta(double t, double f, const LambdaProfile& profile, double tol) {
    if (t < 0.0) throw numeric_error("amplitude_delta: t must be >= 0");
    if (t == 0.0) return 0.0;
    if (profile.horizon() < t * (1.0 - 1e-12)) throw numeric_error("amplitude_delta: profile does not cover t");
    double qtol = std::max(tol, 1e-13);
    auto inner = [&](double tau) -> cplx {
        if (tau <= 0.0) return 1.0;
        // delta part gives phi0(tau) itself
        auto r = integrate_sin2([&](double tp) { return phi0(tau - tp, f) * profile.smooth_at(tp); }, tau, qtol);
        return phi0(tau, f) + r.value;
    };
    auto r = integrate_sin2([&](double tau) { return phi0(t - tau, f) * inner(tau); }, t, qtol);
    return I * r.value;
}

struct IonizationCurve {
    double f = 0.0;
    std::vector<double> grid;
    std::vector<cplx> amplitude;        // A_phi + c A_delta
    std::vector<cplx> amplitude_phi;
    std::vector<cplx> amplitude_delta;  // before scaling by c
    std::vector<double> probability;    // 1 - |A|^2, clamped to [0, 1]
    std::vector<double> raw_probability;
    std::vector<double> decay_reference;
    std::vector<double> normalization_constant;
    std::vector<bool> converged;
    bool lambda_converged = true;
};

inline constexpr double probability_slack = 1e-6;

inline IonizationCurve ionization_curve(const std::vector<double>& grid, double f, int n_max, double tol) {
    if (grid.empty() || grid.front() != 0.0) throw numeric_error("ionization_curve: grid must start at 0");
    for (std::size_t j = 1; j < grid.size(); ++j)
        if (!(grid[j] > grid[j - 1])) throw numeric_error("ionization_curve: grid must increase");
    IonizationCurve out;
    out.f = f;
    out.grid = grid;
    double T = grid.back();
    double gamma = f == 0.0 ? 0.0 : wkb_model(f).gamma;
    std::optional<LambdaProfile> prof;
    std::optional<OnAxisSolution> sol;
    if (T > 0.0) {
        prof.emplace(lambda_profile(T, f, n_max, tol));
        sol.emplace(*prof, T, tol);
        out.lambda_converged = prof->all_converged();
    }
    for (double t : grid) {
        cplx ap = amplitude_phi(t, f);
        cplx ad = 0.0;
        double c = 1.0;
        bool ok = true;
        if (t > 0.0) {
            auto r = sol->amplitude_delta(t);
            auto n = sol->norm_terms(t);
            ad = r.value;
            c = n.c;
            ok = r.converged && n.converged && out.lambda_converged && sol->converged();
        }
        cplx a = ap + c * ad;
        double p = 1.0 - std::norm(a);
        out.amplitude.push_back(a);
        out.amplitude_phi.push_back(ap);
        out.amplitude_delta.push_back(ad);
        out.raw_probability.push_back(p);
        out.probability.push_back(t == 0.0 ? 0.0 : std::clamp(p, 0.0, 1.0));
        out.decay_reference.push_back(std::exp(-gamma * t));
        out.normalization_constant.push_back(c);
        out.converged.push_back(ok && p >= -probability_slack && p <= 1.0 + probability_slack);
    }
    return out;
}

// interior local maxima of |A|^2 after a 3-point moving average, exceeding both neighbours by > 1e-6
inline std::vector<std::size_t> ripple_maxima(const std::vector<double>& y, double margin = 1e-6) {
    std::vector<double> s(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        std::size_t lo = i == 0 ? 0 : i - 1, hi = std::min(y.size() - 1, i + 1);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += y[j];
        s[i] = acc / double(hi - lo + 1);
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i)
        if (s[i] > s[i - 1] + margin && s[i] > s[i + 1] + margin) out.push_back(i);
    return out;
}

// least-squares slope of log|A|^2 over [t0, t1]
inline double decay_slope(const IonizationCurve& c, double t0, double t1) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        double t = c.grid[i];
        if (t < t0 || t > t1) continue;
        double y = std::log(std::norm(c.amplitude[i]));
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++n;
    }
    if (n < 2) throw numeric_error("decay_slope: fewer than two points in the window");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// assembled propagator from the sampled Lambda_a
inline cplx propagator_a(double x, double xp, double t, double f, const LambdaProfile& profile, double tol) {
    if (!(t > 0.0)) throw numeric_error("propagator_a: t must be positive");
    if (profile.horizon() < t * (1.0 - 1e-12)) throw numeric_error("propagator_a: profile does not cover t");
    const double itol = std::max(tol, 1e-11);
    const double h = 0.5 * t;
    auto lam = [&](double tau) { return profile.smooth_at(tau); };
    // tau in [t/2, t]: u(tau) = K_f(x';tau) + int K_f(x';tau - tau') Lambda_s(tau')
    auto u = [&](double tau) -> cplx {
        auto r = kernel_moment(xp, f, tau, [&](double s) { return lam(tau - s); }, itol);
        return kf(xp, 0.0, tau, f) + r.value;
    };
    auto upper = kernel_moment(x, f, h, [&](double s) { return u(t - s); }, itol);
    // tau in [0, t/2] with the order swapped: int Lambda(tau') v(tau')
    auto v = [&](double tp) -> cplx {
        if (tp >= h) return 0.0;
        return kernel_moment(xp, f, h - tp, [&](double s) { return kf(x, 0.0, t - tp - s, f); }, itol).value;
    };
    auto lower_smooth = integrate_1d([&](double sg) -> cplx {
        double tp = sg * sg;
        if (tp <= 0.0) return 2.0 * I * kernel_prefactor(1.0) * v(0.0);
        return 2.0 * sg * lam(tp) * v(tp);
    }, 0.0, std::sqrt(h), itol);
    cplx lower = v(0.0) + lower_smooth.value;
    return kf(x, xp, t, f) + I * (upper.value + lower);
}

enum class InitialState { bound };

struct WavefunctionSlice {
    std::vector<double> x;
    std::vector<cplx> psi;
    std::vector<cplx> correction;  // C(x,t) before scaling
    double t = 0.0, f = 0.0;
    double c = 1.0;
    double norm = 1.0;             // ||phi + c C||^2 from the time-axis identities
    bool converged = true;
};

// psi_a(x,t) = phi_f(x,t) + c(t) C(x,t),  C = i int K_f(x;t - tau) psi0(tau) d tau
inline WavefunctionSlice wavefunction_a(const std::vector<double>& xs, double t, double f, InitialState,
                                        int n_max, double tol) {
    if (!(t > 0.0)) throw numeric_error("wavefunction_a: t must be positive");
    WavefunctionSlice w;
    w.x = xs;
    w.t = t;
    w.f = f;
    auto prof = lambda_profile(t, f, n_max, tol);
    OnAxisSolution sol(prof, t, tol);
    auto n = sol.norm_terms(t);
    w.c = n.c;
    w.norm = 1.0 + 2.0 * w.c * n.overlap.real() + w.c * w.c * n.c_norm2;
    w.converged = n.converged && sol.converged() && prof.all_converged();
    for (double x : xs) {
        auto r = kernel_moment(x, f, t, [&](double s) { return sol.psi0(t - s); }, std::max(tol, 1e-12));
        cplx C = I * r.value;
        w.correction.push_back(C);
        w.psi.push_back(phi_f(x, t, f) + w.c * C);
        w.converged = w.converged && r.converged;
    }
    return w;
}

}  // namespace deltastark
