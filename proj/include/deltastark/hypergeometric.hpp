#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gamma.hpp"
#include "types.hpp"

namespace deltastark {

struct PfqParams {
    std::vector<cplx> upper, lower;
    cplx argument{0.0};
};

namespace detail {

inline std::optional<long> nonpositive_int(cplx a) {
    if (is_nonpositive_integer(a)) return long(-a.real());
    return std::nullopt;
}

}  // namespace detail

inline constexpr std::size_t pfq_term_cap = 10000;

// Number of terms after which the series is a polynomial, if any
inline std::optional<long> pfq_terminates_after(const PfqParams& p) {
    std::optional<long> m;
    for (auto a : p.upper)
        if (auto k = detail::nonpositive_int(a)) m = m ? std::min(*m, *k) : *k;
    return m;
}

inline void validate(const PfqParams& p) {
    auto m = pfq_terminates_after(p);
    for (auto b : p.lower)
        if (auto k = detail::nonpositive_int(b))
            if (!m || *m > *k) throw numeric_error("pfq: lower parameter is a pole of the series");
}

namespace detail {

// plain power series in working type R (double or a multiprecision float)
template <class R>
struct PfqSum {
    cplx value;
    double est_error;
    std::size_t terms;
    bool converged;
};

template <class R>
PfqSum<R> pfq_sum(const PfqParams& p, double tol, std::optional<long> m) {
    using std::sqrt;
    struct C {
        R re, im;
    };
    auto mul = [](const C& a, const C& b) { return C{a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; };
    auto div = [](const C& a, const C& b) {
        R d = b.re * b.re + b.im * b.im;
        return C{(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    };
    auto mag = [](const C& a) -> R { return sqrt(a.re * a.re + a.im * a.im); };
    const C z{R(p.argument.real()), R(p.argument.imag())};
    std::vector<C> up, lo;
    for (auto a : p.upper) up.push_back({R(a.real()), R(a.imag())});
    for (auto b : p.lower) lo.push_back({R(b.real()), R(b.imag())});
    C term{R(1), R(0)}, sum{R(1), R(0)};
    R max_term = 1;
    PfqSum<R> out{1.0, 0.0, 1, false};
    int small_run = 0;
    for (std::size_t k = 0; k + 1 < pfq_term_cap; ++k) {
        C r = div(z, C{R(double(k + 1)), R(0)});
        for (auto& a : up) r = mul(r, C{a.re + R(double(k)), a.im});
        for (auto& b : lo) r = div(r, C{b.re + R(double(k)), b.im});
        term = mul(term, r);
        sum = C{sum.re + term.re, sum.im + term.im};
        ++out.terms;
        R t = mag(term);
        if (t > max_term) max_term = t;
        if (m && long(k + 1) >= *m) {
            out.converged = true;
            out.est_error = 0.0;
            break;
        }
        double td = double(t), s = double(mag(sum));
        double scale = tol * std::max(1.0, s);
        small_run = td < scale ? small_run + 1 : 0;
        if (small_run >= 3) {
            double ratio = double(mag(r));
            out.est_error = ratio < 1.0 ? std::max(td, td * ratio / (1.0 - ratio)) : td;
            out.converged = true;
            break;
        }
        out.est_error = td;
    }
    out.value = cplx(double(sum.re), double(sum.im));
    // rounding carried by the largest term
    out.est_error += double(R(std::numeric_limits<R>::epsilon() * max_term));
    return out;
}

// log10 of the largest term, from the term ratios alone
inline double pfq_log10_peak(const PfqParams& p, std::optional<long> m) {
    double lt = 0.0, peak = 0.0;
    const double lz = std::log10(std::abs(p.argument));
    for (std::size_t k = 0; k + 1 < pfq_term_cap; ++k) {
        if (m && long(k) >= *m) break;
        double lr = lz - std::log10(double(k + 1));
        for (auto a : p.upper) lr += std::log10(std::abs(a + double(k)));
        for (auto b : p.lower) lr -= std::log10(std::abs(b + double(k)));
        lt += lr;
        peak = std::max(peak, lt);
        if (lr < 0.0 && lt < peak - 40.0) break;
    }
    return peak;
}

template <unsigned Digits>
using mp_float = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;

}  // namespace detail

// Power series with ratio-based stopping. When the terms grow far beyond the sum
// (large |z|), the sum is redone in extended precision sized to the largest term.
inline SeriesEval pfq(const PfqParams& p, double tol) {
    validate(p);
    SeriesEval out;
    auto m = pfq_terminates_after(p);
    if (p.argument == 0.0 || (m && *m == 0)) {
        out.value = 1.0;
        out.terms_used = 1;
        out.converged = true;
        return out;
    }
    auto fill = [&](const auto& r) {
        out.value = r.value;
        out.terms_used = r.terms;
        out.est_error = r.est_error;
        out.converged = r.converged && finite(r.value) && r.est_error <= tol * std::max(1.0, std::abs(r.value));
    };
    const double peak = detail::pfq_log10_peak(p, m);
    if (peak < 250.0) {
        auto d = detail::pfq_sum<double>(p, tol, m);
        fill(d);
        // a series that never settles is not helped by more digits
        if (!d.converged || out.converged) return out;
    }
    // digits for the cancellation plus the requested accuracy
    const double need = peak + std::max(0.0, -std::log10(tol)) + 10.0;
    if (need > 1500.0) {
        // beyond the widest working type (divergent or far outside the useful range)
        fill(detail::pfq_sum<double>(p, tol, m));
        out.converged = false;
        return out;
    }
    if (need <= 50.0) {
        fill(detail::pfq_sum<detail::mp_float<50>>(p, tol, m));
        if (out.converged) return out;
    }
    if (need <= 120.0) {
        fill(detail::pfq_sum<detail::mp_float<120>>(p, tol, m));
        if (out.converged) return out;
    }
    if (need <= 300.0) {
        fill(detail::pfq_sum<detail::mp_float<300>>(p, tol, m));
        if (out.converged) return out;
    }
    if (need <= 700.0) {
        fill(detail::pfq_sum<detail::mp_float<700>>(p, tol, m));
        if (out.converged) return out;
    }
    fill(detail::pfq_sum<detail::mp_float<1500>>(p, tol, m));
    return out;
}

inline SeriesEval pfq(std::vector<cplx> upper, std::vector<cplx> lower, cplx z, double tol) {
    return pfq(PfqParams{std::move(upper), std::move(lower), z}, tol);
}

struct MultiFParams {
    std::vector<cplx> a0, b0;
    std::vector<std::vector<cplx>> a, b;  // per argument
    std::vector<cplx> args;

    MultiFParams(std::vector<cplx> a0_, std::vector<cplx> b0_, std::vector<std::vector<cplx>> a_,
                 std::vector<std::vector<cplx>> b_, std::vector<cplx> args_)
        : a0(std::move(a0_)), b0(std::move(b0_)), a(std::move(a_)), b(std::move(b_)),
          args(std::move(args_)) {
        if (a.size() != args.size() || b.size() != args.size())
            throw numeric_error("multi_f: parameter lists do not match argument count");
        if (args.empty() || args.size() > 4) throw numeric_error("multi_f: 1 to 4 arguments supported");
        for (std::size_t j = 0; j < args.size(); ++j)
            if (!convergence_ok(j))
                throw numeric_error("multi_f: convergence condition 1+q0+qj-p0-pj >= 0 violated");
        for (auto v : b0)
            if (detail::is_nonpositive_integer(v)) throw numeric_error("multi_f: pole in b0");
        for (auto& bj : b)
            for (auto v : bj)
                if (detail::is_nonpositive_integer(v)) throw numeric_error("multi_f: pole in bj");
    }

    long convergence_margin(std::size_t j) const {
        return 1 + long(b0.size()) + long(b[j].size()) - long(a0.size()) - long(a[j].size());
    }
    bool convergence_ok(std::size_t j) const { return convergence_margin(j) >= 0; }
};

inline constexpr int multi_f_degree_cap = 300;

namespace detail {

// Multi-index sum traversed by total-degree shells, in working type R
template <class R>
SeriesEval multi_f_sum(const MultiFParams& p, double tol) {
    using std::sqrt;
    struct C {
        R re, im;
        C operator*(const C& b) const { return {re * b.re - im * b.im, re * b.im + im * b.re}; }
        C operator/(const C& b) const {
            R d = b.re * b.re + b.im * b.im;
            return {(re * b.re + im * b.im) / d, (im * b.re - re * b.im) / d};
        }
        C operator+(const C& b) const { return {re + b.re, im + b.im}; }
    };
    auto lift = [](cplx v) { return C{R(v.real()), R(v.imag())}; };
    auto mag = [](const C& a) -> R { return sqrt(a.re * a.re + a.im * a.im); };
    const std::size_t n = p.args.size();
    const int D = multi_f_degree_cap;
    // per-argument factors c_j[k] = (a_j)_k/(b_j)_k z_j^k/k!
    std::vector<std::vector<C>> c(n, std::vector<C>(D + 1));
    for (std::size_t j = 0; j < n; ++j) {
        c[j][0] = C{R(1), R(0)};
        for (int k = 0; k < D; ++k) {
            const R kk = R(k);
            C r = lift(p.args[j]) / C{kk + 1, R(0)};
            for (auto a : p.a[j]) r = r * (lift(a) + C{kk, R(0)});
            for (auto b : p.b[j]) r = r / (lift(b) + C{kk, R(0)});
            c[j][k + 1] = c[j][k] * r;
        }
    }
    std::vector<C> shared(D + 1);
    shared[0] = C{R(1), R(0)};
    for (int K = 0; K < D; ++K) {
        const C kk{R(K), R(0)};
        C r{R(1), R(0)};
        for (auto a : p.a0) r = r * (lift(a) + kk);
        for (auto b : p.b0) r = r / (lift(b) + kk);
        shared[K + 1] = shared[K] * r;
    }
    // conv[K] = sum over k_1+..+k_m = K of prod c_j[k_j], built one argument at a time
    std::vector<C> conv = c[0];
    for (std::size_t j = 1; j < n; ++j) {
        std::vector<C> next(D + 1, C{R(0), R(0)});
        for (int K = 0; K <= D; ++K)
            for (int k = 0; k <= K; ++k) next[K] = next[K] + conv[K - k] * c[j][k];
        conv = std::move(next);
    }
    SeriesEval out;
    C sum{R(0), R(0)};
    R max_shell = 0;
    int small_run = 0;
    const R eps = std::numeric_limits<R>::epsilon();
    for (int K = 0; K <= D; ++K) {
        C shell = shared[K] * conv[K];
        sum = sum + shell;
        R ms = mag(shell);
        if (ms > max_shell) max_shell = ms;
        out.terms_used = std::size_t(K + 1);
        double s = double(mag(sum)), m = double(ms);
        small_run = m < tol * std::max(1.0, s) ? small_run + 1 : 0;
        out.est_error = m;
        if (small_run >= 3 && K > 2) {
            out.converged = true;
            break;
        }
        if (!std::isfinite(s)) break;
    }
    out.value = cplx(double(sum.re), double(sum.im));
    // rounding carried by the largest shell
    out.est_error += double(R(eps * max_shell));
    out.converged = out.converged && finite(out.value);
    return out;
}

}  // namespace detail

// Multi-index sum by total-degree shells; redone in extended precision when the
// shells overflow double range or cancel beyond the requested accuracy
inline SeriesEval multi_f(const MultiFParams& p, double tol) {
    auto ok = [&](const SeriesEval& r) {
        return r.converged && r.est_error <= tol * std::max(1.0, std::abs(r.value));
    };
    auto out = detail::multi_f_sum<double>(p, tol);
    if (ok(out)) return out;
    auto hi = detail::multi_f_sum<detail::mp_float<50>>(p, tol);
    if (ok(hi)) return hi;
    hi = detail::multi_f_sum<detail::mp_float<120>>(p, tol);
    hi.converged = ok(hi);
    return hi;
}

}  // namespace deltastark
