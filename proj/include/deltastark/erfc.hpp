#pragma once

#include <array>
#include <cmath>

#include "gamma.hpp"
#include "types.hpp"

namespace deltastark {

namespace detail {

// Weideman's rational approximation of w(z), N = 48 terms
struct WeidemanTable {
    static constexpr int N = 48;
    double L;
    std::array<double, N> a;  // highest power first

    WeidemanTable() {
        const int M = 2 * N, M2 = 2 * M;
        L = std::sqrt(N / std::sqrt(2.0));
        // samples on the shifted grid, index 0 is the removed point
        std::array<double, M2> f{};
        for (int j = 1; j < M2; ++j) {
            int k = j - M;  // -M+1 .. M-1
            double th = k * pi / M;
            double t = L * std::tan(th / 2.0);
            f[j] = std::exp(-t * t) * (L * L + t * t);
        }
        // fftshift then real part of the DFT, coefficients 1..N
        std::array<double, M2> g{};
        for (int j = 0; j < M2; ++j) g[j] = f[(j + M) % M2];
        for (int n = 1; n <= N; ++n) {
            long double s = 0.0L;
            for (int j = 0; j < M2; ++j)
                s += g[j] * std::cos(2.0L * std::numbers::pi_v<long double> * n * j / M2);
            a[N - n] = double(s / M2);
        }
    }
};

inline const WeidemanTable& weideman() {
    static const WeidemanTable tab;
    return tab;
}

// w(z) for Im z >= 0
inline cplx w_rational(cplx z) {
    const auto& T = weideman();
    cplx den = T.L - I * z;
    cplx Z = (T.L + I * z) / den;
    cplx p = 0.0;
    for (double c : T.a) p = p * Z + c;
    return 2.0 * p / (den * den) + (1.0 / std::sqrt(pi)) / den;
}

// Laplace continued fraction for w(z), Im z > 0; returns false if slow
inline bool w_contfrac(cplx z, cplx& out, int max_iter = 400) {
    const double tiny = 1e-300, eps = 1e-16;
    cplx f = z, C = z, D = 0.0;
    for (int n = 1; n <= max_iter; ++n) {
        double an = -0.5 * n;
        D = z + an * D;
        if (std::abs(D) < tiny) D = tiny;
        C = z + an / C;
        if (std::abs(C) < tiny) C = tiny;
        D = 1.0 / D;
        cplx delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < eps) {
            out = (I / std::sqrt(pi)) / f;
            return true;
        }
    }
    return false;
}

inline cplx w_upper(cplx z) {
    cplx v;
    if (std::abs(z) >= 4.0 && z.imag() > 0.0 && w_contfrac(z, v)) return v;
    return w_rational(z);
}

inline cplx checked_exp(cplx z) {
    if (z.real() > 709.0) throw numeric_error("cerfc: result overflows double range");
    return std::exp(z);
}

}  // namespace detail

// Faddeeva function w(z) = exp(-z^2) erfc(-iz)
inline cplx faddeeva_w(cplx z) {
    if (z.imag() >= 0.0) return detail::w_upper(z);
    return 2.0 * detail::checked_exp(-z * z) - detail::w_upper(-z);
}

// exp(z^2) erfc(z), the scaled form used wherever erfc meets a large exponential
inline cplx erfcx_c(cplx z) {
    if (z.real() >= 0.0) return detail::w_upper(I * z);
    return 2.0 * detail::checked_exp(z * z) - detail::w_upper(-I * z);
}

inline cplx cerfc(cplx z) {
    if (z.real() >= 0.0) {
        cplx e = -z * z;
        if (e.real() < -745.0) return 0.0;
        return detail::checked_exp(e) * detail::w_upper(I * z);
    }
    cplx e = -z * z;
    if (e.real() < -745.0) return 2.0;
    return 2.0 - detail::checked_exp(e) * detail::w_upper(-I * z);
}

inline cplx cerf(cplx z) { return 1.0 - cerfc(z); }

// i^n erfc(z); n = 0 is erfc itself
inline cplx repeated_erfc(int n, cplx z) {
    if (n < 0) throw numeric_error("repeated_erfc: n must be nonnegative");
    if (n == 0) return cerfc(z);
    const double az = std::abs(z);
    if ((az <= 1.5 && z.real() <= 0.05) || std::abs(z.real()) <= 0.05) {
        // entire power series, terms with n - k a negative even integer vanish
        cplx s = 0.0, zk = 1.0;
        double kfac = 1.0;
        for (int k = 0; k < 200; ++k) {
            if (k > 0) {
                zk *= z;
                kfac *= k;
            }
            cplx term = (k % 2 ? -1.0 : 1.0) * zk / (kfac * std::ldexp(1.0, n - k)) *
                        recip_gamma(1.0 + 0.5 * (n - k));
            s += term;
            if (k > n + 5 && term != 0.0 && std::abs(term) < 1e-18 * std::max(1e-300, std::abs(s))) break;
        }
        return s;
    }
    if (z.real() > 0.05) {
        // Miller: the sought solution is minimal for Re z > 0
        // the unwanted solution decays like exp(-2 Re z sqrt(2k)) relative to the wanted one
        double root = std::sqrt(2.0 * n) + 40.0 / z.real();
        int top = n + 30 + int(std::min(2e6, 0.5 * root * root));
        cplx hi = 0.0, mid = 1e-300;  // i^{k+1}, i^k
        cplx val_n = 0.0;
        for (int k = top; k >= 1; --k) {
            // i^{k-1} = 2(k+1) i^{k+1} + 2z i^k, written with index shift
            cplx lo = 2.0 * double(k + 1) * hi + 2.0 * z * mid;
            hi = mid;
            mid = lo;
            if (k - 1 == n) val_n = mid;
            if (std::abs(mid) > 1e250) {
                hi *= 1e-250;
                mid *= 1e-250;
                val_n *= 1e-250;
            }
        }
        // mid is now i^0 erfc up to scale
        if (n == 0) val_n = mid;
        return val_n * (cerfc(z) / mid);
    }
    // Re z < 0: i^n erfc(z) + (-1)^n i^n erfc(-z) = 2 h_n(z), with h_n the
    // polynomial solution of the same recurrence (h_0 = 1, h_1 = -z)
    cplx hm = 1.0, h = -z;
    for (int k = 1; k < n; ++k) {
        cplx next = (-z * h + 0.5 * hm) / double(k + 1);
        hm = h;
        h = next;
    }
    return 2.0 * h - (n % 2 ? -1.0 : 1.0) * repeated_erfc(n, -z);
}

}  // namespace deltastark
