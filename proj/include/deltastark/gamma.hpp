#pragma once

#include <array>
#include <cmath>

#include "types.hpp"

namespace deltastark {

namespace detail {

// Lanczos g = 7, n = 9 (Godfrey's coefficients)
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_c = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// log Gamma for Re z >= 1/2
inline cplx lgamma_right(cplx z) {
    z -= 1.0;
    cplx x = lanczos_c[0];
    for (int k = 1; k < 9; ++k) x += lanczos_c[k] / (z + double(k));
    cplx t = z + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace detail

inline cplx lgamma_c(cplx z) {
    if (detail::is_nonpositive_integer(z)) throw numeric_error("lgamma_c: pole");
    if (z.real() < 0.5) {
        // log(pi / sin(pi z)) - lgamma(1 - z), branch not normalised
        return std::log(pi) - std::log(std::sin(pi * z)) - detail::lgamma_right(1.0 - z);
    }
    return detail::lgamma_right(z);
}

inline cplx gamma_c(cplx z) {
    if (detail::is_nonpositive_integer(z)) throw numeric_error("gamma_c: pole at nonpositive integer");
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma_c(1.0 - z));
    if (z.imag() == 0.0 && z.real() < 140.0) {
        // real path keeps integer arguments exact to rounding
        double x = z.real() - 1.0, s = detail::lanczos_c[0];
        for (int k = 1; k < 9; ++k) s += detail::lanczos_c[k] / (x + k);
        double t = x + detail::lanczos_g + 0.5;
        return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * s;
    }
    return std::exp(detail::lgamma_right(z));
}

inline cplx recip_gamma(cplx z) {
    if (detail::is_nonpositive_integer(z)) return 0.0;
    if (z.real() < 0.5) return std::sin(pi * z) * gamma_c(1.0 - z) / pi;
    if (std::abs(z) > 140.0) return std::exp(-detail::lgamma_right(z));
    return 1.0 / gamma_c(z);
}

inline double gamma_r(double x) { return gamma_c(x).real(); }

inline cplx pochhammer(cplx lam, std::size_t k) {
    cplx p = 1.0;
    for (std::size_t j = 0; j < k; ++j) p *= lam + double(j);
    return p;
}

}  // namespace deltastark
