#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace deltastark {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// raised for poles, overflow, t = 0 kernels and bad configuration
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesEval {
    cplx value{0.0};
    std::size_t terms_used = 0;
    double est_error = 0.0;
    bool converged = false;
};

struct QuadResult {
    cplx value{0.0};
    double est_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// principal-branch powers of i, used in several kernels
inline cplx ipow(double p) { return std::polar(1.0, p * pi / 2.0); }

}  // namespace deltastark
