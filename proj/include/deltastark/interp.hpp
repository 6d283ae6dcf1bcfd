#pragma once

#include <cmath>
#include <vector>

#include "types.hpp"

namespace deltastark {

// Chebyshev expansion in u = sqrt(tau) on [0, sqrt(T)]; functions of the form
// a + b sqrt(tau) + c tau + ... are smooth in u, which is the shape of every
// time-domain quantity near the kick at tau = 0.
class SqrtChebyshev {
public:
    SqrtChebyshev() = default;

    // tau values of the nodes, in the order expected by the value constructor
    static std::vector<double> node_times(double T, int n) {
        std::vector<double> out(n);
        double umax = std::sqrt(T);
        for (int j = 0; j < n; ++j) {
            double u = 0.5 * umax * (1.0 + std::cos(pi * (j + 0.5) / n));
            out[j] = u * u;
        }
        return out;
    }

    SqrtChebyshev(double T, const std::vector<cplx>& vals) : umax_(std::sqrt(T)) {
        const int n = int(vals.size());
        nodes_ = node_times(T, n);
        coef_.assign(n, 0.0);
        for (int k = 0; k < n; ++k) {
            cplx s = 0.0;
            for (int j = 0; j < n; ++j) s += vals[j] * std::cos(pi * k * (j + 0.5) / n);
            coef_[k] = s * (2.0 / n);
        }
        coef_[0] *= 0.5;
    }

    template <class F>
    SqrtChebyshev(F&& fn, double T, int n) : SqrtChebyshev(T, sample(fn, T, n)) {}

    cplx operator()(double tau) const {
        double u = std::sqrt(std::max(0.0, tau));
        double x = 2.0 * u / umax_ - 1.0;
        cplx b1 = 0.0, b2 = 0.0;
        for (int k = int(coef_.size()) - 1; k >= 1; --k) {
            cplx b0 = 2.0 * x * b1 - b2 + coef_[k];
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + coef_[0];
    }

    // size of the trailing coefficients, a resolution indicator
    double tail() const {
        double m = 0.0;
        std::size_t n = coef_.size();
        for (std::size_t k = n > 4 ? n - 4 : 0; k < n; ++k) m = std::max(m, std::abs(coef_[k]));
        return m;
    }
    double horizon() const { return umax_ * umax_; }
    const std::vector<double>& nodes() const { return nodes_; }
    bool empty() const { return coef_.empty(); }

private:
    template <class F>
    static std::vector<cplx> sample(F& fn, double T, int n) {
        std::vector<cplx> v;
        for (double tau : node_times(T, n)) v.push_back(fn(tau));
        return v;
    }

    double umax_ = 0.0;
    std::vector<double> nodes_;
    std::vector<cplx> coef_;
};

}  // namespace deltastark
