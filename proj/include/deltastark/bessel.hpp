#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "types.hpp"

namespace deltastark {

// J_l(x) for integer l by Miller's backward recurrence,
// normalised with J_0 + 2 sum J_2k = 1
inline double bessel_j(int l, double x) {
    double sign = 1.0;
    if (l < 0) {
        l = -l;
        if (l % 2) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (l % 2) sign = -sign;
    }
    if (x == 0.0) return l == 0 ? sign : 0.0;

    double m = std::max<double>(l, x);
    int top = 2 * ((int(m + 30.0 + std::sqrt(60.0 * m)) + 1) / 2);
    double jp = 0.0, j = 1e-300, norm = 0.0, result = 0.0;
    for (int k = top; k >= 1; --k) {
        double jm = 2.0 * k / x * j - jp;  // J_{k-1}
        jp = j;
        j = jm;
        if (k - 1 == l) result = j;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    norm += j;
    return sign * result / norm;
}

}  // namespace deltastark
