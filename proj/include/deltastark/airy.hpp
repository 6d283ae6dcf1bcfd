#pragma once

#include <cmath>

#include "types.hpp"

namespace deltastark {

struct AiryValues {
    cplx ai, bi, aip, bip;
};

namespace detail {

inline constexpr double airy_c1 = 0.355028053887817239260;  // Ai(0)
inline constexpr double airy_c2 = 0.258819403792806798405;  // -Ai'(0)
inline constexpr double airy_inner = 2.0;
inline constexpr double airy_outer = 12.0;

struct AiPair {
    cplx ai, aip;
};

inline void airy_maclaurin(cplx z, cplx& f, cplx& g, cplx& fp, cplx& gp) {
    cplx z3 = z * z * z;
    cplx t = 1.0, u = z, d = 0.5 * z * z, e = 1.0;
    f = t;
    g = u;
    fp = d;
    gp = e;
    for (int k = 1; k < 200; ++k) {
        t *= z3 / double((3 * k - 1) * (3 * k));
        u *= z3 / double((3 * k) * (3 * k + 1));
        if (k > 1) d *= z3 / double((3 * k - 3) * (3 * k - 1));
        e *= z3 / double((3 * k - 2) * (3 * k));
        f += t;
        g += u;
        if (k > 1) fp += d;
        gp += e;
        if (std::abs(t) + std::abs(u) + std::abs(d) + std::abs(e) <
            1e-18 * (std::abs(f) + std::abs(g) + std::abs(fp) + std::abs(gp)))
            break;
    }
}

inline AiPair ai_maclaurin(cplx z) {
    cplx f, g, fp, gp;
    airy_maclaurin(z, f, g, fp, gp);
    return {airy_c1 * f - airy_c2 * g, airy_c1 * fp - airy_c2 * gp};
}

// |arg z| <= 2pi/3, |z| large
inline AiPair ai_asymptotic(cplx z) {
    cplx sz = std::sqrt(z);
    cplx zeta = 2.0 / 3.0 * z * sz;
    cplx q = std::sqrt(sz);  // z^{1/4}
    cplx su = 1.0, sv = 1.0, r = 1.0;
    double uk = 1.0, best = 1e300;
    for (int k = 1; k < 120; ++k) {
        uk *= double((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) / (double(2 * k - 1) * 216.0 * k);
        double vk = -double(6 * k + 1) / double(6 * k - 1) * uk;
        r *= -1.0 / zeta;
        cplx tu = uk * r, tv = vk * r;
        double mag = std::abs(tu) + std::abs(tv);
        if (mag > best) break;  // asymptotic series started diverging
        best = mag;
        su += tu;
        sv += tv;
        if (mag < 1e-18) break;
    }
    cplx e = std::exp(-zeta) / (2.0 * std::sqrt(pi));
    return {e * su / q, -e * q * sv};
}

// Taylor steps of y'' = z y from z0 to z1
inline AiPair ode_walk(cplx z0, cplx z1, AiPair y) {
    int steps = std::max(1, int(std::ceil(std::abs(z1 - z0) / 0.5)));
    cplx h = (z1 - z0) / double(steps);
    for (int s = 0; s < steps; ++s) {
        cplx zc = z0 + double(s) * h;
        cplx cm1 = 0.0, c0 = y.ai, c1 = y.aip;
        cplx val = c0 + c1 * h, der = c1;
        cplx hp = h;  // h^{n+1} for the derivative series
        cplx hn = h;  // h^{n+1} for the value series
        cplx cn = c0, cn1 = c1;  // c_n, c_{n+1}
        double scale = std::abs(c0) + std::abs(c1);
        for (int n = 0; n < 200; ++n) {
            cplx cn2 = (zc * cn + cm1) / double((n + 2) * (n + 1));
            hn *= h;  // h^{n+2}
            val += cn2 * hn;
            der += double(n + 2) * cn2 * hp;
            hp *= h;
            cm1 = cn;
            cn = cn1;
            cn1 = cn2;
            if (n > 4 && std::abs(cn2 * hn) < 1e-18 * scale && std::abs(cn * hn / h) < 1e-18 * scale)
                break;
        }
        y = {val, der};
    }
    return y;
}

inline AiPair ai_sector(cplx z) {
    double r = std::abs(z);
    if (r <= airy_inner) return ai_maclaurin(z);
    if (r >= airy_outer) return ai_asymptotic(z);
    cplx dir = z / r;
    if (std::abs(std::arg(z)) <= pi / 3.0) {
        cplx start = airy_outer * dir;
        return ode_walk(start, z, ai_asymptotic(start));
    }
    cplx start = airy_inner * dir;
    return ode_walk(start, z, ai_maclaurin(start));
}

inline AiPair ai_any(cplx z) {
    if (std::abs(z) < airy_outer || std::abs(std::arg(z)) <= 2.0 * pi / 3.0 + 1e-12) return ai_sector(z);
    const cplx w = std::polar(1.0, 2.0 * pi / 3.0), w2 = std::conj(w);
    AiPair a = ai_sector(w * z), b = ai_sector(w2 * z);
    // Ai(z) = -w Ai(wz) - w^2 Ai(w^2 z)
    return {-w * a.ai - w2 * b.ai, -w2 * a.aip - w * b.aip};
}

}  // namespace detail

inline AiryValues airy(cplx z) {
    const cplx w = std::polar(1.0, 2.0 * pi / 3.0), w2 = std::conj(w);
    const cplx ep = std::polar(1.0, pi / 6.0), em = std::conj(ep);
    auto a0 = detail::ai_any(z);
    AiryValues out;
    out.ai = a0.ai;
    out.aip = a0.aip;
    if (std::abs(z) <= detail::airy_inner) {
        cplx f, g, fp, gp;
        detail::airy_maclaurin(z, f, g, fp, gp);
        out.bi = std::sqrt(3.0) * (detail::airy_c1 * f + detail::airy_c2 * g);
        out.bip = std::sqrt(3.0) * (detail::airy_c1 * fp + detail::airy_c2 * gp);
    } else {
        auto a = detail::ai_any(w * z), b = detail::ai_any(w2 * z);
        out.bi = ep * a.ai + em * b.ai;
        out.bip = ep * w * a.aip + em * w2 * b.aip;
    }
    if (!finite(out.ai) || !finite(out.bi) || !finite(out.aip) || !finite(out.bip))
        throw numeric_error("airy: overflow");
    return out;
}

}  // namespace deltastark
