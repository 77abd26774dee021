#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace casbox {

using cplx = std::complex<double>;

namespace detail {

inline bool is_nonpositive_integer(cplx s) {
    return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real());
}

inline void require_finite(cplx s, const char* what) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw DomainError(std::string(what) + ": non-finite order");
}

// Lanczos approximation, g = 7, nine terms. Valid for Re z >= 1/2.
inline cplx lanczos_gamma(cplx z) {
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;
    z -= 1.0;
    cplx x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i));
    cplx t = z + g + 0.5;
    cplx logv = 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
    return std::exp(logv);
}

// Riemann zeta at integers k >= 2, only as needed by the lnGamma(1+e) series.
inline double zeta_int(int k) {
    static constexpr std::array<double, 11> z = {
        0.0, 0.0, 1.6449340668482264, 1.2020569031595943, 1.0823232337111382,
        1.0369277551433699, 1.0173430619844491, 1.0083492773819228,
        1.0040773561979443, 1.0020083928260822, 1.0009945751278181};
    if (k <= 10) return z[k];
    double sum = 1.0;
    for (int n = 2; n < 40; ++n) {
        double t = std::pow(double(n), -k);
        sum += t;
        if (t < 1e-18) break;
    }
    return sum;
}

// (Gamma(1+e) - 1)/e, accurate also for e -> 0.
inline cplx gamma1pm1_over(cplx e) {
    constexpr double euler = 0.57721566490153286061;
    if (std::abs(e) > 0.25) return (lanczos_gamma(1.0 + e) - 1.0) / e;
    // L/e with L = lnGamma(1+e) = -gamma e + sum_{k>=2} (-1)^k zeta(k) e^k / k
    cplx lo = -euler;
    cplx ek = 1.0;
    for (int k = 2; k < 40; ++k) {
        ek *= e;
        cplx t = ((k % 2 == 0) ? 1.0 : -1.0) * zeta_int(k) * ek / double(k);
        lo += t;
        if (std::abs(t) < 1e-18) break;
    }
    cplx L = lo * e;
    // expm1(L)/L via series for small |L|
    cplx r = 1.0, term = 1.0;
    for (int k = 1; k < 30; ++k) {
        term *= L / double(k + 1);
        r += term;
        if (std::abs(term) < 1e-18) break;
    }
    return r * lo;
}

// (x^e - 1)/e for real x > 0.
inline cplx powm1_over(cplx e, double x) {
    double lx = std::log(x);
    cplx z = e * lx;
    if (std::abs(z) > 0.5) return (std::exp(z) - 1.0) / e;
    cplx r = 1.0, term = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= z / double(k + 1);
        r += term;
        if (std::abs(term) < 1e-18) break;
    }
    return r * lx;
}

// Legendre continued fraction for Gamma(a,x), modified Lentz.
inline cplx upper_gamma_cf(cplx a, double x) {
    const double tiny = 1e-300;
    cplx b = x + 1.0 - a;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 20000; ++i) {
        cplx an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        cplx del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x)) * h;
}

// Lower incomplete gamma by its power series, gamma(a,x) = x^a e^-x sum x^k / (a)_{k+1}.
inline cplx lower_gamma_series(cplx a, double x) {
    cplx ap = a;
    cplx del = 1.0 / a;
    cplx sum = del;
    for (int n = 0; n < 100000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x));
}

// Gamma(e,x) for |Re e| <= 1/2 and modest x, without cancellation near e = 0:
// Gamma(e,x) = [Gamma(e) - x^e/e] - sum_{k>=1} (-1)^k x^{e+k} / (k! (e+k)).
inline cplx upper_gamma_small(cplx e, double x) {
    cplx head = gamma1pm1_over(e) - powm1_over(e, x);
    cplx xe = std::exp(e * std::log(x));
    cplx sum = 0.0;
    double fact = 1.0, xk = 1.0;
    for (int k = 1; k < 200; ++k) {
        fact *= k;
        xk *= x;
        cplx t = ((k % 2 == 0) ? 1.0 : -1.0) * xk / (fact * (e + double(k)));
        sum += t;
        if (std::abs(t) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return head - xe * sum;
}

} // namespace detail

inline cplx gamma(cplx s) {
    detail::require_finite(s, "gamma");
    if (detail::is_nonpositive_integer(s))
        throw PoleError("gamma: pole at non-positive integer " + std::to_string(s.real()));
    if (s.real() < 0.5) {
        const double pi = std::numbers::pi;
        return pi / (std::sin(pi * s) * detail::lanczos_gamma(1.0 - s));
    }
    return detail::lanczos_gamma(s);
}

// 1/Gamma(s), entire; exactly zero at the poles of Gamma.
inline cplx rgamma(cplx s) {
    detail::require_finite(s, "rgamma");
    if (detail::is_nonpositive_integer(s)) return 0.0;
    if (s.real() < 0.5) {
        const double pi = std::numbers::pi;
        return std::sin(pi * s) * detail::lanczos_gamma(1.0 - s) / pi;
    }
    return 1.0 / detail::lanczos_gamma(s);
}

// Upper incomplete gamma Gamma(s,z) for complex s and real z > 0.
inline cplx upper_gamma(cplx s, double z) {
    detail::require_finite(s, "upper_gamma");
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("upper_gamma: z must be positive");
    const double re = s.real();
    if (z > 1.5 && z >= re + 1.0) return detail::upper_gamma_cf(s, z);
    if (re > 0.5) return detail::lanczos_gamma(s) - detail::lower_gamma_series(s, z);

    // Shift up to Re e in (-1/2, 1/2], then recurse downward:
    // Gamma(a,z) = (Gamma(a+1,z) - z^a e^-z) / a.
    int m = static_cast<int>(std::ceil(-re - 0.5));
    if (m < 0) m = 0;
    cplx e = s + double(m);
    cplx g = detail::upper_gamma_small(e, z);
    const double lz = std::log(z);
    for (int k = 1; k <= m; ++k) {
        cplx a = e - double(k);
        g = (g - std::exp(a * lz - z)) / a;
    }
    return g;
}

// Set when p_func returns the continued value 1/s for beta = 0 and Re s <= 0.
struct ContinuationNote {
    bool used = false;
};

// P_s(beta) = int_0^1 t^{s-1} e^{-beta/t} dt = beta^s Gamma(-s, beta); 1/s at beta = 0.
inline cplx p_func(cplx s, double beta, ContinuationNote* note = nullptr) {
    detail::require_finite(s, "p_func");
    if (beta < 0.0 || std::isnan(beta)) throw DomainError("p_func: beta must be non-negative");
    if (beta == 0.0) {
        if (s == cplx(0.0)) throw PoleError("p_func: pole at s = 0, beta = 0");
        if (note && s.real() <= 0.0) note->used = true;
        return 1.0 / s;
    }
    return std::exp(s * std::log(beta)) * upper_gamma(-s, beta);
}

} // namespace casbox
