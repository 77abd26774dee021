#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace casbox {

// A value with a truncation-error radius. available == false means no bound is
// known (the radius is then +inf and must not be read as a certificate).
struct CertifiedValue {
    std::complex<double> value{};
    double radius = 0.0;
    bool available = true;

    double re() const { return value.real(); }
    double lo() const { return value.real() - radius; }
    double hi() const { return value.real() + radius; }

    CertifiedValue& operator+=(const CertifiedValue& o) {
        value += o.value;
        radius += o.radius;
        available = available && o.available;
        if (!available) radius = std::numeric_limits<double>::infinity();
        return *this;
    }
    CertifiedValue& operator-=(const CertifiedValue& o) { return *this += CertifiedValue{-o.value, o.radius, o.available}; }
    CertifiedValue& operator*=(double c) {
        value *= c;
        radius *= std::abs(c);
        return *this;
    }

    friend CertifiedValue operator+(CertifiedValue a, const CertifiedValue& b) { return a += b; }
    friend CertifiedValue operator-(CertifiedValue a, const CertifiedValue& b) { return a -= b; }
    friend CertifiedValue operator*(double c, CertifiedValue a) { return a *= c; }
    friend CertifiedValue operator*(CertifiedValue a, double c) { return a *= c; }

    static CertifiedValue unavailable(std::complex<double> v) {
        return {v, std::numeric_limits<double>::infinity(), false};
    }
};

// The two certified discs intersect.
inline bool overlaps(const CertifiedValue& a, const CertifiedValue& b) {
    return std::abs(a.value - b.value) <= a.radius + b.radius;
}

// Final outward inflation applied to every bound computed in floating point.
inline double inflate(double r) { return r * (1.0 + 1e-14); }

} // namespace casbox
