#pragma once

#include <cmath>
#include <numbers>

#include "geometry.hpp"
#include "summation.hpp"

namespace casbox {

inline double heat_large_default_N(double t, const BoxGeometry& g) {
    return std::max(6.0, std::ceil(8.0 * g.max_side() / std::sqrt(t)));
}

inline double heat_small_default_N(double t, const BoxGeometry& g) {
    return std::max(6.0, std::ceil(8.0 * std::sqrt(t)) / g.min_side() + 2.0 * std::sqrt(double(g.dim())));
}

// Eigenfunction expansion, useful for large t.
inline double heat_large(double t, const Point& x, const Point& y, const BoxGeometry& g, double N) {
    if (!(t > 0.0)) throw DomainError("heat_large: t must be positive");
    CompensatedSum<double> acc;
    for_each_in_shell(g.dim(), ShellKind::PositiveOrthant, N, [&](const Index& n) {
        double c = c_n(n, x, y, g);
        if (c != 0.0) acc += std::exp(-omega_sq(n, g) * t) * c;
    });
    return std::ldexp(acc.value(), g.dim()) / g.volume();
}

// Method-of-images expansion, useful for small t.
inline double heat_small(double t, const Point& x, const Point& y, const BoxGeometry& g, double N) {
    if (!(t > 0.0)) throw DomainError("heat_small: t must be positive");
    const int d = g.dim();
    CompensatedSum<double> acc;
    ImageIndex idx{Index(d), Index(d)};
    for_each_in_shell(d, ShellKind::FullLattice, N, [&](const Index& h) {
        idx.h = h;
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            for (int i = 0; i < d; ++i) idx.l[i] = (mask >> i) & 1u ? 2 : 1;
            acc += delta_l(idx.l) * std::exp(-b_hl(idx, x, y, g) / t);
        }
    });
    return acc.value() * std::pow(4.0 * std::numbers::pi * t, -0.5 * d);
}

} // namespace casbox
