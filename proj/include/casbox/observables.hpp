#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "certified.hpp"
#include "dirichlet.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace casbox {

inline double xi_critical(int d) { return (d - 1.0) / (4.0 * d); }

// <T_mu nu> = conformal + (xi - xi_d) * nonconformal, indices 0..d.
struct StressTensorVEV {
    int d = 0;
    std::vector<std::vector<CertifiedValue>> conformal;
    std::vector<std::vector<CertifiedValue>> nonconformal;

    CertifiedValue total(int mu, int nu, double xi) const {
        return conformal[mu][nu] + (xi - xi_critical(d)) * nonconformal[mu][nu];
    }
};

namespace detail {

inline cplx kappa_pow(double kappa, cplx u) {
    if (u == cplx(0.0)) return 1.0;
    return std::exp(u * std::log(kappa));
}

inline bool is_integer_in(cplx u, int lo, int hi) {
    if (u.imag() != 0.0 || u.real() != std::floor(u.real())) return false;
    return u.real() >= lo && u.real() <= hi;
}

// Linear combination of certified base quantities; the radius is sum |c_k| r_k,
// so a quantity used twice is not double counted.
struct Combo {
    std::vector<double> c;
    explicit Combo(size_t n) : c(n, 0.0) {}
    CertifiedValue eval(const std::vector<CertifiedValue>& base, cplx scale) const {
        CertifiedValue r{0.0, 0.0};
        for (size_t k = 0; k < c.size(); ++k) {
            if (c[k] == 0.0) continue;
            r.value += c[k] * base[k].value;
            r.radius += std::abs(c[k]) * base[k].radius;
            r.available = r.available && base[k].available;
        }
        r.value *= scale;
        r.radius = r.available ? inflate(r.radius * std::abs(scale)) : std::numeric_limits<double>::infinity();
        return r;
    }
};

inline CertifiedValue kernel(cplx s, const Point& x, const BoxGeometry& g, const TruncationParams& tp) {
    return d_sup(s, x, x, g, tp) + d_inf(s, x, x, g, tp);
}

inline CertifiedValue kernel_deriv(cplx s, const DerivSelector& sel, const Point& x, const BoxGeometry& g,
                                   const TruncationParams& tp) {
    return d_sup_deriv(s, sel, x, x, g, tp) + d_inf_deriv(s, sel, x, x, g, tp);
}

} // namespace detail

inline StressTensorVEV stress_energy(const Point& x, const BoxGeometry& g, const TruncationParams& tp, cplx u = 0.0,
                                     double kappa = 1.0) {
    if (!g.contains_closed(x)) throw DomainError("stress_energy: point outside the box");
    if (!g.contains_open(x)) throw EdgeError("stress_energy: point lies on the boundary");
    const int d = g.dim();
    const double xd = xi_critical(d);
    const cplx sm = 0.5 * (u - 1.0), sp = 0.5 * (u + 1.0);

    // base quantities: [0] D_{sm}; then d_{x^i y^j} D_{sp} and d_{x^i x^j} D_{sp} for i <= j
    std::vector<CertifiedValue> base{detail::kernel(sm, x, g, tp)};
    std::vector<std::vector<size_t>> ixy(d, std::vector<size_t>(d)), ixx(d, std::vector<size_t>(d));
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            ixy[i][j] = ixy[j][i] = base.size();
            base.push_back(detail::kernel_deriv(sp, dxy(i, j), x, g, tp));
            ixx[i][j] = ixx[j][i] = base.size();
            base.push_back(detail::kernel_deriv(sp, dxx(i, j), x, g, tp));
        }
    const cplx scale = detail::kappa_pow(kappa, u);

    StressTensorVEV t;
    t.d = d;
    t.conformal.assign(d + 1, std::vector<CertifiedValue>(d + 1));
    t.nonconformal.assign(d + 1, std::vector<CertifiedValue>(d + 1));

    // T00 = (1/4 + xi) D + (1/4 - xi) sum_l dxy_ll D
    detail::Combo c00(base.size()), n00(base.size());
    c00.c[0] = 0.25 + xd;
    n00.c[0] = 1.0;
    for (int l = 0; l < d; ++l) {
        c00.c[ixy[l][l]] += 0.25 - xd;
        n00.c[ixy[l][l]] -= 1.0;
    }
    t.conformal[0][0] = c00.eval(base, scale);
    t.nonconformal[0][0] = n00.eval(base, scale);

    // Tij = (1/4 - xi) delta_ij (D - sum_l dxy_ll D) + (1/2 - xi) dxy_ij D - xi dxx_ij D
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            detail::Combo c(base.size()), n(base.size());
            if (i == j) {
                c.c[0] += 0.25 - xd;
                n.c[0] -= 1.0;
                for (int l = 0; l < d; ++l) {
                    c.c[ixy[l][l]] -= 0.25 - xd;
                    n.c[ixy[l][l]] += 1.0;
                }
            }
            c.c[ixy[i][j]] += 0.5 - xd;
            n.c[ixy[i][j]] -= 1.0;
            c.c[ixx[i][j]] -= xd;
            n.c[ixx[i][j]] -= 1.0;
            t.conformal[i + 1][j + 1] = t.conformal[j + 1][i + 1] = c.eval(base, scale);
            t.nonconformal[i + 1][j + 1] = t.nonconformal[j + 1][i + 1] = n.eval(base, scale);
        }
    return t;
}

namespace detail {

inline void check_side(const SideId& side, const BoxGeometry& g) {
    if (side.axis < 0 || side.axis >= g.dim() || (side.lambda != 0 && side.lambda != 1))
        throw DomainError("side: axis or lambda out of range");
}

inline void check_side_point(const SideId& side, const Point& xb, const BoxGeometry& g) {
    check_side(side, g);
    if (static_cast<int>(xb.size()) != g.dim()) throw DomainError("pressure: point has wrong dimension");
    if (xb[side.axis] != side.lambda * g.side(side.axis))
        throw DomainError("pressure: point does not lie on the requested side");
    for (int i = 0; i < g.dim(); ++i) {
        if (i == side.axis) continue;
        if (xb[i] == 0.0 || xb[i] == g.side(i)) throw EdgeError("pressure: point lies on an edge of the side");
        if (!(xb[i] > 0.0 && xb[i] < g.side(i))) throw DomainError("pressure: point outside the side");
    }
}

inline double outer_normal(const SideId& side) { return side.lambda == 0 ? -1.0 : 1.0; }

} // namespace detail

// Boundary pressure p_i at a point of side (p, lambda); only p_p is nonzero.
inline std::vector<CertifiedValue> pressure(const SideId& side, const Point& xb, const BoxGeometry& g,
                                            const TruncationParams& tp, cplx u = 0.0, double kappa = 1.0) {
    detail::check_side_point(side, xb, g);
    const int p = side.axis;
    CertifiedValue dd = detail::kernel_deriv(0.5 * (u + 1.0), dxy(p, p), xb, g, tp);
    std::vector<CertifiedValue> out(g.dim(), CertifiedValue{0.0, 0.0});
    detail::Combo c(1);
    c.c[0] = 0.25 * detail::outer_normal(side);
    out[p] = c.eval({dd}, detail::kappa_pow(kappa, u));
    return out;
}

// Point on the inward normal through xb at distance eps.
inline Point inward_point(const SideId& side, const Point& xb, const BoxGeometry& g, double eps) {
    Point x = xb;
    x[side.axis] = side.lambda == 0 ? eps : g.side(side.axis) - eps;
    return x;
}

// (boundary pressure, interior limit n_p T_pp at distance eps). The interior value
// carries, besides truncation radii, an estimate of its distance from the eps -> 0
// limit: T_pp is even in the normal distance, so f(eps) - f(0) ~ (4/3)(f(eps) - f(eps/2)).
inline std::pair<CertifiedValue, CertifiedValue> pressure_prescription_check(const SideId& side, const Point& xb,
                                                                             const BoxGeometry& g,
                                                                             const TruncationParams& tp, double eps) {
    CertifiedValue bnd = pressure(side, xb, g, tp)[side.axis];
    if (eps == 0.0) return {bnd, bnd};
    if (!(eps > 0.0) || !(eps < g.side(side.axis))) throw DomainError("prescription check: eps out of range");
    const int p = side.axis + 1;
    const double n = detail::outer_normal(side);
    CertifiedValue f1 = n * stress_energy(inward_point(side, xb, g, eps), g, tp).conformal[p][p];
    CertifiedValue f2 = n * stress_energy(inward_point(side, xb, g, 0.5 * eps), g, tp).conformal[p][p];
    CertifiedValue lim = f1;
    lim.radius = inflate(f1.radius + f2.radius + 2.0 * (4.0 / 3.0) * std::abs(f1.value - f2.value));
    return {bnd, lim};
}

// ---- total energy ----------------------------------------------------------

struct EnergyParts {
    CertifiedValue sup, inf;
    CertifiedValue total() const { return sup + inf; }
};

inline double energy_sup_radius(const BoxGeometry& g, double T, double N, double alpha, cplx u, double kappa = 1.0) {
    const int d = g.dim();
    const double a = g.min_side(), A = g.max_side(), re = u.real(), pi = std::numbers::pi;
    const double H = h_bound(d, N, alpha, pi * pi * T / (A * A), 0.5 * (re - 1.0), 1.0 - re);
    return inflate(std::pow(kappa, re) * std::max(std::pow(a, re - 1.0), std::pow(A, re - 1.0)) /
                   (std::ldexp(1.0, d + 1) * std::pow(pi, re - 1.0)) * std::abs(rgamma(0.5 * (u - 1.0))) * H);
}

// Returns a negative value when no bound is available for this u.
inline double energy_inf_radius(const BoxGeometry& g, double T, double N, double alpha, cplx u, double kappa = 1.0) {
    const int d = g.dim();
    const double a = g.min_side(), A = g.max_side(), re = u.real(), sd = std::sqrt(double(d));
    if (re > 2.0 && re <= d + 1.0) return -1.0;
    if (!(N > 2.0 * sd)) throw DomainError("energy: need N > 2 sqrt(d)");
    if (re > d + 1.0 && !(N > 2.0 * sd + std::sqrt((re - 2.0) * T / (2.0 * alpha)) / a))
        throw DomainError("energy: N below the remainder-bound threshold");
    double sum = 0.0;
    for (int p = 1; p <= d; ++p) {
        double asum = 0.0;
        for (const auto& sc : subset_coefficients(g, p)) asum += sc.product;
        sum += std::max(std::pow(a, re - p - 1.0), std::pow(A, re - p - 1.0)) / std::pow(std::numbers::pi, 0.5 * p) *
               asum * h_bound(p, N, alpha, a * a / T, 0.5 * (p + 1.0 - re), re - p - 1.0);
    }
    return inflate(std::pow(kappa, re) / std::ldexp(1.0, d + 1) * std::abs(rgamma(0.5 * (u - 1.0))) * sum);
}

inline EnergyParts energy_parts(const BoxGeometry& g, const TruncationParams& tp, cplx u = 0.0, double kappa = 1.0) {
    tp.validate();
    const int d = g.dim();
    if (detail::is_integer_in(u, 1, d + 1)) throw PoleError("energy: pole at u = " + std::to_string(int(u.real())));
    const cplx a = 0.5 * (u - 1.0);
    const cplx rg = rgamma(a), kp = detail::kappa_pow(kappa, u);
    const double T = tp.T;

    CompensatedSum<cplx> sup;
    for_each_in_shell(d, ShellKind::PositiveOrthant, tp.n_sup(), [&](const Index& n) {
        const double w2 = omega_sq(n, g);
        sup += std::exp(-a * std::log(w2)) * upper_gamma(a, w2 * T);
    });
    // omega^{1-u} = (omega^2)^{-a}
    EnergyParts out;
    out.sup = {0.5 * kp * rg * sup.value(),
               bound_over_alpha(tp, [&](double al) { return energy_sup_radius(g, T, tp.n_sup(), al, u, kappa); })};

    CompensatedSum<cplx> inf;
    for (int p = 0; p <= d; ++p) {
        const double sign = (d - p) % 2 == 0 ? 1.0 : -1.0;
        const cplx q = 0.5 * (u - double(p) - 1.0);
        for (const auto& sc : subset_coefficients(g, p)) {
            CompensatedSum<cplx> lat;
            for_each_in_shell(p, ShellKind::FullLattice, tp.n_inf(), [&](const Index& h) {
                double B = 0.0;
                for (int i = 0; i < p; ++i) {
                    double t = g.side(sc.sides[i]) * h[i];
                    B += t * t;
                }
                if (B / T > 745.0) return;
                lat += p_func(q, B / T);
            });
            inf += sign * sc.product / std::pow(std::numbers::pi * T, 0.5 * p) * lat.value();
        }
    }
    const cplx pref = kp * std::exp(a * std::log(T)) / std::ldexp(1.0, d + 1) * rg;
    const double rad = bound_over_alpha(tp, [&](double al) { return energy_inf_radius(g, T, tp.n_inf(), al, u, kappa); });
    out.inf = rad < 0.0 ? CertifiedValue::unavailable(pref * inf.value()) : CertifiedValue{pref * inf.value(), rad};
    return out;
}

inline CertifiedValue energy_ren(const BoxGeometry& g, const TruncationParams& tp, cplx u = 0.0, double kappa = 1.0) {
    return energy_parts(g, tp, u, kappa).total();
}

// ---- integrated force ------------------------------------------------------

namespace detail {

// Geometry with axis p moved to position 0; the others keep their order.
inline BoxGeometry axis_first(const BoxGeometry& g, int p) {
    std::vector<double> s{g.side(p)};
    for (int i = 0; i < g.dim(); ++i)
        if (i != p) s.push_back(g.side(i));
    return BoxGeometry(std::move(s));
}

} // namespace detail

inline double force_sup_radius(const BoxGeometry& g, double T, double N, double alpha, cplx u, double kappa = 1.0) {
    const int d = g.dim();
    const double a = g.min_side(), A = g.max_side(), a1 = g.side(0), re = u.real(), pi = std::numbers::pi;
    const double H = h_bound(d, N, alpha, pi * pi * T / (A * A), 0.5 * (re + 1.0), 1.0 - re);
    return inflate(std::pow(kappa, re) * std::pow(pi, 1.0 - re) * std::max(std::pow(a, re + 1.0), std::pow(A, re + 1.0)) /
                   (std::ldexp(1.0, d + 1) * a1 * a1 * a1) * std::abs(rgamma(0.5 * (u + 1.0))) * H);
}

inline double force_inf_radius(const BoxGeometry& g, double T, double N, double alpha, cplx u, double kappa = 1.0) {
    const int d = g.dim();
    const double a = g.min_side(), A = g.max_side(), a1 = g.side(0), re = u.real(), sd = std::sqrt(double(d));
    if (re > 2.0 && re <= d + 1.0) return -1.0;
    if (!(N > 2.0 * sd)) throw DomainError("force: need N > 2 sqrt(d)");
    if (re > d + 1.0 && !(N > 2.0 * sd + std::sqrt((re - 2.0) * T / (2.0 * alpha)) / a))
        throw DomainError("force: N below the remainder-bound threshold");
    double sum = 0.0;
    for (int p = 1; p <= d; ++p) {
        double asum = 0.0;
        for (const auto& sc : subset_coefficients(g, p))
            if (sc.sides[0] == 0) asum += sc.product / a1;
        const double h3 = h_bound(p, N, alpha, a * a / T, 0.5 * (p + 3.0 - re), re - p - 1.0);
        const double h1 = h_bound(p, N, alpha, a * a / T, 0.5 * (p + 1.0 - re), re - p - 1.0);
        sum += asum / std::pow(std::numbers::pi, 0.5 * p) *
               (a1 * a1 * std::max(std::pow(a, re - p - 3.0), std::pow(A, re - p - 3.0)) * h3 +
                0.5 * std::max(std::pow(a, re - p - 1.0), std::pow(A, re - p - 1.0)) * h1);
    }
    return inflate(std::pow(kappa, re) / std::ldexp(1.0, d + 1) * std::abs(rgamma(0.5 * (u + 1.0))) * sum);
}

struct ForceParts {
    CertifiedValue sup, inf;
    CertifiedValue total() const { return sup + inf; }
};

// Outward-normal component of the integrated force on side (p, lambda); equals
// -dE/da_p. Both sides of an axis carry the same value by reflection symmetry.
inline ForceParts force_parts(const SideId& side, const BoxGeometry& g0, const TruncationParams& tp, cplx u = 0.0,
                              double kappa = 1.0) {
    tp.validate();
    detail::check_side(side, g0);
    const BoxGeometry g = detail::axis_first(g0, side.axis);
    const int d = g.dim();
    if (detail::is_integer_in(u, 2, d + 1)) throw PoleError("force: pole at u = " + std::to_string(int(u.real())));
    const double a1 = g.side(0), T = tp.T, pi = std::numbers::pi;
    const cplx a = 0.5 * (u + 1.0);
    const cplx rg = rgamma(a), kp = detail::kappa_pow(kappa, u);

    CompensatedSum<cplx> sup;
    for_each_in_shell(d, ShellKind::PositiveOrthant, tp.n_sup(), [&](const Index& n) {
        const double w2 = omega_sq(n, g);
        const double k1 = n[0] * pi / a1;
        sup += k1 * k1 * std::exp(-a * std::log(w2)) * upper_gamma(a, w2 * T);
    });
    ForceParts out;
    out.sup = {kp / (2.0 * a1) * rg * sup.value(),
               bound_over_alpha(tp, [&](double al) { return force_sup_radius(g, T, tp.n_sup(), al, u, kappa); })};

    CompensatedSum<cplx> inf;
    for (int p = 1; p <= d; ++p) {
        const double sign = (d - p) % 2 == 0 ? 1.0 : -1.0;
        const cplx q3 = 0.5 * (u - double(p) - 3.0), q1 = 0.5 * (u - double(p) - 1.0);
        for (const auto& sc : subset_coefficients(g, p)) {
            if (sc.sides[0] != 0) continue;
            CompensatedSum<cplx> lat;
            for_each_in_shell(p, ShellKind::FullLattice, tp.n_inf(), [&](const Index& h) {
                double B = 0.0;
                for (int i = 0; i < p; ++i) {
                    double t = g.side(sc.sides[i]) * h[i];
                    B += t * t;
                }
                if (B / T > 745.0) return;
                const double t1 = a1 * h[0];
                cplx term = -0.5 * T * p_func(q1, B / T);
                if (t1 != 0.0) term += t1 * t1 * p_func(q3, B / T);
                lat += term;
            });
            inf += sign * (sc.product / a1) / std::pow(pi * T, 0.5 * p) * lat.value();
        }
    }
    const cplx pref = -kp * std::exp(0.5 * (u - 3.0) * std::log(T)) / std::ldexp(1.0, d + 1) * rg;
    const double rad = bound_over_alpha(tp, [&](double al) { return force_inf_radius(g, T, tp.n_inf(), al, u, kappa); });
    out.inf = rad < 0.0 ? CertifiedValue::unavailable(pref * inf.value()) : CertifiedValue{pref * inf.value(), rad};
    return out;
}

inline CertifiedValue force_ren(const SideId& side, const BoxGeometry& g, const TruncationParams& tp, cplx u = 0.0,
                                double kappa = 1.0) {
    return force_parts(side, g, tp, u, kappa).total();
}

// Integral of the renormalized normal pressure over the side with a band of
// width eps removed along its edges. Diverges as eps -> 0 when d >= 2.
inline CertifiedValue force_alt_cutoff(const SideId& side, const BoxGeometry& g, const TruncationParams& tp, double eps,
                                       int order = 20) {
    detail::check_side(side, g);
    const int d = g.dim();
    std::vector<int> axes;
    for (int i = 0; i < d; ++i)
        if (i != side.axis) axes.push_back(i);
    const double n = detail::outer_normal(side);
    Point xb(d, 0.0);
    xb[side.axis] = side.lambda * g.side(side.axis);
    if (axes.empty()) return n * pressure(side, xb, g, tp)[side.axis];
    for (int i : axes)
        if (!(eps > 0.0 && 2.0 * eps < g.side(i))) throw DomainError("force_alt_cutoff: eps out of range");

    const GaussRule rule = gauss_legendre(order);
    // 1-D node lists per tangential axis
    std::vector<std::vector<std::pair<double, double>>> nodes;
    for (int i : axes) {
        std::vector<std::pair<double, double>> nw;
        for (auto [lo, hi] : graded_panels(eps, g.side(i) - eps, eps)) {
            const double hw = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
            for (int k = 0; k < order; ++k) nw.emplace_back(mid + hw * rule.nodes[k], hw * rule.weights[k]);
        }
        nodes.push_back(std::move(nw));
    }
    CertifiedValue acc{0.0, 0.0};
    std::vector<size_t> it(axes.size(), 0);
    while (true) {
        double w = 1.0;
        for (size_t k = 0; k < axes.size(); ++k) {
            xb[axes[k]] = nodes[k][it[k]].first;
            w *= nodes[k][it[k]].second;
        }
        acc += (w * n) * pressure(side, xb, g, tp)[side.axis];
        size_t k = 0;
        while (k < axes.size() && ++it[k] == nodes[k].size()) it[k++] = 0;
        if (k == axes.size()) break;
    }
    return acc;
}


enum class ResultKind { Tensor, Pressure, Energy, Force };

namespace detail {

// Smallest integer N above 2 sqrt(d) with bound(N) <= target; bounds that are
// not yet valid at a given N (DomainError) count as failures.
template <class F>
double smallest_radius(int d, double target, F&& bound) {
    for (int N = static_cast<int>(std::floor(2.0 * std::sqrt(double(d)))) + 1; N <= 5000; ++N) {
        try {
            double r = bound(double(N));
            if (r >= 0.0 && r <= target) return N;
            if (r < 0.0) return N; // no bound available at this u: any N
        } catch (const DomainError&) {
        }
    }
    throw DomainError("auto truncation: tolerance not reachable with N <= 5000");
}

} // namespace detail

// Picks the smallest N (large-t sums) and N_inf (image sums) whose remainder
// bounds each stay below tol/2. T, alpha and alpha_search are taken from base.
inline TruncationParams auto_truncation(ResultKind kind, const BoxGeometry& g, double tol, TruncationParams base,
                                        SideId side = {}, cplx u = 0.0) {
    if (!(tol > 0.0)) throw DomainError("auto truncation: tolerance must be positive");
    const int d = g.dim();
    const double half = 0.5 * tol;
    TruncationParams tp = base;
    auto with_n = [&](double N) {
        TruncationParams t = base;
        t.N = N;
        t.N_inf = N;
        return t;
    };
    switch (kind) {
    case ResultKind::Energy:
        tp.N = detail::smallest_radius(d, half, [&](double N) {
            return bound_over_alpha(base, [&](double al) { return energy_sup_radius(g, base.T, N, al, u); });
        });
        tp.N_inf = detail::smallest_radius(d, half, [&](double N) {
            return bound_over_alpha(base, [&](double al) { return energy_inf_radius(g, base.T, N, al, u); });
        });
        break;
    case ResultKind::Force: {
        const BoxGeometry gp = detail::axis_first(g, side.axis);
        tp.N = detail::smallest_radius(d, half, [&](double N) {
            return bound_over_alpha(base, [&](double al) { return force_sup_radius(gp, base.T, N, al, u); });
        });
        tp.N_inf = detail::smallest_radius(d, half, [&](double N) {
            return bound_over_alpha(base, [&](double al) { return force_inf_radius(gp, base.T, N, al, u); });
        });
        break;
    }
    case ResultKind::Tensor:
    case ResultKind::Pressure: {
        // every component is a combination with coefficient sum at most d + 3
        const double w = kind == ResultKind::Tensor ? d + 3.0 : 0.25;
        const cplx sm = 0.5 * (u - 1.0), sp = 0.5 * (u + 1.0);
        tp.N = detail::smallest_radius(d, half, [&](double N) {
            TruncationParams t = with_n(N);
            double r = d_sup_deriv_radius(sp, g, t);
            if (kind == ResultKind::Tensor) r = std::max(r, d_sup_radius(sm, g, t));
            return w * r;
        });
        tp.N_inf = detail::smallest_radius(d, half, [&](double N) {
            TruncationParams t = with_n(N);
            double r = d_inf_deriv_radius(sp, true, g, t);
            if (kind == ResultKind::Tensor) r = std::max({r, d_inf_radius(sm, g, t), d_inf_deriv_radius(sp, false, g, t)});
            return w * r;
        });
        break;
    }
    }
    return tp;
}

// Factor multiplying an observable when every side length is scaled by lambda.
inline double rescale(ResultKind kind, const BoxGeometry& g, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("rescale: lambda must be positive");
    switch (kind) {
    case ResultKind::Tensor:
    case ResultKind::Pressure: return std::pow(lambda, -(g.dim() + 1.0));
    case ResultKind::Energy: return 1.0 / lambda;
    case ResultKind::Force: return 1.0 / (lambda * lambda);
    }
    return 1.0;
}

} // namespace casbox
