#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "certified.hpp"
#include "geometry.hpp"
#include "specfun.hpp"
#include "summation.hpp"

namespace casbox {

struct TruncationParams {
    double T = 1.0;
    double N = 5.0;
    double alpha = 0.04;
    double N_inf = 0.0; // radius for the image (small-t) sums; 0 means "same as N"
    bool alpha_search = false; // minimize each bound over a grid of alpha values

    double n_sup() const { return N; }
    double n_inf() const { return N_inf > 0.0 ? N_inf : N; }

    static double default_alpha(int d) { return d == 1 ? 0.03 : 0.04; }

    void validate() const {
        if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("truncation: T must be positive");
        if (!(N > 0.0) || !std::isfinite(N)) throw DomainError("truncation: N must be positive");
        if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("truncation: alpha must lie in (0,1)");
        if (N_inf < 0.0 || !std::isfinite(N_inf)) throw DomainError("truncation: N_inf must be >= 0");
    }
};

// Evaluates a remainder bound as a function of alpha; with alpha_search the
// smallest valid value over {0.01, ..., 0.20} and tp.alpha is returned.
template <class F>
double bound_over_alpha(const TruncationParams& tp, F&& f) {
    if (!tp.alpha_search) return f(tp.alpha);
    double best = std::numeric_limits<double>::infinity();
    std::string why;
    bool any = false;
    for (int k = 0; k <= 20; ++k) {
        const double al = k == 0 ? tp.alpha : 0.01 * k;
        try {
            best = std::min(best, f(al));
            any = true;
        } catch (const DomainError& e) {
            why = e.what();
        }
    }
    if (!any) throw DomainError(why);
    return best;
}

enum class Var { X, Y };

struct Partial {
    Var point = Var::X;
    int axis = 0; // zero-based
};

struct DerivSelector {
    Partial first;
    Partial second;
};

inline DerivSelector dxy(int i, int j) { return {{Var::X, i}, {Var::Y, j}}; }
inline DerivSelector dxx(int i, int j) { return {{Var::X, i}, {Var::X, j}}; }

// Tail bound H_N^(d)(alpha, beta; sigma, rho) for lattice sums past radius N.
inline double h_bound(int d, double N, double alpha, double beta, double sigma, double rho) {
    const double sd = std::sqrt(double(d));
    if (!(N > 2.0 * sd)) throw DomainError("h_bound: need N > 2 sqrt(d)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("h_bound: alpha must lie in (0,1)");
    if (!(beta > 0.0)) throw DomainError("h_bound: beta must be positive");
    if (rho > 0.0 && !(N > 2.0 * sd + std::sqrt(rho / (2.0 * alpha * beta))))
        throw DomainError("h_bound: need N > 2 sqrt(d) + sqrt(rho/(2 alpha beta))");
    const double k = 0.5 * (d + rho);
    const double g1 = upper_gamma(sigma, (1.0 - alpha) * beta * N * N).real();
    const double g2 = upper_gamma(k, alpha * beta * (N - 2.0 * sd) * (N - 2.0 * sd)).real();
    if (g1 == 0.0 || g2 == 0.0) return 0.0;
    const double logpref = 0.5 * d * std::log(std::numbers::pi) - sigma * std::log1p(-alpha) -
                           k * std::log(alpha * beta) - std::lgamma(0.5 * d) +
                           (d - 1) * std::log((N - sd) / (N - 2.0 * sd));
    return std::exp(logpref) * g1 * g2;
}

// Leading large-N behaviour of h_bound.
inline double h_asymptotic(int d, double N, double alpha, double beta, double sigma, double rho) {
    const double sd = std::sqrt(double(d));
    double lg = 0.5 * d * std::log(std::numbers::pi) + (sigma - 2.0) * std::log(beta) - 4.0 * alpha * beta * d -
                std::log(alpha * (1.0 - alpha)) - std::lgamma(0.5 * d) - beta * N * (N - 4.0 * alpha * sd) +
                (2.0 * sigma + rho + d - 4.0) * std::log(N);
    return std::exp(lg);
}

inline double c_const(const BoxGeometry& g, double sigma, double N) {
    const double sd = std::sqrt(double(g.dim()));
    if (!(N > sd)) throw DomainError("c_const: need N > sqrt(d)");
    return std::max(std::pow(g.min_side() * (1.0 - sd / N), 2.0 * sigma),
                    std::pow(g.max_side() * (1.0 + sd / N), 2.0 * sigma));
}

namespace detail {

inline void check_points(const Point& x, const Point& y, const BoxGeometry& g) {
    if (!g.contains_closed(x) || !g.contains_closed(y))
        throw DomainError("kernel: points must lie in the closed box");
}

inline void check_selector(const DerivSelector& sel, int d) {
    if (sel.first.axis < 0 || sel.first.axis >= d || sel.second.axis < 0 || sel.second.axis >= d)
        throw DomainError("derivative selector axis out of range");
}

// d^k/dt^k sin(q t) for k = 0, 1, 2.
inline double dsin(int k, double q, double t) {
    switch (k) {
    case 0: return std::sin(q * t);
    case 1: return q * std::cos(q * t);
    default: return -q * q * std::sin(q * t);
    }
}

inline double c_n_deriv(const Index& n, const Point& x, const Point& y, const BoxGeometry& g,
                        const DerivSelector& sel) {
    double c = 1.0;
    for (int i = 0; i < g.dim(); ++i) {
        int ox = 0, oy = 0;
        for (const Partial& p : {sel.first, sel.second})
            if (p.axis == i) (p.point == Var::X ? ox : oy)++;
        double q = n[i] * std::numbers::pi / g.side(i);
        c *= dsin(ox, q, x[i]) * dsin(oy, q, y[i]);
        if (c == 0.0) break;
    }
    return c;
}

// dU/dz for the axis of z: 1/(2a) for x, -delta_l/(2a) for y.
inline double du(const Partial& p, int l, double a) {
    if (p.point == Var::X) return 0.5 / a;
    return (l == 1 ? -0.5 : 0.5) / a;
}

inline double db(const Partial& p, const ImageIndex& idx, const Point& x, const Point& y, const BoxGeometry& g) {
    const int j = p.axis;
    const double a = g.side(j);
    return -2.0 * a * a * (idx.h[j] - u_l(idx.l[j], x[j], y[j], a)) * du(p, idx.l[j], a);
}

inline double ddb(const DerivSelector& sel, const ImageIndex& idx, const BoxGeometry& g) {
    if (sel.first.axis != sel.second.axis) return 0.0;
    const int j = sel.first.axis;
    const double a = g.side(j);
    return 2.0 * a * a * du(sel.first, idx.l[j], a) * du(sel.second, idx.l[j], a);
}

// Visits (h, l) with |h| <= N, l in {1,2}^d; callback gets the index and delta_l.
template <class F>
void for_each_image(int d, double N, F&& f) {
    ImageIndex idx{Index(d), Index(d)};
    for_each_in_shell(d, ShellKind::FullLattice, N, [&](const Index& h) {
        idx.h = h;
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            for (int i = 0; i < d; ++i) idx.l[i] = (mask >> i) & 1u ? 2 : 1;
            f(static_cast<const ImageIndex&>(idx), delta_l(idx.l));
        }
    });
}

inline bool on_diagonal(const Point& x, const Point& y) { return x == y; }

} // namespace detail

// Remainder bounds. Each depends only on the geometry, s and the truncation,
// never on the evaluation point, so they can be used to pick N before summing.

inline double d_sup_radius(cplx s, const BoxGeometry& g, const TruncationParams& tp) {
    const int d = g.dim();
    const double a = g.min_side(), A = g.max_side(), res = s.real(), pi = std::numbers::pi;
    const double H = bound_over_alpha(
        tp, [&](double al) { return h_bound(d, tp.n_sup(), al, pi * pi * tp.T / (A * A), res, -2.0 * res); });
    return inflate(std::max(std::pow(a, 2 * res), std::pow(A, 2 * res)) / (g.volume() * std::pow(pi, 2 * res)) *
                   std::abs(rgamma(s)) * H);
}

inline double d_sup_deriv_radius(cplx s, const BoxGeometry& g, const TruncationParams& tp) {
    const int d = g.dim();
    const double a = g.min_side(), A = g.max_side(), res = s.real(), pi = std::numbers::pi;
    const double H = bound_over_alpha(
        tp, [&](double al) { return h_bound(d, tp.n_sup(), al, pi * pi * tp.T / (A * A), res, 2.0 * (1.0 - res)); });
    return inflate(std::max(std::pow(a, 2 * res), std::pow(A, 2 * res)) /
                   (g.volume() * a * a * std::pow(pi, 2 * (res - 1.0))) * std::abs(rgamma(s)) * H);
}

inline double d_inf_radius(cplx s, const BoxGeometry& g, const TruncationParams& tp) {
    const int d = g.dim();
    const double N = tp.n_inf(), sd = std::sqrt(double(d)), a = g.min_side(), res = s.real(), T = tp.T;
    if (!(N > 2.0 * sd)) throw DomainError("d_inf: need N > 2 sqrt(d)");
    const double beta = a * a * (1.0 - sd / N) * (1.0 - sd / N) / T;
    const double H = bound_over_alpha(tp, [&](double al) {
        if (res > 0.5 * d && !(N > 3.0 * sd + std::sqrt((res - 0.5 * d) * T / al) / a))
            throw DomainError("d_inf: N below the remainder-bound threshold");
        return h_bound(d, N, al, beta, 0.5 * d - res, 2.0 * res - d);
    });
    return inflate(c_const(g, res - 0.5 * d, N) / std::pow(std::numbers::pi, 0.5 * d) * std::abs(rgamma(s)) * H);
}

inline double d_inf_deriv_radius(cplx s, bool same_axis, const BoxGeometry& g, const TruncationParams& tp) {
    const int d = g.dim();
    const double N = tp.n_inf(), sd = std::sqrt(double(d));
    const double a = g.min_side(), A = g.max_side(), res = s.real(), T = tp.T;
    if (!(N > 2.0 * sd)) throw DomainError("d_inf_deriv: need N > 2 sqrt(d)");
    const double beta = a * a * (1.0 - sd / N) * (1.0 - sd / N) / T;
    const double bound = bound_over_alpha(tp, [&](double al) {
        if (res > 0.5 * d + 1.0 && !(N > 3.0 * sd + std::sqrt((res - 0.5 * d - 1.0) * T / al) / a))
            throw DomainError("d_inf_deriv: N below the remainder-bound threshold");
        double r = (1.0 + sd / N) * (1.0 + sd / N) * A * A * c_const(g, res - 0.5 * d - 2.0, N) *
                   h_bound(d, N, al, beta, 0.5 * d + 2.0 - res, 2.0 * res - d - 2.0);
        if (same_axis)
            r += 0.5 * c_const(g, res - 0.5 * d - 1.0, N) * h_bound(d, N, al, beta, 0.5 * d + 1.0 - res, 2.0 * res - d - 2.0);
        return r;
    });
    return inflate(bound / std::pow(std::numbers::pi, 0.5 * d) * std::abs(rgamma(s)));
}

// Large-t part D^(>)_s of the Dirichlet kernel, truncated at |n| <= N.
inline CertifiedValue d_sup(cplx s, const Point& x, const Point& y, const BoxGeometry& g, const TruncationParams& tp) {
    tp.validate();
    detail::check_points(x, y, g);
    const double rad = d_sup_radius(s, g, tp);
    CompensatedSum<cplx> acc;
    for_each_in_shell(g.dim(), ShellKind::PositiveOrthant, tp.n_sup(), [&](const Index& n) {
        double c = c_n(n, x, y, g);
        if (c == 0.0) return;
        double w2 = omega_sq(n, g);
        acc += std::exp(-s * std::log(w2)) * upper_gamma(s, w2 * tp.T) * c;
    });
    return {std::ldexp(1.0, g.dim()) / g.volume() * rgamma(s) * acc.value(), rad};
}

inline CertifiedValue d_sup_deriv(cplx s, const DerivSelector& sel, const Point& x, const Point& y, const BoxGeometry& g,
                                  const TruncationParams& tp) {
    tp.validate();
    detail::check_points(x, y, g);
    detail::check_selector(sel, g.dim());
    const double rad = d_sup_deriv_radius(s, g, tp);
    CompensatedSum<cplx> acc;
    for_each_in_shell(g.dim(), ShellKind::PositiveOrthant, tp.n_sup(), [&](const Index& n) {
        double c = detail::c_n_deriv(n, x, y, g, sel);
        if (c == 0.0) return;
        double w2 = omega_sq(n, g);
        acc += std::exp(-s * std::log(w2)) * upper_gamma(s, w2 * tp.T) * c;
    });
    return {std::ldexp(1.0, g.dim()) / g.volume() * rgamma(s) * acc.value(), rad};
}

// Small-t part D^(<)_s, image sum truncated at |h| <= N_inf.
inline CertifiedValue d_inf(cplx s, const Point& x, const Point& y, const BoxGeometry& g, const TruncationParams& tp) {
    tp.validate();
    detail::check_points(x, y, g);
    const int d = g.dim();
    const double T = tp.T;
    const cplx q = s - 0.5 * d;
    if (detail::on_diagonal(x, y) && q == cplx(0.0)) throw PoleError("d_inf: pole at y = x, s = d/2");
    const double rad = d_inf_radius(s, g, tp);

    CompensatedSum<cplx> acc;
    detail::for_each_image(d, tp.n_inf(), [&](const ImageIndex& idx, int sign) {
        double b = classify_zero(idx, x, y, g) ? 0.0 : b_hl(idx, x, y, g);
        if (b / T > 745.0) return; // e^{-b/T} underflows
        acc += double(sign) * p_func(q, b / T);
    });
    const cplx pref = std::exp(q * std::log(T)) * std::pow(4.0 * std::numbers::pi, -0.5 * d) * rgamma(s);
    return {pref * acc.value(), rad};
}

inline CertifiedValue d_inf_deriv(cplx s, const DerivSelector& sel, const Point& x, const Point& y, const BoxGeometry& g,
                                  const TruncationParams& tp) {
    tp.validate();
    detail::check_points(x, y, g);
    const int d = g.dim();
    detail::check_selector(sel, d);
    const double T = tp.T;
    const cplx q = s - 0.5 * d;
    const bool same_axis = sel.first.axis == sel.second.axis;
    if (detail::on_diagonal(x, y) && same_axis && q == cplx(1.0))
        throw PoleError("d_inf_deriv: pole at y = x, s = d/2 + 1");
    const double rad = d_inf_deriv_radius(s, same_axis, g, tp);

    CompensatedSum<cplx> acc;
    detail::for_each_image(d, tp.n_inf(), [&](const ImageIndex& idx, int sign) {
        const double bzw = detail::ddb(sel, idx, g);
        if (classify_zero(idx, x, y, g)) {
            // both first derivatives of b vanish at a zero of b
            if (bzw != 0.0) acc += -double(sign) * T * bzw * p_func(q - 1.0, 0.0);
            return;
        }
        const double b = b_hl(idx, x, y, g);
        if (b / T > 745.0) return;
        const double bz = detail::db(sel.first, idx, x, y, g);
        const double bw = detail::db(sel.second, idx, x, y, g);
        cplx term = 0.0;
        if (bz * bw != 0.0) term += bz * bw * p_func(q - 2.0, b / T);
        if (bzw != 0.0) term -= T * bzw * p_func(q - 1.0, b / T);
        acc += double(sign) * term;
    });
    const cplx pref = std::exp((q - 2.0) * std::log(T)) * std::pow(4.0 * std::numbers::pi, -0.5 * d) * rgamma(s);
    return {pref * acc.value(), rad};
}

} // namespace casbox
