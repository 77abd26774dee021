#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "certified.hpp"
#include "errors.hpp"
#include "observables.hpp"

namespace casbox {

enum class ScanKind { Energy, Force };

inline const char* to_string(ScanKind k) { return k == ScanKind::Energy ? "energy" : "force"; }

// A box with one free side length. With tol > 0 the truncation is chosen from
// the remainder bounds; otherwise tp is used as given.
struct ScanSetup {
    BoxGeometry base{std::vector<double>{1.0, 1.0}};
    int free_axis = 1;
    SideId side{0, 0};
    TruncationParams tp{1.0, 50.0, 0.04};
    double tol = 0.0;

    BoxGeometry at(double a) const {
        std::vector<double> s = base.sides();
        s.at(free_axis) = a;
        return BoxGeometry(std::move(s));
    }

    TruncationParams truncation_at(ScanKind kind, double a) const {
        if (tol <= 0.0) return tp;
        return auto_truncation(kind == ScanKind::Energy ? ResultKind::Energy : ResultKind::Force, at(a), tol, tp, side);
    }

    CertifiedValue eval(ScanKind kind, double a, const TruncationParams& t) const {
        return kind == ScanKind::Energy ? energy_ren(at(a), t) : force_ren(side, at(a), t);
    }

    CertifiedValue eval(ScanKind kind, double a) const { return eval(kind, a, truncation_at(kind, a)); }

    // One truncation valid (bound-wise) across [lo, hi]: the larger radii of the endpoints.
    TruncationParams truncation_over(ScanKind kind, double lo, double hi) const {
        if (tol <= 0.0) return tp;
        TruncationParams a = truncation_at(kind, lo), b = truncation_at(kind, hi);
        a.N = std::max(a.N, b.N);
        a.N_inf = std::max(a.n_inf(), b.n_inf());
        return a;
    }
};

struct ScanResult {
    ScanKind kind = ScanKind::Energy;
    std::vector<double> abscissas;
    std::vector<CertifiedValue> values;
};

inline std::vector<double> make_grid(double lo, double hi, int count, bool log_spacing) {
    if (!(lo > 0.0 && lo < hi)) throw DomainError("grid: need 0 < lo < hi");
    if (count < 2) throw DomainError("grid: need count >= 2");
    std::vector<double> x(count);
    for (int i = 0; i < count; ++i) {
        double t = double(i) / (count - 1);
        x[i] = log_spacing ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    }
    x.front() = lo;
    x.back() = hi;
    return x;
}

inline ScanResult scan(ScanKind kind, const ScanSetup& setup, double lo, double hi, int count, bool log_spacing = false) {
    ScanResult r;
    r.kind = kind;
    r.abscissas = make_grid(lo, hi, count, log_spacing);
    for (double a : r.abscissas) r.values.push_back(setup.eval(kind, a));
    return r;
}

struct Extremum {
    CertifiedValue location; // midpoint of the final golden-section interval, radius = half width
    CertifiedValue value;
    bool is_max = true;
};

// Golden-section search on [lo, hi]; the bracket must show a sign change of the
// numerical derivative. The truncation is fixed across the search so the
// objective is one smooth function.
inline Extremum find_extremum(ScanKind kind, const ScanSetup& setup, double lo, double hi, double tol = 1e-6) {
    if (!(lo < hi)) throw BracketError("extremum: need lo < hi");
    const TruncationParams tp = setup.truncation_over(kind, lo, hi);
    auto f = [&](double a) { return setup.eval(kind, a, tp).re(); };
    const double h = 1e-4 * (hi - lo);
    const double dlo = (f(lo + h) - f(lo)) / h, dhi = (f(hi) - f(hi - h)) / h;
    if (!(dlo * dhi < 0.0)) throw BracketError("extremum: no sign change of the derivative across the bracket");
    const bool is_max = dlo > 0.0;
    auto obj = [&](double a) { return is_max ? -f(a) : f(a); };

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = obj(c), fd = obj(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = obj(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {{x, 0.5 * (b - a)}, setup.eval(kind, x, tp), is_max};
}

// Bisection on a certified sign change. Stops early (returning the current
// bracket) if the sign at a midpoint cannot be decided within its radius.
inline CertifiedValue find_zero(ScanKind kind, const ScanSetup& setup, double lo, double hi, double tol = 1e-6) {
    if (!(lo < hi)) throw BracketError("zero: need lo < hi");
    const TruncationParams tp = setup.truncation_over(kind, lo, hi);
    CertifiedValue flo = setup.eval(kind, lo, tp), fhi = setup.eval(kind, hi, tp);
    auto sign = [](const CertifiedValue& v) { return std::abs(v.re()) > v.radius ? (v.re() > 0 ? 1 : -1) : 0; };
    const int slo = sign(flo), shi = sign(fhi);
    if (slo == 0 || shi == 0 || slo == shi) throw BracketError("zero: endpoints lack certified opposite signs");
    double a = lo, b = hi;
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const int sm = sign(setup.eval(kind, m, tp));
        if (sm == 0) break;
        (sm == slo ? a : b) = m;
    }
    return {0.5 * (a + b), 0.5 * (b - a)};
}

struct FitResult {
    std::vector<double> coef; // coef[k] multiplies the k-th basis function
    double rms = 0.0;         // root-mean-square residual
};

namespace detail {

inline FitResult least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() < X.cols()) throw FitError("fit: fewer samples than parameters");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-12 * sv(0)) throw FitError("fit: design matrix is ill-conditioned");
    Eigen::VectorXd c = svd.solve(y);
    FitResult r;
    r.coef.assign(c.data(), c.data() + c.size());
    r.rms = std::sqrt((X * c - y).squaredNorm() / double(y.size()));
    return r;
}

} // namespace detail

// Leading small-a behaviour value ~ c / a^2. Fits a^2 * value to a polynomial
// of the given degree in a and returns it; coef[0] is c. degree = 0 is the
// plain c / a^2 least-squares fit.
inline FitResult fit_small_a2(const std::vector<std::pair<double, double>>& samples, int degree = 1) {
    if (degree < 0) throw FitError("fit: negative degree");
    const int n = static_cast<int>(samples.size());
    Eigen::MatrixXd X(n, degree + 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double a = samples[i].first;
        if (!(a > 0.0 && a <= 0.2)) throw FitError("fit: small-a samples must lie in (0, 0.2]");
        if (degree == 0) {
            // weighted so that the residual is in value units: min sum (v - c/a^2)^2
            X(i, 0) = 1.0 / (a * a);
            y(i) = samples[i].second;
            continue;
        }
        for (int k = 0; k <= degree; ++k) X(i, k) = std::pow(a, k);
        y(i) = a * a * samples[i].second;
    }
    return detail::least_squares(X, y);
}

struct AsymptoteFit {
    double m = 0.0, q = 0.0;
    double rms = 0.0;
};

// Straight-line fit value ~ m a + q on the tail.
inline AsymptoteFit fit_asymptote(const std::vector<std::pair<double, double>>& samples, double min_abscissa = 20.0) {
    const int n = static_cast<int>(samples.size());
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        if (!(samples[i].first >= min_abscissa)) throw FitError("fit: tail samples must satisfy a >= " + std::to_string(min_abscissa));
        X(i, 0) = samples[i].first;
        X(i, 1) = 1.0;
        y(i) = samples[i].second;
    }
    FitResult r = detail::least_squares(X, y);
    return {r.coef[0], r.coef[1], r.rms};
}

} // namespace casbox
