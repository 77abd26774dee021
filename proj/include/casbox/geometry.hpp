#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"

namespace casbox {

using Point = std::vector<double>;
using Index = std::vector<int>;

class BoxGeometry {
public:
    BoxGeometry() = default;
    explicit BoxGeometry(std::vector<double> sides) : sides_(std::move(sides)) {
        if (sides_.empty()) throw DomainError("box: dimension must be >= 1");
        for (double s : sides_)
            if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("box: side lengths must be positive");
    }

    int dim() const { return static_cast<int>(sides_.size()); }
    double side(int i) const { return sides_[i]; }
    const std::vector<double>& sides() const { return sides_; }
    double min_side() const { return *std::min_element(sides_.begin(), sides_.end()); }
    double max_side() const { return *std::max_element(sides_.begin(), sides_.end()); }
    double volume() const { return std::accumulate(sides_.begin(), sides_.end(), 1.0, std::multiplies<>()); }

    BoxGeometry scaled(double lambda) const {
        std::vector<double> s = sides_;
        for (double& v : s) v *= lambda;
        return BoxGeometry(std::move(s));
    }

    bool contains_closed(const Point& x) const {
        if (static_cast<int>(x.size()) != dim()) return false;
        for (int i = 0; i < dim(); ++i)
            if (!(x[i] >= 0.0 && x[i] <= sides_[i])) return false;
        return true;
    }

    bool contains_open(const Point& x) const {
        if (static_cast<int>(x.size()) != dim()) return false;
        for (int i = 0; i < dim(); ++i)
            if (!(x[i] > 0.0 && x[i] < sides_[i])) return false;
        return true;
    }

private:
    std::vector<double> sides_;
};

// Side pi_{p,lambda}: the face x^p = lambda * a_p. Axis is zero-based here.
struct SideId {
    int axis = 0;
    int lambda = 0;
};

// Image index (h, l); l entries are 1 or 2.
struct ImageIndex {
    Index h;
    Index l;
};

inline int delta_l(const Index& l) {
    int sign = 1;
    for (int li : l)
        if (li == 2) sign = -sign;
    return sign;
}

inline double omega_sq(const Index& n, const BoxGeometry& g) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double w = 0.0;
    for (int i = 0; i < g.dim(); ++i) w += double(n[i]) * n[i] / (g.side(i) * g.side(i));
    return pi2 * w;
}

inline double c_n(const Index& n, const Point& x, const Point& y, const BoxGeometry& g) {
    double c = 1.0;
    for (int i = 0; i < g.dim(); ++i) {
        double k = n[i] * std::numbers::pi / g.side(i);
        c *= std::sin(k * x[i]) * std::sin(k * y[i]);
    }
    return c;
}

// U_1 = (x - y)/(2a), U_2 = (x + y)/(2a) along one axis.
inline double u_l(int l, double xi, double yi, double ai) {
    return (l == 1 ? xi - yi : xi + yi) / (2.0 * ai);
}

inline double b_hl(const ImageIndex& idx, const Point& x, const Point& y, const BoxGeometry& g) {
    double b = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
        double ai = g.side(i);
        double t = idx.h[i] - u_l(idx.l[i], x[i], y[i], ai);
        b += ai * ai * t * t;
    }
    return b;
}

// Structural test for b_hl(x,y) == 0, on exact coordinates.
inline bool classify_zero(const ImageIndex& idx, const Point& x, const Point& y, const BoxGeometry& g) {
    for (int i = 0; i < g.dim(); ++i) {
        int h = idx.h[i], l = idx.l[i];
        bool ok = (h == 0 && l == 1 && y[i] == x[i]) ||
                  (h == 0 && l == 2 && y[i] == x[i] && x[i] == 0.0) ||
                  (h == 1 && l == 2 && y[i] == x[i] && x[i] == g.side(i));
        if (!ok) return false;
    }
    return true;
}

enum class ShellKind { PositiveOrthant, FullLattice };

// Visits every integer tuple with Euclidean norm <= N in lexicographic order.
// The callback receives a reference to a reused buffer.
template <class F>
void for_each_in_shell(int d, ShellKind kind, double N, F&& f) {
    if (d < 0) return;
    const double N2 = N * N * (1.0 + 1e-15);
    Index t(d, 0);
    auto rec = [&](auto&& self, int i, double budget) -> void {
        if (i == d) {
            f(static_cast<const Index&>(t));
            return;
        }
        int hi = static_cast<int>(std::floor(std::sqrt(std::max(budget, 0.0)) + 1e-12));
        int start = kind == ShellKind::PositiveOrthant ? 1 : -hi;
        for (int v = start; v <= hi; ++v) {
            double rem = budget - double(v) * v;
            if (rem < -1e-12 * N2) continue;
            t[i] = v;
            self(self, i + 1, rem);
        }
    };
    rec(rec, 0, N2);
}

inline std::vector<Index> enumerate_shell(int d, ShellKind kind, double N) {
    std::vector<Index> out;
    if (!(N > 0.0)) throw DomainError("enumerate_shell: N must be positive");
    for_each_in_shell(d, kind, N, [&](const Index& t) { out.push_back(t); });
    return out;
}

struct SubsetCoefficient {
    double product;
    std::vector<int> sides; // zero-based axes, increasing
};

// All p-element subsets S of the axes with a_S = prod_{i in S} a_i, in lexicographic order.
inline std::vector<SubsetCoefficient> subset_coefficients(const BoxGeometry& g, int p) {
    const int d = g.dim();
    if (p < 0 || p > d) throw DomainError("subset_coefficients: p out of range");
    std::vector<SubsetCoefficient> out;
    std::vector<int> s(p);
    auto rec = [&](auto&& self, int pos, int from) -> void {
        if (pos == p) {
            double prod = 1.0;
            for (int i : s) prod *= g.side(i);
            out.push_back({prod, s});
            return;
        }
        for (int i = from; i <= d - (p - pos); ++i) {
            s[pos] = i;
            self(self, pos + 1, i + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

} // namespace casbox
