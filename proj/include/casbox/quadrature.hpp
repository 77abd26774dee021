#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace casbox {

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
    GaussRule r{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return r;
}

// Panels on [lo, hi] refined geometrically toward both ends (ratio 2, down to
// a width comparable with the distance to the end), for integrands that grow
// like a power near the endpoints.
inline std::vector<std::pair<double, double>> graded_panels(double lo, double hi, double first) {
    std::vector<double> cuts{lo};
    const double mid = 0.5 * (lo + hi);
    for (double w = first; lo + w < mid; w *= 2.0) cuts.push_back(lo + w);
    std::vector<double> right;
    for (double w = first; hi - w > mid; w *= 2.0) right.push_back(hi - w);
    cuts.push_back(mid);
    for (auto it = right.rbegin(); it != right.rend(); ++it) cuts.push_back(*it);
    cuts.push_back(hi);
    std::vector<std::pair<double, double>> out;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) out.emplace_back(cuts[i], cuts[i + 1]);
    return out;
}

} // namespace casbox
