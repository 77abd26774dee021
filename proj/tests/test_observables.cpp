#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "casbox/observables.hpp"
#include "agree.hpp"
#include "oracles.hpp"

using namespace casbox;

namespace {

constexpr double pi = std::numbers::pi;

TruncationParams searched(double N, double alpha = 0.04) {
    TruncationParams tp{1.0, N, alpha};
    tp.alpha_search = true;
    return tp;
}

TEST(StressTensor, IntervalExactValues) {
    BoxGeometry g({1.0});
    TruncationParams tp{1.0, 5.0, 0.03};
    for (double x : {0.05, 0.25, 0.5, 0.8}) {
        auto t = stress_energy({x}, g, tp);
        EXPECT_NEAR(t.conformal[0][0].re(), -pi / 24.0, 1e-6);
        EXPECT_NEAR(t.conformal[1][1].re(), -pi / 24.0, 1e-6);
        EXPECT_NEAR(t.nonconformal[0][0].re(), pi / (2.0 * std::pow(std::sin(pi * x), 2)), 1e-6);
        EXPECT_LE(std::abs(t.nonconformal[1][1].re()), 4e-6);
        EXPECT_LE(std::abs(t.conformal[0][0].re() + pi / 24.0), t.conformal[0][0].radius + 1e-12);
    }
    auto q = stress_energy({0.25}, g, tp);
    EXPECT_NEAR(q.nonconformal[0][0].re(), pi, 1e-6);
}

TEST(StressTensor, MixedComponentsVanishExactly) {
    BoxGeometry g({1.0, 1.3});
    auto t = stress_energy({0.3, 0.4}, g, TruncationParams{1.0, 6.0, 0.04});
    for (int j = 1; j <= 2; ++j) {
        EXPECT_EQ(t.conformal[0][j].value, cplx(0.0));
        EXPECT_EQ(t.conformal[j][0].value, cplx(0.0));
        EXPECT_EQ(t.nonconformal[0][j].value, cplx(0.0));
    }
    EXPECT_EQ(t.conformal[1][2].value, t.conformal[2][1].value);
}

TEST(StressTensor, ConformalPartIsTraceless) {
    for (auto sides : {std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.5}, std::vector<double>{1.0, 1.5, 0.8}}) {
        BoxGeometry g(sides);
        const int d = g.dim();
        Point x(d);
        for (int i = 0; i < d; ++i) x[i] = 0.37 * sides[i];
        auto t = stress_energy(x, g, TruncationParams{1.0, 2.0 * std::sqrt(double(d)) + 5.0, 0.04});
        CertifiedValue tr = t.conformal[0][0];
        for (int i = 1; i <= d; ++i) tr -= t.conformal[i][i];
        EXPECT_LE(std::abs(tr.value), tr.radius + 1e-12);
    }
}

TEST(StressTensor, SquareSymmetry) {
    BoxGeometry g({1.0, 1.0});
    TruncationParams tp{1.0, 7.0, 0.04};
    auto a = stress_energy({0.3, 0.4}, g, tp), b = stress_energy({0.4, 0.3}, g, tp);
    EXPECT_NEAR(a.conformal[2][2].re(), b.conformal[1][1].re(), 1e-12);
    EXPECT_NEAR(a.nonconformal[2][2].re(), b.nonconformal[1][1].re(), 1e-12);
    EXPECT_NEAR(a.conformal[0][0].re(), b.conformal[0][0].re(), 1e-12);
}

TEST(StressTensor, ReflectionSymmetry) {
    // reflecting axis i flips the sign of T_0i and T_ij for j != i
    BoxGeometry g({1.0, 2.0});
    TruncationParams tp{1.0, 7.0, 0.04};
    auto a = stress_energy({0.3, 0.5}, g, tp);
    const std::vector<std::pair<Point, std::vector<double>>> images{
        {{0.7, 0.5}, {1.0, -1.0, 1.0}}, {{0.3, 1.5}, {1.0, 1.0, -1.0}}, {{0.7, 1.5}, {1.0, -1.0, -1.0}}};
    for (const auto& [y, sign] : images) {
        auto b = stress_energy(y, g, tp);
        for (int m = 0; m <= 2; ++m)
            for (int n = 0; n <= 2; ++n) {
                const double p = sign[m] * sign[n];
                EXPECT_TRUE(agree(p * a.conformal[m][n], b.conformal[m][n])) << m << n;
                EXPECT_TRUE(agree(p * a.nonconformal[m][n], b.nonconformal[m][n])) << m << n;
            }
    }
}

TEST(StressTensor, ScalingLaw) {
    TruncationParams tp{1.0, 8.0, 0.04};
    auto a = stress_energy({0.3, 0.4}, BoxGeometry({1.0, 1.0}), tp);
    auto b = stress_energy({0.6, 0.8}, BoxGeometry({2.0, 2.0}), tp);
    const double f = rescale(ResultKind::Tensor, BoxGeometry({1.0, 1.0}), 2.0);
    EXPECT_DOUBLE_EQ(f, 0.125);
    for (int m = 0; m <= 2; ++m)
        for (int n = 0; n <= 2; ++n) {
            CertifiedValue sa = f * a.conformal[m][n];
            EXPECT_TRUE(agree(sa, b.conformal[m][n])) << m << n;
        }
}

TEST(StressTensor, AgreesWithMellinOracle) {
    // rebuild T00 and T11 from oracle kernels: D_{-1/2} and derivatives of D_{1/2}
    std::vector<double> sides{1.0, 1.4};
    BoxGeometry g(sides);
    oracle::BoxHeat K{sides};
    Point x{0.31, 0.52};
    auto o = [&](int ox0, int oy0, int ox1, int oy1) { return oracle::Derivs{{ox0, ox1}, {oy0, oy1}}; };
    const double D = oracle::dirichlet(K, -0.5, x, x, oracle::Derivs::none(2));
    const double Dxy11 = oracle::dirichlet(K, 0.5, x, x, o(1, 1, 0, 0));
    const double Dxy22 = oracle::dirichlet(K, 0.5, x, x, o(0, 0, 1, 1));
    const double Dxx11 = oracle::dirichlet(K, 0.5, x, x, o(2, 0, 0, 0));
    const double xd = xi_critical(2);
    const double T00 = (0.25 + xd) * D + (0.25 - xd) * (Dxy11 + Dxy22);
    const double T11 = (0.25 - xd) * (D - Dxy11 - Dxy22) + (0.5 - xd) * Dxy11 - xd * Dxx11;
    auto t = stress_energy(x, g, TruncationParams{1.0, 9.0, 0.04});
    EXPECT_NEAR(t.conformal[0][0].re(), T00, 1e-9);
    EXPECT_NEAR(t.conformal[1][1].re(), T11, 1e-9);
    EXPECT_NEAR(t.nonconformal[0][0].re(), D - Dxy11 - Dxy22, 1e-9);
}

TEST(StressTensor, TotalCombinesParts) {
    auto t = stress_energy({0.25}, BoxGeometry({1.0}), TruncationParams{1.0, 5.0, 0.03});
    EXPECT_NEAR(t.total(0, 0, 0.0).re(), -pi / 24.0 + pi * 0.0, 1e-6); // xi_1 = 0
    EXPECT_NEAR(t.total(0, 0, 0.25).re(), -pi / 24.0 + 0.25 * pi, 1e-6);
}

TEST(StressTensor, RejectsNonInteriorPoints) {
    BoxGeometry g({1.0, 1.0});
    TruncationParams tp{1.0, 6.0, 0.04};
    EXPECT_THROW(stress_energy({0.0, 0.5}, g, tp), EdgeError);
    EXPECT_THROW(stress_energy({1.0, 1.0}, g, tp), EdgeError);
    EXPECT_THROW(stress_energy({1.2, 0.5}, g, tp), DomainError);
}

TEST(Pressure, IntervalWall) {
    BoxGeometry g({1.0});
    TruncationParams tp{1.0, 5.0, 0.03};
    auto p = pressure({0, 0}, {0.0}, g, tp)[0];
    EXPECT_NEAR(p.re(), pi / 24.0, 3e-7);
    EXPECT_LE(p.radius, 3e-7);
    // the vector flips on the opposite wall: both point into the box
    EXPECT_NEAR(pressure({0, 1}, {1.0}, g, tp)[0].re(), -pi / 24.0, 3e-7);
}

TEST(Pressure, TangentialComponentsVanish) {
    BoxGeometry g({1.0, 2.0, 1.5});
    auto p = pressure({1, 1}, {0.3, 2.0, 0.7}, g, TruncationParams{1.0, 6.0, 0.04});
    EXPECT_EQ(p[0].value, cplx(0.0));
    EXPECT_EQ(p[2].value, cplx(0.0));
    EXPECT_NE(p[1].value, cplx(0.0));
}

TEST(Pressure, EdgeDivergence) {
    BoxGeometry g({1.0, 1.0});
    TruncationParams tp{1.0, 7.0, 0.04};
    for (double x2 : {0.05, 0.02, 0.01}) {
        const double p = pressure({0, 0}, {0.0, x2}, g, tp)[0].re();
        EXPECT_NEAR(p * 32.0 * pi * x2 * x2 * x2, 1.0, 0.05) << x2;
    }
}

TEST(Pressure, Errors) {
    BoxGeometry g({1.0, 1.0});
    TruncationParams tp{1.0, 6.0, 0.04};
    EXPECT_THROW(pressure({0, 0}, {0.0, 0.0}, g, tp), EdgeError);
    EXPECT_THROW(pressure({0, 1}, {1.0, 1.0}, g, tp), EdgeError);
    EXPECT_THROW(pressure({0, 0}, {0.1, 0.5}, g, tp), DomainError);
    EXPECT_THROW(pressure({2, 0}, {0.0, 0.5}, g, tp), DomainError);
}

TEST(Pressure, SymmetricSides) {
    BoxGeometry g({1.0, 1.0});
    TruncationParams tp{1.0, 7.0, 0.04};
    auto a = pressure({0, 0}, {0.0, 0.3}, g, tp)[0];
    auto b = pressure({0, 1}, {1.0, 0.3}, g, tp)[0];
    auto c = pressure({1, 0}, {0.3, 0.0}, g, tp)[1];
    EXPECT_NEAR(a.re(), -b.re(), 1e-12);
    EXPECT_NEAR(a.re(), c.re(), 1e-12);
}

TEST(Prescription, Interval) {
    BoxGeometry g({1.0});
    auto [bnd, lim] = pressure_prescription_check({0, 0}, {0.0}, g, TruncationParams{1.0, 8.0, 0.03}, 1e-3);
    EXPECT_NEAR(bnd.re(), pi / 24.0, 1e-7);
    EXPECT_LE(std::abs(bnd.re() - lim.re()), 1e-5);
    EXPECT_TRUE(agree(bnd, lim));
}

TEST(Prescription, SquareAtSeveralPoints) {
    BoxGeometry g({1.0, 1.0});
    TruncationParams tp{1.0, 7.0, 0.04};
    for (double x2 : {0.2, 0.5, 0.7}) {
        auto [bnd, lim] = pressure_prescription_check({0, 0}, {0.0, x2}, g, tp, 1e-3);
        EXPECT_TRUE(agree(bnd, lim)) << x2 << " " << bnd.re() << " " << lim.re() << " " << lim.radius;
    }
    auto [b1, l1] = pressure_prescription_check({1, 1}, {0.4, 1.0}, g, tp, 1e-3);
    EXPECT_TRUE(agree(b1, l1));
}

TEST(Prescription, ZeroEpsilonIsPressure) {
    BoxGeometry g({1.0, 1.0});
    TruncationParams tp{1.0, 6.0, 0.04};
    auto [bnd, lim] = pressure_prescription_check({0, 0}, {0.0, 0.5}, g, tp, 0.0);
    EXPECT_EQ(bnd.value, lim.value);
    EXPECT_EQ(bnd.value, pressure({0, 0}, {0.0, 0.5}, g, tp)[0].value);
}

TEST(Energy, RectangleValues) {
    auto e1 = energy_ren(BoxGeometry({1.0}), TruncationParams{1.0, 5.0, 0.03});
    EXPECT_NEAR(e1.re(), -0.1308996938996, 3e-13);
    EXPECT_LE(e1.radius, 3e-13);
    auto e2 = energy_ren(BoxGeometry({1.0, 1.0}), TruncationParams{1.0, 4.0, 0.04});
    EXPECT_NEAR(e2.re(), 0.04104060, 9e-8);
    EXPECT_LE(e2.radius, 9e-8);
    auto e5 = energy_ren(BoxGeometry({1.0, 5.0}), searched(7.0));
    EXPECT_NEAR(e5.re(), -0.05412096, 2e-8);
    EXPECT_LE(e5.radius, 2e-8);
}

TEST(Energy, HeatTraceOracle) {
    for (auto sides : {std::vector<double>{1.0}, std::vector<double>{2.3}, std::vector<double>{1.0, 0.6},
                       std::vector<double>{1.0, 3.0}, std::vector<double>{0.8, 1.1, 1.7}}) {
        BoxGeometry g(sides);
        auto tp = auto_truncation(ResultKind::Energy, g, 1e-11, searched(5.0));
        auto e = energy_ren(g, tp);
        EXPECT_LE(e.radius, 1e-11);
        EXPECT_NEAR(e.re(), oracle::energy(sides), 1e-10) << g.dim();
    }
}

TEST(Energy, Scaling) {
    TruncationParams tp{1.0, 8.0, 0.04};
    auto a = energy_ren(BoxGeometry({1.0, 1.0}), tp), b = energy_ren(BoxGeometry({2.0, 2.0}), tp);
    EXPECT_DOUBLE_EQ(rescale(ResultKind::Energy, BoxGeometry({1.0, 1.0}), 2.0), 0.5);
    EXPECT_TRUE(agree(0.5 * a, b));
    EXPECT_EQ(rescale(ResultKind::Force, BoxGeometry({1.0}), 1.0), 1.0);
    EXPECT_THROW(rescale(ResultKind::Force, BoxGeometry({1.0}), 0.0), DomainError);
}

TEST(Energy, PolesAndUnavailableRadius) {
    BoxGeometry g({1.0, 1.0});
    TruncationParams tp{1.0, 6.0, 0.04};
    for (double u : {1.0, 2.0, 3.0}) EXPECT_THROW(energy_ren(g, tp, u), PoleError);
    auto e = energy_ren(g, tp, 2.5);
    EXPECT_FALSE(e.available);
    EXPECT_TRUE(std::isinf(e.radius));
    auto f = energy_ren(g, tp, -0.3);
    EXPECT_TRUE(f.available);
}

TEST(Energy, RegularizedValueMatchesZetaAtGeneralU) {
    // E^u = (kappa^u / 2) zeta(-(1-u)/2) away from the poles
    std::vector<double> sides{1.0, 1.3};
    BoxGeometry g(sides);
    for (double u : {-0.7, 0.4, 3.5}) {
        auto e = energy_ren(g, searched(10.0), u);
        EXPECT_NEAR(e.re(), 0.5 * oracle::spectral_zeta(sides, 0.5 * (u - 1.0)), 1e-9 + e.radius) << u;
    }
}

TEST(Force, RectangleValues) {
    auto f1 = force_ren({0, 0}, BoxGeometry({1.0, 1.0}), TruncationParams{1.0, 4.0, 0.04});
    EXPECT_NEAR(f1.re(), 0.020520, 6e-6);
    EXPECT_LE(f1.radius, 6e-6);
    auto f10 = force_ren({0, 0}, BoxGeometry({1.0, 10.0}), searched(15.0));
    EXPECT_NEAR(f10.re(), -0.412833, 3e-6);
    EXPECT_LE(f10.radius, 3e-6);
}

TEST(Force, IntervalIsMinusEnergyDerivative) {
    auto f = force_ren({0, 0}, BoxGeometry({1.0}), TruncationParams{1.0, 8.0, 0.03});
    EXPECT_NEAR(f.re(), -pi / 24.0, 1e-12);
}

TEST(Force, EnergyDuality) {
    // F on side (p, lambda) = -dE/da_p, with E from the independent heat-trace oracle
    const double h = 1e-4;
    for (auto sides : {std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.5}, std::vector<double>{0.7, 1.2, 1.9}}) {
        BoxGeometry g(sides);
        for (int p = 0; p < g.dim(); ++p) {
            auto up = sides, dn = sides;
            up[p] += h;
            dn[p] -= h;
            const double dE = (oracle::energy(up) - oracle::energy(dn)) / (2.0 * h);
            for (int lam : {0, 1}) {
                auto tp = auto_truncation(ResultKind::Force, g, 1e-10, searched(5.0), SideId{p, lam});
                auto f = force_ren({p, lam}, g, tp);
                EXPECT_NEAR(f.re(), -dE, 1e-7) << g.dim() << " axis " << p;
            }
        }
    }
}

TEST(Force, Poles) {
    BoxGeometry g({1.0, 1.0});
    TruncationParams tp{1.0, 6.0, 0.04};
    EXPECT_THROW(force_ren({0, 0}, g, tp, 2.0), PoleError);
    EXPECT_THROW(force_ren({0, 0}, g, tp, 3.0), PoleError);
    EXPECT_THROW(force_ren({2, 0}, g, tp), DomainError);
}

TEST(Force, CutoffIntegralDivergesAsInverseSquare) {
    BoxGeometry g({1.0, 1.0});
    TruncationParams tp{1.0, 7.0, 0.04};
    const double i1 = force_alt_cutoff({0, 0}, g, tp, 0.02).re();
    const double i2 = force_alt_cutoff({0, 0}, g, tp, 0.01).re();
    EXPECT_NEAR(i2 / i1, 4.0, 0.4);
}

TEST(AutoTruncation, MeetsTolerance) {
    BoxGeometry g({1.0, 2.0});
    const double tol = 1e-9;
    auto base = searched(5.0);
    auto te = auto_truncation(ResultKind::Energy, g, tol, base);
    EXPECT_LE(energy_ren(g, te).radius, tol);
    auto tf = auto_truncation(ResultKind::Force, g, tol, base, SideId{1, 0});
    EXPECT_LE(force_ren({1, 0}, g, tf).radius, tol);
    auto tt = auto_truncation(ResultKind::Tensor, g, tol, base);
    auto t = stress_energy({0.3, 0.9}, g, tt);
    for (int m = 0; m <= 2; ++m)
        for (int n = 0; n <= 2; ++n) {
            EXPECT_LE(t.conformal[m][n].radius, tol);
            EXPECT_LE(t.nonconformal[m][n].radius, tol);
        }
    auto tpp = auto_truncation(ResultKind::Pressure, g, tol, base);
    EXPECT_LE(pressure({0, 0}, {0.0, 0.9}, g, tpp)[0].radius, tol);
    EXPECT_THROW(auto_truncation(ResultKind::Energy, g, 0.0, base), DomainError);
}

} // namespace
