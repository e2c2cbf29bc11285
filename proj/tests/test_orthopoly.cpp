// Copyright 2026 The qcf Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include <qcf/orthopoly.hpp>

#include "gen.hpp"

namespace
{

using qcf::BigRational;
using qcf::Complex;
using qcf::entry12::ComplexParams;
using qcf::entry12::Params;
namespace op = qcf::orthopoly;

const double eps = std::numeric_limits<double>::epsilon();

BigRational r(long n, long d)
{
    return BigRational(BigRational::integer(n), BigRational::integer(d));
}

const ComplexParams standard{0.6, -0.15, 0.5};

TEST(ND, DegreesAndApproximants)
{
    Params<BigRational> p{r(1, 3), r(-1, 4), r(1, 5)};
    auto nd = op::nd_coefficients(p, 12);
    for (long k = 1; k <= 12; ++k) {
        EXPECT_EQ(nd.N[k].degree(), k - 1);
        EXPECT_EQ(nd.D[k].degree(), k);
    }
    for (BigRational x : {r(2, 3), r(-7, 5), BigRational(3)}) {
        auto vals = op::nd_values(p, x, 10);
        auto cf = qcf::entry12::jfrac_H_spec(p, x);
        qcf::ForwardConvergents<BigRational> fwd(cf);
        for (long k = 1; k <= 10; ++k) {
            auto c = fwd.next();
            ASSERT_TRUE(c.value);
            EXPECT_EQ(vals.N[k] / vals.D[k], *c.value);
            EXPECT_EQ(nd.D[k](x), vals.D[k]);
            EXPECT_EQ(nd.N[k](x), vals.N[k]);
        }
    }
}

TEST(ND, VanishingParameters)
{
    BigRational q = r(1, 2), x = r(3, 7);
    auto nd = op::nd_values<BigRational>({0, 0, q}, x, 2);
    EXPECT_EQ(nd.D[2], (x + BigRational(1)) * (x + q * q));
    EXPECT_EQ(nd.N[0], BigRational(0));
    EXPECT_EQ(nd.N[1], BigRational(1));
    EXPECT_EQ(nd.D[0], BigRational(1));
}

TEST(Scaling, Constants)
{
    auto sc = op::scaling_constants(Params<BigRational>{r(1, 2), r(-1, 2), r(1, 3)});
    EXPECT_EQ(sc.eta, r(4, 5));
    EXPECT_EQ(sc.c, r(-5, 4));
    auto fc = op::scaling_constants(ComplexParams{0.5, -0.5, 0.3});
    EXPECT_NEAR(std::abs(fc.eta - 0.8), 0.0, 4 * eps);
    EXPECT_NEAR(std::abs(fc.c + 1.25), 0.0, 4 * eps);
    EXPECT_EQ(fc.c.imag(), 0.0);
}

TEST(Scaling, ExactIdentities)
{
    qcf::testing::Gen g(61);
    for (int i = 0; i < 30; ++i) {
        BigRational a = g.nonzero_rational(9, 9), b = g.nonzero_rational(9, 9);
        if ((a * b).sign() > 0 || a * b == BigRational(1)) {
            continue;
        }
        Params<BigRational> p{a, b, r(1, 3)};
        BigRational ab = a * b;
        EXPECT_EQ(op::c_squared(p) - BigRational(1), (BigRational(1) + ab) * (BigRational(1) + ab) / (-BigRational(4) * ab));
        EXPECT_EQ(op::c_squared(p) * op::eta_squared(p), BigRational(1));
    }
}

TEST(Scaling, Errors)
{
    try {
        op::scaling_constants(ComplexParams{0.0, -0.5, 0.3});
        FAIL();
    } catch (const qcf::numeric_error &e) {
        EXPECT_EQ(e.code(), qcf::errc::degenerate);
    }
    EXPECT_THROW(op::scaling_constants(ComplexParams{0.5, 0.5, 0.3}), qcf::numeric_error);
    EXPECT_THROW(op::scaling_constants(Params<BigRational>{r(1, 2), r(-1, 3), r(1, 3)}), qcf::numeric_error);
    EXPECT_THROW(op::scaling_constants(Params<BigRational>{r(1, 2), r(1, 2), r(1, 3)}), qcf::numeric_error);
    // complex parameters are allowed
    EXPECT_NO_THROW(op::scaling_constants(ComplexParams{Complex(0.5, 0.2), 0.3, 0.3}));
}

TEST(P, ScalingRelationExact)
{
    Params<BigRational> p{r(1, 2), r(-1, 2), r(1, 3)};
    auto sc = op::scaling_constants(p);
    BigRational one_ab = BigRational(1) - p.a * p.b;
    for (BigRational x : {r(1, 7), r(-5, 3), BigRational(2)}) {
        auto P = op::P_values(p, sc, x, 10);
        auto Ps = op::Pstar_values(p, sc, x, 10);
        auto nd = op::nd_values(p, BigRational(sc.eta * x), 10);
        for (long k = 0; k <= 10; ++k) {
            EXPECT_EQ(P[k] * qcf::power(sc.eta, k) * qcf::power(one_ab, k), nd.D[k]);
            if (k >= 1) {
                EXPECT_EQ(Ps[k] * qcf::power(sc.eta, k - 1) * qcf::power(one_ab, k), nd.N[k]);
            }
        }
    }
}

TEST(P, ScalingRelationFloating)
{
    auto p = standard;
    auto sc = op::scaling_constants(p);
    Complex one_ab = 1.0 - p.a * p.b;
    for (Complex x : {Complex(2.0), Complex(0.3, 0.7), Complex(-1.2)}) {
        auto P = op::P_values(p, sc, x, 10);
        auto nd = op::nd_values(p, Complex(sc.eta * x), 10);
        for (long k = 0; k <= 10; ++k) {
            Complex lhs = P[k] * std::pow(sc.eta, static_cast<double>(k)) * std::pow(one_ab, static_cast<double>(k));
            EXPECT_LE(std::abs(lhs - nd.D[k]), 1e-12 * std::abs(nd.D[k]));
        }
    }
}

TEST(P, InitialValuesAndBeta)
{
    Params<BigRational> p{r(1, 2), r(-1, 2), r(7, 10)};
    auto sc = op::scaling_constants(p);
    EXPECT_EQ(op::P_values(p, sc, sc.c, 1)[1], BigRational(0));
    EXPECT_EQ(op::Q_values(p, sc, sc.c, 1)[1], BigRational(0));
    op::RecurrenceCoeffs<BigRational> rc{p, sc.c};
    for (long k = 1; k <= 50; ++k) {
        EXPECT_GT(rc.beta(k).sign(), 0);
    }
    qcf::testing::Gen g(62);
    for (int i = 0; i < 50; ++i) {
        double a = g.uniform(0.05, 2.0), b = -g.uniform(0.05, 2.0), q = g.uniform(0.05, 0.95);
        op::RecurrenceCoeffs<Complex> rcf{{a, b, q}, 1.0};
        for (long k = 1; k <= 30; ++k) {
            EXPECT_GT(rcf.beta(k).real(), 0.0);
        }
    }
}

TEST(Q, RelationToP)
{
    Params<BigRational> p{r(1, 2), r(-1, 2), r(1, 3)};
    auto sc = op::scaling_constants(p);
    for (BigRational x : {r(1, 7), r(-5, 3)}) {
        auto P = op::P_values(p, sc, x, 10), Q = op::Q_values(p, sc, x, 10);
        auto Ps = op::Pstar_values(p, sc, x, 10), Qs = op::Qstar_values(p, sc, x, 10);
        for (long k = 0; k <= 10; ++k) {
            BigRational poch = qcf::qpoch(BigRational(p.b * p.q / p.a), BigRational(p.q * p.q), k);
            EXPECT_EQ(Q[k] * poch, P[k]);
            EXPECT_EQ(Qs[k] * poch, Ps[k]);
        }
    }
}

TEST(Q, VanishingLeadingFactor)
{
    // b q^3 / a = 1 at k = 1
    Params<BigRational> p{r(1, 8), r(-1, 1), r(-1, 2)};
    auto sc = op::scaling_constants(Params<BigRational>{r(1, 2), r(-1, 2), r(1, 3)});
    try {
        op::Q_values(p, sc, BigRational(2), 5);
        FAIL();
    } catch (const qcf::numeric_error &e) {
        EXPECT_EQ(e.code(), qcf::errc::pole);
        EXPECT_EQ(e.index(), 1);
    }
}

TEST(Branch, Examples)
{
    auto b2 = op::branch(2.0);
    EXPECT_NEAR(b2.sqrt_x2m1.real(), std::sqrt(3.0), 4 * eps);
    EXPECT_NEAR(b2.rho_star.real(), 2.0 - std::sqrt(3.0), 4 * eps);
    EXPECT_EQ(b2.selected, 1);
    EXPECT_EQ(op::branch(1.0).rho_star, Complex(1.0));
    EXPECT_EQ(op::branch(-1.0).rho_star, Complex(-1.0));
    auto bi = op::branch(Complex(0, 1.5));
    EXPECT_LT(std::abs(bi.rho_star), 1.0);
    EXPECT_NEAR(std::abs(bi.rho1 * bi.rho2 - 1.0), 0.0, 4 * eps);
    EXPECT_NEAR(std::abs(bi.rho1 - (Complex(0, 1.5) - bi.sqrt_x2m1)), 0.0, 4 * eps);
    EXPECT_THROW(op::branch(0.5), qcf::numeric_error);
    EXPECT_THROW(op::branch(-0.999), qcf::numeric_error);
    EXPECT_NO_THROW(op::branch(Complex(0.5, 1e-3)));
}

TEST(Branch, Properties)
{
    qcf::testing::Gen g(63);
    for (int i = 0; i < 1000; ++i) {
        Complex x(g.uniform(-5, 5), g.uniform(-5, 5));
        auto b = op::branch(x);
        EXPECT_LE(std::abs(b.rho_star), 1.0);
        EXPECT_LE(std::abs(b.rho1 * b.rho2 - 1.0), 4 * eps);
        EXPECT_LE(std::abs(b.sqrt_x2m1 * b.sqrt_x2m1 - (x * x - 1.0)), 8 * eps * std::max(1.0, std::norm(x)));
        EXPECT_EQ(b.selected, 1);
    }
    // sqrt(x^2 - 1) ~ x at infinity
    for (Complex x : {Complex(1e6, 0), Complex(-1e6, 0), Complex(0, 1e6), Complex(3e5, -4e5)}) {
        EXPECT_LT(std::abs(op::branch(x).sqrt_x2m1 / x - 1.0), 1e-9);
    }
    // continuity along 2 -> -2 + 0.1i in the upper half plane
    const int n = 4000;
    Complex prev = op::branch(2.0).rho_star;
    for (int k = 1; k <= n; ++k) {
        double t = static_cast<double>(k) / n;
        Complex x = Complex(2.0 - 4.0 * t, 0.1 * t) + Complex(0.0, 0.3 * std::sin(3.141592653589793 * t));
        Complex cur = op::branch(x).rho_star;
        EXPECT_LT(std::abs(cur - prev), 10.0 * std::abs(Complex(4.0 / n, 1.0 / n)) * 3.0);
        prev = cur;
    }
}

TEST(Gammas, Vieta)
{
    qcf::testing::Gen g(64);
    for (int i = 0; i < 200; ++i) {
        ComplexParams p{g.uniform(0.05, 1.0), -g.uniform(0.05, 1.0), g.disk(0.95)};
        auto sc = op::scaling_constants(p);
        auto gm = op::gammas(p, sc);
        Complex s = p.a * sc.c * p.q / p.b, prod = p.a * p.a * p.q * p.q / (4.0 * p.b * p.b);
        double scale = std::max({std::abs(gm.gamma1), std::abs(gm.gamma2), 1.0});
        EXPECT_LE(std::abs(gm.gamma1 + gm.gamma2 - s), 4 * eps * scale * 4);
        EXPECT_LE(std::abs(gm.gamma1 * gm.gamma2 - prod), 4 * eps * scale * scale * 4);
    }
    ComplexParams p{0.5, -0.5, 0.5};
    auto sc = op::scaling_constants(p);
    auto gm = op::gammas(p, sc);
    for (Complex root : {gm.gamma1, gm.gamma2}) {
        Complex t = 1.0 / root;
        Complex quad = 1.0 - p.a * sc.c * p.q / p.b * t + p.a * p.a * p.q * p.q / (4.0 * p.b * p.b) * t * t;
        EXPECT_LT(std::abs(quad), 1e-14);
    }
    EXPECT_THROW(op::gammas(ComplexParams{0.5, 0.0, 0.5}, sc), qcf::numeric_error);
}

TEST(FG, Examples)
{
    auto rho = op::branch(2.0).rho_star;
    // rho = 0: 2phi1(0, 0; 0; q^2, z) = sum z^k / (q^2; q^2)_k
    auto p = standard;
    Complex q2 = p.q * p.q, z = p.b * p.q / p.a, direct = 0.0;
    for (int k = 0; k < 60; ++k) {
        direct += std::pow(z, k) / qcf::qpoch(q2, q2, k);
    }
    EXPECT_NEAR(std::abs(op::F_series(0.0, p, 1e-16) - direct), 0.0, 1e-15);
    auto G = op::G_series(rho, p, 1e-15);
    EXPECT_GT(std::abs(G), 1e-6);
    EXPECT_TRUE(std::isfinite(std::abs(op::F_series(rho, p, 1e-15))));
    try {
        op::G_series(rho, ComplexParams{0.3, -0.2, 0.5}, 1e-12);
        FAIL();
    } catch (const qcf::numeric_error &e) {
        EXPECT_EQ(e.code(), qcf::errc::divergence);
    }
    EXPECT_THROW(op::F_series(Complex(1.5), p, 1e-12), qcf::numeric_error);
}

TEST(X, ClosedVersusLimit)
{
    for (Complex x : {Complex(2), Complex(-2), Complex(0, 1.5), Complex(0.4, -1.2)}) {
        auto closed = op::X_closed(standard, x, 1e-15);
        auto lim = op::X_limit(standard, x, 300);
        EXPECT_LT(std::abs(closed.value - lim.value), 1e-6) << x;
        EXPECT_LT(lim.delta_half, 1e-6);
    }
    auto one = op::X_closed(standard, 1.0, 1e-15);
    EXPECT_NEAR(std::abs(one.value - 2.0 * one.F / one.G), 0.0, 4 * eps * std::abs(one.value));
    EXPECT_LT(std::abs(op::X_limit(standard, 1.0, 10000).value - one.value), 1e-3);
}

TEST(X, ConjugateSymmetry)
{
    for (Complex x : {Complex(0.4, 1.2), Complex(0, 1.5), Complex(-3, 0.2)}) {
        Complex up = op::X_closed(standard, x, 1e-15).value;
        Complex down = op::X_closed(standard, std::conj(x), 1e-15).value;
        EXPECT_LE(std::abs(up - std::conj(down)), 4 * eps * std::abs(up));
    }
}

TEST(X, ScaledJFraction)
{
    // P*_k/P_k = eta N_k(eta x)/D_k(eta x), so X(x) = eta H(eta x).
    auto sc = op::scaling_constants(standard);
    for (Complex x : {Complex(2), Complex(0.4, 1.2)}) {
        auto h = qcf::limit_detect(qcf::entry12::jfrac_H_spec(standard, Complex(sc.eta * x)), 1e-14, 500);
        EXPECT_NEAR(std::abs(sc.eta * h.value - op::X_closed(standard, x, 1e-15).value), 0.0, 1e-10);
    }
}

TEST(X, MassPointIsFlagged)
{
    // G(rho(x)) changes sign just below x = -1 at this point.
    auto G = [](double x) { return op::G_series(op::branch(x).rho_star, standard, 1e-16).real(); };
    double lo = -1.05, hi = -1.0;
    ASSERT_LT(G(lo) * G(hi), 0.0);
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        (G(mid) * G(hi) <= 0.0 ? lo : hi) = mid;
    }
    double root = std::abs(G(lo)) < std::abs(G(hi)) ? lo : hi;
    try {
        op::X_closed(standard, root, 1e-16);
        FAIL() << "no mass point flag at " << root;
    } catch (const qcf::numeric_error &e) {
        EXPECT_EQ(e.code(), qcf::errc::pole);
        EXPECT_NE(std::string(e.what()).find("mass point"), std::string::npos);
    }
}

TEST(Genfun, Q)
{
    EXPECT_NEAR(op::genfun_Q_check(standard, 2.0, 0).max_deviation, 0.0, 1e-15);
    for (Complex x : {Complex(2), Complex(-2), Complex(0, 1.5), Complex(1)}) {
        auto q = op::genfun_Q_check(standard, x, 12, false);
        auto qs = op::genfun_Q_check(standard, x, 12, true);
        EXPECT_LT(q.max_deviation, 1e-10) << x;
        EXPECT_LT(qs.max_deviation, 1e-10) << x;
        EXPECT_LT(q.max_tail_bound, 1e-12);
    }
    EXPECT_THROW(op::genfun_Q_check(ComplexParams{0.3, -0.2, 0.5}, 2.0, 5), qcf::numeric_error);
}

TEST(Genfun, DeltaRoots)
{
    auto p = standard;
    auto d = op::delta_roots(p, 1.0);
    EXPECT_NEAR(std::abs(d.delta1 - 1.0), 0.0, 4 * eps);
    EXPECT_NEAR(std::abs(d.delta2 + p.a * p.b), 0.0, 4 * eps);
    for (Complex x : {Complex(1), Complex(1.7), Complex(0.2, 0.9)}) {
        auto e = op::delta_roots(p, x);
        EXPECT_LT(std::abs(e.delta1 + e.delta2 - (1.0 - p.a * p.b) * x), 8 * eps);
        EXPECT_LT(std::abs(e.delta1 * e.delta2 + p.a * p.b), 8 * eps);
    }
    auto sc = op::scaling_constants(p);
    try {
        op::delta_roots(p, sc.eta);
        FAIL();
    } catch (const qcf::numeric_error &e) {
        EXPECT_EQ(e.code(), qcf::errc::degenerate);
    }
}

TEST(Genfun, HatND)
{
    for (Complex x : {Complex(1), Complex(1.7), Complex(2), Complex(0.3, 0.8)}) {
        auto c = op::hatND_genfun_check(standard, x, 12);
        EXPECT_LT(c.max_deviation, 1e-10) << x;
    }
    EXPECT_LT(op::hatND_genfun_check(ComplexParams{0.6, -0.1, 0.5}, 1.0, 10).max_deviation, 1e-10);
    // |b/aq| > 1: the D^ series has no convergent closed form
    EXPECT_THROW(op::hatND_genfun_check(ComplexParams{0.3, -0.2, 0.5}, 1.0, 10), qcf::numeric_error);
}

TEST(Genfun, ExpansionAgainstExactProduct)
{
    // Single summand (z = 0 except k = 0): closed form is numer / prod(1 - d t).
    std::vector<Complex> roots{0.5, Complex(0, 0.25)};
    auto e = op::expand_q_genfun(qcf::TruncatedSeries<Complex>::constant(1.0, 6), roots, {}, {}, 0.5, 0.0, 6);
    for (std::size_t k = 0; k <= 6; ++k) {
        Complex expect = 0.0;
        for (std::size_t i = 0; i <= k; ++i) {
            expect += std::pow(roots[0], static_cast<double>(i)) * std::pow(roots[1], static_cast<double>(k - i));
        }
        EXPECT_NEAR(std::abs(e.series[k] - expect), 0.0, 1e-15);
    }
}

TEST(Darboux, Ratios)
{
    auto d = op::darboux_ratio_check(standard, 2.0, 200);
    EXPECT_FALSE(d.double_pole);
    EXPECT_LT(d.rel_deviation, 1e-4);
    EXPECT_LT(d.rel_deviation_star, 1e-4);
    EXPECT_LT(d.ratio_deviation, 1e-6);
    auto d1 = op::darboux_ratio_check(standard, 1.0, 5000);
    auto d0 = op::darboux_ratio_check(standard, 1.0, 2500);
    EXPECT_TRUE(d1.double_pole);
    EXPECT_LT(d1.rel_deviation, 1e-2);
    EXPECT_LT(d1.rel_deviation, d0.rel_deviation);
    EXPECT_LT(d1.rel_deviation_star, d0.rel_deviation_star);
    EXPECT_THROW(op::darboux_ratio_check(standard, 0.5, 100), qcf::numeric_error);
}

TEST(H1Asymptotics, Examples)
{
    auto h = op::H1_asymptotic_check(ComplexParams{0.3, -0.2, 0.5}, 200, 1e-15);
    EXPECT_LT(h.residual, 1e-8);
    ASSERT_TRUE(h.nhat_rel_deviation);
    EXPECT_LT(*h.nhat_rel_deviation, 1e-6);
    EXPECT_FALSE(h.dhat_rel_deviation);
    auto g = op::H1_asymptotic_check(ComplexParams{0.6, -0.15, 0.5}, 200, 1e-15);
    ASSERT_TRUE(g.heine_residual);
    EXPECT_LT(*g.heine_residual, 1e-10);
    EXPECT_LT(*g.dhat_rel_deviation, 1e-6);
    auto small = op::H1_asymptotic_check(ComplexParams{0.3, -1e-6, 0.5}, 200, 1e-15);
    EXPECT_LT(small.residual, 1e-8);
}

} // namespace
