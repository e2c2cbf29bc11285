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

#ifndef QCF_ORTHOPOLY_HPP
#define QCF_ORTHOPOLY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <qcf/cfrac.hpp>
#include <qcf/entry12.hpp>
#include <qcf/error.hpp>
#include <qcf/qseries.hpp>
#include <qcf/scalars.hpp>
#include <qcf/truncated_series.hpp>

/*
 * Orthogonal-polynomial view of the J-fraction H(x).
 *
 * The numerator/denominator polynomials N_k, D_k of H obey
 *   y_{k+1} = ((1-ab)x + (1-ab)q^{2k}) y_k + (a-bq^{2k-1})(b-aq^{2k-1}) y_{k-1}.
 * With eta^2 = -4ab/(1-ab)^2 and c = -1/eta, P_k(x) = D_k(eta x)/(eta^k (1-ab)^k)
 * satisfies the monic recurrence
 *   x P_k = P_{k+1} + c q^{2k} P_k + beta_k P_{k-1},
 *   beta_k = (1/4)(1 - bq^{2k-1}/a)(1 - aq^{2k-1}/b),
 * and X(x) = lim P*_k/P_k has the closed form 2 rho F(rho)/G(rho) off [-1, 1].
 */
namespace qcf::orthopoly
{

using entry12::ComplexParams;
using entry12::Params;

// Dense polynomial, coefficient i multiplies x^i. Trailing zeros are trimmed.
template <Field T>
class Polynomial
{
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : m_coeffs(std::move(coeffs))
    {
        trim();
    }
    static Polynomial constant(const T &c)
    {
        return Polynomial(std::vector<T>{c});
    }

    // -1 for the zero polynomial.
    long degree() const
    {
        return static_cast<long>(m_coeffs.size()) - 1;
    }
    const std::vector<T> &coefficients() const
    {
        return m_coeffs;
    }
    T coefficient(std::size_t i) const
    {
        return i < m_coeffs.size() ? m_coeffs[i] : T(0);
    }

    T operator()(const T &x) const
    {
        T acc(0);
        for (std::size_t i = m_coeffs.size(); i-- > 0;) {
            acc = acc * x + m_coeffs[i];
        }
        return acc;
    }

    friend Polynomial operator+(const Polynomial &f, const Polynomial &g)
    {
        std::vector<T> v(std::max(f.m_coeffs.size(), g.m_coeffs.size()), T(0));
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = f.coefficient(i) + g.coefficient(i);
        }
        return Polynomial(std::move(v));
    }
    friend Polynomial operator*(const T &s, const Polynomial &f)
    {
        std::vector<T> v(f.m_coeffs);
        for (auto &c : v) {
            c = s * c;
        }
        return Polynomial(std::move(v));
    }
    // (c1 x + c0) f
    Polynomial times_linear(const T &c0, const T &c1) const
    {
        std::vector<T> v(m_coeffs.size() + 1, T(0));
        for (std::size_t i = 0; i < m_coeffs.size(); ++i) {
            v[i] = v[i] + c0 * m_coeffs[i];
            v[i + 1] = v[i + 1] + c1 * m_coeffs[i];
        }
        return Polynomial(std::move(v));
    }
    friend bool operator==(const Polynomial &f, const Polynomial &g)
    {
        return f.m_coeffs == g.m_coeffs;
    }

private:
    void trim()
    {
        while (!m_coeffs.empty() && is_zero(m_coeffs.back())) {
            m_coeffs.pop_back();
        }
    }

    std::vector<T> m_coeffs;
};

template <typename V>
struct NDSequences {
    std::vector<V> N;
    std::vector<V> D;
};

/*
 * N_k, D_k for k = 0..kmax with N_0 = 0, N_1 = 1-ab, D_0 = 1, D_1 = (1-ab)(x+1).
 * The ab(1 - bq^{2k-1}/a)(1 - aq^{2k-1}/b) coefficient is used in its
 * denominator-free form (a - bq^{2k-1})(b - aq^{2k-1}).
 */
template <Field T>
NDSequences<T> nd_values(const Params<T> &p, const T &x, long kmax)
{
    if (kmax < 1) {
        throw numeric_error(errc::invalid_input, "kmax must be >= 1");
    }
    const T one_ab = T(1) - p.a * p.b;
    NDSequences<T> out;
    out.N = {T(0), one_ab};
    out.D = {T(1), one_ab * (x + T(1))};
    for (long k = 1; k < kmax; ++k) {
        T lin = one_ab * x + one_ab * power(p.q, 2 * k);
        T quad = entry12::partial_numerator(p, 2 * k - 1);
        out.N.push_back(lin * out.N[k] + quad * out.N[k - 1]);
        out.D.push_back(lin * out.D[k] + quad * out.D[k - 1]);
    }
    return out;
}

// Same recurrence with x symbolic.
template <Field T>
NDSequences<Polynomial<T>> nd_coefficients(const Params<T> &p, long kmax)
{
    if (kmax < 1) {
        throw numeric_error(errc::invalid_input, "kmax must be >= 1");
    }
    using Poly = Polynomial<T>;
    const T one_ab = T(1) - p.a * p.b;
    NDSequences<Poly> out;
    out.N = {Poly(), Poly::constant(one_ab)};
    out.D = {Poly::constant(T(1)), Poly(std::vector<T>{one_ab, one_ab})};
    for (long k = 1; k < kmax; ++k) {
        T c0 = one_ab * power(p.q, 2 * k);
        T quad = entry12::partial_numerator(p, 2 * k - 1);
        out.N.push_back(out.N[k].times_linear(c0, one_ab) + quad * out.N[k - 1]);
        out.D.push_back(out.D[k].times_linear(c0, one_ab) + quad * out.D[k - 1]);
    }
    return out;
}

template <Field T>
struct ScalingConstants {
    T eta;
    T c;
};

template <Field T>
T eta_squared(const Params<T> &p)
{
    T one_ab = T(1) - p.a * p.b;
    return T(-4) * p.a * p.b / (one_ab * one_ab);
}

template <Field T>
T c_squared(const Params<T> &p)
{
    T one_ab = T(1) - p.a * p.b;
    return one_ab * one_ab / (T(-4) * p.a * p.b);
}

namespace detail
{

inline bool is_real(const Complex &z)
{
    return z.imag() == 0.0;
}

// sqrt(-ab), checking the sign condition that makes c real for real a, b.
inline Complex sqrt_minus_ab(const ComplexParams &p)
{
    Complex ab = p.a * p.b;
    if (ab == Complex(0.0, 0.0)) {
        throw numeric_error(errc::degenerate, "scaling constants need ab != 0");
    }
    if (is_real(p.a) && is_real(p.b) && !(ab.real() < 0.0)) {
        throw numeric_error(errc::domain, "real a, b must have opposite signs (ab < 0)");
    }
    return std::sqrt(-ab);
}

inline std::optional<BigRational::integer> exact_isqrt(const BigRational::integer &n)
{
    if (n < 0) {
        return std::nullopt;
    }
    BigRational::integer r = boost::multiprecision::sqrt(n);
    if (r * r != n) {
        return std::nullopt;
    }
    return r;
}

} // namespace detail

// eta = 2 sqrt(-ab)/(1-ab), c = -1/eta = -(1-ab)/(2 sqrt(-ab)).
inline ScalingConstants<Complex> scaling_constants(const ComplexParams &p)
{
    Complex s = detail::sqrt_minus_ab(p);
    Complex one_ab = 1.0 - p.a * p.b;
    if (one_ab == Complex(0.0, 0.0)) {
        throw numeric_error(errc::degenerate, "scaling constants need ab != 1");
    }
    return {2.0 * s / one_ab, -one_ab / (2.0 * s)};
}

// Exact variant; only available when -ab is the square of a rational.
inline ScalingConstants<BigRational> scaling_constants(const Params<BigRational> &p)
{
    BigRational mab = -(p.a * p.b);
    if (mab.is_zero()) {
        throw numeric_error(errc::degenerate, "scaling constants need ab != 0");
    }
    if (mab.sign() < 0) {
        throw numeric_error(errc::domain, "real a, b must have opposite signs (ab < 0)");
    }
    auto num = detail::exact_isqrt(mab.numerator());
    auto den = detail::exact_isqrt(mab.denominator());
    if (!num || !den) {
        throw numeric_error(errc::domain, "-ab is not a rational square; use floating mode");
    }
    BigRational s(*num, *den);
    BigRational one_ab = BigRational(1) - p.a * p.b;
    return {BigRational(2) * s / one_ab, -one_ab / (BigRational(2) * s)};
}

template <Field T>
struct RecurrenceCoeffs {
    Params<T> p;
    T c;

    T alpha(long k) const
    {
        return c * power(p.q, 2 * k);
    }
    T beta(long k) const
    {
        return T(1) / T(4) * (T(1) - p.b * power(p.q, 2 * k - 1) / p.a) *
               (T(1) - p.a * power(p.q, 2 * k - 1) / p.b);
    }
};

namespace detail
{

template <Field T>
std::vector<T> monic_sequence(const RecurrenceCoeffs<T> &rc, const T &x, long kmax, T y0, T y1)
{
    std::vector<T> y{std::move(y0), std::move(y1)};
    for (long k = 1; k < kmax; ++k) {
        y.push_back((x - rc.alpha(k)) * y[k] - rc.beta(k) * y[k - 1]);
    }
    return y;
}

} // namespace detail

// P_0 = 1, P_1 = x - c; returns P_0..P_kmax.
template <Field T>
std::vector<T> P_values(const Params<T> &p, const ScalingConstants<T> &sc, const T &x, long kmax)
{
    if (is_zero(p.a) || is_zero(p.b)) {
        throw numeric_error(errc::domain, "P_k need a, b != 0");
    }
    return detail::monic_sequence(RecurrenceCoeffs<T>{p, sc.c}, x, std::max(kmax, 1L), T(1), T(x - sc.c));
}

// P*_0 = 0, P*_1 = 1.
template <Field T>
std::vector<T> Pstar_values(const Params<T> &p, const ScalingConstants<T> &sc, const T &x, long kmax)
{
    if (is_zero(p.a) || is_zero(p.b)) {
        throw numeric_error(errc::domain, "P*_k need a, b != 0");
    }
    return detail::monic_sequence(RecurrenceCoeffs<T>{p, sc.c}, x, std::max(kmax, 1L), T(0), T(1));
}

/*
 * Q_k = P_k / (bq/a; q^2)_k, generated directly from
 *   x Q_k = (1 - bq^{2k+1}/a) Q_{k+1} + c q^{2k} Q_k + (1/4)(1 - aq^{2k-1}/b) Q_{k-1}.
 */
template <Field T>
std::vector<T> Q_values_from(const Params<T> &p, const ScalingConstants<T> &sc, const T &x, long kmax, T y0,
                             T y1_numerator)
{
    if (is_zero(p.a) || is_zero(p.b)) {
        throw numeric_error(errc::domain, "Q_k need a, b != 0");
    }
    auto lead = [&](long k) {
        T f = T(1) - p.b * power(p.q, 2 * k + 1) / p.a;
        if (is_negligible(f, pole_threshold)) {
            throw numeric_error(errc::pole, "1 - bq^{2k+1}/a vanishes at k = " + std::to_string(k), k);
        }
        return f;
    };
    std::vector<T> y{std::move(y0), T(y1_numerator / lead(0))};
    for (long k = 1; k < kmax; ++k) {
        T next = ((x - sc.c * power(p.q, 2 * k)) * y[k] -
                  T(1) / T(4) * (T(1) - p.a * power(p.q, 2 * k - 1) / p.b) * y[k - 1]) /
                 lead(k);
        y.push_back(std::move(next));
    }
    return y;
}

template <Field T>
std::vector<T> Q_values(const Params<T> &p, const ScalingConstants<T> &sc, const T &x, long kmax)
{
    return Q_values_from(p, sc, x, std::max(kmax, 1L), T(1), T(x - sc.c));
}

template <Field T>
std::vector<T> Qstar_values(const Params<T> &p, const ScalingConstants<T> &sc, const T &x, long kmax)
{
    return Q_values_from(p, sc, x, std::max(kmax, 1L), T(0), T(1));
}

// The J-fraction whose approximants are P*_k/P_k.
inline CFSpec<Complex> x_jfrac_spec(const ComplexParams &p, const ScalingConstants<Complex> &sc, const Complex &x)
{
    RecurrenceCoeffs<Complex> rc{p, sc.c};
    CFSpec<Complex> cf;
    cf.b0 = 0.0;
    cf.terms = [rc, x](long j) {
        if (j == 1) {
            return std::pair<Complex, Complex>{1.0, x - rc.c};
        }
        long k = j - 1;
        return std::pair<Complex, Complex>{-rc.beta(k), x - rc.alpha(k)};
    };
    return cf;
}

struct BranchData {
    Complex x;
    Complex sqrt_x2m1; // branch with sqrt(x^2-1) ~ x at infinity, cut on [-1, 1]
    Complex rho1;      // x - sqrt(x^2-1)
    Complex rho2;      // x + sqrt(x^2-1)
    Complex rho_star;  // the root with modulus <= 1
    int selected = 1;  // which of rho1/rho2 rho_star is
};

inline BranchData branch(const Complex &x)
{
    if (x.imag() == 0.0 && x.real() > -1.0 && x.real() < 1.0) {
        throw numeric_error(errc::domain, "x lies in the open interval (-1, 1)");
    }
    check_finite(x, "branch");
    BranchData b;
    b.x = x;
    // Product of principal roots: the cuts of the two factors cancel outside [-1, 1].
    b.sqrt_x2m1 = std::sqrt(x - 1.0) * std::sqrt(x + 1.0);
    b.rho2 = x + b.sqrt_x2m1;
    // |rho2| >= 1 on this branch; the reciprocal avoids cancellation in x - sqrt.
    b.rho1 = 1.0 / b.rho2;
    if (std::abs(b.rho1) <= std::abs(b.rho2)) {
        b.rho_star = b.rho1;
        b.selected = 1;
    } else {
        b.rho_star = b.rho2;
        b.selected = 2;
    }
    return b;
}

struct GammaPair {
    Complex gamma1;
    Complex gamma2;
};

// Roots of 1 - (acq/b) t + (a^2 q^2 / 4b^2) t^2 = (1 - gamma1 t)(1 - gamma2 t):
// gamma_{1,2} = (aq/2b)(c +- sqrt(c^2 - 1)).
inline GammaPair gammas(const ComplexParams &p, const ScalingConstants<Complex> &sc)
{
    if (p.b == Complex(0.0, 0.0)) {
        throw numeric_error(errc::domain, "gamma roots need b != 0");
    }
    Complex pre = p.a * p.q / (2.0 * p.b);
    Complex root = std::sqrt(sc.c * sc.c - 1.0);
    return {pre * (sc.c + root), pre * (sc.c - root)};
}

inline GammaPair gammas(const ComplexParams &p)
{
    return gammas(p, scaling_constants(p));
}

namespace detail
{

inline Truncated<Complex> fg_series(const Complex &rho, const ComplexParams &p, const Complex &z, double eps)
{
    if (std::abs(rho) > 1.0 + 1e-12) {
        throw numeric_error(errc::domain, "F/G need |rho| <= 1");
    }
    if (!(std::abs(z) < 1.0)) {
        throw numeric_error(errc::divergence, "F/G series argument must lie in the unit disk");
    }
    auto g = gammas(p);
    const Complex q2 = p.q * p.q;
    return phi21(2.0 * g.gamma1 * rho, 2.0 * g.gamma2 * rho, q2 * rho * rho, q2, z, eps);
}

} // namespace detail

// F(rho) = 2phi1(2 gamma1 rho, 2 gamma2 rho; q^2 rho^2; q^2, bq/a)
inline Complex F_series(const Complex &rho, const ComplexParams &p, double eps)
{
    if (p.a == Complex(0.0, 0.0)) {
        throw numeric_error(errc::domain, "F needs a != 0");
    }
    return detail::fg_series(rho, p, p.b * p.q / p.a, eps).value;
}

// G(rho) = (1 - b/aq) 2phi1(2 gamma1 rho, 2 gamma2 rho; q^2 rho^2; q^2, b/aq)
inline Complex G_series(const Complex &rho, const ComplexParams &p, double eps)
{
    if (p.a == Complex(0.0, 0.0)) {
        throw numeric_error(errc::domain, "G needs a != 0");
    }
    const Complex z = p.b / (p.a * p.q);
    return (1.0 - z) * detail::fg_series(rho, p, z, eps).value;
}

// |G| below this is reported as a possible mass point of the orthogonality measure.
inline constexpr double mass_point_threshold = 1e-12;

struct XClosed {
    Complex value;
    BranchData branch;
    Complex F;
    Complex G;
};

// X(x) = 2 rho F(rho)/G(rho) with rho the small-modulus root.
inline XClosed X_closed(const ComplexParams &p, const Complex &x, double eps)
{
    XClosed out;
    out.branch = branch(x);
    const Complex rho = out.branch.rho_star;
    out.F = F_series(rho, p, eps);
    out.G = G_series(rho, p, eps);
    if (std::abs(out.G) < mass_point_threshold) {
        throw numeric_error(errc::pole, "G(rho) vanishes: possible mass point");
    }
    out.value = 2.0 * rho * out.F / out.G;
    return out;
}

struct XLimit {
    Complex value;
    long depth = 0;
    double delta_half = 0.0; // |X_kmax - X_{kmax/2}|
};

// P*_kmax / P_kmax through the rescaled forward recurrence.
inline XLimit X_limit(const ComplexParams &p, const Complex &x, long kmax)
{
    if (kmax < 2) {
        throw numeric_error(errc::invalid_input, "kmax must be >= 2");
    }
    auto sc = scaling_constants(p);
    ForwardConvergents<Complex> fwd(x_jfrac_spec(p, sc, x));
    std::optional<Complex> half, last;
    long k = 0;
    for (; k < kmax || !last; ++k) {
        if (k > kmax + 8) {
            throw numeric_error(errc::degenerate, "P_k keeps vanishing near kmax", k);
        }
        auto c = fwd.next();
        last = c.value;
        if (c.k == kmax / 2) {
            half = c.value;
        }
    }
    XLimit out;
    out.value = *last;
    out.depth = k;
    out.delta_half = half ? std::abs(*last - *half) : std::numeric_limits<double>::infinity();
    return out;
}

/*
 * Runs y_{k+1} = (A_k y_k + B_k y_{k-1}) / C_k from y_0, y_1 up to kmax with a
 * shared power-of-two scale, returning (y_{kmax-1}, y_kmax) in scaled form.
 */
template <typename Coeffs>
std::pair<ScaledValue, ScaledValue> scaled_three_term(Complex y0, Complex y1, long kmax, Coeffs coeffs)
{
    long exponent = 0;
    for (long k = 1; k < kmax; ++k) {
        auto [A, B, C] = coeffs(k);
        Complex y2 = (A * y1 + B * y0) / C;
        check_finite(y2, "scaled_three_term");
        y0 = y1;
        y1 = y2;
        double big = std::max(std::abs(y0), std::abs(y1));
        if (big != 0.0) {
            int e = std::ilogb(big);
            if (e > rescale_log2_limit || e < -rescale_log2_limit) {
                y0 = Complex(std::ldexp(y0.real(), -e), std::ldexp(y0.imag(), -e));
                y1 = Complex(std::ldexp(y1.real(), -e), std::ldexp(y1.imag(), -e));
                exponent += e;
            }
        }
    }
    return {ScaledValue::normalize(y0, exponent), ScaledValue::normalize(y1, exponent)};
}

struct DarbouxDiagnostics {
    long k = 0;
    bool double_pole = false;   // x = +-1 path, normalisation 2^k/(k+1)
    Complex r;                  // Q_k 2^k rho*^k (divided by k+1 on the double-pole path)
    Complex r_star;             // same for Q*_k
    Complex target;             // G(rho*)/(1 - rho*^2), or G(+-1)
    Complex target_star;        // 2 rho* F(rho*)/(1 - rho*^2), or 2(+-1)F(+-1)
    double rel_deviation = 0.0; // |r - target| / |target|
    double rel_deviation_star = 0.0;
    Complex ratio;              // r*/r
    Complex X;                  // closed form
    double ratio_deviation = 0.0;
};

/*
 * Compares Q_k(x), Q*_k(x) at index k with their leading Darboux terms.
 * Off [-1, 1] the dominant pole of the generating function is at t = 2 rho*,
 * so Q_k ~ (2 rho*)^{-k} G(rho*)/(1 - rho*^2). At x = +-1 the pole is double
 * and Q_k ~ (k+1)(2 rho*)^{-k} G(rho*).
 */
inline DarbouxDiagnostics darboux_ratio_check(const ComplexParams &p, const Complex &x, long k, double eps = 1e-14)
{
    if (k < 2) {
        throw numeric_error(errc::invalid_input, "k must be >= 2");
    }
    auto sc = scaling_constants(p);
    auto br = branch(x);
    const Complex rho = br.rho_star;
    DarbouxDiagnostics d;
    d.k = k;
    d.double_pole = std::abs(1.0 - rho * rho) == 0.0;

    const Complex F = F_series(rho, p, eps), G = G_series(rho, p, eps);
    if (d.double_pole) {
        d.target = G;
        d.target_star = 2.0 * rho * F;
    } else {
        d.target = G / (1.0 - rho * rho);
        d.target_star = 2.0 * rho * F / (1.0 - rho * rho);
    }
    d.X = 2.0 * rho * F / G;

    auto coeffs = [&](long j) {
        Complex lead = 1.0 - p.b * power(p.q, 2 * j + 1) / p.a;
        if (std::abs(lead) < pole_threshold) {
            throw numeric_error(errc::pole, "1 - bq^{2k+1}/a vanishes", j);
        }
        Complex A = x - sc.c * power(p.q, 2 * j);
        Complex B = -0.25 * (1.0 - p.a * power(p.q, 2 * j - 1) / p.b);
        return std::array<Complex, 3>{A, B, lead};
    };
    const Complex lead0 = 1.0 - p.b * p.q / p.a;
    auto q_seq = scaled_three_term(1.0, (x - sc.c) / lead0, k, coeffs);
    auto qs_seq = scaled_three_term(0.0, 1.0 / lead0, k, coeffs);

    ScaledValue norm = scaled_power(2.0 * rho, k);
    if (d.double_pole) {
        norm = norm / ScaledValue::normalize(static_cast<double>(k + 1));
    }
    d.r = (q_seq.second * norm).value();
    d.r_star = (qs_seq.second * norm).value();
    d.rel_deviation = std::abs(d.r - d.target) / std::abs(d.target);
    d.rel_deviation_star = std::abs(d.r_star - d.target_star) / std::abs(d.target_star);
    d.ratio = d.r_star / d.r;
    d.ratio_deviation = std::abs(d.ratio - d.X) / std::max(1.0, std::abs(d.X));
    return d;
}

struct GenfunExpansion {
    TruncatedSeries<Complex> series;
    std::vector<double> coeff_bound; // rigorous bound on the truncation error per coefficient
    long terms = 0;
};

/*
 * Expands
 *   numer(t) / prod_j (1 - d_j t) * sum_k prod_i (u_i t; Q)_k / prod_j (l_j t; Q)_k z^k
 * to the given order. The k-sum is cut once a Cauchy estimate on |t| = r
 * (r chosen so every lower factor stays >= 1/2) bounds the omitted part of
 * every coefficient below 1e-15 relative to the largest one.
 */
inline GenfunExpansion expand_q_genfun(const TruncatedSeries<Complex> &numer, std::span<const Complex> pre_roots,
                                       std::span<const Complex> upper, std::span<const Complex> lower,
                                       const Complex &Q, const Complex &z, std::size_t order)
{
    if (!(std::abs(z) < 1.0) || !(std::abs(Q) < 1.0)) {
        throw numeric_error(errc::divergence, "generating-function series needs |z| < 1 and |Q| < 1");
    }
    double lmax = 0.0;
    for (const auto &l : lower) {
        lmax = std::max(lmax, std::abs(l));
    }
    const double r = lmax > 0.0 ? std::min(1.0, 0.5 / lmax) : 1.0;
    const double rQ = std::abs(Q);

    std::vector<Complex> summand(order + 1, 0.0), sum(order + 1, 0.0);
    summand[0] = 1.0;
    double M = 1.0; // bound of |summand_k(t)| on |t| = r
    double rQk = 1.0;
    Complex Qk = 1.0;
    long k = 0;
    for (;; ++k) {
        if (k > 200000) {
            throw numeric_error(errc::divergence, "generating-function sum did not settle");
        }
        // ratio bound valid for all j >= k
        double ratio = std::abs(z);
        for (const auto &u : upper) {
            ratio *= 1.0 + std::abs(u) * r * rQk;
        }
        for (const auto &l : lower) {
            ratio /= 1.0 - std::abs(l) * r * rQk;
        }
        if (ratio < 1.0) {
            double tail = M / (1.0 - ratio);
            double scale = 1.0;
            for (const auto &c : sum) {
                scale = std::max(scale, std::abs(c));
            }
            if (tail / std::pow(r, static_cast<double>(order)) <= 1e-15 * scale) {
                break;
            }
        }
        for (std::size_t i = 0; i <= order; ++i) {
            sum[i] += summand[i];
        }
        for (const auto &u : upper) {
            multiply_linear(summand, Complex(u * Qk));
        }
        for (const auto &l : lower) {
            divide_linear(summand, Complex(l * Qk));
        }
        for (auto &c : summand) {
            c *= z;
        }
        double step = std::abs(z);
        for (const auto &u : upper) {
            step *= 1.0 + std::abs(u) * r * rQk;
        }
        for (const auto &l : lower) {
            step /= 1.0 - std::abs(l) * r * rQk;
        }
        M *= step;
        Qk *= Q;
        rQk *= rQ;
    }
    double tail = 0.0;
    {
        double ratio = std::abs(z);
        for (const auto &u : upper) {
            ratio *= 1.0 + std::abs(u) * r * rQk;
        }
        for (const auto &l : lower) {
            ratio /= 1.0 - std::abs(l) * r * rQk;
        }
        tail = M / (1.0 - ratio);
    }

    std::vector<Complex> pre(numer.coefficients().begin(), numer.coefficients().end());
    pre.resize(order + 1, 0.0);
    for (const auto &d : pre_roots) {
        divide_linear(pre, d);
    }
    GenfunExpansion out;
    out.series = TruncatedSeries<Complex>(pre) * TruncatedSeries<Complex>(sum);
    out.terms = k;
    out.coeff_bound.assign(order + 1, 0.0);
    for (std::size_t m = 0; m <= order; ++m) {
        for (std::size_t i = 0; i <= m; ++i) {
            out.coeff_bound[m] += std::abs(pre[i]) * tail / std::pow(r, static_cast<double>(m - i));
        }
    }
    return out;
}

struct GenfunCheck {
    double max_deviation = 0.0; // max_k |coef_k - y_k| / max(1, |y_k|)
    double max_tail_bound = 0.0;
    long terms = 0;
};

namespace detail
{

inline GenfunCheck compare_coefficients(const GenfunExpansion &e, std::span<const Complex> reference)
{
    GenfunCheck out;
    out.terms = e.terms;
    for (std::size_t k = 0; k < reference.size() && k <= e.series.order(); ++k) {
        double scale = std::max(1.0, std::abs(reference[k]));
        out.max_deviation = std::max(out.max_deviation, std::abs(e.series[k] - reference[k]) / scale);
        out.max_tail_bound = std::max(out.max_tail_bound, e.coeff_bound[k] / scale);
    }
    return out;
}

} // namespace detail

/*
 * Q(t)  = (1 - b/aq) / ((1 - rho1 t/2)(1 - rho2 t/2))
 *           * sum_k (gamma1 t, gamma2 t; q^2)_k / (rho1 q^2 t/2, rho2 q^2 t/2; q^2)_k (b/aq)^k
 * Q*(t) = t / (...) * same sum with argument bq/a.
 * Coefficients are compared against the recurrence values Q_k(x) (Q*_k(x)).
 */
inline GenfunCheck genfun_Q_check(const ComplexParams &p, const Complex &x, std::size_t order, bool star = false)
{
    auto sc = scaling_constants(p);
    auto br = branch(x);
    auto g = gammas(p, sc);
    const Complex q2 = p.q * p.q;
    const std::array<Complex, 2> roots{br.rho1 / 2.0, br.rho2 / 2.0};
    const std::array<Complex, 2> upper{g.gamma1, g.gamma2};
    const std::array<Complex, 2> lower{br.rho1 * q2 / 2.0, br.rho2 * q2 / 2.0};
    TruncatedSeries<Complex> numer =
        star ? TruncatedSeries<Complex>::linear(0.0, 1.0, order)
             : TruncatedSeries<Complex>::constant(1.0 - p.b / (p.a * p.q), order);
    const Complex z = star ? p.b * p.q / p.a : p.b / (p.a * p.q);
    auto e = expand_q_genfun(numer, roots, upper, lower, q2, z, order);
    auto ref = star ? Qstar_values(p, sc, x, static_cast<long>(std::max<std::size_t>(order, 1)))
                    : Q_values(p, sc, x, static_cast<long>(std::max<std::size_t>(order, 1)));
    ref.resize(order + 1);
    return detail::compare_coefficients(e, ref);
}

struct DeltaPair {
    Complex delta1;
    Complex delta2;
};

// 1 - (1-ab) x t - ab t^2 = (1 - delta1 t)(1 - delta2 t); at x = 1, delta1 = 1 and delta2 = -ab.
inline DeltaPair delta_roots(const ComplexParams &p, const Complex &x)
{
    const Complex s = (1.0 - p.a * p.b) * x;
    const Complex disc = s * s + 4.0 * p.a * p.b;
    if (std::abs(disc) < 1e-14 * std::max(1.0, std::abs(s * s))) {
        throw numeric_error(errc::degenerate, "delta1 == delta2 (zero discriminant)");
    }
    const Complex root = std::sqrt(disc);
    return {(s + root) / 2.0, (s - root) / 2.0};
}

/*
 * N^(t) = (1-ab) t / ((1 - d1 t)(1 - d2 t)) sum_m (-aqt/b, a^2 q t; q^2)_m / (d1 q^2 t, d2 q^2 t; q^2)_m (bq/a)^m
 * D^(t) = (1 - b/aq) / (...)             * same sum with argument b/aq
 * against N_k/(bq/a; q^2)_k and D_k/(bq/a; q^2)_k. Returns the worse of the two.
 */
inline GenfunCheck hatND_genfun_check(const ComplexParams &p, const Complex &x, std::size_t order)
{
    if (p.a == Complex(0.0, 0.0) || p.b == Complex(0.0, 0.0)) {
        throw numeric_error(errc::domain, "generating functions need a, b != 0");
    }
    auto dl = delta_roots(p, x);
    const Complex q2 = p.q * p.q;
    const std::array<Complex, 2> roots{dl.delta1, dl.delta2};
    const std::array<Complex, 2> upper{-p.a * p.q / p.b, p.a * p.a * p.q};
    const std::array<Complex, 2> lower{dl.delta1 * q2, dl.delta2 * q2};
    const Complex zN = p.b * p.q / p.a, zD = p.b / (p.a * p.q);

    auto nd = nd_values(p, x, static_cast<long>(std::max<std::size_t>(order, 1)));
    std::vector<Complex> nhat(order + 1), dhat(order + 1);
    for (std::size_t k = 0; k <= order; ++k) {
        Complex poch = qpoch(zN, q2, static_cast<long>(k));
        nhat[k] = nd.N[k] / poch;
        dhat[k] = nd.D[k] / poch;
    }
    auto eN = expand_q_genfun(TruncatedSeries<Complex>::linear(0.0, 1.0 - p.a * p.b, order), roots, upper, lower, q2,
                              zN, order);
    auto eD = expand_q_genfun(TruncatedSeries<Complex>::constant(1.0 - zD, order), roots, upper, lower, q2, zD,
                              order);
    auto cN = detail::compare_coefficients(eN, nhat);
    auto cD = detail::compare_coefficients(eD, dhat);
    return {std::max(cN.max_deviation, cD.max_deviation), std::max(cN.max_tail_bound, cD.max_tail_bound),
            std::max(cN.terms, cD.terms)};
}

// Leading Darboux values of N^_k(1) and D^_k(1) for |ab| < 1.
inline Complex nhat_limit(const ComplexParams &p, double eps)
{
    const Complex q2 = p.q * p.q;
    return (1.0 - p.a * p.b) / (1.0 + p.a * p.b) *
           phi21(-p.a * p.q / p.b, p.a * p.a * p.q, -p.a * p.b * q2, q2, p.b * p.q / p.a, eps).value;
}

inline Complex dhat_limit(const ComplexParams &p, double eps)
{
    const Complex q2 = p.q * p.q, z = p.b / (p.a * p.q);
    return (1.0 - z) / (1.0 + p.a * p.b) *
           phi21(-p.a * p.q / p.b, p.a * p.a * p.q, -p.a * p.b * q2, q2, z, eps).value;
}

// The limit-value diagnostics need |bq/a| < 1 (N^) and |b/aq| < 1 (D^); they
// are left empty outside those discs.
struct H1Asymptotics {
    double residual = 0.0;                       // |N^_k(1)/D^_k(1) - H(1) closed form|
    std::optional<double> heine_residual;        // |nhat_limit/dhat_limit - H(1) closed form|
    std::optional<double> nhat_rel_deviation;    // |N^_k(1) - nhat_limit| / |nhat_limit|
    std::optional<double> dhat_rel_deviation;
    Complex nhat_k;
    Complex dhat_k;
    Complex closed;
};

inline H1Asymptotics H1_asymptotic_check(const ComplexParams &p, long kmax, double eps)
{
    entry12::require(p, entry12::q_in_disk | entry12::ab_in_disk | entry12::a_nonzero | entry12::a2q_in_disk);
    if (p.b == Complex(0.0, 0.0)) {
        throw numeric_error(errc::domain, "asymptotic forms need b != 0");
    }
    H1Asymptotics out;
    out.closed = entry12::H1_closed(p, eps);
    auto nd = nd_values(p, Complex(1.0, 0.0), kmax);
    const Complex q2 = p.q * p.q;
    const Complex poch = qpoch(Complex(p.b * p.q / p.a), q2, kmax);
    out.nhat_k = nd.N[static_cast<std::size_t>(kmax)] / poch;
    out.dhat_k = nd.D[static_cast<std::size_t>(kmax)] / poch;
    out.residual = std::abs(out.nhat_k / out.dhat_k - out.closed);
    std::optional<Complex> nl, dl;
    if (std::abs(p.b * p.q / p.a) < 1.0) {
        nl = nhat_limit(p, eps);
        out.nhat_rel_deviation = std::abs(out.nhat_k - *nl) / std::abs(*nl);
    }
    if (std::abs(p.b / (p.a * p.q)) < 1.0) {
        dl = dhat_limit(p, eps);
        out.dhat_rel_deviation = std::abs(out.dhat_k - *dl) / std::abs(*dl);
    }
    if (nl && dl) {
        out.heine_residual = std::abs(*nl / *dl - out.closed);
    }
    return out;
}

} // namespace qcf::orthopoly

#endif // QCF_ORTHOPOLY_HPP
