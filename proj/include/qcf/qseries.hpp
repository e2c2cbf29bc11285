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

#ifndef QCF_QSERIES_HPP
#define QCF_QSERIES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <qcf/error.hpp>
#include <qcf/scalars.hpp>

namespace qcf
{

// Omitted part of a truncated sum or product. `terms` is the number of
// terms (or factors) actually used; `bound` is a rigorous upper bound on the
// absolute value of what was left out.
struct TailBound {
    long terms = 0;
    double bound = 0.0;
};

template <typename T>
struct Truncated {
    T value;
    TailBound tail;
};

// Denominator factors closer to zero than this are treated as poles.
inline constexpr double pole_threshold = 1e-13;

// Hard cap on the number of series terms / product factors.
inline constexpr long max_series_terms = 2'000'000;

// (a; q)_n = prod_{j=0}^{n-1} (1 - a q^j).
template <Field T>
T qpoch(const T &a, const T &q, long n)
{
    if (n < 0) {
        throw numeric_error(errc::invalid_input, "q-Pochhammer length must be nonnegative");
    }
    T result(1), aqj = a;
    for (long j = 0; j < n; ++j) {
        result = result * (T(1) - aqj);
        aqj = aqj * q;
    }
    return result;
}

struct InfiniteProduct {
    Complex value;
    TailBound tail;
    // Smallest |factor| over the whole infinite product (truncated part exact,
    // tail part bounded below). Used by callers to detect poles.
    double min_factor;
};

/*
 * (a; q)_inf for |q| < 1.
 *
 * With r = |q| and m = |a|, once m r^K < 1 the omitted factors satisfy
 *   |log prod_{k>=K} (1 - a q^k)| <= sum_{k>=K} m r^k / (1 - m r^k)
 *                                <= m r^K / ((1 - r)(1 - m r^K)) =: L,
 * so the relative error of the truncated product is at most e^L - 1. K is the
 * first index where that is <= eps.
 */
inline InfiniteProduct qpoch_infinite(const Complex &a, const Complex &q, double eps)
{
    const double r = std::abs(q), m = std::abs(a);
    if (!(r < 1.0)) {
        throw numeric_error(errc::domain, "infinite q-Pochhammer requires |q| < 1");
    }
    if (!(eps > 0.0)) {
        throw numeric_error(errc::invalid_input, "eps must be positive");
    }
    Complex value(1.0, 0.0), aqk = a;
    double mrk = m;
    double min_factor = std::numeric_limits<double>::infinity();
    for (long k = 0; k < max_series_terms; ++k) {
        if (mrk < 1.0) {
            double log_tail = mrk / ((1.0 - r) * (1.0 - mrk));
            double rel = std::expm1(log_tail);
            if (rel <= eps) {
                min_factor = std::min(min_factor, 1.0 - mrk);
                return {value, {k, std::abs(value) * rel}, min_factor};
            }
        }
        Complex factor = Complex(1.0, 0.0) - aqk;
        min_factor = std::min(min_factor, std::abs(factor));
        value *= factor;
        aqk *= q;
        mrk *= r;
        check_finite(value, "qpoch_infinite");
    }
    throw numeric_error(errc::divergence, "infinite q-Pochhammer did not reach tolerance");
}

inline Complex qpoch_multi(std::span<const Complex> args, const Complex &q, std::optional<long> n,
                           double eps = 1e-16)
{
    Complex result(1.0, 0.0);
    for (const auto &a : args) {
        result *= n ? qpoch(a, q, *n) : qpoch_infinite(a, q, eps).value;
    }
    return result;
}

template <Field T>
T qpoch_multi(std::span<const T> args, const T &q, long n)
{
    T result(1);
    for (const auto &a : args) {
        result = result * qpoch(a, q, n);
    }
    return result;
}

/*
 * r phi s [a_1..a_r ; b_1..b_s ; q, z]
 *   = sum_k (a_1..a_r; q)_k / (q, b_1..b_s; q)_k ((-1)^k q^(k choose 2))^(1+s-r) z^k.
 */
template <Field T>
struct PhiSeriesSpec {
    std::vector<T> upper;
    std::vector<T> lower;
    T q;
    T z;
};

namespace detail
{

// Upper bound on |t_{j+1}/t_j| valid for every j >= k, from parameter moduli.
// Non-increasing in k; +inf while some lower factor is not yet bounded away from zero.
template <Field T>
double phi_ratio_bound(const PhiSeriesSpec<T> &spec, long k)
{
    const double r = magnitude(spec.q);
    const double rk = std::pow(r, static_cast<double>(k));
    double num = 1.0, den = 1.0 - r * rk;
    for (const auto &a : spec.upper) {
        num *= 1.0 + magnitude(a) * rk;
    }
    for (const auto &b : spec.lower) {
        den *= 1.0 - magnitude(b) * rk;
    }
    if (!(den > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    long extra = static_cast<long>(spec.lower.size()) + 1 - static_cast<long>(spec.upper.size());
    double ratio = num / den * magnitude(spec.z);
    if (extra > 0) {
        ratio *= std::pow(rk, static_cast<double>(extra));
    }
    return ratio;
}

// t_{k+1} / t_k.
template <Field T>
T phi_term_ratio(const PhiSeriesSpec<T> &spec, long k, const T &qk)
{
    T num(1), den = T(1) - qk * spec.q;
    for (const auto &a : spec.upper) {
        num = num * (T(1) - a * qk);
    }
    for (std::size_t j = 0; j < spec.lower.size(); ++j) {
        T f = T(1) - spec.lower[j] * qk;
        if (is_negligible(f, pole_threshold)) {
            throw numeric_error(errc::pole,
                                "lower parameter b" + std::to_string(j + 1) + " hits q^(-" + std::to_string(k) + ")",
                                k);
        }
        den = den * f;
    }
    if (is_negligible(den, 0.0)) {
        throw numeric_error(errc::pole, "(q; q)_k vanishes", k);
    }
    long extra = static_cast<long>(spec.lower.size()) + 1 - static_cast<long>(spec.upper.size());
    T sign_power(1);
    for (long e = 0; e < extra; ++e) {
        sign_power = sign_power * (-qk);
    }
    return num / den * sign_power * spec.z;
}

template <Field T>
void check_phi_shape(const PhiSeriesSpec<T> &spec)
{
    if (spec.upper.size() > spec.lower.size() + 1) {
        throw numeric_error(errc::domain, "r > s + 1: series diverges unless it terminates");
    }
}

} // namespace detail

/*
 * Floating evaluation. Sums until the geometric majorant of the remainder,
 * |t_{K+1}| / (1 - R) with R bounding every later term ratio, is <= eps.
 */
inline Truncated<Complex> phi_eval(const PhiSeriesSpec<Complex> &spec, double eps)
{
    detail::check_phi_shape(spec);
    if (!(eps > 0.0)) {
        throw numeric_error(errc::invalid_input, "eps must be positive");
    }
    if (!(std::abs(spec.q) < 1.0)) {
        throw numeric_error(errc::domain, "basic hypergeometric series requires |q| < 1");
    }
    if (spec.upper.size() == spec.lower.size() + 1 && !(std::abs(spec.z) < 1.0)) {
        throw numeric_error(errc::divergence, "r = s + 1 series requires |z| < 1");
    }
    Complex sum(0.0, 0.0), term(1.0, 0.0), qk(1.0, 0.0);
    for (long k = 0; k < max_series_terms; ++k) {
        sum += term;
        Complex next = term * detail::phi_term_ratio(spec, k, qk);
        check_finite(next, "phi_eval");
        check_finite(sum, "phi_eval");
        if (next == Complex(0.0, 0.0)) {
            return {sum, {k + 1, 0.0}};
        }
        double R = detail::phi_ratio_bound(spec, k + 1);
        if (R < 1.0) {
            double tail = std::abs(next) / (1.0 - R);
            if (tail <= eps) {
                return {sum, {k + 1, tail}};
            }
        }
        term = next;
        qk *= spec.q;
    }
    throw numeric_error(errc::divergence, "series did not reach tolerance");
}

/*
 * Partial sum over k = 0..K, in the scalar field of the spec (exact for
 * BigRational). The tail bound is computed in floating point; it is 0 when
 * the series terminated and +inf when no geometric majorant applies yet.
 */
template <Field T>
Truncated<T> phi_sum(const PhiSeriesSpec<T> &spec, long K)
{
    detail::check_phi_shape(spec);
    T sum(0), term(1), qk(1);
    for (long k = 0; k <= K; ++k) {
        sum = sum + term;
        term = term * detail::phi_term_ratio(spec, k, qk);
        qk = qk * spec.q;
        if (is_zero(term)) {
            return {sum, {k + 1, 0.0}};
        }
    }
    double R = detail::phi_ratio_bound(spec, K + 1);
    double tail = R < 1.0 ? magnitude(term) / (1.0 - R) : std::numeric_limits<double>::infinity();
    return {sum, {K + 1, tail}};
}

// 2phi1(a, b; c; q, z) convenience wrapper.
inline Truncated<Complex> phi21(const Complex &a, const Complex &b, const Complex &c, const Complex &q,
                                const Complex &z, double eps)
{
    return phi_eval(PhiSeriesSpec<Complex>{{a, b}, {c}, q, z}, eps);
}

// |1phi0(a; -; q, z) - (az; q)_inf / (z; q)_inf|
inline double qbinomial_residual(const Complex &a, const Complex &z, const Complex &q, double eps)
{
    if (!(std::abs(z) < 1.0) || !(std::abs(q) < 1.0)) {
        throw numeric_error(errc::domain, "q-binomial theorem requires |z| < 1 and |q| < 1");
    }
    auto series = phi_eval(PhiSeriesSpec<Complex>{{a}, {}, q, z}, eps);
    auto num = qpoch_infinite(a * z, q, eps);
    auto den = qpoch_infinite(z, q, eps);
    if (den.min_factor < pole_threshold) {
        throw numeric_error(errc::pole, "(z; q)_inf vanishes");
    }
    return std::abs(series.value - num.value / den.value);
}

/*
 * Heine's transformation:
 *   2phi1(a, b; c; q, z) = (b, az; q)_inf / (c, z; q)_inf * 2phi1(c/b, z; az; q, b),
 * valid for |z| < 1, |b| < 1, |q| < 1. Returns |lhs - rhs|.
 */
inline double heine_residual(const Complex &a, const Complex &b, const Complex &c, const Complex &z,
                             const Complex &q, double eps)
{
    if (!(std::abs(z) < 1.0) || !(std::abs(b) < 1.0) || !(std::abs(q) < 1.0)) {
        throw numeric_error(errc::domain, "Heine transformation requires |z| < 1, |b| < 1, |q| < 1");
    }
    if (b == Complex(0.0, 0.0)) {
        throw numeric_error(errc::domain, "Heine transformation requires b != 0");
    }
    auto lhs = phi21(a, b, c, q, z, eps);
    auto rhs_series = phi21(c / b, z, a * z, q, b, eps);
    auto pb = qpoch_infinite(b, q, eps);
    auto paz = qpoch_infinite(a * z, q, eps);
    auto pc = qpoch_infinite(c, q, eps);
    auto pz = qpoch_infinite(z, q, eps);
    if (pc.min_factor < pole_threshold || pz.min_factor < pole_threshold) {
        throw numeric_error(errc::pole, "(c, z; q)_inf vanishes");
    }
    Complex rhs = pb.value * paz.value / (pc.value * pz.value) * rhs_series.value;
    return std::abs(lhs.value - rhs);
}

} // namespace qcf

#endif // QCF_QSERIES_HPP
