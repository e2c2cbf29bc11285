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

#ifndef QCF_ENTRY12_HPP
#define QCF_ENTRY12_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <qcf/cfrac.hpp>
#include <qcf/error.hpp>
#include <qcf/qseries.hpp>
#include <qcf/scalars.hpp>

/*
 * The q-continued fraction identity
 *
 *   (a^2 q^3, b^2 q^3; q^4)_inf / (a^2 q, b^2 q; q^4)_inf
 *     = 1/(1-ab) + (a-bq)(b-aq)/((1-ab)(1+q^2)) + (a-bq^3)(b-aq^3)/((1-ab)(1+q^4)) + ...
 *
 * for |q| < 1, |ab| < 1; together with the Euler-method building blocks
 * D(s), the exact splitting identities used to derive the fraction, the
 * finite-depth identity with a D-ratio tail, the closed form of the J-fraction
 * H(1), and the two normalisations for |ab| > 1 and |q| > 1.
 */
namespace qcf::entry12
{

template <Field T>
struct Params {
    T a;
    T b;
    T q;
};

using ComplexParams = Params<Complex>;

enum requirement : unsigned {
    q_in_disk = 1u << 0,   // |q| < 1
    ab_in_disk = 1u << 1,  // |ab| < 1
    a_nonzero = 1u << 2,   // a != 0
    a2q_in_disk = 1u << 3, // |a^2 q| < 1
};

template <Field T>
void require(const Params<T> &p, unsigned flags)
{
    auto fail = [](const char *what) { throw numeric_error(errc::domain, std::string("precondition ") + what + " violated"); };
    if ((flags & q_in_disk) && !(magnitude(p.q) < 1.0)) {
        fail("|q|<1");
    }
    if ((flags & ab_in_disk) && !(magnitude(T(p.a * p.b)) < 1.0)) {
        fail("|ab|<1");
    }
    if ((flags & a_nonzero) && is_zero(p.a)) {
        fail("a!=0");
    }
    if ((flags & a2q_in_disk) && !(magnitude(T(p.a * p.a * p.q)) < 1.0)) {
        fail("|a^2q|<1");
    }
}

template <Field T>
Params<Complex> to_complex(const Params<T> &p)
{
    return {qcf::to_complex(p.a), qcf::to_complex(p.b), qcf::to_complex(p.q)};
}

// (a - b q^m)(b - a q^m), the recurring partial numerator.
template <Field T>
T partial_numerator(const Params<T> &p, long m)
{
    T qm = power(p.q, m);
    return (p.a - p.b * qm) * (p.b - p.a * qm);
}

// Product side of the identity; each of the four products gets eps/4.
inline Complex product_side(const ComplexParams &p, double eps)
{
    require(p, q_in_disk);
    const Complex q4 = std::pow(p.q, 4), a2 = p.a * p.a, b2 = p.b * p.b, q3 = p.q * p.q * p.q;
    auto n1 = qpoch_infinite(a2 * q3, q4, eps / 4);
    auto n2 = qpoch_infinite(b2 * q3, q4, eps / 4);
    auto d1 = qpoch_infinite(a2 * p.q, q4, eps / 4);
    auto d2 = qpoch_infinite(b2 * p.q, q4, eps / 4);
    if (d1.min_factor < pole_threshold || d2.min_factor < pole_threshold) {
        throw numeric_error(errc::pole, "vanishing factor in (a^2 q, b^2 q; q^4)_inf");
    }
    return n1.value * n2.value / (d1.value * d2.value);
}

// Ramanujan's fraction C: a_1 = 1, b_1 = 1-ab; a_{k+1} = (a-bq^{2k-1})(b-aq^{2k-1}),
// b_{k+1} = (1-ab)(1+q^{2k}).
template <Field T>
CFSpec<T> cf_C_spec(const Params<T> &p)
{
    CFSpec<T> cf;
    cf.b0 = T(0);
    cf.terms = [p](long j) {
        T one_ab = T(1) - p.a * p.b;
        if (j == 1) {
            return std::pair<T, T>{T(1), one_ab};
        }
        long k = j - 1;
        return std::pair<T, T>{partial_numerator(p, 2 * k - 1), one_ab * (T(1) + power(p.q, 2 * k))};
    };
    return cf;
}

// K = H(1)/(1-ab): as C but with first denominator 2(1-ab).
template <Field T>
CFSpec<T> cf_K_spec(const Params<T> &p)
{
    CFSpec<T> cf = cf_C_spec(p);
    cf.terms = [inner = cf.terms, p](long j) {
        if (j == 1) {
            return std::pair<T, T>{T(1), T(2) * (T(1) - p.a * p.b)};
        }
        return inner(j);
    };
    return cf;
}

// The J-fraction H(x): a_1 = 1-ab, b_1 = (1-ab)(x+1);
// a_{k+1} = (a-bq^{2k-1})(b-aq^{2k-1}), b_{k+1} = (1-ab)x + (1-ab)q^{2k}.
template <Field T>
CFSpec<T> jfrac_H_spec(const Params<T> &p, const T &x)
{
    CFSpec<T> cf;
    cf.b0 = T(0);
    cf.terms = [p, x](long j) {
        T one_ab = T(1) - p.a * p.b;
        if (j == 1) {
            return std::pair<T, T>{one_ab, one_ab * x + one_ab};
        }
        long k = j - 1;
        return std::pair<T, T>{partial_numerator(p, 2 * k - 1), one_ab * x + one_ab * power(p.q, 2 * k)};
    };
    return cf;
}

struct DsValue {
    long s = 0;
    Complex value;
    TailBound tail;
};

/*
 * D(s) = sum_k (b q^{2s-1}/a, -bq/a; q^2)_k / (q^2, -q^{2s}; q^2)_k (a^2 q)^k,
 * i.e. 2phi1(b q^{2s-1}/a, -bq/a; -q^{2s}; q^2, a^2 q). The tail is bounded
 * relative to |D(s)| by eps.
 */
inline DsValue D_sum(long s, const ComplexParams &p, double eps)
{
    if (s < 0) {
        throw numeric_error(errc::invalid_input, "D(s) needs s >= 0");
    }
    if (p.a == Complex(0.0, 0.0)) {
        throw numeric_error(errc::domain, "D(s) requires a != 0");
    }
    if (!(std::abs(p.a * p.a * p.q) < 1.0)) {
        throw numeric_error(errc::divergence, "D(s) requires |a^2 q| < 1");
    }
    const Complex q2 = p.q * p.q;
    PhiSeriesSpec<Complex> spec{{p.b * power(p.q, 2 * s - 1) / p.a, -p.b * p.q / p.a}, {-power(p.q, 2 * s)}, q2,
                                p.a * p.a * p.q};
    auto r = phi_eval(spec, eps);
    if (r.tail.bound > eps * std::abs(r.value)) {
        r = phi_eval(spec, eps * std::abs(r.value));
    }
    return {s, r.value, r.tail};
}

// Right-minus-left of the exact splitting identity
//   a^2 q (1 + b^2 q^{2k}/a^2)/(1 + q^{2k+2}) = ab + a(aq - b)(1 - b q^{2k+1}/a)/(1 + q^{2k+2}).
template <Field T>
T star_residual(long k, const Params<T> &p)
{
    if (is_zero(p.a)) {
        throw numeric_error(errc::domain, "(*) requires a != 0");
    }
    const T &a = p.a, &b = p.b, &q = p.q;
    T den = T(1) + power(q, 2 * k + 2);
    T lhs = a * a * q * (T(1) + b * b * power(q, 2 * k) / (a * a)) / den;
    T rhs = a * b + a * (a * q - b) * (T(1) - b * power(q, 2 * k + 1) / a) / den;
    return lhs - rhs;
}

// Same for
//   (1 + b q^{2k+1}/a)(a^2 q^{2s+1} + ab q^{2s}) / ((1+q^{2s})(1+q^{2k+2s+2}))
//     = ab + a(a q^{2s+1} - b)(1 - b q^{2k+2s+1}/a) / ((1+q^{2s})(1+q^{2k+2s+2})).
template <Field T>
T twostar_residual(long k, long s, const Params<T> &p)
{
    if (is_zero(p.a)) {
        throw numeric_error(errc::domain, "(**) requires a != 0");
    }
    const T &a = p.a, &b = p.b, &q = p.q;
    T den = (T(1) + power(q, 2 * s)) * (T(1) + power(q, 2 * k + 2 * s + 2));
    T lhs = (T(1) + b * power(q, 2 * k + 1) / a) * (a * a * power(q, 2 * s + 1) + a * b * power(q, 2 * s)) / den;
    T rhs = a * b + a * (a * power(q, 2 * s + 1) - b) * (T(1) - b * power(q, 2 * k + 2 * s + 1) / a) / den;
    return lhs - rhs;
}

namespace detail
{

inline void check_conditioning(const DsValue &d, double eps)
{
    // The D-ratio loses all accuracy once |D| is comparable to its own tail budget.
    if (std::abs(d.value) < std::max(1e3 * eps, 1e-12)) {
        throw numeric_error(errc::conditioning,
                            "|D(" + std::to_string(d.s) + ")| = " + std::to_string(std::abs(d.value)) +
                                " too small for a stable ratio",
                            d.s);
    }
}

} // namespace detail

/*
 * |(1+q^{2s}) D(s)/D(s+1) - (1-ab)(1+q^{2s})
 *    - (a-bq^{2s+1})(b-aq^{2s+1}) / ((1+q^{2s+2}) D(s+1)/D(s+2))|
 */
inline double recursion_residual(long s, const ComplexParams &p, double eps)
{
    require(p, q_in_disk | a_nonzero | a2q_in_disk);
    auto d0 = D_sum(s, p, eps / 10), d1 = D_sum(s + 1, p, eps / 10), d2 = D_sum(s + 2, p, eps / 10);
    detail::check_conditioning(d1, eps);
    detail::check_conditioning(d2, eps);
    const Complex q2s = power(p.q, 2 * s), q2s2 = power(p.q, 2 * s + 2);
    Complex lhs = (1.0 + q2s) * d0.value / d1.value;
    Complex rhs = (1.0 - p.a * p.b) * (1.0 + q2s) +
                  partial_numerator(p, 2 * s + 1) / ((1.0 + q2s2) * d1.value / d2.value);
    return std::abs(lhs - rhs);
}

/*
 * The product side equals D(1) over
 *   sum_k (b/aq, -b/aq; q^2)_k / (q^2, -q^2; q^2)_k (a^2 q^3)^k.
 */
inline double step1_residual(const ComplexParams &p, double eps)
{
    require(p, q_in_disk | a_nonzero | a2q_in_disk);
    const Complex q2 = p.q * p.q, u = p.b / (p.a * p.q);
    auto num = D_sum(1, p, eps / 10);
    auto den = phi21(u, -u, -q2, q2, p.a * p.a * p.q * q2, eps / 10);
    return std::abs(product_side(p, eps / 10) - num.value / den.value);
}

/*
 * U/V = (1-ab) + (a-bq)(b-aq)/((1+q^2) D(1)/D(2)) with
 *   U = 2phi1(b/aq, -b/aq; -q^2; q^2, a^2 q^3),  V = 2phi1(bq/a, -bq/a; -q^2; q^2, a^2 q) = D(1).
 */
inline double step2_residual(const ComplexParams &p, double eps)
{
    require(p, q_in_disk | a_nonzero | a2q_in_disk);
    const Complex q2 = p.q * p.q, u = p.b / (p.a * p.q), v = p.b * p.q / p.a;
    auto U = phi21(u, -u, -q2, q2, p.a * p.a * p.q * q2, eps / 10);
    auto V = phi21(v, -v, -q2, q2, p.a * p.a * p.q, eps / 10);
    auto d1 = D_sum(1, p, eps / 10), d2 = D_sum(2, p, eps / 10);
    detail::check_conditioning(d2, eps);
    Complex rhs = (1.0 - p.a * p.b) + partial_numerator(p, 1) / ((1.0 + q2) * d1.value / d2.value);
    return std::abs(U.value / V.value - rhs);
}

/*
 * Finite-depth identity: the first s+1 levels of C followed by the tail
 * (a-bq^{2s+1})(b-aq^{2s+1}) / ((1+q^{2s+2}) D(s+1)/D(s+2)) reproduce the
 * product side exactly. Evaluated as the modified approximant S_{s+1}(w).
 */
inline Complex theorem1_value(long s, const ComplexParams &p, double eps)
{
    require(p, q_in_disk | a_nonzero | a2q_in_disk);
    auto d1 = D_sum(s + 1, p, eps / 10), d2 = D_sum(s + 2, p, eps / 10);
    detail::check_conditioning(d1, eps);
    detail::check_conditioning(d2, eps);
    Complex w = partial_numerator(p, 2 * s + 1) / ((1.0 + power(p.q, 2 * s + 2)) * d1.value / d2.value);
    return eval_backward(cf_C_spec(p), s + 1, w);
}

inline double theorem1_residual(long s, const ComplexParams &p, double eps)
{
    return std::abs(theorem1_value(s, p, eps) - product_side(p, eps / 10));
}

struct LimitCheck {
    double residual = 0.0;
    Complex reference;
    CFLimit<Complex> limit;
};

// |limit of C - product side|
inline LimitCheck entry12_residual(const ComplexParams &p, double eps, long max_depth)
{
    require(p, q_in_disk | ab_in_disk);
    Complex prod = product_side(p, eps);
    auto lim = limit_detect(cf_C_spec(p), eps, max_depth);
    return {std::abs(lim.value - prod), prod, lim};
}

// H(1) = ((1-ab)/2) 2phi1(-bq/a, bq/a; -q^2; q^2, a^2 q) / 2phi1(-bq/a, b/aq; -1; q^2, a^2 q)
//      = ((1-ab)/2) D(1)/D(0).
inline Complex H1_closed(const ComplexParams &p, double eps)
{
    require(p, q_in_disk | ab_in_disk | a_nonzero | a2q_in_disk);
    const Complex q2 = p.q * p.q, v = p.b * p.q / p.a, z = p.a * p.a * p.q;
    auto num = phi21(-v, v, -q2, q2, z, eps);
    auto den = phi21(-v, p.b / (p.a * p.q), Complex(-1.0, 0.0), q2, z, eps);
    if (std::abs(den.value) < std::max(1e3 * eps, 1e-12)) {
        throw numeric_error(errc::pole, "denominator series of H(1) vanishes");
    }
    return (1.0 - p.a * p.b) / 2.0 * num.value / den.value;
}

// |H(1) closed form - J-fraction limit at x = 1|
inline LimitCheck h1_residual(const ComplexParams &p, double eps, long max_depth)
{
    Complex closed = H1_closed(p, eps);
    auto lim = limit_detect(jfrac_H_spec(p, Complex(1.0, 0.0)), eps, max_depth);
    return {std::abs(lim.value - closed), closed, lim};
}

struct KCCheck {
    double residual = 0.0;
    CFLimit<Complex> K;
    CFLimit<Complex> C;
};

// |1/K - (1-ab) - 1/C| from the two fraction limits.
inline KCCheck kc_residual(const ComplexParams &p, double eps, long max_depth)
{
    require(p, q_in_disk | ab_in_disk);
    auto K = limit_detect(cf_K_spec(p), eps, max_depth);
    auto C = limit_detect(cf_C_spec(p), eps, max_depth);
    if (K.value == Complex(0.0, 0.0) || C.value == Complex(0.0, 0.0)) {
        throw numeric_error(errc::pole, "K or C vanishes");
    }
    return {std::abs(1.0 / K.value - (1.0 - p.a * p.b) - 1.0 / C.value), K, C};
}

// (a, b, q) -> (1/a, 1/b, q), the normalisation for |ab| > 1.
template <Field T>
Params<T> invert_params(const Params<T> &p)
{
    if (is_zero(p.a) || is_zero(p.b)) {
        throw numeric_error(errc::invalid_input, "inversion needs a, b != 0");
    }
    return {T(T(1) / p.a), T(T(1) / p.b), p.q};
}

// (a, b, q) -> (a, b, 1/q), the normalisation for |q| > 1.
template <Field T>
Params<T> invert_q(const Params<T> &p)
{
    if (is_zero(p.q)) {
        throw numeric_error(errc::invalid_input, "inversion needs q != 0");
    }
    return {p.a, p.b, T(T(1) / p.q)};
}

/*
 * For |ab| > 1, C(a, b, q) is equivalent (multipliers c_k = -ab) to
 *   (-1/ab)/(1-(ab)^{-1}) + (a'-b'q)(b'-a'q)/((1-(ab)^{-1})(1+q^2)) + ...
 * with a' = 1/a, b' = 1/b, i.e. C(a', b', q) with first numerator -1/ab.
 * Its value is the product side at (a', b', q) divided by -ab.
 */
template <Field T>
CFSpec<T> inverted_ab_spec(const Params<T> &p)
{
    Params<T> inv = invert_params(p);
    CFSpec<T> cf = cf_C_spec(inv);
    T first = -(inv.a * inv.b);
    cf.terms = [inner = cf.terms, first](long j) {
        auto t = inner(j);
        if (j == 1) {
            t.first = first;
        }
        return t;
    };
    return cf;
}

template <Field T>
std::function<T(long)> inverted_ab_multipliers(const Params<T> &p)
{
    T c = -(p.a * p.b);
    return [c](long) { return c; };
}

// For |q| > 1, C(a, b, q) is equivalent to C(a, b, 1/q) with c_k = q^{2(k-1)}.
template <Field T>
std::function<T(long)> inverted_q_multipliers(const Params<T> &p)
{
    T q = p.q;
    return [q](long k) { return power(q, 2 * (k - 1)); };
}

struct EquivalenceCheck {
    double max_approximant_deviation = 0.0; // original vs normalised fraction, per depth
    double max_term_deviation = 0.0;        // original terms vs equivalence-transformed normalised terms
};

namespace detail
{

inline double rel_dev(const Complex &x, const Complex &y)
{
    return std::abs(x - y) / std::max(1.0, std::abs(y));
}

inline EquivalenceCheck compare_equivalent(const CFSpec<Complex> &original, const CFSpec<Complex> &normalised,
                                           std::function<Complex(long)> multipliers, long depth)
{
    EquivalenceCheck out;
    ForwardConvergents<Complex> fo(original), fn(normalised);
    auto transformed = equivalence_transform(normalised, std::move(multipliers));
    for (long k = 1; k <= depth; ++k) {
        auto co = fo.next(), cn = fn.next();
        if (co.value && cn.value) {
            out.max_approximant_deviation = std::max(out.max_approximant_deviation, rel_dev(*co.value, *cn.value));
        } else if (co.value.has_value() != cn.value.has_value()) {
            out.max_approximant_deviation = std::numeric_limits<double>::infinity();
        }
        auto [ao, bo] = original.term(k);
        auto [at, bt] = transformed.term(k);
        out.max_term_deviation = std::max({out.max_term_deviation, std::abs(ao - at) / std::max(1.0, std::abs(ao)),
                                           std::abs(bo - bt) / std::max(1.0, std::abs(bo))});
    }
    return out;
}

} // namespace detail

inline EquivalenceCheck inverted_ab_check(const ComplexParams &p, long depth)
{
    return detail::compare_equivalent(cf_C_spec(p), inverted_ab_spec(p), inverted_ab_multipliers(p), depth);
}

inline EquivalenceCheck inverted_q_check(const ComplexParams &p, long depth)
{
    return detail::compare_equivalent(cf_C_spec(p), cf_C_spec(invert_q(p)), inverted_q_multipliers(p), depth);
}

// Value of C for |ab| > 1, |q| < 1: product side at (1/a, 1/b, q) divided by -ab.
inline Complex inverted_ab_value(const ComplexParams &p, double eps)
{
    return product_side(invert_params(p), eps) / (-(p.a * p.b));
}

} // namespace qcf::entry12

#endif // QCF_ENTRY12_HPP
