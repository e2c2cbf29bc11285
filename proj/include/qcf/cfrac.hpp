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

#ifndef QCF_CFRAC_HPP
#define QCF_CFRAC_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <qcf/error.hpp>
#include <qcf/scalars.hpp>

namespace qcf
{

/*
 * b0 + a1/(b1 + a2/(b2 + ...)).
 *
 * `terms(k)` yields (a_k, b_k) for k >= 1. A partial numerator a_k == 0
 * terminates the fraction: every approximant from index k on equals
 * S_{k-1}(0). `truncation_hint`, when set, is an index known to carry a
 * vanishing a_k; generation never goes past it.
 */
template <Field T>
struct CFSpec {
    T b0{0};
    std::function<std::pair<T, T>(long)> terms;
    std::optional<long> truncation_hint;

    std::pair<T, T> term(long k) const
    {
        return terms(k);
    }
};

// Forward recurrence state. The four entries share one power-of-two scale:
// the true values are entry * 2^exponent, so num/den is exact S_k(0).
template <Field T>
struct ConvergentState {
    T num{0}, num_prev{1}, den{1}, den_prev{0};
    long k = 0;
    long exponent = 0;

    std::optional<T> approximant() const
    {
        if (is_zero(den)) {
            return std::nullopt;
        }
        return num / den;
    }

    ScaledValue scaled_num() const
        requires std::same_as<T, Complex>
    {
        return ScaledValue::normalize(num, exponent);
    }
    ScaledValue scaled_den() const
        requires std::same_as<T, Complex>
    {
        return ScaledValue::normalize(den, exponent);
    }
};

template <Field T>
struct Convergent {
    long k;
    std::optional<T> value; // nullopt when D_k == 0
    ConvergentState<T> state;
    bool terminated; // a vanishing partial numerator has been met at or before k
};

inline constexpr int rescale_log2_limit = 512;

/*
 * Streams the approximants S_k(0) = N_k / D_k, k = 1, 2, ..., from
 *   N_k = b_k N_{k-1} + a_k N_{k-2},  D_k = b_k D_{k-1} + a_k D_{k-2},
 *   N_{-1} = 1, N_0 = b0, D_{-1} = 0, D_0 = 1.
 * In floating mode all four entries are rescaled by the same power of two
 * whenever the largest magnitude leaves [2^-512, 2^512].
 */
template <Field T>
class ForwardConvergents
{
public:
    explicit ForwardConvergents(CFSpec<T> cf, bool rescale = true) : m_cf(std::move(cf)), m_rescale(rescale)
    {
        m_state.num = m_cf.b0;
        m_state.num_prev = T(1);
        m_state.den = T(1);
        m_state.den_prev = T(0);
    }

    const ConvergentState<T> &state() const
    {
        return m_state;
    }
    bool terminated() const
    {
        return m_terminated;
    }

    Convergent<T> next()
    {
        const long k = m_state.k + 1;
        if (!m_terminated && m_cf.truncation_hint && k >= *m_cf.truncation_hint) {
            m_terminated = true;
        }
        if (!m_terminated) {
            auto [a, b] = m_cf.term(k);
            if (is_zero(a)) {
                m_terminated = true;
            } else {
                T num = b * m_state.num + a * m_state.num_prev;
                T den = b * m_state.den + a * m_state.den_prev;
                m_state.num_prev = std::move(m_state.num);
                m_state.den_prev = std::move(m_state.den);
                m_state.num = std::move(num);
                m_state.den = std::move(den);
            }
        }
        if (m_terminated) {
            // Frozen: N_k = N_{k-1}, D_k = D_{k-1}.
            m_state.num_prev = m_state.num;
            m_state.den_prev = m_state.den;
        }
        m_state.k = k;
        if constexpr (!field_traits<T>::exact) {
            check_finite(to_complex(m_state.num), "forward convergents");
            check_finite(to_complex(m_state.den), "forward convergents");
            if (m_rescale) {
                rescale();
            }
        }
        if (is_zero(m_state.den)) {
            if (++m_zero_dens >= 3) {
                throw numeric_error(errc::degenerate, "D_k vanished for 3 consecutive k", k);
            }
        } else {
            m_zero_dens = 0;
        }
        return {k, m_state.approximant(), m_state, m_terminated};
    }

private:
    void rescale()
    {
        double big = std::max({magnitude(m_state.num), magnitude(m_state.num_prev), magnitude(m_state.den),
                               magnitude(m_state.den_prev)});
        if (big == 0.0) {
            return;
        }
        int e = std::ilogb(big);
        if (e > rescale_log2_limit || e < -rescale_log2_limit) {
            auto scale = [e](T &v) { v = T(std::ldexp(1.0, -e)) * v; };
            scale(m_state.num);
            scale(m_state.num_prev);
            scale(m_state.den);
            scale(m_state.den_prev);
            m_state.exponent += e;
        }
    }

    CFSpec<T> m_cf;
    ConvergentState<T> m_state;
    bool m_rescale;
    bool m_terminated = false;
    int m_zero_dens = 0;
};

// k-th approximant through the forward recurrence.
template <Field T>
std::optional<T> approximant(const CFSpec<T> &cf, long n)
{
    if (n == 0) {
        return cf.b0;
    }
    ForwardConvergents<T> fwd(cf);
    Convergent<T> c{0, cf.b0, {}, false};
    for (long k = 1; k <= n; ++k) {
        c = fwd.next();
    }
    return c.value;
}

/*
 * S_n(w) = b0 + a1/(b1 + a2/(... + a_n/(b_n + w))) by backward recurrence.
 * A vanishing a_j with j <= n truncates to S_{j-1}(0).
 */
template <Field T>
T eval_backward(const CFSpec<T> &cf, long n, const T &w)
{
    if (n < 0) {
        throw numeric_error(errc::invalid_input, "depth must be nonnegative");
    }
    long last = n;
    T tail = w;
    std::vector<std::pair<T, T>> terms;
    terms.reserve(static_cast<std::size_t>(n));
    for (long k = 1; k <= n; ++k) {
        if (cf.truncation_hint && k >= *cf.truncation_hint) {
            last = k - 1;
            tail = T(0);
            break;
        }
        auto t = cf.term(k);
        if (is_zero(t.first)) {
            last = k - 1;
            tail = T(0);
            break;
        }
        terms.push_back(std::move(t));
    }
    for (long k = last; k >= 1; --k) {
        const auto &[a, b] = terms[static_cast<std::size_t>(k - 1)];
        T den = b + tail;
        if (is_zero(den)) {
            throw numeric_error(errc::pole, "zero intermediate denominator at index " + std::to_string(k), k);
        }
        tail = a / den;
    }
    return cf.b0 + tail;
}

// N_k D_{k-1} - N_{k-1} D_k - (-1)^(k-1) a_1 ... a_k; identically zero.
template <Field T>
T determinant_check(const CFSpec<T> &cf, long k)
{
    if (k < 1) {
        throw numeric_error(errc::invalid_input, "determinant check needs k >= 1");
    }
    ForwardConvergents<T> fwd(cf, /*rescale=*/false);
    T prod(1);
    bool hit_zero = false;
    for (long j = 1; j <= k; ++j) {
        if (!hit_zero) {
            T a = cf.term(j).first;
            if (is_zero(a) || (cf.truncation_hint && j >= *cf.truncation_hint)) {
                hit_zero = true;
                prod = T(0);
            } else {
                prod = prod * a;
            }
        }
        fwd.next();
    }
    const auto &s = fwd.state();
    T sign = (k - 1) % 2 == 0 ? T(1) : T(-1);
    return s.num * s.den_prev - s.num_prev * s.den - sign * prod;
}

template <Field T>
struct CFLimit {
    T value{0};
    long depth = 0;
    double last_delta = 0.0;
    bool converged = false;
};

/*
 * Iterates forward approximants until |S_k - S_{k-1}| <= eps holds for three
 * consecutive k, or max_depth is reached. A terminating fraction converges
 * exactly at the depth just before its vanishing partial numerator.
 */
template <Field T>
CFLimit<T> limit_detect(const CFSpec<T> &cf, double eps, long max_depth)
{
    if (!(eps > 0.0)) {
        throw numeric_error(errc::invalid_input, "eps must be positive");
    }
    ForwardConvergents<T> fwd(cf);
    CFLimit<T> out;
    std::optional<T> prev = cf.b0;
    int small = 0;
    for (long k = 1; k <= max_depth; ++k) {
        auto c = fwd.next();
        if (c.terminated) {
            out.value = prev.value_or(T(0));
            out.depth = k - 1;
            out.last_delta = 0.0;
            out.converged = prev.has_value();
            return out;
        }
        if (c.value && prev) {
            out.last_delta = distance(*c.value, *prev);
            small = out.last_delta <= eps ? small + 1 : 0;
        } else {
            small = 0;
        }
        if (c.value) {
            out.value = *c.value;
        }
        out.depth = k;
        prev = c.value;
        if (small >= 3) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

// a_k' = c_k c_{k-1} a_k, b_k' = c_k b_k with c_0 = 1; approximants are unchanged.
template <Field T>
CFSpec<T> equivalence_transform(CFSpec<T> cf, std::function<T(long)> c)
{
    auto checked = [c](long k) {
        if (k == 0) {
            return T(1);
        }
        T v = c(k);
        if (is_zero(v)) {
            throw numeric_error(errc::invalid_input, "zero equivalence multiplier at index " + std::to_string(k), k);
        }
        return v;
    };
    CFSpec<T> out;
    out.b0 = cf.b0;
    out.truncation_hint = cf.truncation_hint;
    out.terms = [inner = std::move(cf.terms), checked](long k) {
        auto [a, b] = inner(k);
        T ck = checked(k);
        return std::pair<T, T>{ck * checked(k - 1) * a, ck * b};
    };
    return out;
}

} // namespace qcf

#endif // QCF_CFRAC_HPP
