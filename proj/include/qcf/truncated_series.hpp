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

#ifndef QCF_TRUNCATED_SERIES_HPP
#define QCF_TRUNCATED_SERIES_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <qcf/error.hpp>
#include <qcf/scalars.hpp>

namespace qcf
{

// Univariate power series c_0 + c_1 t + ... + c_order t^order + O(t^(order+1)).
// Binary operations truncate to the smaller of the two orders.
template <Field T>
class TruncatedSeries
{
public:
    TruncatedSeries() : m_coeffs(1, T(0)) {}

    TruncatedSeries(std::vector<T> coeffs, std::string variable = "t")
        : m_coeffs(std::move(coeffs)), m_variable(std::move(variable))
    {
        if (m_coeffs.empty()) {
            m_coeffs.push_back(T(0));
        }
    }

    static TruncatedSeries constant(const T &c, std::size_t order, std::string variable = "t")
    {
        std::vector<T> v(order + 1, T(0));
        v[0] = c;
        return TruncatedSeries(std::move(v), std::move(variable));
    }

    // 1 - c t, the building block of every q-product expansion.
    static TruncatedSeries linear(const T &c0, const T &c1, std::size_t order, std::string variable = "t")
    {
        std::vector<T> v(order + 1, T(0));
        v[0] = c0;
        if (order >= 1) {
            v[1] = c1;
        }
        return TruncatedSeries(std::move(v), std::move(variable));
    }

    std::size_t order() const
    {
        return m_coeffs.size() - 1;
    }
    const std::string &variable() const
    {
        return m_variable;
    }
    const std::vector<T> &coefficients() const
    {
        return m_coeffs;
    }
    const T &operator[](std::size_t i) const
    {
        return m_coeffs[i];
    }
    T &operator[](std::size_t i)
    {
        return m_coeffs[i];
    }

    TruncatedSeries truncated(std::size_t order) const
    {
        std::vector<T> v(m_coeffs.begin(), m_coeffs.begin() + static_cast<long>(std::min(order, this->order()) + 1));
        return TruncatedSeries(std::move(v), m_variable);
    }

    friend TruncatedSeries operator+(const TruncatedSeries &f, const TruncatedSeries &g)
    {
        std::size_t n = std::min(f.order(), g.order());
        std::vector<T> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            v[i] = f[i] + g[i];
        }
        return TruncatedSeries(std::move(v), f.m_variable);
    }

    friend TruncatedSeries operator-(const TruncatedSeries &f, const TruncatedSeries &g)
    {
        std::size_t n = std::min(f.order(), g.order());
        std::vector<T> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            v[i] = f[i] - g[i];
        }
        return TruncatedSeries(std::move(v), f.m_variable);
    }

    friend TruncatedSeries operator*(const TruncatedSeries &f, const TruncatedSeries &g)
    {
        std::size_t n = std::min(f.order(), g.order());
        std::vector<T> v(n + 1, T(0));
        for (std::size_t i = 0; i <= n; ++i) {
            if (is_zero(f[i])) {
                continue;
            }
            for (std::size_t j = 0; i + j <= n; ++j) {
                v[i + j] = v[i + j] + f[i] * g[j];
            }
        }
        return TruncatedSeries(std::move(v), f.m_variable);
    }

    friend TruncatedSeries operator*(const T &lambda, const TruncatedSeries &f)
    {
        std::vector<T> v(f.m_coeffs);
        for (auto &c : v) {
            c = lambda * c;
        }
        return TruncatedSeries(std::move(v), f.m_variable);
    }

    // f / g by forward substitution; g must have a nonzero constant term.
    friend TruncatedSeries operator/(const TruncatedSeries &f, const TruncatedSeries &g)
    {
        if (is_zero(g[0])) {
            throw numeric_error(errc::singular, "power series division by a series with zero constant term");
        }
        std::size_t n = std::min(f.order(), g.order());
        std::vector<T> v(n + 1, T(0));
        for (std::size_t i = 0; i <= n; ++i) {
            T acc = f[i];
            for (std::size_t j = 1; j <= i; ++j) {
                acc = acc - g[j] * v[i - j];
            }
            v[i] = acc / g[0];
        }
        return TruncatedSeries(std::move(v), f.m_variable);
    }

    // Substitution t -> lambda t.
    TruncatedSeries scale_var(const T &lambda) const
    {
        std::vector<T> v(m_coeffs);
        T p(1);
        for (auto &c : v) {
            c = c * p;
            p = p * lambda;
        }
        return TruncatedSeries(std::move(v), m_variable);
    }

    // Multiplication by t^k (shifts coefficients up, order preserved).
    TruncatedSeries shift(std::size_t k) const
    {
        std::vector<T> v(m_coeffs.size(), T(0));
        for (std::size_t i = 0; i + k < v.size(); ++i) {
            v[i + k] = m_coeffs[i];
        }
        return TruncatedSeries(std::move(v), m_variable);
    }

    friend bool operator==(const TruncatedSeries &f, const TruncatedSeries &g)
    {
        return f.m_coeffs == g.m_coeffs;
    }

private:
    std::vector<T> m_coeffs;
    std::string m_variable = "t";
};

// In-place f *= (1 - c t), O(order).
template <Field T>
void multiply_linear(std::vector<T> &f, const T &c)
{
    for (std::size_t i = f.size(); i-- > 1;) {
        f[i] = f[i] - c * f[i - 1];
    }
}

// In-place f /= (1 - c t), O(order).
template <Field T>
void divide_linear(std::vector<T> &f, const T &c)
{
    for (std::size_t i = 1; i < f.size(); ++i) {
        f[i] = f[i] + c * f[i - 1];
    }
}

} // namespace qcf

#endif // QCF_TRUNCATED_SERIES_HPP
