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

#ifndef QCF_SCALARS_HPP
#define QCF_SCALARS_HPP

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include <qcf/error.hpp>

namespace qcf
{

using Complex = std::complex<double>;

/*
 * Exact rational number over arbitrary-precision integers.
 *
 * Always kept in canonical form: denominator > 0, gcd(|num|, den) = 1 and
 * zero stored as 0/1. The canonicalisation is done by the backing
 * boost::multiprecision rational type.
 */
class BigRational
{
public:
    using integer = boost::multiprecision::cpp_int;

    BigRational() = default;
    BigRational(long long n) : m_value(n) {}
    BigRational(int n) : m_value(n) {}
    BigRational(const integer &num, const integer &den)
    {
        if (den == 0) {
            throw numeric_error(errc::invalid_input, "rational with zero denominator");
        }
        m_value = den < 0 ? boost::multiprecision::cpp_rational(-num, -den)
                          : boost::multiprecision::cpp_rational(num, den);
    }

    // Accepts "n", "n/d", and decimal literals ("-0.25", "1.5e-3"); decimals convert exactly.
    static BigRational parse(std::string_view text);

    integer numerator() const
    {
        return boost::multiprecision::numerator(m_value);
    }
    integer denominator() const
    {
        return boost::multiprecision::denominator(m_value);
    }

    bool is_zero() const
    {
        return m_value == 0;
    }
    int sign() const
    {
        return m_value.sign();
    }
    double to_double() const
    {
        return m_value.convert_to<double>();
    }
    std::string str() const
    {
        if (denominator() == 1) {
            return numerator().str();
        }
        return numerator().str() + "/" + denominator().str();
    }

    BigRational &operator+=(const BigRational &o)
    {
        m_value += o.m_value;
        return *this;
    }
    BigRational &operator-=(const BigRational &o)
    {
        m_value -= o.m_value;
        return *this;
    }
    BigRational &operator*=(const BigRational &o)
    {
        m_value *= o.m_value;
        return *this;
    }
    BigRational &operator/=(const BigRational &o)
    {
        if (o.is_zero()) {
            throw numeric_error(errc::invalid_input, "exact division by zero");
        }
        m_value /= o.m_value;
        return *this;
    }

    friend BigRational operator+(BigRational x, const BigRational &y)
    {
        return x += y;
    }
    friend BigRational operator-(BigRational x, const BigRational &y)
    {
        return x -= y;
    }
    friend BigRational operator*(BigRational x, const BigRational &y)
    {
        return x *= y;
    }
    friend BigRational operator/(BigRational x, const BigRational &y)
    {
        return x /= y;
    }
    friend BigRational operator-(const BigRational &x)
    {
        BigRational r;
        r.m_value = -x.m_value;
        return r;
    }
    friend bool operator==(const BigRational &x, const BigRational &y)
    {
        return x.m_value == y.m_value;
    }
    friend bool operator<(const BigRational &x, const BigRational &y)
    {
        return x.m_value < y.m_value;
    }
    friend std::ostream &operator<<(std::ostream &os, const BigRational &x)
    {
        return os << x.str();
    }

private:
    boost::multiprecision::cpp_rational m_value{0};
};

inline BigRational BigRational::parse(std::string_view text)
{
    auto fail = [&]() -> BigRational {
        throw numeric_error(errc::invalid_input, "malformed rational literal '" + std::string(text) + "'");
    };
    if (text.empty()) {
        return fail();
    }
    auto parse_int = [&](std::string_view s) -> integer {
        std::size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            neg = s[i] == '-';
            ++i;
        }
        if (i == s.size()) {
            fail();
        }
        integer v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') {
                fail();
            }
            v = v * 10 + (s[i] - '0');
        }
        return neg ? integer(-v) : v;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        return BigRational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }

    // Decimal: [sign] digits [. digits] [e|E [sign] digits]
    std::string_view mant = text;
    long exp10 = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        mant = text.substr(0, e);
        exp10 = static_cast<long>(parse_int(text.substr(e + 1)));
    }
    std::string digits;
    bool neg = false;
    std::size_t i = 0;
    if (i < mant.size() && (mant[i] == '+' || mant[i] == '-')) {
        neg = mant[i] == '-';
        ++i;
    }
    bool seen_point = false, seen_digit = false;
    for (; i < mant.size(); ++i) {
        char c = mant[i];
        if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_point) {
                --exp10;
            }
        } else {
            return fail();
        }
    }
    if (!seen_digit) {
        return fail();
    }
    integer num = parse_int(digits);
    if (neg) {
        num = -num;
    }
    integer scale = boost::multiprecision::pow(integer(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
    return exp10 >= 0 ? BigRational(num * scale, 1) : BigRational(num, scale);
}

// Field contract shared by exact and floating evaluation. Algorithms above
// this layer only use +, -, *, /, unary minus and the traits below.
template <typename T>
struct field_traits;

template <>
struct field_traits<BigRational> {
    static constexpr bool exact = true;
    static double magnitude(const BigRational &x)
    {
        return std::abs(x.to_double());
    }
    static bool is_zero(const BigRational &x)
    {
        return x.is_zero();
    }
    static Complex to_complex(const BigRational &x)
    {
        return {x.to_double(), 0.0};
    }
};

template <>
struct field_traits<Complex> {
    static constexpr bool exact = false;
    static double magnitude(const Complex &x)
    {
        return std::abs(x);
    }
    static bool is_zero(const Complex &x)
    {
        return x == Complex(0.0, 0.0);
    }
    static Complex to_complex(const Complex &x)
    {
        return x;
    }
};

template <>
struct field_traits<double> {
    static constexpr bool exact = false;
    static double magnitude(double x)
    {
        return std::abs(x);
    }
    static bool is_zero(double x)
    {
        return x == 0.0;
    }
    static Complex to_complex(double x)
    {
        return {x, 0.0};
    }
};

template <typename T>
concept Field = std::regular<T> && std::constructible_from<T, int> && requires(const T &x, const T &y) {
    { x + y } -> std::convertible_to<T>;
    { x - y } -> std::convertible_to<T>;
    { x * y } -> std::convertible_to<T>;
    { x / y } -> std::convertible_to<T>;
    { -x } -> std::convertible_to<T>;
    { field_traits<T>::exact } -> std::convertible_to<bool>;
    { field_traits<T>::magnitude(x) } -> std::convertible_to<double>;
    { field_traits<T>::is_zero(x) } -> std::convertible_to<bool>;
};

template <Field T>
double magnitude(const T &x)
{
    return field_traits<T>::magnitude(x);
}

template <Field T>
bool is_zero(const T &x)
{
    return field_traits<T>::is_zero(x);
}

template <Field T>
Complex to_complex(const T &x)
{
    return field_traits<T>::to_complex(x);
}

template <Field T>
double distance(const T &x, const T &y)
{
    return magnitude(T(x - y));
}

// x^n for any integer n (negative powers divide).
template <Field T>
T power(const T &x, long n)
{
    T result(1), base = x;
    bool invert = n < 0;
    unsigned long e = invert ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    while (e != 0) {
        if (e & 1u) {
            result = result * base;
        }
        e >>= 1;
        if (e != 0) {
            base = base * base;
        }
    }
    return invert ? T(T(1) / result) : result;
}

// Treat x as vanishing: exactly zero in exact mode, below `tiny` in floating mode.
template <Field T>
bool is_negligible(const T &x, double tiny)
{
    if constexpr (field_traits<T>::exact) {
        return is_zero(x);
    } else {
        return magnitude(x) < tiny;
    }
}

inline void check_finite(const Complex &v, const char *where)
{
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw numeric_error(errc::non_finite, std::string("non-finite value in ") + where);
    }
}

/*
 * Value represented as mantissa * 2^exponent with 1 <= |mantissa| < 2 (or
 * mantissa == 0). Used to run convergent recurrences whose magnitudes drift
 * far outside the double range; all rescaling is by powers of two and
 * therefore exact.
 */
struct ScaledValue {
    Complex mantissa{0.0, 0.0};
    long exponent = 0;

    static ScaledValue normalize(Complex v, long e = 0)
    {
        check_finite(v, "ScaledValue::normalize");
        if (v == Complex(0.0, 0.0)) {
            return {};
        }
        int k = std::ilogb(std::abs(v));
        return {Complex(std::ldexp(v.real(), -k), std::ldexp(v.imag(), -k)), e + k};
    }

    bool is_zero() const
    {
        return mantissa == Complex(0.0, 0.0);
    }

    // May overflow to Inf or underflow to 0 when the exponent is extreme.
    Complex value() const
    {
        int e = static_cast<int>(exponent);
        return {std::ldexp(mantissa.real(), e), std::ldexp(mantissa.imag(), e)};
    }

    friend ScaledValue operator*(const ScaledValue &x, const ScaledValue &y)
    {
        return normalize(x.mantissa * y.mantissa, x.exponent + y.exponent);
    }
    friend ScaledValue operator/(const ScaledValue &x, const ScaledValue &y)
    {
        if (y.is_zero()) {
            throw numeric_error(errc::pole, "division by zero ScaledValue");
        }
        return normalize(x.mantissa / y.mantissa, x.exponent - y.exponent);
    }
    friend ScaledValue operator+(const ScaledValue &x, const ScaledValue &y)
    {
        if (x.is_zero()) {
            return y;
        }
        if (y.is_zero()) {
            return x;
        }
        long e = std::max(x.exponent, y.exponent);
        auto shift = [e](const ScaledValue &v) {
            long d = v.exponent - e;
            if (d < -2000) {
                return Complex(0.0, 0.0);
            }
            int di = static_cast<int>(d);
            return Complex(std::ldexp(v.mantissa.real(), di), std::ldexp(v.mantissa.imag(), di));
        };
        return normalize(shift(x) + shift(y), e);
    }
    friend ScaledValue operator-(const ScaledValue &x)
    {
        return {-x.mantissa, x.exponent};
    }
    friend ScaledValue operator-(const ScaledValue &x, const ScaledValue &y)
    {
        return x + (-y);
    }
};

// Quotient of two scaled values as an ordinary complex number.
inline Complex ratio(const ScaledValue &x, const ScaledValue &y)
{
    return (x / y).value();
}

// z^n kept in scaled form, so that e.g. 2^5000 or 0.27^5000 stay representable.
inline ScaledValue scaled_power(Complex z, long n)
{
    ScaledValue result = ScaledValue::normalize(Complex(1.0, 0.0));
    ScaledValue base = ScaledValue::normalize(z);
    while (n > 0) {
        if (n & 1) {
            result = result * base;
        }
        n >>= 1;
        if (n > 0) {
            base = base * base;
        }
    }
    return result;
}

} // namespace qcf

#endif // QCF_SCALARS_HPP
