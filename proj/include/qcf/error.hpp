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

#ifndef QCF_ERROR_HPP
#define QCF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qcf
{

enum class errc {
    invalid_input, // e.g. division by an exact zero
    domain,        // parameter outside the region where the quantity is defined
    pole,          // a denominator factor vanishes
    divergence,    // series does not converge for the given argument
    degenerate,    // structurally degenerate input (coincident roots, D_k == 0, ...)
    singular,      // power series division by a series with zero constant term
    conditioning,  // result would be dominated by cancellation
    non_finite,    // NaN or Inf produced
};

inline const char *errc_name(errc c)
{
    switch (c) {
        case errc::invalid_input:
            return "invalid-input";
        case errc::domain:
            return "domain";
        case errc::pole:
            return "pole";
        case errc::divergence:
            return "divergence";
        case errc::degenerate:
            return "degenerate";
        case errc::singular:
            return "singular";
        case errc::conditioning:
            return "conditioning";
        case errc::non_finite:
            return "non-finite";
    }
    return "unknown";
}

// All numerical failures in the library are reported through this type.
// index() carries the offending term/recursion index when there is one, else -1.
class numeric_error : public std::runtime_error
{
public:
    numeric_error(errc code, const std::string &what, long index = -1)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), m_code(code), m_index(index)
    {
    }

    errc code() const noexcept
    {
        return m_code;
    }
    long index() const noexcept
    {
        return m_index;
    }

private:
    errc m_code;
    long m_index;
};

} // namespace qcf

#endif // QCF_ERROR_HPP
