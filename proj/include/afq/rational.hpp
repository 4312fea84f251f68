#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

namespace afq {

using Int = mpz_class;
using Rat = mpq_class;

/// num/den as a canonicalized rational; den must be nonzero.
Rat make_rat(const Int& num, const Int& den);

/// 2^-exponent, kept symbolic so first-disagreement metrics stay bit-exact
/// at any depth.
struct Dyadic {
    unsigned long exponent = 0;

    Rat to_rational() const;
    double to_double() const;
    std::string to_string() const;  // "2^-k"

    bool operator==(const Dyadic&) const = default;
};

std::string to_string(const Int& v);
std::string to_string(const Rat& v);

}  // namespace afq
