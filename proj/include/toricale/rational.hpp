#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace toricale {

using Integer = mpz_class;
using Rational = mpq_class;
using QVec = std::vector<Rational>;

// Bad user input (exit code 2 at the CLI).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Quadrature / root finding / conditioning failures (exit code 4).
struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Point outside the open domain a routine is defined on.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Always "p/q", also for integers.
std::string to_string(const Rational& q);
Rational rational_from_string(const std::string& s);

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

Rational rpow(const Rational& base, int e);
Integer ipow(const Integer& base, unsigned e);

std::int64_t gcd64(std::int64_t a, std::int64_t b);

// Scalar helpers usable from templates instantiated with double or Rational.
template <class T> T from_rational(const Rational& q) {
    if constexpr (std::is_same_v<T, Rational>)
        return q;
    else
        return static_cast<T>(q.get_d());
}

template <class T> T tpow(const T& base, int e) {
    T out = T(1);
    T b = base;
    bool neg = e < 0;
    unsigned k = static_cast<unsigned>(neg ? -e : e);
    while (k) {
        if (k & 1u) out = T(out * b);
        b = T(b * b);
        k >>= 1u;
    }
    if (neg) out = T(T(1) / out);
    return out;
}

} // namespace toricale
