#include "toricale/rational.hpp"

#include <numeric>

namespace toricale {

std::string to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational rational_from_string(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw InvalidInput("not a rational: " + s);
    if (q.get_den() == 0) throw InvalidInput("zero denominator: " + s);
    q.canonicalize();
    return q;
}

Rational rpow(const Rational& base, int e) { return tpow<Rational>(base, e); }

Integer ipow(const Integer& base, unsigned e) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

} // namespace toricale
