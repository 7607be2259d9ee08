#pragma once

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace toricale {

inline constexpr double kQuadratureTolerance = 1e-12;

template <class F> double integrate(F f, double a, double b) {
    if (a == b) return 0.0;
    double err = 0.0, l1 = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, kQuadratureTolerance,
                                                                             &err, &l1);
    if (!std::isfinite(v)) throw NumericFailure("quadrature: non-finite value on [" + std::to_string(a) + ", " +
                                                std::to_string(b) + "]");
    // Accept the absolute floor for integrals that nearly cancel.
    if (err > kQuadratureTolerance * std::max(1.0, l1) * 1e3)
        throw NumericFailure("quadrature: error estimate " + std::to_string(err) + " on [" + std::to_string(a) +
                             ", " + std::to_string(b) + "]");
    return v;
}

} // namespace toricale
