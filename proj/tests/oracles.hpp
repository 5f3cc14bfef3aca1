#pragma once

// Independent reference computations used only by the tests.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <complex>
#include <functional>

namespace oracles {

/// Adaptive Gauss-Kronrod quadrature of a complex integrand on [a, b].
inline std::complex<double> integrate(const std::function<std::complex<double>(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  const double re = gauss_kronrod<double, 61>::integrate([&](double t) { return f(t).real(); }, a, b, 8, 1e-15);
  const double im = gauss_kronrod<double, 61>::integrate([&](double t) { return f(t).imag(); }, a, b, 8, 1e-15);
  return {re, im};
}

/// Gauss-Kronrod on [a, b] for real integrands.
inline double integrate_real(const std::function<double(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 8, 1e-15);
}

}  // namespace oracles
