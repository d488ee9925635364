#include "rankone/random.hpp"

#include <cmath>
#include <numbers>

namespace rankone {

double Rng::normal() {
  // 1 - u keeps the logarithm finite.
  const double u = 1.0 - uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

std::complex<double> Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::complex<double> Rng::in_disc(double radius) {
  const double r = radius * std::sqrt(uniform());
  const double theta = 2.0 * std::numbers::pi * uniform();
  return std::polar(r, theta);
}

std::complex<double> Rng::on_circle() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

}  // namespace rankone
