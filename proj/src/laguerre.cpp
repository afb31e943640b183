#include "twist/laguerre.hpp"

#include <cmath>
#include <cstdlib>

#include "twist/errors.hpp"
#include "twist/units.hpp"

namespace twist {

double laguerre(int n, double alpha, double x) {
  if (n < 0) throw DomainError("Laguerre degree must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double lg_log_norm(int n, int ell) {
  if (n < 0) throw DomainError("radial quantum number n must be >= 0");
  const double a = std::abs(static_cast<double>(ell));
  return 0.5 * (std::log(2.0) + std::lgamma(n + 1.0) - std::log(units::kPi) - std::lgamma(n + a + 1.0));
}

}  // namespace twist
