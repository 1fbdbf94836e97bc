// Special functions and quadrature rules shared by the beam and coupling code.
#pragma once

#include <vector>

namespace oamsim {

/// Associated Laguerre polynomial L_p^alpha(x) by the ascending three-term
/// recurrence (stable for x >= 0, which is the only regime used here).
double assoc_laguerre(int p, int alpha, double x);

/// ln(n!) via lgamma; valid for n up to the thousands (|l| = 300 is routine).
double log_factorial(int n);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

} // namespace oamsim
