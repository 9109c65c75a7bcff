#pragma once

#include <functional>

namespace fpsz {

struct QuadratureResult {
  double value = 0.0;
  double l1 = 0.0;      // integral of |f|, the scale for the convergence test
  double change = 0.0;  // |I(L) - I(L-1)| at the accepted level
  int levels = 0;
};

// Double-exponential (tanh-sinh) quadrature on [a, b], rerun with the node
// count doubled until successive estimates differ by less than
// rel_tol * integral of |f|. Endpoint singularities of log or inverse-sqrt
// type are integrated without special handling by the caller. Throws
// QuadratureFailure when the estimates never stabilise or f is not finite.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-8, int max_levels = 14);

}  // namespace fpsz
