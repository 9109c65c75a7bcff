#include "fpsz/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "fpsz/errors.hpp"

namespace fpsz {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                           int max_levels) {
  constexpr int kFirstLevel = 4;
  double previous = 0.0;
  for (int level = kFirstLevel; level <= max_levels; ++level) {
    // Abscissas stay 1e-100 away from the endpoints so that weights vanishing
    // like a power of the distance do not underflow to zero inside a log; the
    // neglected end pieces are below 1e-97 for log-type integrands.
    boost::math::quadrature::tanh_sinh<double> integrator(static_cast<std::size_t>(level), 1e-100);
    double error = 0.0;
    double l1 = 0.0;
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = integrator.integrate(f, a, b, 1e-15, &error, &l1, &used);
    } catch (const std::exception& e) {
      throw QuadratureFailure(std::string("integrand not finite: ") + e.what());
    }
    if (!std::isfinite(value)) throw QuadratureFailure("integral is not finite");
    if (level > kFirstLevel) {
      double change = std::fabs(value - previous);
      if (change <= rel_tol * std::fmax(l1, 1e-300)) return {value, l1, change, level};
    }
    previous = value;
  }
  throw QuadratureFailure("quadrature did not stabilise under node doubling");
}

}  // namespace fpsz
