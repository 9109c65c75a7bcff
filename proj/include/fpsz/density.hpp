#pragma once

#include <functional>
#include <optional>
#include <string>

#include "fpsz/laws.hpp"

namespace fpsz {

// A weight w(t) >= 0 on [-1, 1]. Named weights carry closed forms for
// w(cos t)|sin t| (used near the endpoints) and for their moments.
class DensitySpec {
 public:
  static DensitySpec arcsine();     // 1 / (pi sqrt(1 - t^2))
  static DensitySpec uniform();     // 1/2
  static DensitySpec semicircle();  // (2/pi) sqrt(1 - t^2)
  // (1-t)^alpha (1+t)^beta normalised to unit mass; alpha, beta > -1.
  static DensitySpec jacobi(double alpha, double beta);
  static DensitySpec zero();
  static DensitySpec custom(std::string name, std::function<double(double)> w);

  const std::string& name() const { return name_; }
  double operator()(double t) const { return weight_(t); }
  // w(cos theta) |sin theta|
  double theta_weight(double theta) const;

  // The law with this density: exact closed-form moments for named weights,
  // otherwise a quadrature moment table through `max_order`.
  MarginalLaw moment_law(int max_order) const;

  // Maximum tanh-sinh refinement level (node budget ~ 2^levels).
  int node_levels() const { return node_levels_; }
  DensitySpec& set_node_levels(int levels) {
    node_levels_ = levels;
    return *this;
  }

 private:
  enum class Kind { Arcsine, Uniform, Semicircle, Jacobi, Zero, Custom };

  Kind kind_ = Kind::Custom;
  std::string name_;
  std::function<double(double)> weight_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double norm_ = 1.0;
  int node_levels_ = 14;
};

struct ClassGReport {
  bool in_class = false;
  double weight_integral = 0.0;  // int_{-pi}^{pi} w(cos t)|sin t| dt
  double log_integral = 0.0;     // int_{-pi}^{pi} |log(w(cos t)|sin t|)| dt, inf if divergent
  std::string reason;
};

// Tests Szego's integrability class. Throws QuadratureFailure when the weight
// integral itself cannot be resolved.
ClassGReport class_g_check(const DensitySpec& density, double rel_tol = 1e-8);

// (1/2pi) int_{-pi}^{pi} log(w(cos t)|sin t|) dt
double szego_log_mean(const DensitySpec& density, double rel_tol = 1e-8);

}  // namespace fpsz
