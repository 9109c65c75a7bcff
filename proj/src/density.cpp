#include "fpsz/density.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fpsz/errors.hpp"
#include "fpsz/quadrature.hpp"

namespace fpsz {

using std::numbers::pi;

DensitySpec DensitySpec::arcsine() {
  DensitySpec d;
  d.kind_ = Kind::Arcsine;
  d.name_ = "arcsine";
  d.weight_ = [](double t) { return 1.0 / (pi * std::sqrt(1.0 - t * t)); };
  return d;
}

DensitySpec DensitySpec::uniform() {
  DensitySpec d;
  d.kind_ = Kind::Uniform;
  d.name_ = "uniform";
  d.weight_ = [](double) { return 0.5; };
  return d;
}

DensitySpec DensitySpec::semicircle() {
  DensitySpec d;
  d.kind_ = Kind::Semicircle;
  d.name_ = "semicircle";
  d.weight_ = [](double t) { return 2.0 / pi * std::sqrt(std::fmax(0.0, 1.0 - t * t)); };
  return d;
}

DensitySpec DensitySpec::jacobi(double alpha, double beta) {
  if (!(alpha > -1 && beta > -1)) throw ConfigError("jacobi exponents must exceed -1");
  DensitySpec d;
  d.kind_ = Kind::Jacobi;
  d.name_ = "jacobi";
  d.alpha_ = alpha;
  d.beta_ = beta;
  // int (1-t)^a (1+t)^b dt = 2^{a+b+1} B(a+1, b+1)
  d.norm_ = std::pow(2.0, alpha + beta + 1) * std::beta(alpha + 1, beta + 1);
  double norm = d.norm_;
  d.weight_ = [alpha, beta, norm](double t) {
    return std::pow(1 - t, alpha) * std::pow(1 + t, beta) / norm;
  };
  return d;
}

DensitySpec DensitySpec::zero() {
  DensitySpec d;
  d.kind_ = Kind::Zero;
  d.name_ = "zero";
  d.weight_ = [](double) { return 0.0; };
  return d;
}

DensitySpec DensitySpec::custom(std::string name, std::function<double(double)> w) {
  DensitySpec d;
  d.kind_ = Kind::Custom;
  d.name_ = std::move(name);
  d.weight_ = std::move(w);
  return d;
}

double DensitySpec::theta_weight(double theta) const {
  double s = std::fabs(std::sin(theta));
  switch (kind_) {
    case Kind::Arcsine:
      return 1.0 / pi;
    case Kind::Uniform:
      return 0.5 * s;
    case Kind::Semicircle:
      return 2.0 / pi * s * s;
    case Kind::Jacobi: {
      // 1 - cos t = 2 sin^2(t/2), 1 + cos t = 2 cos^2(t/2)
      double sh = std::sin(theta / 2);
      double ch = std::cos(theta / 2);
      return std::pow(2 * sh * sh, alpha_) * std::pow(2 * ch * ch, beta_) * s / norm_;
    }
    case Kind::Zero:
      return 0.0;
    case Kind::Custom:
      break;
  }
  return weight_(std::cos(theta)) * s;
}

MarginalLaw DensitySpec::moment_law(int max_order) const {
  switch (kind_) {
    case Kind::Arcsine:
      return MarginalLaw::arcsine(Param(Rational(1, 2)));
    case Kind::Semicircle:
      return MarginalLaw::semicircle(Param(Rational(1, 2)));
    case Kind::Uniform: {
      std::vector<ComplexParam> table;
      for (int k = 0; k <= max_order; ++k)
        table.push_back({k % 2 == 0 ? Param(Rational(1, k + 1)) : Param(0L)});
      return MarginalLaw::from_moments(VariableKind::SelfAdjoint, std::move(table), TableTail::Unsupported,
                                       name_);
    }
    case Kind::Zero:
      throw NotClassG("zero density has no law");
    case Kind::Jacobi:
    case Kind::Custom:
      break;
  }
  std::vector<ComplexParam> table;
  for (int k = 0; k <= max_order; ++k) {
    auto f = [this, k](double theta) { return std::pow(std::cos(theta), k) * theta_weight(theta); };
    double m = integrate(f, 0.0, pi, 1e-12, node_levels_).value;
    table.push_back({Param::inexact(k == 0 ? 1.0 : m)});
  }
  return MarginalLaw::from_moments(VariableKind::SelfAdjoint, std::move(table), TableTail::Unsupported, name_);
}

ClassGReport class_g_check(const DensitySpec& density, double rel_tol) {
  ClassGReport report;
  auto w = [&](double theta) { return density.theta_weight(theta); };
  // integrands are even in theta: integrate over [0, pi] and double
  report.weight_integral = 2.0 * integrate(w, 0.0, pi, rel_tol, density.node_levels()).value;
  if (!(report.weight_integral > 0)) {
    report.reason = "weight integral is not positive";
    report.log_integral = std::numeric_limits<double>::infinity();
    return report;
  }
  auto abs_log = [&](double theta) { return std::fabs(std::log(density.theta_weight(theta))); };
  try {
    report.log_integral = 2.0 * integrate(abs_log, 0.0, pi, rel_tol, density.node_levels()).value;
  } catch (const QuadratureFailure& e) {
    report.log_integral = std::numeric_limits<double>::infinity();
    report.reason = std::string("log integral diverges: ") + e.what();
    return report;
  }
  report.in_class = true;
  return report;
}

double szego_log_mean(const DensitySpec& density, double rel_tol) {
  ClassGReport g = class_g_check(density, rel_tol);
  if (!g.in_class) throw NotClassG("density '" + density.name() + "' is not in class G: " + g.reason);
  auto lg = [&](double theta) { return std::log(density.theta_weight(theta)); };
  return integrate(lg, 0.0, pi, rel_tol, density.node_levels()).value / pi;
}

}  // namespace fpsz
