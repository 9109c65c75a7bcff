#include "fpsz/orthopoly1d.hpp"

#include <numbers>

namespace fpsz {

SzegoReport szego_asymptote_1d(const DensitySpec& density, int q_min, int q_max, double rel_tol) {
  SzegoReport report;
  report.density = density.name();
  report.log_mean = szego_log_mean(density, rel_tol);

  MarginalLaw law = density.moment_law(2 * q_max);
  std::vector<double> logs;
  if (law.exact()) {
    auto norms = orth_norms_1d<Rational>(law, q_max);
    norms.require(q_max, law.name());
    logs = norms.logs;
    report.backend = Backend::Rational;
  } else {
    auto norms = orth_norms_1d<double>(law, q_max);
    norms.require(q_max, law.name());
    logs = norms.logs;
  }

  // int_{-1}^{1} log w(t) dt / sqrt(1-t^2) = pi S + pi ln 2
  const double variant_integral = std::numbers::pi * (report.log_mean + std::numbers::ln2);
  for (int q = q_min; q <= q_max; ++q) {
    SzegoRow row;
    row.q = q;
    row.norm = std::exp(0.5 * logs[static_cast<std::size_t>(q)]);
    row.predicted = std::exp(0.5 * std::log(2 * std::numbers::pi) - q * std::numbers::ln2 + 0.5 * report.log_mean);
    row.ratio = std::exp(0.5 * logs[static_cast<std::size_t>(q)] - std::log(row.predicted));
    row.variant = std::exp(-0.5 * std::log(std::numbers::pi) + q * std::numbers::ln2 -
                           variant_integral / (2 * std::numbers::pi));
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace fpsz
