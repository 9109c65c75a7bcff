#include "fpsz/szegolimit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fpsz/grammat.hpp"
#include "fpsz/parallel.hpp"

namespace fpsz {

namespace {

void require_n(int n) {
  if (n < 2) throw ConfigError("entropy numbers need n >= 2");
}

// ln ||P_j||^2 for j = 0..q_max, exact where the law allows.
std::vector<double> marginal_log_norms(const MarginalLaw& law, int q_max) {
  NormSequence<double> floats;
  std::vector<double> logs;
  std::optional<int> degenerate;
  const bool unitary = law.kind() == VariableKind::Unitary;
  if (law.exact()) {
    auto norms = unitary ? orth_norms_1d<ComplexRational>(law, q_max) : orth_norms_1d<Rational>(law, q_max);
    logs = norms.logs;
    degenerate = norms.degenerate_at;
  } else {
    auto norms = unitary ? orth_norms_1d<std::complex<double>>(law, q_max) : orth_norms_1d<double>(law, q_max);
    logs = norms.logs;
    degenerate = norms.degenerate_at;
  }
  if (degenerate && *degenerate <= q_max)
    throw DegenerateLaw("law '" + law.name() + "' is degenerate at order " + std::to_string(*degenerate));
  return logs;
}

double geometric_tail(double x, int J) { return std::pow(x, J + 1) / (1 - x); }

double weighted_geometric_tail(double x, int J) {
  return std::pow(x, J + 1) * ((J + 1) - J * x) / ((1 - x) * (1 - x));
}

}  // namespace

double linear_tail_bound(std::span<const double> samples, int first_order, int n, int J) {
  if (samples.empty()) return 0.0;
  const std::size_t m = samples.size();
  const std::size_t start = m > 1 ? m - std::max<std::size_t>(m / 2, 2) : 0;
  double c1 = 0.0;
  double c2 = 0.0;
  const std::size_t count = m - start;
  if (count == 1) {
    c1 = std::fabs(samples[start]);
  } else {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = start; i < m; ++i) {
      double x = first_order + static_cast<double>(i);
      double y = std::fabs(samples[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double k = static_cast<double>(count);
    double den = k * sxx - sx * sx;
    c2 = (k * sxy - sx * sy) / den;
    c1 = (sy - c2 * sx) / k;
  }
  c1 = 2 * std::fabs(c1);
  c2 = 2 * std::fabs(c2);
  for (std::size_t i = start; i < m; ++i)
    c1 = std::max(c1, std::fabs(samples[i]) - c2 * (first_order + static_cast<double>(i)));
  const double x = 1.0 / n;
  return c1 * geometric_tail(x, J) + c2 * weighted_geometric_tail(x, J);
}

EntropyEstimate entropy_number(const MarginalLaw& law, int n, int J) {
  require_n(n);
  if (J < 1) throw ConfigError("entropy truncation must be >= 1");
  auto logs = marginal_log_norms(law, J);
  EntropyEstimate e;
  e.n = n;
  e.truncation = J;
  double scale = 1.0;
  for (int j = 1; j <= J; ++j) {
    scale /= n;
    e.terms.push_back(logs[static_cast<std::size_t>(j)] * scale);
    e.value += e.terms.back();
  }
  e.tail_bound = linear_tail_bound(std::span<const double>(logs).subspan(1), 1, n, J);
  return e;
}

EntropyEstimate entropy_from_jacobi(std::span<const double> log_a, int n) {
  require_n(n);
  EntropyEstimate e;
  e.n = n;
  e.truncation = static_cast<int>(log_a.size());
  const double factor = 2.0 * n / (n - 1);
  const double variant_factor = 2.0 * (n - 1) / n;
  double scale = 1.0;
  double raw = 0.0;
  for (double la : log_a) {
    scale /= n;
    e.terms.push_back(factor * la * scale);
    e.value += e.terms.back();
    raw += la * scale;
  }
  e.variant = variant_factor * raw;
  e.tail_bound = factor * linear_tail_bound(log_a, 1, n, e.truncation);
  return e;
}

EntropyEstimate entropy_from_verblunsky(std::span<const double> log_shrink, int n) {
  require_n(n);
  EntropyEstimate e;
  e.n = n;
  e.truncation = static_cast<int>(log_shrink.size());
  const double factor = 1.0 / (n - 1);
  double scale = 1.0;
  double variant = 0.0;
  for (std::size_t m = 0; m < log_shrink.size(); ++m) {
    e.terms.push_back(factor * log_shrink[m] * scale);
    e.value += e.terms.back();
    if (m >= 1) variant += log_shrink[m] * scale;
    scale /= n;
  }
  e.variant = (n - 1.0) / n * variant;
  e.tail_bound = factor * linear_tail_bound(log_shrink, 0, n, e.truncation - 1);
  return e;
}

double LogNormTable::column_sum(int order) const {
  double total = 0.0;
  for (int k = 0; k < n; ++k) total += log_norm(k, order);
  return total;
}

LogNormTable log_norm_table(const FreeFamily& family, int q_max) {
  LogNormTable t;
  t.n = family.size();
  t.q_max = q_max;
  for (const MarginalLaw& law : family.marginals()) t.logs.push_back(marginal_log_norms(law, q_max));
  return t;
}

ExactNormTable exact_norm_table(const FreeFamily& family, int q_max) {
  ExactNormTable t;
  t.n = family.size();
  t.q_max = q_max;
  for (const MarginalLaw& law : family.marginals()) {
    if (!law.exact()) throw BackendMismatch("law '" + law.name() + "' is float-only");
    auto norms = law.kind() == VariableKind::Unitary ? orth_norms_1d<ComplexRational>(law, q_max)
                                                     : orth_norms_1d<Rational>(law, q_max);
    if (norms.degenerate_at && *norms.degenerate_at <= q_max)
      throw DegenerateLaw("law '" + law.name() + "' is degenerate at order " +
                          std::to_string(*norms.degenerate_at));
    t.values.push_back(std::move(norms.values));
  }
  return t;
}

namespace {

// Visits every word of length q as (variable, run length) blocks. The word
// space is split into n^p prefix chunks, each handled by one task; `leaf`
// receives (chunk, block list).
template <class Leaf>
void for_each_block_word(int n, int q, int threads, std::size_t chunks_hint, Leaf&& leaf) {
  int p = 0;
  std::size_t chunks = 1;
  while (p < q && chunks < chunks_hint) {
    chunks *= static_cast<std::size_t>(n);
    ++p;
  }
  parallel_for(chunks, threads, [&](std::size_t chunk) {
    std::vector<int> letters(static_cast<std::size_t>(q));
    std::size_t c = chunk;
    for (int i = p - 1; i >= 0; --i) {
      letters[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::size_t>(n));
      c /= static_cast<std::size_t>(n);
    }
    // odometer over the suffix
    for (;;) {
      leaf(chunk, std::span<const int>(letters));
      int pos = q - 1;
      while (pos >= p && letters[static_cast<std::size_t>(pos)] == n - 1)
        letters[static_cast<std::size_t>(pos--)] = 0;
      if (pos < p) break;
      ++letters[static_cast<std::size_t>(pos)];
    }
  });
}

template <class Visit>
void for_each_block(std::span<const int> letters, Visit&& visit) {
  std::size_t i = 0;
  while (i < letters.size()) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    visit(letters[i], static_cast<int>(j - i));
    i = j;
  }
}

}  // namespace

double scaled_log_sq(const LogNormTable& table, int q, SqRoute route, int threads, std::uint64_t cap) {
  if (q < 1 || q > table.q_max) throw ConfigError("s_q order outside the norm table");
  const int n = table.n;
  const double r = n - 1.0;
  if (route == SqRoute::ClosedForm) {
    double out = table.column_sum(q) * std::pow(n, -q);
    for (int j = 1; j <= q - 1; ++j) out += 2 * r * std::pow(n, -1 - j) * table.column_sum(j);
    for (int j = 1; j <= q - 2; ++j) out += r * r * (q - 1 - j) * std::pow(n, -2 - j) * table.column_sum(j);
    return out;
  }
  if (enumeration_count(n, q, EnumerationMode::Exactly) > cap)
    throw EnumerationCapExceeded("s_q enumeration of " + std::to_string(n) + "^" + std::to_string(q) +
                                 " words exceeds the cap");
  constexpr std::size_t kChunks = 64;
  std::vector<double> partial(kChunks * static_cast<std::size_t>(n) + 1, 0.0);
  for_each_block_word(n, q, threads, kChunks, [&](std::size_t chunk, std::span<const int> letters) {
    double s = 0.0;
    for_each_block(letters, [&](int var, int run) { s += table.log_norm(var, run); });
    partial[chunk] += s;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total * std::pow(n, -q);
}

double scaled_log_sq(const FreeFamily& family, int q, SqRoute route, int threads) {
  return scaled_log_sq(log_norm_table(family, q), q, route, threads);
}

double scaled_log_sq_variant(const LogNormTable& table, int q) {
  const int n = table.n;
  const double r = n - 1.0;
  double out = table.column_sum(q) * std::pow(n, -q);
  for (int j = 1; j <= q - 1; ++j) out += 2 * r * std::pow(n, -1 - j) * table.column_sum(j);
  for (int j = 1; j <= q - 2; ++j) out += r * r * (q - 2 - j) * std::pow(n, -2 - j) * table.column_sum(j);
  return out;
}

double recursion_forcing(const LogNormTable& table, int q) {
  const int n = table.n;
  double out = table.column_sum(q);
  for (int j = 1; j <= q - 1; ++j) out += (n - 1.0) * std::pow(n, q - j - 1) * table.column_sum(j);
  return out;
}

Rational exact_sq_enumerate(const ExactNormTable& table, int q) {
  const int n = table.n;
  if (q < 1 || q > table.q_max) throw ConfigError("s_q order outside the norm table");
  std::map<std::pair<int, int>, unsigned long> counts;
  std::vector<int> letters(static_cast<std::size_t>(q), 0);
  for (;;) {
    for_each_block(letters, [&](int var, int run) { ++counts[{var, run}]; });
    int pos = q - 1;
    while (pos >= 0 && letters[static_cast<std::size_t>(pos)] == n - 1) letters[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
    ++letters[static_cast<std::size_t>(pos)];
  }
  Rational out(1);
  for (const auto& [key, count] : counts)
    out *= pow(table.values[static_cast<std::size_t>(key.first)][static_cast<std::size_t>(key.second)],
               static_cast<long>(count));
  return out;
}

Rational exact_sq_closed_form(const ExactNormTable& table, int q) {
  const int n = table.n;
  if (q < 1 || q > table.q_max) throw ConfigError("s_q order outside the norm table");
  auto column = [&](int j) {
    Rational c(1);
    for (int k = 0; k < n; ++k) c *= table.values[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    return c;
  };
  auto ipow = [](long base, int e) {
    long out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
  };
  const long r = n - 1;
  Rational out = column(q);
  for (int j = 1; j <= q - 1; ++j) {
    long exponent = 2 * r * ipow(n, q - 1 - j);
    if (j <= q - 2) exponent += r * r * (q - 1 - j) * ipow(n, q - 2 - j);
    out *= pow(column(j), exponent);
  }
  return out;
}

PredictedLimit predicted_limit(const FreeFamily& family, int J) {
  const int n = family.size();
  require_n(n);
  PredictedLimit out;
  double sum = 0.0;
  double tail = 0.0;
  for (const MarginalLaw& law : family.marginals()) {
    out.marginals.push_back(entropy_number(law, n, J));
    sum += out.marginals.back().value;
    tail += out.marginals.back().tail_bound;
  }
  out.value = (n - 1.0) / n * sum;
  out.tail_bound = (n - 1.0) / n * tail;
  return out;
}

namespace {

template <class T>
std::vector<double> direct_log_pivots(const FreeFamily& family, int q, const TraceOptions& options) {
  MomentEngine<T> engine(family);
  GramOptions go;
  go.threads = options.threads;
  go.singular_tolerance = options.singular_tolerance;
  go.enumeration_cap = options.enumeration_cap;
  auto report = hankel_det(engine, LengthCut{q + 1}, go);
  if (report.singular)
    throw DegenerateLaw("Gram matrix is singular at word " + to_string(*report.singular));
  return report.log_pivots;
}

std::vector<double> direct_route(const FreeFamily& family, int q, const TraceOptions& options) {
  Backend b = options.direct_backend.value_or(family.backend());
  bool complex = !family.all_self_adjoint();
  if (b == Backend::Rational)
    return complex ? direct_log_pivots<ComplexRational>(family, q, options)
                   : direct_log_pivots<Rational>(family, q, options);
  return complex ? direct_log_pivots<std::complex<double>>(family, q, options)
                 : direct_log_pivots<double>(family, q, options);
}

}  // namespace

ConvergenceTrace convergence_trace(const FreeFamily& family, int q_direct_max, int q_factored_max,
                                   const TraceOptions& options) {
  ConvergenceTrace trace;
  const int n = family.size();
  require_n(n);
  trace.n = n;
  trace.limit = predicted_limit(family, options.truncation);
  const double predicted = trace.limit.value;
  const int q_top = std::max(q_direct_max, q_factored_max);
  if (q_top < 1) return trace;
  auto table = log_norm_table(family, q_top);

  std::vector<double> direct_sq;  // ln s_q / n^q, q = 1..q_direct_max
  std::vector<double> direct_ratio;
  if (q_direct_max >= 1) {
    auto logs = direct_route(family, q_direct_max, options);
    std::size_t pos = 1;  // skip e
    double cumulative = 0.0;
    for (int q = 1; q <= q_direct_max; ++q) {
      auto layer = static_cast<std::size_t>(enumeration_count(n, q, EnumerationMode::Exactly));
      double s = 0.0;
      for (std::size_t i = 0; i < layer; ++i) s += logs[pos++];
      cumulative += s;
      double nq = std::pow(n, q);
      direct_sq.push_back(s / nq);
      direct_ratio.push_back(cumulative / (q * nq));
    }
  }

  std::vector<double> factored_sq;
  std::vector<double> factored_ratio;
  double cumulative_scaled = 0.0;  // ln D_{q+1} / n^q
  for (int q = 1; q <= q_factored_max; ++q) {
    double s = scaled_log_sq(table, q, SqRoute::ClosedForm);
    cumulative_scaled = cumulative_scaled / n + s;
    factored_sq.push_back(s);
    factored_ratio.push_back(cumulative_scaled / q);
    trace.variant_closed_form_delta.push_back(scaled_log_sq_variant(table, q) - s);
  }

  for (int q = 1; q <= q_top; ++q) {
    auto idx = static_cast<std::size_t>(q - 1);
    const bool has_direct = q <= q_direct_max;
    const bool has_factored = q <= q_factored_max;
    std::optional<double> delta;
    if (has_direct && has_factored) {
      delta = factored_ratio[idx] - direct_ratio[idx];
      bool ok = close_mixed(factored_ratio[idx], direct_ratio[idx], options.route_tolerance) &&
                close_mixed(factored_sq[idx], direct_sq[idx], options.route_tolerance);
      double scale = std::max({1.0, std::fabs(factored_ratio[idx]), std::fabs(direct_ratio[idx])});
      trace.max_crosscheck = std::max(trace.max_crosscheck, std::fabs(*delta) / scale);
      if (!ok) trace.routes_agree = false;
    }
    if (has_direct)
      trace.rows.push_back({q, TraceRoute::Direct, direct_sq[idx], direct_ratio[idx], predicted,
                            direct_ratio[idx] - predicted, delta});
    if (has_factored)
      trace.rows.push_back({q, TraceRoute::Factored, factored_sq[idx], factored_ratio[idx], predicted,
                            factored_ratio[idx] - predicted, delta});
  }
  if (q_factored_max >= 2) {
    const double q = q_factored_max;
    trace.richardson = q * factored_ratio.back() - (q - 1) * factored_ratio[factored_ratio.size() - 2];
  }
  return trace;
}

const char* route_name(TraceRoute r) { return r == TraceRoute::Direct ? "direct" : "factored"; }

std::string trace_csv(const ConvergenceTrace& trace) {
  std::ostringstream out;
  out << "q,route,ln_sq_scaled,lnD_ratio,predicted,gap,crosscheck_delta\n";
  for (const TraceRow& row : trace.rows) {
    out << row.q << ',' << route_name(row.route) << ',' << format_double(row.ln_sq_scaled) << ','
        << format_double(row.lnD_ratio) << ',' << format_double(row.predicted) << ',' << format_double(row.gap)
        << ',';
    if (row.crosscheck_delta) out << format_double(*row.crosscheck_delta);
    out << '\n';
  }
  return out.str();
}

}  // namespace fpsz
