// fpsz: command-line front end.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fpsz/config.hpp"
#include "fpsz/density.hpp"
#include "fpsz/errors.hpp"
#include "fpsz/freemoments.hpp"
#include "fpsz/grammat.hpp"
#include "fpsz/orthopoly1d.hpp"
#include "fpsz/parallel.hpp"
#include "fpsz/selftest.hpp"
#include "fpsz/szegolimit.hpp"

using namespace fpsz;
using nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitInvariant = 3;

struct Common {
  std::string config;
  std::string out;
  std::string output = "csv";
  std::string backend;
  int threads = 0;
  double singular_tol = kSingularTolerance;
};

int threads_of(const Common& c) { return c.threads > 0 ? c.threads : default_threads(); }

std::optional<Backend> backend_of(const Common& c) {
  if (c.backend.empty()) return std::nullopt;
  return parse_backend(c.backend);
}

// Writes to --out if given, else stdout. Metadata goes to a sidecar JSON file
// next to the output, or to stderr for stdout output, so CSV stays plain.
void emit(const Common& c, const std::string& body, const ordered_json& meta) {
  if (c.out.empty()) {
    std::cout << body;
    std::cerr << "# " << meta.dump() << '\n';
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + c.out + "'");
  f << body;
  std::ofstream m(c.out + ".meta.json", std::ios::binary);
  m << meta.dump(2) << '\n';
}

template <class T>
std::string scalar_text(const T& v) {
  if constexpr (Field<T>::complex) {
    if constexpr (Field<T>::exact) {
      return v.is_real() ? to_string(v.re) : to_string(v);
    } else {
      if (v.imag() == 0.0) return format_double(v.real());
      return format_double(v.real()) + (v.imag() < 0 ? "" : "+") + format_double(v.imag()) + "i";
    }
  } else {
    return Field<T>::str(v);
  }
}

std::complex<double> as_complex(const ComplexRational& z) { return to_complex(z); }
std::complex<double> as_complex(const std::complex<double>& z) { return z; }

// Runs f.template operator()<T>() with T chosen by backend and variable kinds.
template <class F>
auto dispatch(Backend backend, bool complex, F&& f) {
  if (backend == Backend::Rational) {
    if (complex) return f.template operator()<ComplexRational>();
    return f.template operator()<Rational>();
  }
  if (complex) return f.template operator()<std::complex<double>>();
  return f.template operator()<double>();
}

int cmd_moment(const Common& c, const std::string& word_text) {
  FreeFamily family = load_family(c.config, backend_of(c));
  Word w = parse_word(word_text, family.size(), family.kinds());
  std::string text = dispatch(family.backend(), !family.all_self_adjoint(), [&]<class T>() {
    MomentEngine<T> engine(family);
    return scalar_text(engine.mixed_moment(w));
  });
  ordered_json meta{{"command", "moment"}, {"word", to_string(w)}, {"backend", backend_name(family.backend())}};
  emit(c, text + "\n", meta);
  return 0;
}

Backend law_backend(const Common& c, const MarginalLaw& law) {
  if (auto b = backend_of(c)) return *b;
  return law.exact() ? Backend::Rational : Backend::Float;
}

int cmd_jacobi(const Common& c, int count) {
  MarginalLaw law = load_law(c.config);
  Backend backend = law_backend(c, law);
  if (backend == Backend::Rational && !law.exact()) throw BackendMismatch("law '" + law.name() + "' is float-only");
  std::ostringstream body;
  ordered_json meta{{"command", "jacobi"}, {"law", law.name()}, {"backend", backend_name(backend)},
                    {"singular_tolerance", c.singular_tol}};
  auto render = [&](const auto& jc) {
    using R = typename std::decay_t<decltype(jc.b)>::value_type;
    auto a = jc.a();
    if (c.output == "json") {
      ordered_json rows = ordered_json::array();
      for (std::size_t i = 0; i < jc.count(); ++i)
        rows.push_back({{"q", i + 1},
                        {"a_q", a[i]},
                        {"a_q_squared", Field<R>::str(jc.a_squared[i])},
                        {"b_q", Field<R>::str(jc.b[i])}});
      ordered_json doc = meta;
      doc["rows"] = rows;
      body << doc.dump(2) << '\n';
    } else {
      body << "q,a_q,b_q\n";
      for (std::size_t i = 0; i < jc.count(); ++i)
        body << i + 1 << ',' << format_double(a[i]) << ',' << format_double(Field<R>::to_double(jc.b[i])) << '\n';
    }
  };
  if (backend == Backend::Rational) {
    render(jacobi_coeffs<Rational>(law, count, c.singular_tol));
  } else {
    render(jacobi_coeffs<double>(law, count, c.singular_tol));
  }
  emit(c, body.str(), meta);
  return 0;
}

int cmd_verblunsky(const Common& c, int count) {
  MarginalLaw law = load_law(c.config);
  Backend backend = law_backend(c, law);
  if (backend == Backend::Rational && !law.exact()) throw BackendMismatch("law '" + law.name() + "' is float-only");
  std::ostringstream body;
  ordered_json meta{{"command", "verblunsky"}, {"law", law.name()}, {"backend", backend_name(backend)},
                    {"singular_tolerance", c.singular_tol}};
  auto render = [&](const auto& vc) {
    using C = typename std::decay_t<decltype(vc.alpha)>::value_type;
    if (c.output == "json") {
      ordered_json rows = ordered_json::array();
      for (std::size_t i = 0; i < vc.count(); ++i) {
        auto z = as_complex(vc.alpha[i]);
        rows.push_back({{"q", i},
                        {"alpha_re", z.real()},
                        {"alpha_im", z.imag()},
                        {"alpha", scalar_text(vc.alpha[i])},
                        {"norm_squared", Field<RealOf<C>>::str(vc.norms[i + 1])}});
      }
      ordered_json doc = meta;
      doc["rows"] = rows;
      body << doc.dump(2) << '\n';
    } else {
      body << "q,alpha_re,alpha_im\n";
      for (std::size_t i = 0; i < vc.count(); ++i) {
        auto z = as_complex(vc.alpha[i]);
        body << i << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
      }
    }
  };
  if (backend == Backend::Rational) {
    render(verblunsky_coeffs<ComplexRational>(law, count, c.singular_tol));
  } else {
    render(verblunsky_coeffs<std::complex<double>>(law, count, c.singular_tol));
  }
  emit(c, body.str(), meta);
  return 0;
}

int cmd_szego1d(const Common& c, int q_min, int q_max, double quad_tol) {
  DensitySpec density = load_density(c.config);
  ClassGReport g = class_g_check(density, quad_tol);
  if (!g.in_class) throw NotClassG("density '" + density.name() + "' is not in class G: " + g.reason);
  SzegoReport report = szego_asymptote_1d(density, q_min, q_max, quad_tol);
  ordered_json meta{{"command", "szego1d"},
                    {"density", report.density},
                    {"backend", backend_name(report.backend)},
                    {"quadrature_tolerance", quad_tol},
                    {"log_mean", report.log_mean},
                    {"weight_integral", g.weight_integral},
                    {"log_integral", g.log_integral}};
  std::ostringstream body;
  if (c.output == "json") {
    ordered_json doc = meta;
    doc["rows"] = ordered_json::array();
    for (const SzegoRow& r : report.rows)
      doc["rows"].push_back(
          {{"q", r.q}, {"norm", r.norm}, {"predicted", r.predicted}, {"ratio", r.ratio}, {"variant_prediction", r.variant}});
    body << doc.dump(2) << '\n';
  } else {
    body << "q,norm,predicted,ratio\n";
    for (const SzegoRow& r : report.rows)
      body << r.q << ',' << format_double(r.norm) << ',' << format_double(r.predicted) << ',' << format_double(r.ratio)
           << '\n';
  }
  emit(c, body.str(), meta);
  return 0;
}

int cmd_hankel(const Common& c, int q_max, bool dump_matrix, std::uint64_t cap) {
  FreeFamily family = load_family(c.config, backend_of(c));
  GramOptions options;
  options.threads = threads_of(c);
  options.singular_tolerance = c.singular_tol;
  options.enumeration_cap = cap;
  ordered_json meta{{"command", "hankel"},
                    {"backend", backend_name(family.backend())},
                    {"n", family.size()},
                    {"singular_tolerance", c.singular_tol}};
  ordered_json doc = meta;
  doc["rows"] = dispatch(family.backend(), !family.all_self_adjoint(), [&]<class T>() {
    MomentEngine<T> engine(family);
    auto report = hankel_det(engine, LengthCut{q_max}, options);
    const std::size_t singular_at = report.pivots.size();
    ordered_json rows = ordered_json::array();
    for (int q = 1; q <= q_max; ++q) {
      auto dim = static_cast<std::size_t>(enumeration_count(family.size(), q, EnumerationMode::StrictlyBelow));
      ordered_json row{{"q", q}, {"dimension", dim}};
      const bool singular = dim > singular_at;
      if constexpr (Field<T>::exact) {
        RealOf<T> det(1);
        if (singular) {
          det = 0;
        } else {
          for (std::size_t i = 0; i < dim; ++i) det *= report.pivots[i];
        }
        row["det"] = to_string(det);
      }
      if (singular) {
        row["logdet"] = nullptr;
        row["singular_word"] = to_string(*report.singular);
        row["singular_pivot"] = Field<RealOf<T>>::str(*report.singular_pivot);
      } else {
        double logdet = 0.0;
        for (std::size_t i = 0; i < dim; ++i) logdet += report.log_pivots[i];
        row["logdet"] = logdet;
      }
      rows.push_back(row);
    }
    if (dump_matrix) {
      auto g = gram_matrix(engine, std::span<const Word>(report.index_words), options.threads);
      ordered_json words = ordered_json::array();
      for (const Word& w : report.index_words) words.push_back(to_string(w));
      ordered_json entries = ordered_json::array();
      for (std::size_t i = 0; i < g.rows(); ++i) {
        ordered_json r = ordered_json::array();
        for (std::size_t j = 0; j < g.cols(); ++j) r.push_back(scalar_text(g(i, j)));
        entries.push_back(r);
      }
      rows.push_back({{"matrix", {{"index_words", words}, {"entries", entries}}}});
    }
    return rows;
  });
  if (dump_matrix) {
    doc["matrix"] = doc["rows"].back()["matrix"];
    doc["rows"].erase(doc["rows"].size() - 1);
  }
  std::string body = doc.dump(2) + "\n";
  emit(c, body, meta);
  return 0;
}

int cmd_entropy(const Common& c, int n, int J, const std::string& route) {
  MarginalLaw law = load_law(c.config);
  if (n < 2) throw ConfigError("--n must be at least 2");
  ordered_json meta{{"command", "entropy"}, {"law", law.name()}, {"n", n}, {"truncation", J},
                    {"backend", backend_name(law.exact() ? Backend::Rational : Backend::Float)}};
  ordered_json doc = meta;
  auto put = [&](const std::string& key, const EntropyEstimate& e) {
    ordered_json r{{"value", e.value}, {"tail_bound", e.tail_bound}, {"truncation", e.truncation}};
    if (e.variant) r["variant_value"] = *e.variant;
    doc["routes"][key] = r;
  };
  if (route == "norm" || route == "all") put("norm", entropy_number(law, n, J));
  const bool unitary = law.kind() == VariableKind::Unitary;
  if (!unitary && (route == "jacobi" || route == "all")) {
    put("jacobi", law.exact() ? entropy_from_jacobi(jacobi_coeffs<Rational>(law, J, c.singular_tol), n)
                              : entropy_from_jacobi(jacobi_coeffs<double>(law, J, c.singular_tol), n));
  }
  if (unitary && (route == "verblunsky" || route == "all")) {
    put("verblunsky", law.exact()
                          ? entropy_from_verblunsky(verblunsky_coeffs<ComplexRational>(law, J, c.singular_tol), n)
                          : entropy_from_verblunsky(verblunsky_coeffs<std::complex<double>>(law, J, c.singular_tol), n));
  }
  if (!doc.contains("routes")) throw ConfigError("route '" + route + "' does not apply to law '" + law.name() + "'");
  emit(c, doc.dump(2) + "\n", meta);
  return 0;
}

int cmd_limit(const Common& c, int q_direct, int q_factored, int J, double route_tol, std::uint64_t cap) {
  FreeFamily family = load_family(c.config);
  TraceOptions options;
  options.truncation = J;
  options.direct_backend = backend_of(c);
  options.threads = threads_of(c);
  options.route_tolerance = route_tol;
  options.singular_tolerance = c.singular_tol;
  options.enumeration_cap = cap;
  ConvergenceTrace trace = convergence_trace(family, q_direct, q_factored, options);
  ordered_json meta{{"command", "limit"},
                    {"n", family.size()},
                    {"backend", backend_name(options.direct_backend.value_or(family.backend()))},
                    {"route_tolerance", route_tol},
                    {"singular_tolerance", c.singular_tol},
                    {"truncation", J},
                    {"predicted", trace.limit.value},
                    {"predicted_tail_bound", trace.limit.tail_bound},
                    {"max_crosscheck", trace.max_crosscheck},
                    {"routes_agree", trace.routes_agree}};
  if (trace.richardson) meta["richardson"] = *trace.richardson;
  if (!trace.variant_closed_form_delta.empty()) {
    double worst = 0.0;
    for (double d : trace.variant_closed_form_delta) worst = std::max(worst, std::fabs(d));
    meta["variant_closed_form_max_delta"] = worst;
  }
  emit(c, trace_csv(trace), meta);
  if (!trace.routes_agree) {
    std::cerr << "error: direct and factored routes disagree beyond " << format_double(route_tol)
              << " (max relative delta " << format_double(trace.max_crosscheck) << ")\n";
    return kExitInvariant;
  }
  return 0;
}

int cmd_selftest(const Common& c, std::uint64_t seed, int threads) {
  auto results = run_selftest(seed, threads);
  int failures = 0;
  std::ostringstream body;
  for (const PropertyResult& r : results) {
    body << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    if (!r.passed) ++failures;
  }
  body << results.size() - static_cast<std::size_t>(failures) << "/" << results.size() << " properties hold (seed "
       << seed << ")\n";
  ordered_json meta{{"command", "selftest"}, {"seed", seed}, {"properties", results.size()}, {"failures", failures}};
  emit(c, body.str(), meta);
  return failures == 0 ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal polynomials, Gram determinants and entropy numbers of free families"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    auto* opt = sub->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
    if (needs_config) opt->required();
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--threads", c.threads, "worker threads (default FPSZ_THREADS or hardware)");
    sub->add_option("--singular-tol", c.singular_tol, "relative pivot tolerance for the float backend")
        ->capture_default_str();
  };

  std::string word;
  auto* moment = app.add_subcommand("moment", "trace of a word");
  add_common(moment);
  moment->add_option("--word", word, "word such as \"x1^2 x2 x1*\"")->required();
  moment->add_option("--backend", c.backend, "rational or float (default from config)");

  int count = 20;
  auto* jacobi = app.add_subcommand("jacobi", "Jacobi coefficients of a self-adjoint law");
  add_common(jacobi);
  jacobi->add_option("--count", count, "number of coefficients")->capture_default_str()->check(CLI::PositiveNumber);
  jacobi->add_option("--output", c.output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  jacobi->add_option("--backend", c.backend, "rational or float");

  auto* verblunsky = app.add_subcommand("verblunsky", "Verblunsky coefficients of a unitary law");
  add_common(verblunsky);
  verblunsky->add_option("--count", count, "number of coefficients")->capture_default_str()->check(CLI::PositiveNumber);
  verblunsky->add_option("--output", c.output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  verblunsky->add_option("--backend", c.backend, "rational or float");

  int q_min = 1;
  int q_max = 20;
  double quad_tol = 1e-8;
  auto* szego = app.add_subcommand("szego1d", "classical Szego asymptote of a density on [-1, 1]");
  add_common(szego);
  szego->add_option("--qmin", q_min, "first order")->capture_default_str()->check(CLI::NonNegativeNumber);
  szego->add_option("--qmax", q_max, "last order")->capture_default_str()->check(CLI::NonNegativeNumber);
  szego->add_option("--quad-tol", quad_tol, "quadrature relative tolerance")->capture_default_str();
  szego->add_option("--output", c.output, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  int hankel_q = 3;
  bool dump_matrix = false;
  std::uint64_t cap = kDefaultEnumerationCap;
  auto* hankel = app.add_subcommand("hankel", "Gram determinants D_q over words of length < q");
  add_common(hankel);
  hankel->add_option("--qmax", hankel_q, "largest q")->capture_default_str()->check(CLI::PositiveNumber);
  hankel->add_option("--backend", c.backend, "rational or float (default from config)");
  hankel->add_option("--output", c.output, "json")->check(CLI::IsMember({"json"}));
  hankel->add_flag("--dump-matrix", dump_matrix, "include the Gram matrix of the largest cut");
  hankel->add_option("--enumeration-cap", cap, "largest word count to enumerate")->capture_default_str();

  int n = 2;
  int J = 60;
  std::string route = "all";
  auto* entropy = app.add_subcommand("entropy", "entropy number of a law");
  add_common(entropy);
  entropy->add_option("--n", n, "n >= 2")->capture_default_str();
  entropy->add_option("--J", J, "truncation order")->capture_default_str()->check(CLI::PositiveNumber);
  entropy->add_option("--route", route, "norm, jacobi, verblunsky or all")
      ->capture_default_str()
      ->check(CLI::IsMember({"norm", "jacobi", "verblunsky", "all"}));

  int q_direct = 0;
  int q_factored = 30;
  double route_tol = 1e-9;
  auto* limit = app.add_subcommand("limit", "convergence trace of ln D_{q+1} / (q n^q)");
  add_common(limit);
  limit->add_option("--q-direct", q_direct, "largest q for the Gram-determinant route")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  limit->add_option("--q-factored", q_factored, "largest q for the factored route")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  limit->add_option("--J", J, "entropy truncation order")->capture_default_str()->check(CLI::PositiveNumber);
  limit->add_option("--route-tol", route_tol, "relative route-agreement tolerance")->capture_default_str();
  limit->add_option("--backend", c.backend, "backend of the direct route (default from config)");
  limit->add_option("--enumeration-cap", cap, "largest word count to enumerate")->capture_default_str();

  std::uint64_t seed = 1;
  auto* selftest = app.add_subcommand("selftest", "randomized property suite");
  selftest->add_option("--seed", seed, "random seed")->capture_default_str();
  selftest->add_option("--threads", c.threads, "worker threads");
  selftest->add_option("--out", c.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*moment) return cmd_moment(c, word);
    if (*jacobi) return cmd_jacobi(c, count);
    if (*verblunsky) return cmd_verblunsky(c, count);
    if (*szego) {
      if (q_min > q_max) throw ConfigError("--qmin exceeds --qmax");
      return cmd_szego1d(c, q_min, q_max, quad_tol);
    }
    if (*hankel) return cmd_hankel(c, hankel_q, dump_matrix, cap);
    if (*entropy) return cmd_entropy(c, n, J, route);
    if (*limit) return cmd_limit(c, q_direct, q_factored, J, route_tol, cap);
    if (*selftest) return cmd_selftest(c, seed, threads_of(c));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const OrderUnsupported& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const EnumerationCapExceeded& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DegenerateAt& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const DegenerateLaw& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const NotClassG& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const QuadratureFailure& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
