#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fpsz/grammat.hpp"
#include "fpsz/selftest.hpp"
#include "fpsz/szegolimit.hpp"

using namespace fpsz;

namespace {

const double kLn2 = std::numbers::ln2;

FreeFamily scaled_semis(long a, int n = 2, Backend b = Backend::Rational) {
  return FreeFamily(std::vector<MarginalLaw>(static_cast<std::size_t>(n), MarginalLaw::semicircle(Param(a))), b);
}

FreeFamily semi_arcsine(Backend b = Backend::Rational) {
  return FreeFamily({MarginalLaw::semicircle(), MarginalLaw::arcsine()}, b);
}

MarginalLaw cosine_law() {
  return MarginalLaw::from_moments(VariableKind::Unitary, {ComplexParam{Param(1L)}, ComplexParam{Param(Rational(1, 2))}},
                                   TableTail::Zero, "cosine");
}

// Independent evaluation of sum_{j>=1} w_j / n^j, with w_j = ln ||P_j||^2
// taken from the minor-ratio route in exact arithmetic.
double entropy_oracle(const MarginalLaw& law, int n, int J) {
  double sum = 0.0;
  if (law.kind() == VariableKind::SelfAdjoint) {
    auto norms = orth_norms_1d_minor_ratio<Rational>(law, J);
    for (int j = 1; j <= J; ++j) sum += log_abs(norms.values[static_cast<std::size_t>(j)]) / std::pow(n, j);
  } else {
    auto norms = orth_norms_1d_minor_ratio<ComplexRational>(law, J);
    for (int j = 1; j <= J; ++j) sum += log_abs(norms.values[static_cast<std::size_t>(j)]) / std::pow(n, j);
  }
  return sum;
}

}  // namespace

TEST_CASE("entropy numbers") {
  for (int n : {2, 3, 5}) {
    CHECK(entropy_number(MarginalLaw::semicircle(), n, 40).value == 0.0);
    CHECK(entropy_number(MarginalLaw::haar(), n, 40).value == 0.0);
  }
  for (long a : {2L, 3L}) {
    auto e = entropy_number(MarginalLaw::semicircle(Param(a)), 2, 60);
    CHECK(e.value == doctest::Approx(4 * std::log(double(a))).epsilon(1e-10));
    CHECK(e.terms.size() == 60);
  }
  // n = 3: sum 2j ln a / 3^j = 2 ln a * (3/4)
  CHECK(entropy_number(MarginalLaw::semicircle(Param(2L)), 3, 60).value ==
        doctest::Approx(1.5 * kLn2).epsilon(1e-10));
  for (int n : {2, 3}) {
    auto e = entropy_number(MarginalLaw::arcsine(), n, 30);
    CHECK(e.value == doctest::Approx(entropy_oracle(MarginalLaw::arcsine(), n, 30)).epsilon(1e-12));
    auto c = entropy_number(cosine_law(), n, 30);
    CHECK(c.value == doctest::Approx(entropy_oracle(cosine_law(), n, 30)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(entropy_number(MarginalLaw::two_point(), 2, 10), DegenerateLaw);
}

TEST_CASE("entropy tail bound covers the truncation error") {
  for (const MarginalLaw& law : {MarginalLaw::arcsine(), MarginalLaw::free_poisson(2L), cosine_law(),
                                 MarginalLaw::semicircle(Param(3L))}) {
    for (int n : {2, 3}) {
      auto short_sum = entropy_number(law, n, 16);
      auto long_sum = entropy_number(law, n, 32);
      CAPTURE(law.name());
      CHECK(std::fabs(short_sum.value - long_sum.value) <= short_sum.tail_bound);
    }
  }
  auto r = check_tail_bounds();
  CHECK_MESSAGE(r.passed, r.detail);
}

TEST_CASE("entropy from Jacobi coefficients") {
  std::vector<double> zeros(40, 0.0);
  CHECK(entropy_from_jacobi(std::span<const double>(zeros), 2).value == 0.0);
  std::vector<double> consts(60, std::log(1.5));
  CHECK(entropy_from_jacobi(std::span<const double>(consts), 2).value ==
        doctest::Approx(4 * std::log(1.5)).epsilon(1e-10));
  for (int n : {2, 3}) {
    auto jac = jacobi_coeffs<Rational>(MarginalLaw::arcsine(), 60);
    auto viaj = entropy_from_jacobi(jac, n);
    auto norm = entropy_number(MarginalLaw::arcsine(), n, 60);
    CHECK(std::fabs(viaj.value - norm.value) <= 1e-10);
    REQUIRE(viaj.variant);
    // alternative prefactor 2(n-1)/n versus 2n/(n-1)
    CHECK(*viaj.variant == doctest::Approx(viaj.value * (n - 1.0) * (n - 1.0) / (n * n)).epsilon(1e-12));
  }
}

TEST_CASE("entropy from Verblunsky coefficients") {
  auto haar = verblunsky_coeffs<ComplexRational>(MarginalLaw::haar(), 20);
  CHECK(entropy_from_verblunsky(haar, 2).value == 0.0);
  // c_k = w^k has alpha_0 = conj(w) and alpha_j = 0 for j >= 1
  const ComplexRational w(Rational(1, 2));
  std::vector<ComplexParam> table;
  ComplexRational power(1);
  for (int k = 0; k <= 130; ++k) {
    table.push_back(ComplexParam{Param(power.re), Param(power.im)});
    power *= w;
  }
  MarginalLaw single = MarginalLaw::from_moments(VariableKind::Unitary, table, TableTail::Unsupported, "single");
  auto sv = verblunsky_coeffs<ComplexRational>(single, 10);
  CHECK(sv.alpha[0] == conj(w));
  for (std::size_t j = 1; j < sv.alpha.size(); ++j) CHECK(sv.alpha[j] == ComplexRational(0));
  for (const MarginalLaw& law : {single, cosine_law()}) {
    for (int n : {2, 3}) {
      auto v = verblunsky_coeffs<ComplexRational>(law, 60);
      auto ev = entropy_from_verblunsky(v, n);
      auto en = entropy_number(law, n, 60);
      CAPTURE(law.name());
      CHECK(std::fabs(ev.value - en.value) <= 1e-10);
    }
  }
  auto r = check_entropy_routes();
  CHECK_MESSAGE(r.passed, r.detail);
}

TEST_CASE("s_q routes") {
  auto semis = scaled_semis(1);
  for (int q = 1; q <= 8; ++q) {
    CHECK(scaled_log_sq(semis, q, SqRoute::Enumerate) == 0.0);
    CHECK(scaled_log_sq(semis, q, SqRoute::ClosedForm) == 0.0);
  }
  auto a3 = scaled_semis(3);
  for (int q = 1; q <= 10; ++q) {
    double expected = 2 * q * std::log(3.0);
    CHECK(scaled_log_sq(a3, q, SqRoute::Enumerate) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(scaled_log_sq(a3, q, SqRoute::ClosedForm) == doctest::Approx(expected).epsilon(1e-12));
  }
  auto mixed = semi_arcsine();
  for (int q = 1; q <= 10; ++q) {
    double e = scaled_log_sq(mixed, q, SqRoute::Enumerate, 4);
    double c = scaled_log_sq(mixed, q, SqRoute::ClosedForm);
    CHECK(close_mixed(e, c, 1e-10));
  }
  auto table = exact_norm_table(mixed, 8);
  for (int q = 1; q <= 8; ++q) CHECK(exact_sq_enumerate(table, q) == exact_sq_closed_form(table, q));
  // the (q-2-j) variant disagrees from q = 3 on
  auto logs = log_norm_table(mixed, 6);
  CHECK(scaled_log_sq_variant(logs, 2) == doctest::Approx(scaled_log_sq(logs, 2, SqRoute::ClosedForm)));
  CHECK(std::fabs(scaled_log_sq_variant(logs, 4) - scaled_log_sq(logs, 4, SqRoute::ClosedForm)) > 1e-3);
  CHECK_THROWS_AS(scaled_log_sq(logs, 4, SqRoute::Enumerate, 1, 10), EnumerationCapExceeded);
  auto r = check_sq_routes();
  CHECK_MESSAGE(r.passed, r.detail);
}

TEST_CASE("s_q equals the product of Gram pivots over one layer") {
  auto mixed = semi_arcsine();
  MomentEngine<Rational> engine(mixed);
  auto report = hankel_det(engine, LengthCut{5});
  REQUIRE_FALSE(report.singular);
  auto table = exact_norm_table(mixed, 4);
  std::size_t pos = 1;
  for (int q = 1; q <= 4; ++q) {
    Rational product(1);
    for (int i = 0; i < (1 << q); ++i) product *= report.pivots[pos++];
    CHECK(product == exact_sq_enumerate(table, q));
  }
}

TEST_CASE("recursion closed form") {
  std::vector<Rational> zeros(3, Rational(0));
  auto c = recursion_closed_form<Rational>(Rational(1), Rational(1), zeros);
  CHECK(c == std::vector<Rational>{1, 1, 2, 4});
  auto z = recursion_closed_form<Rational>(Rational(5, 3), Rational(0), zeros);
  for (const Rational& v : z) CHECK(v == 0);
  std::vector<double> dd{0.5, -1.0, 2.0};
  auto cd = recursion_closed_form<double>(0.5, 1.0, dd);
  // c_q = r sum_{j<q} c_j + d_q
  std::vector<double> ref{1.0};
  for (double d : dd) {
    double s = 0.0;
    for (double v : ref) s += v;
    ref.push_back(0.5 * s + d);
  }
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(cd[i] == doctest::Approx(ref[i]).epsilon(1e-14));
  auto r = check_recursion_closed_form(11, 1000);
  CHECK_MESSAGE(r.passed, r.detail);
}

TEST_CASE("forcing term identity") {
  auto r = check_forcing_identity();
  CHECK_MESSAGE(r.passed, r.detail);
}

TEST_CASE("predicted limit") {
  CHECK(predicted_limit(scaled_semis(1), 60).value == 0.0);
  auto l = predicted_limit(scaled_semis(2), 60);
  CHECK(l.value == doctest::Approx(4 * kLn2).epsilon(1e-10));
  CHECK(l.marginals.size() == 2);
  CHECK(l.tail_bound >= 0.0);
  FreeFamily haar3(std::vector<MarginalLaw>(3, MarginalLaw::haar()), Backend::Rational);
  CHECK(predicted_limit(haar3, 60).value == 0.0);
  FreeFamily one({MarginalLaw::semicircle()}, Backend::Rational);
  CHECK_THROWS(predicted_limit(one, 10));
  auto r = check_scale_sensitivity();
  CHECK_MESSAGE(r.passed, r.detail);
}

TEST_CASE("convergence trace") {
  auto zero = convergence_trace(scaled_semis(1), 4, 12);
  for (const TraceRow& row : zero.rows) {
    CHECK(row.lnD_ratio == 0.0);
    CHECK(row.gap == 0.0);
  }
  CHECK(zero.routes_agree);

  auto trace = convergence_trace(scaled_semis(2), 3, 30);
  double previous_gap = -1.0;
  for (const TraceRow& row : trace.rows) {
    if (row.route != TraceRoute::Factored) continue;
    double q = row.q;
    double analytic = 2 * kLn2 * ((q - 1) * std::pow(2.0, q + 1) + 2) / (q * std::pow(2.0, q));
    CHECK(std::fabs(row.lnD_ratio - analytic) <= 1e-12 * analytic);
    CHECK(row.gap < 0.0);
    if (previous_gap > 0.0) CHECK(std::fabs(row.gap) < previous_gap);
    previous_gap = std::fabs(row.gap);
  }
  REQUIRE(trace.richardson);
  CHECK(std::fabs(*trace.richardson - 4 * kLn2) < 1e-6);
  CHECK(trace.routes_agree);

  auto mixed = convergence_trace(semi_arcsine(Backend::Float), 6, 30, TraceOptions{});
  CHECK(mixed.routes_agree);
  CHECK(mixed.max_crosscheck <= 1e-9);
  int with_delta = 0;
  for (const TraceRow& row : mixed.rows) with_delta += row.crosscheck_delta.has_value();
  CHECK(with_delta == 12);

  FreeFamily tp({MarginalLaw::two_point(), MarginalLaw::two_point()}, Backend::Rational);
  CHECK_THROWS_AS(convergence_trace(tp, 3, 5), DegenerateLaw);
}

TEST_CASE("trace CSV") {
  auto trace = convergence_trace(semi_arcsine(), 2, 5);
  std::string csv = trace_csv(trace);
  CHECK(csv.rfind("q,route,ln_sq_scaled,lnD_ratio,predicted,gap,crosscheck_delta\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 7);
  CHECK(csv.find("1,direct,") != std::string::npos);
  CHECK(csv.find("5,factored,") != std::string::npos);
  CHECK(trace_csv(convergence_trace(semi_arcsine(), 2, 5, TraceOptions{.threads = 3})) == csv);
}
