#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fpsz/config.hpp"
#include "fpsz/density.hpp"
#include "fpsz/errors.hpp"
#include "fpsz/laws.hpp"
#include "fpsz/linalg.hpp"
#include "oracles.hpp"

using namespace fpsz;
using nlohmann::json;

namespace {

Rational re(const MarginalLaw& law, int k) { return law.exact_moment(k).re; }

template <class T>
bool hankel_psd(const MarginalLaw& law, int size) {
  Matrix<T> h(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
  const bool unitary = law.kind() == VariableKind::Unitary;
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = law.template moment<T>(unitary ? j - i : i + j);
  return is_psd(h);
}

}  // namespace

TEST_CASE("semicircle moments") {
  MarginalLaw s = MarginalLaw::semicircle();
  CHECK(re(s, 4) == 2);
  CHECK(re(s, 0) == 1);
  CHECK(re(s, 3) == 0);
  CHECK(re(s, 10) == 42);
  // quadrature oracle: (1/2pi) int t^{2k} sqrt(4 - t^2) dt with t = 2 cos th
  for (int k = 0; k <= 3; ++k) {
    double q = oracle::theta_trapezoid([k](double th) {
      double t = 2 * std::cos(th);
      return std::pow(t, 2 * k) * 4 * std::sin(th) * std::sin(th) / (2 * std::numbers::pi);
    });
    CHECK(q == doctest::Approx(re(s, 2 * k).get_d()).epsilon(1e-12));
  }
}

TEST_CASE("other built-in moments") {
  CHECK(MarginalLaw::haar().exact_moment(3) == ComplexRational(0));
  CHECK(MarginalLaw::haar().exact_moment(0) == ComplexRational(1));
  MarginalLaw tp = MarginalLaw::two_point();
  CHECK(re(tp, 5) == 0);
  CHECK(re(tp, 6) == 1);
  MarginalLaw asym = MarginalLaw::two_point(Param(-1L), Param(2L), Param(Rational(1, 3)));
  CHECK(re(asym, 3) == Rational(1, 3) * -1 + Rational(2, 3) * 8);
  MarginalLaw arc = MarginalLaw::arcsine();
  CHECK(re(arc, 4) == 6);
  CHECK(re(arc, 6) == 20);
  // free Poisson rate 2: m_1 = 2, m_2 = 6, m_3 = 22 (Narayana polynomials)
  MarginalLaw fp = MarginalLaw::free_poisson(2L);
  CHECK(re(fp, 1) == 2);
  CHECK(re(fp, 2) == 6);
  CHECK(re(fp, 3) == 22);
  MarginalLaw fj = MarginalLaw::free_poisson(2L, Param(3L));
  CHECK(re(fj, 2) == 54);
  // shifted semicircle: tau((x + 1)^2) = 2
  CHECK(re(MarginalLaw::semicircle(Param(1L), Param(1L)), 2) == 2);
}

TEST_CASE("scaling property m_k(a x) = a^k m_k(x)") {
  Rational a(3, 2);
  for (int k = 0; k <= 12; ++k) {
    CHECK(re(MarginalLaw::semicircle(a), k) == pow(a, k) * re(MarginalLaw::semicircle(), k));
    CHECK(re(MarginalLaw::arcsine(a), k) == pow(a, k) * re(MarginalLaw::arcsine(), k));
  }
}

TEST_CASE("built-in laws have positive semidefinite moment matrices through order 16") {
  std::vector<MarginalLaw> laws{MarginalLaw::semicircle(),
                                MarginalLaw::semicircle(Rational(5, 3), Rational(-1, 2)),
                                MarginalLaw::arcsine(),
                                MarginalLaw::free_poisson(Rational(1, 3)),
                                MarginalLaw::free_poisson(4L),
                                MarginalLaw::two_point(),
                                MarginalLaw::two_point(Param(0L), Param(3L), Param(Rational(1, 5))),
                                MarginalLaw::haar()};
  for (const MarginalLaw& law : laws) {
    CAPTURE(law.name());
    if (law.kind() == VariableKind::Unitary) {
      CHECK(hankel_psd<ComplexRational>(law, 17));
    } else {
      CHECK(hankel_psd<Rational>(law, 9));  // uses m_0..m_16
    }
  }
}

TEST_CASE("float-only parameters") {
  MarginalLaw s = MarginalLaw::semicircle(Param::inexact(std::sqrt(2.0)));
  CHECK_FALSE(s.exact());
  CHECK(s.float_moment(2).real() == doctest::Approx(2.0));
  CHECK_THROWS_AS(s.exact_moment(2), BackendMismatch);
}

TEST_CASE("moment tables") {
  auto table = [](std::vector<long> v) {
    std::vector<ComplexParam> out;
    for (long x : v) out.push_back(ComplexParam{Param(x)});
    return out;
  };
  MarginalLaw ok = MarginalLaw::from_moments(VariableKind::SelfAdjoint, table({1, 0, 1, 0, 2}));
  CHECK(re(ok, 4) == 2);
  CHECK_THROWS_AS(ok.exact_moment(5), OrderUnsupported);
  CHECK_THROWS_AS(MarginalLaw::from_moments(VariableKind::SelfAdjoint, table({2, 0, 1})), InvalidLaw);
  // m_2 < m_1^2 is not a moment sequence
  CHECK_THROWS_AS(MarginalLaw::from_moments(VariableKind::SelfAdjoint, table({1, 2, 1})), InvalidLaw);
  CHECK_THROWS_AS(MarginalLaw::from_moments(VariableKind::Unitary, table({1, 2})), InvalidLaw);
  MarginalLaw circle = MarginalLaw::from_moments(VariableKind::Unitary,
                                                 {ComplexParam{Param(1L)}, ComplexParam{Param(Rational(1, 2))}},
                                                 TableTail::Zero);
  CHECK(circle.exact_moment(-1) == ComplexRational(Rational(1, 2)));
  CHECK(circle.exact_moment(7) == ComplexRational(0));
  MarginalLaw complex_circle = MarginalLaw::from_moments(
      VariableKind::Unitary, {ComplexParam{Param(1L)}, ComplexParam{Param(Rational(1, 4)), Param(Rational(1, 3))}});
  CHECK(complex_circle.exact_moment(-1) == ComplexRational(Rational(1, 4), Rational(-1, 3)));
  CHECK_THROWS_AS(MarginalLaw::semicircle().exact_moment(-1), OrderUnsupported);
}

TEST_CASE("class G check") {
  auto arc = class_g_check(DensitySpec::arcsine());
  CHECK(arc.in_class);
  CHECK(arc.weight_integral == doctest::Approx(2.0).epsilon(1e-10));
  // |log(1/pi)| * 2 pi
  CHECK(arc.log_integral == doctest::Approx(2 * std::numbers::pi * std::log(std::numbers::pi)).epsilon(1e-8));
  auto uni = class_g_check(DensitySpec::uniform());
  CHECK(uni.in_class);
  CHECK(std::isfinite(uni.log_integral));
  // oracle: int_{-pi}^{pi} |log(|sin t| / 2)| dt = 2 pi (2 ln 2)
  CHECK(uni.log_integral == doctest::Approx(4 * std::numbers::pi * std::log(2.0)).epsilon(1e-7));
  auto zero = class_g_check(DensitySpec::zero());
  CHECK_FALSE(zero.in_class);
  CHECK_THROWS_AS(szego_log_mean(DensitySpec::zero()), NotClassG);
  CHECK(szego_log_mean(DensitySpec::arcsine()) == doctest::Approx(-std::log(std::numbers::pi)).epsilon(1e-10));
  CHECK(class_g_check(DensitySpec::jacobi(0.5, -0.5)).in_class);
}

TEST_CASE("density moment laws") {
  MarginalLaw arc = DensitySpec::arcsine().moment_law(12);
  CHECK(re(arc, 2) == Rational(1, 2));
  CHECK(re(arc, 4) == Rational(3, 8));
  MarginalLaw uni = DensitySpec::uniform().moment_law(12);
  CHECK(re(uni, 2) == Rational(1, 3));
  CHECK(re(uni, 3) == 0);
  MarginalLaw jac = DensitySpec::jacobi(1.0, 1.0).moment_law(6);
  CHECK_FALSE(jac.exact());
  // (1 - t^2) * 3/4 has second moment 1/5
  CHECK(jac.float_moment(2).real() == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("config parsing") {
  json fam = json::parse(R"({"backend": "rational", "n": 3, "variables": [{"kind": "unitary", "law": "haar"}]})");
  FreeFamily f = parse_family(fam);
  CHECK(f.size() == 3);
  CHECK(f.backend() == Backend::Rational);
  CHECK_FALSE(f.all_self_adjoint());

  json scaled = json::parse(R"({"kind": "selfadjoint", "law": "semicircle", "params": {"scale": "3/2", "shift": 0.25}})");
  MarginalLaw s = parse_law(scaled);
  CHECK(s.exact());
  CHECK(re(s, 1) == Rational(1, 4));

  CHECK(parse_param(json(0.1)).exact == Rational(1, 10));
  CHECK_FALSE(parse_param(json::parse(R"({"float": 1.5})")).exact.has_value());
  CHECK(parse_param(json("-7/3")).exact == Rational(-7, 3));

  json floaty = json::parse(
      R"({"backend": "rational", "variables": [{"law": "semicircle", "params": {"scale": {"float": 1.41421356}}}]})");
  CHECK_THROWS_AS(parse_family(floaty), BackendMismatch);
  CHECK_NOTHROW(parse_family(floaty, Backend::Float));

  CHECK_THROWS_AS(parse_law(json::parse(R"({"law": "haar", "kind": "selfadjoint"})")), InvalidLaw);
  CHECK_THROWS_AS(parse_law(json::parse(R"({"law": "semicircle", "params": {"radius": 2}})")), ConfigError);
  CHECK_THROWS_AS(parse_law(json::parse(R"({"law": "gaussian"})")), ConfigError);
  CHECK_THROWS_AS(parse_law(json::parse(R"({"law": "moments", "kind": "selfadjoint", "moments": [1, 2, 1]})")),
                  InvalidLaw);
  CHECK_THROWS_AS(parse_family(json::parse(R"({"variables": []})")), ConfigError);
  CHECK_THROWS_AS(parse_family(json::parse(R"({"backend": "quad", "variables": [{"law": "haar"}]})")), ConfigError);
  CHECK_THROWS_AS(parse_family(json::parse(R"({"n": 3, "variables": [{"law": "haar"}, {"law": "haar"}]})")),
                  ConfigError);

  MarginalLaw table = parse_law(
      json::parse(R"({"kind": "unitary", "law": "moments", "moments": [1, [0, "1/3"]], "tail": "zero"})"));
  CHECK(table.exact_moment(1) == ComplexRational(0, Rational(1, 3)));
  CHECK(table.exact_moment(2) == ComplexRational(0));

  DensitySpec d = parse_density(json::parse(R"({"density": "jacobi", "params": {"alpha": 0.5, "beta": 1}})"));
  CHECK(d.name() == "jacobi");
  CHECK_THROWS_AS(parse_density(json::parse(R"({"density": "cauchy"})")), ConfigError);
}
