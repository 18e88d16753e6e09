#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crossdiff/pressure.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace crossdiff;

namespace {

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) v[i] = std::exp(a + (b - a) * i / (n - 1));
  return v;
}

// Finite-difference oracle with one Richardson step: O(h^4) truncation, so the
// analytic derivatives are held to 1e-6 relative without fighting roundoff.
double fd1(const PressureLaw& law, double s, double h) {
  auto d = [&](double hh) { return (eval_f(law, s + hh) - eval_f(law, s - hh)) / (2 * hh); };
  return (4 * d(h / 2) - d(h)) / 3;
}
double fd2(const PressureLaw& law, double s, double h) {
  auto d = [&](double hh) {
    return (eval_f(law, s + hh) - 2 * eval_f(law, s) + eval_f(law, s - hh)) / (hh * hh);
  };
  return (4 * d(h / 2) - d(h)) / 3;
}
double fd3(const PressureLaw& law, double s, double h) {
  auto d = [&](double hh) {
    return (eval_f(law, s + 2 * hh) - 2 * eval_f(law, s + hh) + 2 * eval_f(law, s - hh) -
            eval_f(law, s - 2 * hh)) /
           (2 * hh * hh * hh);
  };
  return (4 * d(h / 2) - d(h)) / 3;
}

double rel_err(double got, double want) { return std::abs(got - want) / (1.0 + std::abs(want)); }

}  // namespace

TEST_CASE("f evaluation matches closed forms") {
  CHECK(eval_f(PressureLaw::logarithmic(1.0), 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(eval_f(PressureLaw::power(0.5, 1.0), 1.0) == doctest::Approx(-2.0).epsilon(1e-14));
  const double e = std::exp(1.0);
  CHECK(eval_f(PressureLaw::logarithmic(2.0), e) == doctest::Approx(2.0 * e).epsilon(1e-14));
}

TEST_CASE("f rejects non-positive arguments") {
  auto law = PressureLaw::power(0.5, 1.0);
  CHECK_THROWS_AS(eval_f(law, 0.0), std::domain_error);
  CHECK_THROWS_AS(eval_fprime(law, -1.0), std::domain_error);
  CHECK_THROWS_AS(eval_g(law, 0.0), std::domain_error);
}

TEST_CASE("sub-floor arguments are clamped and counted") {
  auto law = PressureLaw::logarithmic(1.0);
  reset_floor_clamp_count();
  const double at_floor = eval_fprime(law, kSFloor);
  CHECK(eval_fprime(law, 1e-13) == at_floor);
  CHECK(floor_clamp_count() == 1);
  reset_floor_clamp_count();
}

TEST_CASE("second derivative closed-form spot values") {
  CHECK(eval_fsecond(PressureLaw::logarithmic(1.0), 2.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eval_fsecond(PressureLaw::power(0.5, 1.0), 4.0) == doctest::Approx(0.0625).epsilon(1e-14));
}

TEST_CASE("logarithmic law has s f'''/f'' identically -1") {
  auto law = PressureLaw::logarithmic(1.0);
  for (double s : logspace(1e-2, 1e2, 25)) {
    CHECK(s * eval_fthird(law, s) / eval_fsecond(law, s) == doctest::Approx(-1.0).epsilon(1e-13));
  }
}

TEST_CASE("analytic derivatives agree with finite differences of f") {
  std::vector<PressureLaw> laws = {PressureLaw::power(0.5, 1.0), PressureLaw::power(0.3, 2.5),
                                   PressureLaw::logarithmic(1.0), PressureLaw::logarithmic(0.7)};
  for (const auto& law : laws) {
    for (double s : logspace(1e-2, 1e2, 40)) {
      const double h = 1e-2 * s;
      CHECK(rel_err(eval_fprime(law, s), fd1(law, s, h)) < 1e-6);
      CHECK(rel_err(eval_fsecond(law, s), fd2(law, s, h)) < 1e-6);
      CHECK(rel_err(eval_fthird(law, s), fd3(law, s, h)) < 1e-6);
    }
  }
}

TEST_CASE("f'' is positive over the sampled range for every built-in law") {
  for (const auto& law : {PressureLaw::power(0.5, 1.0), PressureLaw::power(0.9, 0.2),
                          PressureLaw::logarithmic(3.0)}) {
    for (double s : logspace(1e-2, 1e2, 50)) CHECK(eval_fsecond(law, s) > 0.0);
  }
}

TEST_CASE("g closed forms and exact zero at s = 1") {
  CHECK(eval_g(PressureLaw::power(0.5, 1.0), 1.0) == 0.0);
  CHECK(eval_g(PressureLaw::logarithmic(3.0), 1.0) == 0.0);
  CHECK(eval_g(PressureLaw::logarithmic(3.0), 2.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(eval_g(PressureLaw::power(0.5, 1.0), 4.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("g is strictly increasing on sampled points") {
  auto law = PressureLaw::power(0.5, 1.0);
  auto ss = logspace(1e-2, 1e2, 50);
  for (size_t i = 1; i < ss.size(); ++i) CHECK(eval_g(law, ss[i]) > eval_g(law, ss[i - 1]));
}

TEST_CASE("custom-law g quadrature matches the equivalent power closed form") {
  // custom law wrapping the alpha=0.5, lambda=1 power law
  auto f = [](double s) { return -2.0 * std::sqrt(s); };
  auto f1 = [](double s) { return -1.0 / std::sqrt(s); };
  auto f2 = [](double s) { return 0.5 * std::pow(s, -1.5); };
  auto f3 = [](double s) { return -0.75 * std::pow(s, -2.5); };
  auto law = PressureLaw::custom(0.5, 4.0, f, f1, f2, f3);
  auto ref = PressureLaw::power(0.5, 1.0);
  for (double s : {0.03, 0.5, 1.0, 2.0, 17.0, 90.0}) {
    CHECK(std::abs(eval_g(law, s) - eval_g(ref, s)) < 1e-9);
  }
}

TEST_CASE("derivative of g equals s times f'' for the closed forms") {
  // both chain-rule expressions written out from the respective closed forms
  for (double s : logspace(1e-2, 1e2, 30)) {
    {
      auto law = PressureLaw::power(0.4, 2.0);
      const double gprime = law.lambda * law.alpha * std::pow(s, law.alpha - 1.0);
      CHECK(rel_err(gprime, s * eval_fsecond(law, s)) < 1e-12);
    }
    {
      auto law = PressureLaw::logarithmic(2.5);
      const double gprime = law.lambda;
      CHECK(rel_err(gprime, s * eval_fsecond(law, s)) < 1e-12);
    }
  }
}

TEST_CASE("hypothesis audit: power law at kappa = 1/(alpha^2 lambda) has zero growth margin") {
  auto law = PressureLaw::power(0.5, 1.0);
  law.kappa = 1.0 / (law.alpha * law.alpha * law.lambda);
  auto rep = check_hypothesis(law, logspace(1e-2, 1e2, 50));
  CHECK(rep.growth_applicable);
  CHECK(rep.all_pass);
  for (const auto& smp : rep.samples) {
    CHECK(std::abs(smp.growth_margin) < 1e-10 * (1.0 + smp.s));
  }
}

TEST_CASE("hypothesis audit: logarithmic law log-ratio margin is kappa - 1 everywhere") {
  auto law = PressureLaw::logarithmic(1.0, 1.5);
  auto rep = check_hypothesis(law, logspace(1e-2, 1e2, 20));
  CHECK_FALSE(rep.growth_applicable);
  CHECK(rep.all_pass);
  for (const auto& smp : rep.samples) {
    CHECK(smp.logratio_margin == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("hypothesis audit flags non-convex custom laws") {
  // f'' dips negative around s = 1
  auto f = [](double s) { return s * s - 2.0 * std::sin(s); };
  auto f1 = [](double s) { return 2.0 * s - 2.0 * std::cos(s); };
  auto f2 = [](double s) { return 2.0 + 2.0 * std::sin(s) - 4.0 * std::exp(-10.0 * (s - 1.0) * (s - 1.0)); };
  auto f3 = [](double s) {
    return 2.0 * std::cos(s) + 80.0 * (s - 1.0) * std::exp(-10.0 * (s - 1.0) * (s - 1.0));
  };
  auto law = PressureLaw::custom(0.5, 4.0, f, f1, f2, f3);
  auto rep = check_hypothesis(law, {0.5, 1.0, 5.0});
  CHECK_FALSE(rep.all_pass);
  CHECK_FALSE(rep.samples[1].convex);  // f''(1) = 2 + 2 sin(1) - 4 < 0
  CHECK(rep.samples[2].convex);
}
