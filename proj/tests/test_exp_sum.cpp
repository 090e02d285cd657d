#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "expsum/errors.hpp"
#include "expsum/exp_sum.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using expsum::ExpSum;
using expsum::ExpTerm;

TEST_CASE("canonical form merges, drops and orders terms") {
  CHECK(expsum::merge_terms(std::vector<ExpTerm>{{1, 0.5}, {2, 0.5}}) ==
        ExpSum{{3, 0.5}});
  CHECK(expsum::merge_terms(std::vector<ExpTerm>{{1, 0.5}, {-1, 0.5}}) ==
        ExpSum{});
  CHECK(expsum::merge_terms(std::vector<ExpTerm>{{1, 0.2}, {1, 0.9}}) ==
        ExpSum{{1, 0.9}, {1, 0.2}});
  CHECK(ExpSum{{0, 0.5}, {2, 0.3}} == ExpSum{{2, 0.3}});
}

TEST_CASE("construction validates terms") {
  CHECK_THROWS_AS(ExpSum({{1, -0.5}}), expsum::domain_error);
  CHECK_THROWS_AS(ExpSum({{1, 0.0}}), expsum::domain_error);
  CHECK_THROWS_AS(ExpSum({{1, std::numeric_limits<double>::infinity()}}),
                  expsum::domain_error);
  CHECK_THROWS_AS(ExpSum({{std::nan(""), 0.5}}), expsum::domain_error);
  try {
    const ExpSum bad{{1, 0.5}, {1, -1}};
    FAIL("expected a domain error");
  } catch (const expsum::domain_error& error) {
    CHECK(std::string(error.what()).find("term 1") != std::string::npos);
  }
}

TEST_CASE("evaluate matches direct arithmetic") {
  CHECK(expsum::evaluate(ExpSum{{1, 2.0}}, 3.0) == 8.0);
  CHECK(expsum::evaluate(ExpSum{{8, 0.9}, {-6, 0.8}, {-4, 0.6}, {-3, 0.5}},
                         0.0) == -5.0);
  CHECK(expsum::evaluate(ExpSum{}, 17.0) == 0.0);
}

TEST_CASE("evaluate vanishes at a root of a lifted factorization") {
  // Expansion of (t - 1)(t - 2)(t - 3) under t = e^x; x = ln 2 is exact.
  const auto coeffs = oracle::expand_poly({1.0, 2.0, 3.0}, 1.0);
  REQUIRE(coeffs == std::vector<double>{-6.0, 11.0, -6.0, 1.0});
  std::vector<ExpTerm> terms;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    terms.push_back({coeffs[n], std::exp(static_cast<double>(n))});
  }
  const ExpSum sum(terms);
  CHECK(std::fabs(expsum::evaluate(sum, std::log(2.0))) <= 1e-12);
}

TEST_CASE("evaluate reports overflow with the term index") {
  const ExpSum sum{{1, 0.5}, {1e300, 10.0}};
  try {
    expsum::evaluate(sum, 2000.0);
    FAIL("expected evaluation_overflow");
  } catch (const expsum::evaluation_overflow& e) {
    CHECK(e.term_index() == 0);  // descending base order puts base 10 first
  }
}

TEST_CASE("derivative applies ln factors per order") {
  const ExpSum sum{{2, 0.5}};
  const ExpSum first = expsum::derivative(sum, 1);
  REQUIRE(first.size() == 1);
  CHECK(first.terms()[0].coefficient == 2.0 * std::log(0.5));
  CHECK(first.terms()[0].base == 0.5);

  const ExpSum any{{1, 0.9}, {-2, 0.3}};
  CHECK(expsum::derivative(any, 0) == any);

  const ExpSum e2{{1, std::exp(1.0)}, {-1, std::exp(2.0)}};
  const ExpSum second = expsum::derivative(e2, 2);
  REQUIRE(second.size() == 2);
  CHECK(second.terms()[0].coefficient ==
        doctest::Approx(-4.0).epsilon(1e-14));
  CHECK(second.terms()[1].coefficient == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("derivative drops constant terms for positive orders") {
  const ExpSum sum{{5, 1.0}, {2, 0.5}};
  CHECK(expsum::derivative(sum, 0) == sum);
  const ExpSum first = expsum::derivative(sum, 1);
  REQUIRE(first.size() == 1);
  CHECK(first.terms()[0].base == 0.5);
}

TEST_CASE("repeated differentiation composes exactly") {
  oracle::Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const ExpSum sum = gen::random_sum(rng);
    CHECK(expsum::derivative(expsum::derivative(sum, 2), 3) ==
          expsum::derivative(sum, 5));
  }
}

TEST_CASE("derivative coefficients equal the iterated ln products") {
  oracle::Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const ExpSum sum = gen::random_sum(rng);
    for (unsigned order : {1u, 2u, 5u}) {
      const ExpSum d = expsum::derivative(sum, order);
      REQUIRE(d.size() == sum.size());
      for (std::size_t j = 0; j < sum.size(); ++j) {
        double expected = sum.terms()[j].coefficient;
        for (unsigned n = 0; n < order; ++n) {
          expected *= std::log(sum.terms()[j].base);
        }
        CHECK(d.terms()[j].coefficient == expected);
      }
    }
  }
}

TEST_CASE("normalize_bases divides by the largest base plus delta") {
  const auto [divisor, normalized] =
      expsum::normalize_bases(ExpSum{{1, 2.0}, {-1, 0.5}}, 0.5);
  CHECK(divisor == 2.5);
  REQUIRE(normalized.size() == 2);
  CHECK(normalized.terms()[0] == ExpTerm{1, 0.8});
  CHECK(normalized.terms()[1] == ExpTerm{-1, 0.2});

  const auto identity = expsum::normalize_bases(ExpSum{{3, 0.9}}, 0.1);
  CHECK(identity.divisor_base == 1.0);
  CHECK(identity.normalized == ExpSum{{3, 0.9}});

  CHECK_THROWS_AS(expsum::normalize_bases(ExpSum{}, 0.5),
                  expsum::domain_error);
  CHECK_THROWS_AS(expsum::normalize_bases(ExpSum{{1, 2.0}}, 0.0),
                  expsum::domain_error);
}

TEST_CASE("normalization preserves values pointwise") {
  oracle::Rng rng(13);
  for (int i = 0; i < 30; ++i) {
    std::vector<ExpTerm> terms;
    for (double base : gen::distinct_bases(rng, 3, 0.1, 2.5)) {
      terms.push_back({rng.range(-5.0, 5.0), base});
    }
    const ExpSum sum(terms);
    if (sum.empty()) continue;
    const auto [divisor, normalized] = expsum::normalize_bases(sum);
    const auto original = gen::as_oracle_terms(sum);
    for (int s = 0; s < 100; ++s) {
      const double k = rng.range(-15.0, 15.0);
      const double direct = oracle::eval_terms(original, k);
      const double recovered =
          std::pow(divisor, k) * expsum::evaluate(normalized, k);
      CHECK(std::fabs(direct - recovered) <=
            1e-12 * std::max(std::fabs(direct), expsum::term_scale(sum, k)));
      for (const auto& term : normalized.terms()) {
        CHECK(term.base < 1.0);
      }
    }
  }
}

TEST_CASE("collapse_shifts folds shifts into coefficients") {
  using expsum::ShiftedTerm;
  CHECK(expsum::collapse_shifts(std::vector<ShiftedTerm>{{2, 0.5, 1}}) ==
        ExpSum{{4, 0.5}});
  CHECK(expsum::collapse_shifts(std::vector<ShiftedTerm>{{3, 0.7, 0}}) ==
        ExpSum{{3, 0.7}});
  CHECK(expsum::collapse_shifts(
            std::vector<ShiftedTerm>{{1, 2, 1}, {1, 2, -1}}) ==
        ExpSum{{2.5, 2}});
}

TEST_CASE("collapse_shifts preserves values pointwise") {
  oracle::Rng rng(14);
  for (int i = 0; i < 30; ++i) {
    std::vector<expsum::ShiftedTerm> shifted;
    const auto bases = gen::distinct_bases(rng, 3, 0.1, 1.6);
    for (double base : bases) {
      shifted.push_back({rng.range(-4.0, 4.0), base, rng.range(-3.0, 3.0)});
    }
    const ExpSum collapsed = expsum::collapse_shifts(shifted);
    for (int s = 0; s < 20; ++s) {
      const double k = rng.range(-8.0, 8.0);
      double direct = 0.0;
      for (const auto& term : shifted) {
        direct += term.coefficient * std::pow(term.base, k - term.shift);
      }
      const double value = expsum::evaluate(collapsed, k);
      CHECK(std::fabs(direct - value) <=
            1e-12 * std::max(std::fabs(direct),
                             expsum::term_scale(collapsed, k)));
    }
  }
}

TEST_CASE("collapse_log_sum computes the equivalent log coefficient") {
  const double e1 = std::exp(1.0);
  const double e2 = std::exp(2.0);
  const double e3 = std::exp(3.0);
  CHECK(expsum::collapse_log_sum(std::vector<double>{1, 1},
                                 std::vector<double>{e1, e2}) ==
        doctest::Approx(1.5).epsilon(1e-14));
  CHECK(expsum::collapse_log_sum(std::vector<double>{5},
                                 std::vector<double>{e1}) ==
        doctest::Approx(5.0).epsilon(1e-14));
  CHECK(expsum::collapse_log_sum(std::vector<double>{2, -3},
                                 std::vector<double>{e2, e3}) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(expsum::collapse_log_sum(std::vector<double>{1},
                                           std::vector<double>{1.0}),
                  expsum::domain_error);
  CHECK_THROWS_AS(expsum::collapse_log_sum(std::vector<double>{1, 2},
                                           std::vector<double>{e1}),
                  expsum::domain_error);
}

TEST_CASE("sum arithmetic stays canonical") {
  const ExpSum a{{1, 0.5}, {2, 0.9}};
  const ExpSum b{{-1, 0.5}, {1, 0.3}};
  CHECK(a + b == ExpSum{{2, 0.9}, {1, 0.3}});
  CHECK(a - a == ExpSum{});
  CHECK(-a == ExpSum{{-2, 0.9}, {-1, 0.5}});
  CHECK(a.scaled(2.0) == ExpSum{{4, 0.9}, {2, 0.5}});
  CHECK(a.scaled(0.0) == ExpSum{});
}

TEST_CASE("term_scale and max_term_magnitude") {
  const ExpSum sum{{3, 0.5}, {-4, 0.25}};
  CHECK(expsum::term_scale(sum, 1.0) == doctest::Approx(2.5));
  CHECK(expsum::max_term_magnitude(sum, 1.0) == doctest::Approx(1.5));
  CHECK(expsum::term_scale(ExpSum{}, 0.0) == 0.0);
}

TEST_CASE("ln_power multiplies iteratively") {
  CHECK(expsum::ln_power(0.5, 0) == 1.0);
  CHECK(expsum::ln_power(0.5, 1) == std::log(0.5));
  CHECK(expsum::ln_power(0.5, 3) ==
        std::log(0.5) * std::log(0.5) * std::log(0.5));
}
