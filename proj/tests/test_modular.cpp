// Copyright 2026 The Poissonization Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace poisson;

namespace {

Weight diagonal(const std::vector<std::vector<double>> &blocks) {
  std::vector<Matrix> b;
  for (const auto &v : blocks) {
    RealVector d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d(i) = v[i];
    b.push_back(Matrix(d.cast<cplx>().asDiagonal()));
  }
  return Weight(Element(std::move(b)));
}

}  // namespace

TEST_CASE("tracial weights are type II_1", "[modular]") {
  CHECK(classify_type(Weight::tracial(Algebra({3, 2}))).tag == TypeTag::TypeII1);
  CHECK(classify_type(diagonal({{0.5}, {2.0}})).tag == TypeTag::TypeII1);
}

TEST_CASE("a geometric lattice gives III_lambda", "[modular]") {
  for (double q : {0.5, 0.3, 0.9}) {
    const auto c = classify_type(diagonal({{1.0, q * q, q * q * q}}));
    REQUIRE(c.tag == TypeTag::TypeIIIlambda);
    CHECK(*c.lambda == Catch::Approx(q).epsilon(1e-12));
  }
  // Two blocks sharing the step.
  const auto c = classify_type(diagonal({{1.0, 0.25}, {1.0, 0.125}}));
  REQUIRE(c.tag == TypeTag::TypeIIIlambda);
  CHECK(*c.lambda == Catch::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("incommensurate ratios give III_1", "[modular]") {
  const auto c = classify_type(diagonal({{1.0, std::exp(-1.0)}, {1.0, std::exp(-std::sqrt(2.0))}}));
  CHECK(c.tag == TypeTag::TypeIII1);
}

TEST_CASE("a large-denominator relation is indeterminate", "[modular]") {
  const double a = 0.8, b = a * 1235.0 / 1234.0;
  const auto c = classify_type(diagonal({{1.0, std::exp(-a)}, {1.0, std::exp(-b)}}));
  CHECK(c.tag == TypeTag::Indeterminate);
  CHECK_FALSE(c.note.empty());
}

TEST_CASE("best rational approximations", "[modular]") {
  auto r = detail::best_rational(0.5, 1e-12, 100);
  REQUIRE(r);
  CHECK((r->p == 1 && r->q == 2));
  r = detail::best_rational(M_PI, 1e-6, 1000);
  REQUIRE(r);
  CHECK((r->p == 355 && r->q == 113));
  CHECK_FALSE(detail::best_rational(std::sqrt(2.0), 1e-9, 1000));
  r = detail::best_rational(7.0, 1e-12, 10);
  REQUIRE(r);
  CHECK((r->p == 7 && r->q == 1));
}

TEST_CASE("principal series densities", "[modular]") {
  const double theta = 2.0 * M_PI;
  const Weight w = principal_series_weight({0.3, 0.5}, theta);
  CHECK(w.mass() == Catch::Approx(1.0).epsilon(1e-14));
  const auto c = classify_type(w);
  REQUIRE(c.tag == TypeTag::TypeIIIlambda);
  const double expected = std::exp(-theta * 0.2);
  CHECK(*c.lambda == Catch::Approx(expected).epsilon(1e-9));
  CHECK(principal_series_lambda(0.3, 0.5, theta) == Catch::Approx(expected).epsilon(1e-14));
  CHECK(principal_series_lambda(-0.3, 0.5, theta) == Catch::Approx(expected).epsilon(1e-14));
  CHECK(principal_series_lambda(0.4, -0.4, theta) == 1.0);
  CHECK_THROWS_AS(principal_series_weight({0.1, 0.2}, theta, {1}), DimensionError);
  CHECK_THROWS(principal_series_weight({}, theta));
}

TEST_CASE("KMS condition holds for random weights", "[modular]") {
  Rng rng = make_rng(51);
  for (const auto &dims : {std::vector<int>{2}, std::vector<int>{3}, std::vector<int>{2, 1}}) {
    const Weight w = random_faithful_weight(rng, Algebra(dims), uniform(rng, 0.3, 2.0));
    for (int i = 0; i < 5; ++i) {
      const Element x = random_contraction(rng, w.algebra());
      const Element y = random_contraction(rng, w.algebra());
      CHECK(kms_residual(w, x, y, uniform(rng, -3.0, 3.0)) < 1e-10);
    }
  }
  const Weight w = Weight::tracial(Algebra::full(2));
  CHECK_THROWS(kms_residual(w, Element::scalar(w.algebra(), 2.0), Element::identity(w.algebra()), 0.0));
}

TEST_CASE("lifted modular flow preserves word Grams", "[modular]") {
  Rng rng = make_rng(52);
  const Weight w = random_faithful_weight(rng, Algebra({2, 1}), 0.9);
  const PoissonWord a{WordKind::LambdaEmpty,
                      {random_contraction(rng, w.algebra()), random_contraction(rng, w.algebra())}};
  const PoissonWord b{WordKind::LambdaEmpty, {random_contraction(rng, w.algebra())}};
  const double t = 0.7;
  CHECK(std::abs(word_inner(lift_modular_flow(a, w, t), lift_modular_flow(b, w, t), w) -
                 word_inner(a, b, w)) < 1e-12);
}

TEST_CASE("Arveson spectrum stays within blocks", "[modular]") {
  const auto s = arveson_spectrum(diagonal({{2.0, 1.0}, {5.0}}));
  REQUIRE(s.size() == 3);
  CHECK(s[0] == Catch::Approx(0.5));
  CHECK(s[1] == Catch::Approx(1.0));
  CHECK(s[2] == Catch::Approx(2.0));
}
