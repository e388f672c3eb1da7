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
using testing_support::dense;

TEST_CASE("Lindblad entropy agrees with the matrix-log formula", "[entropy]") {
  Rng rng = make_rng(71);
  for (const auto &dims : {std::vector<int>{2}, std::vector<int>{3}, std::vector<int>{2, 1}}) {
    const auto p = random_dominated_pair(rng, Algebra(dims), uniform(rng, 0.3, 1.5));
    const double expected = oracle::umegaki(dense(p.rho.density()), dense(p.psi.density())) +
                            p.psi.mass() - p.rho.mass();
    CHECK(lindblad_entropy(p.rho, p.psi) == Catch::Approx(expected).margin(1e-12));
    CHECK(lindblad_entropy(p.psi, p.psi) == Catch::Approx(0.0).margin(1e-13));
  }
}

TEST_CASE("truncated Poisson entropy against explicit tensor powers", "[entropy]") {
  Rng rng = make_rng(72);
  for (const auto &dims : {std::vector<int>{2}, std::vector<int>{1, 1}}) {
    const auto p = random_dominated_pair(rng, Algebra(dims), 0.9);
    const Matrix r = dense(p.rho.density()), s = dense(p.psi.density());
    for (int level = 0; level <= 4; ++level)
      CHECK(poisson_relative_entropy(p.rho, p.psi, level) ==
            Catch::Approx(oracle::truncated_poisson_entropy(r, s, level)).margin(1e-11));
  }
}

TEST_CASE("truncated entropy converges to the Lindblad value", "[entropy]") {
  Rng rng = make_rng(73);
  const auto p = random_dominated_pair(rng, Algebra({2, 1}), 1.0);
  const auto rep = entropy_report(p.rho, p.psi, {5, 10, 20, 30});
  REQUIRE(rep.levels.size() == 4);
  CHECK(rep.levels.back().gap < 1e-10);
  CHECK(rep.levels[0].gap > rep.levels.back().gap);
}

TEST_CASE("scalar algebra gives the Poisson KL divergence", "[entropy]") {
  const double a = 0.4, b = 0.9;
  const Weight rho(Element({Matrix::Constant(1, 1, a)}));
  const Weight psi(Element({Matrix::Constant(1, 1, b)}));
  const double kl = a * std::log(a / b) + b - a;
  CHECK(lindblad_entropy(rho, psi) == Catch::Approx(kl).epsilon(1e-14));
  CHECK(poisson_relative_entropy(rho, psi, 30) == Catch::Approx(kl).margin(1e-12));
}

TEST_CASE("entropy requires domination", "[entropy]") {
  Rng rng = make_rng(74);
  const auto p = random_dominated_pair(rng, Algebra::full(2), 1.0);
  CHECK(check_domination(p.rho, p.psi));
  CHECK_FALSE(check_domination(p.psi, p.rho));
  CHECK_THROWS(poisson_relative_entropy(p.psi, p.rho, 5));
  CHECK_THROWS_AS(poisson_relative_entropy(p.rho, p.psi, kMaxEntropyLevel + 1), CapError);
  CHECK_THROWS(entropy_report(p.psi, p.rho, {5}));
}

TEST_CASE("cocycle lift matches the closed form", "[entropy]") {
  Rng rng = make_rng(75);
  for (const auto &dims : {std::vector<int>{2}, std::vector<int>{1, 1}}) {
    const auto p = random_dominated_pair(rng, Algebra(dims), 0.8);
    for (int n = 0; n <= 2; ++n) {
      Letters xs;
      for (int i = 0; i < n; ++i) xs.push_back(random_contraction(rng, p.psi.algebra()));
      CHECK(cocycle_lift_check(p.rho, p.psi, uniform(rng, -2.0, 2.0), xs) < 1e-9);
    }
  }
}
