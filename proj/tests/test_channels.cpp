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

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace poisson;

TEST_CASE("map constructors carry their flags", "[channels]") {
  Rng rng = make_rng(61);
  const Algebra a({2, 1});
  const LinearMap id = LinearMap::identity(a);
  CHECK(id.flags().homomorphism);
  CHECK(homomorphism_residual(id) == 0.0);
  CHECK(choi_min_eigenvalue(id) > -1e-14);

  const Element u = Element({random_unitary(rng, 2), random_unitary(rng, 1)});
  const LinearMap c = LinearMap::unitary_conjugation(u);
  CHECK(homomorphism_residual(c) < 1e-14);
  CHECK(unital_residual(c) < 1e-14);

  const LinearMap e = LinearMap::diagonal_expectation(a);
  CHECK_FALSE(e.flags().homomorphism);
  CHECK(homomorphism_residual(e) > 0.5);
  CHECK(choi_min_eigenvalue(e) > -1e-14);

  const LinearMap emb = LinearMap::block_embedding(Algebra({1, 2}), a, {1, 0});
  CHECK(emb.flags().unital);
  CHECK(homomorphism_residual(emb) == 0.0);
  CHECK_THROWS_AS(LinearMap::block_embedding(Algebra({2}), a, {1}), DimensionError);
}

TEST_CASE("the transpose is positive but not completely positive", "[channels]") {
  const Algebra a = Algebra::full(2);
  const LinearMap t = LinearMap::from_function(
      a, a, [](const Element &x) { return Element({Matrix(x.block(0).transpose())}); });
  CHECK(choi_min_eigenvalue(t) == Catch::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("the dual satisfies the pairing identity", "[channels]") {
  Rng rng = make_rng(62);
  const Weight w = random_diagonal_weight(rng, Algebra({2, 2}), 1.3);
  Vector p0(2), p1(2);
  p0 << std::exp(cplx(0, 0.4)), std::exp(cplx(0, -1.1));
  p1 << std::exp(cplx(0, 0.2)), 1.0;
  // Diagonal unitaries commute with the diagonal density.
  const Element u = Element({Matrix(p0.asDiagonal()), Matrix(p1.asDiagonal())});
  for (const LinearMap &t : {LinearMap::diagonal_expectation(w.algebra()),
                             LinearMap::unitary_conjugation(u)}) {
    const LinearMap td = t.with_dual(w, w);
    for (int i = 0; i < 5; ++i) {
      const Element x = random_element(rng, w.algebra()), y = random_element(rng, w.algebra());
      CHECK(std::abs(w(t(x) * y) - w(x * td.apply_dual(y))) < 1e-12);
    }
  }
  const Weight g = random_faithful_weight(rng, Algebra::full(3), 1.0);
  CHECK_THROWS(LinearMap::diagonal_expectation(g.algebra()).with_dual(g, g));
  CHECK_THROWS(LinearMap::identity(g.algebra()).apply_dual(Element::identity(g.algebra())));
}

TEST_CASE("corner projection matches least squares", "[channels]") {
  Rng rng = make_rng(63);
  for (const auto &dims : {std::vector<int>{2}, std::vector<int>{2, 1}}) {
    const Weight w = random_faithful_weight(rng, Algebra(dims), 0.8);
    const CornerPair cp = random_corner_pair(rng, w);
    for (int n = 0; n <= 2; ++n) {
      Letters xs;
      for (int i = 0; i < n; ++i) xs.push_back(random_contraction(rng, w.algebra()));
      const auto r = corner_projection_check(cp.e, xs, w);
      CHECK(r.residual < 1e-8);
    }
  }
}

TEST_CASE("corner projection rejects bad input", "[channels]") {
  Rng rng = make_rng(64);
  const Weight w = random_faithful_weight(rng, Algebra::full(2), 1.0);
  const CornerPair cp = random_corner_pair(rng, w);
  CHECK_THROWS(corner_project(cp.e, {WordKind::Lambda, {}}, w));
  const Element off = Element({Matrix::Constant(2, 2, cplx(0.5, 0.0))});
  CHECK_THROWS(corner_project(off, {WordKind::LambdaEmpty, {}}, w));
  CHECK_THROWS(corner_project(cp.e * 2.0, {WordKind::LambdaEmpty, {}}, w));
}

TEST_CASE("orthogonal corners are independent", "[channels]") {
  Rng rng = make_rng(65);
  for (const auto &dims : {std::vector<int>{2}, std::vector<int>{2, 1}, std::vector<int>{3}}) {
    const Weight w = random_faithful_weight(rng, Algebra(dims), 0.6);
    const CornerPair cp = random_corner_pair(rng, w);
    const Element x = random_corner_letter(rng, cp.e), y = random_corner_letter(rng, cp.f);
    const auto r = independence_check(cp.e, cp.f, x, y, w, {4, 3, 7, 1e-10, 1e-12});
    CHECK(r.commutator_residual < 1e-10);
    CHECK(r.factorization_residual < 1e-12);
    CHECK(r.moment_residual < 1e-10);
    CHECK(r.pass);
  }
}

TEST_CASE("UCP maps lift to contractions", "[channels]") {
  Rng rng = make_rng(66);
  const Weight w = random_diagonal_weight(rng, Algebra({2, 1}), 0.9);
  const LinearMap t = LinearMap::mixture(0.4, LinearMap::diagonal_expectation(w.algebra()),
                                         LinearMap::identity(w.algebra()));
  std::vector<Letters> words;
  for (int n = 0; n <= 2; ++n) {
    Letters l;
    for (int i = 0; i < n; ++i) l.push_back(random_contraction(rng, w.algebra()));
    words.push_back(l);
  }
  const auto r = ucp_lift_check(t, w, w, words);
  CHECK(r.pass);
  CHECK(r.contraction_defect > -1e-9);
  const Algebra a2 = Algebra::full(2);
  const Weight w2 = Weight::tracial(a2);
  const LinearMap tr = LinearMap::from_function(
      a2, a2, [](const Element &x) { return Element({Matrix(x.block(0).transpose())}); });
  CHECK_THROWS(ucp_lift_check(tr, w2, w2, words));
}
