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
using testing_support::dense;

TEST_CASE("algebra dimensions and element coordinates", "[algebra]") {
  const Algebra a({2, 1, 3});
  CHECK(a.dimension() == 4 + 1 + 9);
  CHECK(a.hilbert_dimension() == 6);
  CHECK(a.block_offset(2) == 5);
  Rng rng = make_rng(1);
  const Element x = random_element(rng, a);
  CHECK(Element::from_vec(a, x.vec()).max_abs_diff(x) == 0.0);
  // Matrix unit (k, p, q) sits at offset_k + p d_k + q.
  const Element u = Element::unit(a, 2, 1, 2);
  CHECK(u.vec()(5 + 1 * 3 + 2) == cplx(1.0));
  CHECK(u.vec().cwiseAbs().sum() == 1.0);
  CHECK_THROWS_AS(Algebra(std::vector<int>{}), DimensionError);
  CHECK_THROWS_AS(Element::zero(a).check_same(Element::zero(Algebra::full(2))), DimensionError);
}

TEST_CASE("operator norm is the largest singular value", "[algebra]") {
  Rng rng = make_rng(2);
  const Algebra a({2, 3});
  for (int i = 0; i < 10; ++i) {
    const Element x = random_element(rng, a);
    Eigen::JacobiSVD<Matrix> svd(dense(x));
    CHECK(x.norm() == Catch::Approx(svd.singularValues()(0)).epsilon(1e-12));
    CHECK((x * x.adjoint()).is_hermitian());
  }
}

TEST_CASE("weights are faithful and reject bad densities", "[algebra]") {
  Rng rng = make_rng(3);
  for (const auto &dims : {std::vector<int>{2}, std::vector<int>{3}, std::vector<int>{2, 1}}) {
    const Weight w = random_faithful_weight(rng, Algebra(dims), 0.7);
    CHECK(w.mass() == Catch::Approx(0.7).epsilon(1e-12));
    for (int i = 0; i < 100; ++i) {
      const Element x = random_element(rng, w.algebra());
      CHECK(weight_eval(w, x.adjoint() * x).real() > 0.0);
    }
  }
  Matrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, -0.5;
  CHECK_THROWS(Weight(Element({bad})));
  Matrix nonherm(2, 2);
  nonherm << 1.0, 0.3, 0.0, 1.0;
  CHECK_THROWS(Weight(Element({nonherm})));
}

TEST_CASE("modular flow against matrix logarithm and exponential", "[algebra]") {
  Rng rng = make_rng(4);
  const Algebra a = Algebra::full(3);
  const Weight w = random_faithful_weight(rng, a, 1.3);
  const Matrix d = dense(w.density());
  for (double t : {0.1, 1.0, 7.0}) {
    const Element x = random_hermitian_contraction(rng, a);
    const Matrix ut = oracle::density_it(d, t);
    const Matrix ref = ut * dense(x) * ut.adjoint();
    const Element fx = modular_flow(w, x, t);
    CHECK((dense(fx) - ref).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(w(fx) - w(x)) < 1e-10);
    CHECK(std::abs(fx.norm() - x.norm()) < 1e-10);
  }
  // sigma_{t+i}(x) = d^{it} d^{-1} x d d^{-it}.
  const Element x = random_contraction(rng, a);
  const double t = 0.4;
  const Matrix ut = oracle::density_it(d, t);
  const Matrix ref = ut * d.inverse() * dense(x) * d * ut.adjoint();
  CHECK((dense(modular_flow_complex(w, x, cplx(t, 1.0))) - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("Connes cocycle is unitary and satisfies the cocycle identity", "[algebra]") {
  Rng rng = make_rng(5);
  const Algebra a({2, 2});
  for (int i = 0; i < 5; ++i) {
    const Weight rho = random_faithful_weight(rng, a, 0.8);
    const Weight psi = random_faithful_weight(rng, a, 1.1);
    const double t = uniform(rng, -3, 3), s = uniform(rng, -3, 3);
    const Element u = connes_cocycle(rho, psi, t);
    CHECK((u * u.adjoint()).max_abs_diff(Element::identity(a)) < 1e-12);
    const Element lhs = connes_cocycle(rho, psi, t + s);
    const Element rhs = u * modular_flow(psi, connes_cocycle(rho, psi, s), t);
    CHECK(lhs.max_abs_diff(rhs) < 1e-10);
    // The cocycle intertwines the two flows.
    const Element x = random_element(rng, a);
    CHECK(modular_flow(rho, x, t).max_abs_diff(u * modular_flow(psi, x, t) * u.adjoint()) < 1e-10);
  }
  CHECK_THROWS_AS(connes_cocycle(Weight::tracial(Algebra::full(2)), Weight::tracial(Algebra::full(3)), 1.0),
                  DimensionError);
}

TEST_CASE("norm bounds dominate the weight", "[algebra]") {
  Rng rng = make_rng(6);
  const Algebra a({3, 1});
  const Weight w = random_faithful_weight(rng, a, 0.9);
  for (int i = 0; i < 50; ++i) {
    const Element x = random_element(rng, a);
    CHECK(weight_norm_bound(w, x) >= std::abs(w(x)) - 1e-12);
    CHECK(triple_norm(w, x, NormVariant::State) >= x.norm() - 1e-12);
    CHECK(triple_norm(w, x, NormVariant::Weight) >= x.norm() - 1e-12);
  }
  // For positive x, |x*| = |x| = x and the bound is omega(x).
  const Element g = random_element(rng, a);
  const Element p = g.adjoint() * g;
  CHECK(weight_norm_bound(w, p) == Catch::Approx(w(p).real()).epsilon(1e-10));
}

TEST_CASE("modular spectrum collects within-block ratios", "[algebra]") {
  Matrix d2(2, 2);
  d2 << 0.4, 0.0, 0.0, 0.1;
  Matrix d1(1, 1);
  d1 << 0.5;
  const Weight w(Element({d2, d1}));
  const auto spec = w.modular().delta_spectrum();
  REQUIRE(spec.size() == 3);
  CHECK(spec[0] == Catch::Approx(0.25));
  CHECK(spec[1] == Catch::Approx(1.0));
  CHECK(spec[2] == Catch::Approx(4.0));
}
