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
using testing_support::L2Basis;

namespace {

/** The same level-capped space on explicit tensor powers. */
struct Reference {
  L2Basis basis;
  oracle::TensorFock fock;

  Reference(const Weight &w, int level) : basis(w), fock{basis.dim(), level} {}

  oracle::TensorFock::State vacuum() const { return fock.vacuum(basis.w.mass()); }
  oracle::TensorFock::State lambda(const Element &x, const oracle::TensorFock::State &v) const {
    return fock.number_type(basis.left(x), v);
  }
  oracle::TensorFock::State gamma(const Element &a, const oracle::TensorFock::State &v) const {
    return fock.second_quantization(basis.left(a), v);
  }
};

}  // namespace

TEST_CASE("occupation tables have symmetric-power sizes", "[gns]") {
  const BinomialTable binom(40);
  CHECK(binom(10, 3) == 120);
  for (int r : {1, 3, 8})
    for (int m : {0, 1, 4, 7}) {
      const OccupationTable t(r, m, binom);
      CHECK(t.size() == binom(m + r, r));  // at most m excitations over r modes
      for (std::size_t i = 1; i < t.size(); ++i) CHECK(t.total(i - 1) <= t.total(i));
    }
}

TEST_CASE("vacuum level weights are Poisson", "[gns]") {
  const auto space = GnsSpace::create(Weight::tracial(Algebra::full(2), 0.35));
  const auto xi = vacuum(space, 30);
  CHECK(xi.norm() == Catch::Approx(1.0).epsilon(1e-14));
  for (int k = 0; k <= 10; ++k)
    CHECK(xi.component(k).squaredNorm() == Catch::Approx(classical_pmf(0.35, k)).epsilon(1e-13));
}

TEST_CASE("primitives agree with explicit tensor powers", "[gns]") {
  Rng rng = make_rng(31);
  const int level = 5;  // the dense Kronecker oracle grows as dim^(2 level)
  for (const auto &dims : {std::vector<int>{2}, std::vector<int>{1, 1, 1}}) {
    const Weight w = random_faithful_weight(rng, Algebra(dims), 0.3);
    const Algebra &a = w.algebra();
    const auto space = GnsSpace::create(w);
    const Reference ref(w, level);
    const Element x = random_contraction(rng, a), y = random_contraction(rng, a),
                  z = random_contraction(rng, a);
    std::vector<Matrix> ub;
    for (int d : a.dims()) ub.push_back(random_unitary(rng, d));
    const Element u(ub);
    const Element g = random_element(rng, a);

    const auto xi = vacuum(space, level);
    const auto rxi = ref.vacuum();
    // <xi, lambda(x) lambda(y) lambda(z) xi>
    const cplx mine = xi.inner(apply_lambda(x, apply_lambda(y, apply_lambda(z, xi))));
    const cplx theirs = oracle::TensorFock::inner(rxi, ref.lambda(x, ref.lambda(y, ref.lambda(z, rxi))));
    CHECK(std::abs(mine - theirs) < 1e-13);
    // <lambda(x) xi, Gamma(u) lambda(y) xi> for unitary and general Gamma.
    for (const Element &op : {u, g}) {
      const cplx m2 = apply_lambda(x, xi).inner(apply_gamma(op, apply_lambda(y, xi)));
      const cplx t2 = oracle::TensorFock::inner(ref.lambda(x, rxi), ref.gamma(op, ref.lambda(y, rxi)));
      CHECK(std::abs(m2 - t2) < 1e-12);
    }
  }
}

TEST_CASE("oracle inner product reproduces low moments", "[gns]") {
  Rng rng = make_rng(32);
  const Weight w = random_faithful_weight(rng, Algebra::full(2), 0.8);
  const auto space = GnsSpace::create(w);
  const Element x = random_contraction(rng, w.algebra()), y = random_contraction(rng, w.algebra());
  const auto v = oracle_inner(
      [&](int level) {
        const auto xi = vacuum(space, level);
        return std::make_pair(xi, apply_lambda(x, apply_lambda(y, xi)));
      },
      2, 0.8, 1.0, 1e-10);
  CHECK(std::abs(v.value - (w(x * y) + w(x) * w(y))) < 1e-10);
  CHECK(v.tail_bound < 1e-11);
  CHECK(v.change < 1e-11);
}

TEST_CASE("Fock tensors have permanent norms", "[gns]") {
  Rng rng = make_rng(33);
  const auto space = GnsSpace::create(random_faithful_weight(rng, Algebra({2, 1}), 1.0));
  for (int n = 1; n <= 4; ++n) {
    std::vector<Vector> vs;
    for (int i = 0; i < n; ++i) vs.push_back(Vector::Random(space->modes()));
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = vs[i].dot(vs[j]);
    const Vector t = symmetric_tensor(*space, vs);
    CHECK(std::abs(t.squaredNorm() - oracle::permanent(g).real()) < 1e-10 * t.squaredNorm());
  }
}

TEST_CASE("least-squares projection and truncation", "[gns]") {
  Rng rng = make_rng(34);
  const Weight w = random_faithful_weight(rng, Algebra::full(2), 0.5);
  const auto space = GnsSpace::create(w);
  const auto xi = vacuum(space, 10);
  const Element x = random_contraction(rng, w.algebra());
  const auto lx = apply_lambda(x, xi);
  const auto p = least_squares_projection(lx, {xi, lx});
  CHECK((p - lx).norm() < 1e-12);
  const auto q = least_squares_projection(lx, {xi});
  // Residual is orthogonal to xi.
  CHECK(std::abs(xi.inner(lx - q)) < 1e-12);
  CHECK(lx.truncated(4).level() == 4);
  CHECK_THROWS_AS(tail_rule_level(8, 50.0, 1.0, 1e-12, 10), CapError);
  CHECK(tail_rule_level(4, 0.5, 1.0, 1e-8) < tail_rule_level(4, 0.5, 1.0, 1e-12));
}
