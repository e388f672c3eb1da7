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

#ifndef POISSON_TESTS_HELPERS_HPP
#define POISSON_TESTS_HELPERS_HPP

#include <vector>

#include "oracles.hpp"
#include "poisson/poisson.hpp"

namespace testing_support {

using namespace poisson;

/** Block-diagonal dense matrix of an element. */
inline Matrix dense(const Element &x) { return oracle::block_diag(x.blocks()); }

/**
 * Orthonormal basis of L2(N, omega) by modified Gram-Schmidt over
 * {1, matrix units}, so that e_0 is proportional to 1.
 */
struct L2Basis {
  Weight w;
  std::vector<Element> basis;

  explicit L2Basis(const Weight &weight) : w(weight) {
    const Algebra &a = w.algebra();
    std::vector<Element> cand{Element::identity(a)};
    for (int k = 0; k < a.num_blocks(); ++k)
      for (int p = 0; p < a.block_dim(k); ++p)
        for (int q = 0; q < a.block_dim(k); ++q) cand.push_back(Element::unit(a, k, p, q));
    for (auto v : cand) {
      for (const auto &e : basis) v -= e * w(e.adjoint() * v);
      const double n = std::sqrt(std::max(0.0, w(v.adjoint() * v).real()));
      if (n > 1e-10) basis.push_back(v * (1.0 / n));
    }
  }

  int dim() const { return static_cast<int>(basis.size()); }

  /** <e_a, x e_b>. */
  Matrix left(const Element &x) const {
    Matrix l(dim(), dim());
    for (int a = 0; a < dim(); ++a)
      for (int b = 0; b < dim(); ++b) l(a, b) = w(basis[a].adjoint() * x * basis[b]);
    return l;
  }
};

}  // namespace testing_support

#endif  // POISSON_TESTS_HELPERS_HPP
