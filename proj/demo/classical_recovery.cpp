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

// Scalar seed algebra: the Poisson vacuum spreads over levels with the
// classical Poisson distribution, and lambda(1) counts the level.

#include <cstdio>

#include "poisson/poisson.hpp"

int main() {
  using namespace poisson;
  const double intensity = 1.7;
  const auto space = GnsSpace::create(Weight::tracial(Algebra::scalar(), intensity));
  const auto xi = vacuum(space, 40);
  std::printf("%3s %22s %22s\n", "k", "pmf", "|P_k xi|^2");
  for (int k = 0; k <= 10; ++k)
    std::printf("%3d %22.17g %22.17g\n", k, classical_pmf(intensity, k),
                xi.component(k).squaredNorm());
  const auto n_xi = apply_lambda(Element::identity(Algebra::scalar()), xi);
  std::printf("mean of the number operator: %.15g\n", xi.inner(n_xi).real());
  return 0;
}
