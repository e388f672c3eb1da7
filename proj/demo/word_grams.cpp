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

// Gram matrices of Poisson words on M_2: closed forms against the
// truncated GNS oracle, in the lambda_0 and Fock bases.

#include <cstdio>

#include "poisson/poisson.hpp"

int main() {
  using namespace poisson;
  Rng rng = make_rng(7);
  const Algebra m2 = Algebra::full(2);
  const Weight w = random_faithful_weight(rng, m2, 0.8);
  const auto space = GnsSpace::create(w);
  std::vector<Letters> letters;
  for (int n = 0; n <= 3; ++n) {
    Letters l;
    for (int k = 0; k < n; ++k) l.push_back(random_contraction(rng, m2));
    letters.push_back(l);
  }
  for (WordKind kind : {WordKind::LambdaEmpty, WordKind::LambdaEmptyEmpty}) {
    std::vector<PoissonWord> words;
    for (const auto &l : letters) words.push_back({kind, l});
    const Matrix closed = gram_matrix(words, w);
    double dev = 0.0;
    for (std::size_t a = 0; a < words.size(); ++a)
      for (std::size_t b = 0; b < words.size(); ++b)
        dev = std::max(dev, std::abs(closed(a, b) -
                                     oracle_word_inner(words[a], words[b], space, 1e-11).value));
    std::printf("%-6s basis: max |closed - oracle| = %.3e\n", to_string(kind).c_str(), dev);
  }
  return 0;
}
