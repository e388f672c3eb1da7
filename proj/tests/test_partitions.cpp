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

#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace poisson;

namespace {

using Canon = std::set<std::set<int>>;

Canon canon(const std::vector<std::vector<int>> &blocks) {
  Canon c;
  for (const auto &b : blocks) c.insert(std::set<int>(b.begin(), b.end()));
  return c;
}

}  // namespace

TEST_CASE("enumeration matches recursive insertion", "[partitions]") {
  for (int n = 1; n <= 8; ++n) {
    std::set<Canon> mine, ref;
    for (const auto &p : enumerate_partitions(n)) mine.insert(canon(p.blocks()));
    for (const auto &p : oracle::partitions(n)) ref.insert(canon(p));
    CHECK(mine.size() == enumerate_partitions(n).size());  // no duplicates
    CHECK(mine == ref);
  }
}

TEST_CASE("streamed partitions follow restricted growth order", "[partitions]") {
  PartitionStream s(4);
  std::uint64_t count = 0;
  std::vector<int> prev;
  while (true) {
    const std::vector<int> rgs = s.cursor();
    const auto p = s.next();
    if (!p) break;
    ++count;
    CHECK(rgs[0] == 0);
    if (!prev.empty()) CHECK(std::lexicographical_compare(prev.begin(), prev.end(), rgs.begin(), rgs.end()));
    prev = rgs;
    CHECK(SetPartition::from_rgs(rgs).num_blocks() == p->num_blocks());
  }
  CHECK(count == 15);
  CHECK(!s.next());
}

TEST_CASE("masks mirror blocks", "[partitions]") {
  const auto p = SetPartition::from_blocks(5, {{0, 3}, {1}, {2, 4}});
  const auto m = p.block_masks();
  REQUIRE(m.size() == 3);
  CHECK(m[0] == 0b01001u);
  CHECK(m[1] == 0b00010u);
  CHECK(m[2] == 0b10100u);
  CHECK_THROWS(SetPartition::from_blocks(3, {{0, 1}, {1, 2}}));
  CHECK_THROWS(SetPartition::from_blocks(3, {{0, 1}}));
}

TEST_CASE("Bell and Stirling numbers", "[partitions]") {
  const auto bells = oracle::bell_triangle(kMaxBellIndex);
  for (int n = 0; n <= kMaxBellIndex; ++n) {
    CHECK(bell(n) == bells[n]);
    std::uint64_t row = 0;
    for (int k = 0; k <= n; ++k) row += stirling2(n, k);
    CHECK(row == bells[n]);
  }
  CHECK(bell(25) == 4638590332229999353ULL);
  CHECK(stirling2(5, 2) == 15);
  CHECK(stirling2(0, 0) == 1);
  CHECK(stirling2(3, 0) == 0);
  CHECK_THROWS_AS(bell(26), std::out_of_range);
  CHECK_THROWS_AS(enumerate_partitions(kMaxPartitionSize + 1), CapError);
}

TEST_CASE("permanent against the permutation sum", "[partitions]") {
  Rng rng = make_rng(11);
  for (int n = 0; n <= 7; ++n) {
    const Matrix a = gaussian_matrix(rng, n);
    const cplx ref = oracle::permanent(a);
    CHECK(std::abs(permanent(a) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
  }
  CHECK(permanent(Matrix::Ones(5, 5)).real() == Catch::Approx(120.0));
  CHECK(permanent(Matrix::Identity(6, 6)).real() == Catch::Approx(1.0));
  CHECK_THROWS_AS(permanent(Matrix::Ones(2, 3)), DimensionError);
}

TEST_CASE("subordinated functions count injective block colorings", "[partitions]") {
  for (const auto &p : enumerate_partitions(5)) {
    const int b = p.num_blocks();
    for (int m = b; m <= 6; ++m)
      CHECK(count_subordinated({p, static_cast<std::uint64_t>(m)}) ==
            oracle::injective_colorings(b, m));
  }
  // Degenerate convention below the block count.
  const auto discrete = SetPartition::from_blocks(3, {{0}, {1}, {2}});
  CHECK(count_subordinated({discrete, 2}) == 8);
}
