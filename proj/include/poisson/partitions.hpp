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

#ifndef POISSON_PARTITIONS_HPP
#define POISSON_PARTITIONS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "poisson/algebra.hpp"

namespace poisson {

inline constexpr int kMaxPartitionSize = 12;
inline constexpr int kMaxBellIndex = 25;
inline constexpr int kMaxPermanentSize = 12;

/**
 * A partition of {0, ..., n-1}. Blocks are sorted ascending internally and
 * ordered by their smallest element. Indices are zero-based throughout the
 * library; the block {0, 2} is {1, 3} in one-based notation.
 */
class SetPartition {
 public:
  SetPartition() = default;

  /** From a restricted growth string: rgs[i] is the block label of i. */
  static SetPartition from_rgs(const std::vector<int> &rgs) {
    SetPartition p;
    p.n_ = static_cast<int>(rgs.size());
    for (int i = 0; i < p.n_; ++i) {
      const int b = rgs[i];
      if (b < 0 || b > static_cast<int>(p.blocks_.size()))
        throw std::invalid_argument("not a restricted growth string");
      if (b == static_cast<int>(p.blocks_.size())) p.blocks_.emplace_back();
      p.blocks_[b].push_back(i);
    }
    return p;
  }

  /** From explicit blocks; canonicalizes ordering and validates coverage. */
  static SetPartition from_blocks(int n, std::vector<std::vector<int>> blocks) {
    std::vector<int> label(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw std::invalid_argument("empty block");
      for (int i : blocks[b]) {
        if (i < 0 || i >= n || label[i] != -1)
          throw std::invalid_argument("blocks must partition {0..n-1}");
        label[i] = static_cast<int>(b);
      }
    }
    std::vector<int> rgs(n);
    std::vector<int> relabel(blocks.size(), -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
      if (label[i] < 0) throw std::invalid_argument("blocks must cover {0..n-1}");
      if (relabel[label[i]] < 0) relabel[label[i]] = next++;
      rgs[i] = relabel[label[i]];
    }
    return from_rgs(rgs);
  }

  int size() const { return n_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>> &blocks() const { return blocks_; }

  std::vector<std::uint32_t> block_masks() const {
    std::vector<std::uint32_t> m;
    for (const auto &b : blocks_) {
      std::uint32_t s = 0;
      for (int i : b) s |= 1u << i;
      m.push_back(s);
    }
    return m;
  }

  bool operator==(const SetPartition &) const = default;

 private:
  int n_ = 0;
  std::vector<std::vector<int>> blocks_;
};

inline void check_partition_size(int n) {
  if (n < 0 || n > kMaxPartitionSize)
    throw CapError("partition size must lie in [0, 12]");
}

/**
 * Calls f(rgs, masks) for every partition of {0..n-1} in restricted growth
 * string order, where masks[b] is the bit set of block b. n = 0 yields the
 * empty partition once.
 */
template <class F>
void for_each_partition(int n, F &&f) {
  check_partition_size(n);
  std::vector<int> rgs(n, 0);
  std::vector<int> prefix_max(n, 0);
  std::vector<std::uint32_t> masks;
  while (true) {
    masks.assign(n == 0 ? 0 : prefix_max[n - 1] + 1, 0u);
    for (int i = 0; i < n; ++i) masks[rgs[i]] |= 1u << i;
    f(static_cast<const std::vector<int> &>(rgs),
      static_cast<const std::vector<std::uint32_t> &>(masks));
    // Advance to the next restricted growth string.
    int i = n - 1;
    while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
    if (i <= 0) return;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (int j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

/** Resumable stream of partitions in restricted growth string order. */
class PartitionStream {
 public:
  explicit PartitionStream(int n) : n_(n), rgs_(n, 0), prefix_max_(n, 0) {
    if (n < 1 || n > kMaxPartitionSize)
      throw CapError("partition size must lie in [1, 12]");
  }

  std::optional<SetPartition> next() {
    if (done_) return std::nullopt;
    SetPartition out = SetPartition::from_rgs(rgs_);
    int i = n_ - 1;
    while (i > 0 && rgs_[i] > prefix_max_[i - 1]) --i;
    if (i <= 0) {
      done_ = true;
    } else {
      ++rgs_[i];
      prefix_max_[i] = std::max(prefix_max_[i - 1], rgs_[i]);
      for (int j = i + 1; j < n_; ++j) {
        rgs_[j] = 0;
        prefix_max_[j] = prefix_max_[i];
      }
    }
    return out;
  }

  /** Restricted growth string of the next partition to be yielded. */
  const std::vector<int> &cursor() const { return rgs_; }

 private:
  int n_;
  std::vector<int> rgs_;
  std::vector<int> prefix_max_;
  bool done_ = false;
};

inline std::vector<SetPartition> enumerate_partitions(int n) {
  std::vector<SetPartition> out;
  PartitionStream s(n);
  while (auto p = s.next()) out.push_back(std::move(*p));
  return out;
}

namespace detail {

struct StirlingTable {
  std::array<std::array<std::uint64_t, kMaxBellIndex + 1>, kMaxBellIndex + 1> s{};
  StirlingTable() {
    s[0][0] = 1;
    for (int n = 1; n <= kMaxBellIndex; ++n)
      for (int k = 1; k <= n; ++k)
        s[n][k] = static_cast<std::uint64_t>(k) * s[n - 1][k] + s[n - 1][k - 1];
  }
};

inline const StirlingTable &stirling_table() {
  static const StirlingTable t;
  return t;
}

}  // namespace detail

inline std::uint64_t stirling2(int n, int k) {
  if (n < 0 || n > kMaxBellIndex || k < 0 || k > n)
    throw std::out_of_range("stirling2 needs 0 <= k <= n <= 25");
  return detail::stirling_table().s[n][k];
}

inline std::uint64_t bell(int n) {
  if (n < 0 || n > kMaxBellIndex)
    throw std::out_of_range("bell needs 0 <= n <= 25");
  std::uint64_t b = 0;
  for (int k = 0; k <= n; ++k) b += detail::stirling_table().s[n][k];
  return b;
}

/**
 * Permanent by Glynn's formula with Gray-code updates, O(2^{n-1} n).
 */
inline cplx permanent(const Matrix &g) {
  if (g.rows() != g.cols()) throw DimensionError("permanent needs a square matrix");
  const int n = static_cast<int>(g.rows());
  if (n > kMaxPermanentSize) throw CapError("permanent size cap is 12");
  if (n == 0) return 1.0;
  // row_sums(j) = sum_i delta_i g(i, j) with delta_0 = +1 fixed.
  Vector sums = g.colwise().sum().transpose();
  std::vector<int> delta(n, 1);
  cplx total = 0.0;
  int sign = 1;
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 0; k < count; ++k) {
    cplx prod = 1.0;
    for (int j = 0; j < n; ++j) prod *= sums(j);
    total += static_cast<double>(sign) * prod;
    if (k + 1 == count) break;
    // Flip the delta of row (trailing zeros of k+1) + 1.
    int bit = 0;
    while ((((k + 1) >> bit) & 1u) == 0) ++bit;
    const int row = bit + 1;
    delta[row] = -delta[row];
    sums += 2.0 * delta[row] * g.row(row).transpose();
    sign = -sign;
  }
  return total / static_cast<double>(count);
}

struct SubordinationSpec {
  SetPartition partition;
  std::uint64_t m = 0;
};

/**
 * Number of functions f: {0..n-1} -> {0..m-1} subordinated to the
 * partition: constant on blocks, distinct across blocks. For m below the
 * block count no such function exists; by convention all m^n functions are
 * counted instead.
 */
inline std::uint64_t count_subordinated(const SubordinationSpec &spec) {
  const std::uint64_t b = static_cast<std::uint64_t>(spec.partition.num_blocks());
  if (spec.m < b) {
    std::uint64_t r = 1;
    for (int i = 0; i < spec.partition.size(); ++i) r *= spec.m;
    return r;
  }
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < b; ++i) r *= spec.m - i;
  return r;
}

}  // namespace poisson

#endif  // POISSON_PARTITIONS_HPP
