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

#ifndef POISSON_MOMENTS_HPP
#define POISSON_MOMENTS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "poisson/algebra.hpp"
#include "poisson/partitions.hpp"

namespace poisson {

inline constexpr int kMaxMomentLength = 8;

/** Argument tuple of phi(lambda(x_1) ... lambda(x_n)). */
struct MomentQuery {
  Weight weight;
  std::vector<Element> factors;

  void validate() const {
    if (static_cast<int>(factors.size()) > kMaxMomentLength)
      throw CapError("moment words are capped at 8 letters");
    for (const auto &x : factors) weight.density().check_same(x);
  }
};

namespace detail {

/**
 * omega of the ordered product over every subset of the letters, indexed by
 * bit mask. The product for a mask extends the product of the mask without
 * its highest bit, so ascending order is preserved.
 */
inline std::vector<cplx> subset_weights(const Weight &w,
                                        const std::vector<Element> &xs) {
  const int n = static_cast<int>(xs.size());
  const std::uint32_t count = 1u << n;
  std::vector<Element> prod(count);
  std::vector<cplx> out(count);
  prod[0] = Element::identity(w.algebra());
  out[0] = w.mass();
  for (std::uint32_t m = 1; m < count; ++m) {
    int hi = 31 - __builtin_clz(m);
    const std::uint32_t rest = m & ~(1u << hi);
    prod[m] = rest == 0 ? xs[hi] : prod[rest] * xs[hi];
    out[m] = w(prod[m]);
  }
  return out;
}

}  // namespace detail

/** Sum over partitions of the product over blocks of omega(ordered block). */
inline cplx poisson_moment(const MomentQuery &q) {
  q.validate();
  const int n = static_cast<int>(q.factors.size());
  const auto sw = detail::subset_weights(q.weight, q.factors);
  cplx total = 0.0;
  for_each_partition(n, [&](const std::vector<int> &,
                            const std::vector<std::uint32_t> &masks) {
    cplx p = 1.0;
    for (auto m : masks) p *= sw[m];
    total += p;
  });
  return total;
}

/** exp(omega(e^{ix} - 1)) for Hermitian x. */
inline cplx characteristic(const Weight &w, const Element &x) {
  w.density().check_same(x);
  if (!x.is_hermitian(1e-12 * std::max(1.0, x.norm())))
    throw std::invalid_argument("characteristic needs a Hermitian element");
  return std::exp(w(exp_i(x)) - w.mass());
}

/**
 * Finite-n Bernoulli approximant: partitions with at most n_copies blocks,
 * weighted by the falling factorial n(n-1)...(n-|s|+1) / n^{|s|}.
 */
inline cplx bernoulli_moment(const MomentQuery &q, std::uint64_t n_copies) {
  if (n_copies == 0) throw std::invalid_argument("n_copies must be positive");
  q.validate();
  const int n = static_cast<int>(q.factors.size());
  const auto sw = detail::subset_weights(q.weight, q.factors);
  std::vector<double> coeff(n + 1, 0.0);
  coeff[0] = 1.0;
  const double nc = static_cast<double>(n_copies);
  for (int k = 1; k <= n; ++k)
    coeff[k] = static_cast<std::uint64_t>(k) > n_copies
                   ? 0.0
                   : coeff[k - 1] * (nc - (k - 1)) / nc;
  cplx total = 0.0;
  for_each_partition(n, [&](const std::vector<int> &,
                            const std::vector<std::uint32_t> &masks) {
    const double c = coeff[masks.size()];
    if (c == 0.0) return;
    cplx p = 1.0;
    for (auto m : masks) p *= sw[m];
    total += c * p;
  });
  return total;
}

struct GrowthReport {
  double moment_abs = 0.0;
  /** bell(n) times the product of triple norms (state variant). */
  double bound = 0.0;
  /** Same with the weight-norm variant of the triple norm. */
  double bound_weight_variant = 0.0;
  bool pass = false;
};

inline GrowthReport growth_bound_check(const MomentQuery &q) {
  GrowthReport r;
  r.moment_abs = std::abs(poisson_moment(q));
  const double b = static_cast<double>(bell(static_cast<int>(q.factors.size())));
  double p1 = 1.0, p2 = 1.0;
  for (const auto &x : q.factors) {
    p1 *= triple_norm(q.weight, x, NormVariant::State);
    p2 *= triple_norm(q.weight, x, NormVariant::Weight);
  }
  r.bound = b * p1;
  r.bound_weight_variant = b * p2;
  // A relative slack of a few ulps absorbs rounding when the bound is tight.
  const double slack = 1e-12 * std::max(1.0, r.bound);
  r.pass = r.moment_abs <= r.bound + slack &&
           r.moment_abs <= r.bound_weight_variant + slack;
  return r;
}

/** e^{-lambda} lambda^k / k!, evaluated in log space. */
inline double classical_pmf(double lambda0, int k) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("intensity must be positive");
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  return std::exp(-lambda0 + k * std::log(lambda0) - std::lgamma(k + 1.0));
}

}  // namespace poisson

#endif  // POISSON_MOMENTS_HPP
