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

#ifndef POISSON_RANDOM_HPP
#define POISSON_RANDOM_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "poisson/algebra.hpp"

namespace poisson {

using Rng = std::mt19937_64;

/** Independent stream for check number `index` of a run seeded with `seed`. */
inline Rng make_rng(std::uint64_t seed, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline double uniform(Rng &rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Matrix gaussian_matrix(Rng &rng, int n) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

/** Haar unitary: QR of a Ginibre matrix with the phases of R removed. */
inline Matrix random_unitary(Rng &rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, n));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

inline Element random_element(Rng &rng, const Algebra &a) {
  std::vector<Matrix> b;
  for (int d : a.dims()) b.push_back(gaussian_matrix(rng, d));
  return Element(std::move(b));
}

/** Hermitian element with operator norm uniform in [0.2, 1]. */
inline Element random_hermitian_contraction(Rng &rng, const Algebra &a) {
  const Element g = random_element(rng, a);
  Element h = g + g.adjoint();
  const double n = h.norm();
  return n > 0.0 ? h * (uniform(rng, 0.2, 1.0) / n) : h;
}

/** Element with operator norm uniform in [0.2, 1]. */
inline Element random_contraction(Rng &rng, const Algebra &a) {
  Element g = random_element(rng, a);
  const double n = g.norm();
  return n > 0.0 ? g * (uniform(rng, 0.2, 1.0) / n) : g;
}

/**
 * Faithful weight of the given mass: density eigenvalues log-uniform in
 * [1, 10] (condition number <= 10), rotated by Haar unitaries.
 */
inline Weight random_faithful_weight(Rng &rng, const Algebra &a, double mass = 1.0) {
  std::vector<Matrix> b;
  for (int d : a.dims()) {
    RealVector ev(d);
    for (int i = 0; i < d; ++i) ev(i) = std::exp(uniform(rng, 0.0, std::log(10.0)));
    const Matrix u = random_unitary(rng, d);
    b.push_back(u * ev.cast<cplx>().asDiagonal() * u.adjoint());
  }
  Element dens(std::move(b));
  dens *= mass / dens.trace().real();
  return Weight(dens);
}

/** Faithful weight with diagonal density in every block. */
inline Weight random_diagonal_weight(Rng &rng, const Algebra &a, double mass = 1.0) {
  std::vector<Matrix> b;
  for (int d : a.dims()) {
    RealVector ev(d);
    for (int i = 0; i < d; ++i) ev(i) = std::exp(uniform(rng, 0.0, std::log(10.0)));
    b.push_back(ev.cast<cplx>().asDiagonal());
  }
  Element dens(std::move(b));
  dens *= mass / dens.trace().real();
  return Weight(dens);
}

struct CornerPair {
  Weight weight;
  Element e;
  Element f;
};

/**
 * Orthogonal projections e, f built from disjoint sets of density
 * eigenvectors, so both lie in the centralizer. With cover = true, e + f = 1.
 */
inline CornerPair random_corner_pair(Rng &rng, const Weight &w, bool cover = false) {
  const Algebra &a = w.algebra();
  if (a.hilbert_dimension() < 2) throw DimensionError("corner pairs need two eigenvectors");
  const auto &spec = w.modular().blocks();
  std::vector<std::pair<int, int>> slots;
  for (int k = 0; k < a.num_blocks(); ++k)
    for (int i = 0; i < a.block_dim(k); ++i) slots.emplace_back(k, i);
  std::vector<int> label(slots.size());
  // Labels: 0 -> e, 1 -> f, 2 -> neither. Both e and f must be nonzero.
  do {
    for (auto &l : label)
      l = static_cast<int>(std::uniform_int_distribution<int>(0, cover ? 1 : 2)(rng));
  } while (std::count(label.begin(), label.end(), 0) == 0 ||
           std::count(label.begin(), label.end(), 1) == 0);
  std::vector<Matrix> eb, fb;
  for (int d : a.dims()) {
    eb.push_back(Matrix::Zero(d, d));
    fb.push_back(Matrix::Zero(d, d));
  }
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const auto [k, i] = slots[s];
    const Vector v = spec[k].vectors.col(i);
    if (label[s] == 0) eb[k] += v * v.adjoint();
    if (label[s] == 1) fb[k] += v * v.adjoint();
  }
  return {w, Element(std::move(eb)), Element(std::move(fb))};
}

/** Hermitian contraction supported in the corner p N p. */
inline Element random_corner_letter(Rng &rng, const Element &p) {
  Element h = p * random_hermitian_contraction(rng, p.algebra()) * p;
  const double n = h.norm();
  return n > 0.0 ? h * (uniform(rng, 0.2, 1.0) / n) : h;
}

struct DominatedPair {
  Weight rho;
  Weight psi;
};

/**
 * psi random faithful of mass psi_mass; rho = psi^{1/2} K psi^{1/2} with
 * K = U diag(k) U*, k_i in [0.3, 1], so that rho <= psi.
 */
inline DominatedPair random_dominated_pair(Rng &rng, const Algebra &a, double psi_mass) {
  const Weight psi = random_faithful_weight(rng, a, psi_mass);
  const Element half = psi.density_power(cplx(0.5, 0.0));
  std::vector<Matrix> kb;
  for (int d : a.dims()) {
    RealVector k(d);
    for (int i = 0; i < d; ++i) k(i) = uniform(rng, 0.3, 1.0);
    const Matrix u = random_unitary(rng, d);
    kb.push_back(u * k.cast<cplx>().asDiagonal() * u.adjoint());
  }
  const Element rho_d = half * Element(std::move(kb)) * half;
  return {Weight(rho_d), psi};
}

}  // namespace poisson

#endif  // POISSON_RANDOM_HPP
