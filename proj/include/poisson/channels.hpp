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

#ifndef POISSON_CHANNELS_HPP
#define POISSON_CHANNELS_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "poisson/algebra.hpp"
#include "poisson/gns.hpp"
#include "poisson/moments.hpp"
#include "poisson/words.hpp"

namespace poisson {

struct MapFlags {
  bool unital = false;
  bool positive = false;
  bool completely_positive = false;
  bool homomorphism = false;
};

/**
 * A linear map between algebras, stored as its matrix on matrix-unit
 * coordinates (see Element::vec). An optional dual is attached by
 * with_dual().
 */
class LinearMap {
 public:
  LinearMap(Algebra src, Algebra dst, Matrix action, MapFlags flags = {})
      : src_(std::move(src)), dst_(std::move(dst)), action_(std::move(action)),
        flags_(flags) {
    if (action_.rows() != dst_.dimension() || action_.cols() != src_.dimension())
      throw DimensionError("action matrix does not match the algebras");
  }

  template <class F>
  static LinearMap from_function(const Algebra &src, const Algebra &dst, F &&f,
                                 MapFlags flags = {}) {
    Matrix a(dst.dimension(), src.dimension());
    for (int k = 0, col = 0; k < src.num_blocks(); ++k)
      for (int p = 0; p < src.block_dim(k); ++p)
        for (int q = 0; q < src.block_dim(k); ++q, ++col) {
          const Element y = f(Element::unit(src, k, p, q));
          if (!(y.algebra() == dst)) throw DimensionError("map output algebra");
          a.col(col) = y.vec();
        }
    return LinearMap(src, dst, std::move(a), flags);
  }

  static LinearMap identity(const Algebra &a) {
    return LinearMap(a, a, Matrix::Identity(a.dimension(), a.dimension()),
                     {true, true, true, true});
  }

  /** x -> u x u*. */
  static LinearMap unitary_conjugation(const Element &u) {
    const Element us = u.adjoint();
    return from_function(u.algebra(), u.algebra(),
                         [&](const Element &x) { return u * x * us; },
                         {true, true, true, true});
  }

  /**
   * Block embedding: source block k lands in target block target[k] (equal
   * sizes), every other target block receives 0.
   */
  static LinearMap block_embedding(const Algebra &src, const Algebra &dst,
                                   const std::vector<int> &target) {
    if (static_cast<int>(target.size()) != src.num_blocks())
      throw DimensionError("one target block per source block");
    std::vector<bool> hit(dst.num_blocks(), false);
    for (int k = 0; k < src.num_blocks(); ++k) {
      if (dst.block_dim(target[k]) != src.block_dim(k))
        throw DimensionError("embedded blocks must have equal size");
      hit[target[k]] = true;
    }
    const bool unital = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    return from_function(
        src, dst,
        [&](const Element &x) {
          std::vector<Matrix> b;
          for (int d : dst.dims()) b.push_back(Matrix::Zero(d, d));
          for (int k = 0; k < src.num_blocks(); ++k) b[target[k]] = x.block(k);
          return Element(std::move(b));
        },
        {unital, true, true, true});
  }

  /** Compression onto the diagonal matrices of every block. */
  static LinearMap diagonal_expectation(const Algebra &a) {
    return from_function(
        a, a,
        [](const Element &x) {
          std::vector<Matrix> b;
          for (const auto &m : x.blocks()) b.push_back(Matrix(m.diagonal().asDiagonal()));
          return Element(std::move(b));
        },
        {true, true, true, false});
  }

  /** c T + (1 - c) S. */
  static LinearMap mixture(double c, const LinearMap &t, const LinearMap &s) {
    if (!(t.src_ == s.src_ && t.dst_ == s.dst_)) throw DimensionError("mixture shapes");
    MapFlags f{t.flags_.unital && s.flags_.unital, t.flags_.positive && s.flags_.positive,
               t.flags_.completely_positive && s.flags_.completely_positive, false};
    if (c < 0.0 || c > 1.0) f = {};
    return LinearMap(t.src_, t.dst_, c * t.action_ + (1.0 - c) * s.action_, f);
  }

  const Algebra &src() const { return src_; }
  const Algebra &dst() const { return dst_; }
  const Matrix &action() const { return action_; }
  const MapFlags &flags() const { return flags_; }
  const std::optional<Matrix> &dual() const { return dual_; }
  double weight_residual() const { return weight_residual_; }

  Element operator()(const Element &x) const {
    if (!(x.algebra() == src_)) throw DimensionError("map input algebra");
    return Element::from_vec(dst_, action_ * x.vec());
  }

  /** The dual map evaluated on x in the target algebra. */
  Element apply_dual(const Element &x) const {
    if (!dual_) throw std::logic_error("map has no declared dual");
    if (!(x.algebra() == dst_)) throw DimensionError("dual input algebra");
    return Element::from_vec(src_, *dual_ * x.vec());
  }

  /** this after other. */
  LinearMap compose(const LinearMap &other) const {
    if (!(other.dst_ == src_)) throw DimensionError("maps are not composable");
    MapFlags f{flags_.unital && other.flags_.unital, flags_.positive && other.flags_.positive,
               flags_.completely_positive && other.flags_.completely_positive,
               flags_.homomorphism && other.flags_.homomorphism};
    return LinearMap(other.src_, dst_, action_ * other.action_, f);
  }

  /**
   * Attaches the dual T^ defined by omega_dst(T(x) y) = omega_src(x T^(y)),
   * after checking omega_dst o T = omega_src up to tol.
   */
  LinearMap with_dual(const Weight &w_src, const Weight &w_dst, double tol = 1e-10) const;

 private:
  Algebra src_, dst_;
  Matrix action_;
  MapFlags flags_;
  std::optional<Matrix> dual_;
  double weight_residual_ = 0.0;
};

/** max over matrix units of |omega_dst(T(E)) - omega_src(E)|. */
inline double check_weight_preserving(const LinearMap &t, const Weight &w_src,
                                      const Weight &w_dst) {
  if (!(w_src.algebra() == t.src()) || !(w_dst.algebra() == t.dst()))
    throw DimensionError("weights do not match the map");
  double r = 0.0;
  const Algebra &a = t.src();
  for (int k = 0; k < a.num_blocks(); ++k)
    for (int p = 0; p < a.block_dim(k); ++p)
      for (int q = 0; q < a.block_dim(k); ++q) {
        const Element e = Element::unit(a, k, p, q);
        r = std::max(r, std::abs(w_dst(t(e)) - w_src(e)));
      }
  return r;
}

namespace detail {

/** B_{ab} = omega(E_a E_b), the bilinear pairing on matrix units. */
inline Matrix bilinear_pairing(const Weight &w) {
  const Algebra &a = w.algebra();
  const int n = a.dimension();
  Matrix b = Matrix::Zero(n, n);
  for (int k = 0; k < a.num_blocks(); ++k) {
    const int d = a.block_dim(k), off = a.block_offset(k);
    const Matrix &dens = w.density().block(k);
    // E_pq E_rs = delta_qr E_ps, and omega(E_ps) = d_sp.
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q)
        for (int s = 0; s < d; ++s) b(off + p * d + q, off + q * d + s) = dens(s, p);
  }
  return b;
}

}  // namespace detail

inline LinearMap LinearMap::with_dual(const Weight &w_src, const Weight &w_dst,
                                      double tol) const {
  const double res = check_weight_preserving(*this, w_src, w_dst);
  if (res > tol) throw std::invalid_argument("map is not weight-preserving");
  LinearMap out = *this;
  const Matrix bs = detail::bilinear_pairing(w_src);
  const Matrix bd = detail::bilinear_pairing(w_dst);
  out.dual_ = bs.partialPivLu().solve(action_.transpose() * bd);
  out.weight_residual_ = res;
  return out;
}

inline double unital_residual(const LinearMap &t) {
  return t(Element::identity(t.src())).max_abs_diff(Element::identity(t.dst()));
}

/**
 * Smallest eigenvalue over the Choi blocks sum_{pq} E_pq (x) T(E_pq)
 * restricted to each (source block, target block) pair.
 */
inline double choi_min_eigenvalue(const LinearMap &t) {
  const Algebra &s = t.src();
  double lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k < s.num_blocks(); ++k) {
    const int d = s.block_dim(k);
    for (int l = 0; l < t.dst().num_blocks(); ++l) {
      const int e = t.dst().block_dim(l);
      Matrix c = Matrix::Zero(d * e, d * e);
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
          c.block(p * e, q * e, e, e) = t(Element::unit(s, k, p, q)).block(l);
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (c + c.adjoint()));
      lo = std::min(lo, es.eigenvalues().minCoeff());
    }
  }
  return lo;
}

/** max |T(E_a E_b) - T(E_a) T(E_b)| and |T(E_a*) - T(E_a)*| over matrix units. */
inline double homomorphism_residual(const LinearMap &t) {
  const Algebra &a = t.src();
  std::vector<Element> units;
  for (int k = 0; k < a.num_blocks(); ++k)
    for (int p = 0; p < a.block_dim(k); ++p)
      for (int q = 0; q < a.block_dim(k); ++q) units.push_back(Element::unit(a, k, p, q));
  double r = 0.0;
  for (const auto &x : units) {
    r = std::max(r, t(x.adjoint()).max_abs_diff(t(x).adjoint()));
    for (const auto &y : units) r = std::max(r, t(x * y).max_abs_diff(t(x) * t(y)));
  }
  return r;
}

enum class LiftDirection {
  /** Letterwise T: words over the source mapped to words over the target. */
  Forward,
  /** Letterwise dual T^: words over the target mapped to words over the source. */
  Predual,
};

/** Letterwise lift of a weight-preserving map with a declared dual. */
inline PoissonWord lift_on_words(const LinearMap &t, const PoissonWord &word,
                                 LiftDirection dir = LiftDirection::Forward) {
  if (!t.dual()) throw std::logic_error("lift needs a weight-preserving map with a dual");
  PoissonWord out{word.kind, {}};
  for (const auto &x : word.letters)
    out.letters.push_back(dir == LiftDirection::Forward ? t(x) : t.apply_dual(x));
  return out;
}

inline void check_centralizer_projection(const Element &e, const Weight &w,
                                         double tol = 1e-12) {
  w.density().check_same(e);
  if (e.max_abs_diff(e.adjoint()) > tol || (e * e).max_abs_diff(e) > tol)
    throw std::invalid_argument("e must be an orthogonal projection");
  const Element &d = w.density();
  if ((e * d).max_abs_diff(d * e) > tol)
    throw std::invalid_argument("projection is not in the centralizer of the weight");
}

/**
 * Gamma(E_e) lambda_0(xs) = sum_{A subset [n]} prod_{i not in A}
 * omega((1 - e) x_i) lambda_0(e x_j e : j in A).
 */
inline WordExpansion corner_project(const Element &e, const PoissonWord &word,
                                    const Weight &w, double tol = 1e-12) {
  if (word.kind != WordKind::LambdaEmpty)
    throw std::invalid_argument("corner projection acts on lambda_0 words");
  word.validate();
  check_centralizer_projection(e, w, tol);
  const Element co = Element::identity(w.algebra()) - e;
  const int n = word.size();
  std::vector<cplx> outside(n);
  Letters inside;
  for (int i = 0; i < n; ++i) {
    outside[i] = w(co * word.letters[i]);
    inside.push_back(e * word.letters[i] * e);
  }
  WordExpansion out;
  for (std::uint32_t keep = 0; keep < (1u << n); ++keep) {
    cplx c = 1.0;
    for (int i = 0; i < n; ++i)
      if (!(keep & (1u << i))) c *= outside[i];
    out.push_back({c, PoissonWord{WordKind::LambdaEmpty, subword(inside, keep)}});
  }
  return out;
}

/** Basis of eNe: u_p u_q* over orthonormal range vectors of e in each block. */
inline std::vector<Element> corner_basis(const Element &e) {
  const Algebra &a = e.algebra();
  std::vector<Element> out;
  for (int k = 0; k < a.num_blocks(); ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (e.block(k) + e.block(k).adjoint()));
    std::vector<Vector> range;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) > 0.5) range.push_back(es.eigenvectors().col(i));
    for (const auto &u : range)
      for (const auto &v : range) {
        std::vector<Matrix> b;
        for (int d : a.dims()) b.push_back(Matrix::Zero(d, d));
        b[k] = u * v.adjoint();
        out.push_back(Element(std::move(b)));
      }
  }
  return out;
}

struct CornerReport {
  double residual = 0.0;
  int level = 0;
  int spanning_words = 0;
  bool pass = false;
};

/**
 * Distance between the closed-form corner projection and the least-squares
 * projection onto lambda_0 words of length <= n + 1 over a basis of eNe.
 */
inline CornerReport corner_projection_check(const Element &e, const Letters &xs,
                                            const Weight &w, double tol = 1e-8) {
  const PoissonWord word{WordKind::LambdaEmpty, xs};
  const auto expansion = corner_project(e, word, w);
  const auto space = GnsSpace::create(w);
  const int n = static_cast<int>(xs.size());
  const int degree = 2 * (n + 1);
  const int level = tail_rule_level(degree, std::max(w.mass(), 1e-3),
                                    std::max(1.0, letter_norm_product(xs) * letter_norm_product(xs)),
                                    tol);
  const auto target = build_word_vector(word, space, level);
  TruncatedGnsVector closed(space, level, 0);
  for (const auto &term : expansion)
    closed.axpy(term.coeff, build_word_vector(term.word, space, level));
  const auto basis = corner_basis(e);
  std::vector<TruncatedGnsVector> spanning;
  // Multisets of basis indices of size 0..n+1.
  std::vector<int> idx;
  std::function<void(int, int)> rec = [&](int start, int left) {
    Letters l;
    for (int i : idx) l.push_back(basis[i]);
    spanning.push_back(build_word_vector({WordKind::LambdaEmpty, l}, space, level));
    if (left == 0) return;
    for (int i = start; i < static_cast<int>(basis.size()); ++i) {
      idx.push_back(i);
      rec(i, left - 1);
      idx.pop_back();
    }
  };
  rec(0, n + 1);
  const auto proj = least_squares_projection(target, spanning);
  TruncatedGnsVector diff = proj;
  diff -= closed;
  CornerReport r{diff.norm(), level, static_cast<int>(spanning.size()), false};
  r.pass = r.residual <= tol;
  return r;
}

struct IndependenceReport {
  double commutator_residual = 0.0;
  double factorization_residual = 0.0;
  double moment_residual = 0.0;
  bool pass = false;
};

struct IndependenceOptions {
  int level = 6;
  int random_vectors = 10;
  std::uint64_t seed = 1;
  double commutator_tol = 1e-10;
  double factorization_tol = 1e-12;
};

/**
 * Strong independence of the Poisson algebras over eNe and fNf: commuting
 * Gamma unitaries, factorizing characteristic functional, factorizing mixed
 * moments.
 */
inline IndependenceReport independence_check(const Element &e, const Element &f,
                                             const Element &x, const Element &y,
                                             const Weight &w,
                                             const IndependenceOptions &opt = {}) {
  check_centralizer_projection(e, w);
  check_centralizer_projection(f, w);
  const double stol = 1e-12 * std::max(1.0, std::max(x.norm(), y.norm()));
  if (!(e * f).is_zero(1e-12)) throw std::invalid_argument("e and f must be orthogonal");
  if ((e * x * e).max_abs_diff(x) > stol || (f * y * f).max_abs_diff(y) > stol)
    throw std::invalid_argument("letters must be supported in their corners");
  if (!x.is_hermitian(stol) || !y.is_hermitian(stol))
    throw std::invalid_argument("independence letters must be Hermitian");
  IndependenceReport r;
  const Element ux = exp_i(x), uy = exp_i(y);

  const auto space = GnsSpace::create(w);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < opt.random_vectors; ++s) {
    TruncatedGnsVector v(space, opt.level, kFullCap);
    for (int m = 0; m <= opt.level; ++m)
      for (Eigen::Index i = 0; i < v.component(m).size(); ++i)
        v.component(m)(i) = cplx(gauss(rng), gauss(rng));
    v *= 1.0 / v.norm();
    TruncatedGnsVector a = apply_gamma(ux, apply_gamma(uy, v));
    a -= apply_gamma(uy, apply_gamma(ux, v));
    r.commutator_residual = std::max(r.commutator_residual, a.norm());
  }

  const cplx joint = std::exp(w(ux * uy) - w.mass());
  r.factorization_residual = std::abs(joint - characteristic(w, x) * characteristic(w, y));

  // Interleavings of x and y letters; the moment must split into the x and y parts.
  const std::vector<std::vector<int>> patterns = {
      {0, 1}, {1, 0}, {0, 1, 0}, {1, 0, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}, {1, 0, 0, 1}};
  for (const auto &pat : patterns) {
    MomentQuery all{w, {}}, px{w, {}}, py{w, {}};
    for (int c : pat) {
      all.factors.push_back(c == 0 ? x : y);
      (c == 0 ? px : py).factors.push_back(c == 0 ? x : y);
    }
    r.moment_residual = std::max(
        r.moment_residual,
        std::abs(poisson_moment(all) - poisson_moment(px) * poisson_moment(py)));
  }
  r.pass = r.commutator_residual <= opt.commutator_tol &&
           r.factorization_residual <= opt.factorization_tol &&
           r.moment_residual <= opt.factorization_tol * 100.0;
  return r;
}

struct UcpReport {
  double choi_min_eigenvalue = 0.0;
  double unital_residual = 0.0;
  double weight_residual = 0.0;
  /** max |phi_dst(Gamma(T(g))) - phi_src(Gamma(g))| over the generators. */
  double state_residual = 0.0;
  /** Smallest eigenvalue of the Gram of lifted words. */
  double lifted_psd_defect = 0.0;
  /** Smallest eigenvalue of Gram(words) - Gram(lifted words). */
  double contraction_defect = 0.0;
  bool pass = false;
};

/**
 * Checks for a unital, completely positive, weight-preserving map T: the
 * Poisson state is preserved on Gamma generators, and the predual lift
 * lambda_0(xs) -> lambda_0(T^ xs) on the given target words yields a
 * positive Gram matrix dominated by the original one.
 */
inline UcpReport ucp_lift_check(const LinearMap &t, const Weight &w_src, const Weight &w_dst,
                                const std::vector<Letters> &words, double tol = 1e-9) {
  UcpReport r;
  r.choi_min_eigenvalue = choi_min_eigenvalue(t);
  r.unital_residual = unital_residual(t);
  r.weight_residual = check_weight_preserving(t, w_src, w_dst);
  if (r.choi_min_eigenvalue < -tol) throw std::invalid_argument("map is not completely positive");
  if (r.weight_residual > tol) throw std::invalid_argument("map is not weight-preserving");
  const LinearMap td = t.dual() ? t : t.with_dual(w_src, w_dst, tol);

  std::vector<PoissonWord> orig, lifted;
  for (const auto &l : words) {
    orig.push_back({WordKind::LambdaEmpty, l});
    lifted.push_back(lift_on_words(td, orig.back(), LiftDirection::Predual));
    for (const auto &x : l) {
      // Generators of the source side: contractions T^(x) / max(1, |T^(x)|).
      Element g = td.apply_dual(x);
      g = g * (1.0 / std::max(1.0, g.norm()));
      const cplx lhs = std::exp(w_dst(td(g)) - w_dst.mass());
      const cplx rhs = std::exp(w_src(g) - w_src.mass());
      r.state_residual = std::max(r.state_residual, std::abs(lhs - rhs));
    }
  }
  const Matrix g0 = gram_matrix(orig, w_dst);
  const Matrix g1 = gram_matrix(lifted, w_src);
  if (g0.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> e1(0.5 * (g1 + g1.adjoint()));
    r.lifted_psd_defect = e1.eigenvalues().minCoeff();
    const Matrix diff = g0 - g1;
    Eigen::SelfAdjointEigenSolver<Matrix> e2(0.5 * (diff + diff.adjoint()));
    r.contraction_defect = e2.eigenvalues().minCoeff();
  }
  r.pass = r.unital_residual <= tol && r.state_residual <= tol &&
           r.lifted_psd_defect >= -tol && r.contraction_defect >= -tol;
  return r;
}

}  // namespace poisson

#endif  // POISSON_CHANNELS_HPP
