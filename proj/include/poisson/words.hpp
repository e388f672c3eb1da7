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

#ifndef POISSON_WORDS_HPP
#define POISSON_WORDS_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "poisson/algebra.hpp"
#include "poisson/gns.hpp"
#include "poisson/moments.hpp"
#include "poisson/partitions.hpp"

namespace poisson {

inline constexpr int kMaxWordLength = 6;

enum class WordKind { Lambda, LambdaEmpty, LambdaEmptyEmpty };

inline std::string to_string(WordKind k) {
  switch (k) {
    case WordKind::Lambda: return "lambda";
    case WordKind::LambdaEmpty: return "empty";
    case WordKind::LambdaEmptyEmpty: return "fock";
  }
  return "?";
}

inline WordKind word_kind_from_string(const std::string &s) {
  if (s == "lambda") return WordKind::Lambda;
  if (s == "empty") return WordKind::LambdaEmpty;
  if (s == "fock") return WordKind::LambdaEmptyEmpty;
  throw std::invalid_argument("unknown word kind: " + s);
}

/**
 * A vector label: lambda(x_1)...lambda(x_n) xi, lambda_0(x_1, ..., x_n) xi
 * or lambda_00(x_1, ..., x_n) xi.
 */
struct PoissonWord {
  WordKind kind = WordKind::LambdaEmpty;
  std::vector<Element> letters;

  int size() const { return static_cast<int>(letters.size()); }

  void validate() const {
    if (size() > kMaxWordLength) throw CapError("Poisson words are capped at 6 letters");
    for (std::size_t i = 1; i < letters.size(); ++i) letters[0].check_same(letters[i]);
  }
};

using Letters = std::vector<Element>;

/** One term of a linear combination of words. */
struct WordTerm {
  cplx coeff;
  PoissonWord word;
};
using WordExpansion = std::vector<WordTerm>;

inline Letters subword(const Letters &xs, std::uint32_t mask) {
  Letters out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (mask & (1u << i)) out.push_back(xs[i]);
  return out;
}

// --------------------------------------------------------------------------
// Oracle vectors.

namespace detail {

inline TruncatedGnsVector lambda_empty_vector(const Letters &xs,
                                              const TruncatedGnsVector &vac) {
  if (xs.empty()) return vac;
  const Letters rest(xs.begin() + 1, xs.end());
  TruncatedGnsVector v = apply_lambda(xs[0], lambda_empty_vector(rest, vac));
  for (std::size_t i = 0; i < rest.size(); ++i) {
    Letters merged = rest;
    merged[i] = xs[0] * rest[i];
    v -= lambda_empty_vector(merged, vac);
  }
  return v;
}

}  // namespace detail

/** lambda_0 word by the recursion; lambda_00 by mean subtraction. */
inline TruncatedGnsVector build_word_vector(const PoissonWord &word,
                                            const GnsSpacePtr &space, int level) {
  word.validate();
  for (const auto &x : word.letters) space->weight().density().check_same(x);
  const TruncatedGnsVector vac = vacuum(space, level);
  const int n = word.size();
  switch (word.kind) {
    case WordKind::Lambda: {
      TruncatedGnsVector v = vac;
      for (int i = n - 1; i >= 0; --i) v = apply_lambda(word.letters[i], v);
      return v;
    }
    case WordKind::LambdaEmpty:
      return detail::lambda_empty_vector(word.letters, vac);
    case WordKind::LambdaEmptyEmpty: {
      const Weight &w = space->weight();
      std::vector<cplx> mean(n);
      for (int i = 0; i < n; ++i) mean[i] = w(word.letters[i]);
      TruncatedGnsVector out(space, level, n);
      for (std::uint32_t keep = 0; keep < (1u << n); ++keep) {
        cplx c = 1.0;
        for (int i = 0; i < n; ++i)
          if (!(keep & (1u << i))) c *= -mean[i];
        out.axpy(c, detail::lambda_empty_vector(subword(word.letters, keep), vac));
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

inline TruncatedGnsVector build_word_vector(const PoissonWord &word, const Weight &w,
                                            int level) {
  return build_word_vector(word, GnsSpace::create(w), level);
}

/** Product of operator norms of the letters. */
inline double letter_norm_product(const Letters &xs) {
  double p = 1.0;
  for (const auto &x : xs) p *= std::max(x.norm(), 1e-300);
  return p;
}

/** <a, b> evaluated on the truncated GNS space with the adaptive tail rule. */
inline OracleValue oracle_word_inner(const PoissonWord &a, const PoissonWord &b,
                                     const GnsSpacePtr &space, double tol = 1e-9) {
  const int degree = a.size() + b.size();
  const double norms =
      std::max(1.0, letter_norm_product(a.letters) * letter_norm_product(b.letters));
  return oracle_inner(
      [&](int level) {
        return std::make_pair(build_word_vector(a, space, level),
                              build_word_vector(b, space, level));
      },
      degree, std::max(space->weight().mass(), 1e-3), norms, tol);
}

// --------------------------------------------------------------------------
// Closed forms.

/**
 * sum over partial matchings: sum_{B_n, B_m, |B_n| = |B_m|} perm(P[B_n, B_m])
 * prod_{i not in B_n} left_i prod_{j not in B_m} right_j.
 */
inline cplx matching_sum(const Matrix &pair, const std::vector<cplx> &left,
                         const std::vector<cplx> &right) {
  const int n = static_cast<int>(pair.rows()), m = static_cast<int>(pair.cols());
  cplx total = 0.0;
  for (std::uint32_t bn = 0; bn < (1u << n); ++bn) {
    const int p = __builtin_popcount(bn);
    cplx lf = 1.0;
    for (int i = 0; i < n; ++i)
      if (!(bn & (1u << i))) lf *= left[i];
    if (lf == 0.0) continue;
    std::vector<int> rows;
    for (int i = 0; i < n; ++i)
      if (bn & (1u << i)) rows.push_back(i);
    for (std::uint32_t bm = 0; bm < (1u << m); ++bm) {
      if (__builtin_popcount(bm) != p) continue;
      cplx rf = 1.0;
      std::vector<int> cols;
      for (int j = 0; j < m; ++j) {
        if (bm & (1u << j)) cols.push_back(j);
        else rf *= right[j];
      }
      if (rf == 0.0) continue;
      Matrix sub(p, p);
      for (int a = 0; a < p; ++a)
        for (int c = 0; c < p; ++c) sub(a, c) = pair(rows[a], cols[c]);
      total += lf * rf * permanent(sub);
    }
  }
  return total;
}

inline void check_letters(const Letters &xs, const Weight &w) {
  if (static_cast<int>(xs.size()) > kMaxWordLength)
    throw CapError("Poisson words are capped at 6 letters");
  for (const auto &x : xs) w.density().check_same(x);
}

inline Matrix pairing_matrix(const Letters &xs, const Letters &ys, const Weight &w) {
  Matrix p(xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Element xa = xs[i].adjoint();
    for (std::size_t j = 0; j < ys.size(); ++j) p(i, j) = w(xa * ys[j]);
  }
  return p;
}

/** <lambda_0(xs) xi, lambda_0(ys) xi>. */
inline cplx gram_empty(const Letters &xs, const Letters &ys, const Weight &w) {
  check_letters(xs, w);
  check_letters(ys, w);
  std::vector<cplx> left, right;
  for (const auto &x : xs) left.push_back(std::conj(w(x)));
  for (const auto &y : ys) right.push_back(w(y));
  return matching_sum(pairing_matrix(xs, ys, w), left, right);
}

/** <lambda_00(xs) xi, lambda_00(ys) xi> = delta_{nm} perm[omega(x_i* y_j)]. */
inline cplx gram_fock(const Letters &xs, const Letters &ys, const Weight &w) {
  check_letters(xs, w);
  check_letters(ys, w);
  if (xs.size() != ys.size()) return 0.0;
  return permanent(pairing_matrix(xs, ys, w));
}

/** <lambda(x_1)...lambda(x_n) xi, lambda(y_1)...lambda(y_m) xi> as a moment. */
inline cplx gram_lambda(const Letters &xs, const Letters &ys, const Weight &w) {
  MomentQuery q{w, {}};
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) q.factors.push_back(it->adjoint());
  for (const auto &y : ys) q.factors.push_back(y);
  return poisson_moment(q);
}

/**
 * <lambda_0(xs) xi, Gamma(y) lambda_0(zs) xi>
 *   = exp(omega(y - 1)) * matching sum with pairs omega(x_i* y z_j),
 *     left singles omega(x_i* y) and right singles omega(y z_j).
 */
inline cplx gamma_matrix_element(const Letters &xs, const Element &y, const Letters &zs,
                                 const Weight &w) {
  check_letters(xs, w);
  check_letters(zs, w);
  Matrix pair(xs.size(), zs.size());
  std::vector<cplx> left, right;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Element xy = xs[i].adjoint() * y;
    left.push_back(w(xy));
    for (std::size_t j = 0; j < zs.size(); ++j) pair(i, j) = w(xy * zs[j]);
  }
  for (const auto &z : zs) right.push_back(w(y * z));
  return std::exp(w(y) - w.mass()) * matching_sum(pair, left, right);
}

enum class TransformDirection {
  /** lambda_00 word expanded over lambda_0 subwords. */
  FockToEmpty,
  /** lambda_0 word expanded over lambda_00 subwords. */
  EmptyToFock,
};

/**
 * Expansion of a word over subwords of the other basis; coeff[mask] belongs
 * to the subword keeping the letters in mask.
 */
struct SubsetExpansion {
  TransformDirection direction;
  int n = 0;
  std::vector<cplx> coeff;
};

inline SubsetExpansion basis_transform(TransformDirection dir, const Letters &xs,
                                       const Weight &w) {
  check_letters(xs, w);
  const int n = static_cast<int>(xs.size());
  std::vector<cplx> mean(n);
  for (int i = 0; i < n; ++i) mean[i] = w(xs[i]);
  const double sign = dir == TransformDirection::FockToEmpty ? -1.0 : 1.0;
  SubsetExpansion e{dir, n, std::vector<cplx>(1u << n)};
  for (std::uint32_t keep = 0; keep < (1u << n); ++keep) {
    cplx c = 1.0;
    for (int i = 0; i < n; ++i)
      if (!(keep & (1u << i))) c *= sign * mean[i];
    e.coeff[keep] = c;
  }
  return e;
}

/**
 * Applies the opposite transform to every subword of e and returns the
 * composed coefficients; for a round trip this is the unit vector at the
 * full mask.
 */
inline std::vector<cplx> compose_transform(const SubsetExpansion &e, const Letters &xs,
                                           const Weight &w) {
  const int n = e.n;
  const double sign = e.direction == TransformDirection::FockToEmpty ? 1.0 : -1.0;
  std::vector<cplx> mean(n);
  for (int i = 0; i < n; ++i) mean[i] = w(xs[i]);
  std::vector<cplx> out(1u << n, 0.0);
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (e.coeff[s] == 0.0) continue;
    // Enumerate subsets t of s.
    for (std::uint32_t t = s;; t = (t - 1) & s) {
      cplx c = 1.0;
      for (int i = 0; i < n; ++i)
        if ((s & (1u << i)) && !(t & (1u << i))) c *= sign * mean[i];
      out[t] += e.coeff[s] * c;
      if (t == 0) break;
    }
  }
  return out;
}

inline double transform_round_trip_residual(const Letters &xs, const Weight &w) {
  double r = 0.0;
  for (auto dir : {TransformDirection::FockToEmpty, TransformDirection::EmptyToFock}) {
    const auto back = compose_transform(basis_transform(dir, xs, w), xs, w);
    const std::uint32_t full = (1u << xs.size()) - 1;
    for (std::uint32_t s = 0; s < back.size(); ++s)
      r = std::max(r, std::abs(back[s] - (s == full ? 1.0 : 0.0)));
  }
  return r;
}

inline WordExpansion to_words(const SubsetExpansion &e, const Letters &xs) {
  const WordKind target = e.direction == TransformDirection::FockToEmpty
                              ? WordKind::LambdaEmpty
                              : WordKind::LambdaEmptyEmpty;
  WordExpansion out;
  for (std::uint32_t s = 0; s < e.coeff.size(); ++s)
    out.push_back({e.coeff[s], PoissonWord{target, subword(xs, s)}});
  return out;
}

/** Closed-form inner product of two words of the lambda_0 / lambda_00 kinds. */
inline cplx word_inner(const PoissonWord &a, const PoissonWord &b, const Weight &w) {
  if (a.kind == WordKind::Lambda && b.kind == WordKind::Lambda)
    return gram_lambda(a.letters, b.letters, w);
  if (a.kind == WordKind::Lambda || b.kind == WordKind::Lambda)
    throw std::invalid_argument("closed-form pairing of lambda words with basis words");
  if (a.kind == WordKind::LambdaEmptyEmpty && b.kind == WordKind::LambdaEmptyEmpty)
    return gram_fock(a.letters, b.letters, w);
  if (a.kind == WordKind::LambdaEmpty && b.kind == WordKind::LambdaEmpty)
    return gram_empty(a.letters, b.letters, w);
  // Mixed: expand the lambda_00 side over lambda_0 subwords.
  if (a.kind == WordKind::LambdaEmptyEmpty) return std::conj(word_inner(b, a, w));
  const auto e = basis_transform(TransformDirection::FockToEmpty, b.letters, w);
  cplx s = 0.0;
  for (std::uint32_t m = 0; m < e.coeff.size(); ++m)
    s += e.coeff[m] * gram_empty(a.letters, subword(b.letters, m), w);
  return s;
}

inline Matrix gram_matrix(const std::vector<PoissonWord> &words, const Weight &w) {
  const auto n = static_cast<Eigen::Index>(words.size());
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = word_inner(words[i], words[j], w);
  return g;
}

inline Matrix oracle_gram_matrix(const std::vector<PoissonWord> &words,
                                 const GnsSpacePtr &space, int level) {
  std::vector<TruncatedGnsVector> vs;
  for (const auto &wd : words) vs.push_back(build_word_vector(wd, space, level));
  const auto n = static_cast<Eigen::Index>(words.size());
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = vs[i].inner(vs[j]);
  return g;
}

/**
 * GNS norm of lambda(x) lambda_00(ys) - [lambda_00(x, ys)
 *   + sum_i lambda_00(.., x y_i, ..) + omega(x) lambda_00(ys)
 *   + sum_i omega(x y_i) lambda_00(ys without y_i)].
 * The omega terms enter with a plus sign under the mean subtraction
 * lambda_00(x) = lambda(x) xi - omega(x) xi; at n = 0 this reduces to
 * lambda(x) xi = lambda_00(x) xi + omega(x) xi.
 */
inline double fock_action_residual(const Element &x, const Letters &ys, const Weight &w,
                                   int level) {
  check_letters(ys, w);
  if (static_cast<int>(ys.size()) + 1 > kMaxWordLength)
    throw CapError("Poisson words are capped at 6 letters");
  const auto space = GnsSpace::create(w);
  auto fock = [&](const Letters &l) {
    return build_word_vector({WordKind::LambdaEmptyEmpty, l}, space, level);
  };
  TruncatedGnsVector lhs = apply_lambda(x, fock(ys));
  Letters head{x};
  head.insert(head.end(), ys.begin(), ys.end());
  TruncatedGnsVector rhs = fock(head);
  rhs.axpy(w(x), fock(ys));
  for (std::size_t i = 0; i < ys.size(); ++i) {
    Letters merged = ys;
    merged[i] = x * ys[i];
    rhs += fock(merged);
    Letters dropped = ys;
    dropped.erase(dropped.begin() + static_cast<long>(i));
    rhs.axpy(w(x * ys[i]), fock(dropped));
  }
  lhs -= rhs;
  return lhs.norm();
}

struct IsometryReport {
  Matrix closed_form;
  Matrix tensor;
  double max_deviation = 0.0;
  bool pass = false;
};

/**
 * Gram of lambda_00 words against the Gram of the symmetric tensors
 * a^dagger(x_1) ... a^dagger(x_n)|0> over L2(N, omega).
 */
inline IsometryReport fock_isometry_check(const std::vector<Letters> &words,
                                          const Weight &w, double tol = 1e-10) {
  const auto space = GnsSpace::create(w);
  const auto n = static_cast<Eigen::Index>(words.size());
  std::vector<Vector> tensors;
  for (const auto &l : words) {
    check_letters(l, w);
    std::vector<Vector> vs;
    for (const auto &x : l) vs.push_back(space->coords(x));
    tensors.push_back(symmetric_tensor(*space, vs));
  }
  IsometryReport r{Matrix(n, n), Matrix(n, n), 0.0, false};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      r.closed_form(i, j) = gram_fock(words[i], words[j], w);
      r.tensor(i, j) = words[i].size() == words[j].size()
                           ? tensors[i].dot(tensors[j])
                           : cplx(0.0);
      r.max_deviation =
          std::max(r.max_deviation, std::abs(r.closed_form(i, j) - r.tensor(i, j)));
    }
  r.pass = r.max_deviation <= tol;
  return r;
}

}  // namespace poisson

#endif  // POISSON_WORDS_HPP
