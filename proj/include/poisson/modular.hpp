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

#ifndef POISSON_MODULAR_HPP
#define POISSON_MODULAR_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "poisson/algebra.hpp"
#include "poisson/words.hpp"

namespace poisson {

inline PoissonWord lift_modular_flow(const PoissonWord &word, const Weight &w, double t) {
  PoissonWord out{word.kind, {}};
  for (const auto &x : word.letters) out.letters.push_back(modular_flow(w, x, t));
  return out;
}

/**
 * |exp(omega(sigma_{t+i}(x) y - 1)) - exp(omega(y sigma_t(x) - 1))| for
 * contractions x, y.
 */
inline double kms_residual(const Weight &w, const Element &x, const Element &y, double t,
                           double norm_tol = 1e-12) {
  if (x.norm() > 1.0 + norm_tol || y.norm() > 1.0 + norm_tol)
    throw std::invalid_argument("kms_residual needs contractions");
  const Element continued = modular_flow_complex(w, x, cplx(t, 1.0));
  const Element flowed = modular_flow(w, x, t);
  const cplx lhs = std::exp(w(continued * y) - w.mass());
  const cplx rhs = std::exp(w(y * flowed) - w.mass());
  return std::abs(lhs - rhs);
}

/** Eigenvalue ratios of the density within blocks; contains 1. */
inline std::vector<double> arveson_spectrum(const Weight &w) {
  return w.modular().delta_spectrum();
}

enum class TypeTag { TypeII1, TypeIIIlambda, TypeIII1, Indeterminate };

inline std::string to_string(TypeTag t) {
  switch (t) {
    case TypeTag::TypeII1: return "II_1";
    case TypeTag::TypeIIIlambda: return "III_lambda";
    case TypeTag::TypeIII1: return "III_1";
    case TypeTag::Indeterminate: return "indeterminate";
  }
  return "?";
}

struct TypeClass {
  TypeTag tag = TypeTag::Indeterminate;
  /** Set for TypeIIIlambda. */
  std::optional<double> lambda;
  /** Distinct positive log-spectrum values. */
  std::vector<double> log_generators;
  /** Detected lattice step h (lambda = e^{-h}), if any. */
  std::optional<double> step;
  std::string note;
};

struct ClassifierOptions {
  /** Tolerance on normalized log ratios. */
  double tol = 1e-9;
  /** Largest denominator swept. */
  std::int64_t max_denominator = 1'000'000;
  /** Denominators up to this value count as a genuine rational relation. */
  std::int64_t confident_denominator = 1'000;
  /** The smallest matching denominator beyond this counts as irrational. */
  std::int64_t irrational_denominator = 10'000;
};

namespace detail {

struct Rational {
  std::int64_t p = 0, q = 1;
};

/**
 * Smallest-denominator p/q with |x - p/q| <= tol and q <= qmax, searched over
 * continued-fraction convergents and their semiconvergents.
 */
inline std::optional<Rational> best_rational(double x, double tol, std::int64_t qmax) {
  if (std::abs(x - std::round(x)) <= tol)
    return Rational{static_cast<std::int64_t>(std::round(x)), 1};
  std::int64_t p0 = 1, q0 = 0, p1 = static_cast<std::int64_t>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  std::optional<Rational> best;
  for (int iter = 0; iter < 64 && frac > 1e-300; ++iter) {
    const double inv = 1.0 / frac;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    frac = inv - static_cast<double>(a);
    // Semiconvergents (k p1 + p0) / (k q1 + q0) for k = 1..a, in increasing q.
    for (std::int64_t k = 1; k <= a; ++k) {
      const std::int64_t q = k * q1 + q0;
      if (q > qmax) return best;
      const std::int64_t p = k * p1 + p0;
      if (std::abs(x - static_cast<double>(p) / static_cast<double>(q)) <= tol)
        return Rational{p, q};
    }
    const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return best;
}

}  // namespace detail

/**
 * Classifies the group generated by a finite spectrum. Logs of the ratios
 * above 1 are compared with the smallest one; each quotient is tested for a
 * rational value with small denominator. All rational gives a cyclic group
 * with step h and type III_{e^{-h}}; a clearly irrational quotient gives a
 * dense group and type III_1.
 */
inline TypeClass classify_spectrum(const std::vector<double> &spectrum,
                                   const ClassifierOptions &opt = {}) {
  TypeClass out;
  std::vector<double> logs;
  for (double r : spectrum) {
    const double l = std::log(r);
    if (l > opt.tol) logs.push_back(l);
  }
  std::sort(logs.begin(), logs.end());
  logs = ModularData::merge_sorted(logs, 1e-10);
  out.log_generators = logs;
  if (logs.empty()) {
    out.tag = TypeTag::TypeII1;
    return out;
  }
  const double base = logs.front();
  std::int64_t common_den = 1;
  std::vector<detail::Rational> ratios;
  bool irrational = false, ambiguous = false;
  for (double l : logs) {
    const double x = l / base;
    const auto r = detail::best_rational(x, opt.tol * std::max(1.0, x), opt.max_denominator);
    if (!r || r->q > opt.irrational_denominator) {
      irrational = true;
      continue;
    }
    if (r->q > opt.confident_denominator) {
      ambiguous = true;
      continue;
    }
    ratios.push_back(*r);
    common_den = std::lcm(common_den, r->q);
    if (common_den > opt.confident_denominator) ambiguous = true;
  }
  if (irrational && !ambiguous) {
    out.tag = TypeTag::TypeIII1;
    out.note = "incommensurate log-spectrum";
    return out;
  }
  if (ambiguous) {
    out.tag = TypeTag::Indeterminate;
    out.note = "rational relation within tolerance but with a large denominator";
    return out;
  }
  // logs = base * p_k / q_k; the generated group is (base / Q) * gcd(p_k Q / q_k) Z.
  std::int64_t g = 0;
  for (const auto &r : ratios) g = std::gcd(g, r.p * (common_den / r.q));
  const double h = base * static_cast<double>(g) / static_cast<double>(common_den);
  out.tag = TypeTag::TypeIIIlambda;
  out.step = h;
  out.lambda = std::exp(-h);
  return out;
}

inline TypeClass classify_type(const Weight &w, const ClassifierOptions &opt = {}) {
  return classify_spectrum(arveson_spectrum(w), opt);
}

/**
 * One full matrix block of size sum(dims) whose density is
 * e^{theta |t_k|} on the k-th diagonal sub-block, normalized to unit mass.
 */
inline Weight principal_series_weight(const std::vector<double> &t_values,
                                      double theta = 2.0 * M_PI,
                                      std::vector<int> dims = {}) {
  if (t_values.empty()) throw std::invalid_argument("principal series needs t values");
  if (dims.empty()) dims.assign(t_values.size(), 1);
  if (dims.size() != t_values.size())
    throw DimensionError("dims must match the t values");
  int total = 0;
  for (int d : dims) {
    if (d < 1) throw DimensionError("dims must be positive");
    total += d;
  }
  // Scale relative to the smallest |t| to keep the exponentials bounded.
  double tmin = std::abs(t_values[0]);
  for (double t : t_values) tmin = std::min(tmin, std::abs(t));
  RealVector diag(total);
  int off = 0;
  double mass = 0.0;
  for (std::size_t k = 0; k < t_values.size(); ++k) {
    const double v = std::exp(theta * (std::abs(t_values[k]) - tmin));
    for (int i = 0; i < dims[k]; ++i) diag(off + i) = v;
    off += dims[k];
    mass += v * dims[k];
  }
  diag /= mass;
  Matrix d = diag.cast<cplx>().asDiagonal();
  return Weight(Element({d}));
}

/** min{e^{theta(|t_a| - |t_b|)}, e^{theta(|t_b| - |t_a|)}}. */
inline double principal_series_lambda(double ta, double tb, double theta = 2.0 * M_PI) {
  const double h = theta * std::abs(std::abs(ta) - std::abs(tb));
  return std::exp(-h);
}

}  // namespace poisson

#endif  // POISSON_MODULAR_HPP
