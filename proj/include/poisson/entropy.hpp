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

#ifndef POISSON_ENTROPY_HPP
#define POISSON_ENTROPY_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "poisson/algebra.hpp"
#include "poisson/gns.hpp"
#include "poisson/words.hpp"

namespace poisson {

inline constexpr int kMaxEntropyLevel = 200;
inline constexpr double kLogFloor = 1e-300;

namespace detail {

/** Eigenpairs of a density over the whole defining representation. */
struct FlatSpectrum {
  std::vector<double> values;
  std::vector<int> block;
  std::vector<Vector> vectors;  // in the block's coordinates
};

inline FlatSpectrum flat_spectrum(const Weight &w) {
  FlatSpectrum f;
  const auto &blocks = w.modular().blocks();
  for (std::size_t k = 0; k < blocks.size(); ++k)
    for (Eigen::Index i = 0; i < blocks[k].values.size(); ++i) {
      f.values.push_back(blocks[k].values(i));
      f.block.push_back(static_cast<int>(k));
      f.vectors.push_back(blocks[k].vectors.col(i));
    }
  return f;
}

/** <v_i| rho |v_i> for the eigenvectors v_i of another density. */
inline std::vector<double> diagonal_in(const Weight &rho, const FlatSpectrum &basis) {
  std::vector<double> out;
  for (std::size_t i = 0; i < basis.values.size(); ++i) {
    const Vector &v = basis.vectors[i];
    out.push_back((v.adjoint() * rho.density().block(basis.block[i]) * v)(0, 0).real());
  }
  return out;
}

/**
 * Tr(r^{(x)m} log s^{(x)m}) where s^{(x)m} is diagonal in the product of an
 * eigenbasis with eigenvalues mu and r has diagonal entries diag in that
 * basis. Summed over occupation patterns with multinomial weights.
 */
inline double tensor_cross_term(const std::vector<double> &diag,
                                const std::vector<double> &mu, int m) {
  const int n = static_cast<int>(diag.size());
  std::vector<double> logd(n), logmu(n);
  for (int i = 0; i < n; ++i) {
    logd[i] = std::log(std::max(diag[i], kLogFloor));
    logmu[i] = std::log(std::max(mu[i], kLogFloor));
  }
  const double lfm = std::lgamma(m + 1.0);
  double total = 0.0;
  // Enumerate compositions of m into n parts.
  std::function<void(int, int, double, double)> rec = [&](int i, int left, double logw,
                                                         double lsum) {
    if (i == n - 1) {
      const double lw = logw + left * logd[i] - std::lgamma(left + 1.0);
      total += std::exp(lfm + lw) * (lsum + left * logmu[i]);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      rec(i + 1, left - v, logw + v * logd[i] - std::lgamma(v + 1.0), lsum + v * logmu[i]);
    }
  };
  rec(0, m, 0.0, 0.0);
  return total;
}

}  // namespace detail

/** Tr(rho(log rho - log psi)) + Tr(psi) - Tr(rho). */
inline double lindblad_entropy(const Weight &rho, const Weight &psi) {
  check_same_algebra(rho, psi);
  const auto sr = detail::flat_spectrum(rho);
  const auto sp = detail::flat_spectrum(psi);
  double self = 0.0;
  for (double v : sr.values) self += v * std::log(std::max(v, kLogFloor));
  const auto diag = detail::diagonal_in(rho, sp);
  double cross = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i)
    cross += diag[i] * std::log(std::max(sp.values[i], kLogFloor));
  return self - cross + psi.mass() - rho.mass();
}

/** d_psi - d_rho >= -tol. */
inline bool check_domination(const Weight &rho, const Weight &psi, double tol = 1e-12) {
  check_same_algebra(rho, psi);
  const Element diff = psi.density() - rho.density();
  for (const auto &b : hermitian_spectrum(diff))
    if (b.values.minCoeff() < -tol) return false;
  return true;
}

struct EntropyLevel {
  int level = 0;
  double value = 0.0;
  double gap = 0.0;
  /** log of the truncated masses used for renormalization. */
  double log_norm_rho = 0.0;
  double log_norm_psi = 0.0;
};

struct EntropyReport {
  double lindblad = 0.0;
  double mass_rho = 0.0;
  double mass_psi = 0.0;
  std::vector<EntropyLevel> levels;
  /** Gap non-increasing from level ceil(5 max mass) on. */
  bool monotone_after_burn_in = true;
};

namespace detail {

struct LevelTerms {
  double self = 0.0;   // Tr(rho^m log rho^m)
  double cross = 0.0;  // Tr(rho^m log psi^m)
};

class PoissonEntropyEvaluator {
 public:
  PoissonEntropyEvaluator(const Weight &rho, const Weight &psi) : rho_(rho), psi_(psi) {
    check_same_algebra(rho, psi);
    const auto sr = flat_spectrum(rho);
    const auto sp = flat_spectrum(psi);
    rho_eigs_ = sr.values;
    psi_eigs_ = sp.values;
    rho_in_psi_ = diagonal_in(rho, sp);
  }

  const LevelTerms &terms(int m) {
    while (static_cast<int>(cache_.size()) <= m) {
      const int j = static_cast<int>(cache_.size());
      cache_.push_back({tensor_cross_term(rho_eigs_, rho_eigs_, j),
                        tensor_cross_term(rho_in_psi_, psi_eigs_, j)});
    }
    return cache_[m];
  }

  /**
   * Umegaki entropy of the renormalized truncations of
   * e^{-a} (+)_m rho^{(x)m} / m! and e^{-b} (+)_m psi^{(x)m} / m!.
   */
  EntropyLevel value(int level) {
    const double a = rho_.mass(), b = psi_.mass();
    // log of e^{-a} sum_{m <= M} a^m / m!
    auto log_partial = [&](double mass) {
      double s = 0.0, t = 1.0;
      for (int m = 0; m <= level; ++m) {
        if (m > 0) t *= mass / m;
        s += t;
      }
      return -mass + std::log(s);
    };
    EntropyLevel out;
    out.level = level;
    out.log_norm_rho = log_partial(a);
    out.log_norm_psi = log_partial(b);
    double s = 0.0;
    for (int m = 0; m <= level; ++m) {
      const double lf = std::lgamma(m + 1.0);
      const double log_cr = -a - lf - out.log_norm_rho;
      const double log_cp = -b - lf - out.log_norm_psi;
      const double cr = std::exp(log_cr);
      const double pm = std::exp(log_cr + m * std::log(a));
      const LevelTerms &t = terms(m);
      s += pm * (log_cr - log_cp) + cr * (t.self - t.cross);
    }
    out.value = s;
    return out;
  }

 private:
  Weight rho_, psi_;
  std::vector<double> rho_eigs_, psi_eigs_, rho_in_psi_;
  std::vector<LevelTerms> cache_;
};

}  // namespace detail

/**
 * Relative entropy of the renormalized level-M truncations of the Poisson
 * densities on the full direct sum of tensor powers.
 */
inline double poisson_relative_entropy(const Weight &rho, const Weight &psi, int level) {
  if (!check_domination(rho, psi)) throw std::invalid_argument("rho is not dominated by psi");
  if (level < 0 || level > kMaxEntropyLevel) throw CapError("entropy level out of range");
  detail::PoissonEntropyEvaluator ev(rho, psi);
  return ev.value(level).value;
}

inline EntropyReport entropy_report(const Weight &rho, const Weight &psi,
                                    const std::vector<int> &levels) {
  if (!check_domination(rho, psi)) throw std::invalid_argument("rho is not dominated by psi");
  EntropyReport r;
  r.lindblad = lindblad_entropy(rho, psi);
  r.mass_rho = rho.mass();
  r.mass_psi = psi.mass();
  detail::PoissonEntropyEvaluator ev(rho, psi);
  const int burn_in = static_cast<int>(std::ceil(5.0 * std::max(r.mass_rho, r.mass_psi)));
  double prev_gap = -1.0;
  for (int level : levels) {
    if (level < 0 || level > kMaxEntropyLevel) throw CapError("entropy level out of range");
    EntropyLevel e = ev.value(level);
    e.gap = std::abs(e.value - r.lindblad);
    // Gaps below 1e-13 are rounding noise and do not count against monotonicity.
    if (level >= burn_in && prev_gap >= 0.0 && e.gap > prev_gap && e.gap > 1e-13)
      r.monotone_after_burn_in = false;
    if (level >= burn_in) prev_gap = e.gap;
    r.levels.push_back(e);
  }
  return r;
}

/**
 * |<xi, Gamma(u_t) lambda_0(xs) xi> - exp(psi(u_t - 1)) prod psi(u_t x_i)| in
 * the psi-Poisson GNS space, with u_t the Connes cocycle of (rho, psi).
 */
inline double cocycle_lift_check(const Weight &rho, const Weight &psi, double t,
                                 const Letters &xs, double tol = 1e-9) {
  if (!check_domination(rho, psi)) throw std::invalid_argument("rho is not dominated by psi");
  check_letters(xs, psi);
  const Element u = connes_cocycle(rho, psi, t);
  cplx closed = std::exp(psi(u) - psi.mass());
  for (const auto &x : xs) closed *= psi(u * x);
  const auto space = GnsSpace::create(psi);
  const auto val = oracle_inner(
      [&](int level) {
        const auto vac = vacuum(space, level);
        const auto v = build_word_vector({WordKind::LambdaEmpty, xs}, space, level);
        return std::make_pair(vac, apply_gamma(u, v));
      },
      static_cast<int>(xs.size()), std::max(psi.mass(), 1e-3),
      std::max(1.0, letter_norm_product(xs)), tol);
  return std::abs(val.value - closed);
}

}  // namespace poisson

#endif  // POISSON_ENTROPY_HPP
