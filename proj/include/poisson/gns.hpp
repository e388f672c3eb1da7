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

// Truncated GNS representation of the Poisson state on the direct sum of
// tensor powers of N. Each level m is stored on the symmetric subspace of
// N^{(x)m}, written in the occupation-number basis of an orthonormal basis
// e_0, ..., e_{D-1} of L2(N, omega) with e_0 proportional to the identity.
// Stored amplitudes already carry the factor sqrt(e^{-omega(1)} / m!), so
// the GNS inner product is the plain Euclidean one.
//
// A state is labelled by its excitations (n_1, ..., n_{D-1}); the mode-0
// occupation is m minus their sum. States are ranked by excitation total,
// then lexicographically, so the states with at most k excitations form a
// prefix. Vectors built from the vacuum by j applications of lambda never
// carry more than j excitations, which keeps level sizes independent of m.

#ifndef POISSON_GNS_HPP
#define POISSON_GNS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "poisson/algebra.hpp"

namespace poisson {

/** Hard cap on the entries of a single level, about 64 MB of amplitudes. */
inline constexpr std::uint64_t kMaxLevelEntries = 4'000'000;
inline constexpr int kMaxGnsLevel = 96;

/** Saturating binomial coefficients for occupation counting. */
class BinomialTable {
 public:
  explicit BinomialTable(int n_max) : n_(n_max + 1) {
    t_.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (int n = 0; n < n_; ++n) {
      at(n, 0) = 1;
      for (int k = 1; k <= n; ++k) {
        const std::uint64_t a = at(n - 1, k - 1), b = k <= n - 1 ? at(n - 1, k) : 0;
        at(n, k) = a > kSat - b ? kSat : a + b;
      }
    }
  }

  std::uint64_t operator()(int n, int k) const {
    if (k < 0 || n < 0 || k > n) return 0;
    if (n >= n_) throw CapError("binomial table too small");
    return t_[static_cast<std::size_t>(n) * n_ + k];
  }

  static constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max() / 4;

 private:
  std::uint64_t &at(int n, int k) { return t_[static_cast<std::size_t>(n) * n_ + k]; }
  int n_;
  std::vector<std::uint64_t> t_;
};

/** Occupation states over r excitation modes with at most k excitations. */
class OccupationTable {
 public:
  OccupationTable(int r, int k, const BinomialTable &binom) : r_(r), k_(k) {
    if (r == 0) {
      size_ = 1;
      occ_.clear();
      totals_.assign(1, 0);
      return;
    }
    const std::uint64_t n = binom(k + r, r);
    if (n > kMaxLevelEntries)
      throw CapError("symmetric-subspace dimension exceeds the memory cap");
    size_ = static_cast<std::size_t>(n);
    occ_.reserve(size_ * r);
    totals_.reserve(size_);
    std::vector<std::uint16_t> cur(r, 0);
    for (int t = 0; t <= k; ++t) emit(cur, 0, t, t);
  }

  int modes() const { return r_; }
  int cap() const { return k_; }
  std::size_t size() const { return size_; }
  const std::uint16_t *state(std::size_t i) const { return occ_.data() + i * r_; }
  int total(std::size_t i) const { return totals_[i]; }

 private:
  void emit(std::vector<std::uint16_t> &cur, int i, int left, int t) {
    if (i == r_ - 1) {
      cur[i] = static_cast<std::uint16_t>(left);
      occ_.insert(occ_.end(), cur.begin(), cur.end());
      totals_.push_back(t);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[i] = static_cast<std::uint16_t>(v);
      emit(cur, i + 1, left - v, t);
    }
  }

  int r_, k_;
  std::size_t size_ = 0;
  std::vector<std::uint16_t> occ_;
  std::vector<int> totals_;
};

/**
 * The single-particle data of a weight: an orthonormal basis of L2(N, omega)
 * with e_0 = 1 / sqrt(omega(1)), coordinates, left multiplication matrices,
 * and cached occupation tables.
 */
class GnsSpace {
 public:
  static std::shared_ptr<const GnsSpace> create(const Weight &w) {
    return std::shared_ptr<const GnsSpace>(new GnsSpace(w));
  }

  const Weight &weight() const { return weight_; }
  const Algebra &algebra() const { return weight_.algebra(); }
  int modes() const { return dim_; }
  int excitation_modes() const { return dim_ - 1; }

  /** Coordinates of x in the orthonormal basis. */
  Vector coords(const Element &x) const { return to_coords_ * x.vec(); }

  Element element(const Vector &c) const {
    return Element::from_vec(algebra(), basis_ * c);
  }

  /** Matrix of y -> x y in the orthonormal basis. */
  Matrix left_matrix(const Element &x) const {
    weight_.density().check_same(x);
    Matrix out(dim_, dim_);
    for (int j = 0; j < dim_; ++j) out.col(j) = coords(x * basis_elements_[j]);
    return out;
  }

  const BinomialTable &binomials() const { return binom_; }

  /** Number of states with at most k excitations. */
  std::uint64_t states_upto(int k) const {
    const int r = excitation_modes();
    if (r == 0) return 1;
    return binom_(k + r, r);
  }

  /** Rank of an excitation pattern in the (total, lexicographic) order. */
  std::size_t rank(const std::uint16_t *occ) const {
    const int r = excitation_modes();
    if (r == 0) return 0;
    int t = 0;
    for (int i = 0; i < r; ++i) t += occ[i];
    std::uint64_t res = t == 0 ? 0 : binom_(t - 1 + r, r);
    int s = t;
    for (int i = 0; i + 1 < r; ++i) {
      const int modes_after = r - i - 1;
      for (int v = 0; v < occ[i]; ++v)
        res += binom_(s - v + modes_after - 1, modes_after - 1);
      s -= occ[i];
    }
    return static_cast<std::size_t>(res);
  }

  /** Occupation table covering at least k excitations (cached, thread-safe). */
  std::shared_ptr<const OccupationTable> table(int k) const {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!table_ || table_->cap() < k)
      table_ = std::make_shared<const OccupationTable>(excitation_modes(), k, binom_);
    return table_;
  }

 private:
  explicit GnsSpace(const Weight &w)
      : weight_(w), dim_(w.algebra().dimension()), binom_(kMaxGnsLevel + w.algebra().dimension() + 2) {
    const Algebra &a = w.algebra();
    // Gram of matrix units: G_{ab} = omega(E_a^* E_b).
    std::vector<Element> units;
    for (int k = 0; k < a.num_blocks(); ++k)
      for (int p = 0; p < a.block_dim(k); ++p)
        for (int q = 0; q < a.block_dim(k); ++q) units.push_back(Element::unit(a, k, p, q));
    Matrix g(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) g(i, j) = w(units[i].adjoint() * units[j]);
    g = 0.5 * (g + g.adjoint());
    // W = L^{-*} is orthonormal for G = L L^*; rotate so column 0 is 1/|1|.
    Eigen::LLT<Matrix> llt(g);
    const Matrix lstar = llt.matrixU();
    Vector c = lstar * Element::identity(a).vec();
    c /= c.norm();
    Eigen::HouseholderQR<Matrix> qr(c);
    Matrix q = qr.householderQ();
    // Fix the phase of the first column so e_0 is a positive multiple of 1.
    const cplx ph = q.col(0).dot(c);
    q.col(0) *= ph;
    const Matrix w_basis = lstar.triangularView<Eigen::Upper>().solve(
        Matrix::Identity(dim_, dim_));
    basis_ = w_basis * q;
    to_coords_ = q.adjoint() * lstar;
    for (int j = 0; j < dim_; ++j)
      basis_elements_.push_back(Element::from_vec(a, basis_.col(j)));
  }

  Weight weight_;
  int dim_;
  BinomialTable binom_;
  Matrix basis_;
  Matrix to_coords_;
  std::vector<Element> basis_elements_;
  mutable std::mutex mutex_;
  mutable std::shared_ptr<const OccupationTable> table_;
};

using GnsSpacePtr = std::shared_ptr<const GnsSpace>;

/** Excitation cap marking a level stored on its full symmetric subspace. */
inline constexpr int kFullCap = std::numeric_limits<int>::max() / 2;

/**
 * An element of the level-truncated GNS space: levels m = 0..M, level m
 * holding states with at most min(cap, m) excitations.
 */
class TruncatedGnsVector {
 public:
  TruncatedGnsVector() = default;

  TruncatedGnsVector(GnsSpacePtr space, int level, int cap)
      : space_(std::move(space)), level_(level), cap_(cap) {
    if (level < 0 || level > kMaxGnsLevel) throw CapError("GNS level out of range");
    levels_.resize(level + 1);
    for (int m = 0; m <= level; ++m) levels_[m] = Vector::Zero(size_for(m, cap));
  }

  const GnsSpacePtr &space() const { return space_; }
  int level() const { return level_; }
  int cap() const { return cap_; }
  int cap_at(int m) const { return std::min(cap_, m); }
  const Vector &component(int m) const { return levels_.at(m); }
  Vector &component(int m) { return levels_.at(m); }

  std::size_t size_for(int m, int cap) const {
    const auto n = space_->states_upto(std::min(cap, m));
    if (n > kMaxLevelEntries)
      throw CapError("symmetric-subspace dimension exceeds the memory cap");
    return static_cast<std::size_t>(n);
  }

  /** Same vector with a larger excitation cap (zero padding). */
  TruncatedGnsVector with_cap(int cap) const {
    if (cap <= cap_) return *this;
    TruncatedGnsVector out(space_, level_, cap);
    for (int m = 0; m <= level_; ++m) out.levels_[m].head(levels_[m].size()) = levels_[m];
    return out;
  }

  /** Levels 0..M' only. */
  TruncatedGnsVector truncated(int level) const {
    TruncatedGnsVector out = *this;
    out.level_ = std::min(level, level_);
    out.levels_.resize(out.level_ + 1);
    return out;
  }

  /** <this, other> summed over levels 0..upto (default: all common levels). */
  cplx inner(const TruncatedGnsVector &o, int upto = -1) const {
    check_compatible(o);
    const int top = upto < 0 ? std::min(level_, o.level_)
                             : std::min({upto, level_, o.level_});
    cplx s = 0.0;
    for (int m = 0; m <= top; ++m) {
      const auto n = std::min(levels_[m].size(), o.levels_[m].size());
      s += levels_[m].head(n).dot(o.levels_[m].head(n));
    }
    return s;
  }

  /** Contribution of level m alone. */
  cplx inner_level(const TruncatedGnsVector &o, int m) const {
    const auto n = std::min(levels_.at(m).size(), o.levels_.at(m).size());
    return levels_[m].head(n).dot(o.levels_[m].head(n));
  }

  double norm() const { return std::sqrt(std::max(0.0, inner(*this).real())); }

  TruncatedGnsVector &operator+=(const TruncatedGnsVector &o) { return axpy(1.0, o); }
  TruncatedGnsVector &operator-=(const TruncatedGnsVector &o) { return axpy(-1.0, o); }

  /** this += c * o */
  TruncatedGnsVector &axpy(cplx c, const TruncatedGnsVector &o) {
    check_compatible(o);
    if (o.level_ != level_) throw DimensionError("GNS vectors at different levels");
    if (o.cap_ > cap_) *this = with_cap(o.cap_);
    for (int m = 0; m <= level_; ++m)
      levels_[m].head(o.levels_[m].size()) += c * o.levels_[m];
    return *this;
  }

  TruncatedGnsVector &operator*=(cplx c) {
    for (auto &v : levels_) v *= c;
    return *this;
  }

  friend TruncatedGnsVector operator+(TruncatedGnsVector a, const TruncatedGnsVector &b) {
    return a += b;
  }
  friend TruncatedGnsVector operator-(TruncatedGnsVector a, const TruncatedGnsVector &b) {
    return a -= b;
  }
  friend TruncatedGnsVector operator*(cplx c, TruncatedGnsVector a) { return a *= c; }

  void check_compatible(const TruncatedGnsVector &o) const {
    if (space_ != o.space_) throw DimensionError("GNS vectors over different spaces");
  }

 private:
  GnsSpacePtr space_;
  int level_ = 0;
  int cap_ = 0;
  std::vector<Vector> levels_;
};

/** e^{-a} sum_{m > M} a^m / m!, summed directly to avoid cancellation. */
inline double poisson_tail(double mass, int level) {
  double t = std::exp(-mass - std::lgamma(level + 1.0) + level * std::log(mass));
  double tail = 0.0;
  for (int m = level + 1; m < level + 400; ++m) {
    t *= mass / m;
    tail += t;
    if (t < 1e-300 || t < tail * 1e-17) break;
  }
  return tail;
}

/** The Poisson vacuum xi: level m equals sqrt(pmf(m)) |m, 0, ..., 0>. */
inline TruncatedGnsVector vacuum(const GnsSpacePtr &space, int level) {
  TruncatedGnsVector v(space, level, 0);
  const double a = space->weight().mass();
  for (int m = 0; m <= level; ++m)
    v.component(m)(0) =
        std::exp(0.5 * (-a + m * std::log(a) - std::lgamma(m + 1.0)));
  return v;
}

/** The spectral projection onto level m. */
inline TruncatedGnsVector project_level(const TruncatedGnsVector &v, int m) {
  TruncatedGnsVector out = v;
  for (int j = 0; j <= v.level(); ++j)
    if (j != m) out.component(j).setZero();
  return out;
}

namespace detail {

inline std::vector<double> sqrt_table(int n) {
  std::vector<double> s(n + 2);
  for (int i = 0; i < n + 2; ++i) s[i] = std::sqrt(static_cast<double>(i));
  return s;
}

}  // namespace detail

/**
 * Second quantization of a single-particle matrix L: on level m the
 * operator sum_{ij} L_ij a_i^dagger a_j, i.e. sum_j pi_j(x) for L = L_x.
 */
inline TruncatedGnsVector apply_number_type(const Matrix &lmat,
                                            const TruncatedGnsVector &v) {
  const GnsSpace &sp = *v.space();
  const int dm = sp.modes();
  const int r = dm - 1;
  const int out_cap = v.cap() >= kFullCap ? kFullCap : v.cap() + 1;
  TruncatedGnsVector out(v.space(), v.level(), out_cap);
  const int table_cap = std::min(out_cap, v.level());
  const auto table = sp.table(table_cap);
  const auto sq = detail::sqrt_table(v.level() + 2);
  std::vector<std::uint16_t> occ(std::max(r, 1));
  for (int m = 0; m <= v.level(); ++m) {
    const Vector &in = v.component(m);
    Vector &dst = out.component(m);
    for (Eigen::Index s = 0; s < in.size(); ++s) {
      const cplx c = in(s);
      if (c == 0.0) continue;
      const std::uint16_t *st = table->state(static_cast<std::size_t>(s));
      const int n0 = m - table->total(static_cast<std::size_t>(s));
      auto occ_of = [&](int mode) { return mode == 0 ? n0 : static_cast<int>(st[mode - 1]); };
      for (int j = 0; j < dm; ++j) {
        const int nj = occ_of(j);
        if (nj == 0) continue;
        dst(s) += lmat(j, j) * static_cast<double>(nj) * c;
        for (int i = 0; i < dm; ++i) {
          if (i == j) continue;
          const cplx lij = lmat(i, j);
          if (lij == 0.0) continue;
          for (int q = 0; q < r; ++q) occ[q] = st[q];
          if (j > 0) --occ[j - 1];
          if (i > 0) ++occ[i - 1];
          const std::size_t t = sp.rank(occ.data());
          dst(static_cast<Eigen::Index>(t)) += lij * sq[nj] * sq[occ_of(i) + 1] * c;
        }
      }
    }
  }
  return out;
}

/** lambda(x) = sum_j pi_j(x) on each level. */
inline TruncatedGnsVector apply_lambda(const Element &x, const TruncatedGnsVector &v) {
  return apply_number_type(v.space()->left_matrix(x), v);
}

namespace detail {

/**
 * Gamma(h) for a 2x2 matrix h acting on modes (i, j), applied in place on
 * full-cap levels. h e_i = h00 e_i + h10 e_j, h e_j = h01 e_i + h11 e_j.
 */
inline void apply_two_mode(const GnsSpace &sp, const OccupationTable &table,
                           int mi, int mj, const Eigen::Matrix2cd &h,
                           TruncatedGnsVector &v) {
  const int r = sp.excitation_modes();
  const int top = v.level();
  std::vector<double> lf(2 * top + 3);
  for (std::size_t k = 0; k < lf.size(); ++k) lf[k] = std::lgamma(k + 1.0);
  std::vector<std::uint16_t> occ(std::max(r, 1));
  std::vector<cplx> pa(top + 1), pb(top + 1), pc(top + 1), pd(top + 1);
  auto powers = [&](cplx z, std::vector<cplx> &p, int n) {
    p[0] = 1.0;
    for (int k = 1; k <= n; ++k) p[k] = p[k - 1] * z;
  };
  powers(h(0, 0), pa, top);
  powers(h(1, 0), pb, top);
  powers(h(0, 1), pc, top);
  powers(h(1, 1), pd, top);
  for (int m = 0; m <= top; ++m) {
    const Vector &in = v.component(m);
    Vector out = Vector::Zero(in.size());
    for (Eigen::Index s = 0; s < in.size(); ++s) {
      const cplx c = in(s);
      if (c == 0.0) continue;
      const std::uint16_t *st = table.state(static_cast<std::size_t>(s));
      const int n0 = m - table.total(static_cast<std::size_t>(s));
      const int p = mi == 0 ? n0 : st[mi - 1];
      const int q = mj == 0 ? n0 : st[mj - 1];
      for (int k = 0; k < r; ++k) occ[k] = st[k];
      const double norm_in = 0.5 * (lf[p] + lf[q]);
      for (int a = 0; a <= p; ++a) {
        const double ba = std::exp(lf[p] - lf[a] - lf[p - a]);
        const cplx fa = ba * pa[a] * pb[p - a];
        if (fa == 0.0) continue;
        for (int b = 0; b <= q; ++b) {
          const double bb = std::exp(lf[q] - lf[b] - lf[q - b]);
          const cplx fb = bb * pc[b] * pd[q - b];
          if (fb == 0.0) continue;
          const int ni = a + b, nj = p + q - a - b;
          if (mi > 0) occ[mi - 1] = static_cast<std::uint16_t>(ni);
          if (mj > 0) occ[mj - 1] = static_cast<std::uint16_t>(nj);
          const double scale = std::exp(0.5 * (lf[ni] + lf[nj]) - norm_in);
          out(static_cast<Eigen::Index>(sp.rank(occ.data()))) += c * fa * fb * scale;
        }
      }
    }
    v.component(m) = std::move(out);
  }
}

inline void apply_diagonal(const OccupationTable &table, const Vector &diag,
                           TruncatedGnsVector &v) {
  const int r = table.modes();
  for (int m = 0; m <= v.level(); ++m) {
    Vector &x = v.component(m);
    for (Eigen::Index s = 0; s < x.size(); ++s) {
      if (x(s) == 0.0) continue;
      const std::uint16_t *st = table.state(static_cast<std::size_t>(s));
      const int n0 = m - table.total(static_cast<std::size_t>(s));
      cplx f = n0 == 0 ? cplx(1.0) : std::pow(diag(0), n0);
      for (int k = 0; k < r; ++k)
        if (st[k] > 0) f *= std::pow(diag(k + 1), static_cast<int>(st[k]));
      x(s) *= f;
    }
  }
}

struct GivensStep {
  int row;  // acts on modes (row - 1, row)
  Eigen::Matrix2cd g;
};

/**
 * u = G_1 ... G_k diag(lambda) with two-mode unitaries G_i, obtained by
 * reducing u to diagonal form with adjacent-row rotations.
 */
inline std::pair<std::vector<GivensStep>, Vector> givens_factor(const Matrix &u) {
  const int n = static_cast<int>(u.rows());
  Matrix rm = u;
  std::vector<GivensStep> steps;
  for (int c = 0; c + 1 < n; ++c) {
    for (int row = n - 1; row > c; --row) {
      const cplx a = rm(row - 1, c), b = rm(row, c);
      if (std::abs(b) == 0.0) continue;
      const double rho = std::hypot(std::abs(a), std::abs(b));
      Eigen::Matrix2cd g;
      g << std::conj(a) / rho, std::conj(b) / rho, -b / rho, a / rho;
      const Eigen::Matrix<cplx, 2, Eigen::Dynamic> block =
          rm.middleRows(row - 1, 2);
      rm.middleRows(row - 1, 2) = g * block;
      steps.push_back({row, g.adjoint()});
    }
  }
  return {steps, rm.diagonal()};
}

}  // namespace detail

/** Gamma(A) for a single-particle matrix A, level by level A^{(x)m}. */
inline TruncatedGnsVector apply_second_quantization(const Matrix &amat,
                                                    const TruncatedGnsVector &v) {
  const GnsSpace &sp = *v.space();
  TruncatedGnsVector out = v.with_cap(kFullCap);
  const auto table = sp.table(v.level());
  const int n = sp.modes();
  auto apply_unitary = [&](const Matrix &u) {
    auto [steps, diag] = detail::givens_factor(u);
    detail::apply_diagonal(*table, diag, out);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      // Acting on modes (row-1, row): h e_{row-1} = g00 e_{row-1} + g10 e_row.
      detail::apply_two_mode(sp, *table, it->row - 1, it->row, it->g, out);
    }
  };
  const Matrix gram = amat.adjoint() * amat;
  if ((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-13) {
    apply_unitary(amat);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(amat, Eigen::ComputeFullU | Eigen::ComputeFullV);
  apply_unitary(svd.matrixV().adjoint());
  detail::apply_diagonal(*table, svd.singularValues().cast<cplx>(), out);
  apply_unitary(svd.matrixU());
  return out;
}

/** Gamma(a) = a^{(x)m} on level m. */
inline TruncatedGnsVector apply_gamma(const Element &a, const TruncatedGnsVector &v) {
  return apply_second_quantization(v.space()->left_matrix(a), v);
}

/** sum_{m > M} m^deg mass^m norms / m!. */
inline double analytic_tail(int degree, double mass, double norm_product, int level) {
  auto log_term = [&](int m) {
    return degree * std::log(static_cast<double>(m)) + m * std::log(mass) +
           std::log(std::max(norm_product, 1e-300)) - std::lgamma(m + 1.0);
  };
  double tail = 0.0;
  for (int m = level + 1; m <= level + 400; ++m) {
    const double t = std::exp(log_term(m));
    tail += t;
    if (m > degree + mass + 2 && t < tail * 1e-17) break;
  }
  return tail;
}

/** Smallest M whose analytic tail is below tol / 10. */
inline int tail_rule_level(int degree, double mass, double norm_product, double tol,
                           int max_level = kMaxGnsLevel) {
  for (int level = 1; level <= max_level; ++level)
    if (analytic_tail(degree, mass, norm_product, level) < tol / 10.0) return level;
  throw CapError("tail rule needs a level beyond the cap");
}

struct OracleValue {
  cplx value;
  /** Level of the returned value. */
  int level = 0;
  /** Change between the tail-rule level and the doubled level. */
  double change = 0.0;
  /** Analytic tail bound at the returned level. */
  double tail_bound = 0.0;
};

/**
 * Adaptive inner product: starting from the tail-rule level M, vectors are
 * built at 2M and the partial sums at M and 2M compared; M doubles until
 * they agree to tol / 10. The value at 2M is returned.
 */
inline OracleValue oracle_inner(
    const std::function<std::pair<TruncatedGnsVector, TruncatedGnsVector>(int)> &build,
    int degree, double mass, double norm_product, double tol,
    int max_level = kMaxGnsLevel) {
  int level = tail_rule_level(degree, mass, norm_product, tol, max_level);
  while (true) {
    const int top = std::min(2 * level, max_level);
    auto [a, b] = build(top);
    const cplx lo = a.inner(b, level);
    const cplx hi = a.inner(b, top);
    const double change = std::abs(hi - lo);
    if (change < tol / 10.0 || top == max_level)
      return {hi, top, change, analytic_tail(degree, mass, norm_product, top)};
    level = top;
  }
}

/**
 * Orthogonal projection of v onto span(spanning), via the pseudo-inverse of
 * the Gram matrix. Returns the projected vector.
 */
inline TruncatedGnsVector least_squares_projection(
    const TruncatedGnsVector &v, const std::vector<TruncatedGnsVector> &spanning,
    double rcond = 1e-12) {
  const int n = static_cast<int>(spanning.size());
  Matrix g(n, n);
  Vector rhs(n);
  for (int i = 0; i < n; ++i) {
    rhs(i) = spanning[i].inner(v);
    for (int j = 0; j < n; ++j) g(i, j) = spanning[i].inner(spanning[j]);
  }
  g = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  Vector coeff = Vector::Zero(n);
  for (int k = 0; k < n; ++k) {
    const double ev = es.eigenvalues()(k);
    if (ev <= rcond * top) continue;
    const Vector u = es.eigenvectors().col(k);
    coeff += u * (u.dot(rhs) / ev);
  }
  TruncatedGnsVector out(v.space(), v.level(), 0);
  for (int i = 0; i < n; ++i) out.axpy(coeff(i), spanning[i]);
  return out;
}

/**
 * Symmetric Fock space over the single-particle space C^D: the n-particle
 * vector a^dagger(v_1) ... a^dagger(v_n) |0>, stored as level n with the
 * same occupation layout as the GNS levels (full cap).
 */
inline Vector symmetric_tensor(const GnsSpace &sp, const std::vector<Vector> &vs) {
  const int n = static_cast<int>(vs.size());
  const int r = sp.excitation_modes();
  const auto table = sp.table(n);
  const auto sq = detail::sqrt_table(n + 2);
  Vector cur = Vector::Ones(1);
  std::vector<std::uint16_t> occ(std::max(r, 1));
  for (int level = 1; level <= n; ++level) {
    const Vector &v = vs[level - 1];
    Vector next = Vector::Zero(static_cast<Eigen::Index>(sp.states_upto(level)));
    for (Eigen::Index s = 0; s < cur.size(); ++s) {
      const cplx c = cur(s);
      if (c == 0.0) continue;
      const std::uint16_t *st = table->state(static_cast<std::size_t>(s));
      const int n0 = (level - 1) - table->total(static_cast<std::size_t>(s));
      // Mode 0 raises n0 without changing the excitation pattern.
      next(s) += v(0) * sq[n0 + 1] * c;
      for (int k = 1; k <= r; ++k) {
        if (v(k) == 0.0) continue;
        for (int q = 0; q < r; ++q) occ[q] = st[q];
        ++occ[k - 1];
        next(static_cast<Eigen::Index>(sp.rank(occ.data()))) += v(k) * sq[st[k - 1] + 1] * c;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace poisson

#endif  // POISSON_GNS_HPP
