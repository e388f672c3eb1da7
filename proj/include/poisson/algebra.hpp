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

#ifndef POISSON_ALGEBRA_HPP
#define POISSON_ALGEBRA_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace poisson {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx I_UNIT{0.0, 1.0};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/** Raised when a requested size exceeds a hard cap (word length, level,
 * symmetric-subspace dimension). */
class CapError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/**
 * A finite direct sum of full matrix algebras M_{d_1} + ... + M_{d_k}.
 */
class Algebra {
 public:
  Algebra() = default;

  explicit Algebra(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("algebra needs at least one block");
    for (int d : dims_) {
      if (d < 1) throw DimensionError("block dimensions must be positive");
    }
  }

  static Algebra full(int d) { return Algebra({d}); }
  static Algebra scalar() { return Algebra({1}); }

  const std::vector<int> &dims() const { return dims_; }
  int num_blocks() const { return static_cast<int>(dims_.size()); }
  int block_dim(int k) const { return dims_.at(k); }

  /** Linear dimension sum d_k^2. */
  int dimension() const {
    int s = 0;
    for (int d : dims_) s += d * d;
    return s;
  }

  /** Size of the defining representation, sum d_k. */
  int hilbert_dimension() const {
    return std::accumulate(dims_.begin(), dims_.end(), 0);
  }

  /** Offset of block k in the matrix-unit coordinate vector. */
  int block_offset(int k) const {
    int s = 0;
    for (int j = 0; j < k; ++j) s += dims_[j] * dims_[j];
    return s;
  }

  bool operator==(const Algebra &) const = default;

 private:
  std::vector<int> dims_;
};

/**
 * An element of an Algebra, stored as one dense complex matrix per block.
 *
 * Coordinates: vec() concatenates the blocks, each read row-major, so that
 * coordinate offset_k + p d_k + q belongs to the matrix unit E^{(k)}_{pq}.
 */
class Element {
 public:
  Element() = default;

  explicit Element(std::vector<Matrix> blocks) : blocks_(std::move(blocks)) {
    std::vector<int> dims;
    dims.reserve(blocks_.size());
    for (const auto &b : blocks_) {
      if (b.rows() != b.cols()) throw DimensionError("blocks must be square");
      dims.push_back(static_cast<int>(b.rows()));
    }
    algebra_ = Algebra(std::move(dims));
  }

  static Element zero(const Algebra &a) {
    std::vector<Matrix> b;
    for (int d : a.dims()) b.push_back(Matrix::Zero(d, d));
    return Element(std::move(b));
  }

  static Element identity(const Algebra &a) {
    std::vector<Matrix> b;
    for (int d : a.dims()) b.push_back(Matrix::Identity(d, d));
    return Element(std::move(b));
  }

  /** The scalar multiple c * 1. */
  static Element scalar(const Algebra &a, cplx c) { return identity(a) * c; }

  /** Matrix unit E^{(k)}_{pq}. */
  static Element unit(const Algebra &a, int k, int p, int q) {
    Element e = zero(a);
    e.blocks_.at(k)(p, q) = 1.0;
    return e;
  }

  static Element from_vec(const Algebra &a, const Vector &v) {
    if (v.size() != a.dimension()) throw DimensionError("coordinate length");
    std::vector<Matrix> b;
    int off = 0;
    for (int d : a.dims()) {
      Matrix m(d, d);
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) m(p, q) = v(off + p * d + q);
      off += d * d;
      b.push_back(std::move(m));
    }
    return Element(std::move(b));
  }

  Vector vec() const {
    Vector v(algebra_.dimension());
    int off = 0;
    for (const auto &m : blocks_) {
      const auto d = m.rows();
      for (Eigen::Index p = 0; p < d; ++p)
        for (Eigen::Index q = 0; q < d; ++q) v(off + p * d + q) = m(p, q);
      off += static_cast<int>(d * d);
    }
    return v;
  }

  const Algebra &algebra() const { return algebra_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Matrix &block(int k) const { return blocks_.at(k); }
  const std::vector<Matrix> &blocks() const { return blocks_; }

  Element adjoint() const {
    std::vector<Matrix> b;
    for (const auto &m : blocks_) b.push_back(m.adjoint());
    return Element(std::move(b));
  }

  cplx trace() const {
    cplx t = 0.0;
    for (const auto &m : blocks_) t += m.trace();
    return t;
  }

  /** Operator norm: the largest singular value over all blocks. */
  double norm() const {
    double n = 0.0;
    for (const auto &m : blocks_) {
      Eigen::JacobiSVD<Matrix> svd(m);
      n = std::max(n, svd.singularValues()(0));
    }
    return n;
  }

  /** Largest entrywise modulus of this - other. */
  double max_abs_diff(const Element &other) const {
    check_same(other);
    double r = 0.0;
    for (int k = 0; k < num_blocks(); ++k)
      r = std::max(r, (blocks_[k] - other.blocks_[k]).cwiseAbs().maxCoeff());
    return r;
  }

  bool is_hermitian(double tol = 1e-12) const {
    return max_abs_diff(adjoint()) <= tol;
  }

  bool is_zero(double tol = 0.0) const {
    for (const auto &m : blocks_)
      if (m.cwiseAbs().maxCoeff() > tol) return false;
    return true;
  }

  Element &operator+=(const Element &o) {
    check_same(o);
    for (int k = 0; k < num_blocks(); ++k) blocks_[k] += o.blocks_[k];
    return *this;
  }
  Element &operator-=(const Element &o) {
    check_same(o);
    for (int k = 0; k < num_blocks(); ++k) blocks_[k] -= o.blocks_[k];
    return *this;
  }
  Element &operator*=(cplx c) {
    for (auto &m : blocks_) m *= c;
    return *this;
  }

  friend Element operator+(Element a, const Element &b) { return a += b; }
  friend Element operator-(Element a, const Element &b) { return a -= b; }
  friend Element operator-(Element a) { return a *= -1.0; }
  friend Element operator*(Element a, cplx c) { return a *= c; }
  friend Element operator*(cplx c, Element a) { return a *= c; }
  friend Element operator*(Element a, double c) { return a *= cplx(c); }
  friend Element operator*(double c, Element a) { return a *= cplx(c); }

  friend Element operator*(const Element &a, const Element &b) {
    a.check_same(b);
    std::vector<Matrix> out;
    out.reserve(a.blocks_.size());
    for (int k = 0; k < a.num_blocks(); ++k)
      out.push_back(a.blocks_[k] * b.blocks_[k]);
    return Element(std::move(out));
  }

  void check_same(const Element &o) const {
    if (!(algebra_ == o.algebra_))
      throw DimensionError("elements belong to different algebras");
  }

 private:
  Algebra algebra_;
  std::vector<Matrix> blocks_;
};

/** Eigendecomposition of one Hermitian block: m = V diag(values) V*. */
struct BlockSpectrum {
  RealVector values;
  Matrix vectors;
};

inline std::vector<BlockSpectrum> hermitian_spectrum(const Element &h) {
  std::vector<BlockSpectrum> out;
  for (const auto &m : h.blocks()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    out.push_back({es.eigenvalues(), es.eigenvectors()});
  }
  return out;
}

/** f(h) for Hermitian h, computed blockwise in the eigenbasis. */
inline Element hermitian_function(const Element &h,
                                  const std::function<cplx(double)> &f) {
  std::vector<Matrix> out;
  for (const auto &s : hermitian_spectrum(h)) {
    Vector fv(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) fv(i) = f(s.values(i));
    out.push_back(s.vectors * fv.asDiagonal() * s.vectors.adjoint());
  }
  return Element(std::move(out));
}

/** e^{ih} for Hermitian h. */
inline Element exp_i(const Element &h) {
  return hermitian_function(h, [](double v) { return std::exp(I_UNIT * v); });
}

/**
 * Spectral data of a positive-definite density: per-block eigenvalues and
 * eigenvectors, plus the spectrum of the modular operator.
 */
class ModularData {
 public:
  ModularData() = default;

  explicit ModularData(const Element &density) {
    blocks_ = hermitian_spectrum(density);
  }

  const std::vector<BlockSpectrum> &blocks() const { return blocks_; }

  /** All density eigenvalues, merged at relative tolerance rel_tol. */
  std::vector<double> eigenvalues(double rel_tol = 1e-12) const {
    std::vector<double> all;
    for (const auto &b : blocks_)
      for (Eigen::Index i = 0; i < b.values.size(); ++i)
        all.push_back(b.values(i));
    return merge_sorted(std::move(all), rel_tol);
  }

  /**
   * Spectrum of the modular operator: ratios mu_p / mu_q of eigenvalues
   * taken inside the same block (matrix units never connect two blocks).
   */
  std::vector<double> delta_spectrum(double eig_tol = 1e-12,
                                     double ratio_tol = 1e-10) const {
    std::vector<double> ratios;
    for (const auto &b : blocks_) {
      std::vector<double> ev(b.values.data(), b.values.data() + b.values.size());
      ev = merge_sorted(std::move(ev), eig_tol);
      for (double p : ev)
        for (double q : ev) ratios.push_back(p / q);
    }
    return merge_sorted(std::move(ratios), ratio_tol);
  }

  static std::vector<double> merge_sorted(std::vector<double> v, double rel_tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v) {
      if (!out.empty() &&
          std::abs(x - out.back()) <= rel_tol * std::max(std::abs(x), std::abs(out.back())))
        continue;
      out.push_back(x);
    }
    return out;
  }

 private:
  std::vector<BlockSpectrum> blocks_;
};

/**
 * A faithful positive functional omega(x) = Tr(d x) given by a positive-
 * definite density d.
 */
class Weight {
 public:
  Weight() = default;

  explicit Weight(Element density, double herm_tol = 1e-10)
      : density_(std::move(density)) {
    if (!density_.is_hermitian(herm_tol * std::max(1.0, density_.norm())))
      throw std::invalid_argument("density must be Hermitian");
    // Symmetrize so later eigen solves see an exactly Hermitian matrix.
    density_ = 0.5 * (density_ + density_.adjoint());
    modular_ = ModularData(density_);
    for (const auto &b : modular_.blocks())
      if (b.values.minCoeff() <= 0.0)
        throw std::invalid_argument("density must be positive definite");
    mass_ = density_.trace().real();
  }

  static Weight tracial(const Algebra &a, double mass = 1.0) {
    const double n = a.hilbert_dimension();
    return Weight(Element::identity(a) * (mass / n));
  }

  const Algebra &algebra() const { return density_.algebra(); }
  const Element &density() const { return density_; }
  double mass() const { return mass_; }
  const ModularData &modular() const { return modular_; }

  cplx operator()(const Element &x) const {
    density_.check_same(x);
    cplx s = 0.0;
    for (int k = 0; k < x.num_blocks(); ++k)
      s += (density_.block(k).transpose().cwiseProduct(x.block(k))).sum();
    return s;
  }

  /** d^{z} for complex z, via the eigenbasis. */
  Element density_power(cplx z) const {
    std::vector<Matrix> out;
    for (const auto &b : modular_.blocks()) {
      Vector f(b.values.size());
      for (Eigen::Index i = 0; i < f.size(); ++i)
        f(i) = std::exp(z * std::log(b.values(i)));
      out.push_back(b.vectors * f.asDiagonal() * b.vectors.adjoint());
    }
    return Element(std::move(out));
  }

  /** The functional c * omega. */
  Weight scaled(double c) const { return Weight(density_ * c); }

 private:
  Element density_;
  ModularData modular_;
  double mass_ = 0.0;
};

inline cplx weight_eval(const Weight &w, const Element &x) { return w(x); }

enum class NormVariant {
  /** max{||x||, omega(x*x)^1/2, omega(xx*)^1/2, |omega(x)|} */
  State,
  /** As State, with |omega(x)| replaced by the polar factorization bound on
   * ||x||_1. */
  Weight,
};

/**
 * Upper bound for the weight norm ||x||_1 from the factorization
 * x = (u|x|^{1/2}) |x|^{1/2}: sqrt(omega(|x*|) omega(|x|)).
 */
inline double weight_norm_bound(const Weight &w, const Element &x) {
  std::vector<Matrix> abs_x, abs_xs;
  for (const auto &m : x.blocks()) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix s = svd.singularValues().cast<cplx>().asDiagonal();
    abs_x.push_back(svd.matrixV() * s * svd.matrixV().adjoint());
    abs_xs.push_back(svd.matrixU() * s * svd.matrixU().adjoint());
  }
  const double a = w(Element(std::move(abs_x))).real();
  const double b = w(Element(std::move(abs_xs))).real();
  return std::sqrt(std::max(0.0, a) * std::max(0.0, b));
}

inline double triple_norm(const Weight &w, const Element &x,
                          NormVariant variant = NormVariant::State) {
  const Element xs = x.adjoint();
  const double r1 = std::sqrt(std::max(0.0, w(xs * x).real()));
  const double r2 = std::sqrt(std::max(0.0, w(x * xs).real()));
  const double last = variant == NormVariant::State ? std::abs(w(x))
                                                    : weight_norm_bound(w, x);
  return std::max({x.norm(), r1, r2, last});
}

/**
 * sigma_z(x) = d^{iz} x d^{-iz} for complex z. In the eigenbasis the entry
 * (j, k) is multiplied by exp(iz (log mu_j - log mu_k)); z = t + i gives the
 * analytic continuation used by the KMS condition.
 */
inline Element modular_flow_complex(const Weight &w, const Element &x, cplx z) {
  w.density().check_same(x);
  std::vector<Matrix> out;
  const auto &spec = w.modular().blocks();
  for (int k = 0; k < x.num_blocks(); ++k) {
    const auto &b = spec[k];
    Matrix y = b.vectors.adjoint() * x.block(k) * b.vectors;
    for (Eigen::Index j = 0; j < y.rows(); ++j)
      for (Eigen::Index l = 0; l < y.cols(); ++l)
        y(j, l) *= std::exp(I_UNIT * z *
                            (std::log(b.values(j)) - std::log(b.values(l))));
    out.push_back(b.vectors * y * b.vectors.adjoint());
  }
  return Element(std::move(out));
}

inline Element modular_flow(const Weight &w, const Element &x, double t) {
  return modular_flow_complex(w, x, cplx(t, 0.0));
}

inline void check_same_algebra(const Weight &a, const Weight &b) {
  if (!(a.algebra() == b.algebra()))
    throw DimensionError("weights live on different algebras");
}

/** Connes cocycle u_t = d_rho^{it} d_psi^{-it}. */
inline Element connes_cocycle(const Weight &rho, const Weight &psi, double t) {
  check_same_algebra(rho, psi);
  return rho.density_power(I_UNIT * t) * psi.density_power(-I_UNIT * t);
}

/**
 * The pair (rho, psi) together with the relative modular operator
 * x -> d_rho x d_psi^{-1} on the algebra with <a, b> = Tr(d_psi a* b).
 */
class RelativeModularData {
 public:
  RelativeModularData(Weight rho, Weight psi)
      : rho_(std::move(rho)), psi_(std::move(psi)) {
    check_same_algebra(rho_, psi_);
    psi_inv_ = psi_.density_power(-1.0);
  }

  const Weight &rho() const { return rho_; }
  const Weight &psi() const { return psi_; }

  Element apply(const Element &x) const { return rho_.density() * x * psi_inv_; }

  cplx inner(const Element &a, const Element &b) const {
    return psi_(a.adjoint() * b);
  }

  Element cocycle(double t) const { return connes_cocycle(rho_, psi_, t); }

 private:
  Weight rho_, psi_;
  Element psi_inv_;
};

}  // namespace poisson

#endif  // POISSON_ALGEBRA_HPP
