#pragma once

// Generators and brute-force oracles shared by the unit tests and the
// acceptance runner. Nothing here calls into the library's norm code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "weavelab/norms.hpp"

namespace wltest {

using weavelab::Matrix;
using weavelab::NormKind;
using weavelab::Vector;
using Rng = std::mt19937_64;

inline double unit(Rng& rng) { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = unit(rng);
  return m;
}

// Entries k / 16 with |k| <= 32: every sum of up to 2^40 of them is exact.
inline Matrix random_dyadic(Rng& rng, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<int> k(-32, 32);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = k(rng) / 16.0;
  return m;
}

// Diagonally dominated so the condition number stays small.
inline Matrix random_basis(Rng& rng, std::size_t d, double spread = 0.4) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix m = Matrix::Identity(n, n) + spread / std::sqrt(static_cast<double>(d)) *
                                          random_matrix(rng, d, d);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j) *= 0.5 + std::abs(unit(rng));
  return m;
}

inline NormKind random_norm(Rng& rng) {
  switch (pick(rng, 0, 2)) {
    case 0: return NormKind::l1();
    case 1: return NormKind::l2();
    default: return NormKind::linf();
  }
}

// Scaled permutation of the unit vectors.
inline Matrix random_one_unconditional(Rng& rng, std::size_t d) {
  std::vector<Eigen::Index> perm(d);
  for (std::size_t i = 0; i < d; ++i) perm[i] = static_cast<Eigen::Index>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto n = static_cast<Eigen::Index>(d);
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m(perm[static_cast<std::size_t>(j)], j) = 0.5 + std::abs(unit(rng));
  return m;
}

// ---- oracles ----------------------------------------------------------------

inline double plain_norm(const Vector& v, double p) {
  double s = 0.0;
  if (std::isinf(p)) {
    for (Eigen::Index i = 0; i < v.size(); ++i) s = std::max(s, std::abs(v(i)));
    return s;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)), p);
  return std::pow(s, 1.0 / p);
}

// max over +-e_j, the extreme points of the l1 ball.
inline double brute_l1(const Matrix& m) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Vector e = Vector::Zero(m.cols());
    e(j) = 1.0;
    best = std::max(best, (m * e).lpNorm<1>());
  }
  return best;
}

// max over the sign vertices of the cube.
inline double brute_linf(const Matrix& m) {
  const auto n = m.cols();
  double best = 0.0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    Vector s(n);
    for (Eigen::Index j = 0; j < n; ++j) s(j) = ((code >> j) & 1U) ? -1.0 : 1.0;
    best = std::max(best, (m * s).lpNorm<Eigen::Infinity>());
  }
  return best;
}

inline double power_l2(const Matrix& m, int iterations = 20000) {
  const Matrix g = m.transpose() * m;
  Vector v = Vector::Ones(g.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += 0.01 * static_cast<double>(i);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = g * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / n;
    if (it > 50 && std::abs(next - lambda) <= 1e-15 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

inline double oracle_norm(const Matrix& m, NormKind k) {
  switch (k.tag()) {
    case NormKind::Tag::L1: return brute_l1(m);
    case NormKind::Tag::LInf: return brute_linf(m);
    default: return power_l2(m);
  }
}

inline double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// max(||S||, ||S^-1||) from the explicit matrix, +inf when singular.
inline double oracle_frame_constant(const Matrix& s, NormKind k) {
  Eigen::FullPivLU<Matrix> lu(s);
  if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
  return std::max(oracle_norm(s, k), oracle_norm(lu.inverse(), k));
}

// Brute-force worst weaving constant of two systems of vectors and functionals.
inline double oracle_worst_weaving(const Matrix& x0, const Matrix& f0, const Matrix& x1,
                                   const Matrix& f1, NormKind k) {
  const auto n = x0.cols();
  double worst = 0.0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    Matrix x = x0, f = f0;
    for (Eigen::Index i = 0; i < n; ++i)
      if ((code >> i) & 1U) {
        x.col(i) = x1.col(i);
        f.col(i) = f1.col(i);
      }
    worst = std::max(worst, oracle_frame_constant(x * f.transpose(), k));
  }
  return worst;
}

// Partial sum projections of a basis, maximized.
inline double oracle_basis_constant(const Matrix& b, NormKind k) {
  const Matrix duals = b.inverse().transpose();
  const auto n = b.cols();
  double best = 0.0;
  for (Eigen::Index m = 1; m <= n; ++m)
    best = std::max(best, oracle_norm(b.leftCols(m) * duals.leftCols(m).transpose(), k));
  return best;
}

}  // namespace wltest
