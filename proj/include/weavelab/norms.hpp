#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "weavelab/errors.hpp"

namespace weavelab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default cap on the 2-norm condition number accepted by `invert`.
inline constexpr double kDefaultCondCap = 1e12;
/// Maximum entrywise residual |M * inv(M) - I| accepted by `invert`.
inline constexpr double kInverseResidualTol = 1e-9;

/// Which lp norm a finite-dimensional sequence space carries.
///
/// c0 truncations are modelled as LInf; they are isometric at finite dimension.
class NormKind {
 public:
  enum class Tag { L1, L2, LInf, Lp };

  static NormKind l1() { return NormKind(Tag::L1, 1.0); }
  static NormKind l2() { return NormKind(Tag::L2, 2.0); }
  static NormKind linf();
  /// General lp norm. p == 1, 2 or inf collapse onto the named tags;
  /// p < 1 or NaN raise InputError.
  static NormKind lp(double p);

  /// Parses "l1", "l2", "linf", "c0" or "lp:<p>".
  static NormKind parse(std::string_view text);

  Tag tag() const { return tag_; }
  /// Exponent; +inf for LInf.
  double p() const { return p_; }
  NormKind dual() const;
  std::string to_string() const;

  friend bool operator==(const NormKind& a, const NormKind& b) {
    return a.tag_ == b.tag_ && a.p_ == b.p_;
  }

 private:
  NormKind(Tag tag, double p) : tag_(tag), p_(p) {}
  Tag tag_;
  double p_;
};

/// A finite truncation of a sequence space: R^dim with an lp norm.
struct NormedSpace {
  NormedSpace(std::size_t dim, NormKind norm);

  std::size_t dim;
  NormKind norm;

  NormedSpace dual() const { return NormedSpace(dim, norm.dual()); }
  friend bool operator==(const NormedSpace& a, const NormedSpace& b) {
    return a.dim == b.dim && a.norm == b.norm;
  }
};

enum class Exactness { Exact, LowerBound };

std::string to_string(Exactness e);

/// A matrix together with the norms carried by its domain and codomain.
class DenseOperator {
 public:
  DenseOperator(Matrix entries, NormKind domain_norm, NormKind codomain_norm);
  DenseOperator(Matrix entries, NormKind norm) : DenseOperator(std::move(entries), norm, norm) {}

  static DenseOperator identity(std::size_t dim, NormKind norm);

  const Matrix& entries() const { return entries_; }
  NormKind domain_norm() const { return domain_; }
  NormKind codomain_norm() const { return codomain_; }
  std::size_t rows() const { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(entries_.cols()); }

  /// Composition this * rhs; the inner norms must agree.
  DenseOperator compose(const DenseOperator& rhs) const;

 private:
  Matrix entries_;
  NormKind domain_;
  NormKind codomain_;
};

/// Value of an operator norm together with a vector that attains (Exact) or
/// approaches (LowerBound) it.
struct OpNormResult {
  double value = 0.0;
  Exactness exactness = Exactness::Exact;
  Vector witness;
};

/// Number of multi-start ascent runs used for norms without a closed form.
inline constexpr int kAscentStarts = 64;

double vector_norm(const Vector& v, NormKind kind);
/// Norm of `f` viewed as a functional on (R^n, kind), i.e. its `kind.dual()` norm.
double dual_norm(const Vector& f, NormKind kind);

/// ||M|| from (R^cols, domain) to (R^rows, codomain).
///
/// Exact for: L1 domains (max column norm), LInf codomains (max row dual
/// norm), L2->L2 (largest singular value). Everything else falls back to
/// Boyd's power iteration from kAscentStarts deterministic starts and is
/// reported as LowerBound.
OpNormResult operator_norm(const DenseOperator& m);
OpNormResult operator_norm(const Matrix& m, NormKind norm);

/// Same value as operator_norm(m, norm).value without building a witness.
double operator_norm_value(const Matrix& m, NormKind norm);

/// Returns nullopt if M is singular, its 2-norm condition number exceeds
/// `cond_cap`, or the computed inverse misses the residual tolerance.
std::optional<Matrix> try_invert(const Matrix& m, double cond_cap = kDefaultCondCap);
/// Throwing form of try_invert.
Matrix invert(const Matrix& m, double cond_cap = kDefaultCondCap);
DenseOperator invert(const DenseOperator& m, double cond_cap = kDefaultCondCap);

/// Estimated 2-norm condition number (inf when singular).
double condition_number(const Matrix& m);

/// Numerical rank with relative singular value threshold `rel_tol`.
std::size_t numerical_rank(const Matrix& m, double rel_tol = 1e-10);

/// sup over c != 0 of ||G c|| / ||W c||, both measured in `norm`.
///
/// W must have full column rank. This is the norm of the map W c -> G c on
/// the subspace range(W). L2 is exact via QR + SVD. L1 and LInf are exact by
/// enumerating the vertices of the unit ball of range(W) when the vertex
/// count stays under `vertex_cap`; otherwise (and for Lp) a multi-start
/// ascent with `restarts` starts gives a LowerBound.
struct RatioNormResult {
  double value = 0.0;
  Exactness exactness = Exactness::Exact;
  Vector witness;  // coefficient vector c
};

inline constexpr std::uint64_t kDefaultVertexCap = 200000;

RatioNormResult ratio_norm(const Matrix& g, const Matrix& w, NormKind norm,
                           int restarts = kAscentStarts,
                           std::uint64_t vertex_cap = kDefaultVertexCap);

/// Multi-start ascent estimate of the same quantity, regardless of norm.
/// Used as the fallback path and for cross-checking the exact paths.
RatioNormResult ratio_norm_ascent(const Matrix& g, const Matrix& w, NormKind norm,
                                  int restarts = kAscentStarts, std::uint64_t seed = 0);

/// Throws InputError if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

}  // namespace weavelab
