#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weavelab/norms.hpp"
#include "weavelab/pattern_search.hpp"

namespace weavelab {

/// Finite family of pairs (x_i, f_i): vectors in the space and functionals on it.
/// Stored column-wise: vectors() is dim x n, functionals() is dim x n.
class FrameSystem {
 public:
  FrameSystem(NormedSpace space, Matrix vectors, Matrix functionals, std::string label = {});

  /// Pairs the columns of `vectors` (a basis) with their biorthogonal functionals.
  static FrameSystem from_basis(NormedSpace space, Matrix vectors, std::string label = {});

  const NormedSpace& space() const { return space_; }
  NormKind norm() const { return space_.norm; }
  std::size_t dim() const { return space_.dim; }
  std::size_t size() const { return static_cast<std::size_t>(vectors_.cols()); }
  const Matrix& vectors() const { return vectors_; }
  const Matrix& functionals() const { return functionals_; }
  Vector vector(std::size_t i) const { return vectors_.col(static_cast<Eigen::Index>(i)); }
  Vector functional(std::size_t i) const { return functionals_.col(static_cast<Eigen::Index>(i)); }
  const std::string& label() const { return label_; }

  /// Rank-one operator x_i f_i^T.
  Matrix term(std::size_t i) const;

  /// Same space and pairs with functionals scaled by `factor`.
  FrameSystem scaled_functionals(double factor) const;

 private:
  NormedSpace space_;
  Matrix vectors_;
  Matrix functionals_;
  std::string label_;
};

struct Constant {
  double value = 0.0;
  Exactness exactness = Exactness::Exact;
};

/// S = sum_i x_i f_i^T, accumulated in index order.
DenseOperator frame_operator(const FrameSystem& f);

struct FrameCheck {
  Matrix s;
  OpNormResult s_norm;
  std::optional<Matrix> s_inverse;
  std::optional<OpNormResult> s_inv_norm;  // empty when S is not invertible
  double c_frame = 0.0;                    // +inf when S is not invertible
  Exactness exactness = Exactness::Exact;

  bool is_frame() const { return s_inverse.has_value(); }
};

/// ||S||, ||S^-1|| and C = max of the two; a singular S is reported, not thrown.
FrameCheck check_approximate_frame(const FrameSystem& f);

/// Biorthogonal functionals of the columns of `basis`, as the columns of the
/// returned matrix (the transposed inverse). Throws NotABasis.
Matrix biorthogonals(const Matrix& basis);

/// max_n ||sum_{i<=n} x_i x_i*^T|| over partial sums. Throws NotABasis.
Constant basis_constant(const Matrix& basis, NormKind norm);

struct PatternConstant {
  double value = 0.0;
  Exactness exactness = Exactness::Exact;
  Pattern witness;
  SearchMode mode = SearchMode::Exhaustive;
};

/// max over subsets G of ||P_G S^-1||. Bit i of the witness marks i in G.
/// Throws NotAFrame.
PatternConstant suppression_constant(const FrameSystem& f, const SearchConfig& config = {});
/// max over signs e of ||(sum e_i x_i f_i^T) S^-1||. Bit i set means e_i = -1.
/// Throws NotAFrame.
PatternConstant unconditional_constant(const FrameSystem& f, const SearchConfig& config = {});

/// Value of the suppression objective at a single subset.
double suppression_value(const FrameSystem& f, const Pattern& subset);

/// Coordinatewise square function sum_j (sum_i |a_i u_j*(x_i)|^2)^(1/2) u_j
/// with respect to the lattice basis (u_j) given as columns of `lattice`.
Vector square_function(const Matrix& vectors, const Vector& coeffs, const Matrix& lattice);

struct EquivalenceConstants {
  double lower = 0.0;  // 1 / ||X0 X1^-1||
  double upper = 0.0;  // ||X1 X0^-1||
  Exactness exactness = Exactness::Exact;
};

/// Optimal c, C with c ||sum a_j x_j|| <= ||sum a_j y_j|| <= C ||sum a_j x_j||
/// for x = basis0, y = basis1. Throws NotABasis.
EquivalenceConstants equivalence_constants(const Matrix& basis0, const Matrix& basis1,
                                           NormKind norm);

/// min_j |x1*_j(x0_j)|, the diagonal pairing of basis1's functionals with basis0.
double diagonal_pairing_min(const Matrix& basis0, const Matrix& basis1);

struct ConstantReport {
  FrameCheck frame;
  std::optional<PatternConstant> suppression;
  std::optional<PatternConstant> unconditional;
  std::optional<Constant> basis;  // only when the vectors form a basis
};

/// Every per-system constant; pattern constants are skipped for non-frames.
ConstantReport analyze_system(const FrameSystem& f, const SearchConfig& config = {});

/// Whether the columns are a basis of the ambient space (square, invertible under the cap).
bool is_basis(const Matrix& vectors);

}  // namespace weavelab
