#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "weavelab/frame_system.hpp"
#include "weavelab/pattern_search.hpp"
#include "weavelab/weaving.hpp"

namespace weavelab {

/// Span of independent generators (columns). Zero generators are allowed and
/// give the trivial subspace.
class SpannedSubspace {
 public:
  SpannedSubspace(NormedSpace space, Matrix generators, std::string label = {});

  /// Span of the columns of `basis` whose bit in `selection` equals `bit`.
  static SpannedSubspace select(NormedSpace space, const Matrix& basis, const Pattern& selection,
                                bool bit, std::string label = {});

  const NormedSpace& space() const { return space_; }
  const Matrix& generators() const { return generators_; }
  std::size_t dim() const { return static_cast<std::size_t>(generators_.cols()); }
  const std::string& label() const { return label_; }

 private:
  NormedSpace space_;
  Matrix generators_;
  std::string label_;
};

/// Sum of x_i x_i*^T over the indices whose bit is set in `subset`.
DenseOperator basis_projection(const Matrix& basis, const Matrix& duals, NormKind norm,
                               const Pattern& subset);

struct RestrictedInverse {
  Matrix coordinates;  // inverse of M|domain in generator coordinates (codomain -> domain)
  Matrix lifted;       // ambient matrix acting as the inverse on the codomain
  double inverse_norm = 0.0;
  Exactness exactness = Exactness::Exact;
};

/// Inverse of M restricted to `domain`, viewed as a map onto `codomain`.
/// Throws InputError if M does not map domain into codomain, NotInvertible if
/// the restriction is singular or beyond the condition cap.
RestrictedInverse restricted_inverse(const Matrix& m, const SpannedSubspace& domain,
                                     const SpannedSubspace& codomain,
                                     double cond_cap = kDefaultCondCap);

/// inf over unit x in `from` of dist(x, `to`).
/// Exact for l1/linf (vertex enumeration within the cap) and l2 (principal
/// angles). When `exactness` is LowerBound the value is an upper bound on
/// the distance, obtained from a multi-start estimate with `effort` starts.
struct DistanceResult {
  double value = 0.0;
  Exactness exactness = Exactness::Exact;
  Vector x;  // unit vector in `from`
  Vector y;  // nearest point found in `to`
};

DistanceResult directed_distance(const SpannedSubspace& from, const SpannedSubspace& to,
                                 int effort = kAscentStarts);

/// min of the two directed distances. A trivial side contributes +inf from
/// itself and 1 towards it.
DistanceResult subspace_distance(const SpannedSubspace& a, const SpannedSubspace& b,
                                 int effort = kAscentStarts);

/// (P|_Z)^-1 P for a projection P whose range has the dimension of Z.
DenseOperator oblique_projection(const Matrix& p, const SpannedSubspace& z, NormKind norm);

/// A projection together with its range and kernel.
struct ProjectionSplit {
  Matrix projection;
  SpannedSubspace range;
  SpannedSubspace kernel;
};

/// (Q|_{X1})^-1 Q + ((I-P)|_{Y2})^-1 (I-P) for P onto X1 along X2 and Q onto
/// Y1 along Y2. Throws DistanceZero when X1 and Y2 intersect.
DenseOperator direct_sum_projection(const ProjectionSplit& p, const ProjectionSplit& q);

/// For independent columns W: sup over n, c of ||W P_n c|| / ||W c||.
/// Throws NotABasis on dependent columns.
Constant basic_sequence_constant(const Matrix& w, NormKind norm);

/// For independent columns W: max over signs e of sup_c ||W diag(e) c|| / ||W c||.
PatternConstant basic_sequence_unconditional_constant(const Matrix& w, NormKind norm,
                                                      const SearchConfig& config = {});

enum class UncScope { Exhaustive, Sampled };

struct UncOptions {
  SearchConfig search;  // inner searches (sign patterns)
  double threshold = kDefaultBlowUpThreshold;
  std::size_t exhaustive_max_dim = 16;
  std::size_t samples = 512;
  std::uint64_t seed = 0;
  /// Conditions to evaluate, indices 0..5 for (i)..(vi).
  std::array<bool, 6> enabled{true, true, true, true, true, true};
};

struct UncPatternRecord {
  Pattern sigma;
  std::array<bool, 6> holds{};
  std::array<double, 6> constant{};  // +inf when the condition breaks down
  double frame_identity_residual = 0.0;  // |S - (P + I - Q)|_max
  std::optional<double> st_residual;     // |ST - I|_max, when T could be built
  std::optional<double> ts_residual;
};

struct UncCondition {
  bool evaluated = false;
  bool holds = true;
  double constant = 0.0;  // extremal value over the tested patterns
  Pattern argmax;
  std::optional<Pattern> first_failure;
};

struct UncVerdict {
  UncScope scope = UncScope::Exhaustive;
  std::array<UncCondition, 6> conditions;
  std::vector<UncPatternRecord> records;
  double basis0_unconditional = 0.0;
  double basis1_unconditional = 0.0;
  double max_st_residual = 0.0;
  double max_frame_identity_residual = 0.0;
  Exactness exactness = Exactness::Exact;

  /// Whether every enabled condition has the same verdict at every tested pattern.
  bool all_agree() const;
};

/// Evaluates the six conditions on the weavings of two bases (columns), over
/// every pattern when dim <= exhaustive_max_dim, otherwise over `samples`
/// seeded random patterns plus the constant and alternating ones.
UncVerdict unc_conditions(const Matrix& basis0, const Matrix& basis1, NormKind norm,
                          const UncOptions& options = {});

/// Names "i".."vi" of the conditions.
const char* unc_condition_name(std::size_t index);

}  // namespace weavelab
