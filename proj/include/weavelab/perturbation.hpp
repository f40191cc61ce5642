#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weavelab/frame_system.hpp"
#include "weavelab/weaving.hpp"

namespace weavelab {

enum class BudgetKind { BasisSum, OperatorDeviation, PairSum };

std::string to_string(BudgetKind k);

/// A strict threshold and the measured quantity it bounds.
struct PerturbationBudget {
  BudgetKind kind = BudgetKind::BasisSum;
  double bound = 0.0;
  double actual = 0.0;

  bool satisfied() const { return actual < bound; }
};

enum class CertificateScope { Exhaustive, Sampled };

/// Per-pattern check that every weaving is invertible and that its deviation
/// from the reference stays under `claimed`.
struct Certificate {
  CertificateScope scope = CertificateScope::Exhaustive;
  std::uint64_t patterns_checked = 0;
  bool all_invertible = true;
  double claimed = 0.0;       // proof bound on the deviation
  double max_deviation = 0.0;  // largest measured ||Id - S_sigma S^-1||
  Pattern worst;
  bool holds = true;
};

struct PerturbOptions {
  WeaveOptions weave;
  /// Patterns are certified exhaustively up to this length, sampled beyond.
  std::size_t exhaustive_max_dim = 12;
  std::size_t samples = 512;
  std::uint64_t seed = 0;
  /// Slack added to the proof bound in certificates.
  double slack = 1e-9;
  /// Run the weaving search even when the budget is not satisfied.
  bool weave_when_unsatisfied = false;
};

struct BasisPerturbationReport {
  PerturbationBudget budget;
  bool candidate_is_basis = false;
  std::optional<EquivalenceConstants> equivalence;
  std::optional<WeaveSearchResult> weaving;
  /// Whether every weaving checked is a basis (square and invertible).
  std::optional<bool> all_weavings_bases;
};

/// Budget sum_j ||x0_j - x1_j|| ||x0*_j|| < 1. Throws NotABasis on basis0.
BasisPerturbationReport basis_perturbation_check(const Matrix& basis0, const Matrix& candidate,
                                                 NormKind norm, const PerturbOptions& options = {});

struct OperatorPerturbationReport {
  PerturbationBudget budget;
  PatternConstant suppression;
  std::optional<WeaveSearchResult> weaving;
  std::optional<Certificate> certificate;
  std::vector<std::string> warnings;
};

/// Budget ||Id - T|| < 1 / C_s, weaving f with (T x_i, f_i).
OperatorPerturbationReport operator_perturbation_check(const FrameSystem& f, const Matrix& t,
                                                       const PerturbOptions& options = {});

struct PairPerturbationReport {
  PerturbationBudget budget;
  std::optional<WeaveSearchResult> weaving;
  std::optional<Certificate> certificate;
};

/// Budget sum_i (||f0_i - f1_i|| ||x0_i|| + ||x0_i - x1_i|| ||f1_i||) < 1 / ||S^-1||.
/// Throws NotAFrame on f0.
PairPerturbationReport pair_perturbation_check(const FrameSystem& f0, const FrameSystem& f1,
                                               const PerturbOptions& options = {});

/// The budget sums on their own.
double basis_budget_actual(const Matrix& basis0, const Matrix& candidate, NormKind norm);
double pair_budget_actual(const FrameSystem& f0, const FrameSystem& f1);

/// Patterns used for certification: all of them up to exhaustive_max_dim,
/// otherwise the constant and alternating patterns plus seeded samples.
std::vector<Pattern> certification_patterns(std::size_t n, const PerturbOptions& options,
                                            CertificateScope& scope);

}  // namespace weavelab
