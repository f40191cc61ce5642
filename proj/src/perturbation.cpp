#include "weavelab/perturbation.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "weavelab/detail/random.hpp"
#include "weavelab/parallel.hpp"

namespace weavelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr double kLargeSuppression = 100.0;

struct Deviation {
  bool invertible = false;
  double value = kInf;
};

// For every pattern, invertibility of S_sigma and ||Id - S_sigma S^-1||.
Certificate certify(const FrameSystem& f0, const FrameSystem& f1, const Matrix& s_inv,
                    double claimed, const PerturbOptions& options) {
  Certificate cert;
  cert.claimed = claimed;
  const PatternTerms terms = weave_terms(f0, f1);
  const NormKind norm = f0.norm();
  const auto d = static_cast<Eigen::Index>(f0.dim());
  const Matrix eye = Matrix::Identity(d, d);
  const std::vector<Pattern> patterns = certification_patterns(terms.size(), options, cert.scope);
  std::vector<Deviation> dev(patterns.size());
  parallel_for(patterns.size(), [&](std::size_t i) {
    const Matrix s = terms.accumulate(patterns[i]);
    dev[i].invertible = try_invert(s).has_value();
    dev[i].value = operator_norm_value(eye - s * s_inv, norm);
  });
  cert.patterns_checked = patterns.size();
  bool first = true;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    cert.all_invertible = cert.all_invertible && dev[i].invertible;
    if (first || dev[i].value > cert.max_deviation) {
      cert.max_deviation = dev[i].value;
      cert.worst = patterns[i];
      first = false;
    }
  }
  cert.holds = cert.all_invertible && cert.max_deviation <= claimed + options.slack;
  return cert;
}

}  // namespace

std::string to_string(BudgetKind k) {
  switch (k) {
    case BudgetKind::BasisSum:
      return "basis_sum";
    case BudgetKind::OperatorDeviation:
      return "operator_deviation";
    case BudgetKind::PairSum:
      return "pair_sum";
  }
  return "?";
}

std::vector<Pattern> certification_patterns(std::size_t n, const PerturbOptions& options,
                                            CertificateScope& scope) {
  std::vector<Pattern> out;
  if (n <= options.exhaustive_max_dim) {
    scope = CertificateScope::Exhaustive;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) out.push_back({n, code});
    return out;
  }
  if (n > kMaxPatternLength) throw InputError("certification: pattern length too large");
  scope = CertificateScope::Sampled;
  std::set<std::uint64_t> seen;
  auto add = [&](const Pattern& p) {
    if (seen.insert(p.code).second) out.push_back(p);
  };
  const Pattern alt = Pattern::alternating(n);
  add(Pattern::zeros(n));
  add(Pattern::ones(n));
  add(alt);
  add(Pattern{n, Pattern::ones(n).code & ~alt.code});
  detail::Rng rng(options.seed);
  for (std::size_t s = 0; s < options.samples; ++s) {
    Pattern p = Pattern::zeros(n);
    for (std::size_t i = 0; i < n; ++i) p.set(i, detail::coin(rng));
    add(p);
  }
  return out;
}

double basis_budget_actual(const Matrix& basis0, const Matrix& candidate, NormKind norm) {
  if (basis0.rows() != candidate.rows() || basis0.cols() != candidate.cols())
    throw InputError("basis perturbation: candidate has a different shape");
  require_finite(candidate, "basis perturbation candidate");
  const Matrix duals = biorthogonals(basis0);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < basis0.cols(); ++j)
    sum += vector_norm(basis0.col(j) - candidate.col(j), norm) * dual_norm(duals.col(j), norm);
  return sum;
}

double pair_budget_actual(const FrameSystem& f0, const FrameSystem& f1) {
  require_compatible(f0, f1);
  const NormKind norm = f0.norm();
  double sum = 0.0;
  for (std::size_t i = 0; i < f0.size(); ++i) {
    sum += dual_norm(f0.functional(i) - f1.functional(i), norm) * vector_norm(f0.vector(i), norm);
    sum += vector_norm(f0.vector(i) - f1.vector(i), norm) * dual_norm(f1.functional(i), norm);
  }
  return sum;
}

BasisPerturbationReport basis_perturbation_check(const Matrix& basis0, const Matrix& candidate,
                                                 NormKind norm, const PerturbOptions& options) {
  BasisPerturbationReport out;
  out.budget.kind = BudgetKind::BasisSum;
  out.budget.bound = 1.0;
  out.budget.actual = basis_budget_actual(basis0, candidate, norm);
  out.candidate_is_basis = is_basis(candidate);
  if (out.candidate_is_basis) out.equivalence = equivalence_constants(basis0, candidate, norm);
  if (!out.budget.satisfied() && !options.weave_when_unsatisfied) return out;
  if (!out.candidate_is_basis) return out;

  const NormedSpace space(static_cast<std::size_t>(basis0.rows()), norm);
  const FrameSystem f0 = FrameSystem::from_basis(space, basis0, "basis0");
  const FrameSystem f1 = FrameSystem::from_basis(space, candidate, "candidate");
  out.weaving = worst_weaving(f0, f1, options.weave);
  CertificateScope scope;
  const std::vector<Pattern> patterns = certification_patterns(f0.size(), options, scope);
  std::vector<char> ok(patterns.size(), 0);
  parallel_for(patterns.size(), [&](std::size_t i) {
    ok[i] = is_basis(weave(f0, f1, patterns[i]).vectors()) ? 1 : 0;
  });
  bool all = true;
  for (char c : ok) all = all && c != 0;
  out.all_weavings_bases = all;
  return out;
}

OperatorPerturbationReport operator_perturbation_check(const FrameSystem& f, const Matrix& t,
                                                       const PerturbOptions& options) {
  const auto d = static_cast<Eigen::Index>(f.dim());
  if (t.rows() != d || t.cols() != d) throw InputError("operator perturbation: T has the wrong shape");
  require_finite(t, "operator perturbation T");
  OperatorPerturbationReport out;
  out.suppression = suppression_constant(f, options.weave.search);
  out.budget.kind = BudgetKind::OperatorDeviation;
  out.budget.bound = 1.0 / out.suppression.value;
  out.budget.actual = operator_norm(Matrix(Matrix::Identity(d, d) - t), f.norm()).value;
  const bool exact = out.suppression.exactness == Exactness::Exact;
  if (!exact) out.warnings.push_back("suppression constant is not exact; certificate withheld");
  if (out.suppression.value > kLargeSuppression)
    out.warnings.push_back("suppression constant exceeds 100; the budget is nearly vacuous");

  const bool satisfied = out.budget.satisfied();
  if (!satisfied && !options.weave_when_unsatisfied) return out;
  const FrameSystem moved(f.space(), t * f.vectors(), f.functionals(), f.label() + " (T x_i, f_i)");
  out.weaving = worst_weaving(f, moved, options.weave);
  if (satisfied && exact) {
    const FrameCheck check = check_approximate_frame(f);
    if (!check.is_frame()) throw NotAFrame("operator perturbation: reference system is not a frame");
    out.certificate = certify(f, moved, *check.s_inverse,
                              out.suppression.value * out.budget.actual, options);
  }
  return out;
}

PairPerturbationReport pair_perturbation_check(const FrameSystem& f0, const FrameSystem& f1,
                                               const PerturbOptions& options) {
  require_compatible(f0, f1);
  const FrameCheck check = check_approximate_frame(f0);
  if (!check.is_frame()) throw NotAFrame("pair perturbation: reference system is not a frame");
  PairPerturbationReport out;
  out.budget.kind = BudgetKind::PairSum;
  const double s_inv_norm = check.s_inv_norm->value;
  out.budget.bound = 1.0 / s_inv_norm;
  out.budget.actual = pair_budget_actual(f0, f1);
  const bool satisfied = out.budget.satisfied();
  if (!satisfied && !options.weave_when_unsatisfied) return out;
  out.weaving = worst_weaving(f0, f1, options.weave);
  if (satisfied)
    out.certificate = certify(f0, f1, *check.s_inverse, out.budget.actual * s_inv_norm, options);
  return out;
}

}  // namespace weavelab
