#include "weavelab/weaving.hpp"

#include <cmath>
#include <limits>

namespace weavelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Exactness norm_exactness(NormKind k) {
  return k.tag() == NormKind::Tag::Lp ? Exactness::LowerBound : Exactness::Exact;
}

void require_pattern(const FrameSystem& f, const Pattern& p, const char* what) {
  if (p.n != f.size())
    throw InputError(std::string(what) + ": pattern has length " + std::to_string(p.n) +
                     ", systems have " + std::to_string(f.size()) + " pairs");
}

// Terms restricted to the interval [lo, hi], applied to x when given.
PatternTerms interval_terms(const FrameSystem& f0, const FrameSystem& f1, std::size_t lo,
                            std::size_t hi, const Vector* x) {
  PatternTerms t;
  t.rows = static_cast<Eigen::Index>(f0.dim());
  t.cols = x ? 1 : t.rows;
  for (std::size_t j = lo; j <= hi; ++j) {
    if (x) {
      t.choice0.emplace_back(Matrix(f0.vector(j) * f0.functional(j).dot(*x)));
      t.choice1.emplace_back(Matrix(f1.vector(j) * f1.functional(j).dot(*x)));
    } else {
      t.choice0.emplace_back(f0.term(j));
      t.choice1.emplace_back(f1.term(j));
    }
  }
  return t;
}

}  // namespace

std::string to_string(WeaveVerdict v) { return v == WeaveVerdict::Woven ? "woven" : "not_woven"; }

void require_compatible(const FrameSystem& f0, const FrameSystem& f1) {
  if (!(f0.space() == f1.space()))
    throw InputError("systems live in different spaces (" + std::to_string(f0.dim()) + "," +
                     f0.norm().to_string() + " vs " + std::to_string(f1.dim()) + "," +
                     f1.norm().to_string() + ")");
  if (f0.size() != f1.size())
    throw InputError("systems have different lengths (" + std::to_string(f0.size()) + " vs " +
                     std::to_string(f1.size()) + ")");
}

FrameSystem weave(const FrameSystem& f0, const FrameSystem& f1, const Pattern& sigma) {
  require_compatible(f0, f1);
  require_pattern(f0, sigma, "weave");
  Matrix x = f0.vectors();
  Matrix f = f0.functionals();
  for (std::size_t i = 0; i < sigma.n; ++i) {
    if (!sigma.bit(i)) continue;
    const auto j = static_cast<Eigen::Index>(i);
    x.col(j) = f1.vectors().col(j);
    f.col(j) = f1.functionals().col(j);
  }
  return FrameSystem(f0.space(), std::move(x), std::move(f), "weave[" + sigma.to_string() + "]");
}

PatternTerms weave_terms(const FrameSystem& f0, const FrameSystem& f1) {
  require_compatible(f0, f1);
  return interval_terms(f0, f1, 0, f0.size() - 1, nullptr);
}

DenseOperator partial_operator(const FrameSystem& f0, const FrameSystem& f1, const Pattern& sigma,
                               std::size_t lo, std::size_t hi) {
  require_compatible(f0, f1);
  require_pattern(f0, sigma, "partial_operator");
  if (lo > hi || hi >= f0.size())
    throw InputError("partial_operator: interval [" + std::to_string(lo) + "," +
                     std::to_string(hi) + "] outside 0.." + std::to_string(f0.size() - 1));
  Pattern subset = Pattern::zeros(sigma.n);
  for (std::size_t j = lo; j <= hi; ++j) subset.set(j, true);
  return partial_operator(f0, f1, sigma, subset);
}

DenseOperator partial_operator(const FrameSystem& f0, const FrameSystem& f1, const Pattern& sigma,
                               const Pattern& subset) {
  require_compatible(f0, f1);
  require_pattern(f0, sigma, "partial_operator");
  require_pattern(f0, subset, "partial_operator");
  const PatternTerms all = weave_terms(f0, f1);
  PatternTerms t;
  t.rows = all.rows;
  t.cols = all.cols;
  for (std::size_t j = 0; j < sigma.n; ++j) {
    t.choice0.emplace_back(subset.bit(j) ? all.choice0[j] : std::nullopt);
    t.choice1.emplace_back(subset.bit(j) ? all.choice1[j] : std::nullopt);
  }
  return DenseOperator(t.accumulate(sigma), f0.norm());
}

double weave_constant(const Matrix& s_sigma, NormKind norm) {
  const auto inv = try_invert(s_sigma);
  if (!inv) return kInf;
  return std::max(operator_norm_value(s_sigma, norm), operator_norm_value(*inv, norm));
}

WeaveSearchResult worst_weaving(const FrameSystem& f0, const FrameSystem& f1,
                                const WeaveOptions& options) {
  const PatternTerms terms = weave_terms(f0, f1);
  const NormKind norm = f0.norm();
  const std::size_t n = terms.size();
  WeaveSearchResult out;

  if (options.log_all_patterns) {
    if (n >= 63 || (std::uint64_t{1} << n) > kMaxLoggedPatterns)
      throw InputError("pattern log needs 2^n <= " + std::to_string(kMaxLoggedPatterns));
    for_each_pattern(terms, [&](const Pattern& p, const Matrix& s) {
      const auto inv = try_invert(s);
      out.log.push_back(
          {p, operator_norm_value(s, norm), inv ? operator_norm_value(*inv, norm) : kInf});
    });
  }

  const SearchResult r = maximize_over_patterns(
      terms, [&](const Matrix& s, const Pattern&) { return weave_constant(s, norm); },
      options.search);
  out.worst = r.best;
  out.worst_constant = r.value;
  out.mode = r.mode;
  out.evaluations = r.evaluations;
  out.exactness = r.mode == SearchMode::Exhaustive ? norm_exactness(norm) : Exactness::LowerBound;
  out.verdict = (std::isinf(r.value) || r.value > options.blow_up_threshold)
                    ? WeaveVerdict::NotWoven
                    : WeaveVerdict::Woven;
  return out;
}

double tail_profile(const FrameSystem& f0, const FrameSystem& f1, const Vector& x,
                    std::size_t start) {
  require_compatible(f0, f1);
  const std::size_t n = f0.size();
  if (start >= n)
    throw InputError("tail_profile: start index " + std::to_string(start) + " outside 0.." +
                     std::to_string(n - 1));
  if (static_cast<std::size_t>(x.size()) != f0.dim())
    throw InputError("tail_profile: vector length does not match the space");
  const NormKind norm = f0.norm();
  SearchConfig config;
  config.exhaustive_cap = UINT64_MAX;
  double best = 0.0;
  for (std::size_t m = start; m < n; ++m) {
    for (std::size_t k = m; k < n; ++k) {
      const PatternTerms t = interval_terms(f0, f1, m, k, &x);
      const SearchResult r = maximize_over_patterns(
          t, [&](const Matrix& y, const Pattern&) { return vector_norm(y.col(0), norm); }, config);
      best = std::max(best, r.value);
    }
  }
  return best;
}

Constant uniform_bound_profile(const FrameSystem& f0, const FrameSystem& f1,
                               const SearchConfig& config) {
  require_compatible(f0, f1);
  const std::size_t n = f0.size();
  const NormKind norm = f0.norm();
  Constant out{0.0, norm_exactness(norm)};
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m; k < n; ++k) {
      const PatternTerms t = interval_terms(f0, f1, m, k, nullptr);
      const SearchResult r = maximize_over_patterns(
          t, [&](const Matrix& p, const Pattern&) { return operator_norm_value(p, norm); }, config);
      if (r.mode == SearchMode::Heuristic) out.exactness = Exactness::LowerBound;
      out.value = std::max(out.value, r.value);
    }
  }
  return out;
}

Constant lower_bound_profile(const FrameSystem& f0, const FrameSystem& f1,
                             const SearchConfig& config) {
  const PatternTerms terms = weave_terms(f0, f1);
  const NormKind norm = f0.norm();
  const SearchResult r = maximize_over_patterns(
      terms,
      [&](const Matrix& s, const Pattern&) {
        const auto inv = try_invert(s);
        return inv ? operator_norm_value(*inv, norm) : kInf;
      },
      config);
  // A heuristic finds a lower bound on max ||S^-1||, hence an upper bound on delta.
  Constant out{std::isinf(r.value) ? 0.0 : 1.0 / r.value, norm_exactness(norm)};
  if (r.mode == SearchMode::Heuristic) out.exactness = Exactness::LowerBound;
  return out;
}

}  // namespace weavelab
