#pragma once

#include <optional>
#include <vector>

#include "weavelab/frame_system.hpp"
#include "weavelab/pattern_search.hpp"

namespace weavelab {

inline constexpr double kDefaultBlowUpThreshold = 1e8;
/// --log-all-patterns is refused above this many patterns.
inline constexpr std::uint64_t kMaxLoggedPatterns = 4096;

/// Throws InputError unless both systems share space and length.
void require_compatible(const FrameSystem& f0, const FrameSystem& f1);

/// Pair i of the result is pair i of f0 when sigma(i) = 0 and of f1 otherwise.
FrameSystem weave(const FrameSystem& f0, const FrameSystem& f1, const Pattern& sigma);

/// Per-index terms x_i^c f_i^c^T for c = 0, 1.
PatternTerms weave_terms(const FrameSystem& f0, const FrameSystem& f1);

/// sum over j in [lo, hi] (0-based, inclusive) of x_j^sigma(j) f_j^sigma(j)^T.
DenseOperator partial_operator(const FrameSystem& f0, const FrameSystem& f1, const Pattern& sigma,
                               std::size_t lo, std::size_t hi);
/// Same sum over the indices whose bit is set in `subset`.
DenseOperator partial_operator(const FrameSystem& f0, const FrameSystem& f1, const Pattern& sigma,
                               const Pattern& subset);

/// max(||S_sigma||, ||S_sigma^-1||), +inf when S_sigma is not invertible.
double weave_constant(const Matrix& s_sigma, NormKind norm);

struct WeaveOptions {
  SearchConfig search;
  double blow_up_threshold = kDefaultBlowUpThreshold;
  bool log_all_patterns = false;
};

struct PatternLogEntry {
  Pattern pattern;
  double s_norm = 0.0;
  double s_inv_norm = 0.0;  // +inf when not invertible
};

enum class WeaveVerdict { Woven, NotWoven };

std::string to_string(WeaveVerdict v);

struct WeaveSearchResult {
  Pattern worst;
  double worst_constant = 0.0;  // +inf when some weaving is not invertible
  SearchMode mode = SearchMode::Exhaustive;
  Exactness exactness = Exactness::Exact;
  WeaveVerdict verdict = WeaveVerdict::Woven;
  std::uint64_t evaluations = 0;
  std::vector<PatternLogEntry> log;
};

/// Worst weaving constant over all patterns (exhaustive) or a lower bound
/// (heuristic). NotWoven when the worst pattern is singular or its constant
/// exceeds the blow-up threshold; `worst` is then the witness.
WeaveSearchResult worst_weaving(const FrameSystem& f0, const FrameSystem& f1,
                                const WeaveOptions& options = {});

/// max over intervals [m, k] with start <= m <= k < n and all local patterns of
/// ||P_{sigma,[m,k]} x||. `start` is 0-based.
double tail_profile(const FrameSystem& f0, const FrameSystem& f1, const Vector& x,
                    std::size_t start);

/// max over intervals and local patterns of ||P_{sigma,[m,k]}||.
Constant uniform_bound_profile(const FrameSystem& f0, const FrameSystem& f1,
                               const SearchConfig& config = {});

/// min over patterns of 1 / ||S_sigma^-1||; 0 if some weaving is not invertible.
Constant lower_bound_profile(const FrameSystem& f0, const FrameSystem& f1,
                             const SearchConfig& config = {});

}  // namespace weavelab
