#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "weavelab/norms.hpp"

namespace weavelab {

/// A binary pattern of length n. Bit i of the pattern is stored at bit
/// (n - 1 - i) of `code`, so integer order on codes is lexicographic order
/// on the bit string.
struct Pattern {
  std::size_t n = 0;
  std::uint64_t code = 0;

  bool bit(std::size_t i) const { return ((code >> (n - 1 - i)) & 1U) != 0; }
  void set(std::size_t i, bool v);
  std::vector<bool> bits() const;
  /// "0101..." with index 0 first.
  std::string to_string() const;

  static Pattern zeros(std::size_t n) { return {n, 0}; }
  static Pattern ones(std::size_t n);
  static Pattern from_bits(const std::vector<bool>& bits);
  static Pattern parse(const std::string& text);
  /// sigma(i) = i mod 2, i.e. "0101...".
  static Pattern alternating(std::size_t n);

  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.n == b.n && a.code == b.code;
  }
};

/// Largest n for which patterns fit in a code word.
inline constexpr std::size_t kMaxPatternLength = 62;

/// Per index, the matrix contributed by choice 0 and by choice 1. An empty
/// optional contributes nothing. The accumulated matrix for a pattern is the
/// in-order sum of the chosen terms starting from zero, so every search path
/// reproduces the same floating point value for the same pattern.
struct PatternTerms {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<std::optional<Matrix>> choice0;
  std::vector<std::optional<Matrix>> choice1;

  std::size_t size() const { return choice0.size(); }
  Matrix accumulate(const Pattern& p) const;
};

enum class SearchMode { Exhaustive, Heuristic };

std::string to_string(SearchMode m);

struct SearchConfig {
  /// Largest 2^n evaluated exhaustively; beyond it the heuristic is forced.
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 22;
  SearchMode mode = SearchMode::Exhaustive;
  int restarts = 32;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: worker_count()
};

/// Objective on the accumulated matrix. NaN is treated as +inf.
using PatternObjective = std::function<double(const Matrix& accumulated, const Pattern& p)>;

struct SearchResult {
  Pattern best;
  double value = 0.0;
  SearchMode mode = SearchMode::Exhaustive;
  std::uint64_t evaluations = 0;
};

/// Maximizes the objective over {0,1}^n. Exhaustive mode is exact with ties
/// going to the lexicographically smallest pattern, independent of thread
/// count. Heuristic mode is steepest-ascent single-bit-flip hill climbing
/// from the all-zeros and all-ones patterns, an optional greedy start that
/// switches bits on from all-zeros, and `restarts` seeded random patterns.
SearchResult maximize_over_patterns(const PatternTerms& terms, const PatternObjective& objective,
                                    const SearchConfig& config, bool greedy_start = false);

/// Whether maximize_over_patterns would run exhaustively for length n.
bool runs_exhaustively(std::size_t n, const SearchConfig& config);

/// Calls visit(pattern, accumulated) for every pattern in increasing code
/// order, single threaded. Intended for small n (logging, certification).
void for_each_pattern(const PatternTerms& terms,
                      const std::function<void(const Pattern&, const Matrix&)>& visit);

}  // namespace weavelab
