#include "weavelab/pattern_search.hpp"

#include <cmath>
#include <limits>

#include "weavelab/detail/random.hpp"
#include "weavelab/parallel.hpp"

namespace weavelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sanitize(double v) { return std::isnan(v) ? kInf : v; }

struct Best {
  std::uint64_t code = 0;
  double value = -kInf;
  bool found = false;

  void offer(std::uint64_t c, double v) {
    if (!found || v > value || (v == value && c < code)) {
      code = c;
      value = v;
      found = true;
    }
  }
};

void check_terms(const PatternTerms& terms) {
  if (terms.choice0.size() != terms.choice1.size())
    throw InputError("pattern terms: choice lists differ in length");
  if (terms.size() > kMaxPatternLength)
    throw InputError("pattern length " + std::to_string(terms.size()) + " exceeds " +
                     std::to_string(kMaxPatternLength));
  for (const auto* list : {&terms.choice0, &terms.choice1})
    for (const auto& t : *list)
      if (t && (t->rows() != terms.rows || t->cols() != terms.cols))
        throw InputError("pattern terms: term shape mismatch");
}

void add_term(const std::optional<Matrix>& term, const Matrix& in, Matrix& out) {
  if (term)
    out = in + *term;
  else
    out = in;
}

// Depth-first enumeration of all completions of a fixed prefix, in increasing code order.
void enumerate(const PatternTerms& terms, std::size_t depth, std::uint64_t code,
               std::vector<Matrix>& acc,
               const std::function<void(std::uint64_t, const Matrix&)>& leaf) {
  const std::size_t n = terms.size();
  if (depth == n) {
    leaf(code, acc[depth]);
    return;
  }
  for (int choice = 0; choice < 2; ++choice) {
    const auto& term = choice == 0 ? terms.choice0[depth] : terms.choice1[depth];
    add_term(term, acc[depth], acc[depth + 1]);
    enumerate(terms, depth + 1, (code << 1) | static_cast<std::uint64_t>(choice), acc, leaf);
  }
}

}  // namespace

void Pattern::set(std::size_t i, bool v) {
  const std::uint64_t mask = std::uint64_t{1} << (n - 1 - i);
  code = v ? (code | mask) : (code & ~mask);
}

std::vector<bool> Pattern::bits() const {
  std::vector<bool> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = bit(i);
  return out;
}

std::string Pattern::to_string() const {
  std::string s(n, '0');
  for (std::size_t i = 0; i < n; ++i)
    if (bit(i)) s[i] = '1';
  return s;
}

Pattern Pattern::ones(std::size_t n) {
  return {n, n == 0 ? 0 : (~std::uint64_t{0} >> (64 - n))};
}

Pattern Pattern::from_bits(const std::vector<bool>& bits) {
  if (bits.size() > kMaxPatternLength) throw InputError("pattern too long");
  Pattern p = zeros(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) p.set(i, bits[i]);
  return p;
}

Pattern Pattern::parse(const std::string& text) {
  std::vector<bool> bits;
  for (char c : text) {
    if (c != '0' && c != '1') throw InputError("pattern must be a string of 0 and 1: " + text);
    bits.push_back(c == '1');
  }
  return from_bits(bits);
}

Pattern Pattern::alternating(std::size_t n) {
  Pattern p = zeros(n);
  for (std::size_t i = 1; i < n; i += 2) p.set(i, true);
  return p;
}

Matrix PatternTerms::accumulate(const Pattern& p) const {
  Matrix acc = Matrix::Zero(rows, cols);
  Matrix next(rows, cols);
  for (std::size_t i = 0; i < size(); ++i) {
    add_term(p.bit(i) ? choice1[i] : choice0[i], acc, next);
    std::swap(acc, next);
  }
  return acc;
}

std::string to_string(SearchMode m) { return m == SearchMode::Exhaustive ? "exhaustive" : "heuristic"; }

bool runs_exhaustively(std::size_t n, const SearchConfig& config) {
  if (config.mode != SearchMode::Exhaustive) return false;
  if (n >= 63) return false;
  return (std::uint64_t{1} << n) <= config.exhaustive_cap;
}

void for_each_pattern(const PatternTerms& terms,
                      const std::function<void(const Pattern&, const Matrix&)>& visit) {
  check_terms(terms);
  const std::size_t n = terms.size();
  std::vector<Matrix> acc(n + 1, Matrix::Zero(terms.rows, terms.cols));
  enumerate(terms, 0, 0, acc, [&](std::uint64_t code, const Matrix& m) { visit({n, code}, m); });
}

SearchResult maximize_over_patterns(const PatternTerms& terms, const PatternObjective& objective,
                                    const SearchConfig& config, bool greedy_start) {
  check_terms(terms);
  const std::size_t n = terms.size();
  SearchResult result;

  if (runs_exhaustively(n, config)) {
    const unsigned threads = config.threads == 0 ? worker_count() : config.threads;
    // Split on a prefix of the pattern; tasks are reduced in prefix order.
    std::size_t prefix = 0;
    while (prefix < n && (std::size_t{1} << prefix) < 8 * static_cast<std::size_t>(threads) &&
           threads > 1)
      ++prefix;
    const std::size_t tasks = std::size_t{1} << prefix;
    std::vector<Best> partial(tasks);
    parallel_for(
        tasks,
        [&](std::size_t task) {
          std::vector<Matrix> acc(n + 1, Matrix::Zero(terms.rows, terms.cols));
          for (std::size_t i = 0; i < prefix; ++i) {
            const bool b = ((task >> (prefix - 1 - i)) & 1U) != 0;
            add_term(b ? terms.choice1[i] : terms.choice0[i], acc[i], acc[i + 1]);
          }
          Best& best = partial[task];
          enumerate(terms, prefix, task, acc, [&](std::uint64_t code, const Matrix& m) {
            best.offer(code, sanitize(objective(m, Pattern{n, code})));
          });
        },
        threads);
    Best total;
    for (const auto& b : partial)
      if (b.found) total.offer(b.code, b.value);
    result.best = {n, total.code};
    result.value = total.value;
    result.mode = SearchMode::Exhaustive;
    result.evaluations = n >= 64 ? 0 : (std::uint64_t{1} << n);
    return result;
  }

  result.mode = SearchMode::Heuristic;
  Best global;
  auto evaluate = [&](const Pattern& p) {
    ++result.evaluations;
    const double v = sanitize(objective(terms.accumulate(p), p));
    global.offer(p.code, v);
    return v;
  };

  auto climb = [&](Pattern p) {
    double value = evaluate(p);
    while (true) {
      Pattern best_move = p;
      double best_value = value;
      for (std::size_t i = 0; i < n; ++i) {
        Pattern q = p;
        q.set(i, !p.bit(i));
        const double v = evaluate(q);
        if (v > best_value || (v == best_value && v > value && q.code < best_move.code)) {
          best_value = v;
          best_move = q;
        }
      }
      if (!(best_value > value)) return;
      p = best_move;
      value = best_value;
      if (std::isinf(value)) return;
    }
  };

  climb(Pattern::zeros(n));
  climb(Pattern::ones(n));
  if (greedy_start) {
    Pattern p = Pattern::zeros(n);
    double value = evaluate(p);
    while (true) {
      Pattern best_move = p;
      double best_value = value;
      for (std::size_t i = 0; i < n; ++i) {
        if (p.bit(i)) continue;
        Pattern q = p;
        q.set(i, true);
        const double v = evaluate(q);
        if (v > best_value) {
          best_value = v;
          best_move = q;
        }
      }
      if (!(best_value > value)) break;
      p = best_move;
      value = best_value;
    }
    climb(p);
  }
  detail::Rng rng(config.seed);
  for (int r = 0; r < config.restarts; ++r) {
    Pattern p = Pattern::zeros(n);
    for (std::size_t i = 0; i < n; ++i) p.set(i, detail::coin(rng));
    climb(p);
  }
  result.best = {n, global.code};
  result.value = global.value;
  return result;
}

}  // namespace weavelab
