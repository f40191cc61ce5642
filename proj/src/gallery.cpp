#include "weavelab/gallery.hpp"

#include <cmath>
#include <limits>

#include "weavelab/parallel.hpp"
#include "weavelab/subspace.hpp"
#include "weavelab/weaving.hpp"

namespace weavelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NameEntry {
  GalleryName name;
  const char* text;
};

constexpr NameEntry kNames[] = {
    {GalleryName::StandardL1, "standard-l1"},
    {GalleryName::StandardC0, "standard-c0"},
    {GalleryName::SummingC0, "summing"},
    {GalleryName::DifferenceL1, "difference-l1"},
    {GalleryName::BlockA0Literal, "block-a0-literal"},
    {GalleryName::BlockA0, "block-a0"},
    {GalleryName::BlockA1, "block-a1"},
    {GalleryName::SubspaceB0, "subspace-b0"},
    {GalleryName::SubspaceB1, "subspace-b1"},
};

// Sets coordinate i (1-based) of column j (1-based) if it survives truncation.
void put(Matrix& m, std::size_t i, std::size_t j, double v) {
  const auto d = static_cast<std::size_t>(m.rows());
  if (i >= 1 && i <= d && j >= 1 && j <= d)
    m(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) = v;
}

double max_basis_constant_over_weavings(const Matrix& b0, const Matrix& b1, NormKind norm) {
  const std::size_t d = static_cast<std::size_t>(b0.cols());
  const std::uint64_t count = std::uint64_t{1} << d;
  std::vector<double> values(count, 0.0);
  parallel_for(count, [&](std::size_t code) {
    const Pattern p{d, code};
    Matrix w = b0;
    for (std::size_t i = 0; i < d; ++i)
      if (p.bit(i)) w.col(static_cast<Eigen::Index>(i)) = b1.col(static_cast<Eigen::Index>(i));
    values[code] = is_basis(w) ? basis_constant(w, norm).value : kInf;
  });
  double best = 0.0;
  for (double v : values) best = std::max(best, v);
  return best;
}

ReproduceReport conditional_pair(const std::string& name, GalleryName standard,
                                 GalleryName conditional, std::size_t d0, std::size_t d1,
                                 const SearchConfig& config) {
  ReproduceReport out;
  out.name = name;
  out.columns = {"d",
                 "basis_constant_conditional",
                 "basis_constant_standard",
                 "basis_weaving_max_basis_constant",
                 "frame_weaving_worst_constant",
                 "suppression_conditional",
                 "suppression_standard",
                 "frame_constant",
                 "not_woven_below",
                 "worst_exceeds_bound"};
  const NormKind norm = gallery_norm(standard);
  double previous = -kInf;
  bool increasing = true;
  for (std::size_t d = std::max<std::size_t>(d0, 1); d <= d1; ++d) {
    const FrameSystem f0 = gallery_system(standard, d);
    const FrameSystem f1 = gallery_system(conditional, d);
    WeaveOptions opts;
    opts.search = config;
    const WeaveSearchResult worst = worst_weaving(f0, f1, opts);
    const double k = suppression_constant(f0, config).value;
    const double dsup = suppression_constant(f1, config).value;
    const double c = std::max(check_approximate_frame(f0).c_frame, check_approximate_frame(f1).c_frame);
    const double bound = dsup / c - k * c;
    out.rows.push_back({static_cast<double>(d), basis_constant(f1.vectors(), norm).value,
                        basis_constant(f0.vectors(), norm).value,
                        max_basis_constant_over_weavings(f0.vectors(), f1.vectors(), norm),
                        worst.worst_constant, dsup, k, c, bound,
                        worst.worst_constant >= bound ? 1.0 : 0.0});
    if (!(worst.worst_constant > previous)) increasing = false;
    previous = worst.worst_constant;
  }
  out.notes.push_back(std::string("frame-weaving worst constant strictly increasing in d: ") +
                      (increasing ? "yes" : "no"));
  return out;
}

ReproduceReport block_pair(std::size_t d0, std::size_t d1, const SearchConfig& config) {
  ReproduceReport out;
  out.name = "block-pair";
  out.columns = {"d",
                 "rank_literal_a0",
                 "unconditional_a0",
                 "unconditional_a1",
                 "unconditional_alternating_weave",
                 "basis_constant_alternating_weave"};
  const NormKind norm = NormKind::l1();
  for (std::size_t d = std::max<std::size_t>(d0, 1); d <= d1; ++d) {
    const Matrix literal = gallery_vectors(GalleryName::BlockA0Literal, d);
    const FrameSystem a0 = gallery_system(GalleryName::BlockA0, d);
    const FrameSystem a1 = gallery_system(GalleryName::BlockA1, d);
    const Pattern sigma = alternating_weave_pattern(d);
    const Matrix w = weave(a0, a1, sigma).vectors();
    const FrameSystem alt = FrameSystem::from_basis(a0.space(), w, "alternating");
    out.rows.push_back({static_cast<double>(d), static_cast<double>(numerical_rank(literal)),
                        unconditional_constant(a0, config).value,
                        unconditional_constant(a1, config).value,
                        unconditional_constant(alt, config).value, basis_constant(w, norm).value});
    if (d == 4) {
      const Matrix diff = gallery_vectors(GalleryName::DifferenceL1, 4);
      out.notes.push_back(std::string("alternating weave at d=4 equals the difference basis: ") +
                          (w == diff ? "yes" : "no"));
    }
  }
  return out;
}

ReproduceReport subspace_pair(std::size_t d0, std::size_t d1) {
  ReproduceReport out;
  out.name = "subspace-pair";
  out.columns = {"d",
                 "distance_e1_to_alternating_span",
                 "alternating_span_rank",
                 "dependent_weavings",
                 "max_basic_sequence_constant"};
  const NormKind norm = NormKind::l1();
  for (std::size_t d = std::max<std::size_t>(d0, 2); d <= d1; ++d) {
    if (d % 2 != 0) continue;
    const NormedSpace space(d, norm);
    const Matrix span = subspace_alternating_span(d);
    Matrix e1 = Matrix::Zero(static_cast<Eigen::Index>(d), 1);
    e1(0, 0) = 1.0;
    const DistanceResult dist =
        directed_distance(SpannedSubspace(space, e1, "e1"), SpannedSubspace(space, span, "alt"));
    const Matrix b0 = gallery_vectors(GalleryName::SubspaceB0, d);
    const Matrix b1 = gallery_vectors(GalleryName::SubspaceB1, d);
    const std::uint64_t count = std::uint64_t{1} << d;
    std::vector<double> constants(count, kInf);
    parallel_for(count, [&](std::size_t code) {
      const Pattern p{d, code};
      Matrix w = b0;
      for (std::size_t i = 0; i < d; ++i)
        if (p.bit(i)) w.col(static_cast<Eigen::Index>(i)) = b1.col(static_cast<Eigen::Index>(i));
      try {
        constants[code] = basic_sequence_constant(w, norm).value;
      } catch (const NotABasis&) {
      }
    });
    double dependent = 0.0;
    double worst = 0.0;
    for (double c : constants) {
      if (std::isinf(c)) dependent += 1.0;
      worst = std::max(worst, c);
    }
    out.rows.push_back({static_cast<double>(d), dist.value,
                        static_cast<double>(numerical_rank(span)), dependent, worst});
  }
  return out;
}

}  // namespace

GalleryName parse_gallery_name(std::string_view name) {
  for (const auto& e : kNames)
    if (name == e.text) return e.name;
  if (name == "summing-c0") return GalleryName::SummingC0;
  std::string known;
  for (const auto& e : kNames) known += std::string(known.empty() ? "" : ", ") + e.text;
  throw InputError("unknown gallery system '" + std::string(name) + "' (known: " + known + ")");
}

std::string to_string(GalleryName name) {
  for (const auto& e : kNames)
    if (e.name == name) return e.text;
  return "?";
}

std::vector<GalleryName> all_gallery_names() {
  std::vector<GalleryName> out;
  for (const auto& e : kNames) out.push_back(e.name);
  return out;
}

NormKind gallery_norm(GalleryName name) {
  switch (name) {
    case GalleryName::StandardC0:
    case GalleryName::SummingC0:
      return NormKind::linf();
    default:
      return NormKind::l1();
  }
}

Matrix gallery_vectors(GalleryName name, std::size_t d) {
  if (d == 0) throw InputError("gallery: dimension must be at least 1");
  if (name == GalleryName::SubspaceB0 && d % 2 != 0)
    throw InputError("gallery: subspace-b0 needs an even dimension, got " + std::to_string(d));
  const auto n = static_cast<Eigen::Index>(d);
  Matrix m = Matrix::Zero(n, n);
  switch (name) {
    case GalleryName::StandardL1:
    case GalleryName::StandardC0:
      m.setIdentity();
      break;
    case GalleryName::SummingC0:
      for (std::size_t j = 1; j <= d; ++j)
        for (std::size_t i = 1; i <= j; ++i) put(m, i, j, 1.0);
      break;
    case GalleryName::DifferenceL1:
      for (std::size_t j = 1; j <= d; ++j) {
        put(m, j, j, 1.0);
        if (j > 1) put(m, j - 1, j, -1.0);
      }
      break;
    case GalleryName::BlockA0Literal:
    case GalleryName::BlockA0:
      for (std::size_t j = 1; j <= d; ++j) {
        if (j % 2 == 1) {
          const std::size_t k = name == GalleryName::BlockA0Literal ? (j + 1) / 2 : j;
          put(m, k, j, 1.0);
        } else {
          put(m, j, j, 1.0);
          put(m, j - 1, j, -1.0);
        }
      }
      break;
    case GalleryName::BlockA1:
      for (std::size_t j = 1; j <= d; ++j) {
        put(m, j, j, 1.0);
        if (j >= 3 && j % 2 == 1) put(m, j - 1, j, -1.0);
      }
      break;
    case GalleryName::SubspaceB0:
      for (std::size_t j = 1; j <= d; ++j) {
        if (j % 2 == 1) {
          put(m, j, j, 1.0);
          put(m, j + 1, j, 1.0);
        } else {
          put(m, j - 1, j, 1.0);
          put(m, j, j, -1.0);
        }
      }
      break;
    case GalleryName::SubspaceB1:
      put(m, 1, 1, 1.0);
      for (std::size_t j = 2; j <= d; ++j) {
        if (j % 2 == 0) {
          put(m, j, j, 1.0);
          put(m, j + 1, j, 1.0);
        } else {
          put(m, j - 1, j, 1.0);
          put(m, j, j, -1.0);
        }
      }
      break;
  }
  return m;
}

FrameSystem gallery_system(GalleryName name, std::size_t d) {
  const NormedSpace space(d, gallery_norm(name));
  Matrix v = gallery_vectors(name, d);
  if (!is_basis(v))
    throw NotABasis("gallery system " + to_string(name) + " is not a basis at d=" +
                    std::to_string(d) + " (rank " + std::to_string(numerical_rank(v)) + ")");
  return FrameSystem::from_basis(space, std::move(v), to_string(name));
}

Pattern alternating_weave_pattern(std::size_t d) {
  Pattern p = Pattern::zeros(d);
  for (std::size_t i = 0; i < d; i += 2) p.set(i, true);
  return p;
}

Matrix subspace_alternating_span(std::size_t d) {
  if (d < 2) throw InputError("subspace span needs d >= 2");
  const auto n = static_cast<Eigen::Index>(d);
  Matrix m = Matrix::Zero(n, n - 1);
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    m(j, j) = 1.0;
    m(j + 1, j) = 1.0;
  }
  return m;
}

std::vector<std::string> reproduce_names() {
  return {"summing-vs-standard", "difference-vs-standard", "block-pair", "subspace-pair"};
}

ReproduceReport reproduce(std::string_view name, std::size_t d0, std::size_t d1,
                          const SearchConfig& config) {
  if (d0 > d1) throw InputError("reproduce: empty dimension range");
  if (d1 > kMaxPatternLength) throw InputError("reproduce: dimension too large");
  if (name == "summing-vs-standard")
    return conditional_pair(std::string(name), GalleryName::StandardC0, GalleryName::SummingC0, d0,
                            d1, config);
  if (name == "difference-vs-standard")
    return conditional_pair(std::string(name), GalleryName::StandardL1, GalleryName::DifferenceL1,
                            d0, d1, config);
  if (name == "block-pair") return block_pair(d0, d1, config);
  if (name == "subspace-pair") return subspace_pair(d0, d1);
  throw InputError("unknown reproduce target '" + std::string(name) + "'");
}

}  // namespace weavelab
