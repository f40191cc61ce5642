#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "weavelab/frame_system.hpp"
#include "weavelab/pattern_search.hpp"

namespace weavelab {

enum class GalleryName {
  StandardL1,
  StandardC0,
  SummingC0,
  DifferenceL1,
  BlockA0Literal,  // x0_{2n-1} = e_n, taken literally
  BlockA0,         // x0_{2n-1} = e_{2n-1}
  BlockA1,
  SubspaceB0,
  SubspaceB1,
};

/// CLI names: standard-l1, standard-c0, summing, difference-l1,
/// block-a0-literal, block-a0, block-a1, subspace-b0, subspace-b1.
GalleryName parse_gallery_name(std::string_view name);
std::string to_string(GalleryName name);
std::vector<GalleryName> all_gallery_names();

/// l1 or linf (c0 truncation) depending on the construction.
NormKind gallery_norm(GalleryName name);

/// Integer-valued vectors (columns) truncated to R^d. Throws InputError on
/// unsupported d (SubspaceB0 needs even d).
Matrix gallery_vectors(GalleryName name, std::size_t d);

/// The vectors paired with their biorthogonal functionals. Throws NotABasis
/// when the truncated family is not a basis (BlockA0Literal for most d).
FrameSystem gallery_system(GalleryName name, std::size_t d);

/// sigma(i) = i mod 2 counting from 1, i.e. "1010...".
Pattern alternating_weave_pattern(std::size_t d);

/// Tabulated outcome of one of the counterexample pipelines.
struct ReproduceReport {
  std::string name;
  std::vector<std::string> columns;  // first column is "d"
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;
};

/// summing-vs-standard, difference-vs-standard, block-pair, subspace-pair.
std::vector<std::string> reproduce_names();

/// Runs the pipeline for each d in [d0, d1] (subspace-pair uses even d only).
ReproduceReport reproduce(std::string_view name, std::size_t d0, std::size_t d1,
                          const SearchConfig& config = {});

/// First d - 1 vectors e_i + e_{i+1} of the alternating weave of the subspace
/// pair; the truncated last vector is left out since it would add e_d back.
Matrix subspace_alternating_span(std::size_t d);

}  // namespace weavelab
