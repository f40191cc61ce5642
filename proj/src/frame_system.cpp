#include "weavelab/frame_system.hpp"

#include <cmath>
#include <limits>

namespace weavelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Exactness norm_exactness(NormKind k) {
  return k.tag() == NormKind::Tag::Lp ? Exactness::LowerBound : Exactness::Exact;
}

Exactness worse(Exactness a, Exactness b) {
  return (a == Exactness::Exact && b == Exactness::Exact) ? Exactness::Exact
                                                          : Exactness::LowerBound;
}

PatternTerms all_terms(const FrameSystem& f) {
  PatternTerms t;
  t.rows = t.cols = static_cast<Eigen::Index>(f.dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    t.choice0.emplace_back(f.term(i));
    t.choice1.emplace_back(t.choice0.back());
  }
  return t;
}

Matrix require_frame_inverse(const FrameSystem& f) {
  const FrameCheck check = check_approximate_frame(f);
  if (!check.is_frame())
    throw NotAFrame("frame operator of '" + f.label() + "' is not invertible");
  return *check.s_inverse;
}

PatternConstant pattern_constant(const FrameSystem& f, const SearchConfig& config, bool signs) {
  const Matrix s_inv = require_frame_inverse(f);
  const std::size_t n = f.size();
  const NormKind norm = f.norm();
  PatternConstant out;
  if (n == 1) {
    // Both constants are 1 by definition for a single pair.
    out.value = 1.0;
    out.witness = Pattern::ones(1);
    return out;
  }
  PatternTerms terms;
  terms.rows = terms.cols = static_cast<Eigen::Index>(f.dim());
  for (std::size_t i = 0; i < n; ++i) {
    Matrix t = f.term(i);
    if (signs) {
      terms.choice1.emplace_back(-t);
      terms.choice0.emplace_back(std::move(t));
    } else {
      terms.choice0.emplace_back(std::nullopt);
      terms.choice1.emplace_back(std::move(t));
    }
  }
  const SearchResult r = maximize_over_patterns(
      terms,
      [&](const Matrix& acc, const Pattern&) { return operator_norm_value(acc * s_inv, norm); },
      config, !signs);
  out.value = r.value;
  out.witness = r.best;
  out.mode = r.mode;
  out.exactness = r.mode == SearchMode::Exhaustive ? norm_exactness(norm) : Exactness::LowerBound;
  return out;
}

void require_square_basis(const Matrix& basis, const char* what) {
  require_finite(basis, what);
  if (basis.rows() != basis.cols() || basis.rows() == 0)
    throw NotABasis(std::string(what) + ": expected a square nonempty family");
}

}  // namespace

FrameSystem::FrameSystem(NormedSpace space, Matrix vectors, Matrix functionals, std::string label)
    : space_(space),
      vectors_(std::move(vectors)),
      functionals_(std::move(functionals)),
      label_(std::move(label)) {
  const auto d = static_cast<Eigen::Index>(space_.dim);
  if (vectors_.rows() != d || functionals_.rows() != d)
    throw InputError("frame system '" + label_ + "': vectors and functionals must have length " +
                     std::to_string(space_.dim));
  if (vectors_.cols() != functionals_.cols())
    throw InputError("frame system '" + label_ + "': " + std::to_string(vectors_.cols()) +
                     " vectors but " + std::to_string(functionals_.cols()) + " functionals");
  if (vectors_.cols() == 0) throw InputError("frame system '" + label_ + "': no pairs");
  require_finite(vectors_, "frame system vectors");
  require_finite(functionals_, "frame system functionals");
}

FrameSystem FrameSystem::from_basis(NormedSpace space, Matrix vectors, std::string label) {
  Matrix duals = biorthogonals(vectors);
  return FrameSystem(space, std::move(vectors), std::move(duals), std::move(label));
}

Matrix FrameSystem::term(std::size_t i) const {
  const auto j = static_cast<Eigen::Index>(i);
  return vectors_.col(j) * functionals_.col(j).transpose();
}

FrameSystem FrameSystem::scaled_functionals(double factor) const {
  return FrameSystem(space_, vectors_, functionals_ * factor, label_);
}

DenseOperator frame_operator(const FrameSystem& f) {
  return DenseOperator(all_terms(f).accumulate(Pattern::zeros(f.size())), f.norm());
}

FrameCheck check_approximate_frame(const FrameSystem& f) {
  FrameCheck out;
  const NormKind norm = f.norm();
  out.s = frame_operator(f).entries();
  out.s_norm = operator_norm(out.s, norm);
  out.exactness = out.s_norm.exactness;
  out.s_inverse = try_invert(out.s);
  if (!out.s_inverse) {
    out.c_frame = kInf;
    return out;
  }
  out.s_inv_norm = operator_norm(*out.s_inverse, norm);
  out.exactness = worse(out.exactness, out.s_inv_norm->exactness);
  out.c_frame = std::max(out.s_norm.value, out.s_inv_norm->value);
  return out;
}

bool is_basis(const Matrix& vectors) {
  if (vectors.rows() != vectors.cols() || vectors.rows() == 0) return false;
  return try_invert(vectors).has_value();
}

Matrix biorthogonals(const Matrix& basis) {
  require_square_basis(basis, "biorthogonals");
  auto inv = try_invert(basis);
  if (!inv) throw NotABasis("biorthogonals: vectors are dependent or too ill-conditioned");
  return inv->transpose();
}

Constant basis_constant(const Matrix& basis, NormKind norm) {
  const Matrix duals = biorthogonals(basis);
  const Eigen::Index d = basis.cols();
  Constant out{0.0, norm_exactness(norm)};
  Matrix partial = Matrix::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    partial += basis.col(n) * duals.col(n).transpose();
    out.value = std::max(out.value, operator_norm_value(partial, norm));
  }
  return out;
}

PatternConstant suppression_constant(const FrameSystem& f, const SearchConfig& config) {
  return pattern_constant(f, config, false);
}

PatternConstant unconditional_constant(const FrameSystem& f, const SearchConfig& config) {
  return pattern_constant(f, config, true);
}

double suppression_value(const FrameSystem& f, const Pattern& subset) {
  if (subset.n != f.size()) throw InputError("suppression_value: pattern length mismatch");
  const Matrix s_inv = require_frame_inverse(f);
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(f.dim()), static_cast<Eigen::Index>(f.dim()));
  for (std::size_t i = 0; i < f.size(); ++i)
    if (subset.bit(i)) p += f.term(i);
  return operator_norm_value(p * s_inv, f.norm());
}

Vector square_function(const Matrix& vectors, const Vector& coeffs, const Matrix& lattice) {
  if (vectors.cols() != coeffs.size())
    throw InputError("square_function: " + std::to_string(coeffs.size()) + " coefficients for " +
                     std::to_string(vectors.cols()) + " vectors");
  if (vectors.rows() != lattice.rows())
    throw InputError("square_function: vectors and lattice basis live in different dimensions");
  const Matrix duals = biorthogonals(lattice);
  // coords(j, i) = u_j*(a_i x_i)
  const Matrix coords = duals.transpose() * (vectors * coeffs.asDiagonal());
  const Vector magnitudes = coords.rowwise().norm();
  return lattice * magnitudes;
}

EquivalenceConstants equivalence_constants(const Matrix& basis0, const Matrix& basis1,
                                           NormKind norm) {
  require_square_basis(basis0, "equivalence_constants");
  require_square_basis(basis1, "equivalence_constants");
  if (basis0.rows() != basis1.rows())
    throw InputError("equivalence_constants: bases of different dimension");
  auto inv0 = try_invert(basis0);
  auto inv1 = try_invert(basis1);
  if (!inv0 || !inv1) throw NotABasis("equivalence_constants: input is not a basis");
  const OpNormResult down = operator_norm(Matrix(basis0 * *inv1), norm);
  const OpNormResult up = operator_norm(Matrix(basis1 * *inv0), norm);
  return {1.0 / down.value, up.value, worse(down.exactness, up.exactness)};
}

double diagonal_pairing_min(const Matrix& basis0, const Matrix& basis1) {
  if (basis0.rows() != basis1.rows() || basis0.cols() != basis1.cols())
    throw InputError("diagonal_pairing_min: shape mismatch");
  const Matrix duals1 = biorthogonals(basis1);
  double best = kInf;
  for (Eigen::Index j = 0; j < basis0.cols(); ++j)
    best = std::min(best, std::abs(duals1.col(j).dot(basis0.col(j))));
  return best;
}

ConstantReport analyze_system(const FrameSystem& f, const SearchConfig& config) {
  ConstantReport out;
  out.frame = check_approximate_frame(f);
  if (out.frame.is_frame()) {
    out.suppression = suppression_constant(f, config);
    out.unconditional = unconditional_constant(f, config);
  }
  if (f.size() == f.dim() && is_basis(f.vectors())) out.basis = basis_constant(f.vectors(), f.norm());
  return out;
}

}  // namespace weavelab
