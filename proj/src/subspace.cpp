#include "weavelab/subspace.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "weavelab/detail/random.hpp"
#include "weavelab/parallel.hpp"

namespace weavelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRankTol = 1e-10;
constexpr double kRangeTol = 1e-9;

Exactness worse(Exactness a, Exactness b) {
  return (a == Exactness::Exact && b == Exactness::Exact) ? Exactness::Exact
                                                          : Exactness::LowerBound;
}

Pattern complement(const Pattern& p) {
  Pattern q = Pattern::ones(p.n);
  q.code &= ~p.code;
  return q;
}

// Orthonormal basis of the column space.
Matrix orthonormal_range(const Matrix& m) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto r = static_cast<Eigen::Index>(numerical_rank(m, kRankTol));
  return svd.matrixU().leftCols(r);
}

DistanceResult l2_directed(const SpannedSubspace& from, const SpannedSubspace& to) {
  const Matrix qa = orthonormal_range(from.generators());
  const Matrix qb = orthonormal_range(to.generators());
  const Eigen::Index d = qa.rows();
  const Matrix residual = (Matrix::Identity(d, d) - qb * qb.transpose()) * qa;
  Eigen::JacobiSVD<Matrix> svd(residual, Eigen::ComputeThinV);
  const Eigen::Index last = svd.singularValues().size() - 1;
  DistanceResult out;
  out.value = svd.singularValues()(last);
  out.x = qa * svd.matrixV().col(last);
  out.y = qb * (qb.transpose() * out.x);
  return out;
}

}  // namespace

SpannedSubspace::SpannedSubspace(NormedSpace space, Matrix generators, std::string label)
    : space_(space), generators_(std::move(generators)), label_(std::move(label)) {
  if (generators_.rows() != static_cast<Eigen::Index>(space_.dim))
    throw InputError("subspace '" + label_ + "': generators must have length " +
                     std::to_string(space_.dim));
  require_finite(generators_, "subspace generators");
  if (numerical_rank(generators_, kRankTol) != static_cast<std::size_t>(generators_.cols()))
    throw InputError("subspace '" + label_ + "': generators are dependent");
}

SpannedSubspace SpannedSubspace::select(NormedSpace space, const Matrix& basis,
                                        const Pattern& selection, bool bit, std::string label) {
  if (selection.n != static_cast<std::size_t>(basis.cols()))
    throw InputError("subspace selection: pattern length does not match the family");
  std::vector<Eigen::Index> cols;
  for (std::size_t i = 0; i < selection.n; ++i)
    if (selection.bit(i) == bit) cols.push_back(static_cast<Eigen::Index>(i));
  Matrix g(basis.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = basis.col(cols[j]);
  return SpannedSubspace(space, std::move(g), std::move(label));
}

DenseOperator basis_projection(const Matrix& basis, const Matrix& duals, NormKind norm,
                               const Pattern& subset) {
  if (basis.cols() != duals.cols() || basis.rows() != duals.rows())
    throw InputError("basis_projection: basis and duals differ in shape");
  if (subset.n != static_cast<std::size_t>(basis.cols()))
    throw InputError("basis_projection: index set refers to " + std::to_string(subset.n) +
                     " indices, basis has " + std::to_string(basis.cols()));
  Matrix p = Matrix::Zero(basis.rows(), basis.rows());
  for (std::size_t i = 0; i < subset.n; ++i) {
    if (!subset.bit(i)) continue;
    const auto j = static_cast<Eigen::Index>(i);
    p += basis.col(j) * duals.col(j).transpose();
  }
  return DenseOperator(std::move(p), norm);
}

RestrictedInverse restricted_inverse(const Matrix& m, const SpannedSubspace& domain,
                                     const SpannedSubspace& codomain, double cond_cap) {
  if (domain.dim() != codomain.dim())
    throw InputError("restricted_inverse: domain has dimension " + std::to_string(domain.dim()) +
                     ", codomain " + std::to_string(codomain.dim()));
  const auto d = static_cast<Eigen::Index>(domain.space().dim);
  if (m.rows() != d || m.cols() != d) throw InputError("restricted_inverse: operator shape");
  const Matrix& a = domain.generators();
  const Matrix& b = codomain.generators();
  const NormKind norm = domain.space().norm;
  RestrictedInverse out;
  if (domain.dim() == 0) {
    out.coordinates = Matrix(0, 0);
    out.lifted = Matrix::Zero(d, d);
    return out;
  }
  const Matrix image = m * a;
  const auto qr = b.colPivHouseholderQr();
  const Matrix coords = qr.solve(image);
  const double scale = std::max(1.0, image.cwiseAbs().maxCoeff());
  if ((b * coords - image).cwiseAbs().maxCoeff() > kRangeTol * scale)
    throw InputError("restricted_inverse: operator does not map the domain into the codomain");
  auto inv = try_invert(coords, cond_cap);
  if (!inv) throw NotInvertible("restricted operator is singular or too ill-conditioned");
  out.coordinates = *inv;
  const Matrix left_inverse = qr.solve(Matrix::Identity(d, d));
  out.lifted = a * out.coordinates * left_inverse;
  const RatioNormResult r = ratio_norm(Matrix(a * out.coordinates), b, norm);
  out.inverse_norm = r.value;
  out.exactness = r.exactness;
  return out;
}

DistanceResult directed_distance(const SpannedSubspace& from, const SpannedSubspace& to,
                                 int effort) {
  if (!(from.space() == to.space())) throw InputError("subspace_distance: different spaces");
  const auto d = static_cast<Eigen::Index>(from.space().dim);
  const NormKind norm = from.space().norm;
  DistanceResult out;
  if (from.dim() == 0) {
    out.value = kInf;
    return out;
  }
  const auto ka = static_cast<Eigen::Index>(from.dim());
  const auto kb = static_cast<Eigen::Index>(to.dim());
  Matrix joint(d, ka + kb);
  joint << from.generators(), to.generators();
  if (numerical_rank(joint, kRankTol) < static_cast<std::size_t>(ka + kb)) {
    // The subspaces intersect; recover a common vector from the null space.
    Eigen::JacobiSVD<Matrix> svd(joint, Eigen::ComputeFullV);
    const Vector c = svd.matrixV().col(ka + kb - 1);
    out.x = from.generators() * c.head(ka);
    out.x /= vector_norm(out.x, norm);
    out.y = out.x;
    out.value = 0.0;
    return out;
  }
  if (norm.tag() == NormKind::Tag::L2) return l2_directed(from, to);

  // dist = 1 / sup ||A a|| / ||A a - B b||.
  Matrix g = Matrix::Zero(d, ka + kb);
  g.leftCols(ka) = from.generators();
  Matrix w(d, ka + kb);
  w << from.generators(), -to.generators();
  const RatioNormResult r = ratio_norm(g, w, norm, effort);
  const Vector xa = from.generators() * r.witness.head(ka);
  const double xn = vector_norm(xa, norm);
  out.value = 1.0 / r.value;
  out.exactness = r.exactness;
  out.x = xa / xn;
  out.y = to.generators() * r.witness.tail(kb) / xn;
  return out;
}

DistanceResult subspace_distance(const SpannedSubspace& a, const SpannedSubspace& b, int effort) {
  if (a.dim() == 0 && b.dim() == 0) throw InputError("subspace_distance: both subspaces are trivial");
  DistanceResult ab = directed_distance(a, b, effort);
  DistanceResult ba = directed_distance(b, a, effort);
  const Exactness e = worse(ab.exactness, ba.exactness);
  DistanceResult& best = ba.value < ab.value ? ba : ab;
  best.exactness = e;
  return best;
}

DenseOperator oblique_projection(const Matrix& p, const SpannedSubspace& z, NormKind norm) {
  const Matrix range = orthonormal_range(p);
  if (static_cast<std::size_t>(range.cols()) != z.dim())
    throw NotInvertible("oblique_projection: P|_Z cannot be invertible, range of P has dimension " +
                        std::to_string(range.cols()) + " but Z has " + std::to_string(z.dim()));
  const SpannedSubspace y(z.space(), range, "range(P)");
  const RestrictedInverse inv = restricted_inverse(p, z, y);
  return DenseOperator(inv.lifted * p, norm);
}

DenseOperator direct_sum_projection(const ProjectionSplit& p, const ProjectionSplit& q) {
  const NormedSpace space = p.range.space();
  const auto d = static_cast<Eigen::Index>(space.dim);
  const std::size_t k1 = p.range.dim();
  const std::size_t k2 = q.kernel.dim();
  Matrix joint(d, static_cast<Eigen::Index>(k1 + k2));
  joint << p.range.generators(), q.kernel.generators();
  if (numerical_rank(joint, kRankTol) < k1 + k2)
    throw DistanceZero("direct_sum_projection: X1 and Y2 intersect, their distance is 0");
  const Matrix eye = Matrix::Identity(d, d);
  const RestrictedInverse q_on_x1 = restricted_inverse(q.projection, p.range, q.range);
  const Matrix i_minus_p = eye - p.projection;
  const RestrictedInverse ip_on_y2 = restricted_inverse(i_minus_p, q.kernel, p.kernel);
  return DenseOperator(q_on_x1.lifted * q.projection + ip_on_y2.lifted * i_minus_p, space.norm);
}

Constant basic_sequence_constant(const Matrix& w, NormKind norm) {
  require_finite(w, "basic_sequence_constant");
  const Eigen::Index k = w.cols();
  if (k == 0 || numerical_rank(w, kRankTol) < static_cast<std::size_t>(k))
    throw NotABasis("basic_sequence_constant: vectors are dependent");
  Constant out{0.0, Exactness::Exact};
  Matrix g = Matrix::Zero(w.rows(), k);
  for (Eigen::Index n = 0; n < k; ++n) {
    g.col(n) = w.col(n);
    const RatioNormResult r = ratio_norm(g, w, norm);
    out.value = std::max(out.value, r.value);
    out.exactness = worse(out.exactness, r.exactness);
  }
  return out;
}

PatternConstant basic_sequence_unconditional_constant(const Matrix& w, NormKind norm,
                                                      const SearchConfig& config) {
  require_finite(w, "basic_sequence_unconditional_constant");
  const Eigen::Index k = w.cols();
  if (k == 0 || numerical_rank(w, kRankTol) < static_cast<std::size_t>(k))
    throw NotABasis("basic_sequence_unconditional_constant: vectors are dependent");
  PatternTerms terms;
  terms.rows = w.rows();
  terms.cols = k;
  for (Eigen::Index i = 0; i < k; ++i) {
    Matrix t = Matrix::Zero(w.rows(), k);
    t.col(i) = w.col(i);
    terms.choice1.emplace_back(-t);
    terms.choice0.emplace_back(std::move(t));
  }
  const Exactness base = ratio_norm(w, w, norm).exactness;
  const SearchResult r = maximize_over_patterns(
      terms, [&](const Matrix& g, const Pattern&) { return ratio_norm(g, w, norm).value; }, config);
  PatternConstant out;
  out.value = r.value;
  out.witness = r.best;
  out.mode = r.mode;
  out.exactness = r.mode == SearchMode::Exhaustive ? base : Exactness::LowerBound;
  return out;
}

const char* unc_condition_name(std::size_t index) {
  static const char* const names[] = {"i", "ii", "iii", "iv", "v", "vi"};
  return index < 6 ? names[index] : "?";
}

bool UncVerdict::all_agree() const {
  for (const auto& rec : records) {
    std::optional<bool> seen;
    for (std::size_t c = 0; c < 6; ++c) {
      if (!conditions[c].evaluated) continue;
      if (seen && *seen != rec.holds[c]) return false;
      seen = rec.holds[c];
    }
  }
  return true;
}

UncVerdict unc_conditions(const Matrix& basis0, const Matrix& basis1, NormKind norm,
                          const UncOptions& options) {
  if (basis0.rows() != basis1.rows() || basis0.cols() != basis1.cols())
    throw InputError("unc_conditions: bases differ in shape");
  const std::size_t d = static_cast<std::size_t>(basis0.cols());
  const NormedSpace space(d, norm);
  const FrameSystem sys0 = FrameSystem::from_basis(space, basis0, "basis0");
  const FrameSystem sys1 = FrameSystem::from_basis(space, basis1, "basis1");
  const Matrix& duals0 = sys0.functionals();
  const Matrix& duals1 = sys1.functionals();
  const auto dd = static_cast<Eigen::Index>(d);
  const Matrix eye = Matrix::Identity(dd, dd);
  const double threshold = options.threshold;

  UncVerdict out;
  out.basis0_unconditional = unconditional_constant(sys0, options.search).value;
  out.basis1_unconditional = unconditional_constant(sys1, options.search).value;

  std::vector<Pattern> patterns;
  if (d <= options.exhaustive_max_dim) {
    out.scope = UncScope::Exhaustive;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << d); ++code) patterns.push_back({d, code});
  } else {
    out.scope = UncScope::Sampled;
    std::set<std::uint64_t> seen;
    auto add = [&](const Pattern& p) {
      if (seen.insert(p.code).second) patterns.push_back(p);
    };
    add(Pattern::zeros(d));
    add(Pattern::ones(d));
    add(Pattern::alternating(d));
    add(complement(Pattern::alternating(d)));
    detail::Rng rng(options.seed);
    for (std::size_t s = 0; s < options.samples; ++s) {
      Pattern p = Pattern::zeros(d);
      for (std::size_t i = 0; i < d; ++i) p.set(i, detail::coin(rng));
      add(p);
    }
  }

  SearchConfig inner = options.search;
  inner.threads = 1;
  const auto& on = options.enabled;
  out.records.resize(patterns.size());
  std::vector<Exactness> exact(patterns.size(), Exactness::Exact);

  parallel_for(patterns.size(), [&](std::size_t idx) {
    const Pattern& sigma = patterns[idx];
    const Pattern zeros_of_sigma = complement(sigma);
    UncPatternRecord rec;
    rec.sigma = sigma;
    rec.constant.fill(kInf);
    Exactness ex = Exactness::Exact;

    const SpannedSubspace x1 = SpannedSubspace::select(space, basis0, sigma, false, "X1");
    const SpannedSubspace x2 = SpannedSubspace::select(space, basis0, sigma, true, "X2");
    const SpannedSubspace y1 = SpannedSubspace::select(space, basis1, sigma, false, "Y1");
    const SpannedSubspace y2 = SpannedSubspace::select(space, basis1, sigma, true, "Y2");
    const Matrix p = basis_projection(basis0, duals0, norm, zeros_of_sigma).entries();
    const Matrix q = basis_projection(basis1, duals1, norm, zeros_of_sigma).entries();
    const FrameSystem woven = weave(sys0, sys1, sigma);
    const Matrix& w = woven.vectors();

    // (i), (ii): the weaving as a basis with its own biorthogonals.
    if (on[0] || on[1]) {
      if (is_basis(w)) {
        const PatternConstant k =
            unconditional_constant(FrameSystem::from_basis(space, w), inner);
        ex = worse(ex, k.exactness);
        rec.constant[0] = rec.constant[1] = k.value;
      }
    }

    // (vi) and the pieces of the explicit inverse.
    std::optional<RestrictedInverse> p_on_y1, q_on_x1, iq_on_x2, ip_on_y2;
    auto attempt = [&](std::optional<RestrictedInverse>& slot, const Matrix& m,
                       const SpannedSubspace& dom, const SpannedSubspace& cod) {
      try {
        slot = restricted_inverse(m, dom, cod);
        ex = worse(ex, slot->exactness);
      } catch (const NotInvertible&) {
      }
    };
    attempt(p_on_y1, p, y1, x1);
    attempt(q_on_x1, q, x1, y1);
    if (on[5] && p_on_y1 && q_on_x1)
      rec.constant[5] = std::max(p_on_y1->inverse_norm, q_on_x1->inverse_norm);

    // (iii): the woven frame with the original biorthogonals.
    if (on[2]) {
      const Matrix s = frame_operator(woven).entries();
      rec.frame_identity_residual = (s - (p + eye - q)).cwiseAbs().maxCoeff();
      const FrameCheck check = check_approximate_frame(woven);
      if (check.is_frame()) {
        const PatternConstant cu = unconditional_constant(woven, inner);
        ex = worse(ex, worse(check.exactness, cu.exactness));
        rec.constant[2] = std::max(check.c_frame, cu.value);
      }
      attempt(iq_on_x2, eye - q, x2, y2);
      attempt(ip_on_y2, eye - p, y2, x2);
      if (p_on_y1 && q_on_x1 && iq_on_x2 && ip_on_y2) {
        const Matrix t = p_on_y1->lifted * q_on_x1->lifted * q +
                         iq_on_x2->lifted * ip_on_y2->lifted * (eye - p);
        rec.st_residual = (s * t - eye).cwiseAbs().maxCoeff();
        rec.ts_residual = (t * s - eye).cwiseAbs().maxCoeff();
      }
    }

    // (iv): the woven sequence as an unconditional basic sequence.
    if (on[3] && numerical_rank(w, kRankTol) == d) {
      const PatternConstant c = basic_sequence_unconditional_constant(w, norm, inner);
      ex = worse(ex, c.exactness);
      rec.constant[3] = c.value;
    }

    // (v): D = 1 / d(X1, Y2).
    if (on[4]) {
      const DistanceResult dist =
          (x1.dim() == 0 || y2.dim() == 0) ? DistanceResult{1.0, Exactness::Exact, {}, {}}
                                           : subspace_distance(x1, y2);
      ex = worse(ex, dist.exactness);
      rec.constant[4] = dist.value > 0.0 ? 1.0 / dist.value : kInf;
    }

    for (std::size_t c = 0; c < 6; ++c)
      rec.holds[c] = on[c] && std::isfinite(rec.constant[c]) && rec.constant[c] <= threshold;
    out.records[idx] = std::move(rec);
    exact[idx] = ex;
  });

  for (std::size_t c = 0; c < 6; ++c) {
    UncCondition& cond = out.conditions[c];
    cond.evaluated = on[c];
    if (!on[c]) continue;
    bool first = true;
    for (const auto& rec : out.records) {
      if (first || rec.constant[c] > cond.constant) {
        cond.constant = rec.constant[c];
        cond.argmax = rec.sigma;
        first = false;
      }
      if (!rec.holds[c] && !cond.first_failure) cond.first_failure = rec.sigma;
    }
    cond.holds = !cond.first_failure.has_value();
  }
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    const auto& rec = out.records[i];
    out.exactness = worse(out.exactness, exact[i]);
    if (rec.st_residual) out.max_st_residual = std::max({out.max_st_residual, *rec.st_residual, *rec.ts_residual});
    out.max_frame_identity_residual = std::max(out.max_frame_identity_residual, rec.frame_identity_residual);
  }
  return out;
}

}  // namespace weavelab
