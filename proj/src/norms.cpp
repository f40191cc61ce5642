#include "weavelab/norms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "weavelab/detail/random.hpp"

namespace weavelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sign_or_one(double v) { return v < 0.0 ? -1.0 : 1.0; }

double sign_or_zero(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// A vector z of unit dual norm with z.dot(y) == ||y||_kind.
Vector norming_functional(const Vector& y, NormKind kind) {
  const Eigen::Index n = y.size();
  Vector z = Vector::Zero(n);
  switch (kind.tag()) {
    case NormKind::Tag::L1:
      for (Eigen::Index i = 0; i < n; ++i) z(i) = sign_or_zero(y(i));
      break;
    case NormKind::Tag::LInf: {
      Eigen::Index at = 0;
      y.cwiseAbs().maxCoeff(&at);
      if (n > 0) z(at) = sign_or_one(y(at));
      break;
    }
    case NormKind::Tag::L2: {
      const double nrm = y.norm();
      if (nrm > 0.0) z = y / nrm;
      break;
    }
    case NormKind::Tag::Lp: {
      const double p = kind.p();
      const double nrm = vector_norm(y, kind);
      if (nrm > 0.0) {
        for (Eigen::Index i = 0; i < n; ++i)
          z(i) = sign_or_zero(y(i)) * std::pow(std::abs(y(i)) / nrm, p - 1.0);
      }
      break;
    }
  }
  return z;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double column_abs_max(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

double row_abs_max(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double largest_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// Boyd's power iteration for ||A||_{p -> r}; every iterate gives a valid lower bound.
OpNormResult boyd_ascent(const Matrix& a, NormKind domain, NormKind codomain) {
  const Eigen::Index n = a.cols();
  OpNormResult best{0.0, Exactness::LowerBound, Vector::Zero(n)};
  if (n == 0 || a.rows() == 0) return best;
  if (n > 0) best.witness(0) = 1.0;

  detail::Rng rng(0x5eedULL);
  const NormKind domain_dual = domain.dual();
  for (int start = 0; start < kAscentStarts; ++start) {
    Vector x(n);
    if (start < n) {
      x.setZero();
      x(start) = 1.0;
    } else if (start == n) {
      x.setOnes();
    } else {
      for (Eigen::Index i = 0; i < n; ++i) x(i) = detail::uniform(rng, -1.0, 1.0);
    }
    double xn = vector_norm(x, domain);
    if (xn == 0.0) continue;
    x /= xn;
    double value = vector_norm(a * x, codomain);
    for (int iter = 0; iter < 500; ++iter) {
      const Vector y = a * x;
      if (vector_norm(y, codomain) == 0.0) break;
      const Vector z = a.transpose() * norming_functional(y, codomain);
      if (vector_norm(z, domain_dual) == 0.0) break;
      Vector next = norming_functional(z, domain_dual);
      xn = vector_norm(next, domain);
      if (xn == 0.0) break;
      next /= xn;
      const double next_value = vector_norm(a * next, codomain);
      if (!(next_value > value * (1.0 + 1e-15))) {
        if (next_value > value) {
          value = next_value;
          x = next;
        }
        break;
      }
      value = next_value;
      x = next;
    }
    if (value > best.value) {
      best.value = value;
      best.witness = x;
    }
  }
  return best;
}

std::uint64_t saturating_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (r > 1e18L) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(r)));
}

// Calls visit(indices) for every k-subset of {0, ..., n-1} in lexicographic order.
template <class Visit>
void for_each_subset(int n, int k, Visit&& visit) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k > n) return;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

void consider(const Matrix& g, const Matrix& w, NormKind norm, const Vector& c,
              RatioNormResult& best) {
  const double den = vector_norm(w * c, norm);
  if (!(den > 1e-300)) return;
  const double r = vector_norm(g * c, norm) / den;
  if (r > best.value) {
    best.value = r;
    best.witness = c;
  }
}

}  // namespace

NormKind NormKind::linf() { return NormKind(Tag::LInf, kInf); }

NormKind NormKind::lp(double p) {
  if (std::isnan(p) || p < 1.0) throw InputError("lp norm requires p >= 1, got " + format_double(p));
  if (p == 1.0) return l1();
  if (p == 2.0) return l2();
  if (std::isinf(p)) return linf();
  return NormKind(Tag::Lp, p);
}

NormKind NormKind::parse(std::string_view text) {
  if (text == "l1") return l1();
  if (text == "l2") return l2();
  if (text == "linf" || text == "c0") return linf();
  if (text.substr(0, 3) == "lp:") {
    double p = 0.0;
    const auto body = text.substr(3);
    auto res = std::from_chars(body.data(), body.data() + body.size(), p);
    if (res.ec == std::errc() && res.ptr == body.data() + body.size()) return lp(p);
  }
  throw InputError("unknown norm tag '" + std::string(text) +
                   "' (expected l1, l2, linf, c0 or lp:<p>)");
}

NormKind NormKind::dual() const {
  switch (tag_) {
    case Tag::L1:
      return linf();
    case Tag::LInf:
      return l1();
    case Tag::L2:
      return l2();
    case Tag::Lp:
      return lp(p_ / (p_ - 1.0));
  }
  return *this;
}

std::string NormKind::to_string() const {
  switch (tag_) {
    case Tag::L1:
      return "l1";
    case Tag::L2:
      return "l2";
    case Tag::LInf:
      return "linf";
    case Tag::Lp:
      return "lp:" + format_double(p_);
  }
  return "?";
}

NormedSpace::NormedSpace(std::size_t dim_, NormKind norm_) : dim(dim_), norm(norm_) {
  if (dim == 0) throw InputError("NormedSpace: dimension must be at least 1");
}

std::string to_string(Exactness e) { return e == Exactness::Exact ? "exact" : "lower_bound"; }

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) throw InputError(std::string(what) + ": entries must be finite");
}

DenseOperator::DenseOperator(Matrix entries, NormKind domain_norm, NormKind codomain_norm)
    : entries_(std::move(entries)), domain_(domain_norm), codomain_(codomain_norm) {
  require_finite(entries_, "DenseOperator");
}

DenseOperator DenseOperator::identity(std::size_t dim, NormKind norm) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DenseOperator(Matrix::Identity(n, n), norm);
}

DenseOperator DenseOperator::compose(const DenseOperator& rhs) const {
  if (entries_.cols() != rhs.entries_.rows())
    throw InputError("DenseOperator::compose: dimension mismatch");
  if (!(domain_ == rhs.codomain_)) throw InputError("DenseOperator::compose: norm mismatch");
  return DenseOperator(entries_ * rhs.entries_, rhs.domain_, codomain_);
}

double vector_norm(const Vector& v, NormKind kind) {
  if (!v.allFinite()) throw InputError("vector_norm: entries must be finite");
  if (v.size() == 0) return 0.0;
  switch (kind.tag()) {
    case NormKind::Tag::L1:
      return v.cwiseAbs().sum();
    case NormKind::Tag::L2:
      return v.norm();
    case NormKind::Tag::LInf:
      return v.cwiseAbs().maxCoeff();
    case NormKind::Tag::Lp: {
      const double scale = v.cwiseAbs().maxCoeff();
      if (scale == 0.0) return 0.0;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v(i)) / scale, kind.p());
      return scale * std::pow(acc, 1.0 / kind.p());
    }
  }
  return 0.0;
}

double dual_norm(const Vector& f, NormKind kind) { return vector_norm(f, kind.dual()); }

double operator_norm_value(const Matrix& m, NormKind norm) {
  switch (norm.tag()) {
    case NormKind::Tag::L1:
      return column_abs_max(m);
    case NormKind::Tag::LInf:
      return row_abs_max(m);
    case NormKind::Tag::L2:
      return largest_singular_value(m);
    case NormKind::Tag::Lp:
      return boyd_ascent(m, norm, norm).value;
  }
  return 0.0;
}

OpNormResult operator_norm(const DenseOperator& op) {
  const Matrix& m = op.entries();
  const NormKind dom = op.domain_norm();
  const NormKind cod = op.codomain_norm();
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  OpNormResult out{0.0, Exactness::Exact, Vector::Zero(cols)};
  if (cols == 0) return out;
  if (rows == 0) {
    out.witness(0) = 1.0;
    return out;
  }

  if (dom.tag() == NormKind::Tag::L1) {
    // Extreme points of the l1 ball are +-e_j.
    Eigen::Index best = 0;
    if (cod == dom) {
      out.value = column_abs_max(m);
      m.cwiseAbs().colwise().sum().maxCoeff(&best);
    } else {
      for (Eigen::Index j = 0; j < cols; ++j) {
        const double v = vector_norm(m.col(j), cod);
        if (v > out.value || j == 0) {
          out.value = v;
          best = j;
        }
      }
    }
    out.witness(best) = 1.0;
    return out;
  }
  if (cod.tag() == NormKind::Tag::LInf) {
    // ||M|| = max_i ||row_i||_{dual(domain)}, attained at the norming vector of that row.
    Eigen::Index best = 0;
    if (cod == dom) {
      out.value = row_abs_max(m);
      m.cwiseAbs().rowwise().sum().maxCoeff(&best);
      for (Eigen::Index j = 0; j < cols; ++j) out.witness(j) = sign_or_one(m(best, j));
    } else {
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double v = dual_norm(m.row(i).transpose(), dom);
        if (v > out.value || i == 0) {
          out.value = v;
          best = i;
        }
      }
      Vector w = norming_functional(m.row(best).transpose(), dom.dual());
      if (vector_norm(w, dom) == 0.0) w(0) = 1.0;
      out.witness = w;
    }
    return out;
  }
  if (dom.tag() == NormKind::Tag::L2 && cod.tag() == NormKind::Tag::L2) {
    out.value = largest_singular_value(m);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinV);
    out.witness = svd.matrixV().col(0);
    return out;
  }
  return boyd_ascent(m, dom, cod);
}

OpNormResult operator_norm(const Matrix& m, NormKind norm) {
  return operator_norm(DenseOperator(m, norm));
}

double condition_number(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return kInf;
  return s(0) / smin;
}

std::size_t numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0)) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

std::optional<Matrix> try_invert(const Matrix& m, double cond_cap) {
  if (m.rows() != m.cols()) throw InputError("invert: matrix must be square");
  require_finite(m, "invert");
  const Eigen::Index n = m.rows();
  if (n == 0) return Matrix(0, 0);
  if (!(condition_number(m) <= cond_cap)) return std::nullopt;

  const Matrix eye = Matrix::Identity(n, n);
  Matrix inv = m.fullPivLu().inverse();
  double residual = (m * inv - eye).cwiseAbs().maxCoeff();
  // One Newton-Schulz refinement step; kept only if it helps.
  Matrix refined = inv + inv * (eye - m * inv);
  const double refined_residual = (m * refined - eye).cwiseAbs().maxCoeff();
  if (refined_residual < residual) {
    inv = std::move(refined);
    residual = refined_residual;
  }
  if (!(residual <= kInverseResidualTol) || !inv.allFinite()) return std::nullopt;
  return inv;
}

Matrix invert(const Matrix& m, double cond_cap) {
  auto inv = try_invert(m, cond_cap);
  if (!inv) throw NotInvertible("matrix is singular or its condition number exceeds the cap");
  return *std::move(inv);
}

DenseOperator invert(const DenseOperator& m, double cond_cap) {
  return DenseOperator(invert(m.entries(), cond_cap), m.codomain_norm(), m.domain_norm());
}

RatioNormResult ratio_norm_ascent(const Matrix& g, const Matrix& w, NormKind norm, int restarts,
                                  std::uint64_t seed) {
  const Eigen::Index k = w.cols();
  RatioNormResult best{0.0, Exactness::LowerBound, Vector::Zero(k)};
  if (k == 0) return best;
  best.witness(0) = 1.0;

  auto ratio = [&](const Vector& c) {
    const double den = vector_norm(w * c, norm);
    return den > 1e-300 ? vector_norm(g * c, norm) / den : 0.0;
  };

  detail::Rng rng(seed ^ 0xa5ce17ULL);
  for (int start = 0; start < std::max(restarts, 1); ++start) {
    Vector c(k);
    if (start < k) {
      c.setZero();
      c(start) = 1.0;
    } else {
      for (Eigen::Index i = 0; i < k; ++i) c(i) = detail::uniform(rng, -1.0, 1.0);
    }
    if (c.norm() == 0.0) continue;
    c.normalize();
    double value = ratio(c);
    double step = 1.0;
    for (int iter = 0; iter < 2000; ++iter) {
      const Vector gc = g * c;
      const Vector wc = w * c;
      const double num = vector_norm(gc, norm);
      const double den = vector_norm(wc, norm);
      if (num == 0.0 || den == 0.0) break;
      // Gradient (or a subgradient) of log ||Gc|| - log ||Wc||.
      Vector grad = g.transpose() * norming_functional(gc, norm) / num -
                    w.transpose() * norming_functional(wc, norm) / den;
      grad -= c * c.dot(grad);  // ratio is scale invariant; move along the sphere
      const double gn = grad.norm();
      if (!(gn > 1e-15)) break;
      grad /= gn;
      step = std::min(step * 2.0, 1.0);
      bool improved = false;
      while (step > 1e-14) {
        Vector trial = (c + step * grad).normalized();
        const double tv = ratio(trial);
        if (tv > value) {
          c = std::move(trial);
          improved = tv > value * (1.0 + 1e-15);
          value = tv;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (value > best.value) {
      best.value = value;
      best.witness = c;
    }
  }
  return best;
}

RatioNormResult ratio_norm(const Matrix& g, const Matrix& w, NormKind norm, int restarts,
                           std::uint64_t vertex_cap) {
  if (g.cols() != w.cols() || g.rows() != w.rows())
    throw InputError("ratio_norm: G and W must have the same shape");
  require_finite(g, "ratio_norm");
  require_finite(w, "ratio_norm");
  const Eigen::Index k = w.cols();
  const Eigen::Index d = w.rows();
  RatioNormResult best{0.0, Exactness::Exact, Vector::Zero(k)};
  if (k == 0) return best;
  if (numerical_rank(w) < static_cast<std::size_t>(k))
    throw InputError("ratio_norm: W must have full column rank");

  if (k == d) {
    if (auto winv = try_invert(w)) {
      const OpNormResult op = operator_norm(Matrix(g * *winv), norm);
      return {op.value, op.exactness, *winv * op.witness};
    }
  }

  switch (norm.tag()) {
    case NormKind::Tag::L2: {
      Eigen::HouseholderQR<Matrix> qr(w);
      const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
      const Matrix rinv = r.triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));
      const Matrix m = g * rinv;
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinV);
      best.value = svd.singularValues()(0);
      best.witness = rinv * svd.matrixV().col(0);
      return best;
    }
    case NormKind::Tag::L1: {
      // Vertices of {c : ||Wc||_1 <= 1} have W_Z c = 0 on some k-1 independent rows Z.
      const auto count = saturating_binomial(static_cast<std::uint64_t>(d),
                                             static_cast<std::uint64_t>(k - 1));
      if (count > vertex_cap) break;
      if (k == 1) {
        consider(g, w, norm, Vector::Ones(1), best);
        return best;
      }
      Matrix sub(k - 1, k);
      for_each_subset(static_cast<int>(d), static_cast<int>(k - 1), [&](const std::vector<int>& z) {
        for (Eigen::Index r = 0; r < k - 1; ++r) sub.row(r) = w.row(z[static_cast<std::size_t>(r)]);
        Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeFullV);
        consider(g, w, norm, svd.matrixV().col(k - 1), best);
      });
      return best;
    }
    case NormKind::Tag::LInf: {
      // Vertices of {c : ||Wc||_inf <= 1} solve W_S c = s for k independent rows S.
      const auto subsets = saturating_binomial(static_cast<std::uint64_t>(d),
                                               static_cast<std::uint64_t>(k));
      const std::uint64_t signs = k - 1 >= 63 ? UINT64_MAX : (std::uint64_t{1} << (k - 1));
      if (subsets == UINT64_MAX || signs == UINT64_MAX || subsets > vertex_cap / signs) break;
      Matrix sub(k, k);
      Vector rhs(k);
      for_each_subset(static_cast<int>(d), static_cast<int>(k), [&](const std::vector<int>& s) {
        for (Eigen::Index r = 0; r < k; ++r) sub.row(r) = w.row(s[static_cast<std::size_t>(r)]);
        Eigen::FullPivLU<Matrix> lu(sub);
        if (!lu.isInvertible()) return;
        for (std::uint64_t bits = 0; bits < signs; ++bits) {
          rhs(0) = 1.0;
          for (Eigen::Index r = 1; r < k; ++r) rhs(r) = ((bits >> (r - 1)) & 1U) ? -1.0 : 1.0;
          consider(g, w, norm, lu.solve(rhs), best);
        }
      });
      return best;
    }
    case NormKind::Tag::Lp:
      break;
  }
  return ratio_norm_ascent(g, w, norm, restarts);
}

}  // namespace weavelab
