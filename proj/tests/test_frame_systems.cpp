#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "weavelab/frame_system.hpp"
#include "weavelab/gallery.hpp"

using namespace weavelab;
using wltest::Rng;

namespace {

double brute_suppression(const Matrix& x, const Matrix& f, NormKind k) {
  const Matrix s_inv = (x * f.transpose()).inverse();
  const auto n = x.cols();
  double best = 0.0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    Matrix p = Matrix::Zero(x.rows(), x.rows());
    for (Eigen::Index i = 0; i < n; ++i)
      if ((code >> i) & 1U) p += x.col(i) * f.col(i).transpose();
    best = std::max(best, wltest::oracle_norm(p * s_inv, k));
  }
  return best;
}

double brute_unconditional(const Matrix& x, const Matrix& f, NormKind k) {
  const Matrix s_inv = (x * f.transpose()).inverse();
  const auto n = x.cols();
  double best = 0.0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    Matrix p = Matrix::Zero(x.rows(), x.rows());
    for (Eigen::Index i = 0; i < n; ++i)
      p += (((code >> i) & 1U) ? -1.0 : 1.0) * x.col(i) * f.col(i).transpose();
    best = std::max(best, wltest::oracle_norm(p * s_inv, k));
  }
  return best;
}

}  // namespace

TEST_CASE("basis with biorthogonals gives the identity") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = wltest::pick(rng, 1, 10);
    const NormKind k = wltest::random_norm(rng);
    const FrameSystem f = FrameSystem::from_basis(NormedSpace(d, k), wltest::random_basis(rng, d));
    const Matrix s = frame_operator(f).entries();
    CHECK((s - Matrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff() <= 1e-10);
    const Matrix pairing = f.functionals().transpose() * f.vectors();
    CHECK((pairing - Matrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(is_basis(f.vectors()));
  }
  CHECK_THROWS_AS(biorthogonals(Matrix::Zero(3, 3)), NotABasis);
  CHECK_THROWS_AS(biorthogonals(Matrix::Ones(3, 2)), NotABasis);
}

TEST_CASE("frame checks") {
  const NormedSpace sp(2, NormKind::l2());
  const Matrix x{{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}};
  const FrameSystem f(sp, x, x);
  const FrameCheck c = check_approximate_frame(f);
  REQUIRE(c.is_frame());
  // S = x x^T has eigenvalues 1 and 3
  CHECK(c.s_norm.value == doctest::Approx(3.0));
  CHECK(c.s_inv_norm->value == doctest::Approx(1.0));
  CHECK(c.c_frame == doctest::Approx(3.0));

  const FrameSystem degenerate(sp, Matrix{{1.0, 2.0}, {0.0, 0.0}}, Matrix{{1.0, 1.0}, {0.0, 0.0}});
  const FrameCheck bad = check_approximate_frame(degenerate);
  CHECK_FALSE(bad.is_frame());
  CHECK(std::isinf(bad.c_frame));
  CHECK_THROWS_AS(suppression_constant(degenerate), NotAFrame);
  CHECK_THROWS_AS(unconditional_constant(degenerate), NotAFrame);

  CHECK_THROWS_AS(FrameSystem(sp, Matrix::Ones(3, 2), Matrix::Ones(3, 2)), InputError);
  CHECK_THROWS_AS(FrameSystem(sp, Matrix::Ones(2, 2), Matrix::Ones(2, 3)), InputError);
}

TEST_CASE("pattern constants match brute force and are ordered") {
  Rng rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = wltest::pick(rng, 1, 5);
    const std::size_t n = d + wltest::pick(rng, 0, 3);
    const NormKind k = wltest::random_norm(rng);
    const Matrix x = wltest::random_matrix(rng, d, n);
    Matrix f = wltest::random_matrix(rng, d, n);
    f.leftCols(static_cast<Eigen::Index>(d)) += 3.0 * biorthogonals(wltest::random_basis(rng, d));
    const FrameSystem fs(NormedSpace(d, k), x, f);
    if (!check_approximate_frame(fs).is_frame()) continue;
    const PatternConstant cs = suppression_constant(fs);
    const PatternConstant cu = unconditional_constant(fs);
    CHECK(wltest::rel_gap(cs.value, brute_suppression(x, f, k)) <= 1e-8);
    CHECK(wltest::rel_gap(cu.value, brute_unconditional(x, f, k)) <= 1e-8);
    CHECK(cs.value >= 1.0 - 1e-9);
    CHECK(cs.value <= cu.value + 1e-9);
    CHECK(cu.value <= 2.0 * cs.value + 1e-9);
    CHECK(suppression_value(fs, cs.witness) == doctest::Approx(cs.value));
  }
}

TEST_CASE("basis constant agrees with partial-sum enumeration") {
  Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = wltest::pick(rng, 1, 8);
    const NormKind k = wltest::random_norm(rng);
    const Matrix b = wltest::random_basis(rng, d, 1.0);
    const Constant c = basis_constant(b, k);
    CHECK(c.exactness == Exactness::Exact);
    CHECK(wltest::rel_gap(c.value, wltest::oracle_basis_constant(b, k)) <= 1e-9);
    CHECK(c.value >= 1.0 - 1e-9);
  }
  CHECK(basis_constant(Matrix::Identity(4, 4), NormKind::l1()).value == 1.0);
}

TEST_CASE("summing basis constants at d = 2") {
  const FrameSystem f = gallery_system(GalleryName::SummingC0, 2);
  const ConstantReport r = analyze_system(f);
  CHECK(r.basis->value == 2.0);
  CHECK(r.suppression->value == 2.0);
  CHECK(r.unconditional->value == 3.0);
  CHECK(r.frame.c_frame == 1.0);
}

TEST_CASE("single vector systems") {
  const FrameSystem f = FrameSystem::from_basis(NormedSpace(1, NormKind::l1()), Matrix::Constant(1, 1, 4.0));
  CHECK(suppression_constant(f).value == 1.0);
  CHECK(unconditional_constant(f).value == 1.0);
}

TEST_CASE("scaling the functionals scales S") {
  Rng rng(34);
  const FrameSystem f = FrameSystem::from_basis(NormedSpace(3, NormKind::l2()), wltest::random_basis(rng, 3));
  const FrameSystem g = f.scaled_functionals(2.0);
  CHECK((frame_operator(g).entries() - 2.0 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(check_approximate_frame(g).c_frame == doctest::Approx(2.0));
}

TEST_CASE("equivalence constants") {
  Rng rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = wltest::pick(rng, 2, 6);
    const NormKind k = wltest::random_norm(rng);
    const Matrix x = wltest::random_basis(rng, d), y = wltest::random_basis(rng, d);
    const EquivalenceConstants e = equivalence_constants(x, y, k);
    CHECK(wltest::rel_gap(e.upper, wltest::oracle_norm(y * x.inverse(), k)) <= 1e-9);
    CHECK(wltest::rel_gap(1.0 / e.lower, wltest::oracle_norm(x * y.inverse(), k)) <= 1e-9);
    CHECK(e.lower <= e.upper * (1 + 1e-12));
    // c ||X a|| <= ||Y a|| <= C ||X a|| at random coefficients
    const Vector a = wltest::random_matrix(rng, d, 1).col(0);
    const double nx = vector_norm(x * a, k), ny = vector_norm(y * a, k);
    CHECK(e.lower * nx <= ny * (1 + 1e-9));
    CHECK(ny <= e.upper * nx * (1 + 1e-9));
  }
  // standard vs difference basis of l1 at d = 3: column sums of the bidiagonal
  // matrix give 2, its inverse is upper triangular ones with column sum 3
  const EquivalenceConstants sd = equivalence_constants(
      Matrix::Identity(3, 3), gallery_vectors(GalleryName::DifferenceL1, 3), NormKind::l1());
  CHECK(sd.upper == doctest::Approx(2.0));
  CHECK(sd.lower == doctest::Approx(1.0 / 3.0));
  CHECK(diagonal_pairing_min(Matrix::Identity(3, 3), 2.0 * Matrix::Identity(3, 3)) == 0.5);
}

TEST_CASE("square function in the unit vector lattice is the modulus") {
  Rng rng(36);
  const Vector a = wltest::random_matrix(rng, 5, 1).col(0);
  const Vector s = square_function(Matrix::Identity(5, 5), a, Matrix::Identity(5, 5));
  CHECK((s - a.cwiseAbs()).cwiseAbs().maxCoeff() <= 1e-15);
  // two copies of the same vector add in quadrature
  Matrix x(2, 2);
  x << 1.0, 1.0, 0.0, 0.0;
  const Vector t = square_function(x, Vector::Ones(2), Matrix::Identity(2, 2));
  CHECK(t(0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(t(1) == 0.0);
}
