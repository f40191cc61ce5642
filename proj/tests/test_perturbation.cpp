#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "weavelab/gallery.hpp"
#include "weavelab/perturbation.hpp"

using namespace weavelab;
using wltest::Rng;

namespace {

// Random direction with largest entry 1. The budgets below are linear in the
// step along it, so one rescale hits a target value.
Matrix direction(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix e = wltest::random_matrix(rng, rows, cols);
  return e / e.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("basis budget") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = wltest::pick(rng, 2, 6);
    const NormKind k = wltest::random_norm(rng);
    const Matrix b = wltest::random_basis(rng, d);
    const double flipped = basis_budget_actual(b, -b, k);
    CHECK(flipped >= 2.0 - 1e-12);
    CHECK_FALSE(basis_perturbation_check(b, -b, k).budget.satisfied());
    CHECK(basis_budget_actual(b, b, k) == 0.0);

    const Matrix e = direction(rng, d, d);
    const double unit_cost = basis_budget_actual(b, b + e, k);
    const Matrix cand = b + (0.6 / unit_cost) * e;
    const BasisPerturbationReport r = basis_perturbation_check(b, cand, k);
    CHECK(r.budget.actual == doctest::Approx(0.6));
    CHECK(r.budget.satisfied());
    CHECK(r.candidate_is_basis);
    REQUIRE(r.weaving.has_value());
    CHECK(r.weaving->verdict == WeaveVerdict::Woven);
    CHECK(r.all_weavings_bases.value());
  }
  CHECK_THROWS_AS(basis_budget_actual(Matrix::Identity(2, 2), Matrix::Identity(3, 3), NormKind::l1()),
                  InputError);
}

TEST_CASE("budgets scale linearly with a one-sided step") {
  Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = wltest::pick(rng, 2, 5);
    const NormKind k = wltest::random_norm(rng);
    const FrameSystem f = FrameSystem::from_basis(NormedSpace(d, k), wltest::random_basis(rng, d));
    const Matrix e = direction(rng, d, d);
    double last = 0.0;
    for (double t : {0.01, 0.1, 0.5, 1.0}) {
      const FrameSystem g(f.space(), f.vectors(), f.functionals() + t * e);
      const double a = pair_budget_actual(f, g);
      CHECK(a > last);
      CHECK(a == doctest::Approx(t * pair_budget_actual(f, FrameSystem(f.space(), f.vectors(), f.functionals() + e))));
      last = a;
    }
  }
}

TEST_CASE("operator budget certificate") {
  Rng rng(63);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t d = wltest::pick(rng, 2, 6);
    const NormKind k = wltest::random_norm(rng);
    const FrameSystem f = FrameSystem::from_basis(NormedSpace(d, k), wltest::random_basis(rng, d));
    const double cs = suppression_constant(f).value;
    const Matrix e = direction(rng, d, d);
    const Matrix t = Matrix::Identity(d, d) - (0.5 / (cs * wltest::oracle_norm(e, k))) * e;
    const OperatorPerturbationReport r = operator_perturbation_check(f, t);
    CHECK(r.budget.actual == doctest::Approx(0.5 / cs));
    CHECK(r.budget.satisfied());
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->scope == CertificateScope::Exhaustive);
    CHECK(r.certificate->patterns_checked == (std::uint64_t{1} << d));
    CHECK(r.certificate->all_invertible);
    CHECK(r.certificate->holds);
    CHECK(r.certificate->max_deviation <= r.certificate->claimed + 1e-9);
    CHECK(r.certificate->claimed == doctest::Approx(0.5));
  }
}

TEST_CASE("operator budget refuses to certify outside the budget") {
  const FrameSystem f = gallery_system(GalleryName::StandardL1, 3);
  const OperatorPerturbationReport r = operator_perturbation_check(f, 3.0 * Matrix::Identity(3, 3));
  CHECK_FALSE(r.budget.satisfied());
  CHECK_FALSE(r.weaving.has_value());
  CHECK_FALSE(r.certificate.has_value());
  PerturbOptions o;
  o.weave_when_unsatisfied = true;
  const OperatorPerturbationReport w = operator_perturbation_check(f, 3.0 * Matrix::Identity(3, 3), o);
  CHECK(w.weaving.has_value());
  CHECK_FALSE(w.certificate.has_value());
  // boundary: ||I - T|| == 1 / C_s is not strictly inside
  const OperatorPerturbationReport edge = operator_perturbation_check(f, Matrix::Zero(3, 3));
  CHECK(edge.budget.actual == edge.budget.bound);
  CHECK_FALSE(edge.budget.satisfied());
  const OperatorPerturbationReport lp =
      operator_perturbation_check(FrameSystem::from_basis(NormedSpace(3, NormKind::lp(3.0)), Matrix::Identity(3, 3)),
                                  0.9 * Matrix::Identity(3, 3));
  CHECK_FALSE(lp.certificate.has_value());
  CHECK_FALSE(lp.warnings.empty());
}

TEST_CASE("pair budget certificate") {
  Rng rng(64);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t d = wltest::pick(rng, 2, 6);
    const NormKind k = wltest::random_norm(rng);
    const FrameSystem f = FrameSystem::from_basis(NormedSpace(d, k), wltest::random_basis(rng, d));
    const double s_inv = check_approximate_frame(f).s_inv_norm->value;
    const Matrix e = direction(rng, d, d);
    const double unit_cost = pair_budget_actual(f, FrameSystem(f.space(), f.vectors(), f.functionals() + e));
    const FrameSystem g(f.space(), f.vectors(), f.functionals() + (0.5 / (s_inv * unit_cost)) * e);
    const PairPerturbationReport r = pair_perturbation_check(f, g);
    CHECK(r.budget.actual == doctest::Approx(0.5 / s_inv));
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->all_invertible);
    CHECK(r.certificate->holds);
    CHECK(r.certificate->claimed == doctest::Approx(0.5));
  }
}

TEST_CASE("certification patterns") {
  PerturbOptions o;
  CertificateScope scope;
  CHECK(certification_patterns(4, o, scope).size() == 16);
  CHECK(scope == CertificateScope::Exhaustive);
  o.exhaustive_max_dim = 3;
  o.samples = 20;
  const auto p = certification_patterns(20, o, scope);
  CHECK(scope == CertificateScope::Sampled);
  CHECK(p.size() <= 24);
  CHECK(p[0] == Pattern::zeros(20));
  CHECK(p[1] == Pattern::ones(20));
  CHECK(p[2] == Pattern::alternating(20));
  PerturbOptions o2 = o;
  CHECK(certification_patterns(20, o2, scope).size() == p.size());
}
