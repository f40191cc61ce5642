#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "weavelab/gallery.hpp"
#include "weavelab/weaving.hpp"

using namespace weavelab;
using wltest::Rng;

namespace {

FrameSystem random_frame(Rng& rng, std::size_t d, std::size_t n, NormKind k) {
  Matrix x = wltest::random_matrix(rng, d, n);
  x.leftCols(static_cast<Eigen::Index>(d)) = wltest::random_basis(rng, d);
  Matrix f = 0.2 * wltest::random_matrix(rng, d, n);
  f.leftCols(static_cast<Eigen::Index>(d)) += biorthogonals(x.leftCols(static_cast<Eigen::Index>(d)));
  return FrameSystem(NormedSpace(d, k), x, f);
}

}  // namespace

TEST_CASE("weaving a system with itself reproduces its frame constant") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = wltest::pick(rng, 1, 4);
    const FrameSystem f = random_frame(rng, d, d + wltest::pick(rng, 0, 3), wltest::random_norm(rng));
    const WeaveSearchResult r = worst_weaving(f, f);
    CHECK(r.worst_constant == check_approximate_frame(f).c_frame);
    CHECK(r.verdict == WeaveVerdict::Woven);
    CHECK(r.worst.code == 0);
  }
}

TEST_CASE("worst weaving matches the brute-force oracle") {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = wltest::pick(rng, 1, 4);
    const std::size_t n = d + wltest::pick(rng, 0, 2);
    const NormKind k = wltest::random_norm(rng);
    const FrameSystem a = random_frame(rng, d, n, k), b = random_frame(rng, d, n, k);
    const WeaveSearchResult r = worst_weaving(a, b);
    const double oracle = wltest::oracle_worst_weaving(a.vectors(), a.functionals(), b.vectors(),
                                                       b.functionals(), k);
    if (std::isinf(oracle)) {
      CHECK(r.verdict == WeaveVerdict::NotWoven);
    } else {
      CHECK(wltest::rel_gap(r.worst_constant, oracle) <= 1e-8);
      const Matrix s = weave(a, b, r.worst).vectors() * weave(a, b, r.worst).functionals().transpose();
      CHECK(wltest::rel_gap(weave_constant(s, k), r.worst_constant) <= 1e-12);
    }
  }
}

TEST_CASE("heuristic weaving is a lower bound that usually meets the exhaustive value") {
  Rng rng(43);
  int met = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const NormKind k = wltest::random_norm(rng);
    const FrameSystem a = random_frame(rng, 4, 8, k), b = random_frame(rng, 4, 8, k);
    WeaveOptions h;
    h.search.mode = SearchMode::Heuristic;
    h.search.seed = 5;
    const WeaveSearchResult ex = worst_weaving(a, b);
    const WeaveSearchResult he = worst_weaving(a, b, h);
    CHECK(he.exactness == Exactness::LowerBound);
    CHECK(he.worst_constant <= ex.worst_constant);
    if (he.worst_constant == ex.worst_constant) ++met;
  }
  CHECK(met >= 15);
}

TEST_CASE("singular and huge weavings are not woven") {
  const NormedSpace sp(2, NormKind::l2());
  const FrameSystem a = FrameSystem::from_basis(sp, Matrix::Identity(2, 2));
  // swapping in (e1, e1^*) for the second pair makes S rank one
  const FrameSystem b(sp, Matrix{{0.0, 1.0}, {0.0, 0.0}}, Matrix{{0.0, 0.0}, {0.0, 0.0}});
  const WeaveSearchResult r = worst_weaving(a, b);
  CHECK(r.verdict == WeaveVerdict::NotWoven);
  CHECK(std::isinf(r.worst_constant));
  CHECK(r.worst.to_string() == "01");

  const FrameSystem tiny = FrameSystem::from_basis(sp, Matrix::Identity(2, 2)).scaled_functionals(1e-9);
  WeaveOptions o;
  o.blow_up_threshold = 1e6;
  CHECK(worst_weaving(tiny, tiny, o).verdict == WeaveVerdict::NotWoven);
  CHECK(worst_weaving(tiny, tiny).verdict == WeaveVerdict::NotWoven);
}

TEST_CASE("pattern logging") {
  const FrameSystem a = gallery_system(GalleryName::StandardC0, 3);
  const FrameSystem b = gallery_system(GalleryName::SummingC0, 3);
  WeaveOptions o;
  o.log_all_patterns = true;
  const WeaveSearchResult r = worst_weaving(a, b, o);
  REQUIRE(r.log.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(r.log[i].pattern.code == i);
    CHECK(std::max(r.log[i].s_norm, r.log[i].s_inv_norm) <= r.worst_constant);
  }
  const FrameSystem big = gallery_system(GalleryName::StandardC0, 13);
  CHECK_THROWS_AS(worst_weaving(big, big, o), InputError);
  CHECK_THROWS_AS(worst_weaving(a, gallery_system(GalleryName::StandardL1, 3)), InputError);
  CHECK_THROWS_AS(worst_weaving(a, gallery_system(GalleryName::StandardC0, 4)), InputError);
}

TEST_CASE("conditional pairs: frozen worst weaving constants") {
  // brute-force values, d = 2..12
  const double expected[] = {2, 4, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  for (std::size_t d = 2; d <= 8; ++d) {
    const FrameSystem e = gallery_system(GalleryName::StandardC0, d);
    const FrameSystem s = gallery_system(GalleryName::SummingC0, d);
    const double oracle = wltest::oracle_worst_weaving(e.vectors(), e.functionals(), s.vectors(),
                                                       s.functionals(), NormKind::linf());
    CHECK(oracle == doctest::Approx(expected[d - 2]).epsilon(1e-12));
    CHECK(worst_weaving(e, s).worst_constant == doctest::Approx(expected[d - 2]).epsilon(1e-12));
    const FrameSystem e1 = gallery_system(GalleryName::StandardL1, d);
    const FrameSystem df = gallery_system(GalleryName::DifferenceL1, d);
    CHECK(worst_weaving(e1, df).worst_constant == doctest::Approx(expected[d - 2]).epsilon(1e-12));
  }
}

TEST_CASE("partial operators") {
  Rng rng(44);
  const FrameSystem a = random_frame(rng, 3, 5, NormKind::l2());
  const FrameSystem b = random_frame(rng, 3, 5, NormKind::l2());
  const Pattern sigma = Pattern::parse("01101");
  const FrameSystem w = weave(a, b, sigma);
  Matrix expect = Matrix::Zero(3, 3);
  for (std::size_t j = 1; j <= 3; ++j) expect += w.term(j);
  CHECK((partial_operator(a, b, sigma, 1, 3).entries() - expect).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((partial_operator(a, b, sigma, 0, 4).entries() - frame_operator(w).entries())
            .cwiseAbs()
            .maxCoeff() <= 1e-14);
  const Matrix sub = partial_operator(a, b, sigma, Pattern::parse("10001")).entries();
  CHECK((sub - w.term(0) - w.term(4)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK_THROWS_AS(partial_operator(a, b, sigma, 3, 1), InputError);
  CHECK_THROWS_AS(partial_operator(a, b, sigma, 0, 5), InputError);
}

TEST_CASE("profiles") {
  const FrameSystem a = gallery_system(GalleryName::StandardL1, 4);
  const FrameSystem b = gallery_system(GalleryName::DifferenceL1, 4);
  const Constant ub = uniform_bound_profile(a, b);
  const Constant lb = lower_bound_profile(a, b);
  CHECK(ub.value >= 1.0);
  CHECK(lb.value > 0.0);
  // the full interval dominates every weaving's S
  CHECK(ub.value >= worst_weaving(a, a).worst_constant);
  Vector x = Vector::Zero(4);
  x(3) = 1.0;
  CHECK(tail_profile(a, b, x, 3) >= 1.0);
  // tails of the standard system self-woven are coordinate projections
  CHECK(tail_profile(a, a, x, 0) == 1.0);
  Vector y = Vector::Zero(4);
  y(0) = 1.0;
  CHECK(tail_profile(a, a, y, 1) == 0.0);
}
