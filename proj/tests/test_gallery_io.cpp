#include <doctest.h>

#include <cmath>
#include <limits>

#include "support.hpp"
#include "weavelab/gallery.hpp"
#include "weavelab/io.hpp"

using namespace weavelab;

TEST_CASE("gallery names round trip") {
  for (GalleryName g : all_gallery_names()) CHECK(parse_gallery_name(to_string(g)) == g);
  CHECK(parse_gallery_name("summing-c0") == GalleryName::SummingC0);
  CHECK_THROWS_AS(parse_gallery_name("nope"), InputError);
}

TEST_CASE("conditional bases: row and column sum oracles") {
  for (std::size_t d = 2; d <= 12; ++d) {
    const Matrix s = gallery_vectors(GalleryName::SummingC0, d);
    const Matrix df = gallery_vectors(GalleryName::DifferenceL1, d);
    CHECK(wltest::oracle_basis_constant(s, NormKind::linf()) == 2.0);
    CHECK(basis_constant(s, NormKind::linf()).value == 2.0);
    // the difference basis is monotone in l1: every partial sum projection has column sums <= 1
    CHECK(wltest::oracle_basis_constant(df, NormKind::l1()) == 1.0);
    CHECK(basis_constant(df, NormKind::l1()).value == 1.0);
  }
}

TEST_CASE("block pair shapes") {
  const std::size_t literal_rank[] = {2, 2, 3, 4, 5, 5, 6, 7, 8};
  for (std::size_t d = 2; d <= 10; ++d)
    CHECK(numerical_rank(gallery_vectors(GalleryName::BlockA0Literal, d)) == literal_rank[d - 2]);
  CHECK_THROWS_AS(gallery_system(GalleryName::BlockA0Literal, 4), NotABasis);
  for (std::size_t d = 1; d <= 10; ++d) {
    CHECK(is_basis(gallery_vectors(GalleryName::BlockA0, d)));
    CHECK(is_basis(gallery_vectors(GalleryName::BlockA1, d)));
  }
  CHECK(alternating_weave_pattern(5).to_string() == "10101");
  const FrameSystem a0 = gallery_system(GalleryName::BlockA0, 4);
  const FrameSystem a1 = gallery_system(GalleryName::BlockA1, 4);
  CHECK(weave(a0, a1, alternating_weave_pattern(4)).vectors() ==
        gallery_vectors(GalleryName::DifferenceL1, 4));
}

TEST_CASE("subspace pair") {
  CHECK_THROWS_AS(gallery_vectors(GalleryName::SubspaceB0, 5), InputError);
  for (std::size_t d = 4; d <= 10; d += 2) {
    CHECK(is_basis(gallery_vectors(GalleryName::SubspaceB0, d)));
    CHECK(is_basis(gallery_vectors(GalleryName::SubspaceB1, d)));
    CHECK(numerical_rank(subspace_alternating_span(d)) == d - 1);
  }
}

TEST_CASE("reproduce tables") {
  const ReproduceReport r = reproduce("summing-vs-standard", 2, 5);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.columns.front() == "d");
  CHECK(r.rows[2][4] == 4.0);
  CHECK(r.notes.back() == "frame-weaving worst constant strictly increasing in d: no");
  const ReproduceReport s = reproduce("subspace-pair", 4, 6);
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[0][1] == doctest::Approx(1.0));
  CHECK(s.rows[0][3] == 0.0);
  CHECK_THROWS_AS(reproduce("other", 2, 3), InputError);
  CHECK_THROWS_AS(reproduce("block-pair", 5, 3), InputError);
}

TEST_CASE("frame system files") {
  const FrameSystem f = gallery_system(GalleryName::SummingC0, 3);
  const FrameSystem g = parse_frame_system(dump_frame_system(f), "mem");
  CHECK(g.vectors() == f.vectors());
  CHECK(g.functionals() == f.functionals());
  CHECK(g.norm() == NormKind::linf());
  const FrameSystem h = parse_frame_system(dump_frame_system(f, false), "mem");
  CHECK((h.functionals() - f.functionals()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(parse_frame_system(dump_frame_system(f), "mem", NormKind::l2()).norm() == NormKind::l2());

  auto message = [](const std::string& text) {
    try {
      parse_frame_system(text, "f.json");
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("{\"dim\": 2,\n \"norm\": }").find("line 2") != std::string::npos);
  CHECK(message(R"({"dim": 2, "norm": "l1", "vectors": [[1, 0], [0]]})").find("row 1 has 1 entries") !=
        std::string::npos);
  CHECK(message(R"({"dim": 2, "norm": "l9", "vectors": [[1, 0], [0, 1]]})") != "");
  CHECK(message(R"({"dim": 2, "norm": "l1", "vectors": [[1, 0]]})") != "");
  CHECK(message(R"({"norm": "l1", "vectors": [[1, 0], [0, 1]]})") != "");
  CHECK_THROWS_AS(parse_frame_system(R"({"dim": 2, "norm": "l1", "vectors": [[1, 1], [1, 1]]})", "x"),
                  InputError);
}

TEST_CASE("hashes and numbers") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(number(1.5) == 1.5);
  const std::string ts = utc_timestamp();
  CHECK(ts.size() == 20);
  CHECK(ts.back() == 'Z');
}

TEST_CASE("serialized verdicts") {
  const Json j = to_json(worst_weaving(gallery_system(GalleryName::StandardC0, 3),
                                       gallery_system(GalleryName::SummingC0, 3)));
  CHECK(j.at("worst_constant") == 4.0);
  CHECK(j.at("verdict") == "woven");
  CHECK(j.at("exactness") == "exact");
}
