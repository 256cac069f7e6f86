#include "abvar/cli/json_io.hpp"
#include "abvar/cli/verify.hpp"
#include "fixtures.hpp"
#include "helpers.hpp"

#include <doctest.h>
#include <filesystem>

using namespace abvar;
using namespace fixtures;
using testing_helpers::random_rational;
using testing_helpers::uniform;

namespace {

io::Json through_text(const io::Json& j) { return io::Json::parse(j.dump()); }

ExactComplex round_trip(const ExactComplex& x) { return io::decode_number(through_text(io::encode(x)), 256); }

decompose::DecompositionTree tree_round_trip(const decompose::DecompositionTree& t) {
  return io::decode_tree(through_text(io::encode(t)), kDefaultPrecision);
}

}  // namespace

TEST_SUITE("cli io") {
  TEST_CASE("number encodings round-trip bit-exactly") {
    for (int t = 0; t < 100; ++t) {
      Rational q = random_rational(1000000);
      CHECK(round_trip(ExactComplex(q)) == ExactComplex(q));
      long r = uniform(-50, 50);
      if (r == 0 || r == 1) continue;
      ExactComplex x(quadratic_element(random_rational(99), random_rational(99), r));
      CHECK(round_trip(x) == x);
    }
    Complex z(Real(1L, 256) / Real(3L, 256), sqrt(Real(7L, 256)));
    ExactComplex f(z);
    ExactComplex back = round_trip(f);
    REQUIRE_FALSE(back.is_exact());
    CHECK(back.approx().re == z.re);
    CHECK(back.approx().im == z.im);
    CHECK(io::encode(ExactComplex(make_rational(-3, 4))) == io::Json{{"rat", "-3/4"}});
  }

  TEST_CASE("plain inputs and errors") {
    CHECK(io::decode_rational(io::Json(5)) == 5);
    CHECK(io::decode_rational(io::Json("7/3")) == make_rational(7, 3));
    CHECK_FALSE(io::decode_number(io::Json("0.5+2i"), 128).is_exact());
    CHECK_THROWS_AS(io::decode_rational(io::Json::array()), Error);
    CHECK_THROWS_AS(io::decode_integer(io::Json("1/2")), Error);
    CHECK_THROWS_AS(io::decode_intmatrix(io::Json::parse("[[1,2],[3]]")), Error);
    try {
      io::decode_pav(io::Json{{"schema", "tree/1"}}, 256);
      FAIL("schema mismatch accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
    }
  }

  TEST_CASE("pav round trip and period input") {
    pav::PolarizedAV s = surface();
    pav::PolarizedAV back = io::decode_pav(through_text(io::encode(s)), 256);
    CHECK(back.type == s.type);
    CHECK(back.z == s.z);

    CMatrix pi = hstack(to_complex(diagonal(raw_eleven_type().d)), raw_eleven_z());
    pav::PolarizedAV e = io::decode_pav(io::Json{{"period", io::encode(pi)}}, 256);
    CHECK(e.type == pav::make_type({1, 3}));
    CHECK(e.content == 4);
    pav::PolarizedAV e2 = io::decode_pav(through_text(io::encode(e)), 256);
    CHECK(e2.content == 4);
    CHECK(e2.z == e.z);

    CMatrix bad = pi;
    bad(0, 1) = q(1);
    CHECK_THROWS_AS(io::decode_pav(io::Json{{"period", io::encode(bad)}}, 256), Error);
  }

  TEST_CASE("object round trips") {
    RatMatrix f = surface_f_omega();
    CHECK(io::decode_endo(through_text(io::encode_endo(f))) == f);

    gaction::SymplecticRep rep{pav::make_type({1, 1}), surface_generators(), {}};
    gaction::SymplecticRep rep2 = io::decode_group(through_text(io::encode(rep)));
    CHECK(rep2.e == rep.e);
    CHECK(rep2.generators == rep.generators);

    gaction::RestrictedRep r{pav::make_type({1, 1}), IntMatrix::identity(4), surface_generators()};
    gaction::RestrictedRep r2 = io::decode_restricted(through_text(io::encode(r)));
    CHECK(r2.d == r.d);
    CHECK(r2.p == r.p);
    CHECK(r2.generators == r.generators);

    gaction::FixedRiemannResult fr = gaction::fixed_riemann(r);
    gaction::FixedRiemannResult fr2 = io::decode_riemann(through_text(io::encode(fr)), 256);
    REQUIRE(fr2.points.size() == fr.points.size());
    CHECK(fr2.points[0].z == fr.points[0].z);
    CHECK(fr2.family == fr.family);
    CHECK(fr2.constraints == fr.constraints);

    subvariety::SubvarietyEmbedding e = subvariety::subvariety_period(surface(), f);
    subvariety::SubvarietyEmbedding e2 = io::decode_embedding(through_text(io::encode(e)), 256);
    CHECK(e2.p == e.p);
    CHECK(e2.d == e.d);
    CHECK(e2.w == e.w);
    CHECK(e2.rho_a == e.rho_a);
    CHECK(e2.factor.z == e.factor.z);
    CHECK(e2.factor.content == e.factor.content);
  }

  TEST_CASE("trees round-trip and verify") {
    for (const auto& a : {surface(), pav::build_period(raw_eleven_type(), raw_eleven_z())}) {
      decompose::DecompositionTree t = decompose::poincare_decompose(a);
      decompose::DecompositionTree back = tree_round_trip(t);
      CHECK(io::encode(back) == io::encode(t));
      io::VerifyReport rep = io::verify_tree(back, a);
      CHECK(rep.ok());
      CHECK(rep.checks > 10);
    }
  }

  TEST_CASE("tampering is located") {
    decompose::DecompositionTree t = decompose::poincare_decompose(surface());
    io::Json j = io::encode(t);
    j["root"]["degree"] = 5;
    io::VerifyReport rep = io::verify_tree(io::decode_tree(j, 256), surface());
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.failures[0].node == "root");
    CHECK(rep.failures[0].check == "split degree");

    io::Json k = io::encode(t);
    k["root"]["children"][1]["elliptic"]["transform"][1] = 17;
    io::VerifyReport rep2 = io::verify_tree(io::decode_tree(k, 256), surface());
    REQUIRE_FALSE(rep2.ok());
    CHECK(rep2.failures[0].node == "root/1");

    io::VerifyReport rep3 = io::verify_tree(t, pav::build_period(pav::make_type({1, 1}), diag_z(i_times(1), i_times(1))));
    CHECK_FALSE(rep3.ok());
  }

  TEST_CASE("randomized split-product trees verify") {
    for (int t = 0; t < 5; ++t) {
      ExactComplex z1(quadratic_element(random_rational(3), Rational(uniform(1, 4)), -1));
      ExactComplex z2(Complex(Real(uniform(-9, 9), 256) / Real(7L, 256), sqrt(Real(uniform(2, 30), 256))));
      pav::PolarizedAV a = pav::build_period(pav::make_type({1, 1}), diag_z(z1, z2));
      decompose::DecompositionTree tree = decompose::poincare_decompose(a);
      CHECK(tree.kind == decompose::NodeKind::Split);
      CHECK(io::verify_tree(tree_round_trip(tree), a).ok());
    }
  }

  TEST_CASE("atomic writes") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "abvar_io_test";
    fs::create_directories(dir);
    std::string path = (dir / "out.json").string();
    io::write_json_atomic(path, io::Json{{"a", 1}});
    io::write_json_atomic(path, io::Json{{"a", 2}});
    CHECK(io::read_json(path)["a"] == 2);
    size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    fs::remove_all(dir);
    CHECK_THROWS_AS(io::read_json((dir / "missing.json").string()), Error);
  }
}
