#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "qperm/errors.hpp"
#include "qperm/specs.hpp"

using namespace qperm;
using namespace fixtures;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::NotAState;
}

double coord_gap(const QuantumPermutation& a, const QuantumPermutation& b) {
  return max_abs_diff(a.coords, b.coords);
}

bool same_vector(const std::vector<cplx>& a, const std::vector<cplx>& b) { return a == b; }

}  // namespace

TEST_CASE("group specs build the documented groups") {
  CHECK(magic_from_spec(Json::parse(R"({"kind":"symmetric","n":3})")).n == 3);
  const MagicUnitary kpm = magic_from_spec(Json::parse(R"({"kind":"kac_paljutkin"})"));
  CHECK(kpm.n == 4);
  CHECK(kpm.ambient_dim == 6);

  const MagicUnitary z3 =
      magic_from_spec(Json::parse(R"({"kind":"dual","cayley":[[0,1,2],[1,2,0],[2,0,1]],"identity":0,"generators":[1]})"));
  CHECK(z3.n == 3);
  CHECK(z3.dual.has_value());

  const MagicUnitary s3hat = magic_from_spec(Json::parse(R"({"kind":"dual","permutations":[[2,1,3],[3,2,1]],"label":"S3-hat"})"));
  CHECK(s3hat.n == 4);
  CHECK(s3hat.label == "S3-hat");
  CHECK(s3hat.dual->group.order == 6);

  const MagicUnitary sum = magic_from_spec(
      Json::parse(R"({"kind":"direct_sum","parts":[{"kind":"symmetric","n":2},{"kind":"symmetric","n":3}]})"));
  CHECK(sum.n == 5);
  const MagicUnitary twice = magic_from_spec(Json::parse(R"({"kind":"repeat","part":{"kind":"kac_paljutkin"},"times":2})"));
  CHECK(twice.n == 8);
  CHECK(validate_magic(twice).passed);
}

TEST_CASE("malformed group specs are rejected") {
  const char* bad[] = {
      R"({"kind":"nonsense"})",
      R"({"n":3})",
      R"([1,2])",
      R"({"kind":"symmetric"})",
      R"({"kind":"symmetric","n":-1})",
      R"({"kind":"symmetric","n":9})",
      R"({"kind":"dual","cayley":[[0,1],[0,1]],"identity":0,"generators":[1]})",
      R"({"kind":"dual","cayley":[[0,1,2],[1,2,0],[2,0,1]],"identity":0,"generators":[]})",
      R"({"kind":"dual","permutations":[[1,1,2]]})",
      R"({"kind":"direct_sum","parts":[]})",
      R"({"kind":"repeat","part":{"kind":"kac_paljutkin"},"times":0})",
  };
  for (const char* s : bad) {
    CAPTURE(s);
    CHECK(kind_of([&] { magic_from_spec(Json::parse(s)); }) == ErrorKind::InvalidSpec);
  }
}

TEST_CASE("state specs agree with the direct constructors") {
  const auto h = kp();
  CHECK(coord_gap(state_from_spec(h, Json::parse(R"({"kind":"haar"})")), haar_state(h)) < 1e-12);
  CHECK(coord_gap(state_from_spec(h, Json::parse(R"({"kind":"counit"})")), counit_state(h)) < 1e-12);
  CHECK(coord_gap(state_from_spec(h, Json::parse(R"({"kind":"character","perm":[2,1,3,4]})")),
                  character_state(h, perm1({2, 1, 3, 4}))) < 1e-12);

  Json density{{"kind", "density"}, {"matrix", matrix_to_json(kp_haar_density())}};
  CHECK(coord_gap(state_from_spec(h, density), haar_state(h)) < 1e-10);

  // e₅ as a vector state, real entries given as plain numbers
  const auto e5 = state_from_spec(h, Json::parse(R"({"kind":"vector","coords":[0,0,0,0,1,0]})"));
  const std::vector<cplx> unit5{0, 0, 0, 0, 1, 0};
  CHECK(coord_gap(e5, state_from_vector(h, unit5)) < 1e-12);

  // 1-based events: [4,1] is u₄₁
  const auto cond = state_from_spec(
      h, Json::parse(R"({"kind":"conditioned","base":{"kind":"vector","coords":[[0,0],[0,0],[0,0],[0,0],[1,0],[0,0]]},"events":[[4,1]]})"));
  CHECK(coord_gap(cond, condition(e5, h->generator(3, 0))) < 1e-12);

  const auto mixed = state_from_spec(
      h, Json::parse(R"({"kind":"mix","terms":[{"w":0.25,"state":{"kind":"haar"}},{"w":0.75,"state":{"kind":"counit"}}]})"));
  CHECK(coord_gap(mixed, mix({{0.25, haar_state(h)}, {0.75, counit_state(h)}})) < 1e-12);
}

TEST_CASE("pdf specs accept element indices and permutation keys") {
  const auto h = dual_s3();
  const auto by_perm = state_from_spec(h, Json::parse(R"({"kind":"pdf","values":{
      "[1,2,3]":[1,0], "[2,1,3]":0.5, "[3,2,1]":0.5, "[1,3,2]":-1, "[2,3,1]":-0.5, "[3,1,2]":-0.5}})"));
  CHECK(coord_gap(by_perm, three_fixed_point_state()) < 1e-12);

  const std::vector<cplx> pointwise =
      pdf_values(*h, {{perm1({1, 2, 3}), 1.0}, {perm1({2, 1, 3}), 0.5}, {perm1({3, 2, 1}), 0.5},
                      {perm1({1, 3, 2}), -1.0}, {perm1({2, 3, 1}), -0.5}, {perm1({3, 1, 2}), -0.5}},
                 0.0);
  Json values = Json::object();
  for (std::size_t e = 0; e < pointwise.size(); ++e) values[std::to_string(e)] = complex_to_json(pointwise[e]);
  const auto by_index = state_from_spec(h, Json{{"kind", "pdf"}, {"values", values}});
  CHECK(coord_gap(by_index, by_perm) < 1e-12);
}

TEST_CASE("malformed state specs are rejected") {
  const auto h = kp();
  const char* bad[] = {
      R"({"kind":"wobbly"})",
      R"({"kind":"character","perm":[1,2,3]})",
      R"({"kind":"character","perm":[1,1,2,3]})",
      R"({"kind":"pdf","values":{"0":1}})",
      R"({"kind":"conditioned","base":{"kind":"haar"},"events":[[5,1]]})",
      R"({"kind":"conditioned","base":{"kind":"haar"},"events":[[0,1]]})",
      R"({"kind":"vector","coords":["x"]})",
      R"({"kind":"mix","terms":[]})",
  };
  for (const char* s : bad) {
    CAPTURE(s);
    CHECK(kind_of([&] { state_from_spec(h, Json::parse(s)); }) == ErrorKind::InvalidSpec);
  }
  CHECK(kind_of([&] { state_from_spec(h, Json::parse(R"({"kind":"character","perm":[1,3,2,4]})")); }) !=
        ErrorKind::InvalidSpec);
  CHECK(kind_of([&] { state_from_spec(h, Json::parse(R"({"kind":"vector","coords":[1,1,0,0,0,0]})")); }) !=
        ErrorKind::InvalidSpec);
  CHECK(kind_of([&] {
          state_from_spec(h, Json::parse(R"({"kind":"conditioned","base":{"kind":"counit"},"events":[[2,1]]})"));
        }) == ErrorKind::NullEvent);
}

TEST_CASE("HopfData bundles round-trip exactly") {
  for (const GroupPtr& h : {kp(), dual_s3(), s3()}) {
    CAPTURE(h->magic.label);
    const std::string text = hopf_to_json(*h).dump();
    const HopfData back = hopf_from_json(Json::parse(text));
    CHECK(back.dim == h->dim);
    CHECK(back.basis == h->basis);
    CHECK(back.words == h->words);
    REQUIRE(back.derivations.size() == h->derivations.size());
    for (std::size_t k = 0; k < back.derivations.size(); ++k) {
      CHECK(back.derivations[k].parent == h->derivations[k].parent);
      CHECK(back.derivations[k].letter == h->derivations[k].letter);
      CHECK(same_vector(back.derivations[k].coefficients, h->derivations[k].coefficients));
      CHECK(back.derivations[k].norm == h->derivations[k].norm);
    }
    CHECK(back.mult == h->mult);
    CHECK(back.star == h->star);
    CHECK(back.comult == h->comult);
    CHECK(same_vector(back.counit_vec, h->counit_vec));
    CHECK(back.antipode_mat == h->antipode_mat);
    CHECK(same_vector(back.haar_vec, h->haar_vec));
    REQUIRE(back.blocks.size() == h->blocks.size());
    for (std::size_t b = 0; b < back.blocks.size(); ++b) {
      CHECK(back.blocks[b].dim == h->blocks[b].dim);
      CHECK(back.blocks[b].projection == h->blocks[b].projection);
      CHECK(same_vector(back.blocks[b].coords, h->blocks[b].coords));
      CHECK(back.blocks[b].character == h->blocks[b].character);
    }
    CHECK(back.generator_coords == h->generator_coords);
    CHECK(back.magic.entries == h->magic.entries);
    CHECK(back.magic.classical_points == h->magic.classical_points);
    CHECK(back.magic.dual.has_value() == h->magic.dual.has_value());
    if (h->magic.dual) {
      CHECK(back.magic.dual->group.table == h->magic.dual->group.table);
      CHECK(back.magic.dual->group.elements == h->magic.dual->group.elements);
      CHECK(back.magic.dual->element_ops == h->magic.dual->element_ops);
    }
    // a second pass produces identical text
    CHECK(hopf_to_json(back).dump() == text);
  }
  CHECK(kind_of([] { hopf_from_json(Json::parse(R"({"format":"qperm-hopf/1"})")); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("group cache is keyed by canonical spec") {
  GroupCache cache;
  const auto a = cache.get(Json::parse(R"({"kind":"symmetric","n":3})"));
  const auto b = cache.get(Json::parse(R"({ "n":3, "kind":"symmetric" })"));
  CHECK(a == b);
  CHECK(cache.size() == 1);
  // classical S3 has permutations with 0, 1 and 3 fixed points
  REQUIRE(a->fix_spectrum().values.size() == 3);
  CHECK(std::abs(a->fix_spectrum().values[0] - 0.0) < 1e-9);
  CHECK(std::abs(a->fix_spectrum().values[1] - 1.0) < 1e-9);
  CHECK(std::abs(a->fix_spectrum().values[2] - 3.0) < 1e-9);
  cache.get(Json::parse(R"({"kind":"kac_paljutkin"})"));
  CHECK(cache.size() == 2);
}

TEST_CASE("twelve significant digits") {
  CHECK(sig12(1.0 / 3.0) == 0.333333333333);
  CHECK(sig12(-0.0) == 0.0);
  CHECK(sig12(-3e-17) == 0.0);
  CHECK(sig12(2e-12) == 2e-12);
  CHECK(sig12(0.25) == 0.25);
}
