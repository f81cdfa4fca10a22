#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hubnet/instance.hpp"
#include "testutil.hpp"

using namespace hubnet;

namespace {

Instance load_cab(int n, double alpha, Policy pol = Policy::MA,
                  ModelKind kind = ModelKind::HMedian) {
  std::ifstream in(std::string(HUBNET_DATA_DIR) + "/cab10.txt");
  REQUIRE(in.good());
  return parse_cab(in, n, alpha, 1.0, 1.0, pol, kind);
}

}  // namespace

TEST_SUITE("instance") {

TEST_CASE("ten node fixture facts") {
  Instance inst = load_cab(10, 0.8);
  CHECK(inst.n == 10);
  CHECK(inst.c(0, 1) == 414.0);
  CHECK(inst.c(1, 0) == 414.0);
  CHECK(inst.w(4, 8) == 6469.0);
  CHECK(inst.w(0, 1) == 34.0);
  for (int i = 0; i < 10; ++i) {
    CHECK(inst.c(i, i) == 0.0);
    CHECK(inst.w(i, i) == 0.0);
  }
  CHECK(inst.O[0] == 1117.0);
  CHECK(inst.Wbar == 38426.0);
  CHECK(inst.arcs() == 90);
  CHECK(inst.edges() == 45);
  // every ordered pair ships something in this data set
  CHECK(commodities(inst).size() == 90);

  // spelled-out check of one crossing-demand value used elsewhere
  std::vector<int> S{2, 4, 5, 6, 7, 9};
  CHECK(cut_demand(inst, S) == 10586.0);
  // this data set is symmetric, so the reverse direction matches
  CHECK(cut_demand(inst, {0, 1, 3, 8}) == 10586.0);
}

TEST_CASE("slicing keeps the leading block aligned") {
  Instance inst = load_cab(6, 0.5);
  CHECK(inst.n == 6);
  CHECK(inst.w(4, 5) == 3746.0);
  CHECK(inst.c(2, 3) == 1738.0);
  CHECK(inst.O[0] == 640.0);
  CHECK(inst.Wbar == 12490.0);
}

TEST_CASE("standard edge setup costs") {
  Instance inst = load_cab(10, 0.8, Policy::MA, ModelKind::GMedian);
  derive_setup_costs(inst, SetupCostMode::Standard);
  CHECK(inst.G(0, 1) == doctest::Approx(38426.0 * 414.0 / 100.0));
  CHECK(inst.G(0, 1) == inst.G(1, 0));
  for (int i = 0; i < 10; ++i) CHECK(inst.G(i, i) == 0.0);
}

TEST_CASE("flow bounded derivation rescales hub costs") {
  Instance inst = load_cab(10, 0.8, Policy::MA, ModelKind::GFlowBounded);
  derive_setup_costs(inst, SetupCostMode::Standard);
  inst.F.assign(10, 50.0);
  derive_setup_costs(inst, SetupCostMode::FlowBounded);
  CHECK(inst.ell(0, 1) == 25.0 * (34.0 + 34.0));
  CHECK(inst.ell(4, 8) == 25.0 * (6469.0 + 6469.0));
  CHECK(inst.F[3] == 5.0);
}

TEST_CASE("canonical round trip is exact") {
  std::mt19937 rng(20240811);
  for (ModelKind kind :
       {ModelKind::HMedian, ModelKind::GMedian, ModelKind::GFlowBounded}) {
    for (Policy pol : {Policy::SA, Policy::MA}) {
      Instance a = testutil::random_instance(rng, 5, pol, kind);
      std::stringstream ss;
      write_canonical(ss, a);
      Instance b = parse_canonical(ss);
      CHECK(b.n == a.n);
      CHECK(b.alpha == a.alpha);
      CHECK(b.policy == a.policy);
      CHECK(b.kind == a.kind);
      CHECK(b.c == a.c);
      CHECK(b.w == a.w);
      CHECK(b.F == a.F);
      CHECK(b.Wbar == a.Wbar);
      if (kind != ModelKind::HMedian) CHECK(b.G == a.G);
      if (kind == ModelKind::GFlowBounded) CHECK(b.ell == a.ell);
    }
  }
}

TEST_CASE("parser rejects malformed data") {
  auto expect_throw = [](const std::string& text) {
    std::stringstream ss(text);
    CHECK_THROWS_AS(parse_canonical(ss), InstanceError);
  };
  // NaN entry
  expect_throw(
      "3 0.5 1 1 ma h\n0 1 nan\n1 0 1\n1 1 0\n0 1 1\n1 0 1\n1 1 0\n1 1 1\n");
  // negative demand
  expect_throw(
      "3 0.5 1 1 ma h\n0 1 1\n1 0 1\n1 1 0\n0 -1 1\n1 0 1\n1 1 0\n1 1 1\n");
  // nonzero cost diagonal
  expect_throw(
      "3 0.5 1 1 ma h\n2 1 1\n1 0 1\n1 1 0\n0 1 1\n1 0 1\n1 1 0\n1 1 1\n");
  // demand support splits into two islands
  expect_throw(
      "4 0.5 1 1 ma h\n0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n"
      "0 1 0 0\n1 0 0 0\n0 0 0 1\n0 0 1 0\n1 1 1 1\n");
  // flow-bounded header with a truncated stream (no ell block)
  expect_throw(
      "3 0.5 1 1 ma gfb\n0 1 1\n1 0 1\n1 1 0\n0 1 1\n1 0 1\n1 1 0\n1 1 1\n");
  // unknown tokens
  expect_throw("3 0.5 1 1 xx h\n");
  expect_throw("3 0.5 1 1 ma q\n");
  // too small
  expect_throw(
      "2 0.5 1 1 ma h\n0 1\n1 0\n0 1\n1 0\n1 1\n");
}

TEST_CASE("raw slice larger than the data throws") {
  std::ifstream in(std::string(HUBNET_DATA_DIR) + "/cab10.txt");
  REQUIRE(in.good());
  CHECK_THROWS_AS(parse_cab(in, 12, 0.8, 1.0, 1.0, Policy::MA, ModelKind::HMedian),
                  InstanceError);
}

TEST_CASE("coordinate layout gives plane distances") {
  // 3-4-5 triangle on the first three points, plus a fourth point so the
  // slice actually has to skip tokens
  std::string raw =
      "4\n"
      "0 0\n3 0\n0 4\n3 4\n"
      "0 1 2 3\n"
      "1 0 5 6\n"
      "2 5 0 7\n"
      "3 6 7 0\n";
  std::stringstream ss(raw);
  Instance inst = parse_ap(ss, 3, 0.6, 1.0, 1.0, Policy::SA, ModelKind::HMedian);
  CHECK(inst.n == 3);
  CHECK(inst.c(0, 1) == doctest::Approx(3.0));
  CHECK(inst.c(0, 2) == doctest::Approx(4.0));
  CHECK(inst.c(1, 2) == doctest::Approx(5.0));
  CHECK(inst.w(1, 2) == 5.0);
  CHECK(inst.O[0] == 3.0);
  CHECK(inst.policy == Policy::SA);
}

TEST_CASE("cut demand argument checks") {
  Instance inst = load_cab(6, 0.5);
  CHECK_THROWS_AS(cut_demand(inst, {}), InstanceError);
  CHECK_THROWS_AS(cut_demand(inst, {0, 1, 2, 3, 4, 5}), InstanceError);
  CHECK_THROWS_AS(cut_demand(inst, {0, 7}), InstanceError);
  // duplicates inside a proper subset are harmless
  CHECK(cut_demand(inst, {0, 0, 1}) == cut_demand(inst, {0, 1}));
}

TEST_CASE("commodity list skips zero demands") {
  Instance inst;
  inst.n = 3;
  inst.c = Mat(3, 3);
  inst.w = Mat(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) inst.c(i, j) = 1.0;
  inst.w(0, 1) = 1.0;
  inst.w(1, 0) = 1.0;
  inst.w(0, 2) = 2.0;
  inst.w(2, 0) = 2.0;
  inst.F.assign(3, 0.0);
  finalize(inst);
  auto cs = commodities(inst);
  CHECK(cs.size() == 4);
  CHECK(cs[0] == std::pair<int, int>{0, 1});
  CHECK(cs[3] == std::pair<int, int>{2, 0});
}

TEST_CASE("value list parsing") {
  std::stringstream ok(" 1 2.5\n-3 ");
  auto vals = parse_value_list(ok);
  REQUIRE(vals.size() == 3);
  CHECK(vals[0] == 1.0);
  CHECK(vals[1] == 2.5);
  CHECK(vals[2] == -3.0);
  std::stringstream bad("1 x");
  CHECK_THROWS_AS(parse_value_list(bad), InstanceError);
}

}  // TEST_SUITE
