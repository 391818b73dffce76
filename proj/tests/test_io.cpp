#include "hodge/io.hpp"

#include "orbit_fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace hodge;
using namespace hodge::testing;

namespace {

InstanceFile file_of(const NilpotentOrbitSpec& s) {
  InstanceFile f;
  f.inst = s.base;
  f.nilpotents = s.N;
  f.pure_weight = s.pure_weight;
  return f;
}

void check_round_trip(const InstanceFile& f) {
  Json a = instance_to_json(f);
  Json b = instance_to_json(instance_from_json(Json::parse(a.dump())));
  CHECK(a == b);
}

Json minimal() {
  return Json::parse(R"({
    "dimension": 2,
    "weight_filtration": {"1": [["1", "0"], ["0", "1"]]},
    "hodge_filtration": {"0": [["1", "0"], ["0", "1"]], "1": [["1", {"re": "0", "im": "1"}]]}
  })");
}

}  // namespace

TEST_CASE("round trip on fixtures") {
  auto ni = file_of(non_inv_spec());
  ni.sl2 = non_inv_sl2();
  check_round_trip(ni);
  check_round_trip(file_of(non_conv_spec()));
  auto d = file_of(disc::spec());
  d.sl2 = disc::sl2();
  check_round_trip(d);
  InstanceFile b;
  b.inst = biext_model::instance(Rational(3, 2));
  b.one = unit_vector(4, 0);
  b.one_dual = unit_vector(4, 3);
  check_round_trip(b);
  auto dp = file_of(disc_plus::spec());
  dp.gamma.gamma[{1}] = disc_plus::gamma_flat();
  check_round_trip(dp);
}

TEST_CASE("parsed instance matches the source") {
  auto s = non_inv_spec();
  auto f = instance_from_json(instance_to_json(file_of(s)));
  CHECK(f.inst.W == s.base.W);
  CHECK(f.inst.F == s.base.F);
  CHECK(f.inst.hodge_numbers == s.base.hodge_numbers);
  REQUIRE(f.nilpotents.size() == 1);
  CHECK(f.nilpotents[0] == s.N[0]);
}

TEST_CASE("sparse levels and computed hodge numbers") {
  auto f = instance_from_json(minimal());
  CHECK(f.inst.dim == 2);
  CHECK(f.inst.F.at(1).dim() == 1);
  CHECK(f.inst.F.at(0).is_full());
  CHECK(f.inst.hodge_numbers.at({1, 0}) == 1);
  CHECK(f.inst.hodge_numbers.at({0, 1}) == 1);

  auto j = minimal();
  j["weight_filtration"] = Json::parse(R"({"0": [], "2": [["1","0"],["0","1"]]})");
  auto g = instance_from_json(j);
  CHECK(g.inst.W.at(1).is_zero());
  CHECK(g.inst.W.at(2).is_full());
}

TEST_CASE("malformed documents") {
  auto kind = [](const Json& j) {
    try {
      instance_from_json(j);
    } catch (const HodgeError& e) {
      return std::string(e.kind());
    }
    return std::string("none");
  };
  auto j = minimal();
  j.erase("dimension");
  CHECK(kind(j) == "parse-error");
  j = minimal();
  j["hodge_filtration"]["1"][0][0] = 1.5;
  CHECK(kind(j) == "parse-error");
  j = minimal();
  j["hodge_filtration"]["x"] = Json::array();
  CHECK(kind(j) == "parse-error");
  j = minimal();
  j["schema"] = 7;
  CHECK(kind(j) == "parse-error");
  j = minimal();
  j["hodge_filtration"]["1"][0] = Json::array({"1"});
  CHECK(kind(j) == "invalid-instance");
  j = minimal();
  j["weight_filtration"] = Json::parse(R"({"1": [["1","0"]]})");
  CHECK(kind(j) == "invalid-instance");
  j = minimal();
  j["hodge_filtration"]["0"] = Json::parse(R"([["1","0"]])");
  CHECK(kind(j) == "invalid-instance");
  j = minimal();
  j["nilpotents"] = Json::array({Json::parse(R"([["0","1"],["0","0"]])")});
  j["gamma"] = Json::parse(R"({"1,1": [["0","0"],["0","0"]]})");
  CHECK(kind(j) == "invalid-instance");
  CHECK_THROWS_AS(read_instance("/nonexistent/instance.json"), HodgeError);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::nextafter(1.0, 2.0)})
    CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("write_atomic") {
  auto dir = std::filesystem::temp_directory_path() / "hodge_io_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "out.json").string();
  write_atomic(path, "first");
  write_atomic(path, "second");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  CHECK(s == "second");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK_THROWS_AS(write_atomic((dir / "missing" / "x").string(), "x"), HodgeError);
  std::filesystem::remove_all(dir);
}
