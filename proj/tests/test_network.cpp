#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairflow/csvio.hpp"
#include "fairflow/errors.hpp"
#include "fairflow/network.hpp"
#include "fairflow/tntp.hpp"

using namespace fairflow;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

std::string data_dir() {
  const char* env = std::getenv("FAIRFLOW_DATA");
  return env ? env : "data";
}

const std::string kTinyNet =
    "<NUMBER OF ZONES> 2\n"
    "<NUMBER OF NODES> 2\n"
    "<FIRST THRU NODE> 1\n"
    "<NUMBER OF LINKS> 2\n"
    "<END OF METADATA>\n"
    "~ tail head capacity length fftime b power speed toll type ;\n"
    "1 2 10.0 1.0 1.0 0.15 4 0 0 1 ;\n"
    "1 2 5.0 1.0 2.0 0.15 4 0 0 1 ;\n";

const std::string kTinyTrips =
    "<NUMBER OF ZONES> 2\n"
    "<TOTAL OD FLOW> 3.0\n"
    "<END OF METADATA>\n"
    "Origin 1\n"
    "    2 : 3.0;\n";

}  // namespace

TEST_CASE("structural validation reports each defect with a stable code") {
  Network net;
  net.vertex_count = 2;
  net.edges.push_back({0, 1, TravelTimeFn(std::vector<double>{1.0}), 0.0});
  net.commodities.push_back({0, 1, 1.0, 1.0});
  CHECK(validate(net).empty());

  auto has_code = [](const std::vector<Diagnostic>& ds, const std::string& code) {
    return std::any_of(ds.begin(), ds.end(),
                       [&](const Diagnostic& d) { return d.code == code; });
  };

  SUBCASE("edge endpoint out of range") {
    net.edges.push_back({0, 5, TravelTimeFn(std::vector<double>{1.0}), 0.0});
    CHECK(has_code(validate(net), "vertex-out-of-range"));
  }
  SUBCASE("self loop is flagged but not fatal") {
    net.edges.push_back({1, 1, TravelTimeFn(std::vector<double>{1.0}), 0.0});
    CHECK(has_code(validate(net), "self-loop"));
  }
  SUBCASE("negative polynomial coefficient") {
    net.edges.push_back({0, 1, TravelTimeFn(std::vector<double>{1.0, -2.0}), 0.0});
    CHECK(has_code(validate(net), "negative-coefficient"));
  }
  SUBCASE("commodity endpoint out of range") {
    net.commodities.push_back({0, 9, 1.0, 1.0});
    CHECK(has_code(validate(net), "commodity-vertex-out-of-range"));
  }
  SUBCASE("nonpositive demand") {
    net.commodities.push_back({0, 1, 0.0, 1.0});
    CHECK(has_code(validate(net), "nonpositive-demand"));
  }
  SUBCASE("nonpositive value of time") {
    net.commodities.push_back({0, 1, 1.0, -1.0});
    CHECK(has_code(validate(net), "nonpositive-value-of-time"));
  }
  SUBCASE("destination unreachable from origin") {
    net.commodities.push_back({1, 0, 1.0, 1.0});
    CHECK(has_code(validate(net), "unreachable-destination"));
  }
}

TEST_CASE("canonical two-edge instance") {
  Network net = build_pigou(4, 1e-3, 1.0);
  REQUIRE(net.edges.size() == 2);
  CHECK(net.vertex_count == 2);
  CHECK(net.max_degree() == 4);
  CHECK(net.total_demand() == doctest::Approx(1.0));
  // edge 0 is the wide road 1 + eps*x, edge 1 the congestible x^m
  CHECK(net.edges[0].fn.value(0.0) == doctest::Approx(1.0));
  CHECK(net.edges[0].fn.value(2.0) == doctest::Approx(1.002));
  CHECK(net.edges[1].fn.value(0.0) == doctest::Approx(0.0));
  CHECK(net.edges[1].fn.value(0.5) == doctest::Approx(0.0625));
  CHECK(validate(net).empty());

  auto out = net.out_edges();
  REQUIRE(out.size() == 2);
  CHECK(out[0] == std::vector<int>{0, 1});
  CHECK(out[1].empty());
}

TEST_CASE("benchmark instance parses to the published dimensions") {
  Network net = parse_tntp(data_dir() + "/SiouxFalls_net.tntp",
                           data_dir() + "/SiouxFalls_trips.tntp");
  CHECK(net.vertex_count == 24);
  CHECK(net.edges.size() == 76);
  CHECK(net.commodities.size() == 528);
  CHECK(net.max_degree() == 4);
  CHECK(net.total_demand() == doctest::Approx(360700.0).epsilon(1e-9));
  CHECK(validate(net).empty());
  for (const auto& e : net.edges) CHECK(e.has_bpr);
}

TEST_CASE("tntp round trip preserves topology, costs, and demands") {
  Network net = parse_tntp(data_dir() + "/SiouxFalls_net.tntp",
                           data_dir() + "/SiouxFalls_trips.tntp");
  auto np = std::filesystem::temp_directory_path() / "rt_net.tntp";
  auto tp = std::filesystem::temp_directory_path() / "rt_trips.tntp";
  write_file(np.string(), serialize_tntp_net(net));
  write_file(tp.string(), serialize_tntp_trips(net));
  Network back = parse_tntp(np.string(), tp.string());

  REQUIRE(back.vertex_count == net.vertex_count);
  REQUIRE(back.edges.size() == net.edges.size());
  REQUIRE(back.commodities.size() == net.commodities.size());
  for (size_t i = 0; i < net.edges.size(); ++i) {
    CHECK(back.edges[i].tail == net.edges[i].tail);
    CHECK(back.edges[i].head == net.edges[i].head);
    CHECK(back.edges[i].fn == net.edges[i].fn);
  }
  for (size_t k = 0; k < net.commodities.size(); ++k) {
    CHECK(back.commodities[k].origin == net.commodities[k].origin);
    CHECK(back.commodities[k].destination == net.commodities[k].destination);
    CHECK(back.commodities[k].demand ==
          doctest::Approx(net.commodities[k].demand).epsilon(1e-12));
  }
}

TEST_CASE("serializing a synthetic polynomial network is refused") {
  Network net = build_pigou(4, 1e-3, 1.0);  // no BPR rows behind these edges
  CHECK_THROWS_AS((void)serialize_tntp_net(net), InstanceError);
}

TEST_CASE("minimal hand-written instance parses") {
  auto np = temp_file("tiny_net.tntp", kTinyNet);
  auto tp = temp_file("tiny_trips.tntp", kTinyTrips);
  Network net = parse_tntp(np.string(), tp.string());
  CHECK(net.vertex_count == 2);
  REQUIRE(net.edges.size() == 2);
  CHECK(net.edges[0].fn.value(0.0) == doctest::Approx(1.0));
  CHECK(net.edges[1].fn.value(0.0) == doctest::Approx(2.0));
  REQUIRE(net.commodities.size() == 1);
  CHECK(net.commodities[0].origin == 0);
  CHECK(net.commodities[0].destination == 1);
  CHECK(net.commodities[0].demand == doctest::Approx(3.0));
}

TEST_CASE("duplicate od entries are summed and zero-demand entries dropped") {
  std::string trips =
      "<NUMBER OF ZONES> 2\n"
      "<END OF METADATA>\n"
      "Origin 1\n"
      "    2 : 1.0; 2 : 2.5;\n"
      "Origin 2\n"
      "    1 : 0.0;\n";
  auto np = temp_file("dup_net.tntp", kTinyNet);
  auto tp = temp_file("dup_trips.tntp", trips);
  // origin 2 has only a zero entry, so no commodity and no reachability demand
  Network net = parse_tntp(np.string(), tp.string());
  REQUIRE(net.commodities.size() == 1);
  CHECK(net.commodities[0].demand == doctest::Approx(3.5));
}

TEST_CASE("parser errors name the line and the problem") {
  auto np = temp_file("err_net.tntp", kTinyNet);
  auto empty_trips = temp_file("empty_trips.tntp", "<END OF METADATA>\n");

  auto expect_net_error = [&](const std::string& body, const std::string& needle) {
    auto p = temp_file("bad_net.tntp", body);
    try {
      parse_tntp(p.string(), empty_trips.string());
      FAIL("expected a parse error for: " << needle);
    } catch (const ParseError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                    "wanted \"" << needle << "\", got \"" << std::string(e.what()) << "\"");
    }
  };
  auto expect_trips_error = [&](const std::string& body, const std::string& needle) {
    auto p = temp_file("bad_trips.tntp", body);
    try {
      parse_tntp(np.string(), p.string());
      FAIL("expected a parse error for: " << needle);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  auto expect_trips_instance_error = [&](const std::string& body, const std::string& needle) {
    auto p = temp_file("bad_trips.tntp", body);
    try {
      parse_tntp(np.string(), p.string());
      FAIL("expected an instance error for: " << needle);
    } catch (const InstanceError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  CHECK_THROWS_AS(parse_tntp("/nonexistent/net.tntp", empty_trips.string()), ParseError);

  expect_net_error("1 2 3\n", "expected metadata tag before data");
  expect_net_error("<NUMBER OF NODES 2\n<END OF METADATA>\n", "unterminated metadata tag");
  expect_net_error("<NUMBER OF NODES> 2\n", "missing <END OF METADATA>");
  expect_net_error("<NUMBER OF LINKS> 1\n<END OF METADATA>\n", "missing <NUMBER OF NODES>");
  expect_net_error("<NUMBER OF NODES> two\n<END OF METADATA>\n", "is not an integer");
  expect_net_error("<NUMBER OF NODES> -3\n<NUMBER OF LINKS> 1\n<END OF METADATA>\n",
                   "must be positive");
  expect_net_error(
      "<NUMBER OF NODES> 2\n<NUMBER OF LINKS> 1\n<END OF METADATA>\n1 2 10.0\n",
      "expected at least 7 link fields");
  expect_net_error(
      "<NUMBER OF NODES> 2\n<NUMBER OF LINKS> 2\n<END OF METADATA>\n"
      "1 2 10.0 1.0 1.0 0.15 4\n",
      "<NUMBER OF LINKS> says 2 but found 1");

  auto expect_net_instance_error = [&](const std::string& body, const std::string& needle) {
    auto p = temp_file("bad_net.tntp", body);
    try {
      parse_tntp(p.string(), empty_trips.string());
      FAIL("expected an instance error for: " << needle);
    } catch (const InstanceError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_net_instance_error(
      "<NUMBER OF NODES> 2\n<NUMBER OF LINKS> 1\n<END OF METADATA>\n"
      "1 3 10.0 1.0 1.0 0.15 4\n",
      "vertex id out of range");
  expect_net_instance_error(
      "<NUMBER OF NODES> 2\n<NUMBER OF LINKS> 1\n<END OF METADATA>\n"
      "1 2 0.0 1.0 1.0 0.15 4\n",
      "nonpositive capacity");
  expect_net_instance_error(
      "<NUMBER OF NODES> 2\n<NUMBER OF LINKS> 1\n<END OF METADATA>\n"
      "1 2 10.0 1.0 -1.0 0.15 4\n",
      "negative free flow time");
  expect_net_instance_error(
      "<NUMBER OF NODES> 2\n<NUMBER OF LINKS> 1\n<END OF METADATA>\n"
      "1 2 10.0 1.0 1.0 -0.15 4\n",
      "negative B");
  expect_net_instance_error(
      "<NUMBER OF NODES> 2\n<NUMBER OF LINKS> 1\n<END OF METADATA>\n"
      "1 2 10.0 1.0 1.0 0.15 -4\n",
      "power must be a nonnegative integer");

  expect_trips_error("<END OF METADATA>\nOrigin x\n", "bad Origin header");
  expect_trips_error("<END OF METADATA>\n2 : 1.0;\n", "trip entry before any Origin header");
  expect_trips_error("<END OF METADATA>\nOrigin 1\n2 1.0;\n", "malformed trip entry");
  expect_trips_instance_error("<END OF METADATA>\nOrigin 1\n7 : 1.0;\n",
                              "destination out of range");
  expect_trips_instance_error("<END OF METADATA>\nOrigin 1\n2 : -1.0;\n", "negative demand");
}

TEST_CASE("unreachable demand surfaces as a validation error at load") {
  // the tiny net has edges 1->2 only, so demand 2->1 cannot route
  std::string trips =
      "<END OF METADATA>\n"
      "Origin 2\n"
      "    1 : 1.0;\n";
  auto np = temp_file("unreach_net.tntp", kTinyNet);
  auto tp = temp_file("unreach_trips.tntp", trips);
  CHECK_THROWS_AS(parse_tntp(np.string(), tp.string()), ValidationError);
}

TEST_CASE("json instance round trip") {
  Network net = build_parallel(
      {TravelTimeFn(std::vector<double>{1.0, 0.5}), TravelTimeFn(std::vector<double>{0.0, 0.0, 2.0})},
      4.0);
  net.commodities[0].value_of_time = 2.5;
  Network back = parse_json_instance(serialize_json_instance(net));
  REQUIRE(back.edges.size() == net.edges.size());
  CHECK(back.vertex_count == net.vertex_count);
  for (size_t i = 0; i < net.edges.size(); ++i) CHECK(back.edges[i].fn == net.edges[i].fn);
  REQUIRE(back.commodities.size() == 1);
  CHECK(back.commodities[0].demand == doctest::Approx(4.0));
  CHECK(back.commodities[0].value_of_time == doctest::Approx(2.5));
}

TEST_CASE("json instance parse failures carry context") {
  try {
    parse_json_instance("{\"vertex_count\": 2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("json instance") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_json_instance("{\"vertex_count\": 2, \"edges\": []}"), ParseError);
}
