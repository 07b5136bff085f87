#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "sbic/cli.hpp"
#include "sbic/errors.hpp"
#include "sbic/io.hpp"
#include "support.hpp"

using namespace sbic;
using nlohmann::json;

namespace {

const std::string kData = SBIC_DATA_DIR;

std::string data(const std::string& name) { return kData + "/" + name; }

struct Run {
  int code = 0;
  std::string out, err;
  json j() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sbic");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sbic_test_" + name)).string();
}

}  // namespace

TEST_CASE("tree json parsing") {
  const auto t = parse_tree(R"({"root": "a", "leaves": ["1", "2", "3", "4"],
    "edges": [["a", "1"], ["a", "2"], ["a", "b"], ["b", "3"], ["b", "4"]]})");
  CHECK(t.leaf_count() == 4);
  CHECK(t.name(t.root()) == "a");
  const auto numeric = parse_tree(R"({"root": 0, "leaves": [1, 2, 3], "edges": [[0, 1], [0, 2], [0, 3]]})");
  CHECK(numeric.leaf_count() == 3);
  CHECK_THROWS_AS(parse_tree("{"), InputError);
  CHECK_THROWS_AS(parse_tree(R"({"root": "a", "leaves": ["1"]})"), InputError);
  CHECK_THROWS_AS(load_tree(data("missing.json")), InputError);
}

TEST_CASE("count and probability tables") {
  const auto c = parse_counts("pattern,count\n00,1\n10,2\n01,3\n11,4\n", 2);
  CHECK(c.integral);
  CHECK(c.total == 10);
  CHECK(c.counts[1] == 2);  // first character is leaf 0
  CHECK_THROWS_AS(parse_counts("pattern,count\n00,1\n00,2\n", 2), InputError);
  CHECK_THROWS_AS(parse_counts("pattern,count\n0x,1\n", 2), InputError);
  CHECK_THROWS_AS(parse_counts("pattern,count\n000,1\n", 2), InputError);
  CHECK_THROWS_AS(parse_counts("pattern,count\n00,-1\n11,2\n", 2), InputError);
  CHECK_THROWS_AS(parse_counts("pattern,total\n00,1\n", 2), InputError);

  const auto p = parse_probabilities("pattern,probability\n00,1/2\n11,0.5\n", 2);
  CHECK(p[0] == ratio(1, 2));
  CHECK(p[3] == ratio(1, 2));
  CHECK_THROWS_AS(parse_probabilities("pattern,probability\n00,1/2\n11,1/3\n", 2), InputError);
}

TEST_CASE("theta and exponent files") {
  const auto s = load_tree(data("star3.json"));
  const auto th = parse_theta(read_file(data("star3_generic_theta.json")), s);
  CHECK(th.root_p1 == ratio(2, 5));
  CHECK_THROWS_AS(parse_theta(R"({"root_p1": 0.5, "edges": []})", s), InputError);

  const auto ex = parse_exponents("# comment\n2,0\n0,2\n");
  CHECK(ex.dimension == 2);
  CHECK(ex.points.size() == 2);
  CHECK_THROWS_AS(parse_exponents(""), InputError);
  CHECK_THROWS_AS(parse_exponents("1,2\n3\n"), InputError);
  CHECK(parse_long_list("1,0,3") == std::vector<long>{1, 0, 3});
}

TEST_CASE("cli: score") {
  auto r = run({"score", "--tree", data("quartet.json"), "--data", data("quartet_counts.csv")});
  REQUIRE(r.code == 0);
  auto j = r.j();
  CHECK(j["schema_version"] == 1);
  CHECK(j["lambda"] == "11/2");
  CHECK(j["multiplicity"] == 1);
  CHECK(j["regime"] == "smooth");

  r = run({"score", "--tree", data("star4.json"), "--data", data("star4_uniform_counts.csv")});
  CHECK(r.code == kExitUnsupported);
  CHECK_FALSE(r.err.empty());

  r = run({"score", "--tree", data("quartet.json"), "--data", data("quartet_uniform_counts.csv"), "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("lambda,", 0) == 0);
  CHECK(r.out.find("\n3,") != std::string::npos);

  CHECK(run({"score", "--tree", data("nope.json"), "--data", data("quartet_counts.csv")}).code == kExitInput);
  CHECK(run({"score", "--tree", data("quartet.json")}).code == kExitInput);
  CHECK(run({"frobnicate"}).code == kExitInput);
}

TEST_CASE("cli: rlct") {
  auto r = run({"rlct", data("xyz_exponents.csv")});
  REQUIRE(r.code == 0);
  CHECK(r.j()["threshold"] == "3/2");
  CHECK(r.j()["multiplicity"] == 1);
  r = run({"rlct", "--exponents", data("star3_exponents.csv"), "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "threshold,multiplicity\n3/4,1\n");
  r = run({"rlct", data("xyz_exponents.csv"), "--prior", "1,1,1"});
  CHECK(r.j()["threshold"] == "3");

  const auto empty = temp_path("empty.csv");
  write_file(empty, "");
  CHECK(run({"rlct", empty}).code == kExitInput);
  std::remove(empty.c_str());
}

TEST_CASE("cli: polytope") {
  auto r = run({"polytope", "--tree", data("quartet.json")});
  REQUIRE(r.code == 0);
  CHECK(r.j()["facets"] == 6);
  CHECK(r.j()["verdict"] == "pass");
  r = run({"polytope", "--tree", data("caterpillar5.json")});
  REQUIRE(r.code == 0);
  CHECK(r.j()["facets"] == 9);
  CHECK(run({"polytope", "--tree", data("star4.json")}).code == kExitUnsupported);
}

TEST_CASE("cli: validate with a small budget") {
  const auto csv1 = temp_path("v1.csv"), csv2 = temp_path("v2.csv");
  const std::vector<std::string> base{"validate", "--tree",    data("star3.json"), "--theta",
                                      data("star3_uniform_theta.json"), "--grid", "128:4096:2",
                                      "--samples", "2000"};
  auto a = base;
  a.insert(a.end(), {"--csv", csv1});
  auto b = base;
  b.insert(b.end(), {"--csv", csv2, "--serial", "--format", "csv"});
  const auto ra = run(a);
  const auto rb = run(b);
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(ra.err.find("warning: samples below minimum") != std::string::npos);
  CHECK(read_file(csv1) == read_file(csv2));
  CHECK(rb.out == read_file(csv1));
  CHECK(rb.out.rfind("N,logI,stderr\n", 0) == 0);
  const auto j = ra.j();
  CHECK(j["schema_version"] == 1);
  CHECK(j["expected_lambda"] == "2");
  CHECK(j["estimates"].size() == 6);

  auto quiet = base;
  quiet.push_back("--quiet");
  CHECK(run(quiet).err.empty());
  auto bad = base;
  bad.insert(bad.end(), {"--prior", "beta:0,1"});
  CHECK(run(bad).code == kExitInput);
  std::remove(csv1.c_str());
  std::remove(csv2.c_str());
}

TEST_CASE("cli: transform") {
  auto r = run({"transform", "--tree", data("quartet.json"), "--probs", data("quartet_probs.csv")});
  REQUIRE(r.code == 0);
  const auto j = r.j();
  CHECK(j["schema_version"] == 1);
  CHECK(j["means"].size() == 4);
  CHECK(j["cumulants"].size() == 11);
  const auto out = temp_path("t.json");
  r = run({"transform", "--tree", data("quartet.json"), "--probs", data("quartet_probs.csv"), "--out", out});
  CHECK(r.out.empty());
  CHECK(json::parse(read_file(out)) == j);
  std::remove(out.c_str());
}
