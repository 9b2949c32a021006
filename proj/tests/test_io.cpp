#include <string>

#include "doctest.h"
#include "pcrof/io.hpp"
#include "test_helpers.hpp"

using namespace pcrof;

namespace {

const char* kMinimal = R"({
  "version": 1,
  "dimension": 2,
  "domain": [[[0, 1], [0, 1]]],
  "pieces": [{"boxes": [[[0, 1], [0, 1]]], "value": 2.5}],
  "alpha": 0.75
})";

std::string notched_instance() {
  return R"({
    "version": 1, "dimension": 2,
    "domain": [
      [[0, 6], [0, 1]],
      [[0, 2], [1, 2]],
      [[4, 6], [1, 2]],
      [[0, 6], [2, 3]],
      [[3, 6], [3, 4]]
    ],
    "pieces": [{"boxes": [[[0, 6], [0, 1]]], "value": 1.0}],
    "alpha": 1.0
  })";
}

}  // namespace

TEST_CASE("minimal instance round-trips through the canonical form") {
  InstanceDocument doc = parse_instance(kMinimal);
  CHECK(doc.dimension == 2);
  CHECK(doc.alpha == 0.75);
  CHECK(doc.f.domain().volume() == 1.0);
  REQUIRE(doc.f.level_sets().size() == 1);
  CHECK(doc.f.level_sets()[0].second == 2.5);

  const std::string canonical = serialize_instance(doc);
  InstanceDocument again = parse_instance(canonical);
  CHECK(serialize_instance(again) == canonical);
  CHECK(instance_digest(again) == instance_digest(doc));
}

TEST_CASE("notched domain canonicalizes to area 19") {
  InstanceDocument doc = parse_instance(notched_instance());
  CHECK(doc.f.domain().volume() == 19.0);
  // Uncovered cells take value 0, so there are two level sets.
  REQUIRE(doc.f.level_sets().size() == 2);
}

TEST_CASE("digest ignores source formatting but tracks content") {
  InstanceDocument a = parse_instance(kMinimal);
  std::string squashed = kMinimal;
  squashed.erase(std::remove(squashed.begin(), squashed.end(), '\n'),
                 squashed.end());
  CHECK(instance_digest(parse_instance(squashed)) == instance_digest(a));

  std::string other = kMinimal;
  other.replace(other.find("0.75"), 4, "0.85");
  CHECK(instance_digest(parse_instance(other)) != instance_digest(a));
}

TEST_CASE("malformed boxes are reported by position") {
  std::string bad = R"({
    "version": 1, "dimension": 2,
    "domain": [[[0, 1], [0, 1]], [[2, 1], [0, 1]]],
    "pieces": [{"boxes": [[[0, 1], [0, 1]]], "value": 1}],
    "alpha": 1
  })";
  CHECK_THROWS_WITH_AS(parse_instance(bad),
                       "domain box 1: hi < lo on axis 0", ParseError);

  std::string flat = bad;
  flat.replace(flat.find("[2, 1]"), 6, "[1, 1]");
  CHECK_THROWS_WITH_AS(parse_instance(flat),
                       "domain box 1: zero-thickness interval on axis 0",
                       ParseError);
}

TEST_CASE("schema violations are rejected") {
  CHECK_THROWS_AS(parse_instance("not json"), ParseError);
  CHECK_THROWS_AS(parse_instance("[]"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"version": 2})"), ParseError);
  // Both pieces and dense present.
  std::string both = R"({
    "version": 1, "dimension": 1,
    "domain": [[[0, 1]]],
    "pieces": [{"boxes": [[[0, 1]]], "value": 1}],
    "dense": {"coords": [[0, 1]], "values": [1]},
    "alpha": 1
  })";
  CHECK_THROWS_AS(parse_instance(both), ParseError);
  // Neither present.
  std::string neither = R"({
    "version": 1, "dimension": 1, "domain": [[[0, 1]]], "alpha": 1
  })";
  CHECK_THROWS_AS(parse_instance(neither), ParseError);
  // Non-positive alpha.
  std::string nonpos = R"({
    "version": 1, "dimension": 1, "domain": [[[0, 1]]],
    "pieces": [{"boxes": [[[0, 1]]], "value": 1}], "alpha": 0
  })";
  CHECK_THROWS_AS(parse_instance(nonpos), ParseError);
}

TEST_CASE("overlapping pieces with conflicting values are rejected") {
  std::string conflict = R"({
    "version": 1, "dimension": 1,
    "domain": [[[0, 2]]],
    "pieces": [
      {"boxes": [[[0, 2]]], "value": 1},
      {"boxes": [[[0, 1]]], "value": 2}
    ],
    "alpha": 1
  })";
  CHECK_THROWS_AS(parse_instance(conflict), ParseError);
}

TEST_CASE("dense form fills cells lexicographically with null outside") {
  std::string dense = R"({
    "version": 1, "dimension": 2,
    "domain": [[[0, 2], [0, 1]], [[0, 1], [1, 2]]],
    "dense": {
      "coords": [[0, 1, 2], [0, 1, 2]],
      "values": [1.0, 2.0, 3.0, null]
    },
    "alpha": 0.5
  })";
  InstanceDocument doc = parse_instance(dense);
  CHECK(doc.f.domain().volume() == 3.0);
  const PcrFunction u = resample(doc.f, minimal_grid(doc.f));
  REQUIRE(u.values.size() == 3);
  // Cells in lexicographic lower-corner order: [0,1]x[0,1], [0,1]x[1,2],
  // [1,2]x[0,1].
  CHECK(u.values[0] == 1.0);
  CHECK(u.values[1] == 2.0);
  CHECK(u.values[2] == 3.0);
}

TEST_CASE("dense form validates the null sentinel against the domain") {
  std::string null_inside = R"({
    "version": 1, "dimension": 1,
    "domain": [[[0, 2]]],
    "dense": {"coords": [[0, 1, 2]], "values": [1.0, null]},
    "alpha": 1
  })";
  CHECK_THROWS_WITH_AS(parse_instance(null_inside),
                       "dense.values[1]: null for a cell inside the domain",
                       ParseError);
  std::string value_outside = R"({
    "version": 1, "dimension": 1,
    "domain": [[[0, 1]]],
    "dense": {"coords": [[0, 1, 2]], "values": [1.0, 2.0]},
    "alpha": 1
  })";
  CHECK_THROWS_WITH_AS(parse_instance(value_outside),
                       "dense.values[1]: value given for a cell outside the domain",
                       ParseError);
}

TEST_CASE("function and report serialization") {
  InstanceDocument doc = parse_instance(kMinimal);
  const PcrFunction u = resample(doc.f, minimal_grid(doc.f));
  nlohmann::ordered_json j = function_to_json(u);
  CHECK(j["cells"].size() == 1);
  CHECK(j["values"][0] == 2.5);

  nlohmann::ordered_json rep = make_report("solve", instance_digest(doc));
  CHECK(rep["version"] == 1);
  CHECK(rep["command"] == "solve");
  CHECK(rep["instance_digest"].get<std::string>().size() == 16);
}
