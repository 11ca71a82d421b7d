#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "iris/io.hpp"
#include "iris/problem.hpp"

using namespace iris;

namespace {
bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}
}  // namespace

TEST_SUITE("problem") {
  TEST_CASE("example problem parses to the five-array table") {
    const auto p = parse_problem(R"({"bus_width": 8, "arrays": [
      {"name":"A","width":2,"depth":5,"due_date":2},
      {"name":"B","width":3,"depth":5,"due_date":6},
      {"name":"C","width":4,"depth":3,"due_date":3},
      {"name":"D","width":5,"depth":4,"due_date":6},
      {"name":"E","width":6,"depth":2,"due_date":3}]})");
    CHECK(p == fixtures::example());
  }

  TEST_CASE("helmholtz and singleton problems parse") {
    const auto h = parse_problem(R"({"bus_width":256,"arrays":[
      {"name":"u","width":64,"depth":1331,"due_date":333},
      {"name":"S","width":64,"depth":121,"due_date":31},
      {"name":"D","width":64,"depth":1331,"due_date":363}]})");
    CHECK(h == fixtures::helmholtz());
    const auto s = parse_problem(
        R"({"bus_width":1,"arrays":[{"name":"x","width":1,"depth":1,"due_date":1}]})");
    CHECK(s.bus_width == 1);
    CHECK(s.arrays.size() == 1);
    CHECK(s.host_word == 64);
  }

  TEST_CASE("validation reports every violation") {
    Problem p{256, 64, {{"A", 300, 4, 1, {}}}};
    const auto v = validate_problem(p);
    REQUIRE(v.size() == 1);
    CHECK(mentions(v, "array wider than bus"));
    CHECK_THROWS_AS(require_valid(p), ProblemError);

    Problem dup{8, 64, {{"A", 2, 1, 0, {}}, {"A", 3, 1, 0, {}}}};
    CHECK(mentions(validate_problem(dup), "duplicate name"));

    Problem many{8, 64, {{"A", 0, 0, -1, 0}}};
    CHECK(validate_problem(many).size() >= 4);
    try {
      require_valid(many);
      FAIL("expected ProblemError");
    } catch (const ProblemError& e) {
      CHECK(e.violations().size() >= 4);
    }

    CHECK(mentions(validate_problem(Problem{8, 64, {}}), "no arrays"));
  }

  TEST_CASE("valid problem is returned unchanged") {
    const auto p = fixtures::example();
    CHECK(&require_valid(p) == &p);
    CHECK(validate_problem(p).empty());
  }

  TEST_CASE("delta_of") {
    CHECK(delta_of(2, 8) == 8);
    CHECK(delta_of(3, 8) == 6);
    CHECK(delta_of(5, 8) == 5);
    CHECK(delta_of(6, 8) == 6);
    CHECK(delta_of(64, 256, 2) == 128);
    for (std::int64_t cap : {1, 2, 7}) CHECK(delta_of(48, 48, cap) == 48);
    CHECK_THROWS_AS(delta_of(9, 8), std::invalid_argument);
    CHECK_THROWS_AS(delta_of(0, 8), std::invalid_argument);
    CHECK_THROWS_AS(delta_of(2, 8, 0), std::invalid_argument);
  }

  TEST_CASE("total processing time") {
    CHECK(total_processing_time(fixtures::example()) == 69);
    CHECK(total_processing_time(fixtures::helmholtz()) == 64 * (1331 + 121 + 1331));
    CHECK(total_processing_time(Problem{1, 64, {{"x", 1, 1, 1, {}}}}) == 1);
  }

  TEST_CASE("derived tasks") {
    const auto t = derive_tasks(fixtures::example());
    REQUIRE(t.size() == 5);
    CHECK(t[0].processing_time == 10);
    CHECK(t[3].delta == 5);
    CHECK(t[1].remaining_elements == 5);
    // release = d_max - d_j
    CHECK(t[0].release == 4);
    CHECK(t[1].release == 0);
  }
}

TEST_SUITE("io") {
  TEST_CASE("malformed JSON reports line and column") {
    try {
      parse_problem("{\n  \"bus_width\": 8,\n  \"arrays\": [ }\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() >= 13);
    }
  }

  TEST_CASE("schema errors name the field") {
    auto field_of = [](const char* text) {
      try {
        parse_problem(text);
      } catch (const SchemaError& e) {
        return e.field();
      }
      return std::string("<none>");
    };
    CHECK(field_of(R"({"arrays": []})") == "bus_width");
    CHECK(field_of(R"({"bus_width": 8, "arrays": [], "colour": 1})") == "colour");
    CHECK(field_of(R"({"bus_width": 8, "arrays": [{"name":"A","width":2.5,"depth":1,"due_date":0}]})") ==
          "arrays[0].width");
    CHECK(field_of(R"({"bus_width": 8, "arrays": [{"width":2,"depth":1,"due_date":0}]})") ==
          "arrays[0].name");
    CHECK(field_of(R"([1,2])") == "<root>");
  }

  TEST_CASE("invalid content surfaces as ProblemError") {
    CHECK_THROWS_AS(
        parse_problem(R"({"bus_width": 8, "arrays": [{"name":"A","width":9,"depth":1,"due_date":0}]})"),
        ProblemError);
  }

  TEST_CASE("problem round trip") {
    auto p = fixtures::helmholtz(3);
    p.host_word = 32;
    CHECK(parse_problem(serialize_problem(p)) == p);
  }

  TEST_CASE("layout round trip and name binding") {
    const Layout l = make_layout(8, {"A", "B"},
                                 {{{0, 0, 0, 2}, {1, 0, 2, 3}}, {{1, 1, 0, 3}}});
    const auto text = serialize_layout(l);
    CHECK(parse_layout(text) == l);

    const Problem p{8, 64, {{"B", 3, 2, 2, {}}, {"A", 2, 1, 1, {}}}};
    const Layout bound = parse_layout(text, p);
    CHECK(bound.array_names == std::vector<std::string>{"B", "A"});
    CHECK(bound.cycles[0][0].array == 1);
    CHECK(bound.completion == std::vector<std::int64_t>{2, 1});

    const Problem other{8, 64, {{"Z", 3, 2, 2, {}}}};
    CHECK_THROWS(parse_layout(text, other));
  }

  TEST_CASE("missing file is an I/O failure") {
    CHECK_THROWS_AS(read_file("/nonexistent/iris/problem.json"), std::ios_base::failure);
  }
}
