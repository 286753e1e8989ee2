#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "textlab/config.hpp"
#include "textlab/error.hpp"

using namespace textlab;

TEST_CASE("sections, scalars and arrays parse") {
  auto doc = parse_config(R"(
# comment
top = 1

[ingest]
reddit_files = ["a.jsonl", "b.jsonl"]
limit = 8000
fraction = 0.25
enabled = true

[preprocess]
stopword_file = "data/stopwords_en.txt"
)");
  CHECK(doc.root.require_int("top") == 1);
  const ConfigTable& ingest = doc.require_section("ingest");
  auto files = ingest.require_string_array("reddit_files");
  REQUIRE(files.size() == 2);
  CHECK(files[0] == "a.jsonl");
  CHECK(ingest.require_int("limit") == 8000);
  CHECK(ingest.get_double("fraction", 0) == doctest::Approx(0.25));
  CHECK(ingest.get_bool("enabled", false));
  CHECK(doc.require_section("preprocess").require_string("stopword_file") ==
        "data/stopwords_en.txt");
}

TEST_CASE("array-of-tables keeps order") {
  auto doc = parse_config(R"(
[mapping]
0 = "negative"
1 = "neutral"

[[override]]
category = "BotchedSurgeries"
sentiment = "negative"

[[override]]
category = "botox"
sentiment = "neutral"
)");
  auto overrides = doc.array_sections("override");
  REQUIRE(overrides.size() == 2);
  CHECK(overrides[0]->require_string("category") == "BotchedSurgeries");
  CHECK(overrides[1]->require_string("category") == "botox");
  CHECK(doc.require_section("mapping").require_string("0") == "negative");
}

TEST_CASE("string escapes and empty arrays") {
  auto doc = parse_config("[s]\nq = \"a\\\"b\\n\"\nempty = []\n");
  CHECK(doc.require_section("s").require_string("q") == "a\"b\n");
  CHECK(doc.require_section("s").require("empty").items.empty());
}

TEST_CASE("duplicate plain sections are rejected, table arrays are not") {
  CHECK_THROWS_WITH_AS(parse_config("[a]\nx = 1\n[a]\ny = 2\n"),
                       doctest::Contains("duplicate section"), Error);
  CHECK_NOTHROW(parse_config("[[o]]\nx = 1\n[[o]]\nx = 2\n"));
}

TEST_CASE("errors carry line numbers and config kind") {
  CHECK_THROWS_WITH_AS(parse_config("[s]\nbad line\n"),
                       doctest::Contains("line 2"), Error);
  CHECK_THROWS_WITH_AS(parse_config("[s]\nx = \"unterminated\n"),
                       doctest::Contains("unterminated"), Error);
  CHECK_THROWS_WITH_AS(parse_config("[s]\na = 1\na = 2\n"),
                       doctest::Contains("duplicate"), Error);
  try {
    parse_config("junk\n");
    FAIL("should throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(e.exit_code() == 1);
  }
}

TEST_CASE("missing keys and sections are named in errors") {
  auto doc = parse_config("[a]\nx = 1\n");
  CHECK_THROWS_WITH_AS(doc.require_section("nope"), doctest::Contains("nope"),
                       Error);
  CHECK_THROWS_WITH_AS(doc.require_section("a").require_string("missing"),
                       doctest::Contains("[a] missing"), Error);
  CHECK(doc.section_or_empty("nope").entries.empty());
}

TEST_CASE("type mismatches are rejected") {
  auto doc = parse_config("[a]\nx = 1\ny = \"s\"\n");
  CHECK_THROWS_AS((void)doc.require_section("a").require_string("x"), Error);
  CHECK_THROWS_AS((void)doc.require_section("a").require_int("y"), Error);
  // integers promote to double
  CHECK(doc.require_section("a").get_double("x", 0) == 1.0);
}
