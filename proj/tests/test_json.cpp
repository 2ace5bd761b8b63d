#include <doctest.h>

#include <string>

#include "oracles.hpp"
#include "sketch/json/schema.hpp"
#include "sketch/json/text.hpp"
#include "sketch/json/validate.hpp"
#include "sketch/json/value.hpp"
#include "sketch/util/file.hpp"
#include "sketch/util/rng.hpp"

using namespace sketch;
using json::Value;

namespace {

json::SchemaDoc fixture_format(const char* file) {
  const Value doc = json::parse(util::read_file(std::string(SKETCH_FIXTURES) + "/" + file));
  const Value* fields = doc.get("fields") ? doc.get("fields") : &doc;
  return json::parse_schema(*fields->get("outputFormat"));
}

Value random_value(util::Rng& rng, int depth) {
  static const std::vector<std::string> strings = {"", "a", "Kamala Harris", "quote\"back\\slash", "tab\tnl\n",
                                                   "\x01", "caf\xC3\xA9", "\xF0\x9F\x98\x80", "Sci/Tech"};
  static const std::vector<std::string> numbers = {"0", "-0", "7", "-12", "3.25", "1e3", "2.5E-3", "123456789012345678901234567890", "-0.001"};
  const auto pick = rng.below(depth > 0 ? 7 : 5);
  switch (pick) {
    case 0: return Value(nullptr);
    case 1: return Value(rng.chance(0.5));
    case 2: return Value(*json::Number::from_lexeme(rng.pick(numbers)));
    case 3:
    case 4: return Value(rng.pick(strings));
    case 5: {
      json::Array a;
      for (auto n = rng.below(4); n > 0; --n) a.push_back(random_value(rng, depth - 1));
      return Value(std::move(a));
    }
    default: {
      json::Object o;
      for (auto n = rng.below(4); n > 0; --n) o.set("k" + std::to_string(rng.below(6)), random_value(rng, depth - 1));
      return Value(std::move(o));
    }
  }
}

}  // namespace

TEST_CASE("parse keeps member order") {
  const Value v = json::parse(R"([{"name": "Kamala Harris", "entity_type": "person"}])");
  REQUIRE(v.is_array());
  REQUIRE(v.as_array().size() == 1);
  const auto& obj = v.as_array()[0].as_object();
  auto it = obj.begin();
  CHECK(it->first == "name");
  CHECK(it->second.as_string() == "Kamala Harris");
  ++it;
  CHECK(it->first == "entity_type");
  CHECK(json::parse("  null \n").is_null());
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(json::parse(R"({"a":1,} )"), ParseError);
  CHECK_THROWS_AS(json::parse(R"({"a":1,"a":2})"), DuplicateKeyError);
  CHECK_THROWS_AS(json::parse("[1] [2]"), ParseError);
  CHECK_THROWS_AS(json::parse("01"), ParseError);
  CHECK_THROWS_AS(json::parse("\"\x01\""), ParseError);
  CHECK_THROWS_AS(json::parse(""), ParseError);
  try {
    json::parse("[1, }");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("compact serialization") {
  json::Object o;
  o.set("tag", "Sports");
  CHECK(json::serialize(Value(o)) == R"({"tag":"Sports"})");
  CHECK(json::serialize(Value(json::Array{})) == "[]");
  CHECK(json::serialize(json::parse("\"a\\u0001\\/\\u00e9\"")) == "\"a\\u0001/\xC3\xA9\"");
  CHECK(json::serialize(json::parse("[1.0, 1.50, -0, 1e2, 12345678901234567890123]")) ==
        "[1,1.5,0,100,12345678901234567890123]");
  CHECK(json::parse("1") == json::parse("1.0"));
  CHECK(json::parse("1") == json::parse("1e0"));
}

TEST_CASE("outputFormat document round-trips through compact form") {
  const Value doc = json::parse(util::read_file(std::string(SKETCH_FIXTURES) + "/ner_fields.json"));
  const std::string compact = json::serialize(doc);
  CHECK(compact.find('\n') == std::string::npos);
  CHECK(json::parse(compact) == doc);
  CHECK(json::parse(json::serialize_pretty(doc)) == doc);
}

TEST_CASE("round trip over random values") {
  util::Rng rng(11);
  for (int i = 0; i < 3000; ++i) {
    const Value v = random_value(rng, 3);
    const std::string text = json::serialize(v);
    CAPTURE(text);
    CHECK(json::parse(text) == v);
    CHECK(json::serialize(json::parse(text)) == text);
    CHECK(oracle::nj::accept(text));
  }
}

TEST_CASE("parse_schema on the NER format") {
  const auto s = fixture_format("ner_fields.json");
  CHECK(s.kind == json::SchemaKind::Array);
  REQUIRE(s.items);
  CHECK(s.items->kind == json::SchemaKind::Object);
  CHECK(s.items->required == std::vector<std::string>{"name", "entity_type"});
  const auto* et = s.items->property("entity_type");
  REQUIRE(et);
  REQUIRE(et->enum_values);
  CHECK(et->enum_values->size() == 4);
  CHECK(s.items->properties[0].name == "name");
  CHECK(json::collect_unsupported(s).empty());
  CHECK(json::schema_depth(s) == 3);
}

TEST_CASE("parse_schema structural errors") {
  CHECK_THROWS_AS(json::parse_schema(json::parse(R"({"type":"object","required":["x"]})")), SchemaError);
  CHECK_THROWS_AS(json::parse_schema(json::parse(R"({"enum":[]})")), SchemaError);
  CHECK_THROWS_AS(json::parse_schema(json::parse(R"({"enum":[1,1.0]})")), SchemaError);
  CHECK_THROWS_AS(json::parse_schema(json::parse(R"({"type":"array","minItems":3,"maxItems":2})")), SchemaError);
  CHECK_THROWS_AS(json::parse_schema(json::parse(R"({"type":"strin"})")), SchemaError);
  CHECK_THROWS_AS(json::parse_schema(json::parse("[]")), SchemaError);
}

TEST_CASE("unmodeled keywords are recorded, not rejected") {
  const auto s = json::parse_schema(json::parse(R"({"type":"string","pattern":"^a"})"));
  CHECK(s.unsupported_keywords == std::vector<std::string>{"pattern"});
  const auto nested = json::parse_schema(
      json::parse(R"({"type":"object","properties":{"a":{"type":"string","format":"date"}},"additionalProperties":false})"));
  CHECK(json::collect_unsupported(nested).size() == 2);
  CHECK_THROWS_AS(json::validate(json::parse(R"({"a":"x"})"), nested), UnsupportedSchemaError);
  CHECK(json::validate(json::parse(R"({"a":"x"})"), nested, {.lenient = true}).valid());
}

TEST_CASE("validate: listing output and topic enum") {
  const auto ner = fixture_format("ner_fields.json");
  CHECK(json::validate(json::parse(R"([{"name":"Kamala Harris","entity_type":"person"}])"), ner).valid());
  CHECK(json::validate(json::parse("[]"), ner).valid());

  const auto bad = json::validate(
      json::parse(R"([{"name":"A","entity_type":"person"},{"name":"B","entity_type":"city"}])"), ner);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].path == "$[1].entity_type");
  CHECK(bad.violations[0].keyword == "enum");

  const auto topic = fixture_format("topic_fields.json");
  const auto r = json::validate(json::parse(R"({"tag":"Football"})"), topic);
  CHECK_FALSE(r.valid());
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].path == "$.tag");
  CHECK(r.violations[0].keyword == "enum");
  CHECK(json::format_report(r).find("$.tag: enum:") == 0);

  const auto missing = json::validate(json::parse("{}"), topic);
  REQUIRE(missing.violations.size() == 1);
  CHECK(missing.violations[0].keyword == "required");
}

TEST_CASE("validate: number semantics and extra members") {
  const auto integer = json::parse_schema(json::parse(R"({"type":"integer"})"));
  CHECK(json::validate(json::parse("3"), integer).valid());
  CHECK(json::validate(json::parse("3.0"), integer).valid());
  CHECK(json::validate(json::parse("3e2"), integer).valid());
  CHECK_FALSE(json::validate(json::parse("3.5"), integer).valid());
  const auto number = json::parse_schema(json::parse(R"({"type":"number"})"));
  CHECK(json::validate(json::parse("3.5"), number).valid());
  CHECK_FALSE(json::validate(json::parse("\"3\""), number).valid());
  const auto obj = json::parse_schema(json::parse(R"({"type":"object","properties":{"a":{"type":"integer"}}})"));
  CHECK(json::validate(json::parse(R"({"a":1,"b":"extra"})"), obj).valid());
}

TEST_CASE("validator agrees with the brute-force checker on pool-built values") {
  std::size_t verdicts = 0;
  for (const auto& pool : oracle::scalar_pools()) {
    const auto values = oracle::pool_values(pool);
    for (const auto& sj : oracle::pool_schemas(pool)) {
      const auto schema = json::parse_schema(json::parse(sj.dump()));
      for (const auto& vj : values) {
        const bool expected = oracle::semantic_valid(vj, sj);
        const bool got = json::validate(json::parse(vj.dump()), schema).valid();
        if (expected != got) FAIL_CHECK(sj.dump() << " vs " << vj.dump());
        ++verdicts;
      }
    }
  }
  CHECK(verdicts > 10000);
}

TEST_CASE("removing a required name never invalidates a value") {
  for (const auto& pool : oracle::scalar_pools()) {
    const auto values = oracle::pool_values(pool);
    for (const auto& sj : oracle::pool_schemas(pool)) {
      if (!sj.contains("required") || sj["required"].empty()) continue;
      auto relaxed = sj;
      relaxed["required"].erase(relaxed["required"].begin());
      const auto strict_schema = json::parse_schema(json::parse(sj.dump()));
      const auto relaxed_schema = json::parse_schema(json::parse(relaxed.dump()));
      for (const auto& vj : values) {
        const Value v = json::parse(vj.dump());
        if (json::validate(v, strict_schema).valid()) CHECK(json::validate(v, relaxed_schema).valid());
      }
    }
  }
}

TEST_CASE("enum schemas accept exactly their members") {
  for (const auto& pool : oracle::scalar_pools()) {
    const auto values = oracle::pool_values(pool);
    for (unsigned mask = 1; mask < 8; ++mask) {
      json::Array members;
      for (unsigned i = 0; i < 3; ++i) {
        if (mask & (1u << i)) members.push_back(json::parse(pool[i].dump()));
      }
      json::Object s;
      s.set("enum", members);
      const auto schema = json::parse_schema(Value(s));
      for (const auto& vj : values) {
        const Value v = json::parse(vj.dump());
        bool member = false;
        for (const auto& m : members) member = member || m == v;
        CHECK(json::validate(v, schema).valid() == member);
      }
    }
  }
}

TEST_CASE("schema hash is structural") {
  const auto a = json::parse_schema(json::parse(R"({"type":"object","properties":{"x":{"type":"string"}}})"));
  const auto b = json::parse_schema(json::parse(R"({"properties":{"x":{"type":"string"}},"type":"object"})"));
  const auto c = json::parse_schema(json::parse(R"({"type":"object","properties":{"y":{"type":"string"}}})"));
  CHECK(json::schema_hash(a) == json::schema_hash(b));
  CHECK(json::schema_hash(a) != json::schema_hash(c));
  CHECK(json::schema_hash(a).size() == 64);
  CHECK(json::parse_schema(json::schema_to_json(a)).properties.size() == 1);
}
