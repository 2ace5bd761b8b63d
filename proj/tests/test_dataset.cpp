#include <doctest.h>

#include <functional>
#include <map>
#include <set>
#include <string>

#include "sketch/dataset/builder.hpp"
#include "sketch/json/text.hpp"
#include "sketch/json/validate.hpp"
#include "sketch/prompt/template.hpp"
#include "sketch/task/instance.hpp"
#include "sketch/util/hash.hpp"

using namespace sketch;
using namespace sketch::dataset;
using json::SchemaDoc;
using json::SchemaKind;
using json::Value;

namespace {

// Depth with the root at 1, and the widest object or array bound, measured
// independently of schema_depth().
std::pair<int, std::size_t> shape(const SchemaDoc& s) {
  int depth = 1;
  std::size_t width = 0;
  if (s.kind == SchemaKind::Object) {
    width = s.properties.size();
    for (const auto& p : s.properties) {
      auto [d, w] = shape(*p.schema);
      depth = std::max(depth, d + 1);
      width = std::max(width, w);
    }
  } else if (s.kind == SchemaKind::Array) {
    REQUIRE(s.items);
    auto [d, w] = shape(*s.items);
    depth = d + 1;
    width = std::max<std::size_t>(w, s.max_items.value_or(0));
    width = std::max<std::size_t>(width, s.min_items.value_or(0));
  }
  return {depth, width};
}

bool objects_nonempty(const SchemaDoc& s) {
  if (s.kind == SchemaKind::Object && s.properties.empty()) return false;
  for (const auto& p : s.properties) {
    if (!objects_nonempty(*p.schema)) return false;
  }
  return !s.items || objects_nonempty(*s.items);
}

SchemaDoc schema_of(const char* text) { return json::parse_schema(json::parse(text)); }

// Leaves paired with their structural path, so a mutation can be compared leaf by leaf.
void paths(const Value& v, const std::string& at, std::map<std::string, Value>& out) {
  if (v.is_object()) {
    for (const auto& [k, m] : v.as_object()) paths(m, at + "." + k, out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.as_array().size(); ++i) paths(v.as_array()[i], at + "[" + std::to_string(i) + "]", out);
  } else {
    out[at] = v;
  }
}

TrainingSample task_sample(int i) {
  return {"task prompt " + std::to_string(i), "{}", SampleKind::Task, ""};
}

}  // namespace

TEST_CASE("config checks") {
  SchemaGenConfig c;
  CHECK_NOTHROW(c.check());
  c.max_depth = 0;
  CHECK_THROWS_AS(c.check(), ConfigError);
  c = {};
  c.max_width = 0;
  CHECK_THROWS_AS(c.check(), ConfigError);
  c = {};
  c.weights.number = -1;
  CHECK_THROWS_AS(c.check(), ConfigError);
  c = {};
  c.weights = {0, 0, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(c.check(), ConfigError);
}

TEST_CASE("depth one forces a scalar root") {
  SchemaGenConfig c;
  c.max_depth = 1;
  util::Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_schema(c, rng);
    CHECK(s.kind != SchemaKind::Object);
    CHECK(s.kind != SchemaKind::Array);
  }
}

TEST_CASE("generated schemas respect depth and width") {
  util::Rng rng(2);
  const SchemaGenConfig c;
  std::set<SchemaKind> kinds;
  int max_seen = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_schema(c, rng);
    const auto [depth, width] = shape(s);
    CHECK(depth <= 5);
    CHECK(width <= 5);
    CHECK(depth == json::schema_depth(s));
    CHECK(objects_nonempty(s));
    CHECK(json::collect_unsupported(s).empty());
    CHECK_NOTHROW(json::parse_schema(json::schema_to_json(s)));
    kinds.insert(s.kind);
    max_seen = std::max(max_seen, depth);
  }
  CHECK(max_seen == 5);
  CHECK(kinds.size() >= 6);

  SchemaGenConfig narrow;
  narrow.max_depth = 3;
  narrow.max_width = 2;
  for (int i = 0; i < 300; ++i) {
    const auto [depth, width] = shape(random_schema(narrow, rng));
    CHECK(depth <= 3);
    CHECK(width <= 2);
  }
}

TEST_CASE("schema generation is seed-deterministic") {
  util::Rng a(99), b(99);
  for (int i = 0; i < 50; ++i) CHECK(json::schema_hash(random_schema({}, a)) == json::schema_hash(random_schema({}, b)));
}

TEST_CASE("conforming instances validate") {
  util::Rng rng(3);
  const SchemaGenConfig c;
  for (int i = 0; i < 10000; ++i) {
    const auto s = random_schema(c, rng);
    const auto v = conforming_instance(s, rng);
    REQUIRE(json::validate(v, s).valid());
  }
  util::Rng r(4);
  const auto boolean = schema_of(R"({"type":"boolean"})");
  CHECK(conforming_instance(boolean, r).is_bool());
  const auto e = schema_of(R"({"type":"string","enum":["x","y"]})");
  for (int i = 0; i < 20; ++i) {
    const auto v = conforming_instance(e, r);
    CHECK((v == Value("x") || v == Value("y")));
  }
  const auto unbounded = schema_of(R"({"type":"array","items":{"type":"null"}})");
  std::set<std::size_t> lengths;
  for (int i = 0; i < 200; ++i) lengths.insert(conforming_instance(unbounded, r).as_array().size());
  CHECK(lengths == std::set<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("value selection sample") {
  const auto s = schema_of(R"({"type":"object","properties":{"a":{"type":"integer"}},"required":["a"]})");
  util::Rng rng(5);
  const auto sample = value_selection_task(s, json::parse(R"({"a":7})"), rng);
  CHECK(sample.response == R"({"a":7})");
  CHECK(sample.kind == SampleKind::SchemaFollowing);
  CHECK(sample.schema_hash == json::schema_hash(s));
  CHECK(sample.prompt.find(json::serialize(json::schema_to_json(s))) != std::string::npos);
  CHECK(sample.prompt.find(prompt::kValueSelectionInstruction) == 0);
  const auto cands = parse_candidates(sample.prompt);
  CHECK(cands.size() == 2);
  CHECK(std::count(cands.begin(), cands.end(), Value(7)) >= 1);
  for (const auto& c : cands) CHECK(c.is_number());
}

TEST_CASE("candidates hold every leaf plus capped distractors") {
  util::Rng rng(6);
  const SchemaGenConfig c;
  for (int i = 0; i < 500; ++i) {
    const auto s = random_schema(c, rng);
    const auto v = conforming_instance(s, rng);
    const auto leaves = leaf_values(v);
    util::Rng r1(static_cast<std::uint64_t>(i)), r2(static_cast<std::uint64_t>(i));
    const auto sample = value_selection_task(s, v, r1);
    CHECK(sample.prompt == value_selection_task(s, v, r2).prompt);
    const auto cands = parse_candidates(sample.prompt);
    CHECK(cands.size() == leaves.size() + std::min<std::size_t>(leaves.size(), 20));
    std::multiset<std::string> have, need;
    for (const auto& x : cands) have.insert(json::serialize(x));
    for (const auto& x : leaves) need.insert(json::serialize(x));
    CHECK(std::includes(have.begin(), have.end(), need.begin(), need.end()));
    CHECK(json::validate(json::parse(sample.response), s).valid());
  }
}

TEST_CASE("mutation changes values but not structure") {
  util::Rng rng(7);
  const auto s = schema_of(R"({"type":"object","properties":{"a":{"type":"integer"}},"required":["a"]})");
  const auto m = mutate_values(json::parse(R"({"a":7})"), s, rng);
  CHECK_FALSE(m.no_mutation_possible);
  CHECK(m.value.get("a")->is_number());
  CHECK_FALSE(*m.value.get("a") == Value(7));

  const auto single = schema_of(R"({"type":"object","properties":{"k":{"enum":["only"]}},"required":["k"]})");
  const auto fixed = mutate_values(json::parse(R"({"k":"only"})"), single, rng);
  CHECK(fixed.no_mutation_possible);
  CHECK(fixed.value == json::parse(R"({"k":"only"})"));

  const SchemaGenConfig c;
  int mutated = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto schema = random_schema(c, rng);
    const auto v = conforming_instance(schema, rng);
    const auto out = mutate_values(v, schema, rng);
    REQUIRE(json::validate(out.value, schema).valid());
    std::map<std::string, Value> before, after;
    paths(v, "$", before);
    paths(out.value, "$", after);
    REQUIRE(before.size() == after.size());
    bool differs = false;
    for (const auto& [p, x] : before) {
      REQUIRE(after.count(p) == 1);
      differs = differs || !(after[p] == x);
    }
    if (out.no_mutation_possible) {
      CHECK(out.value == v);
    } else {
      CHECK(differs);
      ++mutated;
    }
  }
  CHECK(mutated > 800);
}

TEST_CASE("corpus building") {
  CorpusConfig cfg;
  cfg.seed = 42;
  const auto one = build_corpus(1, 1, cfg);
  REQUIRE(one.samples.size() == 1);
  CHECK(json::validate(json::parse(one.samples[0].response), one.schemas[0]).valid());

  const auto corpus = build_corpus(300, 2, cfg);
  CHECK(corpus.samples.size() == 600);
  std::set<std::string> hashes;
  for (const auto& s : corpus.schemas) hashes.insert(json::schema_hash(s));
  CHECK(hashes.size() == 300);
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    const auto& schema = corpus.schemas[i / 2];
    CHECK(corpus.samples[i].schema_hash == json::schema_hash(schema));
    CHECK(json::validate(json::parse(corpus.samples[i].response), schema).valid());
  }

  const std::string a = to_jsonl(corpus.samples);
  cfg.workers = 8;
  const std::string b = to_jsonl(build_corpus(300, 2, cfg).samples);
  CHECK(util::sha256_hex(a) == util::sha256_hex(b));
  cfg.seed = 43;
  CHECK(to_jsonl(build_corpus(300, 2, cfg).samples) != a);
  CHECK(from_jsonl(a) == corpus.samples);
}

TEST_CASE("tiny configs run out of distinct schemas") {
  SchemaGenConfig c;
  c.max_depth = 1;
  c.weights = {0, 0, 0, 0, 0, 1, 0};
  c.description_chance = 0;
  CHECK(distinct_schemas(1, c, 1).size() == 1);
  CHECK_THROWS_AS(distinct_schemas(2, c, 1), ConfigError);
}

TEST_CASE("mixing") {
  std::vector<TrainingSample> tasks, sf;
  for (int i = 0; i < 17500; ++i) tasks.push_back(task_sample(i));
  for (int i = 0; i < 2500; ++i) sf.push_back({"sf " + std::to_string(i), "1", SampleKind::SchemaFollowing, "h"});
  const auto mixed = mix(tasks, sf, {17500, 2500, 1});
  CHECK(mixed.size() == 20000);
  std::size_t n_task = 0;
  std::set<std::string> prompts;
  for (const auto& s : mixed) {
    n_task += s.kind == SampleKind::Task;
    prompts.insert(s.prompt);
  }
  CHECK(n_task == 17500);
  CHECK(prompts.size() == 20000);
  CHECK(ratio_string(17500, 2500) == "7:1");
  CHECK(mixed == mix(tasks, sf, {17500, 2500, 1}));
  CHECK_FALSE(mixed == mix(tasks, sf, {17500, 2500, 2}));

  const auto pure = mix(tasks, sf, {17500, 0, 1});
  CHECK(pure.size() == 17500);
  CHECK(ratio_string(20000, 0) == "1:0");
  CHECK(ratio_string(0, 0) == "0:0");
  CHECK(ratio_string(15000, 5000) == "3:1");
  CHECK_THROWS_AS(mix(tasks, sf, {30000, 0, 1}), PoolTooSmallError);
  CHECK_THROWS_AS(mix(tasks, sf, {0, 2501, 1}), PoolTooSmallError);
}

TEST_CASE("task samples and JSONL") {
  const auto inst = task::load_instance(task::Catalog::builtin(), std::string(SKETCH_FIXTURES) + "/topic_task.json");
  const auto samples = task_samples(inst, {{"Rain in Spain.", json::parse(R"({"tag":"World"})")}});
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].kind == SampleKind::Task);
  CHECK(samples[0].response == R"({"tag":"World"})");
  CHECK(samples[0].prompt.find("Rain in Spain.") != std::string::npos);
  const std::string line = to_jsonl(samples);
  CHECK(line.back() == '\n');
  CHECK(std::count(line.begin(), line.end(), '\n') == 1);
  const auto doc = json::parse(line);
  for (const char* k : {"prompt", "response", "kind", "schema_hash"}) CHECK(doc.get(k));
  CHECK(doc.get("kind")->as_string() == "task");
  CHECK(from_jsonl(line) == samples);
}
