#include "sketch/dataset/builder.hpp"

#include <array>
#include <numeric>
#include <unordered_set>

#include "sketch/json/text.hpp"
#include "sketch/json/validate.hpp"
#include "sketch/prompt/packager.hpp"
#include "sketch/prompt/template.hpp"
#include "sketch/util/parallel.hpp"

namespace sketch::dataset {

namespace {

using json::SchemaDoc;
using json::SchemaKind;
using json::Value;

constexpr std::array<const char*, 40> kWords = {
    "name",   "id",     "title",   "value",  "count",  "items",  "tags",    "score",  "type",    "status",
    "label",  "city",   "price",   "date",   "email",  "author", "level",   "kind",   "code",    "note",
    "amber",  "river",  "falcon",  "copper", "meadow", "summit", "harbor",  "lantern", "willow", "quartz",
    "orbit",  "cedar",  "velvet",  "tundra", "prism",  "marble", "saffron", "beacon", "glacier", "ember"};

// Strings that exercise escaping and multi-byte UTF-8 in the compiled automata.
constexpr std::array<const char*, 10> kTrickyStrings = {
    "say \"hi\"", "back\\slash", "a/b", "line\nbreak", "tab\there", "caf\xC3\xA9", "\xE4\xB8\xAD\xE6\x96\x87",
    "\xF0\x9F\x98\x80 ok", "", "ctrl\x01"};

enum class NodeKind { Object, Array, String, Integer, Number, Boolean, Enumeration };

std::string random_word(util::Rng& rng) { return kWords[rng.below(kWords.size())]; }

std::string random_string(util::Rng& rng) {
  const auto roll = rng.below(100);
  if (roll < 10) return kTrickyStrings[rng.below(kTrickyStrings.size())];
  if (roll < 40) return random_word(rng) + " " + random_word(rng);
  return random_word(rng);
}

Value random_integer(util::Rng& rng) { return Value(rng.range(-1000, 1000)); }

Value random_number(util::Rng& rng) {
  const auto roll = rng.below(10);
  std::string lexeme;
  if (roll < 4) {
    lexeme = std::to_string(rng.range(-1000, 1000));
  } else if (roll < 9) {
    lexeme = std::to_string(rng.range(-999, 999)) + "." + std::to_string(rng.range(0, 999));
  } else {
    lexeme = std::to_string(rng.range(1, 9)) + "." + std::to_string(rng.range(0, 99)) + "e" +
             std::to_string(rng.range(-12, 12));
  }
  return Value(*json::Number::from_lexeme(lexeme));
}

std::vector<std::string> distinct_words(util::Rng& rng, std::size_t n) {
  std::vector<std::string> pool(kWords.begin(), kWords.end());
  rng.shuffle(pool);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(i < pool.size() ? pool[i] : pool[i % pool.size()] + std::to_string(i / pool.size()));
  }
  return out;
}

NodeKind pick_kind(const KindWeights& w, bool leaf_only, util::Rng& rng) {
  const std::array<std::pair<NodeKind, double>, 7> table = {{{NodeKind::Object, leaf_only ? 0.0 : w.object},
                                                             {NodeKind::Array, leaf_only ? 0.0 : w.array},
                                                             {NodeKind::String, w.string},
                                                             {NodeKind::Integer, w.integer},
                                                             {NodeKind::Number, w.number},
                                                             {NodeKind::Boolean, w.boolean},
                                                             {NodeKind::Enumeration, w.enumeration}}};
  double total = 0;
  for (const auto& [k, weight] : table) total += weight;
  double u = rng.uniform01() * total;
  for (const auto& [k, weight] : table) {
    if (weight <= 0) continue;
    if (u < weight) return k;
    u -= weight;
  }
  for (auto it = table.rbegin(); it != table.rend(); ++it) {
    if (it->second > 0) return it->first;
  }
  return NodeKind::String;
}

SchemaDoc generate(const SchemaGenConfig& config, int depth, util::Rng& rng) {
  SchemaDoc doc;
  const NodeKind kind = pick_kind(config.weights, depth >= config.max_depth, rng);
  switch (kind) {
    case NodeKind::Object: {
      doc.kind = SchemaKind::Object;
      const auto width = static_cast<std::size_t>(rng.range(1, config.max_width));
      for (const auto& name : distinct_words(rng, width)) {
        doc.properties.push_back({name, std::make_shared<const SchemaDoc>(generate(config, depth + 1, rng))});
        if (rng.chance(config.required_chance)) doc.required.push_back(name);
      }
      break;
    }
    case NodeKind::Array:
      doc.kind = SchemaKind::Array;
      doc.items = std::make_shared<const SchemaDoc>(generate(config, depth + 1, rng));
      if (rng.chance(config.bounded_array_chance)) {
        const auto lo = static_cast<std::uint64_t>(rng.range(0, config.max_width));
        doc.min_items = lo;
        doc.max_items = static_cast<std::uint64_t>(rng.range(std::max<std::int64_t>(1, lo), config.max_width));
      }
      break;
    case NodeKind::String: doc.kind = SchemaKind::String; break;
    case NodeKind::Integer: doc.kind = SchemaKind::Integer; break;
    case NodeKind::Number: doc.kind = SchemaKind::Number; break;
    case NodeKind::Boolean: doc.kind = SchemaKind::Boolean; break;
    case NodeKind::Enumeration: {
      doc.kind = SchemaKind::String;
      const auto n = static_cast<std::size_t>(rng.range(1, static_cast<std::int64_t>(config.enum_pool_size)));
      std::vector<Value> members;
      for (auto& w : distinct_words(rng, n)) members.emplace_back(std::move(w));
      doc.enum_values = std::move(members);
      break;
    }
  }
  if (rng.chance(config.description_chance)) doc.description = "The " + random_word(rng) + " of this item.";
  return doc;
}

// Scalar leaves of `value` with the schema node that governs each one.
void collect_leaves(const Value& value, const SchemaDoc* schema, std::vector<std::pair<const Value*, const SchemaDoc*>>& out) {
  switch (value.kind()) {
    case json::Kind::Object:
      for (const auto& [key, member] : value.as_object()) {
        collect_leaves(member, schema ? schema->property(key) : nullptr, out);
      }
      break;
    case json::Kind::Array:
      for (const auto& item : value.as_array()) collect_leaves(item, schema ? schema->items.get() : nullptr, out);
      break;
    default:
      out.emplace_back(&value, schema);
  }
}

void collect_mutable(Value& value, const SchemaDoc* schema, std::vector<std::pair<Value*, const SchemaDoc*>>& out) {
  if (!schema) return;
  switch (value.kind()) {
    case json::Kind::Object:
      for (auto& [key, member] : value.as_object()) collect_mutable(member, schema->property(key), out);
      break;
    case json::Kind::Array:
      for (auto& item : value.as_array()) collect_mutable(item, schema->items.get(), out);
      break;
    case json::Kind::Null:
      break;
    default:
      if (schema->enum_values && schema->enum_values->size() < 2) break;
      out.emplace_back(&value, schema);
  }
}

Value mutate_leaf(const Value& current, const SchemaDoc& schema, util::Rng& rng) {
  if (schema.enum_values) {
    std::vector<const Value*> others;
    for (const auto& m : *schema.enum_values) {
      if (!json::semantically_equal(m, current)) others.push_back(&m);
    }
    return *others[rng.below(others.size())];
  }
  switch (current.kind()) {
    case json::Kind::Boolean:
      return Value(!current.as_bool());
    case json::Kind::String: {
      for (;;) {
        std::string s = random_string(rng);
        if (s != current.as_string()) return Value(std::move(s));
      }
    }
    case json::Kind::Number: {
      if (schema.kind == SchemaKind::Integer || current.as_number().is_integer()) {
        const auto v = current.as_number().as_int64();
        if (v && *v > -1000000 && *v < 1000000) {
          const std::int64_t delta = rng.range(1, 1000) * (rng.chance(0.5) ? 1 : -1);
          return Value(*v + delta);
        }
      }
      for (;;) {
        Value n = schema.kind == SchemaKind::Integer ? random_integer(rng) : random_number(rng);
        if (!(n == current)) return n;
      }
    }
    default:
      return current;
  }
}

std::string render_selection_prompt(const SchemaDoc& schema, const std::vector<Value>& candidates) {
  std::string prompt = prompt::kValueSelectionInstruction;
  prompt += "\n\n";
  prompt += prompt::kValueSelectionSchemaHeader;
  prompt += "\n";
  prompt += json::serialize(json::schema_to_json(schema));
  prompt += "\n\n";
  prompt += prompt::kValueSelectionCandidatesHeader;
  prompt += "\n";
  prompt += json::serialize(Value(json::Array(candidates)));
  prompt += "\n";
  return prompt;
}

}  // namespace

void SchemaGenConfig::check() const {
  if (max_depth < 1) throw ConfigError("max depth must be at least 1");
  if (max_width < 1) throw ConfigError("max width must be at least 1");
  if (enum_pool_size < 1) throw ConfigError("enum pool size must be at least 1");
  const KindWeights& w = weights;
  for (double x : {w.object, w.array, w.string, w.integer, w.number, w.boolean, w.enumeration}) {
    if (x < 0) throw ConfigError("kind weights must be non-negative");
  }
  if (w.string + w.integer + w.number + w.boolean + w.enumeration <= 0) {
    throw ConfigError("at least one scalar kind needs a positive weight");
  }
}

SchemaDoc random_schema(const SchemaGenConfig& config, util::Rng& rng) {
  config.check();
  return generate(config, 1, rng);
}

Value conforming_instance(const SchemaDoc& schema, util::Rng& rng) {
  if (schema.enum_values) return schema.enum_values->at(rng.below(schema.enum_values->size()));
  switch (schema.kind) {
    case SchemaKind::Object: {
      json::Object out;
      for (const auto& p : schema.properties) {
        if (schema.is_required(p.name) || rng.chance(0.5)) out.set(p.name, conforming_instance(*p.schema, rng));
      }
      return Value(std::move(out));
    }
    case SchemaKind::Array: {
      const std::uint64_t lo = schema.min_items.value_or(0);
      const std::uint64_t hi = schema.max_items.value_or(lo + 3);
      json::Array out;
      const auto n = static_cast<std::uint64_t>(rng.range(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
      if (n > 0 && !schema.items) throw ConfigError("cannot fill an array without an items schema");
      for (std::uint64_t i = 0; i < n; ++i) out.push_back(conforming_instance(*schema.items, rng));
      return Value(std::move(out));
    }
    case SchemaKind::String: return Value(random_string(rng));
    case SchemaKind::Integer: return random_integer(rng);
    case SchemaKind::Number: return random_number(rng);
    case SchemaKind::Boolean: return Value(rng.chance(0.5));
    case SchemaKind::Null: return Value(nullptr);
    case SchemaKind::Any:
    case SchemaKind::EnumOnly: break;
  }
  return Value(nullptr);
}

const char* sample_kind_name(SampleKind kind) { return kind == SampleKind::Task ? "task" : "schema_following"; }

std::vector<Value> leaf_values(const Value& value) {
  std::vector<std::pair<const Value*, const SchemaDoc*>> leaves;
  collect_leaves(value, nullptr, leaves);
  std::vector<Value> out;
  for (const auto& [v, s] : leaves) out.push_back(*v);
  return out;
}

std::vector<Value> selection_candidates(const SchemaDoc& schema, const Value& instance, util::Rng& rng,
                                        std::size_t max_distractors) {
  std::vector<std::pair<const Value*, const SchemaDoc*>> leaves;
  collect_leaves(instance, &schema, leaves);
  std::vector<Value> candidates;
  for (const auto& [v, s] : leaves) candidates.push_back(*v);
  const std::size_t k = std::min(leaves.size(), max_distractors);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& [v, s] = leaves[rng.below(leaves.size())];
    candidates.push_back(s ? conforming_instance(*s, rng) : *v);
  }
  rng.shuffle(candidates);
  return candidates;
}

TrainingSample value_selection_task(const SchemaDoc& schema, const Value& instance, util::Rng& rng,
                                    std::size_t max_distractors) {
  TrainingSample sample;
  sample.prompt = render_selection_prompt(schema, selection_candidates(schema, instance, rng, max_distractors));
  sample.response = json::serialize(instance);
  sample.kind = SampleKind::SchemaFollowing;
  sample.schema_hash = json::schema_hash(schema);
  return sample;
}

std::vector<Value> parse_candidates(std::string_view prompt) {
  const std::string header = std::string(prompt::kValueSelectionCandidatesHeader) + "\n";
  const auto at = prompt.find(header);
  if (at == std::string_view::npos) throw ParseError("prompt has no candidate list", 0);
  const Value list = json::parse_prefix(prompt, at + header.size()).value;
  if (!list.is_array()) throw ParseError("candidate list is not an array", at + header.size());
  return list.as_array();
}

Mutation mutate_values(const Value& instance, const SchemaDoc& schema, util::Rng& rng) {
  Mutation m{instance, false};
  std::vector<std::pair<Value*, const SchemaDoc*>> leaves;
  collect_mutable(m.value, &schema, leaves);
  if (leaves.empty()) {
    m.no_mutation_possible = true;
    return m;
  }
  const std::size_t forced = rng.below(leaves.size());
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (i == forced || rng.chance(0.5)) *leaves[i].first = mutate_leaf(*leaves[i].first, *leaves[i].second, rng);
  }
  return m;
}

std::vector<SchemaDoc> distinct_schemas(std::size_t count, const SchemaGenConfig& config, std::uint64_t seed) {
  config.check();
  std::vector<SchemaDoc> out;
  std::unordered_set<std::string> seen;
  util::Rng rng(util::derive_seed(seed, 0));
  std::size_t collisions = 0;
  while (out.size() < count) {
    SchemaDoc s = random_schema(config, rng);
    if (!seen.insert(json::schema_hash(s)).second) {
      if (++collisions > 100000) throw ConfigError("schema generator keeps repeating itself; widen the config");
      continue;
    }
    collisions = 0;
    out.push_back(std::move(s));
  }
  return out;
}

Corpus build_corpus(std::size_t schema_count, std::size_t samples_per_schema, const CorpusConfig& config) {
  Corpus corpus;
  corpus.schemas = distinct_schemas(schema_count, config.schema, config.seed);

  corpus.samples.resize(schema_count * samples_per_schema);
  const std::uint64_t sample_seed = util::derive_seed(config.seed, 1);
  util::parallel_for(schema_count, config.workers, [&](std::size_t i) {
    const SchemaDoc& schema = corpus.schemas[i];
    for (std::size_t j = 0; j < samples_per_schema; ++j) {
      const std::size_t slot = i * samples_per_schema + j;
      util::Rng rng(util::derive_seed(sample_seed, slot));
      const Value base = conforming_instance(schema, rng);
      const Mutation mutated = mutate_values(base, schema, rng);
      TrainingSample sample = value_selection_task(schema, mutated.value, rng);
      if (!json::validate(json::parse(sample.response), schema).valid()) {
        throw Error("generated sample " + std::to_string(slot) + " does not validate against its schema");
      }
      corpus.samples[slot] = std::move(sample);
    }
  });
  return corpus;
}

std::vector<TrainingSample> mix(const std::vector<TrainingSample>& task_pool,
                                const std::vector<TrainingSample>& schema_following_pool, const MixConfig& config) {
  if (config.task_count > task_pool.size()) throw PoolTooSmallError("task", config.task_count, task_pool.size());
  if (config.schema_following_count > schema_following_pool.size()) {
    throw PoolTooSmallError("schema-following", config.schema_following_count, schema_following_pool.size());
  }
  util::Rng rng(config.seed);
  auto draw = [&](const std::vector<TrainingSample>& pool, std::size_t n, std::vector<TrainingSample>& out) {
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    for (std::size_t i = 0; i < n; ++i) out.push_back(pool[order[i]]);
  };
  std::vector<TrainingSample> out;
  out.reserve(config.task_count + config.schema_following_count);
  draw(task_pool, config.task_count, out);
  draw(schema_following_pool, config.schema_following_count, out);
  rng.shuffle(out);
  return out;
}

std::string ratio_string(std::size_t a, std::size_t b) {
  const std::size_t g = std::gcd(a, b);
  if (g == 0) return "0:0";
  return std::to_string(a / g) + ":" + std::to_string(b / g);
}

std::vector<TrainingSample> task_samples(const task::TaskInstance& instance,
                                         const std::vector<std::pair<std::string, Value>>& examples) {
  const std::string hash = json::schema_hash(instance.output_format());
  std::vector<TrainingSample> out;
  out.reserve(examples.size());
  for (const auto& [input, gold] : examples) {
    out.push_back({prompt::package(instance, input).text, json::serialize(gold), SampleKind::Task, hash});
  }
  return out;
}

Value sample_to_json(const TrainingSample& sample) {
  json::Object o;
  o.set("prompt", sample.prompt);
  o.set("response", sample.response);
  o.set("kind", sample_kind_name(sample.kind));
  o.set("schema_hash", sample.schema_hash);
  return Value(std::move(o));
}

TrainingSample sample_from_json(const Value& doc) {
  auto text = [&](const char* key) {
    const Value* v = doc.get(key);
    if (!v || !v->is_string()) throw ParseError(std::string("sample needs a string \"") + key + "\"", 0);
    return v->as_string();
  };
  TrainingSample s;
  s.prompt = text("prompt");
  s.response = text("response");
  const std::string kind = text("kind");
  if (kind == "task") {
    s.kind = SampleKind::Task;
  } else if (kind == "schema_following") {
    s.kind = SampleKind::SchemaFollowing;
  } else {
    throw ParseError("unknown sample kind \"" + kind + "\"", 0);
  }
  s.schema_hash = text("schema_hash");
  return s;
}

std::string to_jsonl(const std::vector<TrainingSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    out += json::serialize(sample_to_json(s));
    out += '\n';
  }
  return out;
}

std::vector<TrainingSample> from_jsonl(std::string_view text) {
  std::vector<TrainingSample> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) out.push_back(sample_from_json(json::parse(line)));
    pos = end + 1;
  }
  return out;
}

Value schema_gen_config_to_json(const SchemaGenConfig& c) {
  auto num = [](double x) { return Value(*json::Number::from_lexeme(std::to_string(x))); };
  json::Object weights;
  weights.set("object", num(c.weights.object));
  weights.set("array", num(c.weights.array));
  weights.set("string", num(c.weights.string));
  weights.set("integer", num(c.weights.integer));
  weights.set("number", num(c.weights.number));
  weights.set("boolean", num(c.weights.boolean));
  weights.set("enum", num(c.weights.enumeration));
  json::Object o;
  o.set("maxDepth", c.max_depth);
  o.set("maxWidth", c.max_width);
  o.set("kindWeights", Value(std::move(weights)));
  o.set("enumPoolSize", static_cast<std::int64_t>(c.enum_pool_size));
  o.set("boundedArrayChance", num(c.bounded_array_chance));
  o.set("requiredChance", num(c.required_chance));
  o.set("descriptionChance", num(c.description_chance));
  return Value(std::move(o));
}

}  // namespace sketch::dataset
