#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sketch/errors.hpp"
#include "sketch/json/schema.hpp"
#include "sketch/json/value.hpp"
#include "sketch/task/instance.hpp"
#include "sketch/util/rng.hpp"

namespace sketch::dataset {

class ConfigError : public Error {
 public:
  using Error::Error;
};

class PoolTooSmallError : public Error {
 public:
  PoolTooSmallError(const std::string& pool, std::size_t requested, std::size_t available)
      : Error("requested " + std::to_string(requested) + " " + pool + " samples but the pool holds " +
              std::to_string(available)) {}
};

/// Relative draw weights for schema node kinds. `enumeration` is a string enum.
struct KindWeights {
  double object = 0.30;
  double array = 0.20;
  double string = 0.15;
  double integer = 0.10;
  double number = 0.10;
  double boolean = 0.05;
  double enumeration = 0.10;
};

/// Depth counts nesting levels with the root at 1. Width bounds both the
/// property count of objects and the length of arrays.
struct SchemaGenConfig {
  int max_depth = 5;
  int max_width = 5;
  KindWeights weights;
  std::size_t enum_pool_size = 6;     // largest enum drawn
  double bounded_array_chance = 0.25;  // arrays that get minItems/maxItems
  double required_chance = 0.6;
  double description_chance = 0.3;

  /// Throws ConfigError.
  void check() const;
};

json::SchemaDoc random_schema(const SchemaGenConfig& config, util::Rng& rng);

/// A random value that validates against `schema`, with object members in
/// declaration order. Unbounded arrays get 0..3 items.
json::Value conforming_instance(const json::SchemaDoc& schema, util::Rng& rng);

enum class SampleKind { Task, SchemaFollowing };
const char* sample_kind_name(SampleKind kind);

/// One fine-tuning pair: prompt (X) and response (Y).
struct TrainingSample {
  std::string prompt;
  std::string response;
  SampleKind kind = SampleKind::SchemaFollowing;
  std::string schema_hash;
  friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

/// Scalar leaves (strings, numbers, booleans, null) in document order.
std::vector<json::Value> leaf_values(const json::Value& value);

/// Candidate values in the order the value-selection prompt lists them.
std::vector<json::Value> selection_candidates(const json::SchemaDoc& schema, const json::Value& instance,
                                              util::Rng& rng, std::size_t max_distractors = 20);

/// The value-selection task: schema plus shuffled candidates (instance leaves and
/// as many type-plausible distractors, at most `max_distractors`) in the prompt,
/// the compact instance as response.
TrainingSample value_selection_task(const json::SchemaDoc& schema, const json::Value& instance, util::Rng& rng,
                                    std::size_t max_distractors = 20);

/// Extracts the candidate list from a value-selection prompt.
std::vector<json::Value> parse_candidates(std::string_view prompt);

struct Mutation {
  json::Value value;
  bool no_mutation_possible = false;  // every leaf is fixed by the schema
};

/// Changes leaf values but not structure; the result still validates.
Mutation mutate_values(const json::Value& instance, const json::SchemaDoc& schema, util::Rng& rng);

/// `count` structurally distinct schemas (duplicates by schema_hash are redrawn).
std::vector<json::SchemaDoc> distinct_schemas(std::size_t count, const SchemaGenConfig& config, std::uint64_t seed);

struct CorpusConfig {
  SchemaGenConfig schema;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct Corpus {
  std::vector<json::SchemaDoc> schemas;
  std::vector<TrainingSample> samples;  // schema-major order
};

/// Draws `schema_count` structurally distinct schemas and `samples_per_schema`
/// value-selection samples for each. Output does not depend on `workers`.
Corpus build_corpus(std::size_t schema_count, std::size_t samples_per_schema, const CorpusConfig& config);

struct MixConfig {
  std::size_t task_count = 0;
  std::size_t schema_following_count = 0;
  std::uint64_t seed = 0;
};

/// Draws exact counts from each pool without replacement and shuffles the union.
/// Throws PoolTooSmallError.
std::vector<TrainingSample> mix(const std::vector<TrainingSample>& task_pool,
                                const std::vector<TrainingSample>& schema_following_pool, const MixConfig& config);

/// "a:b" reduced by the greatest common divisor, e.g. 17500, 2500 -> "7:1".
std::string ratio_string(std::size_t a, std::size_t b);

/// Task samples: packaged prompt per input, compact gold as response.
std::vector<TrainingSample> task_samples(const task::TaskInstance& instance,
                                         const std::vector<std::pair<std::string, json::Value>>& examples);

json::Value sample_to_json(const TrainingSample& sample);
TrainingSample sample_from_json(const json::Value& doc);
/// One compact JSON object per line, newline-terminated.
std::string to_jsonl(const std::vector<TrainingSample>& samples);
std::vector<TrainingSample> from_jsonl(std::string_view text);

json::Value schema_gen_config_to_json(const SchemaGenConfig& config);

}  // namespace sketch::dataset
