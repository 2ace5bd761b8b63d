#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sketch/errors.hpp"
#include "sketch/generation/engine.hpp"
#include "sketch/json/value.hpp"
#include "sketch/task/catalog.hpp"
#include "sketch/task/instance.hpp"

namespace sketch::eval {

class EmptyBatchError : public Error {
 public:
  EmptyBatchError() : Error("cannot score an empty batch") {}
};

class LengthMismatchError : public Error {
 public:
  LengthMismatchError(std::size_t predictions, std::size_t golds)
      : Error(std::to_string(predictions) + " predictions for " + std::to_string(golds) + " gold values") {}
};

enum class Metric { MicroF1Entities, MicroF1Relations, AccuracySingleLabel };
const char* metric_name(Metric metric);
std::optional<Metric> metric_from_name(std::string_view name);

struct Sample {
  std::string input;
  json::Value gold;
};

struct EvalDataset {
  std::string name;
  task::TaskInstance instance;
  Metric metric = Metric::AccuracySingleLabel;
  std::vector<Sample> samples;
  std::string label_key = "tag";                                     // accuracy
  std::vector<std::string> match_keys = {"name", "entity_type"};     // micro-F1 tuple members
  std::optional<std::string> list_key;                               // micro-F1: member holding the list
};

/// `{"name", "taskInstance": {...} | "path", "metric", "samples": [{"input", "gold"}],
/// "labelKey"?, "matchKeys"?, "listKey"?}`. A taskInstance path is relative to
/// `base_dir`. Throws ParseError, InstanceInvalidError or SchemaError (for golds
/// that do not validate).
EvalDataset dataset_from_json(const task::Catalog& catalog, const json::Value& doc,
                              const std::filesystem::path& base_dir);
EvalDataset load_dataset(const task::Catalog& catalog, const std::filesystem::path& path);

struct LegalOutputRatio {
  double ratio = 0.0;
  std::size_t total = 0;
  std::size_t parsed = 0;
  std::size_t valid = 0;
};

/// valid / total, where valid means parsed and conforming. Throws EmptyBatchError.
LegalOutputRatio legal_output_ratio(std::span<const gen::GenerationOutcome> outcomes);

/// Exact match of `label_key`; a missing prediction (invalid output) is wrong.
double score_accuracy(std::span<const std::optional<json::Value>> predictions, std::span<const json::Value> golds,
                      std::string_view label_key = "tag");

struct MatchSpec {
  std::vector<std::string> keys = {"name", "entity_type"};
  std::optional<std::string> list_key;  // when the tuples sit in a member of an object
};

struct F1Counts {
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision() const;
  double recall() const;
  double f1() const;  // 0 when degenerate
};

/// Micro-averaged over the set of tuples per sample; a missing prediction
/// contributes only false negatives.
F1Counts micro_f1_counts(std::span<const std::optional<json::Value>> predictions, std::span<const json::Value> golds,
                         const MatchSpec& spec);
double score_micro_f1(std::span<const std::optional<json::Value>> predictions, std::span<const json::Value> golds,
                      const MatchSpec& spec = {});

struct EvalConfig {
  gen::GenerationConfig generation;  // mode, attempts, temperature, max tokens
  std::uint64_t seed = 0;            // per-sample seeds derive from (seed, index)
  unsigned workers = 1;
};

struct SampleResult {
  std::string status;  // ok | format_failure | backend_error
  std::string raw_text;
  std::optional<json::Value> value;
  bool valid = false;
  unsigned attempts = 0;
  std::string error;
};

struct DatasetReport {
  std::string dataset;
  std::string system;
  gen::Mode mode = gen::Mode::Free;
  Metric metric = Metric::AccuracySingleLabel;
  LegalOutputRatio lor;
  double metric_value = 0.0;
  std::vector<SampleResult> samples;
};

/// Packages, generates and scores every sample. Failures are recorded per
/// sample; UnsupportedSchemaError in strict mode aborts the run.
DatasetReport run_eval(gen::GenerationEngine& engine, const gen::ModelBackend& backend, const EvalDataset& dataset,
                       const EvalConfig& config);

json::Value report_to_json(const std::vector<DatasetReport>& reports);
/// Aligned text table: per system and mode an L.O.R. row and an F1/Acc. row,
/// one column per dataset plus the average.
std::string render_table(const std::vector<DatasetReport>& reports);

/// Three decimals, as in the report table.
std::string format_ratio(double value);

}  // namespace sketch::eval
