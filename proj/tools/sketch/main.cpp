// sketch: command-line front end for task schemas, task instances, generation,
// training data and evaluation.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sketch/constraint/dfa.hpp"
#include "sketch/constraint/vocabulary.hpp"
#include "sketch/dataset/builder.hpp"
#include "sketch/eval/harness.hpp"
#include "sketch/generation/backend.hpp"
#include "sketch/generation/engine.hpp"
#include "sketch/json/text.hpp"
#include "sketch/prompt/packager.hpp"
#include "sketch/prompt/template.hpp"
#include "sketch/task/catalog.hpp"
#include "sketch/task/instance.hpp"
#include "sketch/task/wizard.hpp"
#include "sketch/util/file.hpp"
#include "sketch/util/hash.hpp"

namespace fs = std::filesystem;
using namespace sketch;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kUsage = 2, kValidation = 3, kFormatFailure = 4, kUnsupported = 5 };

class UsageError : public Error {
 public:
  using Error::Error;
};

bool ci_mode() {
  const char* v = std::getenv("SKETCH_CI");
  return v && std::string(v) == "1";
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed) {
  if (!seed && ci_mode()) throw UsageError("--seed is required when SKETCH_CI=1");
  return seed.value_or(0);
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Globals {
  std::string schema_dir;

  task::Catalog catalog() const {
    return schema_dir.empty() ? task::Catalog::builtin() : task::Catalog::with_overrides(schema_dir);
  }
};

struct BackendOptions {
  std::string kind = "mock_uniform";
  std::string script;
  std::string base_url;
  std::string model = "default";
  int timeout = 60;
  unsigned retries = 2;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--backend", kind, "Model backend")
        ->check(CLI::IsMember({"mock_uniform", "scripted", "http"}))
        ->capture_default_str();
    cmd->add_option("--script", script, "Response script for the scripted backend (JSON)");
    cmd->add_option("--base-url", base_url, "Chat-completions base URL for the http backend");
    cmd->add_option("--model", model, "Model name sent to the http backend")->capture_default_str();
    cmd->add_option("--timeout", timeout, "HTTP timeout in seconds")->capture_default_str();
    cmd->add_option("--retries", retries, "HTTP retries after 5xx or transport errors")->capture_default_str();
  }

  bool is_http() const { return kind == "http"; }

  // `echo` supplies canned answers for a scripted backend without a script.
  std::unique_ptr<gen::ModelBackend> make(const eval::EvalDataset* echo = nullptr) const {
    if (kind == "mock_uniform") return std::make_unique<gen::UniformBackend>();
    if (kind == "scripted") {
      if (!script.empty()) return std::make_unique<gen::ScriptedBackend>(gen::ScriptedBackend::load(script));
      if (!echo) throw UsageError("the scripted backend needs --script");
      std::vector<gen::ScriptedBackend::Rule> rules;
      for (const auto& s : echo->samples) rules.push_back({s.input, json::serialize(s.gold)});
      return std::make_unique<gen::ScriptedBackend>(std::move(rules), std::nullopt);
    }
    if (base_url.empty()) throw UsageError("the http backend needs --base-url");
    gen::HttpConfig config;
    config.base_url = base_url;
    config.model = model;
    config.timeout = std::chrono::seconds(timeout);
    config.retries = retries;
    if (const char* key = std::getenv("SKETCH_API_KEY")) config.api_key = key;
    return std::make_unique<gen::HttpBackend>(std::move(config));
  }
};

struct GenerationOptions {
  std::size_t max_tokens = 65536;
  unsigned attempts = 3;
  double temperature = 1.0;
  bool lenient = false;
  std::string template_path;
  bool pretty_format = false;
  std::string vocab_path;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--max-tokens", max_tokens, "Token budget per attempt")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--attempts", attempts, "Attempts before giving up")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--temperature", temperature, "Sampling temperature (0 = greedy)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--lenient", lenient, "Accept JSON embedded in surrounding text (free mode)");
    cmd->add_option("--template", template_path, "Prompt template file");
    cmd->add_flag("--pretty-format", pretty_format, "Indent the output format in the prompt");
    cmd->add_option("--vocab", vocab_path, "Vocabulary file (.json or .tsv); bytes by default");
  }

  gen::GenerationConfig config(gen::Mode mode, std::uint64_t seed) const {
    gen::GenerationConfig c;
    c.mode = mode;
    c.max_tokens = max_tokens;
    c.attempts = attempts;
    c.temperature = temperature;
    c.seed = seed;
    c.lenient_parse = lenient;
    c.package.pretty_output_format = pretty_format;
    if (!template_path.empty()) c.package.template_text = util::read_file(template_path);
    return c;
  }

  gen::GenerationEngine engine() const {
    auto vocab = vocab_path.empty() ? std::make_shared<const constraint::Vocabulary>(constraint::Vocabulary::byte_level())
                                    : std::make_shared<const constraint::Vocabulary>(constraint::Vocabulary::load(vocab_path));
    return gen::GenerationEngine(std::move(vocab));
  }
};

fs::path manifest_path(const fs::path& out) {
  fs::path p = out;
  p.replace_extension(".manifest.json");
  return p;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
  } else {
    util::write_file(path, text);
  }
}

// ---- schemas -------------------------------------------------------------

int cmd_schemas_list(const Globals& g) {
  const task::Catalog catalog = g.catalog();
  std::size_t width = 0;
  for (const auto& s : catalog.schemas()) width = std::max(width, s.name.size());
  for (const auto& s : catalog.schemas()) {
    std::string fields;
    for (const auto& f : s.required_fields()) fields += (fields.empty() ? "" : ", ") + f;
    std::string line = s.name + std::string(width - s.name.size() + 2, ' ') + task::category_name(s.category);
    line += std::string(std::max<std::size_t>(2, 26 - std::string(task::category_name(s.category)).size()), ' ');
    line += "{" + fields + "}";
    if (!s.aliases.empty()) {
      std::string aliases;
      for (const auto& a : s.aliases) aliases += (aliases.empty() ? "" : ", ") + a;
      line += "  aliases: " + aliases;
    }
    std::cout << line << "\n";
  }
  return kOk;
}

int cmd_schemas_show(const Globals& g, const std::string& name) {
  const task::Catalog catalog = g.catalog();
  const task::TaskSchema& s = catalog.get(name);
  std::cout << json::serialize_pretty(s.spec_json) << "\n";
  return kOk;
}

// ---- task ----------------------------------------------------------------

struct TaskNewOptions {
  std::string schema;
  bool interactive = false;
  std::string from;
  std::string out;
};

int cmd_task_new(const Globals& g, const TaskNewOptions& o) {
  const task::Catalog catalog = g.catalog();
  std::string schema_name = o.schema;
  json::Value fields;
  if (o.interactive) {
    if (schema_name.empty()) throw UsageError("--interactive needs --schema");
    fields = task::run_wizard(catalog.get(schema_name), std::cin, std::cerr);
  } else {
    if (o.from.empty()) throw UsageError("give --interactive or --from <file>");
    json::Value doc = json::parse(util::read_file(o.from));
    const json::Value* inner = doc.get("fields");
    const json::Value* named = doc.get("schemaName");
    if (inner && named && named->is_string()) {
      if (schema_name.empty()) schema_name = named->as_string();
      fields = *inner;
    } else {
      fields = std::move(doc);
    }
    if (schema_name.empty()) throw UsageError("--schema is required when the file has no schemaName");
  }
  const task::TaskInstance instance = task::instantiate(catalog, schema_name, std::move(fields));
  if (o.out.empty() || o.out == "-") {
    std::cout << json::serialize_pretty(task::instance_to_json(instance)) << "\n";
  } else {
    task::save_instance(instance, o.out);
    std::cerr << "wrote " << instance.schema_name() << " task instance to " << o.out << "\n";
  }
  return kOk;
}

// ---- generate ------------------------------------------------------------

struct GenerateOptions {
  std::string task;
  std::optional<std::string> input;
  std::string input_file;
  bool strict = false;
  bool free = false;
  std::optional<std::uint64_t> seed;
  BackendOptions backend;
  GenerationOptions generation;
};

int cmd_generate(const Globals& g, const GenerateOptions& o) {
  const std::uint64_t seed = require_seed(o.seed);
  if (o.backend.is_http() && o.strict) throw UsageError("the http backend supports free mode only");
  const gen::Mode mode = (o.free || o.backend.is_http()) ? gen::Mode::Free : gen::Mode::Strict;

  std::vector<std::string> inputs;
  if (o.input) {
    inputs.push_back(*o.input);
  } else if (!o.input_file.empty()) {
    std::istringstream lines(util::read_file(o.input_file));
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) inputs.push_back(line);
    }
    if (inputs.empty()) throw UsageError("input file has no inputs");
  } else {
    throw UsageError("give --input or --input-file");
  }

  const task::Catalog catalog = g.catalog();
  const task::TaskInstance instance = task::load_instance(catalog, o.task);
  auto backend = o.backend.make();
  gen::GenerationEngine engine = o.generation.engine();
  int status = kOk;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const gen::GenerationConfig config = o.generation.config(mode, util::derive_seed(seed, i));
    try {
      const gen::GenerationOutcome outcome = engine.generate(*backend, instance, inputs[i], config);
      std::cout << json::serialize(*outcome.value) << "\n";
    } catch (const gen::FormatFailureError& e) {
      std::cerr << "format failure on input " << i + 1 << ": " << e.what() << "\n";
      std::cerr << json::format_report(e.last_outcome().report);
      std::cerr << "raw output:\n" << e.last_outcome().raw_text << "\n";
      status = kFormatFailure;
    }
  }
  return status;
}

// ---- dataset -------------------------------------------------------------

struct SchemaGenOptions {
  int max_depth = 5;
  int max_width = 5;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--max-depth", max_depth, "Schema nesting bound (root = 1)")->capture_default_str();
    cmd->add_option("--max-width", max_width, "Properties per object and array length bound")->capture_default_str();
  }

  dataset::SchemaGenConfig config() const {
    dataset::SchemaGenConfig c;
    c.max_depth = max_depth;
    c.max_width = max_width;
    return c;
  }
};

struct DatasetSchemasOptions {
  std::size_t count = 100;
  std::optional<std::uint64_t> seed;
  std::string out = "-";
  SchemaGenOptions gen;
};

int cmd_dataset_schemas(const DatasetSchemasOptions& o) {
  const std::uint64_t seed = require_seed(o.seed);
  std::string text;
  for (const auto& s : dataset::distinct_schemas(o.count, o.gen.config(), seed)) {
    text += json::serialize(json::schema_to_json(s)) + "\n";
  }
  write_text(o.out, text);
  if (o.out != "-") std::cerr << "wrote " << o.count << " schemas to " << o.out << "\n";
  return kOk;
}

struct DatasetSamplesOptions {
  std::size_t schemas = 100;
  std::size_t per_schema = 2;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned workers = default_workers();
  SchemaGenOptions gen;
};

int cmd_dataset_samples(const DatasetSamplesOptions& o) {
  const std::uint64_t seed = require_seed(o.seed);
  if (o.schemas == 0 || o.per_schema == 0) throw UsageError("--schemas and --per-schema must be positive");
  dataset::CorpusConfig config;
  config.schema = o.gen.config();
  config.seed = seed;
  config.workers = o.workers;
  const dataset::Corpus corpus = dataset::build_corpus(o.schemas, o.per_schema, config);
  const std::string jsonl = dataset::to_jsonl(corpus.samples);
  util::write_file(o.out, jsonl);

  json::Object manifest;
  manifest.set("kind", "schema_following");
  manifest.set("schemaCount", static_cast<std::int64_t>(o.schemas));
  manifest.set("samplesPerSchema", static_cast<std::int64_t>(o.per_schema));
  manifest.set("sampleCount", static_cast<std::int64_t>(corpus.samples.size()));
  manifest.set("seed", std::to_string(seed));
  manifest.set("templateVersion", prompt::kTemplateVersion);
  manifest.set("config", dataset::schema_gen_config_to_json(config.schema));
  manifest.set("output", fs::path(o.out).filename().string());
  manifest.set("sha256", util::sha256_hex(jsonl));
  const std::string text = json::serialize_pretty(json::Value(std::move(manifest))) + "\n";
  util::write_file(manifest_path(o.out), text);
  std::cout << text;
  return kOk;
}

struct DatasetTasksOptions {
  std::vector<std::string> datasets;
  std::string out;
};

int cmd_dataset_tasks(const Globals& g, const DatasetTasksOptions& o) {
  const task::Catalog catalog = g.catalog();
  std::vector<dataset::TrainingSample> samples;
  for (const auto& path : o.datasets) {
    const eval::EvalDataset ds = eval::load_dataset(catalog, path);
    std::vector<std::pair<std::string, json::Value>> examples;
    for (const auto& s : ds.samples) examples.emplace_back(s.input, s.gold);
    auto converted = dataset::task_samples(ds.instance, examples);
    samples.insert(samples.end(), converted.begin(), converted.end());
  }
  util::write_file(o.out, dataset::to_jsonl(samples));
  std::cout << "wrote " << samples.size() << " task samples to " << o.out << "\n";
  return kOk;
}

struct DatasetMixOptions {
  std::string task_pool;
  std::string sf_pool;
  std::size_t task_count = 0;
  std::size_t sf_count = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_dataset_mix(const DatasetMixOptions& o) {
  const std::uint64_t seed = require_seed(o.seed);
  std::vector<dataset::TrainingSample> task_pool, sf_pool;
  std::string task_text, sf_text;
  if (!o.task_pool.empty()) {
    task_text = util::read_file(o.task_pool);
    task_pool = dataset::from_jsonl(task_text);
  }
  if (!o.sf_pool.empty()) {
    sf_text = util::read_file(o.sf_pool);
    sf_pool = dataset::from_jsonl(sf_text);
  }
  const auto mixed = dataset::mix(task_pool, sf_pool, {o.task_count, o.sf_count, seed});
  const std::string jsonl = dataset::to_jsonl(mixed);
  util::write_file(o.out, jsonl);

  json::Object manifest;
  manifest.set("kind", "mix");
  manifest.set("taskCount", static_cast<std::int64_t>(o.task_count));
  manifest.set("schemaFollowingCount", static_cast<std::int64_t>(o.sf_count));
  manifest.set("sampleCount", static_cast<std::int64_t>(mixed.size()));
  manifest.set("ratio", dataset::ratio_string(o.task_count, o.sf_count));
  manifest.set("seed", std::to_string(seed));
  manifest.set("taskPoolSha256", util::sha256_hex(task_text));
  manifest.set("schemaFollowingPoolSha256", util::sha256_hex(sf_text));
  manifest.set("output", fs::path(o.out).filename().string());
  manifest.set("sha256", util::sha256_hex(jsonl));
  const std::string text = json::serialize_pretty(json::Value(std::move(manifest))) + "\n";
  util::write_file(manifest_path(o.out), text);
  std::cout << text;
  return kOk;
}

// ---- eval ----------------------------------------------------------------

struct EvalOptions {
  std::vector<std::string> datasets;
  std::string mode = "both";
  std::optional<std::uint64_t> seed;
  unsigned workers = default_workers();
  std::string out_dir = ".";
  BackendOptions backend;
  GenerationOptions generation;
};

int cmd_eval(const Globals& g, const EvalOptions& o) {
  const std::uint64_t seed = require_seed(o.seed);
  std::vector<gen::Mode> modes;
  if (o.mode == "strict" || o.mode == "both") modes.push_back(gen::Mode::Strict);
  if (o.mode == "free" || o.mode == "both") modes.push_back(gen::Mode::Free);
  if (o.backend.is_http() && o.mode != "free") throw UsageError("the http backend supports --mode free only");

  const task::Catalog catalog = g.catalog();
  std::vector<eval::EvalDataset> datasets;
  for (const auto& path : o.datasets) datasets.push_back(eval::load_dataset(catalog, path));

  gen::GenerationEngine engine = o.generation.engine();
  std::vector<eval::DatasetReport> reports;
  for (const auto mode : modes) {
    for (const auto& ds : datasets) {
      auto backend = o.backend.make(&ds);
      eval::EvalConfig config;
      config.generation = o.generation.config(mode, 0);
      config.seed = seed;
      config.workers = o.workers;
      reports.push_back(eval::run_eval(engine, *backend, ds, config));
    }
  }
  fs::create_directories(o.out_dir);
  const fs::path report_path = fs::path(o.out_dir) / "report.json";
  util::write_file(report_path, json::serialize_pretty(eval::report_to_json(reports)) + "\n");
  const std::string table = eval::render_table(reports);
  util::write_file(fs::path(o.out_dir) / "report.txt", table);
  std::cout << table;
  return kOk;
}

int report(const std::exception& e, int code) {
  std::cerr << "error: " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured-output engine: task schemas, constrained generation, training data and evaluation"};
  app.set_config("--config", "sketch.toml", "TOML file with option defaults");
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--schema-dir", globals.schema_dir, "Directory of task schema files overriding the builtin catalog");

  // schemas
  auto* schemas = app.add_subcommand("schemas", "Browse the task schema catalog");
  schemas->require_subcommand(1);
  auto* schemas_list = schemas->add_subcommand("list", "List task schemas");
  auto* schemas_show = schemas->add_subcommand("show", "Print a task schema");
  std::string show_name;
  schemas_show->add_option("name", show_name, "Schema name or alias")->required();

  // task
  auto* task_cmd = app.add_subcommand("task", "Create task instances");
  task_cmd->require_subcommand(1);
  auto* task_new = task_cmd->add_subcommand("new", "Create a validated task instance file");
  TaskNewOptions task_opts;
  task_new->add_option("--schema", task_opts.schema, "Task schema name or alias");
  auto* interactive = task_new->add_flag("--interactive", task_opts.interactive, "Fill in the fields on the terminal");
  auto* from = task_new->add_option("--from", task_opts.from, "JSON file with the instance fields");
  interactive->excludes(from);
  task_new->add_option("--out", task_opts.out, "Output file (stdout when omitted)");

  // generate
  auto* generate = app.add_subcommand("generate", "Generate structured output for a task instance");
  GenerateOptions gen_opts;
  generate->add_option("--task", gen_opts.task, "Task instance file")->required();
  auto* input = generate->add_option("--input", gen_opts.input, "Input text");
  auto* input_file = generate->add_option("--input-file", gen_opts.input_file, "File with one input per line");
  input->excludes(input_file);
  auto* strict = generate->add_flag("--strict", gen_opts.strict, "Constrained decoding (default)");
  auto* free_flag = generate->add_flag("--free", gen_opts.free, "Unconstrained generation, then validation");
  strict->excludes(free_flag);
  generate->add_option("--seed", gen_opts.seed, "Random seed");
  gen_opts.backend.add_to(generate);
  gen_opts.generation.add_to(generate);

  // dataset
  auto* dataset_cmd = app.add_subcommand("dataset", "Build training data");
  dataset_cmd->require_subcommand(1);
  auto* ds_schemas = dataset_cmd->add_subcommand("schemas", "Draw random JSON schemas (JSONL)");
  DatasetSchemasOptions schemas_opts;
  ds_schemas->add_option("--count", schemas_opts.count, "Number of schemas")->capture_default_str();
  ds_schemas->add_option("--seed", schemas_opts.seed, "Random seed");
  ds_schemas->add_option("--out", schemas_opts.out, "Output file")->capture_default_str();
  schemas_opts.gen.add_to(ds_schemas);

  auto* ds_samples = dataset_cmd->add_subcommand("samples", "Schema-following value-selection samples (JSONL)");
  DatasetSamplesOptions samples_opts;
  ds_samples->add_option("--schemas", samples_opts.schemas, "Number of distinct schemas")->capture_default_str();
  ds_samples->add_option("--per-schema", samples_opts.per_schema, "Samples per schema")->capture_default_str();
  ds_samples->add_option("--seed", samples_opts.seed, "Random seed");
  ds_samples->add_option("--out", samples_opts.out, "Output JSONL file")->required();
  ds_samples->add_option("--workers", samples_opts.workers, "Worker threads")->check(CLI::PositiveNumber);
  samples_opts.gen.add_to(ds_samples);

  auto* ds_tasks = dataset_cmd->add_subcommand("tasks", "Task samples from eval dataset files (JSONL)");
  DatasetTasksOptions tasks_opts;
  ds_tasks->add_option("--dataset", tasks_opts.datasets, "Eval dataset file (repeatable)")->required();
  ds_tasks->add_option("--out", tasks_opts.out, "Output JSONL file")->required();

  auto* ds_mix = dataset_cmd->add_subcommand("mix", "Mix task and schema-following samples");
  DatasetMixOptions mix_opts;
  ds_mix->add_option("--task-pool", mix_opts.task_pool, "JSONL pool of task samples");
  ds_mix->add_option("--sf-pool", mix_opts.sf_pool, "JSONL pool of schema-following samples");
  ds_mix->add_option("--task", mix_opts.task_count, "Task samples to draw")->capture_default_str();
  ds_mix->add_option("--sf", mix_opts.sf_count, "Schema-following samples to draw")->capture_default_str();
  ds_mix->add_option("--seed", mix_opts.seed, "Random seed");
  ds_mix->add_option("--out", mix_opts.out, "Output JSONL file")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score a backend on eval datasets");
  EvalOptions eval_opts;
  eval_cmd->add_option("--dataset", eval_opts.datasets, "Eval dataset file (repeatable)")->required();
  eval_cmd->add_option("--mode", eval_opts.mode, "Generation mode")
      ->check(CLI::IsMember({"strict", "free", "both"}))
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval_opts.seed, "Random seed");
  eval_cmd->add_option("--workers", eval_opts.workers, "Worker threads")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out-dir", eval_opts.out_dir, "Directory for report.json and report.txt")->capture_default_str();
  eval_opts.backend.add_to(eval_cmd);
  eval_opts.generation.add_to(eval_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (schemas_list->parsed()) return cmd_schemas_list(globals);
    if (schemas_show->parsed()) return cmd_schemas_show(globals, show_name);
    if (task_new->parsed()) return cmd_task_new(globals, task_opts);
    if (generate->parsed()) return cmd_generate(globals, gen_opts);
    if (ds_schemas->parsed()) return cmd_dataset_schemas(schemas_opts);
    if (ds_samples->parsed()) return cmd_dataset_samples(samples_opts);
    if (ds_tasks->parsed()) return cmd_dataset_tasks(globals, tasks_opts);
    if (ds_mix->parsed()) return cmd_dataset_mix(mix_opts);
    if (eval_cmd->parsed()) return cmd_eval(globals, eval_opts);
  } catch (const gen::FormatFailureError& e) {
    return report(e, kFormatFailure);
  } catch (const UnsupportedSchemaError& e) {
    return report(e, kUnsupported);
  } catch (const constraint::StateBlowupError& e) {
    return report(e, kUnsupported);
  } catch (const task::InstanceInvalidError& e) {
    return report(e, kValidation);
  } catch (const task::BadOutputFormatError& e) {
    return report(e, kValidation);
  } catch (const SchemaError& e) {
    return report(e, kValidation);
  } catch (const dataset::PoolTooSmallError& e) {
    return report(e, kValidation);
  } catch (const UsageError& e) {
    return report(e, kUsage);
  } catch (const task::UnknownSchemaError& e) {
    return report(e, kUsage);
  } catch (const task::WizardAbortedError& e) {
    return report(e, kUsage);
  } catch (const prompt::EmptyInputError& e) {
    return report(e, kUsage);
  } catch (const IoError& e) {
    return report(e, kUsage);
  } catch (const ParseError& e) {
    return report(e, kUsage);
  } catch (const constraint::VocabularyError& e) {
    return report(e, kUsage);
  } catch (const dataset::ConfigError& e) {
    return report(e, kUsage);
  } catch (const std::exception& e) {
    return report(e, kOther);
  }
  return kOk;
}
