#include "sketch/eval/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "sketch/json/text.hpp"
#include "sketch/json/validate.hpp"
#include "sketch/util/file.hpp"
#include "sketch/util/parallel.hpp"
#include "sketch/util/rng.hpp"

namespace sketch::eval {

namespace {

json::Value ratio_value(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return json::Value(*json::Number::from_lexeme(buf));
}

const json::Value& member(const json::Value& doc, const char* key) {
  const json::Value* v = doc.get(key);
  if (!v) throw ParseError(std::string("eval dataset is missing \"") + key + "\"", 0);
  return *v;
}

std::vector<std::string> string_list(const json::Value& v, const char* key) {
  if (!v.is_array()) throw ParseError(std::string("\"") + key + "\" must be an array of strings", 0);
  std::vector<std::string> out;
  for (const auto& s : v.as_array()) {
    if (!s.is_string()) throw ParseError(std::string("\"") + key + "\" must be an array of strings", 0);
    out.push_back(s.as_string());
  }
  return out;
}

std::set<std::string> tuples(const json::Value& value, const MatchSpec& spec) {
  const json::Value* list = &value;
  if (spec.list_key && value.is_object()) {
    list = value.get(*spec.list_key);
    if (!list) return {};
  }
  std::vector<const json::Value*> items;
  if (list->is_array()) {
    for (const auto& item : list->as_array()) items.push_back(&item);
  } else {
    items.push_back(list);
  }
  std::set<std::string> out;
  for (const auto* item : items) {
    std::string key;
    for (const auto& k : spec.keys) {
      const json::Value* v = item->get(k);
      key += v ? json::serialize(*v) : std::string(1, '\0');
      key += '\x1f';
    }
    out.insert(std::move(key));
  }
  return out;
}

}  // namespace

const char* metric_name(Metric metric) {
  switch (metric) {
    case Metric::MicroF1Entities: return "micro_f1_entities";
    case Metric::MicroF1Relations: return "micro_f1_relations";
    case Metric::AccuracySingleLabel: return "accuracy_single_label";
  }
  return "?";
}

std::optional<Metric> metric_from_name(std::string_view name) {
  for (auto m : {Metric::MicroF1Entities, Metric::MicroF1Relations, Metric::AccuracySingleLabel}) {
    if (name == metric_name(m)) return m;
  }
  return std::nullopt;
}

EvalDataset dataset_from_json(const task::Catalog& catalog, const json::Value& doc,
                              const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ParseError("eval dataset must be a JSON object", 0);
  const json::Value& name = member(doc, "name");
  if (!name.is_string()) throw ParseError("eval dataset \"name\" must be a string", 0);
  const json::Value& inst = member(doc, "taskInstance");
  task::TaskInstance instance = inst.is_string()
                                    ? task::load_instance(catalog, base_dir / inst.as_string())
                                    : task::instance_from_json(catalog, inst);
  const json::Value& metric = member(doc, "metric");
  auto parsed_metric = metric.is_string() ? metric_from_name(metric.as_string()) : std::nullopt;
  if (!parsed_metric) throw ParseError("unknown metric in eval dataset", 0);

  EvalDataset ds;
  ds.name = name.as_string();
  ds.instance = std::move(instance);
  ds.metric = *parsed_metric;
  if (const auto* k = doc.get("labelKey")) {
    if (!k->is_string()) throw ParseError("\"labelKey\" must be a string", 0);
    ds.label_key = k->as_string();
  }
  if (const auto* k = doc.get("matchKeys")) ds.match_keys = string_list(*k, "matchKeys");
  if (const auto* k = doc.get("listKey")) {
    if (!k->is_string()) throw ParseError("\"listKey\" must be a string", 0);
    ds.list_key = k->as_string();
  }
  const json::Value& samples = member(doc, "samples");
  if (!samples.is_array()) throw ParseError("\"samples\" must be an array", 0);
  for (std::size_t i = 0; i < samples.as_array().size(); ++i) {
    const auto& s = samples.as_array()[i];
    const json::Value* input = s.get("input");
    const json::Value* gold = s.get("gold");
    if (!input || !input->is_string() || !gold) {
      throw ParseError("sample " + std::to_string(i) + " needs a string \"input\" and a \"gold\"", 0);
    }
    const auto report = json::validate(*gold, ds.instance.output_format(), {.lenient = true});
    if (!report.valid()) {
      throw SchemaError("gold of sample " + std::to_string(i) + " does not match the output format:\n" +
                        json::format_report(report));
    }
    ds.samples.push_back({input->as_string(), *gold});
  }
  return ds;
}

EvalDataset load_dataset(const task::Catalog& catalog, const std::filesystem::path& path) {
  return dataset_from_json(catalog, json::parse(util::read_file(path)), path.parent_path());
}

LegalOutputRatio legal_output_ratio(std::span<const gen::GenerationOutcome> outcomes) {
  if (outcomes.empty()) throw EmptyBatchError();
  LegalOutputRatio r;
  r.total = outcomes.size();
  for (const auto& o : outcomes) {
    if (o.value) ++r.parsed;
    if (o.value && o.valid()) ++r.valid;
  }
  r.ratio = static_cast<double>(r.valid) / static_cast<double>(r.total);
  return r;
}

double score_accuracy(std::span<const std::optional<json::Value>> predictions, std::span<const json::Value> golds,
                      std::string_view label_key) {
  if (predictions.size() != golds.size()) throw LengthMismatchError(predictions.size(), golds.size());
  if (golds.empty()) throw EmptyBatchError();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (!predictions[i]) continue;
    const json::Value* gold_label = golds[i].get(label_key);
    if (gold_label) {
      const json::Value* pred_label = predictions[i]->get(label_key);
      if (pred_label && json::semantically_equal(*pred_label, *gold_label)) ++correct;
    } else if (json::semantically_equal(*predictions[i], golds[i])) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(golds.size());
}

double F1Counts::precision() const { return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp); }
double F1Counts::recall() const { return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn); }
double F1Counts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

F1Counts micro_f1_counts(std::span<const std::optional<json::Value>> predictions, std::span<const json::Value> golds,
                         const MatchSpec& spec) {
  if (predictions.size() != golds.size()) throw LengthMismatchError(predictions.size(), golds.size());
  F1Counts c;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const std::set<std::string> gold = tuples(golds[i], spec);
    const std::set<std::string> pred = predictions[i] ? tuples(*predictions[i], spec) : std::set<std::string>{};
    for (const auto& t : pred) {
      if (gold.count(t)) {
        ++c.tp;
      } else {
        ++c.fp;
      }
    }
    for (const auto& t : gold) {
      if (!pred.count(t)) ++c.fn;
    }
  }
  return c;
}

double score_micro_f1(std::span<const std::optional<json::Value>> predictions, std::span<const json::Value> golds,
                      const MatchSpec& spec) {
  return micro_f1_counts(predictions, golds, spec).f1();
}

DatasetReport run_eval(gen::GenerationEngine& engine, const gen::ModelBackend& backend, const EvalDataset& dataset,
                       const EvalConfig& config) {
  const std::size_t n = dataset.samples.size();
  if (n == 0) throw EmptyBatchError();
  if (config.generation.mode == gen::Mode::Strict) engine.mask_index(dataset.instance.output_format());

  std::vector<gen::GenerationOutcome> outcomes(n);
  DatasetReport report;
  report.dataset = dataset.name;
  report.system = backend.name();
  report.mode = config.generation.mode;
  report.metric = dataset.metric;
  report.samples.resize(n);

  util::parallel_for(n, config.workers, [&](std::size_t i) {
    gen::GenerationConfig gc = config.generation;
    gc.seed = util::derive_seed(config.seed, i);
    SampleResult& result = report.samples[i];
    try {
      outcomes[i] = engine.generate(backend, dataset.instance, dataset.samples[i].input, gc);
      result.status = "ok";
    } catch (const gen::FormatFailureError& e) {
      outcomes[i] = e.last_outcome();
      result.status = "format_failure";
    } catch (const gen::BackendError& e) {
      outcomes[i] = gen::GenerationOutcome{};
      outcomes[i].mode_used = gc.mode;
      outcomes[i].report.violations.push_back({"$", "backend", e.what()});
      result.status = "backend_error";
      result.error = e.what();
    }
    result.raw_text = outcomes[i].raw_text;
    result.value = outcomes[i].value;
    result.valid = outcomes[i].valid();
    result.attempts = outcomes[i].attempts_used;
  });

  report.lor = legal_output_ratio(outcomes);
  std::vector<std::optional<json::Value>> predictions(n);
  std::vector<json::Value> golds(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (outcomes[i].valid()) predictions[i] = outcomes[i].value;
    golds[i] = dataset.samples[i].gold;
  }
  if (dataset.metric == Metric::AccuracySingleLabel) {
    report.metric_value = score_accuracy(predictions, golds, dataset.label_key);
  } else {
    report.metric_value = score_micro_f1(predictions, golds, {dataset.match_keys, dataset.list_key});
  }
  return report;
}

std::string format_ratio(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  return buf;
}

json::Value report_to_json(const std::vector<DatasetReport>& reports) {
  json::Array runs;
  for (const auto& r : reports) {
    json::Array samples;
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
      const auto& s = r.samples[i];
      json::Object o;
      o.set("index", static_cast<std::int64_t>(i));
      o.set("status", s.status);
      o.set("valid", s.valid);
      o.set("attempts", static_cast<std::int64_t>(s.attempts));
      o.set("output", s.value ? *s.value : json::Value(nullptr));
      if (!s.value) o.set("rawText", s.raw_text);
      if (!s.error.empty()) o.set("error", s.error);
      samples.emplace_back(std::move(o));
    }
    json::Object o;
    o.set("dataset", r.dataset);
    o.set("system", r.system);
    o.set("mode", gen::mode_name(r.mode));
    o.set("metric", metric_name(r.metric));
    o.set("legalOutputRatio", ratio_value(r.lor.ratio));
    o.set("metricValue", ratio_value(r.metric_value));
    o.set("total", static_cast<std::int64_t>(r.lor.total));
    o.set("parsed", static_cast<std::int64_t>(r.lor.parsed));
    o.set("valid", static_cast<std::int64_t>(r.lor.valid));
    o.set("samples", json::Value(std::move(samples)));
    runs.emplace_back(std::move(o));
  }

  // Averages over datasets per (system, mode), in first-seen order.
  std::vector<std::pair<std::string, gen::Mode>> systems;
  for (const auto& r : reports) {
    auto key = std::make_pair(r.system, r.mode);
    if (std::find(systems.begin(), systems.end(), key) == systems.end()) systems.push_back(key);
  }
  json::Array averages;
  for (const auto& [system, mode] : systems) {
    double lor = 0, metric = 0;
    std::size_t count = 0;
    for (const auto& r : reports) {
      if (r.system != system || r.mode != mode) continue;
      lor += r.lor.ratio;
      metric += r.metric_value;
      ++count;
    }
    json::Object o;
    o.set("system", system);
    o.set("mode", gen::mode_name(mode));
    o.set("legalOutputRatio", ratio_value(lor / static_cast<double>(count)));
    o.set("metricValue", ratio_value(metric / static_cast<double>(count)));
    averages.emplace_back(std::move(o));
  }
  json::Object doc;
  doc.set("runs", json::Value(std::move(runs)));
  doc.set("averages", json::Value(std::move(averages)));
  return json::Value(std::move(doc));
}

std::string render_table(const std::vector<DatasetReport>& reports) {
  std::vector<std::string> datasets;
  std::vector<std::pair<std::string, gen::Mode>> systems;
  for (const auto& r : reports) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
    auto key = std::make_pair(r.system, r.mode);
    if (std::find(systems.begin(), systems.end(), key) == systems.end()) systems.push_back(key);
  }

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"System", "Metric"};
  header.insert(header.end(), datasets.begin(), datasets.end());
  header.push_back("Avg.");
  rows.push_back(header);
  for (const auto& [system, mode] : systems) {
    std::vector<std::string> lor_row = {system + " (" + gen::mode_name(mode) + ")", "L.O.R."};
    std::vector<std::string> metric_row = {"", "F1/Acc."};
    double lor_sum = 0, metric_sum = 0;
    std::size_t count = 0;
    for (const auto& d : datasets) {
      auto it = std::find_if(reports.begin(), reports.end(), [&](const DatasetReport& r) {
        return r.dataset == d && r.system == system && r.mode == mode;
      });
      if (it == reports.end()) {
        lor_row.push_back("-");
        metric_row.push_back("-");
        continue;
      }
      lor_row.push_back(format_ratio(it->lor.ratio));
      metric_row.push_back(format_ratio(it->metric_value));
      lor_sum += it->lor.ratio;
      metric_sum += it->metric_value;
      ++count;
    }
    lor_row.push_back(count ? format_ratio(lor_sum / static_cast<double>(count)) : "-");
    metric_row.push_back(count ? format_ratio(metric_sum / static_cast<double>(count)) : "-");
    rows.push_back(std::move(lor_row));
    rows.push_back(std::move(metric_row));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      line += row[c];
      if (c + 1 < row.size()) line.append(width[c] - row[c].size(), ' ');
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace sketch::eval
