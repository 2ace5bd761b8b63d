#include <doctest.h>

#include <string>

#include "sketch/eval/harness.hpp"
#include "sketch/generation/backend.hpp"
#include "sketch/json/text.hpp"
#include "sketch/util/file.hpp"

using namespace sketch;
using namespace sketch::eval;
using json::Value;

namespace {

std::string fixture_path(const char* file) { return std::string(SKETCH_FIXTURES) + "/" + file; }

gen::GenerationOutcome outcome(const char* text, const json::SchemaDoc& format) {
  return gen::validate_outcome(text, format, false);
}

std::vector<std::optional<Value>> preds(std::initializer_list<const char*> texts) {
  std::vector<std::optional<Value>> out;
  for (const char* t : texts) {
    if (t == nullptr) out.emplace_back(std::nullopt);
    else out.emplace_back(json::parse(t));
  }
  return out;
}

std::vector<Value> golds(std::initializer_list<const char*> texts) {
  std::vector<Value> out;
  for (const char* t : texts) out.push_back(json::parse(t));
  return out;
}

// Scripted backend that answers each input with its gold value.
gen::ScriptedBackend echo_gold(const EvalDataset& ds) {
  std::vector<gen::ScriptedBackend::Rule> rules;
  for (const auto& s : ds.samples) rules.push_back({s.input, json::serialize(s.gold)});
  return gen::ScriptedBackend(rules, std::nullopt);
}

}  // namespace

TEST_CASE("legal output ratio") {
  const auto topic = load_dataset(task::Catalog::builtin(), fixture_path("topic_eval.json"));
  const auto& fmt = topic.instance.output_format();
  std::vector<gen::GenerationOutcome> batch;
  for (const char* t : {R"({"tag":"World"})", R"({"tag":"Sports"})", R"({"tag":"Business"})", R"({"tag":"Sci/Tech"})",
                        R"({"tag":"World","extra":1})", R"({"tag":"Football"})"}) {
    batch.push_back(outcome(t, fmt));
  }
  const auto lor = legal_output_ratio(batch);
  CHECK(lor.total == 6);
  CHECK(lor.parsed == 6);
  CHECK(lor.valid == 5);
  CHECK(format_ratio(lor.ratio) == "0.833");

  std::vector<gen::GenerationOutcome> garbage = {outcome("nope", fmt), outcome("{", fmt)};
  const auto zero = legal_output_ratio(garbage);
  CHECK(zero.ratio == 0.0);
  CHECK(zero.parsed == 0);
  CHECK_THROWS_AS(legal_output_ratio({}), EmptyBatchError);
}

TEST_CASE("accuracy") {
  const auto g = golds({R"({"tag":"World"})", R"({"tag":"Sports"})", R"({"tag":"Business"})", R"({"tag":"Sci/Tech"})",
                        R"({"tag":"World"})", R"({"tag":"Sports"})", R"({"tag":"Business"})", R"({"tag":"Sci/Tech"})",
                        R"({"tag":"World"})", R"({"tag":"Sports"})"});
  auto p = preds({R"({"tag":"World"})", R"({"tag":"Sports"})", R"({"tag":"Business"})", R"({"tag":"Sci/Tech"})",
                  R"({"tag":"World"})", R"({"tag":"Sports"})", R"({"tag":"Business"})", R"({"tag":"Sci/Tech"})",
                  R"({"tag":"World"})", R"({"tag":"World"})"});
  CHECK(format_ratio(score_accuracy(p, g)) == "0.900");
  p[0] = std::nullopt;
  CHECK(format_ratio(score_accuracy(p, g)) == "0.800");
  CHECK(score_accuracy(preds({R"({"tag":"Sports"})"}), golds({R"({"tag":"Sports"})"})) == 1.0);
  CHECK(score_accuracy(preds({nullptr}), golds({R"({"tag":"Sports"})"})) == 0.0);
  CHECK_THROWS_AS(score_accuracy(preds({nullptr}), golds({"1", "2"})), LengthMismatchError);
}

TEST_CASE("micro F1") {
  const MatchSpec spec;
  const auto p = preds({R"([{"name":"A","entity_type":"person"},{"name":"B","entity_type":"location"}])"});
  const auto g = golds({R"([{"name":"A","entity_type":"person"},{"name":"B","entity_type":"organization"}])"});
  const auto c = micro_f1_counts(p, g, spec);
  CHECK(c.tp == 1);
  CHECK(c.fp == 1);
  CHECK(c.fn == 1);
  CHECK(format_ratio(c.f1()) == "0.500");
  CHECK(score_micro_f1(preds({R"([{"name":"B","entity_type":"organization"},{"name":"A","entity_type":"person"}])"}), g) == 1.0);
  CHECK(score_micro_f1(preds({"[]"}), g) == 0.0);
  CHECK(score_micro_f1(preds({nullptr}), g) == 0.0);
  CHECK(score_micro_f1(preds({"[]"}), golds({"[]"})) == 0.0);
  CHECK_THROWS_AS(score_micro_f1(preds({"[]", "[]"}), g), LengthMismatchError);

  // Micro averaging pools counts across samples: 3 TP, 1 FP, 2 FN.
  const auto pm = preds({R"([{"name":"A","entity_type":"person"}])",
                         R"([{"name":"B","entity_type":"location"},{"name":"C","entity_type":"person"},{"name":"X","entity_type":"others"}])"});
  const auto gm = golds({R"([{"name":"A","entity_type":"person"},{"name":"Z","entity_type":"person"}])",
                         R"([{"name":"B","entity_type":"location"},{"name":"C","entity_type":"person"},{"name":"Y","entity_type":"others"}])"});
  const auto cm = micro_f1_counts(pm, gm, spec);
  CHECK(cm.tp == 3);
  CHECK(cm.fp == 1);
  CHECK(cm.fn == 2);
  CHECK(cm.precision() == doctest::Approx(0.75));
  CHECK(cm.recall() == doctest::Approx(0.6));
  CHECK(cm.f1() == doctest::Approx(2 * 0.75 * 0.6 / 1.35));

  MatchSpec rel;
  rel.keys = {"head", "relation", "tail"};
  rel.list_key = "relations";
  const auto pr = preds({R"({"relations":[{"head":"a","relation":"r","tail":"b"}]})"});
  const auto gr = golds({R"({"relations":[{"head":"a","relation":"r","tail":"b"},{"head":"b","relation":"r","tail":"a"}]})"});
  CHECK(score_micro_f1(pr, gr, rel) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("dataset loading") {
  const auto& cat = task::Catalog::builtin();
  const auto ner = load_dataset(cat, fixture_path("ner_eval.json"));
  CHECK(ner.name == "ner-demo");
  CHECK(ner.metric == Metric::MicroF1Entities);
  CHECK(ner.samples.size() == 6);
  CHECK(ner.instance.schema_name() == "named_entity_recognition");

  Value doc = json::parse(util::read_file(fixture_path("topic_eval.json")));
  CHECK(dataset_from_json(cat, doc, SKETCH_FIXTURES).samples.size() == 10);
  doc.as_object().find("samples")->as_array()[0].as_object().set("gold", json::parse(R"({"tag":"Football"})"));
  CHECK_THROWS_AS(dataset_from_json(cat, doc, SKETCH_FIXTURES), SchemaError);
  CHECK_THROWS_AS(load_dataset(cat, fixture_path("missing.json")), IoError);
  CHECK(metric_from_name("accuracy_single_label") == Metric::AccuracySingleLabel);
  CHECK_FALSE(metric_from_name("bleu"));
}

TEST_CASE("run_eval with an echo backend scores perfectly") {
  const auto& cat = task::Catalog::builtin();
  for (const char* file : {"topic_eval.json", "ner_eval.json"}) {
    const auto ds = load_dataset(cat, fixture_path(file));
    gen::GenerationEngine engine;
    for (gen::Mode mode : {gen::Mode::Free, gen::Mode::Strict}) {
      EvalConfig cfg;
      cfg.generation.mode = mode;
      cfg.workers = 3;
      const auto r = run_eval(engine, echo_gold(ds), ds, cfg);
      CHECK(r.lor.ratio == 1.0);
      CHECK(r.metric_value == 1.0);
      CHECK(r.samples.size() == ds.samples.size());
      for (const auto& s : r.samples) CHECK(s.status == "ok");
    }
  }
}

TEST_CASE("uniform backend: strict dominates free") {
  const auto ds = load_dataset(task::Catalog::builtin(), fixture_path("ner_eval.json"));
  gen::GenerationEngine engine;
  gen::UniformBackend uniform;
  EvalConfig cfg;
  cfg.seed = 5;
  cfg.generation.max_tokens = 1000000;
  cfg.generation.mode = gen::Mode::Strict;
  const auto strict = run_eval(engine, uniform, ds, cfg);
  cfg.generation.mode = gen::Mode::Free;
  cfg.generation.max_tokens = 512;
  cfg.generation.attempts = 1;
  const auto unconstrained = run_eval(engine, uniform, ds, cfg);
  CHECK(strict.lor.ratio == 1.0);
  CHECK(unconstrained.lor.ratio <= 0.01);
  CHECK(strict.lor.ratio >= unconstrained.lor.ratio);
  for (const auto* r : {&strict, &unconstrained}) {
    CHECK(r->lor.valid <= r->lor.parsed);
    CHECK(r->lor.parsed <= r->lor.total);
    CHECK(r->metric_value >= 0.0);
    CHECK(r->metric_value <= 1.0);
  }
  for (const auto& s : unconstrained.samples) CHECK(s.status == "format_failure");

  // Parallelism does not change results.
  cfg.workers = 4;
  const auto again = run_eval(engine, uniform, ds, cfg);
  CHECK(json::serialize(report_to_json({unconstrained})) == json::serialize(report_to_json({again})));
}

TEST_CASE("report rendering") {
  const auto ds = load_dataset(task::Catalog::builtin(), fixture_path("topic_eval.json"));
  gen::GenerationEngine engine;
  EvalConfig cfg;
  cfg.generation.mode = gen::Mode::Free;
  const auto r = run_eval(engine, echo_gold(ds), ds, cfg);
  const std::string table = render_table({r});
  CHECK(table.find("L.O.R.") != std::string::npos);
  CHECK(table.find("F1/Acc.") != std::string::npos);
  CHECK(table.find("Avg.") != std::string::npos);
  CHECK(table.find("topic-demo") != std::string::npos);
  CHECK(table.find("1.000") != std::string::npos);
  const auto doc = report_to_json({r});
  CHECK(json::serialize(doc).find("topic-demo") != std::string::npos);
}
