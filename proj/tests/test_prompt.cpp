#include <doctest.h>

#include <string>

#include "sketch/json/text.hpp"
#include "sketch/prompt/packager.hpp"
#include "sketch/prompt/template.hpp"
#include "sketch/task/instance.hpp"
#include "sketch/util/file.hpp"
#include "sketch/util/rng.hpp"

using namespace sketch;

namespace {

task::TaskInstance load(const char* file) {
  return task::load_instance(task::Catalog::builtin(), std::string(SKETCH_FIXTURES) + "/" + file);
}

const char* kHeadline = "Kamala Harris pledges 'new way forward' in historic convention speech";

std::vector<std::string> labels(const prompt::PackagedPrompt& p) {
  std::vector<std::string> out;
  for (const auto& s : p.sections) out.push_back(s.label);
  return out;
}

}  // namespace

TEST_CASE("NER prompt has all four sections") {
  const auto ner = load("ner_task.json");
  const auto p = prompt::package(ner, kHeadline);
  CHECK(labels(p) == std::vector<std::string>{"Task Description", "Label Architecture", "Output Format", "Input Data"});
  for (const char* h : {"[Task Description]", "[Label Architecture]", "[Output Format (Json Schema)]", "[Input Data]"}) {
    CHECK(p.text.find(h) != std::string::npos);
  }
  CHECK(p.text.find("[Task Description]") < p.text.find("[Label Architecture]"));
  CHECK(p.text.find("[Label Architecture]") < p.text.find("[Output Format (Json Schema)]"));
  CHECK(p.text.find("[Output Format (Json Schema)]") < p.text.find("[Input Data]"));
  for (const char* t : {"person", "location", "organization", "others"}) {
    CHECK(p.sections[1].content.find(t) != std::string::npos);
  }
  CHECK(p.text.find(kHeadline) != std::string::npos);
  CHECK(p.sections[2].content == json::serialize(ner.output_format_json()));
  CHECK(json::parse(p.sections[2].content) == ner.output_format_json());
}

TEST_CASE("translation prompt has three sections") {
  const auto p = prompt::package(load("translation_task.json"), "Guten Morgen");
  CHECK(labels(p) == std::vector<std::string>{"Task Description", "Output Format", "Input Data"});
  CHECK(p.text.find("[Label Architecture]") == std::string::npos);
}

TEST_CASE("topic labels and choice type") {
  const auto p = prompt::package(load("topic_task.json"), "Stocks fell.");
  const auto& arch = p.sections[1].content;
  for (const char* t : {"World", "Sports", "Business", "Sci/Tech"}) CHECK(arch.find(t) != std::string::npos);
  CHECK(arch.find(prompt::kSingleChoice) != std::string::npos);
}

TEST_CASE("packaging is deterministic and rejects blank input") {
  const auto ner = load("ner_task.json");
  CHECK(prompt::package(ner, kHeadline).text == prompt::package(ner, kHeadline).text);
  CHECK_THROWS_AS(prompt::package(ner, ""), prompt::EmptyInputError);
  CHECK_THROWS_AS(prompt::package(ner, " \n\t "), prompt::EmptyInputError);
}

TEST_CASE("different inputs differ only inside the input section") {
  const auto ner = load("ner_task.json");
  util::Rng rng(5);
  const std::vector<std::string> inputs = {"a", "b", kHeadline, "{\"json\": [1]}", "[Input Data]\nfake", "{input}"};
  for (const auto& x : inputs) {
    for (const auto& y : inputs) {
      const auto px = prompt::package(ner, x);
      const auto py = prompt::package(ner, y);
      CHECK((px.text == py.text) == (x == y));
      for (std::size_t i = 0; i + 1 < px.sections.size(); ++i) CHECK(px.sections[i] == py.sections[i]);
      const auto begin = px.text.find(prompt::kInputBegin);
      CHECK(px.text.substr(0, begin) == py.text.substr(0, py.text.find(prompt::kInputBegin)));
      CHECK(px.text.substr(begin + std::string(prompt::kInputBegin).size() + 1, x.size()) == x);
    }
  }
}

TEST_CASE("pretty output format re-parses to the same schema") {
  const auto ner = load("ner_task.json");
  prompt::PackageOptions opts;
  opts.pretty_output_format = true;
  const auto p = prompt::package(ner, kHeadline, opts);
  CHECK(p.sections[2].content.find('\n') != std::string::npos);
  CHECK(json::parse(p.sections[2].content) == ner.output_format_json());
}

TEST_CASE("template override") {
  const auto ner = load("ner_task.json");
  prompt::PackageOptions opts;
  opts.template_text = "T={taskDesc}|L={labelArchitecture}|F={outputFormat}|I={input}|{unknown}";
  const auto p = prompt::package(ner, "x {input} y", opts);
  CHECK(p.text.rfind("T=Extract named entities from the text provided.|L=Entity types:", 0) == 0);
  CHECK(p.text.find("|F=" + json::serialize(ner.output_format_json()) + "|") != std::string::npos);
  CHECK(p.text.find("|I=x {input} y|{unknown}") != std::string::npos);
}
