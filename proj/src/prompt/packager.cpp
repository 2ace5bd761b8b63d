#include "sketch/prompt/packager.hpp"

#include <array>
#include <utility>

#include "sketch/json/text.hpp"
#include "sketch/prompt/template.hpp"

namespace sketch::prompt {

namespace {

struct ListField {
  const char* field;
  const char* heading;
  const char* key;
};

constexpr std::array<ListField, 5> kListFields = {{
    {"labelSet", "Labels:", "tag"},
    {"entityTypes", "Entity types:", "name"},
    {"relationTypes", "Relation types:", "name"},
    {"eventTypes", "Event types:", "name"},
    {"sentimentTypes", "Sentiment types:", "name"},
}};

bool is_blank(std::string_view s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' && c != '\v') return false;
  }
  return true;
}

std::string task_description(const task::TaskInstance& instance) {
  std::string out = instance.task_desc();
  const json::Value& fields = instance.fields();
  for (auto [key, label] : {std::pair{"sourceLang", "Source language: "},
                            std::pair{"targetLang", "Target language: "}}) {
    const json::Value* v = fields.get(key);
    if (v != nullptr && v->is_string()) out += std::string("\n") + label + v->as_string();
  }
  return out;
}

std::string render_output_format(const task::TaskInstance& instance, bool pretty) {
  const json::Value& schema = instance.output_format_json();
  return pretty ? json::serialize_pretty(schema) : json::serialize(schema);
}

// Single-pass substitution so placeholder-like text inside the values stays literal.
std::string substitute(std::string_view tmpl, const std::vector<std::pair<std::string, std::string>>& vars) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    bool replaced = false;
    if (tmpl[i] == '{') {
      for (const auto& [name, value] : vars) {
        const std::string token = "{" + name + "}";
        if (tmpl.substr(i, token.size()) == token) {
          out += value;
          i += token.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out.push_back(tmpl[i++]);
  }
  return out;
}

}  // namespace

std::string label_architecture(const task::TaskInstance& instance) {
  const json::Value& fields = instance.fields();
  std::string out;
  for (const auto& lf : kListFields) {
    const json::Value* list = fields.get(lf.field);
    if (list == nullptr || !list->is_array()) continue;
    if (!out.empty()) out += "\n";
    out += lf.heading;
    for (const auto& item : list->as_array()) {
      const json::Value* name = item.get(lf.key);
      if (name == nullptr || !name->is_string()) continue;
      out += "\n- " + name->as_string();
      const json::Value* desc = item.get("description");
      if (desc != nullptr && desc->is_string() && !desc->as_string().empty()) {
        out += ": " + desc->as_string();
      }
    }
  }
  if (const json::Value* choice = fields.get("choiceType"); choice != nullptr && choice->is_string()) {
    if (!out.empty()) out += "\n";
    out += choice->as_string() == "multiple" ? kMultipleChoice : kSingleChoice;
  }
  return out;
}

PackagedPrompt package(const task::TaskInstance& instance, std::string_view input,
                       const PackageOptions& options) {
  if (is_blank(input)) throw EmptyInputError();

  PackagedPrompt p;
  p.sections.push_back({"Task Description", task_description(instance)});
  if (std::string labels = label_architecture(instance); !labels.empty()) {
    p.sections.push_back({"Label Architecture", std::move(labels)});
  }
  p.sections.push_back({"Output Format", render_output_format(instance, options.pretty_output_format)});
  p.sections.push_back({"Input Data", std::string(input)});

  if (options.template_text) {
    std::string labels;
    std::string format;
    for (const auto& s : p.sections) {
      if (s.label == "Label Architecture") labels = s.content;
      if (s.label == "Output Format") format = s.content;
    }
    p.text = substitute(*options.template_text, {{"taskDesc", p.sections.front().content},
                                                  {"labelArchitecture", labels},
                                                  {"outputFormat", format},
                                                  {"input", std::string(input)}});
    return p;
  }

  for (const auto& s : p.sections) {
    if (s.label == "Task Description") {
      p.text += std::string(kTaskDescriptionHeader) + "\n" + s.content + "\n\n";
    } else if (s.label == "Label Architecture") {
      p.text += std::string(kLabelArchitectureHeader) + "\n" + s.content + "\n\n";
    } else if (s.label == "Output Format") {
      p.text += std::string(kOutputFormatHeader) + "\n" + s.content + "\n" + kOutputInstruction + "\n\n";
    } else {
      p.text += std::string(kInputDataHeader) + "\n" + kInputBegin + "\n" + s.content + "\n" + kInputEnd + "\n";
    }
  }
  return p;
}

}  // namespace sketch::prompt
