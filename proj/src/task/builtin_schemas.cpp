#include "builtin_schemas.hpp"

namespace sketch::task::detail {

namespace {

// Classification kinds share the topic-classification shape.
constexpr const char* kClassificationSpec = R"({
  "type": "object",
  "properties": {
    "taskDesc": {"type": "string"},
    "labelSet": {
      "type": "array",
      "items": {
        "type": "object",
        "properties": {
          "tag": {"type": "string"},
          "description": {"type": "string"}
        },
        "required": ["tag"]
      }
    },
    "choiceType": {
      "type": "string",
      "enum": ["single", "multiple"]
    },
    "outputFormat": {"type": "object"}
  },
  "required": ["taskDesc", "labelSet", "choiceType", "outputFormat"]
})";

constexpr const char* kPlainGenerationSpec = R"({
  "type": "object",
  "properties": {
    "taskDesc": {"type": "string"},
    "outputFormat": {"type": "object"}
  },
  "required": ["taskDesc", "outputFormat"]
})";

constexpr const char* kTranslationSpec = R"({
  "type": "object",
  "properties": {
    "taskDesc": {"type": "string"},
    "sourceLang": {"type": "string"},
    "targetLang": {"type": "string"},
    "outputFormat": {"type": "object"}
  },
  "required": ["taskDesc", "outputFormat"]
})";

// Extraction kinds with a typed list; `%LIST%` is replaced by the list field name.
constexpr const char* kTypedExtractionSpec = R"({
  "type": "object",
  "properties": {
    "taskDesc": {"type": "string"},
    "%LIST%": {
      "type": "array",
      "items": {
        "type": "object",
        "properties": {
          "name": {"type": "string"},
          "description": {"type": "string"}
        },
        "required": ["name"]
      }
    },
    "outputFormat": {"type": "object"}
  },
  "required": ["taskDesc", "%LIST%", "outputFormat"]
})";

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

BuiltinSchema typed(const char* name, std::vector<std::string> aliases, const char* list_field) {
  return {name, "information_extraction", std::move(aliases),
          replace_all(kTypedExtractionSpec, "%LIST%", list_field)};
}

}  // namespace

const std::vector<BuiltinSchema>& builtin_schemas() {
  static const std::vector<BuiltinSchema> schemas = {
      {"topic_classification", "text_classification", {"cls", "topic"}, kClassificationSpec},
      {"sentiment_analysis", "text_classification", {"sa", "sentiment"}, kClassificationSpec},
      {"sentence_similarity", "text_classification", {"similarity"}, kClassificationSpec},
      {"intent_recognition", "text_classification", {"intent"}, kClassificationSpec},
      {"natural_language_inference", "text_classification", {"nli"}, kClassificationSpec},
      {"summarization", "text_generation", {}, kPlainGenerationSpec},
      {"dialog", "text_generation", {}, kPlainGenerationSpec},
      {"translation", "text_generation", {"mt"}, kTranslationSpec},
      typed("relation_extraction", {"re"}, "relationTypes"),
      typed("named_entity_recognition", {"ner"}, "entityTypes"),
      {"keyword_extraction", "information_extraction", {"keywords"}, kPlainGenerationSpec},
      typed("event_extraction", {"ee"}, "eventTypes"),
      typed("aspect_level_sentiment_analysis", {"asa", "absa"}, "sentimentTypes"),
  };
  return schemas;
}

}  // namespace sketch::task::detail
