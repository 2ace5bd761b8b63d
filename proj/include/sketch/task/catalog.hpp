#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sketch/errors.hpp"
#include "sketch/json/schema.hpp"
#include "sketch/json/value.hpp"

namespace sketch::task {

enum class Category { TextClassification, TextGeneration, InformationExtraction };

const char* category_name(Category c);
std::optional<Category> category_from_name(std::string_view name);

class UnknownSchemaError : public Error {
 public:
  explicit UnknownSchemaError(const std::string& name)
      : Error("unknown task schema \"" + name + "\""), name_(name) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// A task kind: the JSON Schema that every task instance of this kind must satisfy.
struct TaskSchema {
  std::string name;
  Category category = Category::TextClassification;
  std::vector<std::string> aliases;
  json::Value spec_json;
  json::SchemaDoc spec;

  const std::vector<std::string>& required_fields() const { return spec.required; }
};

/// Builds a TaskSchema from its catalog document
/// `{"name": ..., "category": ..., "aliases": [...], "spec": {...}}`.
/// Throws SchemaError when the document is malformed or the spec breaks a catalog invariant.
TaskSchema task_schema_from_json(const json::Value& doc);
json::Value task_schema_to_json(const TaskSchema& schema);

class Catalog {
 public:
  /// The embedded schemas (13 task kinds across three categories).
  static const Catalog& builtin();

  /// Builtin catalog overlaid with every *.json file in `dir`; a file whose name
  /// matches a builtin schema replaces it.
  static Catalog with_overrides(const std::filesystem::path& dir);

  const std::vector<TaskSchema>& schemas() const { return schemas_; }

  /// Lookup by canonical name or alias.
  const TaskSchema* find(std::string_view name) const;
  /// Like find() but throws UnknownSchemaError.
  const TaskSchema& get(std::string_view name) const;

  void put(TaskSchema schema);

 private:
  std::vector<TaskSchema> schemas_;
};

}  // namespace sketch::task
