#pragma once

#include <filesystem>
#include <string>

#include "sketch/errors.hpp"
#include "sketch/json/schema.hpp"
#include "sketch/json/validate.hpp"
#include "sketch/json/value.hpp"
#include "sketch/task/catalog.hpp"

namespace sketch::task {

class InstanceInvalidError : public Error {
 public:
  explicit InstanceInvalidError(json::ValidationReport report)
      : Error("task instance is invalid:\n" + json::format_report(report)), report_(std::move(report)) {}

  const json::ValidationReport& report() const { return report_; }

 private:
  json::ValidationReport report_;
};

class BadOutputFormatError : public Error {
 public:
  using Error::Error;
};

/// A validated task description. Construct through instantiate().
class TaskInstance {
 public:
  const std::string& schema_name() const { return schema_name_; }
  const json::Value& fields() const { return fields_; }
  const json::SchemaDoc& output_format() const { return output_format_; }
  const json::Value& output_format_json() const { return *fields_.get("outputFormat"); }
  std::string task_desc() const;

  friend bool operator==(const TaskInstance& a, const TaskInstance& b) {
    return a.schema_name_ == b.schema_name_ && a.fields_ == b.fields_;
  }

 private:
  friend TaskInstance instantiate(const Catalog&, std::string_view, json::Value);

  std::string schema_name_;
  json::Value fields_;
  json::SchemaDoc output_format_;
};

/// Validates `fields` against the schema's spec and parses its outputFormat.
/// Throws UnknownSchemaError, InstanceInvalidError or BadOutputFormatError.
TaskInstance instantiate(const Catalog& catalog, std::string_view schema_name, json::Value fields);

/// File form: {"schemaName": "...", "fields": {...}}.
json::Value instance_to_json(const TaskInstance& instance);
TaskInstance instance_from_json(const Catalog& catalog, const json::Value& doc);

TaskInstance load_instance(const Catalog& catalog, const std::filesystem::path& path);
void save_instance(const TaskInstance& instance, const std::filesystem::path& path);

}  // namespace sketch::task
