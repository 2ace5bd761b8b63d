#include "sketch/task/instance.hpp"

#include "sketch/json/text.hpp"
#include "sketch/util/file.hpp"

namespace sketch::task {

std::string TaskInstance::task_desc() const {
  const json::Value* v = fields_.get("taskDesc");
  return v != nullptr && v->is_string() ? v->as_string() : std::string();
}

TaskInstance instantiate(const Catalog& catalog, std::string_view schema_name, json::Value fields) {
  const TaskSchema& schema = catalog.get(schema_name);
  auto report = json::validate(fields, schema.spec);
  if (!report.valid()) throw InstanceInvalidError(std::move(report));

  TaskInstance instance;
  try {
    instance.output_format_ = json::parse_schema(*fields.get("outputFormat"));
  } catch (const SchemaError& e) {
    throw BadOutputFormatError(std::string("outputFormat is not a usable JSON schema: ") + e.what());
  }
  instance.schema_name_ = schema.name;
  instance.fields_ = std::move(fields);
  return instance;
}

json::Value instance_to_json(const TaskInstance& instance) {
  json::Object o;
  o.set("schemaName", json::Value(instance.schema_name()));
  o.set("fields", instance.fields());
  return json::Value(std::move(o));
}

TaskInstance instance_from_json(const Catalog& catalog, const json::Value& doc) {
  const json::Value* name = doc.get("schemaName");
  const json::Value* fields = doc.get("fields");
  if (name == nullptr || !name->is_string() || fields == nullptr) {
    throw SchemaError("task instance file needs \"schemaName\" and \"fields\" members");
  }
  return instantiate(catalog, name->as_string(), *fields);
}

TaskInstance load_instance(const Catalog& catalog, const std::filesystem::path& path) {
  return instance_from_json(catalog, json::parse(util::read_file(path)));
}

void save_instance(const TaskInstance& instance, const std::filesystem::path& path) {
  util::write_file(path, json::serialize_pretty(instance_to_json(instance)) + "\n");
}

}  // namespace sketch::task
