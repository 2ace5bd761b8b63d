#include "sketch/task/catalog.hpp"

#include <algorithm>

#include "builtin_schemas.hpp"
#include "sketch/json/text.hpp"
#include "sketch/util/file.hpp"

namespace sketch::task {

const char* category_name(Category c) {
  switch (c) {
    case Category::TextClassification: return "text_classification";
    case Category::TextGeneration: return "text_generation";
    case Category::InformationExtraction: return "information_extraction";
  }
  return "?";
}

std::optional<Category> category_from_name(std::string_view name) {
  if (name == "text_classification") return Category::TextClassification;
  if (name == "text_generation") return Category::TextGeneration;
  if (name == "information_extraction") return Category::InformationExtraction;
  return std::nullopt;
}

TaskSchema task_schema_from_json(const json::Value& doc) {
  const json::Value* name = doc.get("name");
  const json::Value* category = doc.get("category");
  const json::Value* spec = doc.get("spec");
  if (name == nullptr || !name->is_string() || name->as_string().empty()) {
    throw SchemaError("task schema document needs a non-empty \"name\"");
  }
  if (category == nullptr || !category->is_string() || !category_from_name(category->as_string())) {
    throw SchemaError("task schema \"" + name->as_string() + "\" has no valid \"category\"");
  }
  if (spec == nullptr) throw SchemaError("task schema \"" + name->as_string() + "\" has no \"spec\"");

  TaskSchema out;
  out.name = name->as_string();
  out.category = *category_from_name(category->as_string());
  if (const json::Value* aliases = doc.get("aliases")) {
    if (!aliases->is_array()) throw SchemaError("aliases must be an array of strings");
    for (const auto& a : aliases->as_array()) {
      if (!a.is_string()) throw SchemaError("aliases must be an array of strings");
      out.aliases.push_back(a.as_string());
    }
  }
  out.spec_json = *spec;
  out.spec = json::parse_schema(*spec);

  const auto unsupported = json::collect_unsupported(out.spec);
  if (!unsupported.empty()) throw UnsupportedSchemaError(unsupported);
  if (out.spec.kind != json::SchemaKind::Object) {
    throw SchemaError("task schema \"" + out.name + "\" spec must describe an object");
  }
  for (const char* field : {"taskDesc", "outputFormat"}) {
    if (!out.spec.is_required(field)) {
      throw SchemaError("task schema \"" + out.name + "\" must require " + field);
    }
  }
  return out;
}

json::Value task_schema_to_json(const TaskSchema& schema) {
  json::Object o;
  o.set("name", json::Value(schema.name));
  o.set("category", json::Value(category_name(schema.category)));
  json::Array aliases;
  for (const auto& a : schema.aliases) aliases.emplace_back(a);
  o.set("aliases", json::Value(std::move(aliases)));
  o.set("spec", schema.spec_json);
  return json::Value(std::move(o));
}

const Catalog& Catalog::builtin() {
  static const Catalog catalog = [] {
    Catalog c;
    for (const auto& b : detail::builtin_schemas()) {
      json::Object doc;
      doc.set("name", json::Value(b.name));
      doc.set("category", json::Value(b.category));
      json::Array aliases;
      for (const auto& a : b.aliases) aliases.emplace_back(a);
      doc.set("aliases", json::Value(std::move(aliases)));
      doc.set("spec", json::parse(b.spec));
      c.put(task_schema_from_json(json::Value(std::move(doc))));
    }
    return c;
  }();
  return catalog;
}

Catalog Catalog::with_overrides(const std::filesystem::path& dir) {
  Catalog c = builtin();
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("schema directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) c.put(task_schema_from_json(json::parse(util::read_file(f))));
  return c;
}

const TaskSchema* Catalog::find(std::string_view name) const {
  for (const auto& s : schemas_) {
    if (s.name == name) return &s;
  }
  for (const auto& s : schemas_) {
    if (std::find(s.aliases.begin(), s.aliases.end(), name) != s.aliases.end()) return &s;
  }
  return nullptr;
}

const TaskSchema& Catalog::get(std::string_view name) const {
  if (const TaskSchema* s = find(name)) return *s;
  throw UnknownSchemaError(std::string(name));
}

void Catalog::put(TaskSchema schema) {
  for (auto& s : schemas_) {
    if (s.name == schema.name) {
      s = std::move(schema);
      return;
    }
  }
  schemas_.push_back(std::move(schema));
}

}  // namespace sketch::task
