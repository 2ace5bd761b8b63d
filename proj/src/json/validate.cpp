#include "sketch/json/validate.hpp"

#include "sketch/errors.hpp"
#include "sketch/json/text.hpp"

namespace sketch::json {

namespace {

bool kind_matches(const Value& v, SchemaKind kind) {
  switch (kind) {
    case SchemaKind::Any:
    case SchemaKind::EnumOnly: return true;
    case SchemaKind::Object: return v.is_object();
    case SchemaKind::Array: return v.is_array();
    case SchemaKind::String: return v.is_string();
    case SchemaKind::Number: return v.is_number();
    case SchemaKind::Integer: return v.is_number() && v.as_number().is_integer();
    case SchemaKind::Boolean: return v.is_bool();
    case SchemaKind::Null: return v.is_null();
  }
  return false;
}

class Validator {
 public:
  explicit Validator(ValidationReport& report) : report_(report) {}

  void check(const Value& v, const SchemaDoc& s, const std::string& path) {
    if (!kind_matches(v, s.kind)) {
      add(path, "type",
          std::string("expected ") + schema_kind_name(s.kind) + ", got " + kind_name(v.kind()));
      return;
    }
    if (s.enum_values) {
      bool found = false;
      for (const auto& member : *s.enum_values) {
        if (semantically_equal(v, member)) {
          found = true;
          break;
        }
      }
      if (!found) add(path, "enum", serialize(v) + " is not one of " + serialize(Value(*s.enum_values)));
    }
    if (v.is_object() && (s.kind == SchemaKind::Object || s.kind == SchemaKind::Any)) {
      const auto& obj = v.as_object();
      for (const auto& r : s.required) {
        if (!obj.contains(r)) add(path, "required", "missing required member \"" + r + "\"");
      }
      for (const auto& p : s.properties) {
        if (const Value* member = obj.find(p.name)) check(*member, *p.schema, path + "." + p.name);
      }
    }
    if (v.is_array() && (s.kind == SchemaKind::Array || s.kind == SchemaKind::Any)) {
      const auto& arr = v.as_array();
      if (s.min_items && arr.size() < *s.min_items) {
        add(path, "minItems",
            "has " + std::to_string(arr.size()) + " items, fewer than " + std::to_string(*s.min_items));
      }
      if (s.max_items && arr.size() > *s.max_items) {
        add(path, "maxItems",
            "has " + std::to_string(arr.size()) + " items, more than " + std::to_string(*s.max_items));
      }
      if (s.items) {
        for (std::size_t i = 0; i < arr.size(); ++i) {
          check(arr[i], *s.items, path + "[" + std::to_string(i) + "]");
        }
      }
    }
  }

 private:
  void add(const std::string& path, const char* keyword, std::string message) {
    report_.violations.push_back({path, keyword, std::move(message)});
  }

  ValidationReport& report_;
};

}  // namespace

ValidationReport validate(const Value& value, const SchemaDoc& schema, ValidateOptions options) {
  if (!options.lenient) {
    auto unsupported = collect_unsupported(schema);
    if (!unsupported.empty()) throw UnsupportedSchemaError(std::move(unsupported));
  }
  ValidationReport report;
  Validator(report).check(value, schema, "$");
  return report;
}

std::string format_report(const ValidationReport& report) {
  std::string out;
  for (const auto& v : report.violations) {
    out += v.path + ": " + v.keyword + ": " + v.message + "\n";
  }
  return out;
}

}  // namespace sketch::json
