#include "sketch/json/schema.hpp"

#include <algorithm>
#include <array>
#include <string_view>

#include "sketch/errors.hpp"
#include "sketch/json/text.hpp"
#include "sketch/util/hash.hpp"

namespace sketch::json {

namespace {

// Keywords that never influence validation.
constexpr std::array<std::string_view, 6> kAnnotations = {"title",    "$schema", "$id",
                                                           "$comment", "default", "examples"};

std::optional<SchemaKind> kind_from_type(std::string_view type) {
  if (type == "object") return SchemaKind::Object;
  if (type == "array") return SchemaKind::Array;
  if (type == "string") return SchemaKind::String;
  if (type == "number") return SchemaKind::Number;
  if (type == "integer") return SchemaKind::Integer;
  if (type == "boolean") return SchemaKind::Boolean;
  if (type == "null") return SchemaKind::Null;
  return std::nullopt;
}

std::uint64_t count_keyword(const Value& v, const char* keyword, const std::string& path) {
  if (v.is_number()) {
    const auto& n = v.as_number();
    auto i = n.as_int64();
    if (i && *i >= 0) return static_cast<std::uint64_t>(*i);
  }
  throw SchemaError(path + ": " + keyword + " must be a non-negative integer");
}

SchemaDoc parse_node(const Value& value, const std::string& path) {
  if (!value.is_object()) throw SchemaError(path + ": schema must be an object");
  SchemaDoc doc;
  std::optional<SchemaKind> declared;
  for (const auto& [key, v] : value.as_object()) {
    if (key == "type") {
      if (v.is_string()) {
        declared = kind_from_type(v.as_string());
        if (!declared) throw SchemaError(path + ": unknown type \"" + v.as_string() + "\"");
      } else if (v.is_array()) {
        doc.unsupported_keywords.push_back("type");
      } else {
        throw SchemaError(path + ": type must be a string");
      }
    } else if (key == "properties") {
      if (!v.is_object()) throw SchemaError(path + ": properties must be an object");
      for (const auto& [name, sub] : v.as_object()) {
        doc.properties.push_back(
            {name, std::make_shared<const SchemaDoc>(parse_node(sub, path + ".properties." + name))});
      }
    } else if (key == "required") {
      if (!v.is_array()) throw SchemaError(path + ": required must be an array");
      for (const auto& r : v.as_array()) {
        if (!r.is_string()) throw SchemaError(path + ": required entries must be strings");
        if (std::find(doc.required.begin(), doc.required.end(), r.as_string()) != doc.required.end()) {
          throw SchemaError(path + ": duplicate required entry \"" + r.as_string() + "\"");
        }
        doc.required.push_back(r.as_string());
      }
    } else if (key == "items") {
      if (v.is_object()) {
        doc.items = std::make_shared<const SchemaDoc>(parse_node(v, path + ".items"));
      } else {
        doc.unsupported_keywords.push_back("items");
      }
    } else if (key == "enum") {
      if (!v.is_array() || v.as_array().empty()) {
        throw SchemaError(path + ": enum must be a non-empty array");
      }
      const auto& members = v.as_array();
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          if (semantically_equal(members[i], members[j])) {
            throw SchemaError(path + ": enum members must be distinct");
          }
        }
      }
      doc.enum_values = members;
    } else if (key == "description") {
      if (!v.is_string()) throw SchemaError(path + ": description must be a string");
      doc.description = v.as_string();
    } else if (key == "minItems") {
      doc.min_items = count_keyword(v, "minItems", path);
    } else if (key == "maxItems") {
      doc.max_items = count_keyword(v, "maxItems", path);
    } else if (std::find(kAnnotations.begin(), kAnnotations.end(), key) == kAnnotations.end()) {
      doc.unsupported_keywords.push_back(key);
    }
  }

  if (declared) {
    doc.kind = *declared;
  } else if (doc.enum_values) {
    doc.kind = SchemaKind::EnumOnly;
  }

  for (const auto& r : doc.required) {
    if (doc.property(r) == nullptr) {
      throw SchemaError(path + ": required member \"" + r + "\" is not declared in properties");
    }
  }
  if (doc.min_items && doc.max_items && *doc.min_items > *doc.max_items) {
    throw SchemaError(path + ": minItems exceeds maxItems");
  }
  return doc;
}

void collect(const SchemaDoc& s, const std::string& path, std::vector<std::string>& out) {
  for (const auto& k : s.unsupported_keywords) out.push_back(path + ":" + k);
  for (const auto& p : s.properties) collect(*p.schema, path + ".properties." + p.name, out);
  if (s.items) collect(*s.items, path + ".items", out);
}

}  // namespace

const char* schema_kind_name(SchemaKind kind) {
  switch (kind) {
    case SchemaKind::Any: return "any";
    case SchemaKind::Object: return "object";
    case SchemaKind::Array: return "array";
    case SchemaKind::String: return "string";
    case SchemaKind::Number: return "number";
    case SchemaKind::Integer: return "integer";
    case SchemaKind::Boolean: return "boolean";
    case SchemaKind::Null: return "null";
    case SchemaKind::EnumOnly: return "enum";
  }
  return "?";
}

const SchemaDoc* SchemaDoc::property(std::string_view name) const {
  for (const auto& p : properties) {
    if (p.name == name) return p.schema.get();
  }
  return nullptr;
}

bool SchemaDoc::is_required(std::string_view name) const {
  return std::find(required.begin(), required.end(), name) != required.end();
}

SchemaDoc parse_schema(const Value& value) { return parse_node(value, "$"); }

Value schema_to_json(const SchemaDoc& s) {
  Object o;
  if (s.kind != SchemaKind::Any && s.kind != SchemaKind::EnumOnly) {
    o.set("type", Value(schema_kind_name(s.kind)));
  }
  if (s.description) o.set("description", Value(*s.description));
  if (!s.properties.empty()) {
    Object props;
    for (const auto& p : s.properties) props.set(p.name, schema_to_json(*p.schema));
    o.set("properties", Value(std::move(props)));
  }
  if (!s.required.empty()) {
    Array req;
    for (const auto& r : s.required) req.emplace_back(r);
    o.set("required", Value(std::move(req)));
  }
  if (s.items) o.set("items", schema_to_json(*s.items));
  if (s.enum_values) o.set("enum", Value(*s.enum_values));
  if (s.min_items) o.set("minItems", Value(static_cast<std::int64_t>(*s.min_items)));
  if (s.max_items) o.set("maxItems", Value(static_cast<std::int64_t>(*s.max_items)));
  return Value(std::move(o));
}

std::vector<std::string> collect_unsupported(const SchemaDoc& schema) {
  std::vector<std::string> out;
  collect(schema, "$", out);
  return out;
}

std::string schema_hash(const SchemaDoc& schema) {
  return util::sha256_hex(serialize(schema_to_json(schema)));
}

int schema_depth(const SchemaDoc& s) {
  int child = 0;
  for (const auto& p : s.properties) child = std::max(child, schema_depth(*p.schema));
  if (s.items) child = std::max(child, schema_depth(*s.items));
  return 1 + child;
}

}  // namespace sketch::json
