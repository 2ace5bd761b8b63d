#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sketch/json/value.hpp"

namespace sketch::json {

enum class SchemaKind { Any, Object, Array, String, Number, Integer, Boolean, Null, EnumOnly };

const char* schema_kind_name(SchemaKind kind);

struct SchemaDoc;

struct SchemaProperty {
  std::string name;
  std::shared_ptr<const SchemaDoc> schema;
};

/// AST of the supported JSON Schema subset: type, properties, required, items,
/// enum, description, minItems, maxItems. Anything else that affects validation
/// is recorded in `unsupported_keywords` of the node where it appeared.
struct SchemaDoc {
  SchemaKind kind = SchemaKind::Any;
  std::vector<SchemaProperty> properties;  // declaration order
  std::vector<std::string> required;
  std::shared_ptr<const SchemaDoc> items;
  std::optional<std::vector<Value>> enum_values;
  std::optional<std::string> description;
  std::optional<std::uint64_t> min_items;
  std::optional<std::uint64_t> max_items;
  std::vector<std::string> unsupported_keywords;

  const SchemaDoc* property(std::string_view name) const;
  bool is_required(std::string_view name) const;
};

/// Builds the AST. Throws SchemaError when structural invariants fail.
SchemaDoc parse_schema(const Value& value);

/// Inverse of parse_schema for the supported subset (unsupported keywords are dropped).
Value schema_to_json(const SchemaDoc& schema);

/// Every unsupported keyword in the tree, qualified with its location ("$.properties.a:pattern").
std::vector<std::string> collect_unsupported(const SchemaDoc& schema);

/// Structural hash (SHA-256 hex of the canonical JSON form).
std::string schema_hash(const SchemaDoc& schema);

/// Nesting depth with a leaf counting as 1.
int schema_depth(const SchemaDoc& schema);

}  // namespace sketch::json
